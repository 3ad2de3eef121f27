//! Sample summaries shared by the report tables.

/// Midpoint median; `None` for an empty slice. NaNs are not expected.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Standard deviation with the n-1 denominator; `None` below two values.
pub fn sample_std_dev(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}

/// Min / max / median / standard deviation of a set of values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptive {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub std_dev: Option<f64>,
}

impl Descriptive {
    pub fn of(values: &[f64]) -> Option<Self> {
        Some(Descriptive {
            n: values.len(),
            min: values.iter().copied().reduce(f64::min)?,
            max: values.iter().copied().reduce(f64::max)?,
            median: median(values)?,
            std_dev: sample_std_dev(values),
        })
    }
}
