use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::count_zero_crossings;

/// Interior local extrema and the zero-crossing count of a series.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ExtremaSet {
    pub maxima: Vec<(usize, f64)>,
    pub minima: Vec<(usize, f64)>,
    pub zero_crossings: usize,
}

impl ExtremaSet {
    pub fn extrema_count(&self) -> usize {
        self.maxima.len() + self.minima.len()
    }

    /// At least two maxima and two minima, enough for both envelopes.
    pub fn can_sift(&self) -> bool {
        self.maxima.len() >= 2 && self.minima.len() >= 2
    }
}

/// Locates interior extrema. A flat run strictly above (below) both flanks
/// counts once, at the floor of its midpoint.
pub fn find_extrema(values: &[f64]) -> Result<ExtremaSet> {
    let n = values.len();
    if n < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: n,
        });
    }
    let mut set = ExtremaSet {
        zero_crossings: count_zero_crossings(values),
        ..Default::default()
    };
    let mut i = 1;
    while i < n - 1 {
        if values[i] == values[i - 1] {
            i += 1;
            continue;
        }
        let mut end = i;
        while end + 1 < n && values[end + 1] == values[i] {
            end += 1;
        }
        if end == n - 1 {
            break;
        }
        let (left, here, right) = (values[i - 1], values[i], values[end + 1]);
        let mid = (i + end) / 2;
        if here > left && here > right {
            set.maxima.push((mid, here));
        } else if here < left && here < right {
            set.minima.push((mid, here));
        }
        i = end + 1;
    }
    Ok(set)
}

/// Whether extrema and zero-crossing counts differ by at most one.
pub fn is_imf(values: &[f64]) -> bool {
    match find_extrema(values) {
        Ok(ext) => ext.extrema_count().abs_diff(ext.zero_crossings) <= 1,
        Err(_) => false,
    }
}
