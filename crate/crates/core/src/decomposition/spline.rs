use crate::error::{Error, Result};

use super::BoundaryMode;

/// Natural cubic spline (zero second derivative at both ends).
#[derive(Debug, Clone)]
pub struct NaturalSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
}

impl NaturalSpline {
    /// `xs` must be strictly increasing and hold at least two knots.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::InvalidParameter(format!(
                "spline needs at least 2 knots with matching values, got {n} and {}",
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("spline knots must be strictly increasing".into()));
        }
        let mut second = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior second derivatives.
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for k in 0..m {
                let i = k + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[k] = 2.0 * (h0 + h1);
                upper[k] = h1;
                rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for k in 1..m {
                let lower = xs[k + 1] - xs[k];
                let w = lower / diag[k - 1];
                diag[k] -= w * upper[k - 1];
                rhs[k] -= w * rhs[k - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for k in (0..m - 1).rev() {
                second[k + 1] = (rhs[k] - upper[k] * second[k + 2]) / diag[k];
            }
        }
        Ok(NaturalSpline { xs, ys, second })
    }

    fn eval_in(&self, seg: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[seg], self.xs[seg + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        a * self.ys[seg]
            + b * self.ys[seg + 1]
            + ((a * a * a - a) * self.second[seg] + (b * b * b - b) * self.second[seg + 1]) * h * h / 6.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.xs.len() - 2;
        let seg = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p => (p - 1).min(last),
        };
        self.eval_in(seg, x)
    }

    /// Evaluates at `0, 1, ..., len - 1`.
    pub fn sample(&self, len: usize) -> Vec<f64> {
        let last = self.xs.len() - 2;
        let mut seg = 0;
        (0..len)
            .map(|t| {
                let x = t as f64;
                while seg < last && x > self.xs[seg + 1] {
                    seg += 1;
                }
                self.eval_in(seg, x)
            })
            .collect()
    }
}

/// Spline envelope through `knots` (index, value), sampled at every index of
/// `series`.
pub fn envelope(series: &[f64], knots: &[(usize, f64)], mode: BoundaryMode) -> Result<Vec<f64>> {
    if knots.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "envelope needs at least 2 knots, got {}",
            knots.len()
        )));
    }
    let last = series.len() as f64 - 1.0;
    let mut pts: Vec<(f64, f64)> = knots.iter().map(|&(i, v)| (i as f64, v)).collect();
    match mode {
        BoundaryMode::Mirror => {
            let head: Vec<(f64, f64)> = pts.iter().take(2).map(|&(x, v)| (-x, v)).collect();
            let tail: Vec<(f64, f64)> = pts
                .iter()
                .rev()
                .take(2)
                .map(|&(x, v)| (2.0 * last - x, v))
                .collect();
            pts.extend(head);
            pts.extend(tail);
        }
        BoundaryMode::Clamp => {
            pts.push((0.0, series[0]));
            pts.push((last, series[series.len() - 1]));
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    // A knot already at an end would be duplicated by the reflection or pin;
    // keep the first occurrence, which is the original extremum.
    pts.dedup_by(|b, a| a.0 == b.0);
    let (xs, ys) = pts.into_iter().unzip();
    Ok(NaturalSpline::new(xs, ys)?.sample(series.len()))
}
