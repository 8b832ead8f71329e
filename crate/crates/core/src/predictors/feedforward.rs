//! Single-hidden-layer networks: sigmoid (BPNN) or Morlet wavelet (WNN).

use std::ops::Range;

/// Offsets into the flat weight vector.
pub(super) struct Layout {
    inputs: usize,
    hidden: usize,
    wavelet: bool,
}

impl Layout {
    pub(super) fn new(inputs: usize, hidden: usize, wavelet: bool) -> Self {
        Layout {
            inputs,
            hidden,
            wavelet,
        }
    }

    fn bias(&self) -> usize {
        self.hidden * self.inputs
    }

    /// WNN only.
    fn dilation(&self) -> usize {
        self.bias() + self.hidden
    }

    fn output(&self) -> usize {
        self.bias() + if self.wavelet { 2 } else { 1 } * self.hidden
    }

    fn output_bias(&self) -> usize {
        self.output() + self.hidden
    }

    pub(super) fn len(&self) -> usize {
        self.output_bias() + 1
    }

    pub(super) fn dilation_range(&self) -> Range<usize> {
        self.dilation()..self.dilation() + self.hidden
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Morlet mother wavelet `cos(1.75u) exp(-u²/2)` and its derivative.
fn morlet(u: f64) -> (f64, f64) {
    let g = (-0.5 * u * u).exp();
    let (s, c) = (1.75 * u).sin_cos();
    (c * g, -(1.75 * s + u * c) * g)
}

struct Hidden {
    /// Activation.
    h: f64,
    /// d activation / d pre-activation.
    dh: f64,
    /// Wavelet argument (WNN) or unused.
    u: f64,
}

fn hidden_unit(layout: &Layout, w: &[f64], x: &[f64], j: usize) -> Hidden {
    let row = &w[j * layout.inputs..(j + 1) * layout.inputs];
    let z: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
    if layout.wavelet {
        let shift = w[layout.bias() + j];
        let dilation = w[layout.dilation() + j];
        let u = (z - shift) / dilation;
        let (h, dh) = morlet(u);
        Hidden { h, dh, u }
    } else {
        let h = sigmoid(z + w[layout.bias() + j]);
        Hidden {
            h,
            dh: h * (1.0 - h),
            u: 0.0,
        }
    }
}

pub(super) fn forward(layout: &Layout, w: &[f64], x: &[f64]) -> f64 {
    let mut y = w[layout.output_bias()];
    for j in 0..layout.hidden {
        y += w[layout.output() + j] * hidden_unit(layout, w, x, j).h;
    }
    y
}

/// Mean squared error over the pairs and its gradient.
pub(super) fn loss_and_gradient(layout: &Layout, w: &[f64], inputs: &[Vec<f64>], targets: &[f64]) -> (f64, Vec<f64>) {
    let n = targets.len() as f64;
    let mut grad = vec![0.0; layout.len()];
    let mut loss = 0.0;
    let mut units = Vec::with_capacity(layout.hidden);
    for (x, &t) in inputs.iter().zip(targets) {
        units.clear();
        units.extend((0..layout.hidden).map(|j| hidden_unit(layout, w, x, j)));
        let y = w[layout.output_bias()]
            + units
                .iter()
                .enumerate()
                .map(|(j, u)| w[layout.output() + j] * u.h)
                .sum::<f64>();
        let err = y - t;
        loss += err * err / n;
        let e = 2.0 * err / n;
        grad[layout.output_bias()] += e;
        for (j, unit) in units.iter().enumerate() {
            grad[layout.output() + j] += e * unit.h;
            let dz = e * w[layout.output() + j] * unit.dh;
            if layout.wavelet {
                let dilation = w[layout.dilation() + j];
                // u = (z - shift) / dilation
                let du = dz / dilation;
                grad[layout.bias() + j] -= du;
                grad[layout.dilation() + j] -= du * unit.u;
                for (i, xi) in x.iter().enumerate() {
                    grad[j * layout.inputs + i] += du * xi;
                }
            } else {
                grad[layout.bias() + j] += dz;
                for (i, xi) in x.iter().enumerate() {
                    grad[j * layout.inputs + i] += dz * xi;
                }
            }
        }
    }
    (loss, grad)
}
