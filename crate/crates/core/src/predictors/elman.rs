//! Elman network: `h_t = sigmoid(W x_t + U c_t + b)`, `c_t = h_{t-1}`,
//! `y_t = v · h_t + c`. Gradients treat the context as a constant input.

pub(super) struct Layout {
    inputs: usize,
    hidden: usize,
}

impl Layout {
    pub(super) fn new(inputs: usize, hidden: usize) -> Self {
        Layout { inputs, hidden }
    }

    fn recurrent(&self) -> usize {
        self.hidden * self.inputs
    }

    fn bias(&self) -> usize {
        self.recurrent() + self.hidden * self.hidden
    }

    fn output(&self) -> usize {
        self.bias() + self.hidden
    }

    fn output_bias(&self) -> usize {
        self.output() + self.hidden
    }

    pub(super) fn len(&self) -> usize {
        self.output_bias() + 1
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn hidden_state(layout: &Layout, w: &[f64], x: &[f64], context: &[f64]) -> Vec<f64> {
    (0..layout.hidden)
        .map(|j| {
            let wx: f64 = w[j * layout.inputs..(j + 1) * layout.inputs]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
            let uc: f64 = w[layout.recurrent() + j * layout.hidden..layout.recurrent() + (j + 1) * layout.hidden]
                .iter()
                .zip(context)
                .map(|(a, b)| a * b)
                .sum();
            sigmoid(wx + uc + w[layout.bias() + j])
        })
        .collect()
}

/// Output and new hidden state for one step.
pub(super) fn forward(layout: &Layout, w: &[f64], x: &[f64], context: &[f64]) -> (f64, Vec<f64>) {
    let h = hidden_state(layout, w, x, context);
    let y = w[layout.output_bias()]
        + h.iter()
            .enumerate()
            .map(|(j, hj)| w[layout.output() + j] * hj)
            .sum::<f64>();
    (y, h)
}

/// Context seen by each pair when the inputs are presented in order from a
/// zero state.
pub(super) fn contexts(layout: &Layout, w: &[f64], inputs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut context = vec![0.0; layout.hidden];
    inputs
        .iter()
        .map(|x| {
            let next = hidden_state(layout, w, x, &context);
            std::mem::replace(&mut context, next)
        })
        .collect()
}

/// Mean squared error with fixed contexts, and its gradient.
pub(super) fn loss_and_gradient(
    layout: &Layout,
    w: &[f64],
    inputs: &[Vec<f64>],
    targets: &[f64],
    contexts: &[Vec<f64>],
) -> (f64, Vec<f64>) {
    let n = targets.len() as f64;
    let mut grad = vec![0.0; layout.len()];
    let mut loss = 0.0;
    for ((x, &t), context) in inputs.iter().zip(targets).zip(contexts) {
        let (y, h) = forward(layout, w, x, context);
        let err = y - t;
        loss += err * err / n;
        let e = 2.0 * err / n;
        grad[layout.output_bias()] += e;
        for (j, hj) in h.iter().enumerate() {
            grad[layout.output() + j] += e * hj;
            let dz = e * w[layout.output() + j] * hj * (1.0 - hj);
            grad[layout.bias() + j] += dz;
            for (i, xi) in x.iter().enumerate() {
                grad[j * layout.inputs + i] += dz * xi;
            }
            for (k, ck) in context.iter().enumerate() {
                grad[layout.recurrent() + j * layout.hidden + k] += dz * ck;
            }
        }
    }
    (loss, grad)
}
