//! Logistic loss with negative sampling for one positive pair.
//!
//! For a target vector `u` and output vectors `v_r` with labels `y_r`
//! (1 for the positive, 0 for negatives):
//!
//! `loss = sum_r softplus(-(2 y_r - 1) u . v_r)`
//!
//! and `d loss / d (u . v_r) = sigmoid(u . v_r) - y_r`.

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Loss contribution and `d loss / d dot` for one output.
#[inline]
fn term(score: f64, label: f64) -> (f64, f64) {
    let loss = if label > 0.5 {
        softplus(-score)
    } else {
        softplus(score)
    };
    (loss, sigmoid(score) - label)
}

/// Loss of one positive pair and its negatives.
pub fn pair_loss(target: &[f64], outputs: &[(&[f64], f64)]) -> f64 {
    outputs
        .iter()
        .map(|(v, y)| term(dot(target, v), *y).0)
        .sum()
}

/// Analytic gradient of [`pair_loss`] with respect to the target vector and
/// every output vector.
pub fn pair_gradient(target: &[f64], outputs: &[(&[f64], f64)]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut grad_target = vec![0.0; target.len()];
    let mut grad_outputs = Vec::with_capacity(outputs.len());
    for (v, y) in outputs {
        let (_, g) = term(dot(target, v), *y);
        for (gt, vi) in grad_target.iter_mut().zip(v.iter()) {
            *gt += g * vi;
        }
        grad_outputs.push(target.iter().map(|u| g * u).collect());
    }
    (grad_target, grad_outputs)
}

/// In-place gradient step on one pair.
///
/// `target_row` indexes `targets`; each output names a row of `outputs`, or
/// of `targets` when `outputs` is `None` (LINE first-order). Output gradients
/// use the pre-step target vector and the target gradient uses pre-step
/// output vectors, so the update is exactly `-lr * pair_gradient`, provided
/// no output row repeats and none equals the target row. Returns the loss
/// before the step.
pub(crate) fn sgd_step(
    targets: &mut [f64],
    outputs: Option<&mut [f64]>,
    dim: usize,
    target_row: usize,
    rows: &[(usize, f64)],
    lr: f64,
    scratch: &mut Scratch,
) -> f64 {
    scratch.u.clear();
    scratch
        .u
        .extend_from_slice(&targets[target_row * dim..(target_row + 1) * dim]);
    scratch.grad.clear();
    scratch.grad.resize(dim, 0.0);

    let mut loss = 0.0;
    {
        let out: &mut [f64] = match outputs {
            Some(o) => o,
            None => &mut *targets,
        };
        for &(row, label) in rows {
            let v = &mut out[row * dim..(row + 1) * dim];
            let (l, g) = term(dot(&scratch.u, v), label);
            loss += l;
            for ((gt, vi), ui) in scratch.grad.iter_mut().zip(v.iter_mut()).zip(&scratch.u) {
                *gt += g * *vi;
                *vi -= lr * g * ui;
            }
        }
    }
    for (t, g) in targets[target_row * dim..(target_row + 1) * dim]
        .iter_mut()
        .zip(&scratch.grad)
    {
        *t -= lr * g;
    }
    loss
}

#[derive(Debug, Default)]
pub(crate) struct Scratch {
    u: Vec<f64>,
    grad: Vec<f64>,
}
