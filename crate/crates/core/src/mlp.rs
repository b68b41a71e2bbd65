//! One-hidden-layer sigmoid perceptron trained by online backpropagation
//! with momentum on the sum-of-squared-errors loss.
//!
//! Training descends the objective `E = 1/2 * sse_loss`, the usual
//! backpropagation convention under which a learning rate of 0.8 with
//! momentum 0.7 is stable. [`MlpModel::gradients`] returns the gradient of
//! that objective; [`MlpModel::sse_gradients`] returns the gradient of
//! [`sse_loss`] itself, which is exactly twice as large.
//!
//! Weight matrices are row-major. Row `j` of `w1` holds the `n_in` input
//! weights of hidden unit `j` followed by its bias (the bias input is
//! clamped to 1); `w2` is laid out the same way over the hidden layer.
//!
//! Arithmetic is `f64` throughout. Every weighted sum is accumulated in
//! ascending input index and the bias is added last; the momentum update is
//! evaluated as `-eta * g + alpha * prev`. Both orders are part of the
//! reproducibility contract.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, INIT_STREAM};

pub const MODEL_MAGIC: &str = "MLP-TEXT v1";

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// 1-out-of-m target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainTarget {
    class_id: usize,
    n_out: usize,
}

impl TrainTarget {
    pub fn new(class_id: usize, n_out: usize) -> Result<Self> {
        if class_id >= n_out {
            return Err(Error::DimensionMismatch {
                expected: n_out,
                got: class_id + 1,
            });
        }
        Ok(Self { class_id, n_out })
    }

    pub fn class_id(&self) -> usize {
        self.class_id
    }

    pub fn len(&self) -> usize {
        self.n_out
    }

    pub fn is_empty(&self) -> bool {
        self.n_out == 0
    }

    #[inline]
    pub fn value(&self, k: usize) -> f64 {
        if k == self.class_id {
            1.0
        } else {
            0.0
        }
    }

    pub fn vector(&self) -> Vec<f64> {
        (0..self.n_out).map(|k| self.value(k)).collect()
    }
}

/// `sum_k (t_k - o_k)^2`
pub fn sse_loss(output: &[f64], target: &TrainTarget) -> Result<f64> {
    if output.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            got: output.len(),
        });
    }
    Ok(output
        .iter()
        .enumerate()
        .map(|(k, &o)| {
            let e = target.value(k) - o;
            e * e
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Activations {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

/// Gradients of the per-sample loss, shaped like `w1` and `w2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    n_in: usize,
    n_hidden: usize,
    n_out: usize,
    w1: Vec<f64>,
    w2: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl MlpModel {
    /// All weights and momentum buffers zero.
    pub fn zeros(n_in: usize, n_hidden: usize, n_out: usize) -> Self {
        assert!(n_in > 0 && n_hidden > 0 && n_out > 0, "layer sizes must be >= 1");
        let l1 = n_hidden * (n_in + 1);
        let l2 = n_out * (n_hidden + 1);
        Self {
            n_in,
            n_hidden,
            n_out,
            w1: vec![0.0; l1],
            w2: vec![0.0; l2],
            d1: vec![0.0; l1],
            d2: vec![0.0; l2],
        }
    }

    /// Weights i.i.d. uniform on `[-0.5, 0.5]`, `w1` row-major first, then
    /// `w2`, all from the init stream of `seed`.
    pub fn init_weights(n_in: usize, n_hidden: usize, n_out: usize, seed: u64) -> Self {
        let mut m = Self::zeros(n_in, n_hidden, n_out);
        let mut rng = stream_rng(seed, INIT_STREAM);
        for w in m.w1.iter_mut().chain(m.w2.iter_mut()) {
            *w = rng.random_range(-0.5..=0.5);
        }
        m
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    pub fn w1_mut(&mut self) -> &mut [f64] {
        &mut self.w1
    }

    pub fn w2_mut(&mut self) -> &mut [f64] {
        &mut self.w2
    }

    /// Previous updates (momentum memory), shaped like `w1` / `w2`.
    pub fn deltas(&self) -> (&[f64], &[f64]) {
        (&self.d1, &self.d2)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Activations> {
        self.check_input(x)?;
        let hidden = layer(&self.w1, x, self.n_hidden);
        let output = layer(&self.w2, &hidden, self.n_out);
        Ok(Activations { hidden, output })
    }

    /// Backpropagated gradient of the training objective `sse_loss / 2`
    /// for one sample: the `g` of the update rule.
    pub fn gradients(&self, x: &[f64], target: &TrainTarget) -> Result<Gradients> {
        let act = self.forward(x)?;
        Ok(self.gradients_from(x, target, &act)?.0)
    }

    /// Gradient of [`sse_loss`] for one sample.
    pub fn sse_gradients(&self, x: &[f64], target: &TrainTarget) -> Result<Gradients> {
        let mut g = self.gradients(x, target)?;
        g.g1.iter_mut().chain(g.g2.iter_mut()).for_each(|v| *v *= 2.0);
        Ok(g)
    }

    fn gradients_from(
        &self,
        x: &[f64],
        target: &TrainTarget,
        act: &Activations,
    ) -> Result<(Gradients, f64)> {
        if target.len() != self.n_out {
            return Err(Error::DimensionMismatch {
                expected: self.n_out,
                got: target.len(),
            });
        }
        let (nh, no) = (self.n_hidden, self.n_out);
        let h = &act.hidden;
        let o = &act.output;

        let mut loss = 0.0;
        let delta_out: Vec<f64> = (0..no)
            .map(|k| {
                let err = o[k] - target.value(k);
                loss += err * err;
                err * o[k] * (1.0 - o[k])
            })
            .collect();

        let mut g2 = vec![0.0; self.w2.len()];
        for k in 0..no {
            let row = &mut g2[k * (nh + 1)..(k + 1) * (nh + 1)];
            for j in 0..nh {
                row[j] = delta_out[k] * h[j];
            }
            row[nh] = delta_out[k];
        }

        let mut g1 = vec![0.0; self.w1.len()];
        for j in 0..nh {
            let mut back = 0.0;
            for (k, &d) in delta_out.iter().enumerate() {
                back += self.w2[k * (nh + 1) + j] * d;
            }
            let delta_h = back * h[j] * (1.0 - h[j]);
            let row = &mut g1[j * (self.n_in + 1)..(j + 1) * (self.n_in + 1)];
            for (i, &xi) in x.iter().enumerate() {
                row[i] = delta_h * xi;
            }
            row[self.n_in] = delta_h;
        }
        Ok((Gradients { g1, g2 }, loss))
    }

    /// One online update: `dw = -eta * g + alpha * dw_prev; w += dw`, biases
    /// included, with `g` from [`MlpModel::gradients`]. Returns the sample's
    /// `sse_loss` before the update.
    pub fn backprop_step(
        &mut self,
        x: &[f64],
        target: &TrainTarget,
        eta: f64,
        alpha: f64,
    ) -> Result<f64> {
        let act = self.forward(x)?;
        let (grads, loss) = self.gradients_from(x, target, &act)?;
        apply_update(&mut self.w1, &mut self.d1, &grads.g1, eta, alpha);
        apply_update(&mut self.w2, &mut self.d2, &grads.g2, eta, alpha);
        Ok(loss)
    }

    /// Index of the largest output; ties go to the lowest index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let act = self.forward(x)?;
        Ok(argmax(&act.output))
    }

    /// Serialises to the `MLP-TEXT v1` format; `comments` are emitted as
    /// `#` lines ahead of the magic.
    pub fn to_text(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            for line in c.lines() {
                writeln!(out, "# {line}").unwrap();
            }
        }
        writeln!(out, "{MODEL_MAGIC}").unwrap();
        writeln!(out, "{} {} {}", self.n_in, self.n_hidden, self.n_out).unwrap();
        for (mat, cols) in [
            (&self.w1, self.n_in + 1),
            (&self.w2, self.n_hidden + 1),
            (&self.d1, self.n_in + 1),
            (&self.d2, self.n_hidden + 1),
        ] {
            for row in mat.chunks(cols) {
                let mut first = true;
                for v in row {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    write!(out, "{v:.16e}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let corrupt = |line: usize, msg: String| Error::CorruptModel { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

        let mut header = None;
        for (no, line) in lines.by_ref() {
            if line.starts_with('#') {
                continue;
            }
            if line.trim_end() != MODEL_MAGIC {
                return Err(corrupt(no, format!("expected magic `{MODEL_MAGIC}`")));
            }
            header = Some(no);
            break;
        }
        let magic_line = header.ok_or_else(|| corrupt(1, "missing magic line".into()))?;

        let (no, dims) = lines
            .next()
            .ok_or_else(|| corrupt(magic_line + 1, "missing layer sizes".into()))?;
        let sizes: Vec<usize> = dims
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| corrupt(no, format!("bad layer sizes: {e}")))?;
        let [n_in, n_hidden, n_out] = sizes[..] else {
            return Err(corrupt(no, format!("expected 3 layer sizes, got {}", sizes.len())));
        };
        if n_in == 0 || n_hidden == 0 || n_out == 0 {
            return Err(corrupt(no, "layer sizes must be >= 1".into()));
        }

        let mut model = Self::zeros(n_in, n_hidden, n_out);
        let mut last = no;
        for (mat, cols) in [
            (&mut model.w1, n_in + 1),
            (&mut model.w2, n_hidden + 1),
            (&mut model.d1, n_in + 1),
            (&mut model.d2, n_hidden + 1),
        ] {
            for row in mat.chunks_mut(cols) {
                let (no, line) = lines
                    .next()
                    .ok_or_else(|| corrupt(last + 1, "unexpected end of file".into()))?;
                last = no;
                let mut n = 0;
                for tok in line.split_whitespace() {
                    if n == cols {
                        return Err(corrupt(no, format!("more than {cols} values")));
                    }
                    row[n] = tok
                        .parse()
                        .map_err(|_| corrupt(no, format!("bad number `{tok}`")))?;
                    n += 1;
                }
                if n != cols {
                    return Err(corrupt(no, format!("expected {cols} values, got {n}")));
                }
            }
        }
        if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(corrupt(no, "trailing content".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path, comments: &[String]) -> Result<()> {
        fs::write(path, self.to_text(comments)).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

fn layer(w: &[f64], input: &[f64], n_units: usize) -> Vec<f64> {
    let cols = input.len() + 1;
    (0..n_units)
        .map(|j| {
            let row = &w[j * cols..(j + 1) * cols];
            let mut acc = 0.0;
            for (wi, xi) in row.iter().zip(input) {
                acc += wi * xi;
            }
            acc += row[cols - 1];
            sigmoid(acc)
        })
        .collect()
}

#[inline]
fn apply_update(w: &mut [f64], prev: &mut [f64], g: &[f64], eta: f64, alpha: f64) {
    for ((w, d), &g) in w.iter_mut().zip(prev.iter_mut()).zip(g) {
        let delta = -eta * g + alpha * *d;
        *w += delta;
        *d = delta;
    }
}

pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}
