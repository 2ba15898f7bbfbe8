use serde::{Deserialize, Serialize};

use super::ModelParams;
use crate::error::{Error, Result};

pub const BETA1: f64 = 0.9;
pub const BETA2: f64 = 0.999;
pub const EPS: f64 = 1e-8;

/// First and second moment estimates, flattened in parameter order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }

    pub fn for_params(p: &ModelParams) -> Self {
        Self::new(p.len())
    }
}

/// One bias-corrected Adam update. A gradient with any non-finite entry is
/// rejected before anything is modified.
pub fn adam_step(params: &mut ModelParams, grads: &ModelParams, state: &mut AdamState, lr: f64) -> Result<()> {
    for (name, t) in grads.tensors() {
        if let Some(i) = t.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteGradient(format!("{name}[{i}]")));
        }
    }
    if state.m.len() != params.len() {
        return Err(Error::InvalidArgument(format!(
            "optimizer state has {} entries, model has {}",
            state.m.len(),
            params.len()
        )));
    }
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - BETA1.powi(t);
    let c2 = 1.0 - BETA2.powi(t);
    let mut off = 0;
    for ((_, p), (_, g)) in params.tensors_mut().into_iter().zip(grads.tensors()) {
        let m = &mut state.m[off..off + p.len()];
        let v = &mut state.v[off..off + p.len()];
        for i in 0..p.len() {
            m[i] = BETA1 * m[i] + (1.0 - BETA1) * g[i];
            v[i] = BETA2 * v[i] + (1.0 - BETA2) * g[i] * g[i];
            p[i] -= lr * (m[i] / c1) / ((v[i] / c2).sqrt() + EPS);
        }
        off += p.len();
    }
    Ok(())
}
