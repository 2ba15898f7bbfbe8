//! Keyword attention click model.
//!
//! Keyword embeddings pass through word attention to give a user vector `v`,
//! one vector `v_j` per selected friend (same parameters as the user) and a
//! document vector `q` (separate parameters). Social attention folds the
//! friends into `v_hat = v + sum_j a_j v_j`, and a logistic head scores
//! `q || v_hat`.

mod adam;
mod backward;
mod forward;
mod kernel;

use ndarray::{Array1, Array2};
use rand::distributions::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

pub use adam::{adam_step, AdamState};
pub use backward::{backward, batch_gradient, BatchSample};
pub use forward::{
    bce_loss, dynamic_social_attention, predict, predict_encoded, softmax, static_social_attention,
    word_attention, AttentionTrace, ForwardTrace, Inputs, SocialTrace, BCE_CLAMP,
};
pub use kernel::Kernel;

use crate::error::{Error, Result};
use crate::rng::{self, purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SocialMode {
    Static(Kernel),
    Dynamic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub dim_embed: usize,
    pub dim_hidden: usize,
    pub social_mode: SocialMode,
    pub learn_rate: f64,
    pub epochs_per_day: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            dim_embed: 50,
            dim_hidden: 64,
            social_mode: SocialMode::Dynamic,
            learn_rate: 1e-3,
            epochs_per_day: 5,
            batch_size: 64,
            seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim_embed == 0 {
            return Err(Error::config("dim_embed", "must be positive"));
        }
        if self.dim_hidden == 0 {
            return Err(Error::config("dim_hidden", "must be positive"));
        }
        if !(self.learn_rate > 0.0) || !self.learn_rate.is_finite() {
            return Err(Error::config("learn_rate", "must be positive"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch_size", "must be positive"));
        }
        Ok(())
    }
}

/// Word attention weights: `h_k = tanh(W x_k + b)`, scores `u . h_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttentionParams {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
    pub u: Array1<f64>,
}

impl AttentionParams {
    fn zeros(h: usize, d: usize) -> Self {
        AttentionParams {
            w: Array2::zeros((h, d)),
            b: Array1::zeros(h),
            u: Array1::zeros(h),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// User and friend word attention.
    pub user: AttentionParams,
    /// Document word attention.
    pub doc: AttentionParams,
    pub w1: Array2<f64>,
    pub w2: Array2<f64>,
    pub w3: Array2<f64>,
    pub b_a: f64,
    pub u_v: Array1<f64>,
    /// Logistic head over `q || v_hat`.
    pub w_o: Array1<f64>,
    pub b_o: f64,
}

impl ModelParams {
    pub fn zeros(h: usize, d: usize) -> Self {
        ModelParams {
            user: AttentionParams::zeros(h, d),
            doc: AttentionParams::zeros(h, d),
            w1: Array2::zeros((h, h)),
            w2: Array2::zeros((h, h)),
            w3: Array2::zeros((h, h)),
            b_a: 0.0,
            u_v: Array1::zeros(h),
            w_o: Array1::zeros(2 * h),
            b_o: 0.0,
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.hidden(), self.embed())
    }

    pub fn hidden(&self) -> usize {
        self.user.w.nrows()
    }

    pub fn embed(&self) -> usize {
        self.user.w.ncols()
    }

    /// Every tensor as a flat slice, in a fixed order.
    pub fn tensors(&self) -> Vec<(&'static str, &[f64])> {
        vec![
            ("user.w", self.user.w.as_slice().unwrap()),
            ("user.b", self.user.b.as_slice().unwrap()),
            ("user.u", self.user.u.as_slice().unwrap()),
            ("doc.w", self.doc.w.as_slice().unwrap()),
            ("doc.b", self.doc.b.as_slice().unwrap()),
            ("doc.u", self.doc.u.as_slice().unwrap()),
            ("w1", self.w1.as_slice().unwrap()),
            ("w2", self.w2.as_slice().unwrap()),
            ("w3", self.w3.as_slice().unwrap()),
            ("b_a", std::slice::from_ref(&self.b_a)),
            ("u_v", self.u_v.as_slice().unwrap()),
            ("w_o", self.w_o.as_slice().unwrap()),
            ("b_o", std::slice::from_ref(&self.b_o)),
        ]
    }

    pub fn tensors_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        vec![
            ("user.w", self.user.w.as_slice_mut().unwrap()),
            ("user.b", self.user.b.as_slice_mut().unwrap()),
            ("user.u", self.user.u.as_slice_mut().unwrap()),
            ("doc.w", self.doc.w.as_slice_mut().unwrap()),
            ("doc.b", self.doc.b.as_slice_mut().unwrap()),
            ("doc.u", self.doc.u.as_slice_mut().unwrap()),
            ("w1", self.w1.as_slice_mut().unwrap()),
            ("w2", self.w2.as_slice_mut().unwrap()),
            ("w3", self.w3.as_slice_mut().unwrap()),
            ("b_a", std::slice::from_mut(&mut self.b_a)),
            ("u_v", self.u_v.as_slice_mut().unwrap()),
            ("w_o", self.w_o.as_slice_mut().unwrap()),
            ("b_o", std::slice::from_mut(&mut self.b_o)),
        ]
    }

    pub fn len(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|(_, t)| t.iter().all(|x| x.is_finite()))
    }

    /// Copies every tensor from a flat vector in [`tensors`](Self::tensors) order.
    pub fn assign_flat(&mut self, flat: &[f64]) {
        let mut off = 0;
        for (_, t) in self.tensors_mut() {
            t.copy_from_slice(&flat[off..off + t.len()]);
            off += t.len();
        }
        assert_eq!(off, flat.len(), "flat parameter length mismatch");
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.tensors().iter().flat_map(|(_, t)| t.iter().copied()).collect()
    }
}

/// Glorot-uniform weights, zero biases.
pub fn init_params(cfg: &ModelConfig, seed: u64) -> ModelParams {
    let (h, d) = (cfg.dim_hidden, cfg.dim_embed);
    let mut r = rng::stream(seed, &[purpose::PARAMS]);
    let mut p = ModelParams::zeros(h, d);
    let mut fill = |t: &mut [f64], fan_in: usize, fan_out: usize| {
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        let dist = Uniform::new_inclusive(-limit, limit);
        t.iter_mut().for_each(|x| *x = dist.sample(&mut r));
    };
    fill(p.user.w.as_slice_mut().unwrap(), d, h);
    fill(p.user.u.as_slice_mut().unwrap(), h, 1);
    fill(p.doc.w.as_slice_mut().unwrap(), d, h);
    fill(p.doc.u.as_slice_mut().unwrap(), h, 1);
    fill(p.w1.as_slice_mut().unwrap(), h, h);
    fill(p.w2.as_slice_mut().unwrap(), h, h);
    fill(p.w3.as_slice_mut().unwrap(), h, h);
    fill(p.u_v.as_slice_mut().unwrap(), h, 1);
    fill(p.w_o.as_slice_mut().unwrap(), 2 * h, 1);
    p
}
