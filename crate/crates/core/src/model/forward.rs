use ndarray::{Array1, Array2, ArrayView1, Axis};

use super::{AttentionParams, Kernel, ModelParams, SocialMode};

/// Probabilities are clamped to `[BCE_CLAMP, 1 - BCE_CLAMP]` inside the loss.
pub const BCE_CLAMP: f64 = 1e-7;

pub fn softmax(scores: ArrayView1<f64>) -> Array1<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut e = scores.mapv(|s| (s - max).exp());
    let z = e.sum();
    e /= z;
    e
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttentionTrace {
    /// `tanh(W x_k + b)` per keyword, `k x h`.
    pub hidden: Array2<f64>,
    pub weights: Array1<f64>,
    pub out: Array1<f64>,
}

impl AttentionTrace {
    /// No in-vocabulary keyword: the representation is the zero vector.
    pub fn is_cold(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Softmax-weighted pooling of `tanh(W x_k + b)` by scores `u . h_k`.
pub fn word_attention(x: &Array2<f64>, p: &AttentionParams) -> AttentionTrace {
    let h = p.w.nrows();
    if x.nrows() == 0 {
        return AttentionTrace {
            hidden: Array2::zeros((0, h)),
            weights: Array1::zeros(0),
            out: Array1::zeros(h),
        };
    }
    let mut hidden = x.dot(&p.w.t());
    hidden += &p.b;
    hidden.mapv_inplace(f64::tanh);
    let weights = softmax(hidden.dot(&p.u).view());
    let out = hidden.t().dot(&weights);
    AttentionTrace { hidden, weights, out }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SocialTrace {
    /// Pre-softmax friend scores (kernel similarities or `e_j`).
    pub scores: Array1<f64>,
    pub weights: Array1<f64>,
    /// Dynamic mode only: `W1 v + W2 v_j + W3 q + b` per friend, `L x h`.
    pub pre_activation: Option<Array2<f64>>,
    pub out: Array1<f64>,
}

fn fuse(v: &Array1<f64>, friends: &[Array1<f64>], weights: &Array1<f64>) -> Array1<f64> {
    let mut out = v.clone();
    for (vj, a) in friends.iter().zip(weights) {
        out.scaled_add(*a, vj);
    }
    out
}

/// `v_hat = v + sum_j softmax_j(delta(v, v_j)) v_j`.
pub fn static_social_attention(v: &Array1<f64>, friends: &[Array1<f64>], kernel: &Kernel) -> SocialTrace {
    let scores: Array1<f64> = friends.iter().map(|vj| kernel.eval(v.view(), vj.view())).collect();
    let weights = if friends.is_empty() {
        Array1::zeros(0)
    } else {
        softmax(scores.view())
    };
    let out = fuse(v, friends, &weights);
    SocialTrace {
        scores,
        weights,
        pre_activation: None,
        out,
    }
}

/// `e_j = u_v . relu(W1 v + W2 v_j + W3 q + b)`, `v_hat = v + sum_j softmax(e)_j v_j`.
pub fn dynamic_social_attention(
    v: &Array1<f64>,
    friends: &[Array1<f64>],
    q: &Array1<f64>,
    p: &ModelParams,
) -> SocialTrace {
    let h = v.len();
    let l = friends.len();
    let mut pre = Array2::zeros((l, h));
    if l > 0 {
        let shared = p.w1.dot(v) + p.w3.dot(q) + p.b_a;
        for (mut row, vj) in pre.axis_iter_mut(Axis(0)).zip(friends) {
            row.assign(&(&shared + &p.w2.dot(vj)));
        }
    }
    let scores = pre.mapv(|z| z.max(0.0)).dot(&p.u_v);
    let weights = if l == 0 { Array1::zeros(0) } else { softmax(scores.view()) };
    let out = fuse(v, friends, &weights);
    SocialTrace {
        scores,
        weights,
        pre_activation: Some(pre),
        out,
    }
}

/// Borrowed keyword matrices for one (user, friends, document) triple.
#[derive(Debug, Clone, Copy)]
pub struct Inputs<'a> {
    pub user: &'a Array2<f64>,
    pub friends: &'a [&'a Array2<f64>],
    pub doc: &'a Array2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    pub user: AttentionTrace,
    pub friends: Vec<AttentionTrace>,
    pub doc: AttentionTrace,
    pub social: SocialTrace,
    /// `q || v_hat`.
    pub joint: Array1<f64>,
    pub logit: f64,
    pub p: f64,
}

pub(crate) fn social(
    mode: &SocialMode,
    v: &Array1<f64>,
    friends: &[Array1<f64>],
    q: &Array1<f64>,
    params: &ModelParams,
) -> SocialTrace {
    match mode {
        SocialMode::Static(k) => static_social_attention(v, friends, k),
        SocialMode::Dynamic => dynamic_social_attention(v, friends, q, params),
    }
}

pub(crate) fn head(q: &Array1<f64>, v_hat: &Array1<f64>, params: &ModelParams) -> (Array1<f64>, f64, f64) {
    let h = q.len();
    let mut joint = Array1::zeros(2 * h);
    joint.slice_mut(ndarray::s![..h]).assign(q);
    joint.slice_mut(ndarray::s![h..]).assign(v_hat);
    let logit = params.w_o.dot(&joint) + params.b_o;
    (joint, logit, sigmoid(logit))
}

/// Click probability for one triple, with every intermediate kept for
/// [`backward`](super::backward).
pub fn predict(inputs: Inputs<'_>, params: &ModelParams, mode: &SocialMode) -> (f64, ForwardTrace) {
    let user = word_attention(inputs.user, &params.user);
    let friends: Vec<AttentionTrace> = inputs
        .friends
        .iter()
        .map(|x| word_attention(x, &params.user))
        .collect();
    let doc = word_attention(inputs.doc, &params.doc);
    let friend_vecs: Vec<Array1<f64>> = friends.iter().map(|t| t.out.clone()).collect();
    let social = social(mode, &user.out, &friend_vecs, &doc.out, params);
    let (joint, logit, p) = head(&doc.out, &social.out, params);
    let trace = ForwardTrace {
        user,
        friends,
        doc,
        social,
        joint,
        logit,
        p,
    };
    (p, trace)
}

/// Click probability from already pooled vectors: `v` for the user, one per
/// friend, and `q` for the document. Equals [`predict`] on the inputs the
/// vectors were pooled from.
pub fn predict_encoded(
    v: &Array1<f64>,
    friends: &[Array1<f64>],
    q: &Array1<f64>,
    params: &ModelParams,
    mode: &SocialMode,
) -> f64 {
    let social = social(mode, v, friends, q, params);
    head(q, &social.out, params).2
}

#[inline]
pub(crate) fn clamp_prob(p: f64) -> f64 {
    p.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP)
}

/// Mean binary cross-entropy over `(p, y)` pairs with clamped probabilities.
pub fn bce_loss(batch: &[(f64, u8)]) -> f64 {
    if batch.is_empty() {
        return 0.0;
    }
    let total: f64 = batch
        .iter()
        .map(|&(p, y)| {
            let p = clamp_prob(p);
            if y == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    total / batch.len() as f64
}
