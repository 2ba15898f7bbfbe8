//! Reverse pass through head, social attention and word attention.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, Axis, Zip};

use super::forward::{clamp_prob, head, social, word_attention, AttentionTrace, ForwardTrace, Inputs, SocialTrace, BCE_CLAMP};
use super::{AttentionParams, ModelParams, SocialMode};

/// d(clamped BCE)/d(logit). Zero where the clamp is active.
#[inline]
fn logit_grad(p: f64, label: u8) -> f64 {
    if p < BCE_CLAMP || p > 1.0 - BCE_CLAMP {
        0.0
    } else {
        p - f64::from(label)
    }
}

/// Accumulates `W`, `b`, `u` gradients given the gradient at the pooled output.
fn attention_backward(
    x: &Array2<f64>,
    t: &AttentionTrace,
    p: &AttentionParams,
    d_out: &Array1<f64>,
    g: &mut AttentionParams,
) {
    if t.is_cold() {
        return;
    }
    let a = &t.weights;
    let hid = &t.hidden;
    // out = sum_k a_k h_k
    let da = hid.dot(d_out);
    let mean = a.dot(&da);
    let d_score = Zip::from(a).and(&da).map_collect(|&ak, &dak| ak * (dak - mean));
    g.u.scaled_add(1.0, &hid.t().dot(&d_score));
    // dh_k = a_k d_out + d_score_k u, then through tanh
    let mut dz = Array2::zeros(hid.raw_dim());
    Zip::from(dz.rows_mut())
        .and(hid.rows())
        .and(a)
        .and(&d_score)
        .for_each(|mut row, h_row, &ak, &dsk| {
            Zip::from(&mut row)
                .and(&h_row)
                .and(d_out)
                .and(&p.u)
                .for_each(|dzi, &hi, &doi, &ui| *dzi = (ak * doi + dsk * ui) * (1.0 - hi * hi));
        });
    general_mat_mul(1.0, &dz.t(), x, 1.0, &mut g.w);
    g.b.scaled_add(1.0, &dz.sum_axis(Axis(0)));
}

/// Everything above word attention for one sample. Adds parameter gradients
/// into `g` and returns gradients with respect to `v`, each `v_j` and `q`
/// through the accumulators.
#[allow(clippy::too_many_arguments)]
fn upper_backward(
    social_t: &SocialTrace,
    v: &Array1<f64>,
    friends: &[Array1<f64>],
    q: &Array1<f64>,
    joint: &Array1<f64>,
    d_logit: f64,
    params: &ModelParams,
    mode: &SocialMode,
    g: &mut ModelParams,
    dv: &mut Array1<f64>,
    dvj: &mut [Array1<f64>],
    dq: &mut Array1<f64>,
) {
    let h = v.len();
    g.w_o.scaled_add(d_logit, joint);
    g.b_o += d_logit;
    dq.scaled_add(d_logit, &params.w_o.slice(s![..h]));
    let d_vhat = params.w_o.slice(s![h..]).mapv(|w| w * d_logit);

    dv.scaled_add(1.0, &d_vhat);
    let a = &social_t.weights;
    if friends.is_empty() {
        return;
    }
    let da: Array1<f64> = friends.iter().map(|vj| d_vhat.dot(vj)).collect();
    let mean = a.dot(&da);
    for (j, vj) in friends.iter().enumerate() {
        dvj[j].scaled_add(a[j], &d_vhat);
        let d_score = a[j] * (da[j] - mean);
        match mode {
            SocialMode::Static(kernel) => {
                let (_, grads) = kernel.eval_grad(v.view(), vj.view(), true);
                let (gx, gy) = grads.expect("gradient requested");
                dv.scaled_add(d_score, &gx);
                dvj[j].scaled_add(d_score, &gy);
            }
            SocialMode::Dynamic => {
                let pre = social_t
                    .pre_activation
                    .as_ref()
                    .expect("dynamic trace keeps pre-activations");
                let z = pre.row(j);
                g.u_v.scaled_add(d_score, &z.mapv(|x| x.max(0.0)));
                let dz = Zip::from(&z)
                    .and(&params.u_v)
                    .map_collect(|&zi, &ui| if zi > 0.0 { d_score * ui } else { 0.0 });
                let dz_col = dz.view().insert_axis(Axis(1));
                general_mat_mul(1.0, &dz_col, &v.view().insert_axis(Axis(0)), 1.0, &mut g.w1);
                general_mat_mul(1.0, &dz_col, &vj.view().insert_axis(Axis(0)), 1.0, &mut g.w2);
                general_mat_mul(1.0, &dz_col, &q.view().insert_axis(Axis(0)), 1.0, &mut g.w3);
                g.b_a += dz.sum();
                dv.scaled_add(1.0, &params.w1.t().dot(&dz));
                dvj[j].scaled_add(1.0, &params.w2.t().dot(&dz));
                dq.scaled_add(1.0, &params.w3.t().dot(&dz));
            }
        }
    }
}

/// Exact gradient of the clamped BCE of one prediction with respect to every
/// parameter.
pub fn backward(
    trace: &ForwardTrace,
    inputs: Inputs<'_>,
    params: &ModelParams,
    mode: &SocialMode,
    label: u8,
) -> ModelParams {
    let mut g = params.zeros_like();
    let h = params.hidden();
    let friend_vecs: Vec<Array1<f64>> = trace.friends.iter().map(|t| t.out.clone()).collect();
    let mut dv = Array1::zeros(h);
    let mut dvj = vec![Array1::zeros(h); friend_vecs.len()];
    let mut dq = Array1::zeros(h);
    upper_backward(
        &trace.social,
        &trace.user.out,
        &friend_vecs,
        &trace.doc.out,
        &trace.joint,
        logit_grad(trace.p, label),
        params,
        mode,
        &mut g,
        &mut dv,
        &mut dvj,
        &mut dq,
    );
    attention_backward(inputs.doc, &trace.doc, &params.doc, &dq, &mut g.doc);
    attention_backward(inputs.user, &trace.user, &params.user, &dv, &mut g.user);
    for ((x, t), d) in inputs.friends.iter().zip(&trace.friends).zip(&dvj) {
        attention_backward(x, t, &params.user, d, &mut g.user);
    }
    g
}

#[derive(Debug, Clone, Copy)]
pub struct BatchSample<'a> {
    pub doc: &'a Array2<f64>,
    pub label: u8,
}

/// Mean clamped BCE over samples that share one user and friend set, its
/// gradient, and the per-sample probabilities.
///
/// The user and friend representations are computed once and their
/// gradients summed over the batch before a single reverse pass.
pub fn batch_gradient(
    user: &Array2<f64>,
    friends: &[&Array2<f64>],
    samples: &[BatchSample<'_>],
    params: &ModelParams,
    mode: &SocialMode,
) -> (f64, Vec<f64>, ModelParams) {
    let mut g = params.zeros_like();
    let h = params.hidden();
    let m = samples.len();
    if m == 0 {
        return (0.0, Vec::new(), g);
    }
    let scale = 1.0 / m as f64;
    let user_t = word_attention(user, &params.user);
    let friend_t: Vec<AttentionTrace> = friends.iter().map(|x| word_attention(x, &params.user)).collect();
    let friend_vecs: Vec<Array1<f64>> = friend_t.iter().map(|t| t.out.clone()).collect();
    let mut dv = Array1::zeros(h);
    let mut dvj = vec![Array1::zeros(h); friends.len()];
    let mut probs = Vec::with_capacity(m);
    let mut loss = 0.0;
    for s in samples {
        let doc_t = word_attention(s.doc, &params.doc);
        let soc = social(mode, &user_t.out, &friend_vecs, &doc_t.out, params);
        let (joint, _, p) = head(&doc_t.out, &soc.out, params);
        let pc = clamp_prob(p);
        loss -= if s.label == 1 { pc.ln() } else { (1.0 - pc).ln() };
        probs.push(p);
        let mut dq = Array1::zeros(h);
        upper_backward(
            &soc,
            &user_t.out,
            &friend_vecs,
            &doc_t.out,
            &joint,
            logit_grad(p, s.label) * scale,
            params,
            mode,
            &mut g,
            &mut dv,
            &mut dvj,
            &mut dq,
        );
        attention_backward(s.doc, &doc_t, &params.doc, &dq, &mut g.doc);
    }
    attention_backward(user, &user_t, &params.user, &dv, &mut g.user);
    for ((x, t), d) in friends.iter().zip(&friend_t).zip(&dvj) {
        attention_backward(x, t, &params.user, d, &mut g.user);
    }
    (loss * scale, probs, g)
}
