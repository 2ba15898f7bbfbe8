#![allow(dead_code)]

use ndarray::Array2;
use rand::Rng;
use socrec::model::{backward, bce_loss, init_params, predict, Inputs, ModelConfig, ModelParams, SocialMode};
use socrec::rng;

pub fn rand_mat(r: &mut impl Rng, k: usize, d: usize) -> Array2<f64> {
    Array2::from_shape_fn((k, d), |_| r.gen_range(-1.0..1.0))
}

/// Largest relative error between the analytic gradient and central
/// differences over every parameter of one random instance.
pub fn gradient_check(mode: SocialMode, seed: u64, h: usize, d: usize, l: usize) -> f64 {
    let cfg = ModelConfig { dim_embed: d, dim_hidden: h, social_mode: mode, ..Default::default() };
    let mut params = init_params(&cfg, seed);
    let mut r = rng::stream(seed, &[99]);
    // nonzero biases so every path is exercised
    let mut flat = params.to_flat();
    for x in flat.iter_mut() {
        *x += r.gen_range(-0.1..0.1);
    }
    params.assign_flat(&flat);
    let user = rand_mat(&mut r, l, d);
    let friends: Vec<Array2<f64>> = (0..3).map(|_| rand_mat(&mut r, l, d)).collect();
    let doc = rand_mat(&mut r, l, d);
    let label = r.gen_range(0..2u8);
    let fr: Vec<&Array2<f64>> = friends.iter().collect();
    let inputs = Inputs { user: &user, friends: &fr, doc: &doc };
    let (_, trace) = predict(inputs, &params, &mode);
    let analytic = backward(&trace, inputs, &params, &mode, label).to_flat();

    let loss = |p: &ModelParams| bce_loss(&[(predict(inputs, p, &mode).0, label)]);
    let step = 1e-5;
    let mut probe = params.clone();
    let mut worst: f64 = 0.0;
    for i in 0..flat.len() {
        let mut f = flat.clone();
        f[i] += step;
        probe.assign_flat(&f);
        let up = loss(&probe);
        f[i] -= 2.0 * step;
        probe.assign_flat(&f);
        let down = loss(&probe);
        let numeric = (up - down) / (2.0 * step);
        let a = analytic[i];
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    worst
}

pub fn all_modes() -> Vec<SocialMode> {
    let mut modes: Vec<SocialMode> = socrec::model::Kernel::all().into_iter().map(SocialMode::Static).collect();
    modes.push(SocialMode::Dynamic);
    modes
}
