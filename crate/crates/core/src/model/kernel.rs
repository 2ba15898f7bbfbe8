//! Similarity functions for static social attention, with their gradients.

use ndarray::{Array1, ArrayView1, Zip};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum Kernel {
    Cosine,
    Polynomial { gamma: f64, c: f64, d: f64 },
    Sigmoid { gamma: f64, c: f64 },
    Rbf { gamma: f64 },
    Euclidean,
    Exponential { gamma: f64 },
    Manhattan,
    Gesd { gamma: f64, c: f64 },
    Aesd { gamma: f64, c: f64 },
}

impl Kernel {
    pub const NAMES: [&'static str; 9] = [
        "cosine",
        "polynomial",
        "sigmoid",
        "rbf",
        "euclidean",
        "exponential",
        "manhattan",
        "gesd",
        "aesd",
    ];

    /// Kernel with its reference parameterisation.
    pub fn by_name(name: &str) -> Option<Kernel> {
        Some(match name {
            "cosine" => Kernel::Cosine,
            "polynomial" => Kernel::Polynomial { gamma: 0.5, c: 1.0, d: 2.0 },
            "sigmoid" => Kernel::Sigmoid { gamma: 0.5, c: 1.0 },
            "rbf" => Kernel::Rbf { gamma: 0.5 },
            "euclidean" => Kernel::Euclidean,
            "exponential" => Kernel::Exponential { gamma: 0.5 },
            "manhattan" => Kernel::Manhattan,
            "gesd" => Kernel::Gesd { gamma: 0.5, c: 0.1 },
            "aesd" => Kernel::Aesd { gamma: 0.5, c: 0.1 },
            _ => return None,
        })
    }

    pub fn all() -> [Kernel; 9] {
        Self::NAMES.map(|n| Self::by_name(n).unwrap())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Cosine => "cosine",
            Kernel::Polynomial { .. } => "polynomial",
            Kernel::Sigmoid { .. } => "sigmoid",
            Kernel::Rbf { .. } => "rbf",
            Kernel::Euclidean => "euclidean",
            Kernel::Exponential { .. } => "exponential",
            Kernel::Manhattan => "manhattan",
            Kernel::Gesd { .. } => "gesd",
            Kernel::Aesd { .. } => "aesd",
        }
    }

    pub fn eval(&self, x: ArrayView1<f64>, y: ArrayView1<f64>) -> f64 {
        self.eval_grad(x, y, false).0
    }

    /// Value and, when `with_grad`, the partial derivatives in `x` and `y`.
    /// Norm-based kernels use the zero subgradient where the norm vanishes;
    /// cosine against a zero vector is 0 with zero gradient.
    pub fn eval_grad(
        &self,
        x: ArrayView1<f64>,
        y: ArrayView1<f64>,
        with_grad: bool,
    ) -> (f64, Option<(Array1<f64>, Array1<f64>)>) {
        let diff = || &x - &y;
        let sign = |d: &Array1<f64>| d.mapv(|t| if t > 0.0 { 1.0 } else if t < 0.0 { -1.0 } else { 0.0 });
        match *self {
            Kernel::Cosine => {
                let (nx, ny) = (x.dot(&x).sqrt(), y.dot(&y).sqrt());
                if nx == 0.0 || ny == 0.0 {
                    let g = with_grad.then(|| (Array1::zeros(x.len()), Array1::zeros(y.len())));
                    return (0.0, g);
                }
                let f = x.dot(&y) / (nx * ny);
                let g = with_grad.then(|| {
                    let gx = &y / (nx * ny) - &x * (f / (nx * nx));
                    let gy = &x / (nx * ny) - &y * (f / (ny * ny));
                    (gx, gy)
                });
                (f, g)
            }
            Kernel::Polynomial { gamma, c, d } => {
                let base = gamma * x.dot(&y) + c;
                let f = pow(base, d);
                let g = with_grad.then(|| {
                    let s = d * pow(base, d - 1.0) * gamma;
                    (&y * s, &x * s)
                });
                (f, g)
            }
            Kernel::Sigmoid { gamma, c } => {
                let f = (gamma * x.dot(&y) + c).tanh();
                let g = with_grad.then(|| {
                    let s = (1.0 - f * f) * gamma;
                    (&y * s, &x * s)
                });
                (f, g)
            }
            Kernel::Rbf { gamma } => {
                let dlt = diff();
                let f = (-gamma * dlt.dot(&dlt)).exp();
                let g = with_grad.then(|| {
                    let gx = &dlt * (-2.0 * gamma * f);
                    let gy = -&gx;
                    (gx, gy)
                });
                (f, g)
            }
            Kernel::Euclidean => {
                let dlt = diff();
                let r = dlt.dot(&dlt).sqrt();
                let f = 1.0 / (1.0 + r);
                let g = with_grad.then(|| euclid_grad(&dlt, r, -f * f));
                (f, g)
            }
            Kernel::Exponential { gamma } => {
                let dlt = diff();
                let r1 = dlt.iter().map(|t| t.abs()).sum::<f64>();
                let f = (-gamma * r1).exp();
                let g = with_grad.then(|| {
                    let gx = sign(&dlt) * (-gamma * f);
                    let gy = -&gx;
                    (gx, gy)
                });
                (f, g)
            }
            Kernel::Manhattan => {
                let dlt = diff();
                let r1 = dlt.iter().map(|t| t.abs()).sum::<f64>();
                let f = 1.0 / (1.0 + r1);
                let g = with_grad.then(|| {
                    let gx = sign(&dlt) * (-f * f);
                    let gy = -&gx;
                    (gx, gy)
                });
                (f, g)
            }
            Kernel::Gesd { gamma, c } | Kernel::Aesd { gamma, c } => {
                let dlt = diff();
                let r = dlt.dot(&dlt).sqrt();
                let e = 1.0 / (1.0 + r);
                let s = 1.0 / (1.0 + (-gamma * (x.dot(&y) + c)).exp());
                let product = matches!(self, Kernel::Gesd { .. });
                let f = if product { e * s } else { e + s };
                let g = with_grad.then(|| {
                    // d/dx of each factor
                    let (ex, ey) = euclid_grad(&dlt, r, -e * e);
                    let ds = s * (1.0 - s) * gamma;
                    let (sx, sy) = (&y * ds, &x * ds);
                    if product {
                        (ex * s + sx * e, ey * s + sy * e)
                    } else {
                        (ex + sx, ey + sy)
                    }
                });
                (f, g)
            }
        }
    }
}

fn pow(base: f64, d: f64) -> f64 {
    if d.fract() == 0.0 && d.abs() < i32::MAX as f64 {
        base.powi(d as i32)
    } else {
        base.powf(d)
    }
}

/// Gradient of `phi(||x - y||)` given `phi'(r)` as `outer`.
fn euclid_grad(dlt: &Array1<f64>, r: f64, outer: f64) -> (Array1<f64>, Array1<f64>) {
    if r == 0.0 {
        return (Array1::zeros(dlt.len()), Array1::zeros(dlt.len()));
    }
    let mut gx = Array1::zeros(dlt.len());
    Zip::from(&mut gx).and(dlt).for_each(|g, &d| *g = outer * d / r);
    let gy = -&gx;
    (gx, gy)
}
