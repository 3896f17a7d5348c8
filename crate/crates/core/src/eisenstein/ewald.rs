//! Theta-function splitting of the full lattice-pair sum
//! `Z(sigma) = sum_{(c,d) != 0} Q(c,d)^-sigma`, `Q = |cz+d|^2 + |c|^2 r^2`,
//! a positive definite quaternary form in the coordinates of `(c, d)`.
//!
//! With the form rescaled to determinant one and the split at `t = 1`,
//!
//! ```text
//! pi^-sigma Gamma(sigma) Z = sum_v (pi Q)^-sigma Gamma(sigma, pi Q)
//!                          + sum_k (pi Q*)^(sigma-2) Gamma(2-sigma, pi Q*)
//!                          - 1/sigma + 1/(sigma - 2)
//! ```
//!
//! where `Q*` is the inverse form. The last term carries the pole at
//! `sigma = 2`; everything else is entire in `sigma`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hspace::HPoint;
use crate::lattice::short_vectors;
use crate::numfield::ImagQuadField;
use crate::specfun::{gamma, ordered_par_sum, upper_gamma};

/// Exponential cutoff: terms below `exp(-CUTOFF)` relative are dropped.
const CUTOFF: f64 = 42.0;

/// Gram matrix of `(c1, c2, d1, d2) -> |cz+d|^2 + |c|^2 r^2` with
/// `c = c1 + c2 omega`, `d = d1 + d2 omega`.
pub fn pair_gram(f: &ImagQuadField, u: &HPoint) -> [[f64; 4]; 4] {
    let w = f.omega();
    let b = [u.z, w * u.z, 1.0.into(), w];
    let h = [u.r.into(), w * u.r, 0.0.into(), 0.0.into()];
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = (b[i] * b[j].conj()).re + (h[i] * h[j].conj()).re;
        }
    }
    g
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for i in 0..4 {
        let p = (i..4).max_by(|&x, &y| a[x][i].abs().total_cmp(&a[y][i].abs())).unwrap();
        if a[p][i] == 0.0 {
            return 0.0;
        }
        if p != i {
            a.swap(p, i);
            det = -det;
        }
        det *= a[i][i];
        for k in i + 1..4 {
            let l = a[k][i] / a[i][i];
            for j in i..4 {
                a[k][j] -= l * a[i][j];
            }
        }
    }
    det
}

fn inverse4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for i in 0..4 {
        let p = (i..4).max_by(|&x, &y| a[x][i].abs().total_cmp(&a[y][i].abs())).unwrap();
        a.swap(p, i);
        inv.swap(p, i);
        let piv = a[i][i];
        for j in 0..4 {
            a[i][j] /= piv;
            inv[i][j] /= piv;
        }
        for k in 0..4 {
            if k != i {
                let l = a[k][i];
                for j in 0..4 {
                    a[k][j] -= l * a[i][j];
                    inv[k][j] -= l * inv[i][j];
                }
            }
        }
    }
    inv
}

/// Precomputed short vectors of a form and of its inverse.
#[derive(Clone, Debug)]
pub struct EpsteinSplit {
    /// `det(A)^(1/4)`
    pub scale: f64,
    /// values of the normalized form on its short vectors
    direct: Vec<f64>,
    dual: Vec<f64>,
}

impl EpsteinSplit {
    pub fn new(gram: &[[f64; 4]; 4]) -> Result<Self> {
        let det = det4(gram);
        if !(det > 0.0) {
            return Err(Error::Domain("pair form is not positive definite".into()));
        }
        let scale = det.powf(0.25);
        let mut b = *gram;
        b.iter_mut().flatten().for_each(|x| *x /= scale);
        let binv = inverse4(&b);
        let bound = CUTOFF / PI;
        let mut direct: Vec<f64> = short_vectors(&b, bound)?.into_iter().map(|p| p.1).collect();
        let mut dual: Vec<f64> = short_vectors(&binv, bound)?.into_iter().map(|p| p.1).collect();
        // fixed summation order, independent of the enumeration
        direct.sort_by(|x, y| x.total_cmp(y));
        dual.sort_by(|x, y| x.total_cmp(y));
        Ok(Self { scale, direct, dual })
    }

    pub fn for_point(f: &ImagQuadField, u: &HPoint) -> Result<Self> {
        Self::new(&pair_gram(f, u))
    }

    /// The entire part `S_reg(sigma)` of `pi^-sigma Gamma(sigma) Z_B(sigma)`,
    /// i.e. everything except `1/(sigma - 2)`, for the normalized form `B`.
    pub fn regular(&self, sigma: f64) -> f64 {
        let d = ordered_par_sum(&self.direct, 256, |&q| {
            let x = PI * q;
            x.powf(-sigma) * upper_gamma(sigma, x)
        });
        let k = ordered_par_sum(&self.dual, 256, |&q| {
            let x = PI * q;
            x.powf(sigma - 2.0) * upper_gamma(2.0 - sigma, x)
        });
        d + k - 1.0 / sigma
    }

    /// `sum_{v != 0} Q(v)^-sigma` for `sigma != 2`.
    pub fn zeta(&self, sigma: f64) -> Result<f64> {
        if (sigma - 2.0).abs() < 1e-14 {
            return Err(Error::Domain("the pair sum has a pole at sigma = 2".into()));
        }
        let s = self.regular(sigma) + 1.0 / (sigma - 2.0);
        Ok(PI.powf(sigma) / gamma(sigma) * self.scale.powf(-sigma) * s)
    }
}
