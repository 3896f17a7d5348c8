//! Laurent data at `s = 1`.
//!
//! With `phi_0(s) = a/(s-1) + b + O(s-1)` the zero mode is
//! `a_0(r, s) = k r^(1+s) + pi/(s|L|) phi_0(s) r^(1-s)`, and expanding
//! `1/s = 1 - (s-1)`, `r^(1-s) = 1 - (s-1) log r` gives
//!
//! ```text
//! a_0(r, s) = alpha/(s-1) + beta(r) + O(s-1),
//! alpha = a pi/|L|,   beta(r) = k r^2 + pi/|L| (b - a - a log r).
//! ```

use std::f64::consts::PI;

use crate::cosets::unit_multiplicity;
use crate::error::{Error, Result};
use crate::hspace::HPoint;
use crate::lattice::CLattice;
use crate::numfield::ImagQuadField;
use crate::specfun::{
    dedekind_zeta, dedekind_zeta_residue, digamma, gamma, l_function, vol_gamma, EULER_GAMMA,
};

use super::ewald::EpsteinSplit;
use super::fourier::{coefficient_from_phi, phi};

/// The step schedule used for all extrapolations to `s = 1`.
pub const EPS_SCHEDULE: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Two-level Richardson extrapolation for a ratio-2 schedule of a quantity
/// with an expansion in integer powers of `eps`. Returns the value and the
/// change of the last level as an error estimate.
pub fn richardson(v: [f64; 3]) -> (f64, f64) {
    let r1a = 2.0 * v[1] - v[0];
    let r1b = 2.0 * v[2] - v[1];
    let r2 = (4.0 * r1b - r1a) / 3.0;
    (r2, (r2 - r1b).abs())
}

/// Central difference with one Richardson step, error `O(h^4)`.
pub(crate) fn derivative(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (g(x + h) - g(x - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// `zeta_K'(s) / zeta_K(s)` for `s > 1`.
pub(crate) fn zeta_k_log_derivative(f: &ImagQuadField, s: f64) -> f64 {
    derivative(|t| dedekind_zeta(f, t).expect("s > 1").ln(), s, 1e-3)
}

#[derive(Clone, Copy, Debug)]
pub struct LaurentPhi0 {
    /// residue of `phi_0` at `s = 1`
    pub a: f64,
    /// constant term, by extrapolation in `eps`
    pub b: f64,
    pub b_err: f64,
    /// constant term from the Laurent series of `zeta(s) L(s, chi)`
    pub b_series: f64,
}

/// Residue and constant term of `phi_0(s) = k zeta_K(s)/zeta_K(s+1)`.
pub fn laurent_phi0(f: &ImagQuadField) -> Result<LaurentPhi0> {
    let k = unit_multiplicity(f) as f64;
    let z2 = dedekind_zeta(f, 2.0)?;
    let res = dedekind_zeta_residue(f);
    let a = k * res / z2;
    let mut v = [0.0; 3];
    for (i, e) in EPS_SCHEDULE.iter().enumerate() {
        // s - 1 as represented, not the nominal eps
        let s = 1.0 + e;
        let e = s - 1.0;
        v[i] = phi(f, 0.0.into(), s)? - a / e;
    }
    let (b, b_err) = richardson(v);
    if b_err > 1e-4 {
        return Err(Error::Extrapolation(b_err));
    }
    // zeta_K(s) = L(1)/(s-1) + gamma L(1) + L'(1) + O(s-1)
    let disc = f.disc();
    let l1 = res;
    let dl1 = derivative(|t| l_function(disc, t), 1.0, 1e-2);
    let c0 = EULER_GAMMA * l1 + dl1;
    let b_series = k * (c0 / z2 - l1 * zeta_k_log_derivative(f, 2.0) / z2);
    Ok(LaurentPhi0 { a, b, b_err, b_series })
}

#[derive(Clone, Copy, Debug)]
pub struct LaurentA0 {
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `k r^2 + pi/|L| (b - (a+1) log r)`, the form printed in the source,
    /// kept for reports
    pub beta_as_printed: f64,
}

/// `alpha` and `beta(r)` of the zero mode.
pub fn laurent_a0(f: &ImagQuadField, r: f64) -> Result<LaurentA0> {
    if !(r > 0.0) {
        return Err(Error::OutsideHalfSpace(r));
    }
    let lp = laurent_phi0(f)?;
    let k = unit_multiplicity(f) as f64;
    let area = CLattice::ring_of_integers(f).area();
    let c = PI / area;
    let b = lp.b_series;
    Ok(LaurentA0 {
        r,
        alpha: lp.a * c,
        beta: k * r * r + c * (b - lp.a - lp.a * r.ln()),
        beta_as_printed: k * r * r + c * (b - (lp.a + 1.0) * r.ln()),
    })
}

/// `lim (a_0(r, 1+eps) - alpha/eps)` by extrapolation, with error estimate.
pub fn laurent_a0_numeric(f: &ImagQuadField, r: f64) -> Result<(f64, f64)> {
    let alpha = laurent_a0(f, r)?.alpha;
    let mut v = [0.0; 3];
    for (i, e) in EPS_SCHEDULE.iter().enumerate() {
        let s = 1.0 + e;
        let e = s - 1.0;
        let p = phi(f, 0.0.into(), s)?;
        v[i] = coefficient_from_phi(f, 0.0.into(), r, s, p)? - alpha / e;
    }
    Ok(richardson(v))
}

/// `lim_{s -> 1} (E(u, s) - alpha/(s-1))` from the theta splitting, with the
/// pole removed analytically.
///
/// `E(s) = g(s) (S_reg(1+s) + 1/(s-1))` with
/// `g(s) = (r pi / det^(1/4))^(1+s) / (Gamma(1+s) 2 zeta_K(1+s))`, so the limit
/// is `g(1) S_reg(2) + g'(1)` and `g(1) = alpha`.
pub fn constant_term_at_one(f: &ImagQuadField, u: &HPoint) -> Result<f64> {
    let split = EpsteinSplit::for_point(f, u)?;
    let x = u.r * PI / split.scale;
    let g1 = x * x / (gamma(2.0) * 2.0 * dedekind_zeta(f, 2.0)?);
    let dlog = x.ln() - digamma(2.0) - zeta_k_log_derivative(f, 2.0);
    Ok(g1 * split.regular(2.0) + g1 * dlog)
}

/// Residue of `E` at `s = 1`: numerical extrapolation of `eps E(u, 1+eps)`
/// against the two closed forms.
#[derive(Clone, Copy, Debug)]
pub struct ResidueReport {
    pub numeric: f64,
    pub numeric_err: f64,
    /// `|L'| / vol(Gamma)`
    pub dual_area_over_volume: f64,
    /// `a pi / |L|`
    pub laurent_alpha: f64,
}

pub fn residue_experiment(f: &ImagQuadField, u: &HPoint) -> Result<ResidueReport> {
    let split = EpsteinSplit::for_point(f, u)?;
    let mut v = [0.0; 3];
    for (i, e) in EPS_SCHEDULE.iter().enumerate() {
        let s = 1.0 + e;
        let e = s - 1.0;
        let z = dedekind_zeta(f, 1.0 + s)?;
        v[i] = e * u.r.powf(1.0 + s) * split.zeta(1.0 + s)? / (2.0 * z);
    }
    let (numeric, numeric_err) = richardson(v);
    let lat = CLattice::ring_of_integers(f);
    Ok(ResidueReport {
        numeric,
        numeric_err,
        dual_area_over_volume: lat.dual().area() / vol_gamma(f),
        laurent_alpha: laurent_a0(f, u.r)?.alpha,
    })
}
