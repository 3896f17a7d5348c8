//! Quadrature oracle for the Fourier coefficients, and the normalization
//! audit built on it.
//!
//! `a_w'(r, s) = (1/|L|) int_P E(z + rj, s) e(-<w', z>) dA` over a fundamental
//! parallelogram `P`. The integrand is smooth and periodic, so the trapezoid
//! rule on an `n x n` grid is exact up to aliasing from modes `n` steps away.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hspace::HPoint;
use crate::lattice::{pairing, CLattice};
use crate::numfield::ImagQuadField;
use crate::specfun::{dedekind_zeta, e_char, ordered_par_sum_c};

use super::{check_s, pair_sum_ewald, DEFAULT_MARGIN};

/// Trapezoid grid with `n` points per side of the parallelogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureGrid {
    pub n: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { n: 24 }
    }
}

/// Minimal samples per period of the character.
const SAMPLES_PER_PERIOD: usize = 16;

pub fn fourier_coefficient_quadrature(
    f: &ImagQuadField,
    w: Complex64,
    r: f64,
    s: f64,
    grid: QuadratureGrid,
) -> Result<Complex64> {
    check_s(s, DEFAULT_MARGIN)?;
    if !(r > 0.0) {
        return Err(Error::OutsideHalfSpace(r));
    }
    let lat = CLattice::ring_of_integers(f);
    // frequencies of e(<w', z>) along the two sides of P
    let (fm, fn_) = (pairing(w, lat.w1).round().abs(), pairing(w, lat.w2).round().abs());
    let need = (SAMPLES_PER_PERIOD as f64 * fm.max(fn_).max(1.0)) as usize;
    if grid.n < need {
        return Err(Error::GridResolution(need as f64));
    }
    let z = dedekind_zeta(f, 1.0 + s)?;
    let n = grid.n;
    let nodes: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let total = ordered_par_sum_c(&nodes, 16, |&(i, j)| {
        let p = lat.w1 * (i as f64 / n as f64) + lat.w2 * (j as f64 / n as f64);
        let u = HPoint { z: p, r };
        let e = pair_sum_ewald(f, &u, s).expect("valid point") / (2.0 * z);
        e_char(-pairing(w, p)) * e
    });
    Ok(total / (n * n) as f64)
}

/// Result of fitting the coset-sum zero mode against `zeta_K(s)/zeta_K(s+1)`.
#[derive(Clone, Debug)]
pub struct NormalizationAudit {
    pub field: ImagQuadField,
    pub s_values: Vec<f64>,
    /// `phi_0(s)` recovered from quadrature of the coset sum
    pub phi0: Vec<f64>,
    /// fitted coefficient of `r^(1+s)` in the zero mode, per `s`
    pub cusp_term: Vec<f64>,
    /// least-squares constant `kappa` in `phi_0 = kappa zeta_K(s)/zeta_K(s+1)`
    pub kappa: f64,
    /// best rational approximation `p/q`, `q <= 12`
    pub rational: (i64, i64),
    /// max relative fit residual
    pub fit_residual: f64,
}

/// Determine the constants of the zero mode from the coset sum itself.
///
/// At each `s` the quadrature zero mode at two heights separates
/// `A r^(1+s) + B r^(1-s)`; `phi_0 = B s |L| / pi` is then fitted against
/// `zeta_K(s)/zeta_K(s+1)`.
pub fn normalization_audit(f: &ImagQuadField) -> Result<NormalizationAudit> {
    let s_values = vec![1.5, 2.0, 2.5, 3.0];
    let (r1, r2) = (0.8, 1.25);
    let grid = QuadratureGrid { n: 16 };
    let area = CLattice::ring_of_integers(f).area();
    let mut phi0 = Vec::new();
    let mut cusp_term = Vec::new();
    let mut shape = Vec::new();
    for &s in &s_values {
        let a1 = fourier_coefficient_quadrature(f, 0.0.into(), r1, s, grid)?.re;
        let a2 = fourier_coefficient_quadrature(f, 0.0.into(), r2, s, grid)?.re;
        // [r^(1+s) r^(1-s)] [A B]^T = a
        let (p1, q1, p2, q2) = (r1.powf(1.0 + s), r1.powf(1.0 - s), r2.powf(1.0 + s), r2.powf(1.0 - s));
        let det = p1 * q2 - p2 * q1;
        let a = (a1 * q2 - a2 * q1) / det;
        let b = (p1 * a2 - p2 * a1) / det;
        cusp_term.push(a);
        phi0.push(b * s * area / std::f64::consts::PI);
        shape.push(dedekind_zeta(f, s)? / dedekind_zeta(f, s + 1.0)?);
    }
    let num: f64 = phi0.iter().zip(&shape).map(|(p, z)| p * z).sum();
    let den: f64 = shape.iter().map(|z| z * z).sum();
    let kappa = num / den;
    let fit_residual = phi0
        .iter()
        .zip(&shape)
        .map(|(p, z)| ((p - kappa * z) / p).abs())
        .fold(0.0, f64::max);
    let rational = (1..=12)
        .map(|q| ((kappa * q as f64).round() as i64, q))
        .min_by(|a, b| {
            let ea = (kappa - a.0 as f64 / a.1 as f64).abs();
            let eb = (kappa - b.0 as f64 / b.1 as f64).abs();
            ea.total_cmp(&eb)
        })
        .expect("nonempty range");
    Ok(NormalizationAudit { field: *f, s_values, phi0, cusp_term, kappa, rational, fit_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::fourier::fourier_coefficient;

    #[test]
    fn quadrature_matches_closed_form() {
        let f = ImagQuadField::gaussian();
        for w in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)] {
            let q = fourier_coefficient_quadrature(&f, w, 0.8, 2.0, QuadratureGrid::default()).unwrap();
            let c = fourier_coefficient(&f, w, 0.8, 2.0).unwrap();
            assert!((q - c).norm() < 1e-9, "w={w}: {q} {c}");
        }
        // a mode far out is exponentially small
        let w = Complex64::new(0.0, 5.0);
        let far = fourier_coefficient_quadrature(&f, w, 0.8, 2.0, QuadratureGrid { n: 80 }).unwrap();
        assert!(far.norm() < 1e-7);
        assert!((far - fourier_coefficient(&f, w, 0.8, 2.0).unwrap()).norm() < 1e-11);
    }

    #[test]
    fn quadrature_rejects_coarse_grids() {
        let f = ImagQuadField::gaussian();
        let r = fourier_coefficient_quadrature(&f, Complex64::new(3.0, 0.0), 0.8, 2.0, QuadratureGrid { n: 24 });
        assert!(matches!(r, Err(Error::GridResolution(_))));
    }

    #[test]
    fn audit_finds_unit_multiplicity() {
        for d in [-1, -3, -7] {
            let f = ImagQuadField::new(d).unwrap();
            let a = normalization_audit(&f).unwrap();
            let k = f.cusp_index() as f64;
            assert!(a.fit_residual < 1e-6, "d={d}: {a:?}");
            assert_eq!(a.rational, (k as i64, 1), "d={d}: {a:?}");
            assert!((a.kappa - k).abs() < 1e-6);
            assert!(a.cusp_term.iter().all(|c| (c - k).abs() < 1e-6));
        }
    }
}
