//! The Eisenstein series `E(u, s)` of `PSL(2, O_K)` at the cusp `inf`,
//!
//! ```text
//! E(u, s) = sum_{M in Gamma'_inf \ Gamma} r(Mu)^(1+s)
//!         = 1/2 sum_{(c,d) coprime} (r / (|cz+d|^2 + |c|^2 r^2))^(1+s),
//! ```
//!
//! the full lattice-pair sum `E_hat = 2 zeta_K(s+1) E`, their Fourier
//! coefficients and the Laurent data at `s = 1`.

pub mod ewald;
pub mod fourier;
pub mod laurent;
mod quadrature;

use std::f64::consts::PI;

use crate::cosets::coset_reps_infinity;
use crate::error::{Error, Result};
use crate::hspace::HPoint;
use crate::lattice::CLattice;
use crate::numfield::ImagQuadField;
use crate::specfun::{dedekind_zeta, ordered_par_sum};

pub use ewald::EpsteinSplit;
pub use fourier::{
    default_radius, dual_label, dual_point, dual_points, fourier_coefficient, fourier_reconstruction, phi,
    phi_bruteforce, ModeTable, PhiValue,
};
pub use laurent::{
    constant_term_at_one, laurent_a0, laurent_a0_numeric, laurent_phi0, residue_experiment, LaurentA0,
    LaurentPhi0, ResidueReport,
};
pub use quadrature::{fourier_coefficient_quadrature, normalization_audit, NormalizationAudit, QuadratureGrid};

/// How the coset sum is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DirectMethod {
    /// Every pair `(c, d)` via the theta splitting; exact up to `e^-42`.
    Ewald,
    /// The literal coset sum over `|c| <= c_max`, `|d| <= d_max`.
    Truncated { c_max: f64, d_max: f64 },
}

/// A value of `E` or `E_hat`.
#[derive(Clone, Copy, Debug)]
pub struct EisensteinValue {
    pub u: HPoint,
    pub s: f64,
    pub value: f64,
    pub method: DirectMethod,
    /// estimate of the omitted part
    pub tail_bound: f64,
}

/// Convergence margin required to the right of `s = 1`.
pub const DEFAULT_MARGIN: f64 = 0.2;

fn check_s(s: f64, margin: f64) -> Result<()> {
    if !(s > 1.0 + margin) || !s.is_finite() {
        return Err(Error::Domain(format!("the coset sum needs s > {}, got {s}", 1.0 + margin)));
    }
    Ok(())
}

/// `sum_{(c,d) != 0} (r/Q)^(1+s)` via the theta splitting, valid for all real
/// `s != 1`.
pub fn pair_sum_ewald(f: &ImagQuadField, u: &HPoint, s: f64) -> Result<f64> {
    let split = EpsteinSplit::for_point(f, u)?;
    Ok(u.r.powf(1.0 + s) * split.zeta(1.0 + s)?)
}

fn truncated_sum(f: &ImagQuadField, u: &HPoint, s: f64, c_max: f64, d_max: f64) -> Result<(f64, f64)> {
    let rows = coset_reps_infinity(f, c_max, d_max)?;
    let sum = ordered_par_sum(&rows, 1024, |row| {
        let c = row.c.to_complex();
        let q = (c * u.z + row.d.to_complex()).norm_sqr() + c.norm_sqr() * u.r * u.r;
        (u.r / q).powf(1.0 + s)
    });
    // continuum estimates of the omitted pairs, coprime density 1/zeta_K(2)
    let area = CLattice::ring_of_integers(f).area();
    let z2 = dedekind_zeta(f, 2.0)?;
    let c_tail = PI * PI * u.r.powf(1.0 - s) * c_max.max(1.0).powf(2.0 - 2.0 * s)
        / (2.0 * s * (s - 1.0) * area * area * z2);
    let d_eff = (d_max - c_max * u.z.norm()).max(1.0);
    let d_tail = 0.5 * (PI * c_max * c_max / area) * PI * u.r.powf(1.0 + s) * d_eff.powf(-2.0 * s)
        / (s * area * z2);
    Ok((sum, c_tail + d_tail))
}

/// `E(u, s)` for `s > 1 + DEFAULT_MARGIN`. With `tol`, a tail estimate above
/// it is an error.
pub fn eisenstein_direct(
    f: &ImagQuadField,
    u: &HPoint,
    s: f64,
    method: DirectMethod,
    tol: Option<f64>,
) -> Result<EisensteinValue> {
    check_s(s, DEFAULT_MARGIN)?;
    let (value, tail_bound) = match method {
        DirectMethod::Ewald => {
            let z = dedekind_zeta(f, 1.0 + s)?;
            let v = pair_sum_ewald(f, u, s)? / (2.0 * z);
            (v, v * (-40.0f64).exp())
        }
        DirectMethod::Truncated { c_max, d_max } => truncated_sum(f, u, s, c_max, d_max)?,
    };
    if let Some(t) = tol {
        if tail_bound > t {
            return Err(Error::Truncation { bound: tail_bound, tol: t });
        }
    }
    Ok(EisensteinValue { u: *u, s, value, method, tail_bound })
}

/// `E_hat(u, s) = sum_{(c,d) != 0} (r / (|cz+d|^2 + |c|^2 r^2))^(1+s)`.
pub fn eisenstein_hat(
    f: &ImagQuadField,
    u: &HPoint,
    s: f64,
    method: DirectMethod,
    tol: Option<f64>,
) -> Result<EisensteinValue> {
    check_s(s, DEFAULT_MARGIN)?;
    let (value, tail_bound) = match method {
        DirectMethod::Ewald => {
            let v = pair_sum_ewald(f, u, s)?;
            (v, v * (-40.0f64).exp())
        }
        DirectMethod::Truncated { c_max, d_max } => {
            // every pair is g (c', d') with (c', d') coprime, g up to units
            let z = dedekind_zeta(f, 1.0 + s)?;
            let (e, t) = truncated_sum(f, u, s, c_max, d_max)?;
            (2.0 * z * e, 2.0 * z * t)
        }
    };
    if let Some(t) = tol {
        if tail_bound > t {
            return Err(Error::Truncation { bound: tail_bound, tol: t });
        }
    }
    Ok(EisensteinValue { u: *u, s, value, method, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hspace::{moebius, IntMatrix};
    use crate::numfield::SUPPORTED_D;
    use crate::specfun::dedekind_zeta_element_sum;

    fn pt(x: f64, y: f64, r: f64) -> HPoint {
        HPoint::from_xyr(x, y, r).unwrap()
    }

    #[test]
    fn truncated_sums_increase_towards_ewald() {
        let f = ImagQuadField::gaussian();
        let u = pt(0.3, 0.4, 0.9);
        let exact = eisenstein_direct(&f, &u, 2.0, DirectMethod::Ewald, None).unwrap().value;
        let mut last = 0.0;
        for (c, d) in [(2.0, 6.0), (4.0, 12.0), (8.0, 24.0)] {
            let t = eisenstein_direct(&f, &u, 2.0, DirectMethod::Truncated { c_max: c, d_max: d }, None).unwrap();
            assert!(t.value > last && t.value < exact);
            // the continuum tail estimate accounts for the gap to within 30%
            let gap = exact - t.value;
            assert!((gap - t.tail_bound).abs() < 0.3 * gap, "{gap} vs {}", t.tail_bound);
            last = t.value;
        }
    }

    #[test]
    fn regression_value_at_j() {
        let f = ImagQuadField::gaussian();
        let e = eisenstein_direct(&f, &HPoint::j(), 2.0, DirectMethod::Ewald, None).unwrap().value;
        let again = eisenstein_direct(&f, &HPoint::j(), 2.0, DirectMethod::Ewald, None).unwrap().value;
        assert_eq!(e, again);
        // z = 0, r = 1: the pair sum is sum r_4(n) n^-3 = 8 (1 - 4^-2) zeta(3) zeta(2) and
        // zeta_K(3) = zeta(3) pi^3 / 32, so E(j, 2) = 20 / pi
        let t = eisenstein_direct(&f, &HPoint::j(), 2.0, DirectMethod::Truncated { c_max: 12.0, d_max: 40.0 }, None)
            .unwrap();
        assert!((e - t.value).abs() < 2.0 * t.tail_bound);
        assert!((e - 20.0 / PI).abs() < 1e-12, "{e}");
    }

    #[test]
    fn translation_and_group_invariance() {
        for d in SUPPORTED_D {
            let f = ImagQuadField::new(d).unwrap();
            let u = pt(0.21, -0.13, 0.83);
            let e = eisenstein_direct(&f, &u, 2.0, DirectMethod::Ewald, None).unwrap().value;
            let v = u.translate(f.omega());
            let e2 = eisenstein_direct(&f, &v, 2.0, DirectMethod::Ewald, None).unwrap().value;
            assert!((e - e2).abs() < 1e-12 * e);
            let m = IntMatrix::new(f.one(), f.one(), f.one(), f.int(2)).unwrap();
            let mu = moebius(&m.to_complex(), &u).unwrap();
            let e3 = eisenstein_direct(&f, &mu, 2.0, DirectMethod::Ewald, None).unwrap().value;
            assert!((e - e3).abs() < 1e-10 * e, "d={d}: {e} {e3}");
        }
    }

    #[test]
    fn hat_factorization() {
        for d in SUPPORTED_D {
            let f = ImagQuadField::new(d).unwrap();
            let u = pt(0.1, 0.35, 1.1);
            for s in [1.5, 2.0] {
                let e = eisenstein_direct(&f, &u, s, DirectMethod::Ewald, None).unwrap().value;
                let h = eisenstein_hat(&f, &u, s, DirectMethod::Ewald, None).unwrap().value;
                // element-sum zeta(O, O, s+1) = w zeta_K(s+1)
                let w = f.unit_count() as f64;
                let zel = w * dedekind_zeta_element_sum(&f, s + 1.0, 20000).value;
                let want = 2.0 / w * zel * e;
                assert!((h - want).abs() < 1e-6 * h, "d={d} s={s}: {h} {want}");
            }
        }
    }

    #[test]
    fn direct_matches_fourier_reconstruction() {
        for d in [-1, -3, -7] {
            let f = ImagQuadField::new(d).unwrap();
            for u in [pt(0.3, 0.4, 0.9), HPoint::j(), pt(-0.2, 0.1, 0.7)] {
                for s in [1.5, 2.0] {
                    let e = eisenstein_direct(&f, &u, s, DirectMethod::Ewald, None).unwrap().value;
                    let fr = fourier_reconstruction(&f, &u, s, default_radius(u.r)).unwrap();
                    assert!((e - fr).abs() < 1e-9, "d={d} u={u} s={s}: {e} {fr}");
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let f = ImagQuadField::gaussian();
        let u = HPoint::j();
        assert!(eisenstein_direct(&f, &u, 1.1, DirectMethod::Ewald, None).is_err());
        let t = DirectMethod::Truncated { c_max: 2.0, d_max: 3.0 };
        assert!(matches!(eisenstein_direct(&f, &u, 2.0, t, Some(1e-12)), Err(Error::Truncation { .. })));
        assert!(fourier_reconstruction(&f, &u, 2.0, 1.0).is_err());
    }
}
