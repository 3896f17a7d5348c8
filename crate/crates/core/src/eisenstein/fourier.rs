//! Dirichlet series `phi_w'(s)`, Fourier coefficients `a_w'(r, s)` and the
//! reconstruction of `E(u, s)` from them.
//!
//! The dual lattice of `O_K` under `<w, z> = Re(conj(w) z)` is
//! `(2i / sqrt|d_K|) O_K`; a dual point `w' = 2i conj(m) / sqrt|d_K|` is
//! labelled by `m in O_K`, and the Ramanujan sums in `phi_w'` collapse to
//!
//! ```text
//! phi_0(s)  = k zeta_K(s) / zeta_K(s+1)
//! phi_w'(s) = k sigma_{-s}((m)) / zeta_K(s+1)
//! ```
//!
//! with `k` the unit multiplicity and `sigma_{-s}` the ideal divisor sum.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::cosets::{double_coset_reps, unit_multiplicity};
use crate::error::{Error, Result};
use crate::hspace::HPoint;
use crate::lattice::{pairing, CLattice};
use crate::numfield::{ideal_divisor_sum, AlgInt, ImagQuadField};
use crate::specfun::{bessel_k, dedekind_zeta, e_char, gamma, ordered_par_sum_c};

/// `2i conj(m) / sqrt|d_K|`.
pub fn dual_point(m: AlgInt) -> Complex64 {
    let f = m.field;
    Complex64::new(0.0, 2.0 / f.abs_disc().sqrt()) * m.to_complex().conj()
}

/// Inverse of [`dual_point`]; errors if `w` is not in the dual lattice.
pub fn dual_label(f: &ImagQuadField, w: Complex64) -> Result<AlgInt> {
    let z = (w * f.abs_disc().sqrt() / Complex64::new(0.0, 2.0)).conj();
    let ok = CLattice::ring_of_integers(f);
    let (x, y) = ok.coordinates(z);
    let (xr, yr) = (x.round(), y.round());
    if (x - xr).abs() > 1e-8 || (y - yr).abs() > 1e-8 {
        return Err(Error::Domain(format!("{w} is not in the dual lattice")));
    }
    Ok(f.elt(xr as i64, yr as i64))
}

/// Dual lattice points `w'` with `|w'| <= radius`, excluding 0, ordered by
/// modulus then argument, with their labels.
pub fn dual_points(f: &ImagQuadField, radius: f64) -> Vec<(AlgInt, Complex64)> {
    // |w'| = 2 |m| / sqrt|d_K|
    let bound = (radius * radius * f.abs_disc() / 4.0 + 1e-9).floor() as i64;
    let mut out: Vec<(AlgInt, Complex64)> = f
        .elements_up_to_norm(bound)
        .into_iter()
        .filter(|m| !m.is_zero())
        .map(|m| (m, dual_point(m)))
        .collect();
    out.sort_by(|a, b| a.0.norm().cmp(&b.0.norm()).then_with(|| a.1.arg().total_cmp(&b.1.arg())));
    out
}

/// Closed form of `phi_w'(s)`. For `w' = 0` this needs `s > 1`; otherwise
/// `s > 0`.
pub fn phi(f: &ImagQuadField, w: Complex64, s: f64) -> Result<f64> {
    let k = unit_multiplicity(f) as f64;
    if w.norm() < 1e-12 {
        if !(s > 1.0) {
            return Err(Error::Domain(format!("phi_0 needs s > 1, got {s}")));
        }
        return Ok(k * dedekind_zeta(f, s)? / dedekind_zeta(f, s + 1.0)?);
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("phi needs s > 0, got {s}")));
    }
    let m = dual_label(f, w)?;
    Ok(k * ideal_divisor_sum(m, s) / dedekind_zeta(f, s + 1.0)?)
}

/// A truncated coset sum for `phi` with its tail estimate.
#[derive(Clone, Copy, Debug)]
pub struct PhiValue {
    pub value: Complex64,
    pub c_max: f64,
    pub tail_bound: f64,
}

/// `phi_w'(s)` summed over the double cosets with `|c| <= c_max`:
/// `sum e(<w', d/c>) / |c|^(2+2s)`.
pub fn phi_bruteforce(f: &ImagQuadField, w: Complex64, s: f64, c_max: f64) -> Result<PhiValue> {
    if !(s > 0.5) {
        return Err(Error::Domain(format!("phi_bruteforce needs s > 1/2, got {s}")));
    }
    if !(c_max >= 1.0) {
        return Err(Error::Domain(format!("c_max must be at least 1, got {c_max}")));
    }
    let reps = double_coset_reps(f, c_max)?.finite;
    let value = ordered_par_sum_c(&reps, 512, |rep| {
        let c = rep.c.to_complex();
        let x = rep.d.to_complex() / c;
        e_char(pairing(w, x)) * c.norm_sqr().powf(-1.0 - s)
    });
    // |Ramanujan sum| <= N(c); c has density 1/|L|, halved by the sign
    let area = CLattice::ring_of_integers(f).area();
    let tail_bound = if w.norm() < 1e-12 {
        PI / area * c_max.powf(2.0 - 2.0 * s) / (2.0 * s - 2.0).max(1e-300)
    } else {
        // Ramanujan sums are bounded by the divisor sum of w
        let m = dual_label(f, w)?;
        let sig = ideal_divisor_sum(m, -1.0);
        sig * PI / area * c_max.powf(-2.0 * s) / (2.0 * s)
    };
    Ok(PhiValue { value, c_max, tail_bound })
}

/// `a_w'(r, s)` in closed form: for `w' = 0`
/// `k r^(1+s) + pi/(s |L|) phi_0(s) r^(1-s)`, otherwise
/// `2 pi^(1+s) |w'|^s phi_w'(s) r K_s(2 pi |w'| r) / (|L| Gamma(1+s))`.
pub fn fourier_coefficient(f: &ImagQuadField, w: Complex64, r: f64, s: f64) -> Result<Complex64> {
    let p = phi(f, w, s)?;
    Ok(coefficient_from_phi(f, w, r, s, p)?.into())
}

pub(crate) fn coefficient_from_phi(f: &ImagQuadField, w: Complex64, r: f64, s: f64, p: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::OutsideHalfSpace(r));
    }
    let area = CLattice::ring_of_integers(f).area();
    if w.norm() < 1e-12 {
        let k = unit_multiplicity(f) as f64;
        return Ok(k * r.powf(1.0 + s) + PI / (s * area) * p * r.powf(1.0 - s));
    }
    let a = w.norm();
    let x = 2.0 * PI * a * r;
    if x > 745.0 {
        return Ok(0.0);
    }
    Ok(2.0 * PI.powf(1.0 + s) * a.powf(s) * p * r * bessel_k(s, x)? / (area * gamma(1.0 + s)))
}

/// Nonzero modes with `|w'| <= radius` and their `phi_w'(s)`.
#[derive(Clone, Debug)]
pub struct ModeTable {
    pub field: ImagQuadField,
    pub s: f64,
    pub radius: f64,
    pub modes: Vec<(Complex64, f64)>,
}

type TableKey = (i64, u64, u64);

fn table_cache() -> &'static Mutex<HashMap<TableKey, ModeTable>> {
    static CACHE: std::sync::OnceLock<Mutex<HashMap<TableKey, ModeTable>>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl ModeTable {
    pub fn new(f: &ImagQuadField, s: f64, radius: f64) -> Result<Self> {
        let key = (f.d(), s.to_bits(), radius.to_bits());
        if let Some(t) = table_cache().lock().expect("cache lock").get(&key) {
            return Ok(t.clone());
        }
        let z = dedekind_zeta(f, s + 1.0)?;
        let k = unit_multiplicity(f) as f64;
        let modes = dual_points(f, radius)
            .into_iter()
            .map(|(m, w)| (w, k * ideal_divisor_sum(m, s) / z))
            .collect();
        let t = Self { field: *f, s, radius, modes };
        table_cache().lock().expect("cache lock").insert(key, t.clone());
        Ok(t)
    }

    /// `sum_{0 < |w'| <= R} a_w'(r, s) e(<w', z>)`.
    pub fn nonzero_part(&self, u: &HPoint) -> Result<f64> {
        let f = self.field;
        let terms: Vec<(Complex64, f64)> = self
            .modes
            .iter()
            .map(|&(w, p)| coefficient_from_phi(&f, w, u.r, self.s, p).map(|a| (w, a)))
            .collect::<Result<_>>()?;
        Ok(ordered_par_sum_c(&terms, 256, |&(w, a)| e_char(pairing(w, u.z)) * a).re)
    }
}

/// Radius with `2 pi R r >= 40`, where the omitted modes are below `e^-40`.
pub fn default_radius(r: f64) -> f64 {
    40.0 / (2.0 * PI * r)
}

/// `E(u, s)` summed from its Fourier expansion over `|w'| <= radius`.
pub fn fourier_reconstruction(f: &ImagQuadField, u: &HPoint, s: f64, radius: f64) -> Result<f64> {
    if 2.0 * PI * radius * u.r < 40.0 - 1e-9 {
        return Err(Error::Truncation { bound: radius, tol: 40.0 / (2.0 * PI * u.r) });
    }
    let a0 = fourier_coefficient(f, Complex64::new(0.0, 0.0), u.r, s)?.re;
    Ok(a0 + ModeTable::new(f, s, radius)?.nonzero_part(u)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::SUPPORTED_D;

    #[test]
    fn dual_points_pair_integrally() {
        for d in SUPPORTED_D {
            let f = ImagQuadField::new(d).unwrap();
            let ok = CLattice::ring_of_integers(&f);
            let dual = ok.dual().0;
            for (m, w) in dual_points(&f, 4.0) {
                assert!(dual.contains(w, 1e-9), "d={d} {w}");
                assert_eq!(dual_label(&f, w).unwrap(), m);
            }
            assert!(dual_label(&f, Complex64::new(0.1, 0.0)).is_err());
            // same count as the generic enumeration of the dual lattice
            assert_eq!(dual_points(&f, 4.0).len(), ok.dual().shells(4.0).len());
        }
        // Z[i] is self-dual
        let g = ImagQuadField::gaussian();
        assert!((dual_point(g.one()) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn closed_form_phi_matches_coset_sum() {
        for d in [-1, -3, -2] {
            let f = ImagQuadField::new(d).unwrap();
            for (_, w) in dual_points(&f, 2.0).into_iter().take(6) {
                let s = 2.0;
                let brute = phi_bruteforce(&f, w, s, 25.0).unwrap();
                let exact = phi(&f, w, s).unwrap();
                assert!(brute.value.im.abs() < 1e-12);
                let err = (brute.value.re - exact).abs();
                assert!(err < brute.tail_bound.max(1e-9), "d={d} w={w}: {err} > {}", brute.tail_bound);
                assert!(err < 1e-4);
            }
            let brute0 = phi_bruteforce(&f, 0.0.into(), 3.0, 25.0).unwrap();
            let exact0 = phi(&f, 0.0.into(), 3.0).unwrap();
            assert!((brute0.value.re - exact0).abs() < brute0.tail_bound);
        }
    }

    #[test]
    fn phi_symmetries_at_one() {
        for d in [-1, -3] {
            let f = ImagQuadField::new(d).unwrap();
            for (_, w) in dual_points(&f, 3.0) {
                let a = phi_bruteforce(&f, w, 1.0, 12.0).unwrap().value;
                let b = phi_bruteforce(&f, w.conj(), 1.0, 12.0).unwrap().value;
                let c = phi_bruteforce(&f, -w, 1.0, 12.0).unwrap().value;
                assert!((a - b).norm() < 1e-12);
                assert!((c - a.conj()).norm() < 1e-12);
                let pa = phi(&f, w, 1.0).unwrap();
                assert_eq!(pa, phi(&f, w.conj(), 1.0).unwrap());
                assert_eq!(pa, phi(&f, -w, 1.0).unwrap());
            }
        }
    }

    #[test]
    fn phi_domain_errors() {
        let f = ImagQuadField::gaussian();
        assert!(phi(&f, 0.0.into(), 1.0).is_err());
        assert!(phi(&f, 1.0.into(), 0.0).is_err());
        assert!(phi(&f, Complex64::new(0.3, 0.0), 2.0).is_err());
        assert!(phi_bruteforce(&f, 1.0.into(), 2.0, 0.5).is_err());
        assert!(fourier_coefficient(&f, 1.0.into(), -1.0, 2.0).is_err());
    }
}
