//! The limit formula at `s = 1`.
//!
//! With `alpha` the residue of `E` at `s = 1`,
//!
//! ```text
//! C log eta(u) = k r^2 / 2 + sum_{w' in L'_+} a_w'(r, 1) e(<w', z>),   C = alpha,
//! lim_{s -> 1} (E(u, s) - alpha/(s-1)) = pi/|L| (b - a) - C log(r |eta(u)|^-2),
//! ```
//!
//! and `Re log eta(Mu) = Re log eta(u) - 1/2 log |cz+d|^2 + |c|^2 r^2`.
//! The printed forms of the constant and of the right-hand side are kept as
//! `*_as_printed` for reports.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cosets::unit_multiplicity;
use crate::eisenstein::{
    constant_term_at_one, default_radius, fourier_reconstruction, laurent_a0, laurent_phi0, pair_sum_ewald,
    ModeTable,
};
use crate::eisenstein::laurent::{richardson, EPS_SCHEDULE};
use crate::error::{Error, Result};
use crate::hspace::{default_step, denominator, laplace_beltrami, moebius, HPoint, IntMatrix};
use crate::lattice::{in_plus_half, pairing, CLattice};
use crate::numfield::ImagQuadField;
use crate::specfun::{bessel_k, dedekind_zeta, e_char, ordered_par_sum_c, vol_gamma};

/// The constant in front of `log eta`: the residue `alpha = 2 pi^2 / (|d_K| zeta_K(2))`.
pub fn c_gamma(f: &ImagQuadField) -> f64 {
    let z2 = dedekind_zeta(f, 2.0).expect("s = 2");
    2.0 * PI * PI / (f.abs_disc() * z2)
}

/// `|L'|/vol(Gamma) + pi/|L|`.
pub fn c_gamma_as_printed(f: &ImagQuadField) -> f64 {
    let lat = CLattice::ring_of_integers(f);
    lat.dual().area() / vol_gamma(f) + PI / lat.area()
}

/// `pi (a + 1) / |L|` with `a` the residue of `phi_0`.
pub fn c_gamma_from_residue(f: &ImagQuadField) -> Result<f64> {
    let a = laurent_phi0(f)?.a;
    Ok(PI * (a + 1.0) / CLattice::ring_of_integers(f).area())
}

#[derive(Clone, Copy, Debug)]
pub struct EtaValue {
    pub u: HPoint,
    pub log_eta: Complex64,
    pub radius: f64,
    pub tail_bound: f64,
}

/// Truncation radius for `log eta` at height `r`: `2 pi R r >= 40`, rounded
/// up to a multiple of 1/2 so nearby points share a mode table.
pub fn eta_radius(r: f64) -> f64 {
    (default_radius(r) * 2.0).ceil() / 2.0
}

fn eta_modes(f: &ImagQuadField, radius: f64) -> Result<Vec<(Complex64, f64)>> {
    let t = ModeTable::new(f, 1.0, radius)?;
    Ok(t.modes.into_iter().filter(|(w, _)| in_plus_half(*w)).collect())
}

/// Estimate of `sum_{|w'| > R} |a_w'(r, 1)|`: mode density `2 pi rho / |L'|`
/// times the coefficient at `|w'| = R`, over the decay length `1/(2 pi r)`,
/// with `sigma_{-1}` bounded by `1 + log N`.
fn eta_tail(f: &ImagQuadField, r: f64, radius: f64) -> f64 {
    let lat = CLattice::ring_of_integers(f);
    let k = unit_multiplicity(f) as f64;
    let z2 = dedekind_zeta(f, 2.0).expect("s = 2");
    let x = 2.0 * PI * radius * r;
    let sigma = 1.0 + (1.0 + radius * radius * f.abs_disc()).ln();
    let a = 2.0 * PI * PI * radius * k * sigma * r * bessel_k(1.0, x).unwrap_or(0.0) / (lat.area() * z2);
    2.0 * PI * radius / lat.dual().area() * a / (2.0 * PI * r)
}

/// `log eta(u)`; `radius` defaults to [`eta_radius`].
pub fn log_eta(f: &ImagQuadField, u: &HPoint, radius: Option<f64>) -> Result<EtaValue> {
    let radius = radius.unwrap_or_else(|| eta_radius(u.r));
    if 2.0 * PI * radius * u.r < 40.0 - 1e-9 {
        return Err(Error::Truncation { bound: radius, tol: default_radius(u.r) });
    }
    let modes = eta_modes(f, radius)?;
    let lat = CLattice::ring_of_integers(f);
    let k = unit_multiplicity(f) as f64;
    // a_w'(r, 1) = 2 pi^2 |w'| phi r K_1(2 pi |w'| r) / |L|
    let c0 = 2.0 * PI * PI * u.r / lat.area();
    let series = ordered_par_sum_c(&modes, 256, |&(w, p)| {
        let a = w.norm();
        let x = 2.0 * PI * a * u.r;
        if x > 745.0 {
            return Complex64::new(0.0, 0.0);
        }
        e_char(pairing(w, u.z)) * (c0 * a * p * bessel_k(1.0, x).expect("x > 0"))
    });
    let c = c_gamma(f);
    let log_eta = (series + 0.5 * k * u.r * u.r) / c;
    Ok(EtaValue { u: *u, log_eta, radius, tail_bound: eta_tail(f, u.r, radius) / c })
}

/// `Re log eta(Mu) - Re log eta(u) + 1/2 log den(M, u)`, zero by the
/// transformation law.
pub fn eta_transformation_residual(f: &ImagQuadField, m: &IntMatrix, u: &HPoint) -> Result<f64> {
    let g = m.to_complex();
    let mu = moebius(&g, u)?;
    let den = denominator(&g, u)?;
    Ok(log_eta(f, &mu, None)?.log_eta.re - log_eta(f, u, None)?.log_eta.re + 0.5 * den.ln())
}

/// `pi/|L| (b - a) - C log r + 2 C Re log eta(u)`.
pub fn klf_rhs(f: &ImagQuadField, u: &HPoint) -> Result<f64> {
    let lp = laurent_phi0(f)?;
    let area = CLattice::ring_of_integers(f).area();
    let c = c_gamma(f);
    let eta = log_eta(f, u, None)?.log_eta.re;
    Ok(PI / area * (lp.b_series - lp.a) - c * u.r.ln() + 2.0 * c * eta)
}

/// `pi/|L| b - C' log |r eta'(u)^2|` with the printed constant `C'` and
/// `eta'` normalized by it.
pub fn klf_rhs_as_printed(f: &ImagQuadField, u: &HPoint) -> Result<f64> {
    let lp = laurent_phi0(f)?;
    let area = CLattice::ring_of_integers(f).area();
    let cp = c_gamma_as_printed(f);
    // C' log eta' = C log eta
    let c_eta = c_gamma(f) * log_eta(f, u, None)?.log_eta.re;
    Ok(PI / area * lp.b_series - cp * u.r.ln() - 2.0 * c_eta)
}

/// How the left-hand side limit is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LhsRoute {
    /// Fourier expansion at `s = 1 + eps`, Richardson in `eps`.
    #[default]
    Fourier,
    /// Theta splitting at `s = 1 + eps`, Richardson in `eps`.
    EwaldExtrapolated,
    /// Theta splitting with the pole removed in closed form.
    Analytic,
}

#[derive(Clone, Copy, Debug)]
pub struct KlfLhs {
    pub value: f64,
    pub route: LhsRoute,
    /// last Richardson correction
    pub extrapolation_err: f64,
    /// change when the schedule is halved
    pub halving_change: f64,
}

/// `lim_{s -> 1} (E(u, s) - alpha/(s - 1))`.
pub fn klf_lhs(f: &ImagQuadField, u: &HPoint, route: LhsRoute, eps: Option<[f64; 3]>) -> Result<KlfLhs> {
    let eps = eps.unwrap_or(EPS_SCHEDULE);
    if !(eps[0] > eps[1] && eps[1] > eps[2] && eps[2] > 0.0) {
        return Err(Error::Domain(format!("eps schedule must decrease to 0, got {eps:?}")));
    }
    let alpha = laurent_a0(f, u.r)?.alpha;
    let radius = eta_radius(u.r);
    let at = |e: f64| -> Result<f64> {
        let s = 1.0 + e;
        let e = s - 1.0;
        let v = match route {
            LhsRoute::Fourier => fourier_reconstruction(f, u, s, radius)?,
            _ => pair_sum_ewald(f, u, s)? / (2.0 * dedekind_zeta(f, 1.0 + s)?),
        };
        Ok(v - alpha / e)
    };
    if route == LhsRoute::Analytic {
        let value = constant_term_at_one(f, u)?;
        return Ok(KlfLhs { value, route, extrapolation_err: 0.0, halving_change: 0.0 });
    }
    let run = |sched: [f64; 3]| -> Result<(f64, f64)> {
        Ok(richardson([at(sched[0])?, at(sched[1])?, at(sched[2])?]))
    };
    let (value, extrapolation_err) = run(eps)?;
    let (half, _) = run(eps.map(|e| e / 2.0))?;
    let halving_change = (half - value).abs();
    if extrapolation_err > 1e-3 {
        return Err(Error::Extrapolation(extrapolation_err));
    }
    Ok(KlfLhs { value, route, extrapolation_err, halving_change })
}

/// Sample standard deviation above which a `D` value is flagged.
pub const D_SD_FLAG: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct DGammaValue {
    pub matrix: IntMatrix,
    /// median of the per-sample values
    pub value: f64,
    pub per_sample: Vec<f64>,
    pub samples: Vec<HPoint>,
    pub sd: f64,
    /// `sd > D_SD_FLAG`: the samples disagree
    pub flagged: bool,
}

/// `(1/pi) (Im log eta(Mu) - Im log eta(u))` at one point.
pub fn d_gamma_at(f: &ImagQuadField, m: &IntMatrix, u: &HPoint) -> Result<f64> {
    let mu = moebius(&m.to_complex(), u)?;
    Ok((log_eta(f, &mu, None)?.log_eta.im - log_eta(f, u, None)?.log_eta.im) / PI)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn sample_sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// `D(M)` from the transformation law over the sample points.
pub fn d_gamma(f: &ImagQuadField, m: &IntMatrix, samples: &[HPoint]) -> Result<DGammaValue> {
    if samples.len() < 3 {
        return Err(Error::Domain(format!("d_gamma needs at least 3 samples, got {}", samples.len())));
    }
    if let Some(u) = samples.iter().find(|u| !(0.5..=2.0).contains(&u.r)) {
        return Err(Error::Domain(format!("sample height {} outside [0.5, 2]", u.r)));
    }
    let per_sample = samples.iter().map(|u| d_gamma_at(f, m, u)).collect::<Result<Vec<_>>>()?;
    let sd = sample_sd(&per_sample);
    Ok(DGammaValue {
        matrix: *m,
        value: median(&per_sample),
        per_sample,
        samples: samples.to_vec(),
        sd,
        flagged: sd > D_SD_FLAG,
    })
}

/// Five sample points in `r in [0.5, 2]` placed near the pole `-d/c` of `M`,
/// where `Mu` stays at moderate height.
pub fn default_samples(m: &IntMatrix) -> Vec<HPoint> {
    let centre = if m.c.is_zero() { Complex64::new(0.0, 0.0) } else { -m.d.to_complex() / m.c.to_complex() };
    let offsets = [(0.1, 0.05, 0.55), (-0.07, 0.12, 0.7), (0.15, -0.1, 0.9), (-0.2, -0.15, 1.2), (0.05, 0.2, 1.6)];
    offsets.iter().map(|&(x, y, r)| HPoint { z: centre + Complex64::new(x, y), r }).collect()
}

#[derive(Clone, Debug)]
pub struct ConjugacyReport {
    pub m: IntMatrix,
    pub p: IntMatrix,
    pub n: IntMatrix,
    pub d_m: f64,
    pub d_n: f64,
    pub d_p: f64,
    /// `|D(M) - D(N)|`
    pub residual: f64,
    /// `|D(N) - (D(P) + D(M) - D(P))|` with `D(PMP^-1)` split by the homomorphism
    pub hom_residual: f64,
    pub pass: bool,
}

/// Compare `D(M)` and `D(PMP^-1)`.
pub fn check_conjugacy(f: &ImagQuadField, m: &IntMatrix, p: &IntMatrix) -> Result<ConjugacyReport> {
    let n = *p * *m * p.inverse();
    let dm = d_gamma(f, m, &default_samples(m))?.value;
    let dn = d_gamma(f, &n, &default_samples(&n))?.value;
    let dp = d_gamma(f, p, &default_samples(p))?.value;
    let dpi = d_gamma(f, &p.inverse(), &default_samples(&p.inverse()))?.value;
    let residual = (dm - dn).abs();
    Ok(ConjugacyReport {
        m: *m,
        p: *p,
        n,
        d_m: dm,
        d_n: dn,
        d_p: dp,
        residual,
        hom_residual: (dn - (dp + dm + dpi)).abs(),
        pass: residual < 1e-6,
    })
}

#[derive(Clone, Debug)]
pub struct HarmonicityReport {
    pub u: HPoint,
    pub steps: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub order_re: f64,
    pub order_im: f64,
    /// `|Delta|` of both parts at the default step `1e-3 r`
    pub at_default_step: (f64, f64),
}

/// Step schedule for the order estimate, relative to the height.
pub const HARMONIC_STEPS: [f64; 3] = [4e-2, 2e-2, 1e-2];

/// `|Delta g(u)|` for each step and the observed order in `h`.
pub fn laplacian_decay(g: impl Fn(&HPoint) -> f64, u: &HPoint, steps: &[f64]) -> Result<(Vec<f64>, f64)> {
    if steps.len() < 2 {
        return Err(Error::Domain("need at least two steps".into()));
    }
    let vals = steps.iter().map(|&h| laplace_beltrami(&g, u, h).map(f64::abs)).collect::<Result<Vec<_>>>()?;
    let n = steps.len() - 1;
    let order = (vals[0] / vals[n]).ln() / (steps[0] / steps[n]).ln();
    Ok((vals, order))
}

/// Finite-difference Laplacian of `Re log eta` and `Im log eta` at `u`.
pub fn harmonicity_check(f: &ImagQuadField, u: &HPoint, steps: Option<&[f64]>) -> Result<HarmonicityReport> {
    let steps: Vec<f64> = match steps {
        Some(s) => s.to_vec(),
        None => HARMONIC_STEPS.iter().map(|h| h * u.r).collect(),
    };
    if steps.iter().any(|&h| !(h > 0.0 && h < u.r)) {
        return Err(Error::OutsideHalfSpace(u.r - steps.iter().cloned().fold(0.0, f64::max)));
    }
    // one truncation for the whole stencil
    let radius = eta_radius(u.r - steps.iter().cloned().fold(0.0, f64::max));
    let eta = |v: &HPoint| log_eta(f, v, Some(radius)).expect("stencil point").log_eta;
    let (re, order_re) = laplacian_decay(|v| eta(v).re, u, &steps)?;
    let (im, order_im) = laplacian_decay(|v| eta(v).im, u, &steps)?;
    let h0 = default_step(u);
    let d0 = laplace_beltrami(eta, u, h0)?;
    Ok(HarmonicityReport { u: *u, steps, re, im, order_re, order_im, at_default_step: (d0.re.abs(), d0.im.abs()) })
}
