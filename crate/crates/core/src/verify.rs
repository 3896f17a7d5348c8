//! The verification suite: one function per acceptance criterion, each
//! returning check records with pinned tolerances.

use std::collections::HashMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cosets::double_coset_audit;
use crate::eisenstein::laurent::EPS_SCHEDULE;
use crate::eisenstein::{
    default_radius, dual_points, eisenstein_direct, eisenstein_hat, fourier_coefficient,
    fourier_coefficient_quadrature, fourier_reconstruction, normalization_audit, residue_experiment, DirectMethod,
    QuadratureGrid,
};
use crate::elliptic::{
    egm_g, egm_radius, eisenstein_kronecker_e1, elliptic_dedekind, geta_comparison, zeta2_check, E1Method,
};
use crate::error::Result;
use crate::hspace::{default_step, laplace_beltrami, moebius, HPoint, IntMatrix};
use crate::lattice::CLattice;
use crate::limit::{
    c_gamma, c_gamma_as_printed, c_gamma_from_residue, d_gamma, default_samples, eta_radius, harmonicity_check,
    klf_lhs, klf_rhs, klf_rhs_as_printed, laplacian_decay, LhsRoute, HARMONIC_STEPS,
};
use crate::numfield::{coprime, AlgInt, ImagQuadField};
use crate::specfun::bessel_k;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnly => "report-only",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub id: String,
    /// the identity or property being checked
    pub anchor: &'static str,
    pub inputs: Vec<(String, String)>,
    pub values: Vec<(String, f64)>,
    pub residual: f64,
    pub tol: f64,
    pub status: Status,
    pub ms: u128,
}

/// Settings shared by the criteria.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// field for the criteria that do not fix one
    pub d: i64,
    pub eps: [f64; 3],
    pub quadrature_n: usize,
    pub seed: u64,
    /// tolerance overrides by check id prefix
    pub tol_overrides: HashMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { d: -1, eps: EPS_SCHEDULE, quadrature_n: QuadratureGrid::default().n, seed: 2024, tol_overrides: HashMap::new() }
    }
}

impl VerifyConfig {
    pub fn tol(&self, id: &str, default: f64) -> f64 {
        self.tol_overrides
            .iter()
            .filter(|(k, _)| id.starts_with(k.as_str()))
            .max_by_key(|(k, _)| k.len())
            .map(|(_, &v)| v)
            .unwrap_or(default)
    }

    fn field(&self) -> Result<ImagQuadField> {
        ImagQuadField::new(self.d)
    }
}

struct Builder<'a> {
    cfg: &'a VerifyConfig,
    out: Vec<CheckRecord>,
}

impl<'a> Builder<'a> {
    fn new(cfg: &'a VerifyConfig) -> Self {
        Self { cfg, out: Vec::new() }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: String,
        anchor: &'static str,
        inputs: Vec<(&str, String)>,
        values: Vec<(&str, f64)>,
        residual: f64,
        tol: f64,
        report_only: bool,
        start: Instant,
    ) {
        let tol = self.cfg.tol(&id, tol);
        let status = if report_only {
            Status::ReportOnly
        } else if residual.is_finite() && residual <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        self.out.push(CheckRecord {
            id,
            anchor,
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            values: values.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            residual,
            tol,
            status,
            ms: start.elapsed().as_millis(),
        });
    }
}

fn fmt_point(u: &HPoint) -> String {
    format!("{},{},{}", u.z.re, u.z.im, u.r)
}

fn fmt_matrix(m: &IntMatrix) -> String {
    format!("{:?}", m)
}

/// A random element of `SL(2, O_K)` with all entry norms at most `max_norm`.
pub fn random_matrix(f: &ImagQuadField, max_norm: i64, rng: &mut impl Rng) -> IntMatrix {
    let els: Vec<AlgInt> = f.elements_up_to_norm(max_norm);
    loop {
        let c = els[rng.gen_range(0..els.len())];
        let d = els[rng.gen_range(0..els.len())];
        if d.is_zero() || !coprime(c, d) {
            continue;
        }
        let Ok(m) = IntMatrix::with_bottom_row(c, d) else { continue };
        // move (a, b) by multiples of (c, d) to make them small
        let (a, b) = if c.is_zero() {
            (m.a, els[rng.gen_range(0..els.len())])
        } else {
            let (q, r) = m.a.div_rem(&c);
            (r, m.b - q * d)
        };
        let m = IntMatrix { a, b, c, d };
        if [a, b, c, d].iter().all(|x| x.norm() <= max_norm) {
            return m;
        }
    }
}

/// A point on the isometric sphere of `M` (where `Mu` has the same height),
/// or a fixed interior point when `c = 0`.
pub fn isometric_point(m: &IntMatrix) -> HPoint {
    let g = m.to_complex();
    if g.c.norm() == 0.0 {
        return HPoint { z: Complex64::new(0.23, -0.17), r: 0.8 };
    }
    let cc = g.c.norm();
    HPoint { z: -g.d / g.c + Complex64::from_polar(0.51f64.sqrt() / cc, 0.7), r: 0.7 / cc }
}

/// 1: the coset sum against its Fourier expansion.
pub fn criterion_1(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let f = ImagQuadField::gaussian();
    for u in [HPoint::from_xyr(0.3, 0.4, 0.9)?, HPoint::j()] {
        for s in [1.5, 2.0] {
            let t = Instant::now();
            let direct = eisenstein_direct(&f, &u, s, DirectMethod::Ewald, None)?.value;
            let radius = default_radius(u.r);
            let fourier = fourier_reconstruction(&f, &u, s, radius)?;
            b.push(
                format!("c1.cross_validation.u={}.s={s}", fmt_point(&u)),
                "E(u,s): coset sum = Fourier expansion",
                vec![("d", "-1".into()), ("u", fmt_point(&u)), ("s", s.to_string()), ("radius", radius.to_string())],
                vec![("direct", direct), ("fourier", fourier)],
                (direct - fourier).abs(),
                1e-6,
                false,
                t,
            );
        }
    }
    Ok(b.out)
}

/// 2: closed-form coefficients against quadrature of the coset sum.
pub fn criterion_2(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let f = ImagQuadField::gaussian();
    let grid = QuadratureGrid { n: cfg.quadrature_n };
    for w in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)] {
        let t = Instant::now();
        let q = fourier_coefficient_quadrature(&f, w, 0.8, 2.0, grid)?;
        let c = fourier_coefficient(&f, w, 0.8, 2.0)?;
        b.push(
            format!("c2.quadrature.w={}", w),
            "a_w'(r,s) closed form = quadrature over a period cell",
            vec![("d", "-1".into()), ("w", w.to_string()), ("r", "0.8".into()), ("s", "2".into()), ("grid", grid.n.to_string())],
            vec![("closed_re", c.re), ("closed_im", c.im), ("quadrature_re", q.re), ("quadrature_im", q.im)],
            (q - c).norm(),
            1e-6,
            false,
            t,
        );
    }
    Ok(b.out)
}

/// 3: invariance of `E`, `E_hat`, the right-hand side of the limit formula
/// and `g` under random integral matrices.
pub fn criterion_3(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let f = cfg.field()?;
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    for i in 0..10 {
        let m = random_matrix(&f, 10, &mut rng);
        let u = isometric_point(&m);
        let mu = moebius(&m.to_complex(), &u)?;
        let inputs = || vec![("d", f.d().to_string()), ("M", fmt_matrix(&m)), ("u", fmt_point(&u))];
        type Eval<'a> = Box<dyn Fn(&HPoint) -> Result<f64> + 'a>;
        let evals: [(&str, &'static str, Eval); 4] = [
            ("E", "E(Mu,s) = E(u,s)", Box::new(|v| Ok(eisenstein_direct(&f, v, 2.0, DirectMethod::Ewald, None)?.value))),
            ("E_hat", "E_hat(Mu,s) = E_hat(u,s)", Box::new(|v| Ok(eisenstein_hat(&f, v, 2.0, DirectMethod::Ewald, None)?.value))),
            ("klf_rhs", "limit formula right-hand side is Gamma-invariant", Box::new(|v| klf_rhs(&f, v))),
            ("g", "g(Mu) + log den(M,u) = g(u)", Box::new(|v| egm_g(&f, v, None))),
        ];
        for (name, anchor, ev) in evals.iter() {
            let t = Instant::now();
            let a = ev(&u)?;
            let mut c = ev(&mu)?;
            if *name == "g" {
                c += crate::hspace::denominator(&m.to_complex(), &u)?.ln();
            }
            b.push(
                format!("c3.invariance.{name}.{i}"),
                anchor,
                inputs(),
                vec![("at_u", a), ("at_Mu", c)],
                (a - c).abs(),
                1e-5,
                false,
                t,
            );
        }
    }
    Ok(b.out)
}

/// 4: exhaustive double coset partition for `Z[i]`, entry norms `<= 10`.
pub fn criterion_4(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let t = Instant::now();
    let a = double_coset_audit(&ImagQuadField::gaussian(), 10)?;
    b.push(
        "c4.double_coset_partition".into(),
        "Gamma'_inf \\ Gamma / Gamma'_inf is partitioned by the emitted classes",
        vec![("d", "-1".into()), ("max_entry_norm", "10".into())],
        vec![
            ("elements", a.elements as f64),
            ("classes", a.classes as f64),
            ("unmatched", a.unmatched as f64),
            ("overlapping", a.overlapping as f64),
            ("duplicate_classes", a.duplicate_classes as f64),
        ],
        (a.unmatched + a.overlapping + a.duplicate_classes) as f64,
        0.0,
        false,
        t,
    );
    Ok(b.out)
}

/// 5: the audited constant of `phi_0`.
pub fn criterion_5(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    for d in [-1, -3] {
        let t = Instant::now();
        let f = ImagQuadField::new(d)?;
        let a = normalization_audit(&f)?;
        let rational = a.rational.0 as f64 / a.rational.1 as f64;
        b.push(
            format!("c5.phi0_constant.d={d}"),
            "phi_0(s) = kappa zeta_K(s)/zeta_K(s+1)",
            vec![("d", d.to_string()), ("s", "1.5,2,2.5,3".into())],
            vec![
                ("kappa", a.kappa),
                ("rational_p", a.rational.0 as f64),
                ("rational_q", a.rational.1 as f64),
                ("fit_residual", a.fit_residual),
            ],
            a.fit_residual.max((a.kappa - rational).abs()),
            1e-6,
            false,
            t,
        );
    }
    Ok(b.out)
}

/// Points used for the limit formula.
pub fn klf_points() -> [HPoint; 3] {
    [HPoint { z: Complex64::new(0.3, 0.4), r: 0.9 }, HPoint::j(), HPoint { z: Complex64::new(0.1, 0.2), r: 1.5 }]
}

/// 6: both sides of the limit formula.
pub fn criterion_6(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    for d in [-1, -3] {
        let f = ImagQuadField::new(d)?;
        for u in klf_points() {
            let rhs = klf_rhs(&f, &u)?;
            for route in [LhsRoute::Fourier, LhsRoute::EwaldExtrapolated] {
                let t = Instant::now();
                let lhs = klf_lhs(&f, &u, route, Some(cfg.eps))?;
                let inputs = vec![
                    ("d", d.to_string()),
                    ("u", fmt_point(&u)),
                    ("route", format!("{route:?}")),
                    ("eps", format!("{:?}", cfg.eps)),
                ];
                b.push(
                    format!("c6.klf.{route:?}.d={d}.u={}", fmt_point(&u)),
                    "lim (E(u,s) - alpha/(s-1)) = pi/|L| (b-a) - C log(r |eta|^-2)",
                    inputs.clone(),
                    vec![("lhs", lhs.value), ("rhs", rhs), ("extrapolation_err", lhs.extrapolation_err)],
                    (lhs.value - rhs).abs(),
                    1e-3,
                    false,
                    t,
                );
                b.push(
                    format!("c6.halving.{route:?}.d={d}.u={}", fmt_point(&u)),
                    "eps-schedule halving diagnostic",
                    inputs,
                    vec![("lhs", lhs.value)],
                    lhs.halving_change,
                    1e-4,
                    false,
                    t,
                );
            }
        }
    }
    Ok(b.out)
}

/// Matrices for the `D` checks: the generators and a few random ones.
fn d_matrices(f: &ImagQuadField, rng: &mut StdRng) -> Vec<IntMatrix> {
    let mut ms: Vec<IntMatrix> = IntMatrix::generators(*f)
        .into_iter()
        .filter(|m| !m.eq_psl(&IntMatrix::identity(*f)))
        .collect();
    ms.truncate(3);
    while ms.len() < 5 {
        ms.push(random_matrix(f, 2, rng));
    }
    ms
}

/// 7: properties of `D(M)`.
pub fn criterion_7(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let f = cfg.field()?;
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 7);
    let mut cache: HashMap<IntMatrix, f64> = HashMap::new();
    let mut dval = |m: &IntMatrix, b: &mut Builder| -> Result<f64> {
        if let Some(&v) = cache.get(m) {
            return Ok(v);
        }
        let t = Instant::now();
        let v = d_gamma(&f, m, &default_samples(m))?;
        b.push(
            format!("c7.u_independence.{}", fmt_matrix(m)),
            "Im log eta(Mu) - Im log eta(u) does not depend on u",
            vec![("d", f.d().to_string()), ("M", fmt_matrix(m)), ("samples", v.samples.len().to_string())],
            vec![("D_median", v.value), ("sd", v.sd)],
            v.sd,
            1e-6,
            false,
            t,
        );
        cache.insert(*m, v.value);
        Ok(v.value)
    };

    let t = Instant::now();
    let id = IntMatrix::identity(f);
    let d_id = dval(&id, &mut b)?;
    b.push("c7.identity".into(), "D(I) = 0", vec![("d", f.d().to_string())], vec![("D", d_id)], d_id.abs(), 0.0, false, t);

    let ms = d_matrices(&f, &mut rng);
    for m in &ms {
        let t = Instant::now();
        let a = dval(m, &mut b)?;
        let c = dval(&m.inverse(), &mut b)?;
        b.push(
            format!("c7.inverse.{}", fmt_matrix(m)),
            "D(M) + D(M^-1) = 0",
            vec![("d", f.d().to_string()), ("M", fmt_matrix(m))],
            vec![("D_M", a), ("D_Minv", c)],
            (a + c).abs(),
            1e-8,
            false,
            t,
        );
    }
    for i in 0..10 {
        let m = random_matrix(&f, 2, &mut rng);
        let n = random_matrix(&f, 2, &mut rng);
        let t = Instant::now();
        let (dm, dn, dmn) = (dval(&m, &mut b)?, dval(&n, &mut b)?, dval(&(m * n), &mut b)?);
        b.push(
            format!("c7.homomorphism.{i}"),
            "D(MN) = D(M) + D(N)",
            vec![("d", f.d().to_string()), ("M", fmt_matrix(&m)), ("N", fmt_matrix(&n))],
            vec![("D_M", dm), ("D_N", dn), ("D_MN", dmn)],
            (dmn - dm - dn).abs(),
            1e-6,
            false,
            t,
        );
    }
    for i in 0..5 {
        let m = random_matrix(&f, 2, &mut rng);
        let p = random_matrix(&f, 3, &mut rng);
        let n = p * m * p.inverse();
        let t = Instant::now();
        let (dm, dn) = (dval(&m, &mut b)?, dval(&n, &mut b)?);
        let (dp, dpi) = (dval(&p, &mut b)?, dval(&p.inverse(), &mut b)?);
        let inputs = vec![("d", f.d().to_string()), ("M", fmt_matrix(&m)), ("P", fmt_matrix(&p))];
        b.push(
            format!("c7.conjugacy.{i}"),
            "D(PMP^-1) = D(M)",
            inputs.clone(),
            vec![("D_M", dm), ("D_PMPinv", dn)],
            (dm - dn).abs(),
            1e-6,
            false,
            t,
        );
        b.push(
            format!("c7.conjugacy_hom.{i}"),
            "D(PMP^-1) = D(P) + D(M) + D(P^-1)",
            inputs,
            vec![("D_P", dp), ("D_M", dm), ("D_Pinv", dpi), ("D_PMPinv", dn)],
            (dn - dp - dm - dpi).abs(),
            1e-6,
            false,
            t,
        );
    }
    Ok(b.out)
}

/// Interior points for the harmonicity checks.
pub fn harmonic_points() -> [HPoint; 3] {
    [
        HPoint { z: Complex64::new(0.3, 0.4), r: 0.9 },
        HPoint { z: Complex64::new(0.1, -0.2), r: 1.2 },
        HPoint { z: Complex64::new(-0.25, 0.15), r: 0.75 },
    ]
}

/// 8: `Re log eta`, `Im log eta` and `g` are harmonic.
pub fn criterion_8(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let f = cfg.field()?;
    for u in harmonic_points() {
        let t = Instant::now();
        let rep = harmonicity_check(&f, &u, None)?;
        let w = egm_radius(&f, u.r * (1.0 - HARMONIC_STEPS[0]));
        let steps = HARMONIC_STEPS.map(|h| h * u.r);
        let g = |v: &HPoint| egm_g(&f, v, Some(w)).expect("stencil point");
        let (gvals, g_order) = laplacian_decay(g, &u, &steps)?;
        let g0 = laplace_beltrami(g, &u, default_step(&u))?.abs();
        let parts = [
            ("re_log_eta", rep.order_re, rep.at_default_step.0, rep.re.clone()),
            ("im_log_eta", rep.order_im, rep.at_default_step.1, rep.im.clone()),
            ("g", g_order, g0, gvals),
        ];
        for (name, order, at_default, vals) in parts {
            let inputs = vec![("d", f.d().to_string()), ("u", fmt_point(&u)), ("steps", format!("{steps:?}"))];
            let mut values: Vec<(&str, f64)> = vec![("order", order)];
            values.extend(["delta_h0", "delta_h1", "delta_h2"].into_iter().zip(vals));
            b.push(
                format!("c8.order.{name}.u={}", fmt_point(&u)),
                "Laplace-Beltrami stencil error decays at order 2 (harmonic function)",
                inputs.clone(),
                values,
                (order - 2.0).abs(),
                0.3,
                false,
                t,
            );
            b.push(
                format!("c8.laplacian.{name}.u={}", fmt_point(&u)),
                "Delta f = 0 at h = 1e-3 r",
                inputs,
                vec![("delta", at_default)],
                at_default,
                1e-4,
                false,
                t,
            );
        }
    }
    Ok(b.out)
}

/// 9: `a_{conj w'}(r,1) = a_w'(r,1)` and `a_{-w'}(r,1) = conj a_w'(r,1)`.
pub fn criterion_9(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    for d in [-1, -3] {
        let f = ImagQuadField::new(d)?;
        let r = 0.8;
        let t = Instant::now();
        let (mut conj_res, mut neg_res) = (0.0f64, 0.0f64);
        let pts = dual_points(&f, 5.0);
        for &(_, w) in &pts {
            let a = fourier_coefficient(&f, w, r, 1.0)?;
            let ac = fourier_coefficient(&f, w.conj(), r, 1.0)?;
            let an = fourier_coefficient(&f, -w, r, 1.0)?;
            conj_res = conj_res.max((ac - a).norm());
            neg_res = neg_res.max((an - a.conj()).norm());
        }
        let inputs = vec![("d", d.to_string()), ("r", r.to_string()), ("radius", "5".into())];
        let n = pts.len() as f64;
        b.push(
            format!("c9.conjugate_frequency.d={d}"),
            "a_{conj w'}(r,1) = a_w'(r,1)",
            inputs.clone(),
            vec![("modes", n)],
            conj_res,
            1e-8,
            false,
            t,
        );
        b.push(
            format!("c9.negative_frequency.d={d}"),
            "a_{-w'}(r,1) = conj a_w'(r,1)",
            inputs,
            vec![("modes", n)],
            neg_res,
            1e-8,
            false,
            t,
        );
    }
    Ok(b.out)
}

/// Random coprime Gaussian pairs with `1 < N(d) <= 25`.
pub fn dedekind_pairs(seed: u64, n: usize) -> Vec<(AlgInt, AlgInt)> {
    let f = ImagQuadField::gaussian();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let d = f.elt(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let c = f.elt(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        if d.norm() > 1 && d.norm() <= 25 && coprime(c, d) {
            out.push((c, d));
        }
    }
    out
}

/// 10: elliptic Dedekind sums and the two routes to `E_1`.
pub fn criterion_10(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    for (c, d) in dedekind_pairs(cfg.seed, 10) {
        let t = Instant::now();
        let v = elliptic_dedekind(c, d, E1Method::default())?.value;
        let w = elliptic_dedekind(c.conj(), d.conj(), E1Method::default())?.value;
        let inputs = vec![("c", c.to_string()), ("d", d.to_string())];
        b.push(
            format!("c10.imaginary.c={c}.d={d}"),
            "D(c,d) is purely imaginary",
            inputs.clone(),
            vec![("re", v.re), ("im", v.im)],
            v.re.abs(),
            1e-10,
            false,
            t,
        );
        b.push(
            format!("c10.conjugation.c={c}.d={d}"),
            "D(c,d) = -D(conj c, conj d)",
            inputs,
            vec![("im", v.im), ("im_conj", w.im)],
            (v + w).norm(),
            1e-10,
            false,
            t,
        );
    }
    let lat = CLattice::ring_of_integers(&ImagQuadField::gaussian());
    let z = Complex64::new(0.3, 0.2);
    let t = Instant::now();
    let h = eisenstein_kronecker_e1(z, &lat, E1Method::Hecke)?;
    let w = eisenstein_kronecker_e1(z, &lat, E1Method::Weierstrass)?;
    b.push(
        "c10.e1_two_routes".into(),
        "E_1 by Hecke's trick = zeta_W(z) - s_2 z - (pi/A) conj z",
        vec![("z", z.to_string()), ("lattice", "Z[i]".into())],
        vec![("hecke_re", h.re), ("hecke_im", h.im), ("weierstrass_re", w.re), ("weierstrass_im", w.im)],
        (h - w).norm(),
        1e-8,
        false,
        t,
    );
    let t = Instant::now();
    let h3 = eisenstein_kronecker_e1(z, &lat, E1Method::HeckeThreePoint)?;
    b.push(
        "c10.e1_three_point_schedule".into(),
        "E_1 from t = 0.02, 0.01, 0.005 alone (two-level Richardson)",
        vec![("z", z.to_string()), ("lattice", "Z[i]".into())],
        vec![("re", h3.re), ("im", h3.im)],
        (h3 - w).norm(),
        1e-8,
        true,
        t,
    );
    Ok(b.out)
}

/// 11: report-only experiments on the delicate constants.
pub fn criterion_11(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut b = Builder::new(cfg);
    let f = cfg.field()?;
    let fd = || ("d", f.d().to_string());
    let u = HPoint { z: Complex64::new(0.3, 0.4), r: 0.9 };

    let t = Instant::now();
    let rep = residue_experiment(&f, &u)?;
    b.push(
        "c11.residue".into(),
        "residue of E at s = 1: eps-extrapolation vs |L'|/vol(Gamma) vs a pi/|L|",
        vec![fd(), ("u", fmt_point(&u))],
        vec![
            ("numeric", rep.numeric),
            ("numeric_err", rep.numeric_err),
            ("dual_area_over_volume", rep.dual_area_over_volume),
            ("a_pi_over_area", rep.laurent_alpha),
        ],
        (rep.numeric - rep.dual_area_over_volume).abs(),
        1e-6,
        true,
        t,
    );

    let t = Instant::now();
    let mut values = Vec::new();
    let mut worst = 0.0f64;
    for (k1, k0, x) in [("K1(0.5)", "xK0(0.5)", 0.5), ("K1(1)", "xK0(1)", 1.0), ("K1(2)", "xK0(2)", 2.0)] {
        let (a, c) = (bessel_k(1.0, x)?, x * bessel_k(0.0, x)?);
        worst = worst.max((a - c).abs());
        values.push((k1, a));
        values.push((k0, c));
    }
    b.push("c11.bessel_k1_xk0".into(), "K_1(x) = x K_0(x)", vec![("x", "0.5,1,2".into())], values, worst, 1e-10, true, t);

    let t = Instant::now();
    let z2 = zeta2_check(&f)?;
    let mut values = vec![("zeta_K(2)", z2.zeta_k_2)];
    let names = ["raw_dual", "area_one", "u2_convention"];
    for (n, r) in names.iter().zip(&z2.readings) {
        values.push((n, r.value));
    }
    let best = z2.readings.iter().map(|r| (r.value - z2.zeta_k_2).abs()).fold(f64::INFINITY, f64::min);
    b.push(
        "c11.zeta2".into(),
        "zeta_K(2) = |d_K|^-1/2 |L'| under each dual-lattice normalization",
        vec![fd()],
        values,
        best,
        1e-6,
        true,
        t,
    );

    let t = Instant::now();
    let g = geta_comparison(&f, &u)?;
    b.push(
        "c11.geta.absolute".into(),
        "g(u) = -(|d_K|/(pi^2 w)) zeta(O,O,2) C log|eta| + B(r)",
        vec![fd(), ("u", fmt_point(&u))],
        vec![
            ("g", g.g),
            ("log_abs_eta", g.log_abs_eta),
            ("printed_rhs", g.printed_rhs),
            ("functional_part", g.functional_part),
            ("b_constant", g.b_constant),
            ("b_r_part", g.b_r_part),
            ("g_minus_2_log_abs_eta", g.derived_residual),
        ],
        g.residual.abs(),
        1e-6,
        true,
        t,
    );
    let t = Instant::now();
    let v = HPoint { z: Complex64::new(-0.2, 0.1), r: u.r };
    let g2 = geta_comparison(&f, &v)?;
    b.push(
        "c11.geta.u_dependence".into(),
        "residual(u1) - residual(u2) = 0 at equal r",
        vec![fd(), ("u1", fmt_point(&u)), ("u2", fmt_point(&v))],
        vec![("residual_u1", g.residual), ("residual_u2", g2.residual)],
        (g.residual - g2.residual).abs(),
        1e-4,
        true,
        t,
    );
    let t = Instant::now();
    let w = HPoint { z: u.z, r: 1.3 };
    let g3 = geta_comparison(&f, &w)?;
    // beyond B(r), only the r^2 terms should move the residual; both g and
    // the eta term carry k r^2 / C
    let quad = |r: f64| 2.0 * f.cusp_index() as f64 * r * r / c_gamma(&f);
    let r_change = (g3.residual - g.residual) + (g3.b_r_part - g.b_r_part) - (quad(w.r) - quad(u.r));
    b.push(
        "c11.geta.r_dependence".into(),
        "residual changes with r only through B(r)",
        vec![fd(), ("u1", fmt_point(&u)), ("u2", fmt_point(&w))],
        vec![("residual_u1", g.residual), ("residual_u2", g3.residual), ("b_r_change", g3.b_r_part - g.b_r_part)],
        r_change.abs(),
        1e-4,
        true,
        t,
    );

    let t = Instant::now();
    let from_a = c_gamma_from_residue(&f)?;
    b.push(
        "c11.c_gamma".into(),
        "C = |L'|/vol(Gamma) + pi/|L| = pi(a+1)/|L|, against the residue alpha",
        vec![fd()],
        vec![("printed", c_gamma_as_printed(&f)), ("pi_a_plus_1_over_area", from_a), ("alpha", c_gamma(&f))],
        (c_gamma_as_printed(&f) - c_gamma(&f)).abs(),
        1e-6,
        true,
        t,
    );

    let t = Instant::now();
    let printed = klf_rhs_as_printed(&f, &u)?;
    let lhs = klf_lhs(&f, &u, LhsRoute::Analytic, None)?.value;
    b.push(
        "c11.klf_printed_rhs".into(),
        "limit formula with the printed constant and sign",
        vec![fd(), ("u", fmt_point(&u)), ("radius", eta_radius(u.r).to_string())],
        vec![("lhs", lhs), ("printed_rhs", printed)],
        (lhs - printed).abs(),
        1e-3,
        true,
        t,
    );
    Ok(b.out)
}

/// All criteria in order.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let fs: [fn(&VerifyConfig) -> Result<Vec<CheckRecord>>; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let mut out = Vec::new();
    for c in fs {
        out.extend(c(cfg)?);
    }
    Ok(out)
}
