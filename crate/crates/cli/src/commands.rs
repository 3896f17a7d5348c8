//! One function per subcommand, each returning report records.

use std::time::Instant;

use anyhow::Result;
use num_complex::Complex64;

use bianchi_klf::eisenstein::{
    default_radius, dual_point, eisenstein_direct, eisenstein_hat, fourier_coefficient,
    fourier_coefficient_quadrature, fourier_reconstruction, laurent_a0, laurent_phi0, phi, phi_bruteforce,
    residue_experiment, DirectMethod, QuadratureGrid,
};
use bianchi_klf::elliptic::{egm_g, elliptic_dedekind, geta_comparison, zeta2_check, E1Method};
use bianchi_klf::limit::{c_gamma, d_gamma, default_samples, klf_lhs, klf_rhs, klf_rhs_as_printed, log_eta, LhsRoute};
use bianchi_klf::verify::{self, CheckRecord, Status};
use bianchi_klf::{AlgInt, HPoint, ImagQuadField, IntMatrix};

use crate::config::RunConfig;

#[allow(clippy::too_many_arguments)]
fn rec<K: Into<String>>(
    id: impl Into<String>,
    anchor: &'static str,
    inputs: Vec<(&str, String)>,
    values: Vec<(K, f64)>,
    residual: f64,
    tol: f64,
    status: Status,
    t: Instant,
) -> CheckRecord {
    CheckRecord {
        id: id.into(),
        anchor,
        inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        values: values.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        residual,
        tol,
        status,
        ms: t.elapsed().as_millis(),
    }
}

fn judged(residual: f64, tol: f64) -> Status {
    if residual <= tol {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn fmt_point(u: &HPoint) -> String {
    format!("{},{},{}", u.z.re, u.z.im, u.r)
}

fn field(cfg: &RunConfig) -> Result<ImagQuadField> {
    Ok(ImagQuadField::new(cfg.d)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EisRoute {
    Direct,
    Hat,
    Fourier,
}

pub fn eisenstein(cfg: &RunConfig, u: &HPoint, s: f64, route: EisRoute, truncated: bool) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let method = if truncated {
        DirectMethod::Truncated { c_max: cfg.c_max, d_max: cfg.d_max }
    } else {
        DirectMethod::Ewald
    };
    let mut inputs = vec![("d", f.d().to_string()), ("u", fmt_point(u)), ("s", s.to_string())];
    let (id, anchor, value, tail) = match route {
        EisRoute::Direct => {
            let v = eisenstein_direct(&f, u, s, method, None)?;
            ("eisenstein.direct", "E(u, s) as a sum over the cosets of the cusp stabilizer", v.value, v.tail_bound)
        }
        EisRoute::Hat => {
            let v = eisenstein_hat(&f, u, s, method, None)?;
            ("eisenstein.hat", "sum over all nonzero pairs (c, d)", v.value, v.tail_bound)
        }
        EisRoute::Fourier => {
            let radius = cfg.omega_max.unwrap_or_else(|| default_radius(u.r));
            inputs.push(("omega_max", radius.to_string()));
            let v = fourier_reconstruction(&f, u, s, radius)?;
            ("eisenstein.fourier", "E(u, s) from its Fourier expansion", v, f64::NAN)
        }
    };
    if route != EisRoute::Fourier {
        inputs.push(("method", if truncated { format!("truncated c_max={} d_max={}", cfg.c_max, cfg.d_max) } else { "ewald".into() }));
    }
    Ok(vec![rec(id, anchor, inputs, vec![("value", value), ("tail_bound", tail)], tail, f64::NAN, Status::ReportOnly, t)])
}

pub fn fourier_coeff(cfg: &RunConfig, label: AlgInt, r: f64, s: f64, quadrature: bool) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let w = dual_point(label);
    let a = fourier_coefficient(&f, w, r, s)?;
    let inputs = vec![("d", f.d().to_string()), ("label", label.to_string()), ("r", r.to_string()), ("s", s.to_string())];
    let mut values = vec![("w_re", w.re), ("w_im", w.im), ("re", a.re), ("im", a.im)];
    if !quadrature {
        return Ok(vec![rec("fourier_coeff", "closed-form Fourier coefficient", inputs, values, f64::NAN, f64::NAN, Status::ReportOnly, t)]);
    }
    let q = fourier_coefficient_quadrature(&f, w, r, s, QuadratureGrid { n: cfg.quadrature_n })?;
    values.extend([("quadrature_re", q.re), ("quadrature_im", q.im)]);
    let res = (q - a).norm();
    let tol = cfg.tol("fourier_coeff", 1e-6);
    Ok(vec![rec("fourier_coeff", "closed form against quadrature of E over a period", inputs, values, res, tol, judged(res, tol), t)])
}

pub fn phi_cmd(cfg: &RunConfig, label: AlgInt, s: f64, bruteforce: bool) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let w = dual_point(label);
    let v = phi(&f, w, s)?;
    let inputs = vec![("d", f.d().to_string()), ("label", label.to_string()), ("s", s.to_string())];
    if !bruteforce {
        return Ok(vec![rec("phi", "phi coefficient in closed form", inputs, vec![("value", v)], f64::NAN, f64::NAN, Status::ReportOnly, t)]);
    }
    let b = phi_bruteforce(&f, w, s, cfg.c_max)?;
    let res = (b.value - Complex64::from(v)).norm();
    let mut inputs = inputs;
    inputs.push(("c_max", cfg.c_max.to_string()));
    let values = vec![("value", v), ("bruteforce_re", b.value.re), ("bruteforce_im", b.value.im), ("tail_bound", b.tail_bound)];
    Ok(vec![rec("phi", "closed form against the truncated double coset sum", inputs, values, res, b.tail_bound, judged(res, b.tail_bound), t)])
}

pub fn laurent(cfg: &RunConfig, u: &HPoint) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let d = ("d", f.d().to_string());
    let t = Instant::now();
    let lp = laurent_phi0(&f)?;
    let mut out = vec![rec(
        "laurent.phi0",
        "phi_0(s) = a/(s-1) + b + O(s-1)",
        vec![d.clone()],
        vec![("a", lp.a), ("b", lp.b), ("b_series", lp.b_series)],
        lp.b_err,
        f64::NAN,
        Status::ReportOnly,
        t,
    )];
    let t = Instant::now();
    let la = laurent_a0(&f, u.r)?;
    out.push(rec(
        "laurent.a0",
        "a_0(r, s) = alpha/(s-1) + beta(r) + O(s-1)",
        vec![d.clone(), ("r", u.r.to_string())],
        vec![("alpha", la.alpha), ("beta", la.beta), ("beta_as_printed", la.beta_as_printed)],
        (la.beta - la.beta_as_printed).abs(),
        f64::NAN,
        Status::ReportOnly,
        t,
    ));
    let t = Instant::now();
    let re = residue_experiment(&f, u)?;
    let res = (re.numeric - re.laurent_alpha).abs();
    let tol = cfg.tol("laurent.residue", 1e-6);
    out.push(rec(
        "laurent.residue",
        "residue of E at s = 1",
        vec![d, ("u", fmt_point(u))],
        vec![
            ("numeric", re.numeric),
            ("numeric_err", re.numeric_err),
            ("alpha", re.laurent_alpha),
            ("dual_area_over_volume", re.dual_area_over_volume),
        ],
        res,
        tol,
        judged(res, tol),
        t,
    ));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum KlfRoute {
    Fourier,
    Ewald,
    Analytic,
}

pub fn klf(cfg: &RunConfig, u: &HPoint, route: KlfRoute) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let route = match route {
        KlfRoute::Fourier => LhsRoute::Fourier,
        KlfRoute::Ewald => LhsRoute::EwaldExtrapolated,
        KlfRoute::Analytic => LhsRoute::Analytic,
    };
    let lhs = klf_lhs(&f, u, route, Some(cfg.eps))?;
    let rhs = klf_rhs(&f, u)?;
    let printed = klf_rhs_as_printed(&f, u)?;
    let res = (lhs.value - rhs).abs();
    let tol = cfg.tol("klf", 1e-6);
    let inputs = vec![("d", f.d().to_string()), ("u", fmt_point(u)), ("route", format!("{route:?}"))];
    let values = vec![
        ("lhs", lhs.value),
        ("rhs", rhs),
        ("rhs_as_printed", printed),
        ("c_gamma", c_gamma(&f)),
        ("extrapolation_err", lhs.extrapolation_err),
        ("halving_change", lhs.halving_change),
    ];
    Ok(vec![rec("klf", "Kronecker limit formula: constant term of E at s = 1 against log eta", inputs, values, res, tol, judged(res, tol), t)])
}

pub fn eta(cfg: &RunConfig, u: &HPoint) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let v = log_eta(&f, u, cfg.omega_max)?;
    let inputs = vec![("d", f.d().to_string()), ("u", fmt_point(u)), ("radius", v.radius.to_string())];
    let values = vec![("re", v.log_eta.re), ("im", v.log_eta.im), ("tail_bound", v.tail_bound)];
    Ok(vec![rec("eta", "log eta as a sum over the half dual lattice", inputs, values, v.tail_bound, f64::NAN, Status::ReportOnly, t)])
}

fn fmt_matrix(m: &IntMatrix) -> String {
    format!("{},{};{},{}", m.a, m.b, m.c, m.d)
}

pub fn dgamma(cfg: &RunConfig, m: &IntMatrix) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let v = d_gamma(&f, m, &default_samples(m))?;
    let inputs = vec![("d", f.d().to_string()), ("M", fmt_matrix(m)), ("samples", v.samples.len().to_string())];
    let mut values = vec![("D".to_string(), v.value), ("sd".to_string(), v.sd)];
    values.extend(v.per_sample.iter().enumerate().map(|(i, x)| (format!("D_sample.{i}"), *x)));
    let tol = cfg.tol("dgamma.u_independence", 1e-6);
    let mut out = vec![rec(
        "dgamma.u_independence",
        "Im log eta(Mu) - Im log eta(u) does not depend on u",
        inputs.clone(),
        values,
        v.sd,
        tol,
        judged(v.sd, tol),
        t,
    )];
    let t = Instant::now();
    let sq = *m * *m;
    let v2 = d_gamma(&f, &sq, &default_samples(&sq))?;
    let res = (v2.value - 2.0 * v.value).abs();
    let tol = cfg.tol("dgamma.homomorphism", 1e-6);
    out.push(rec(
        "dgamma.homomorphism",
        "D(M^2) = 2 D(M)",
        inputs,
        vec![("D_M", v.value), ("D_M2", v2.value), ("sd_M2", v2.sd)],
        res,
        tol,
        judged(res, tol),
        t,
    ));
    Ok(out)
}

pub fn dgamma_batch(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    Ok(verify::criterion_7(&cfg.verify_config())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum E1Route {
    Hecke,
    HeckeThreePoint,
    HeckeLimit,
    Weierstrass,
}

impl From<E1Route> for E1Method {
    fn from(r: E1Route) -> Self {
        match r {
            E1Route::Hecke => E1Method::Hecke,
            E1Route::HeckeThreePoint => E1Method::HeckeThreePoint,
            E1Route::HeckeLimit => E1Method::HeckeLimit,
            E1Route::Weierstrass => E1Method::Weierstrass,
        }
    }
}

pub fn elliptic(cfg: &RunConfig, c: AlgInt, d: AlgInt, route: E1Route) -> Result<Vec<CheckRecord>> {
    let t = Instant::now();
    let v = elliptic_dedekind(c, d, route.into())?;
    let w = elliptic_dedekind(c, d, E1Method::Weierstrass)?;
    let res = (v.value - w.value).norm();
    let tol = cfg.tol("elliptic_dedekind", 1e-8);
    let inputs = vec![
        ("d_field", c.field.d().to_string()),
        ("c", c.to_string()),
        ("d", d.to_string()),
        ("method", format!("{route:?}")),
        ("coprime", v.coprime.to_string()),
    ];
    let values = vec![("re", v.value.re), ("im", v.value.im), ("weierstrass_re", w.value.re), ("weierstrass_im", w.value.im)];
    Ok(vec![rec("elliptic_dedekind", "elliptic Dedekind sum D(c, d) by two E_1 routes", inputs, values, res, tol, judged(res, tol), t)])
}

pub fn g_compare(cfg: &RunConfig, u: &HPoint) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let g = egm_g(&f, u, cfg.w_max)?;
    let rep = geta_comparison(&f, u)?;
    let derived = (g - 2.0 * rep.log_abs_eta).abs();
    let tol = cfg.tol("g_compare.two_log_eta", 1e-8);
    let inputs = vec![("d", f.d().to_string()), ("u", fmt_point(u))];
    let mut out = vec![rec(
        "g_compare.two_log_eta",
        "g(u) = 2 log|eta(u)|",
        inputs.clone(),
        vec![("g", g), ("log_abs_eta", rep.log_abs_eta)],
        derived,
        tol,
        judged(derived, tol),
        t,
    )];
    out.push(rec(
        "g_compare.as_printed",
        "g(u) against the printed relation with log|eta| and B(r)",
        inputs,
        vec![
            ("printed_rhs", rep.printed_rhs),
            ("functional_part", rep.functional_part),
            ("b_constant", rep.b_constant),
            ("b_r_part", rep.b_r_part),
        ],
        rep.residual.abs(),
        1e-6,
        Status::ReportOnly,
        t,
    ));
    Ok(out)
}

pub fn zeta2(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let f = field(cfg)?;
    let t = Instant::now();
    let rep = zeta2_check(&f)?;
    let out = rep
        .readings
        .iter()
        .map(|r| {
            rec(
                format!("zeta2.{}", slug(r.name)),
                "zeta_K(2) from the dual lattice area",
                vec![("d", f.d().to_string())],
                vec![("value", r.value), ("dual_area", r.dual_area), ("zeta_K(2)", rep.zeta_k_2)],
                (r.value - rep.zeta_k_2).abs(),
                1e-6,
                Status::ReportOnly,
                t,
            )
        })
        .collect();
    Ok(out)
}

/// `r.name` as an id component
fn slug(name: &str) -> String {
    let s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect();
    s.split('_').filter(|p| !p.is_empty()).collect::<Vec<_>>().join("_")
}

pub fn verify_all(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    Ok(verify::run_all(&cfg.verify_config())?)
}
