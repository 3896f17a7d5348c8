//! Run configuration: defaults, then a TOML file, then `KLF_*` environment
//! variables, then command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use bianchi_klf::eisenstein::laurent::EPS_SCHEDULE;
use bianchi_klf::eisenstein::QuadratureGrid;
use bianchi_klf::numfield::SUPPORTED_D;
use bianchi_klf::verify::VerifyConfig;

pub const ENV_PREFIX: &str = "KLF_";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "tsv" => Ok(Format::Tsv),
            _ => bail!("expected jsonl or tsv, got {s:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub d: i64,
    pub c_max: f64,
    pub d_max: f64,
    /// dual-lattice radius for Fourier sums; `None` picks it from `r`
    pub omega_max: Option<f64>,
    /// radius of the `w` sum in `g`; `None` picks it from `r`
    pub w_max: Option<f64>,
    pub eps: [f64; 3],
    pub quadrature_n: usize,
    pub seed: u64,
    /// 0 lets rayon decide
    pub threads: usize,
    pub tol: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d: -1,
            c_max: 60.0,
            d_max: 240.0,
            omega_max: None,
            w_max: None,
            eps: EPS_SCHEDULE,
            quadrature_n: QuadratureGrid::default().n,
            seed: 2024,
            threads: 0,
            tol: BTreeMap::new(),
            out: None,
            format: Format::Jsonl,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    field: FieldSection,
    #[serde(default)]
    truncation: TruncationSection,
    #[serde(default)]
    numerics: NumericsSection,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSection {
    d: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncationSection {
    c_max: Option<f64>,
    d_max: Option<f64>,
    omega_max: Option<f64>,
    w_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NumericsSection {
    eps: Option<[f64; 3]>,
    quadrature_n: Option<usize>,
    seed: Option<u64>,
    threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<PathBuf>,
    format: Option<Format>,
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub d: Option<i64>,
    pub c_max: Option<f64>,
    pub d_max: Option<f64>,
    pub omega_max: Option<f64>,
    pub w_max: Option<f64>,
    pub eps: Option<[f64; 3]>,
    pub quadrature_n: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub tol: Vec<(String, f64)>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(file: Option<&Path>, env: &[(String, String)], cli: &Overrides) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            c.apply_file(&text).with_context(|| format!("in config file {}", path.display()))?;
        }
        c.apply_env(env)?;
        c.apply_cli(cli);
        c.validate()?;
        Ok(c)
    }

    fn apply_file(&mut self, text: &str) -> Result<()> {
        let f: FileConfig = toml::from_str(text)?;
        set(&mut self.d, f.field.d);
        set(&mut self.c_max, f.truncation.c_max);
        set(&mut self.d_max, f.truncation.d_max);
        self.omega_max = f.truncation.omega_max.or(self.omega_max);
        self.w_max = f.truncation.w_max.or(self.w_max);
        set(&mut self.eps, f.numerics.eps);
        set(&mut self.quadrature_n, f.numerics.quadrature_n);
        set(&mut self.seed, f.numerics.seed);
        set(&mut self.threads, f.numerics.threads);
        self.tol.extend(f.tolerances);
        self.out = f.output.path.or(self.out.take());
        set(&mut self.format, f.output.format);
        Ok(())
    }

    /// `KLF_SECTION_KEY=value`; tolerances as `KLF_TOLERANCES=id=tol,id=tol`.
    fn apply_env(&mut self, env: &[(String, String)]) -> Result<()> {
        for (k, v) in env {
            let Some(key) = k.strip_prefix(ENV_PREFIX) else { continue };
            let path = env_key_path(key).ok_or_else(|| anyhow!("{k}: unknown configuration key"))?;
            let bad = |e: anyhow::Error| e.context(format!("{k} ({path})"));
            match path {
                "field.d" => self.d = parse_num(v).map_err(bad)?,
                "truncation.c_max" => self.c_max = parse_num(v).map_err(bad)?,
                "truncation.d_max" => self.d_max = parse_num(v).map_err(bad)?,
                "truncation.omega_max" => self.omega_max = Some(parse_num(v).map_err(bad)?),
                "truncation.w_max" => self.w_max = Some(parse_num(v).map_err(bad)?),
                "numerics.eps" => self.eps = parse_eps(v).map_err(bad)?,
                "numerics.quadrature_n" => self.quadrature_n = parse_num(v).map_err(bad)?,
                "numerics.seed" => self.seed = parse_num(v).map_err(bad)?,
                "numerics.threads" => self.threads = parse_num(v).map_err(bad)?,
                "tolerances" => {
                    for item in v.split(',').filter(|s| !s.trim().is_empty()) {
                        let (id, t) = parse_tol(item).map_err(bad)?;
                        self.tol.insert(id, t);
                    }
                }
                "output.path" => self.out = Some(PathBuf::from(v)),
                "output.format" => self.format = v.parse().map_err(bad)?,
                _ => unreachable!(),
            }
        }
        Ok(())
    }

    fn apply_cli(&mut self, o: &Overrides) {
        set(&mut self.d, o.d);
        set(&mut self.c_max, o.c_max);
        set(&mut self.d_max, o.d_max);
        self.omega_max = o.omega_max.or(self.omega_max);
        self.w_max = o.w_max.or(self.w_max);
        set(&mut self.eps, o.eps);
        set(&mut self.quadrature_n, o.quadrature_n);
        set(&mut self.seed, o.seed);
        set(&mut self.threads, o.threads);
        self.tol.extend(o.tol.iter().cloned());
        self.out = o.out.clone().or(self.out.take());
        set(&mut self.format, o.format);
    }

    fn validate(&self) -> Result<()> {
        if !SUPPORTED_D.contains(&self.d) {
            bail!("field.d: {} is not one of {SUPPORTED_D:?}", self.d);
        }
        for (key, v) in [("truncation.c_max", Some(self.c_max)), ("truncation.d_max", Some(self.d_max)),
            ("truncation.omega_max", self.omega_max), ("truncation.w_max", self.w_max)]
        {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("{key}: must be positive, got {v}");
                }
            }
        }
        let e = self.eps;
        if !(e[0] > e[1] && e[1] > e[2] && e[2] > 0.0) {
            bail!("numerics.eps: must be strictly decreasing and positive, got {e:?}");
        }
        if self.quadrature_n == 0 {
            bail!("numerics.quadrature_n: must be positive");
        }
        for (id, t) in &self.tol {
            if !(*t > 0.0 && t.is_finite()) {
                bail!("tolerances.{id}: must be positive, got {t}");
            }
        }
        Ok(())
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            d: self.d,
            eps: self.eps,
            quadrature_n: self.quadrature_n,
            seed: self.seed,
            tol_overrides: self.tol.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }

    pub fn tol(&self, id: &str, default: f64) -> f64 {
        self.verify_config().tol(id, default)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

const ENV_KEYS: [&str; 12] = [
    "field.d",
    "truncation.c_max",
    "truncation.d_max",
    "truncation.omega_max",
    "truncation.w_max",
    "numerics.eps",
    "numerics.quadrature_n",
    "numerics.seed",
    "numerics.threads",
    "tolerances",
    "output.path",
    "output.format",
];

fn env_key_path(key: &str) -> Option<&'static str> {
    let key = key.to_ascii_lowercase();
    ENV_KEYS.iter().copied().find(|p| p.replace('.', "_") == key)
}

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| anyhow!("{e}: {v:?}"))
}

pub fn parse_eps(v: &str) -> Result<[f64; 3]> {
    let xs: Vec<f64> = v.split(',').map(parse_num).collect::<Result<_>>()?;
    xs.try_into().map_err(|xs: Vec<f64>| anyhow!("expected three values, got {}", xs.len()))
}

/// `id=tol`
pub fn parse_tol(v: &str) -> Result<(String, f64)> {
    let (id, t) = v.split_once('=').ok_or_else(|| anyhow!("expected id=tol, got {v:?}"))?;
    Ok((id.trim().to_string(), parse_num(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn precedence_is_cli_env_file_default() {
        let dir = std::env::temp_dir().join(format!("klf-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "[field]\nd = -3\n[truncation]\nc_max = 20\nd_max = 80\n").unwrap();
        let cli = Overrides { c_max: Some(10.0), ..Default::default() };
        let c = RunConfig::load(Some(&path), &env(&[("KLF_TRUNCATION_C_MAX", "15"), ("KLF_TRUNCATION_D_MAX", "50")]), &cli)
            .unwrap();
        assert_eq!(c.d, -3);
        assert_eq!(c.c_max, 10.0);
        assert_eq!(c.d_max, 50.0);
        assert_eq!(c.quadrature_n, 24);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut c = RunConfig::default();
        let err = c.apply_file("[numerics]\nepsilon = [0.1, 0.05, 0.02]\n").unwrap_err();
        assert!(format!("{err:#}").contains("epsilon"), "{err:#}");
        let err = c.apply_env(&env(&[("KLF_NUMERICS_BOGUS", "1")])).unwrap_err();
        assert!(err.to_string().contains("KLF_NUMERICS_BOGUS"));
        // unrelated variables are ignored
        c.apply_env(&env(&[("HOME", "/root")])).unwrap();
    }

    #[test]
    fn invalid_values_name_their_key() {
        let cli = Overrides { eps: Some([0.01, 0.02, 0.005]), ..Default::default() };
        let err = RunConfig::load(None, &[], &cli).unwrap_err();
        assert!(err.to_string().starts_with("numerics.eps"), "{err}");
        let cli = Overrides { d: Some(-5), ..Default::default() };
        assert!(RunConfig::load(None, &[], &cli).unwrap_err().to_string().starts_with("field.d"));
        let err = RunConfig::load(None, &env(&[("KLF_FIELD_D", "x")]), &Overrides::default()).unwrap_err();
        assert!(format!("{err:#}").contains("field.d"), "{err:#}");
    }

    #[test]
    fn env_tolerances_and_eps_parse() {
        let c = RunConfig::load(
            None,
            &env(&[("KLF_TOLERANCES", "c6.klf=1e-5, c8=1e-3"), ("KLF_NUMERICS_EPS", "0.04,0.02,0.01")]),
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(c.tol.get("c6.klf"), Some(&1e-5));
        assert_eq!(c.tol("c8.order.x", 1.0), 1e-3);
        assert_eq!(c.eps, [0.04, 0.02, 0.01]);
    }
}
