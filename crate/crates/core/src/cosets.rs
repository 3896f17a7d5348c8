//! Coset representatives for `Gamma'_inf \ Gamma` and the double cosets
//! `Gamma'_inf \ Gamma / Gamma'_inf`, where `Gamma = PSL(2, O_K)` and
//! `Gamma'_inf` is the unipotent stabilizer `{+-(1 l; 0 1) : l in O_K}`.
//!
//! Left multiplication by `Gamma'_inf` fixes the bottom row, so a coset is a
//! coprime bottom row `(c, d)` up to the overall sign. Right multiplication
//! moves `d` by `c O_K`. The diagonal unit matrices lie in the full
//! stabilizer but not in `Gamma'_inf`, so every `Gamma_inf`-coset splits into
//! [`unit_multiplicity`] cosets of `Gamma'_inf`; rows `(c, d)` and `u (c, d)`
//! are kept apart and both are listed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hspace::IntMatrix;
use crate::numfield::{coprime, coprime_residues_mod, AlgInt, ImagQuadField};

/// Number of `Gamma'_inf`-cosets in a `Gamma_inf`-coset, i.e. the number of
/// units modulo `+-1`.
pub fn unit_multiplicity(f: &ImagQuadField) -> usize {
    f.cusp_index()
}

/// A coprime bottom row with a witness matrix in `SL(2, O_K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BottomRow {
    pub c: AlgInt,
    pub d: AlgInt,
    pub witness: IntMatrix,
}

/// Double coset `Gamma'_inf omega_{d/c} Gamma'_inf` with `c != 0` and `d`
/// reduced modulo `c O_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleCosetRep {
    pub c: AlgInt,
    pub d: AlgInt,
    pub witness: IntMatrix,
}

/// The double coset decomposition up to a bound on `|c|`.
#[derive(Clone, Debug)]
pub struct DoubleCosets {
    /// The upper triangular stratum: one class `diag(u, 1/u)` per unit mod sign.
    pub infinity: Vec<IntMatrix>,
    pub finite: Vec<DoubleCosetRep>,
}

/// Key identifying a double coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoubleCosetKey {
    /// Upper triangular, with lower right entry `u` (a unit mod sign).
    Infinity(AlgInt),
    Finite { c: AlgInt, d: AlgInt },
}

fn sign_is_canonical(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// `(c, d)` or `(-c, -d)`, whichever has its first nonzero coordinate positive.
pub fn canonical_row(c: AlgInt, d: AlgInt) -> (AlgInt, AlgInt) {
    if sign_is_canonical(&[c.x, c.y, d.x, d.y]) {
        (c, d)
    } else {
        (-c, -d)
    }
}

/// The coset of `Gamma'_inf \ Gamma` containing `m`, as a canonical row.
pub fn coset_key(m: &IntMatrix) -> (AlgInt, AlgInt) {
    canonical_row(m.c, m.d)
}

/// The double coset containing `m`.
pub fn double_coset_key(m: &IntMatrix) -> DoubleCosetKey {
    if m.c.is_zero() {
        let (_, d) = canonical_row(m.c, m.d);
        DoubleCosetKey::Infinity(d)
    } else {
        let (c, d) = if sign_is_canonical(&[m.c.x, m.c.y]) { (m.c, m.d) } else { (-m.c, -m.d) };
        DoubleCosetKey::Finite { c, d: d.reduce_mod(&c) }
    }
}

fn check_bound(name: &'static str, x: f64) -> Result<i64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{name} must be finite and nonnegative, got {x}")));
    }
    Ok((x * x + 1e-9).floor() as i64)
}

/// All cosets of `Gamma'_inf \ Gamma` with `|c| <= c_max` and `|d| <= d_max`.
///
/// The `c = 0` stratum (the unit diagonal matrices mod sign) is always
/// included. Rows are canonical up to sign and ordered by `N(c)`, then by the
/// order of [`ImagQuadField::elements_up_to_norm`] in `d`.
pub fn coset_reps_infinity(f: &ImagQuadField, c_max: f64, d_max: f64) -> Result<Vec<BottomRow>> {
    let nc = check_bound("c_max", c_max)?;
    let nd = check_bound("d_max", d_max)?;
    let mut out: Vec<BottomRow> = f
        .units_mod_sign()
        .into_iter()
        .map(|u| {
            let (c, d) = canonical_row(f.zero(), u);
            BottomRow { c, d, witness: IntMatrix::diagonal(d.conj()).expect("unit") }
        })
        .collect();
    let cs: Vec<AlgInt> = f.elements_up_to_norm(nc).into_iter().filter(|c| !c.is_zero()).collect();
    let ds = f.elements_up_to_norm(nd.max(1));
    let rows: Vec<Vec<BottomRow>> = cs
        .par_iter()
        .map(|&c| {
            let mut v = Vec::new();
            for &d in &ds {
                if d.norm() > nd || !sign_is_canonical(&[c.x, c.y, d.x, d.y]) || !coprime(c, d) {
                    continue;
                }
                let witness = IntMatrix::with_bottom_row(c, d).expect("coprime row");
                v.push(BottomRow { c, d, witness });
            }
            v
        })
        .collect();
    out.extend(rows.into_iter().flatten());
    Ok(out)
}

/// The double cosets `Gamma'_inf \ Gamma / Gamma'_inf` with `|c| <= c_max`.
pub fn double_coset_reps(f: &ImagQuadField, c_max: f64) -> Result<DoubleCosets> {
    let nc = check_bound("c_max", c_max)?;
    let infinity = f
        .units_mod_sign()
        .into_iter()
        .map(|u| {
            let (_, d) = canonical_row(f.zero(), u);
            IntMatrix::diagonal(d.conj()).expect("unit")
        })
        .collect();
    let cs: Vec<AlgInt> = f
        .elements_up_to_norm(nc)
        .into_iter()
        .filter(|c| !c.is_zero() && sign_is_canonical(&[c.x, c.y]))
        .collect();
    let finite: Vec<Vec<DoubleCosetRep>> = cs
        .par_iter()
        .map(|&c| {
            coprime_residues_mod(c)
                .expect("c is nonzero")
                .into_iter()
                .map(|d| DoubleCosetRep {
                    c,
                    d,
                    witness: IntMatrix::with_bottom_row(c, d).expect("coprime row"),
                })
                .collect()
        })
        .collect();
    Ok(DoubleCosets { infinity, finite: finite.into_iter().flatten().collect() })
}

impl DoubleCosetRep {
    pub fn key(&self) -> DoubleCosetKey {
        DoubleCosetKey::Finite { c: self.c, d: self.d }
    }

    /// Direct membership test, independent of [`double_coset_key`].
    pub fn contains(&self, m: &IntMatrix) -> bool {
        [(m.c, m.d), (-m.c, -m.d)]
            .iter()
            .any(|&(c, d)| c == self.c && d.congruent_mod(&self.d, &self.c))
    }
}

/// Every element of `PSL(2, O_K)` with entry norms at most `h`, one per
/// sign class.
pub fn psl_elements(f: &ImagQuadField, h: i64) -> Vec<IntMatrix> {
    let els = f.elements_up_to_norm(h);
    let mut out = Vec::new();
    for &c in &els {
        for &d in &els {
            if !sign_is_canonical(&[c.x, c.y, d.x, d.y]) {
                continue;
            }
            for &a in &els {
                for &b in &els {
                    if a * d - b * c == f.one() {
                        out.push(IntMatrix { a, b, c, d });
                    }
                }
            }
        }
    }
    out
}

/// Outcome of sorting all small elements into the emitted double cosets.
#[derive(Clone, Debug)]
pub struct PartitionAudit {
    pub elements: usize,
    pub classes: usize,
    /// elements lying in no emitted class
    pub unmatched: usize,
    /// elements lying in more than one emitted class
    pub overlapping: usize,
    /// emitted classes with equal keys
    pub duplicate_classes: usize,
}

impl PartitionAudit {
    pub fn is_partition(&self) -> bool {
        self.unmatched == 0 && self.overlapping == 0 && self.duplicate_classes == 0
    }
}

/// Check that each element of entry norm `<= h` lies in exactly one double
/// coset of [`double_coset_reps`] with `c_max = sqrt(h)`, by direct membership.
pub fn double_coset_audit(f: &ImagQuadField, h: i64) -> Result<PartitionAudit> {
    let dc = double_coset_reps(f, (h as f64).sqrt())?;
    let elements = psl_elements(f, h);
    let (mut unmatched, mut overlapping) = (0, 0);
    for m in &elements {
        let n = if m.c.is_zero() {
            dc.infinity.iter().filter(|t| t.d == m.d || t.d == -m.d).count()
        } else {
            dc.finite.iter().filter(|r| r.contains(m)).count()
        };
        match n {
            0 => unmatched += 1,
            1 => {}
            _ => overlapping += 1,
        }
    }
    let mut keys: Vec<DoubleCosetKey> = dc.finite.iter().map(|r| r.key()).collect();
    keys.extend(dc.infinity.iter().map(double_coset_key));
    let total = keys.len();
    let distinct: std::collections::HashSet<_> = keys.into_iter().collect();
    Ok(PartitionAudit {
        elements: elements.len(),
        classes: total,
        unmatched,
        overlapping,
        duplicate_classes: total - distinct.len(),
    })
}
