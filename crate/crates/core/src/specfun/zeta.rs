use std::f64::consts::PI;

use super::digamma;
use crate::error::{Error, Result};
use crate::numfield::ImagQuadField;

// B_2k / (2k)!, k = 1..=10
const BERN_OVER_FACT: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// Hurwitz zeta `sum_{n >= 0} (n + a)^-s` for real `s != 1`, `a > 0`, by
/// Euler-Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(a > 0.0 && s != 1.0);
    const N: usize = 30;
    let mut head = 0.0;
    for n in (0..N).rev() {
        head += (n as f64 + a).powf(-s);
    }
    let x = N as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) times x^(-s-2k+1)
    let mut poch = s;
    let mut xp = x.powf(-s - 1.0);
    for (k, c) in BERN_OVER_FACT.iter().enumerate() {
        tail += c * poch * xp;
        let k2 = 2.0 * (k as f64 + 1.0);
        poch *= (s + k2 - 1.0) * (s + k2);
        xp /= x * x;
    }
    head + tail
}

pub fn riemann_zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// Kronecker symbol `(D / n)` for `n > 0`.
pub fn kronecker_symbol(d: i64, n: u64) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut result = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0,
        };
    }
    // Jacobi symbol (d / n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// `L(s, chi_D)` for the quadratic character of discriminant `D`, real
/// `s > 0`, `s != 1`.
pub fn l_function(disc: i64, s: f64) -> f64 {
    let q = disc.unsigned_abs();
    let qf = q as f64;
    let mut acc = 0.0;
    for a in 1..q {
        let chi = kronecker_symbol(disc, a);
        if chi != 0 {
            acc += chi as f64 * hurwitz_zeta(s, a as f64 / qf);
        }
    }
    acc * qf.powf(-s)
}

/// `L(1, chi_D) = -(1/q) sum chi(a) psi(a/q)`.
pub fn l_function_at_one(disc: i64) -> f64 {
    let q = disc.unsigned_abs();
    let qf = q as f64;
    let mut acc = 0.0;
    for a in 1..q {
        let chi = kronecker_symbol(disc, a);
        if chi != 0 {
            acc += chi as f64 * digamma(a as f64 / qf);
        }
    }
    -acc / qf
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaMethod {
    /// `zeta(s) L(s, chi_dK)`
    Factorization,
    /// `(1/w) sum N(a)^-s` over nonzero elements, with an integral tail
    ElementSum,
}

#[derive(Clone, Copy, Debug)]
pub struct ZetaValue {
    pub s: f64,
    pub value: f64,
    pub method: ZetaMethod,
    /// norm bound of the element sum; 0 for the factorized form
    pub truncation: i64,
}

/// Dedekind zeta `zeta_K(s)`, `s > 1`.
pub fn dedekind_zeta(field: &ImagQuadField, s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("dedekind_zeta needs s > 1, got {s}")));
    }
    Ok(riemann_zeta(s) * l_function(field.disc(), s))
}

/// Residue of `zeta_K` at `s = 1` from the class number formula (h = 1).
pub fn dedekind_zeta_residue(field: &ImagQuadField) -> f64 {
    2.0 * PI / (field.unit_count() as f64 * field.abs_disc().sqrt())
}

/// Element-sum evaluation of `zeta_K(s)`: an independent check on the
/// factorized form.
pub fn dedekind_zeta_element_sum(field: &ImagQuadField, s: f64, norm_bound: i64) -> ZetaValue {
    assert!(s > 1.0);
    let w = field.unit_count() as f64;
    let mut counts = vec![0u32; norm_bound as usize + 1];
    for a in field.elements_up_to_norm(norm_bound) {
        counts[a.norm() as usize] += 1;
    }
    let mut acc = super::CompensatedSum::new();
    for n in (1..=norm_bound as usize).rev() {
        if counts[n] > 0 {
            acc.add(counts[n] as f64 * (n as f64).powf(-s));
        }
    }
    // elements of norm in [X, X + dX] have density pi / covolume
    let x = norm_bound as f64 + 0.5;
    acc.add(PI / field.covolume() * x.powf(1.0 - s) / (s - 1.0));
    ZetaValue {
        s,
        value: acc.value() / w,
        method: ZetaMethod::ElementSum,
        truncation: norm_bound,
    }
}

/// Covolume of `PSL(2, O_K)`: `|d_K|^(3/2) zeta_K(2) / (4 pi^2)`.
pub fn vol_gamma(field: &ImagQuadField) -> f64 {
    let z2 = dedekind_zeta(field, 2.0).expect("s = 2 is in range");
    field.abs_disc().powf(1.5) * z2 / (4.0 * PI * PI)
}
