//! Upper half-space `H = {z + r j : r > 0}`, the action of `SL(2, C)` on it,
//! and a finite-difference hyperbolic Laplacian.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numfield::{extended_gcd, AlgInt, ImagQuadField};

/// A point `z + r j` of hyperbolic 3-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub z: Complex64,
    pub r: f64,
}

impl HPoint {
    pub fn new(z: Complex64, r: f64) -> Result<Self> {
        if r > 0.0 && r.is_finite() && z.is_finite() {
            Ok(Self { z, r })
        } else {
            Err(Error::OutsideHalfSpace(r))
        }
    }

    pub fn from_xyr(x: f64, y: f64, r: f64) -> Result<Self> {
        Self::new(Complex64::new(x, y), r)
    }

    /// The point `j`.
    pub fn j() -> Self {
        Self { z: Complex64::new(0.0, 0.0), r: 1.0 }
    }

    pub fn translate(&self, w: Complex64) -> Self {
        Self { z: self.z + w, r: self.r }
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.z.re, self.z.im, self.r)
    }
}

/// A matrix in `SL(2, C)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl GMatrix {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if (m.det() - 1.0).norm() < 1e-12 {
            Ok(m)
        } else {
            Err(Error::Domain(format!("determinant {} != 1", m.det())))
        }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &GMatrix) -> GMatrix {
        GMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// `|cz + d|^2 + |c|^2 r^2`, the automorphy denominator.
pub fn denominator(m: &GMatrix, u: &HPoint) -> Result<f64> {
    let den = (m.c * u.z + m.d).norm_sqr() + m.c.norm_sqr() * u.r * u.r;
    if den > 0.0 && den.is_finite() {
        Ok(den)
    } else {
        Err(Error::SingularMatrix)
    }
}

/// Action of `M` on `H` in closed form:
/// `z_M = ((az+b) conj(cz+d) + a conj(c) r^2) / den`, `r_M = r / den`.
pub fn moebius(m: &GMatrix, u: &HPoint) -> Result<HPoint> {
    let den = denominator(m, u)?;
    let num = (m.a * u.z + m.b) * (m.c * u.z + m.d).conj() + m.a * m.c.conj() * (u.r * u.r);
    HPoint::new(num / den, u.r / den)
}

/// A matrix in `SL(2, O_K)` with exact entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub a: AlgInt,
    pub b: AlgInt,
    pub c: AlgInt,
    pub d: AlgInt,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

impl IntMatrix {
    pub fn new(a: AlgInt, b: AlgInt, c: AlgInt, d: AlgInt) -> Result<Self> {
        let m = Self { a, b, c, d };
        let det = m.det();
        if det == a.field.one() {
            Ok(m)
        } else {
            Err(Error::Domain(format!("determinant {det} != 1")))
        }
    }

    pub fn identity(f: ImagQuadField) -> Self {
        Self { a: f.one(), b: f.zero(), c: f.zero(), d: f.one() }
    }

    pub fn field(&self) -> ImagQuadField {
        self.a.field
    }

    pub fn det(&self) -> AlgInt {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Equality in `PSL(2, O_K)`.
    pub fn eq_psl(&self, o: &IntMatrix) -> bool {
        self == o || *self == o.neg()
    }

    /// Largest entry norm.
    pub fn height(&self) -> i64 {
        [self.a, self.b, self.c, self.d].iter().map(|e| e.norm()).max().unwrap()
    }

    pub fn to_complex(&self) -> GMatrix {
        GMatrix {
            a: self.a.to_complex(),
            b: self.b.to_complex(),
            c: self.c.to_complex(),
            d: self.d.to_complex(),
        }
    }

    /// Some matrix with bottom row `(c, d)`; requires `(c, d) = O_K`.
    pub fn with_bottom_row(c: AlgInt, d: AlgInt) -> Result<Self> {
        let (g, x, y) = extended_gcd(c, d)?;
        if !g.is_unit() {
            return Err(Error::Domain(format!("({c}, {d}) is not coprime")));
        }
        // x c + y d = g, g a unit: take a = y/g, b = -x/g
        let ginv = g.conj();
        Self::new(y * ginv, -(x * ginv), c, d)
    }

    pub fn translation(w: AlgInt) -> Self {
        let f = w.field;
        Self { a: f.one(), b: w, c: f.zero(), d: f.one() }
    }

    pub fn inversion(f: ImagQuadField) -> Self {
        Self { a: f.zero(), b: -f.one(), c: f.one(), d: f.zero() }
    }

    pub fn diagonal(unit: AlgInt) -> Result<Self> {
        if !unit.is_unit() {
            return Err(Error::Domain(format!("{unit} is not a unit")));
        }
        let f = unit.field;
        Ok(Self { a: unit, b: f.zero(), c: f.zero(), d: unit.conj() })
    }

    /// Generators used to build random group elements: translations by
    /// `1` and `omega`, the inversion, and a generator of the unit group.
    pub fn generators(f: ImagQuadField) -> Vec<IntMatrix> {
        let mut gens = vec![
            Self::translation(f.one()),
            Self::translation(f.elt(0, 1)),
            Self::inversion(f),
        ];
        if f.unit_count() > 2 {
            gens.push(Self::diagonal(f.elt(0, 1)).expect("omega is a unit here"));
        }
        gens
    }
}

impl Mul for IntMatrix {
    type Output = IntMatrix;
    fn mul(self, o: IntMatrix) -> IntMatrix {
        IntMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Finite-difference hyperbolic Laplacian
/// `r^2 (f_xx + f_yy + f_rr) - r f_r` on the 7-point central stencil.
pub fn laplace_beltrami<T, F>(f: F, u: &HPoint, h: f64) -> Result<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    F: Fn(&HPoint) -> T,
{
    if u.r - h <= 0.0 {
        return Err(Error::OutsideHalfSpace(u.r - h));
    }
    let at = |dx: f64, dy: f64, dr: f64| f(&HPoint { z: u.z + Complex64::new(dx, dy), r: u.r + dr });
    let f0 = f(u);
    let (xp, xm) = (at(h, 0.0, 0.0), at(-h, 0.0, 0.0));
    let (yp, ym) = (at(0.0, h, 0.0), at(0.0, -h, 0.0));
    let (rp, rm) = (at(0.0, 0.0, h), at(0.0, 0.0, -h));
    let second = (xp + xm + yp + ym + rp + rm - f0 * 6.0) * (1.0 / (h * h));
    let first = (rp - rm) * (1.0 / (2.0 * h));
    Ok(second * (u.r * u.r) - first * u.r)
}

/// Default stencil step, relative to the height of the point.
pub fn default_step(u: &HPoint) -> f64 {
    1e-3 * u.r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_k, e_char};
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_word(f: ImagQuadField, rng: &mut impl Rng, len: usize) -> IntMatrix {
        let gens = IntMatrix::generators(f);
        let mut m = IntMatrix::identity(f);
        for _ in 0..len {
            let g = gens[rng.gen_range(0..gens.len())];
            m = if rng.gen_bool(0.5) { m * g } else { m * g.inverse() };
        }
        m
    }

    #[test]
    fn moebius_examples() {
        let u = HPoint::from_xyr(0.3, 0.4, 0.5).unwrap();
        let id = GMatrix::identity();
        assert_eq!(moebius(&id, &u).unwrap(), u);
        assert_eq!(denominator(&id, &u).unwrap(), 1.0);

        let f = ImagQuadField::gaussian();
        let t = IntMatrix::translation(f.elt(0, 1)).to_complex();
        let tu = moebius(&t, &u).unwrap();
        assert!((tu.z - c(0.3, 1.4)).norm() < 1e-15 && tu.r == 0.5);
        assert_eq!(denominator(&t, &u).unwrap(), 1.0);

        let s = IntMatrix::inversion(f).to_complex();
        let sj = moebius(&s, &HPoint::j()).unwrap();
        assert!(sj.z.norm() < 1e-15 && (sj.r - 1.0).abs() < 1e-15);
        assert!((denominator(&s, &u).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_points_and_matrices() {
        assert!(HPoint::from_xyr(0.0, 0.0, 0.0).is_err());
        assert!(HPoint::from_xyr(0.0, 0.0, -1.0).is_err());
        let z = Complex64::new(0.0, 0.0);
        let sing = GMatrix { a: z, b: z, c: z, d: z };
        assert!(moebius(&sing, &HPoint::j()).is_err());
        let f = ImagQuadField::gaussian();
        assert!(IntMatrix::new(f.int(2), f.zero(), f.zero(), f.one()).is_err());
    }

    #[test]
    fn action_and_cocycle() {
        for d in [-1, -2, -3, -7, -11] {
            let f = ImagQuadField::new(d).unwrap();
            let mut rng = rand::rngs::StdRng::seed_from_u64(7 + d.unsigned_abs());
            for _ in 0..100 {
                let m = random_word(f, &mut rng, 6);
                let n = random_word(f, &mut rng, 6);
                assert_eq!(m.det(), f.one());
                let u = HPoint::from_xyr(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.3..2.0)).unwrap();
                let (mc, nc) = (m.to_complex(), n.to_complex());
                let mn = (m * n).to_complex();
                let lhs = moebius(&mn, &u).unwrap();
                let nu = moebius(&nc, &u).unwrap();
                let rhs = moebius(&mc, &nu).unwrap();
                let scale = lhs.z.norm().max(lhs.r).max(1.0);
                assert!((lhs.z - rhs.z).norm() < 1e-12 * scale);
                assert!(((lhs.r - rhs.r) / lhs.r).abs() < 1e-12);
                let dmn = denominator(&mn, &u).unwrap();
                let prod = denominator(&mc, &nu).unwrap() * denominator(&nc, &u).unwrap();
                assert!(((dmn - prod) / dmn).abs() < 1e-12);
                assert!(((u.r / dmn - lhs.r) / lhs.r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bottom_row_witness() {
        let f = ImagQuadField::new(-7).unwrap();
        let m = IntMatrix::with_bottom_row(f.elt(3, 1), f.elt(2, -1)).unwrap();
        assert_eq!(m.det(), f.one());
        assert_eq!((m.c, m.d), (f.elt(3, 1), f.elt(2, -1)));
        assert!(IntMatrix::with_bottom_row(f.int(2), f.int(4)).is_err());
    }

    #[test]
    fn laplacian_of_powers_of_height() {
        let u = HPoint::from_xyr(0.1, -0.2, 0.8).unwrap();
        let konst = laplace_beltrami(|_: &HPoint| 3.5, &u, 1e-3).unwrap();
        assert!(konst.abs() < 1e-9);
        // -Delta r^(1+s) = (1 - s^2) r^(1+s), s = 2
        let s = 2.0;
        let f = |p: &HPoint| p.r.powf(1.0 + s);
        let exact = -(1.0 - s * s) * u.r.powf(1.0 + s);
        let err = |h: f64| (laplace_beltrami(f, &u, h).unwrap() - exact).abs();
        let (e1, e2) = (err(1e-2), err(5e-3));
        assert!(e1 < 1e-3);
        let order = (e1 / e2).log2();
        assert!((1.7..=2.3).contains(&order), "order {order}");
        assert!(laplace_beltrami(f, &u, 0.8).is_err());
    }

    #[test]
    fn bessel_mode_is_harmonic() {
        // r K_1(2 pi |w| r) e(<w, z>) with w = 1 + i
        let w = c(1.0, 1.0);
        let f = |p: &HPoint| {
            let k = bessel_k(1.0, 2.0 * std::f64::consts::PI * w.norm() * p.r).unwrap();
            e_char(w.re * p.z.re + w.im * p.z.im) * (p.r * k)
        };
        let u = HPoint::from_xyr(0.3, 0.4, 0.9).unwrap();
        let val = f(&u).norm();
        let h = default_step(&u);
        let (l1, l2) = (laplace_beltrami(f, &u, h).unwrap(), laplace_beltrami(f, &u, h / 2.0).unwrap());
        // second order stencil, so one Richardson step removes the h^2 term
        let lap = (l2 * 4.0 - l1) / 3.0;
        assert!(lap.norm() < 1e-6 * val, "{lap} vs {val}");
    }
}
