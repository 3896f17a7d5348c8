//! Complex lattices, their duals under the Euclidean pairing
//! `<w, z> = Re(conj(w) z)`, enumeration by norm shells and residue systems.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numfield::ImagQuadField;

/// `<w, z> = Re(conj(w) z)`, the Euclidean scalar product on `C = R^2`.
#[inline]
pub fn pairing(w: Complex64, z: Complex64) -> f64 {
    w.re * z.re + w.im * z.im
}

/// A lattice `Z w1 + Z w2` in `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CLattice {
    pub w1: Complex64,
    pub w2: Complex64,
}

/// The dual lattice `{v : <v, l> in Z for all l}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualLattice(pub CLattice);

/// A lattice point with its integer coordinates `m w1 + n w2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
    pub z: Complex64,
}

impl CLattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        let area = (w1.conj() * w2).im;
        if area.abs() < 1e-300 || !area.is_finite() {
            return Err(Error::Domain("lattice basis is degenerate".into()));
        }
        Ok(Self { w1, w2 })
    }

    /// `O_K = Z + Z omega`.
    pub fn ring_of_integers(field: &ImagQuadField) -> Self {
        Self { w1: Complex64::new(1.0, 0.0), w2: field.omega() }
    }

    /// Euclidean area of a fundamental parallelogram.
    pub fn area(&self) -> f64 {
        (self.w1.conj() * self.w2).im.abs()
    }

    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.w1 * m as f64 + self.w2 * n as f64
    }

    /// Real coordinates `(s, t)` with `z = s w1 + t w2`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let det = self.w1.re * self.w2.im - self.w2.re * self.w1.im;
        let s = (z.re * self.w2.im - self.w2.re * z.im) / det;
        let t = (self.w1.re * z.im - z.re * self.w1.im) / det;
        (s, t)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (s, t) = self.coordinates(z);
        (s - s.round()).abs() < tol && (t - t.round()).abs() < tol
    }

    /// Reduce `z` modulo the lattice into the half-open parallelogram.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let (s, t) = self.coordinates(z);
        z - self.point(s.floor() as i64, t.floor() as i64)
    }

    /// Basis `(v1, v2)` with `<v_i, w_k> = delta_ik`.
    pub fn dual(&self) -> DualLattice {
        // V = W^{-T} for W = [w1 w2] as real columns
        let (a, b, c, d) = (self.w1.re, self.w2.re, self.w1.im, self.w2.im);
        let det = a * d - b * c;
        let v1 = Complex64::new(d / det, -b / det);
        let v2 = Complex64::new(-c / det, a / det);
        DualLattice(CLattice { w1: v1, w2: v2 })
    }

    /// All nonzero lattice points with `|l| <= radius`, ordered by modulus and
    /// then argument.
    pub fn shells(&self, radius: f64) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        if !(radius > 0.0) {
            return out;
        }
        let dual = self.dual().0;
        let mmax = (radius * dual.w1.norm()).floor() as i64 + 1;
        let nmax = (radius * dual.w2.norm()).floor() as i64 + 1;
        let r2 = radius * radius * (1.0 + 1e-12);
        for m in -mmax..=mmax {
            for n in -nmax..=nmax {
                if m == 0 && n == 0 {
                    continue;
                }
                let z = self.point(m, n);
                if z.norm_sqr() <= r2 {
                    out.push(LatticePoint { m, n, z });
                }
            }
        }
        out.sort_by(shell_order);
        out
    }
}

fn shell_order(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    let (na, nb) = (a.z.norm_sqr(), b.z.norm_sqr());
    // equal moduli computed along different paths may differ in the last bits
    if (na - nb).abs() > 1e-12 * na.max(nb) {
        return na.total_cmp(&nb);
    }
    a.z.arg().total_cmp(&b.z.arg()).then((a.m, a.n).cmp(&(b.m, b.n)))
}

impl DualLattice {
    pub fn lattice(&self) -> &CLattice {
        &self.0
    }

    pub fn area(&self) -> f64 {
        self.0.area()
    }

    pub fn shells(&self, radius: f64) -> Vec<LatticePoint> {
        self.0.shells(radius)
    }

    /// The half lattice `{Re > 0} u {Re = 0, Im > 0}` within `radius`.
    pub fn plus_half(&self, radius: f64) -> Vec<LatticePoint> {
        self.shells(radius).into_iter().filter(|p| in_plus_half(p.z)).collect()
    }
}

/// Membership in the half plane used to split `w -> -w` orbits.
pub fn in_plus_half(z: Complex64) -> bool {
    let tol = 1e-12 * z.norm();
    z.re > tol || (z.re.abs() <= tol && z.im > 0.0)
}

/// Coset representatives of `L / dL` for a multiplier `d` of `L`, taken
/// from the fundamental parallelogram of `dL`.
pub fn residues_mod_lattice(d: Complex64, lat: &CLattice) -> Result<Vec<Complex64>> {
    if d.norm() == 0.0 {
        return Err(Error::ZeroArgument("residues_mod_lattice(0)"));
    }
    let scaled = CLattice { w1: lat.w1 * d, w2: lat.w2 * d };
    let index = (d.norm_sqr()).round();
    if (d.norm_sqr() - index).abs() > 1e-9 {
        return Err(Error::Domain(format!("{d} does not multiply the lattice into itself")));
    }
    for w in [scaled.w1, scaled.w2] {
        if !lat.contains(w, 1e-9) {
            return Err(Error::Domain(format!("{d} does not multiply the lattice into itself")));
        }
    }
    let corners = [Complex64::new(0.0, 0.0), scaled.w1, scaled.w2, scaled.w1 + scaled.w2];
    let coords: Vec<(f64, f64)> = corners.iter().map(|z| lat.coordinates(*z)).collect();
    let lo_m = coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
    let hi_m = coords.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
    let lo_n = coords.iter().map(|c| c.1).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
    let hi_n = coords.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
    let eps = 1e-9;
    let mut out = Vec::new();
    for n in lo_n..=hi_n {
        for m in lo_m..=hi_m {
            let z = lat.point(m, n);
            let (s, t) = scaled.coordinates(z);
            if s >= -eps && s < 1.0 - eps && t >= -eps && t < 1.0 - eps {
                out.push(z);
            }
        }
    }
    if out.len() as f64 != index {
        return Err(Error::Domain(format!(
            "found {} residues modulo {d}, expected {index}",
            out.len()
        )));
    }
    Ok(out)
}

/// All nonzero `v` in `Z^N` with `v^T g v <= bound`, for a positive definite
/// Gram matrix `g` (Fincke-Pohst enumeration). Each point comes with its
/// value of the form. Both `v` and `-v` are returned.
pub fn short_vectors<const N: usize>(g: &[[f64; N]; N], bound: f64) -> Result<Vec<([i64; N], f64)>> {
    // q[i][i] > 0, Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = *g;
    for i in 0..N {
        if !(q[i][i] > 0.0) {
            return Err(Error::Domain("Gram matrix is not positive definite".into()));
        }
        for j in i + 1..N {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..N {
            for l in k..N {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = [0i64; N];
    descend(&q, bound * (1.0 + 1e-12), N - 1, 0.0, &mut x, &mut out, g);
    Ok(out)
}

fn descend<const N: usize>(
    q: &[[f64; N]; N],
    bound: f64,
    i: usize,
    used: f64,
    x: &mut [i64; N],
    out: &mut Vec<([i64; N], f64)>,
    g: &[[f64; N]; N],
) {
    let centre: f64 = -(i + 1..N).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let room = (bound - used) / q[i][i];
    if room < 0.0 {
        return;
    }
    let half = room.sqrt();
    let lo = (centre - half).ceil() as i64;
    let hi = (centre + half).floor() as i64;
    for xi in lo..=hi {
        x[i] = xi;
        let t = xi as f64 - centre;
        let u = used + q[i][i] * t * t;
        if u > bound {
            continue;
        }
        if i == 0 {
            if x.iter().any(|&c| c != 0) {
                out.push((*x, quad_form(g, x)));
            }
        } else {
            descend(q, bound, i - 1, u, x, out, g);
        }
    }
    x[i] = 0;
}

/// `v^T g v` evaluated directly.
pub fn quad_form<const N: usize>(g: &[[f64; N]; N], v: &[i64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let mut row = 0.0;
        for j in 0..N {
            row += g[i][j] * v[j] as f64;
        }
        s += v[i] as f64 * row;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::SUPPORTED_D;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dual_examples() {
        let zi = CLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let d = zi.dual().0;
        assert!((d.w1 - c(1.0, 0.0)).norm() < 1e-15 && (d.w2 - c(0.0, 1.0)).norm() < 1e-15);

        let l2 = CLattice::new(c(1.0, 0.0), c(0.0, 2.0)).unwrap();
        let d2 = l2.dual().0;
        assert!((d2.w1 - c(1.0, 0.0)).norm() < 1e-15 && (d2.w2 - c(0.0, 0.5)).norm() < 1e-15);

        let f = ImagQuadField::new(-7).unwrap();
        let ok = CLattice::ring_of_integers(&f);
        let bi = ok.dual().0.dual().0;
        assert!(ok.contains(bi.w1, 1e-12) && ok.contains(bi.w2, 1e-12));
        assert!(bi.contains(ok.w1, 1e-12) && bi.contains(ok.w2, 1e-12));
    }

    #[test]
    fn pairing_and_area_reciprocity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for d in SUPPORTED_D {
            let f = ImagQuadField::new(d).unwrap();
            let l = CLattice::ring_of_integers(&f);
            let dual = l.dual();
            assert!((l.area() - f.abs_disc().sqrt() / 2.0).abs() < 1e-12);
            assert!((l.area() * dual.area() - 1.0).abs() < 1e-12);
            assert!((dual.0.w1.conj() * dual.0.w2).im > 0.0);
            for _ in 0..100 {
                let (m, n, p, q) = (
                    rng.gen_range(-50..50),
                    rng.gen_range(-50..50),
                    rng.gen_range(-50..50),
                    rng.gen_range(-50..50),
                );
                let v = pairing(dual.0.point(m, n), l.point(p, q));
                assert!((v - v.round()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shell_examples() {
        let zi = CLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(zi.shells(0.9).is_empty());
        assert_eq!(zi.shells(1.0).len(), 4);
        assert_eq!(zi.shells(2f64.sqrt()).len(), 8);
        let half = zi.dual().plus_half(1.0);
        let pts: Vec<Complex64> = half.iter().map(|p| p.z).collect();
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&c(1.0, 0.0)) && pts.contains(&c(0.0, 1.0)));
    }

    #[test]
    fn shells_symmetric_for_rings_of_integers() {
        for d in SUPPORTED_D {
            let f = ImagQuadField::new(d).unwrap();
            let l = CLattice::ring_of_integers(&f);
            let pts = l.shells(7.3);
            let has = |z: Complex64| pts.iter().any(|p| (p.z - z).norm() < 1e-9);
            for p in &pts {
                assert!(has(-p.z) && has(p.z.conj()), "d={d} {}", p.z);
            }
            let half = DualLattice(l).plus_half(7.3);
            assert_eq!(2 * half.len(), pts.len());
            assert!(half.iter().all(|p| in_plus_half(p.z) && !in_plus_half(-p.z)));
            for w in pts.windows(2) {
                assert!(w[0].z.norm() <= w[1].z.norm() + 1e-12);
            }
        }
    }

    #[test]
    fn residue_examples() {
        let zi = CLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(residues_mod_lattice(c(0.0, 1.0), &zi).unwrap().len(), 1);
        assert_eq!(residues_mod_lattice(c(2.0, 0.0), &zi).unwrap().len(), 4);
        assert_eq!(residues_mod_lattice(c(1.0, 1.0), &zi).unwrap().len(), 2);
        assert!(residues_mod_lattice(c(0.0, 0.0), &zi).is_err());
        assert!(residues_mod_lattice(c(0.5, 0.0), &zi).is_err());
    }

    #[test]
    fn residue_counts_match_exact_residue_systems() {
        for d in SUPPORTED_D {
            let f = ImagQuadField::new(d).unwrap();
            let l = CLattice::ring_of_integers(&f);
            for a in f.elements_up_to_norm(30) {
                if a.is_zero() {
                    continue;
                }
                let res = residues_mod_lattice(a.to_complex(), &l).unwrap();
                assert_eq!(res.len() as i64, crate::numfield::residues_mod(a).unwrap().len() as i64);
            }
        }
    }

    #[test]
    fn short_vectors_match_brute_force() {
        let g = [[2.0, 0.5, 0.1, 0.0], [0.5, 1.5, 0.0, 0.2], [0.1, 0.0, 1.0, 0.3], [0.0, 0.2, 0.3, 0.9]];
        let bound = 6.5;
        let mut fast: Vec<[i64; 4]> = short_vectors(&g, bound).unwrap().into_iter().map(|p| p.0).collect();
        let mut slow = Vec::new();
        for a in -6..=6 {
            for b in -6..=6 {
                for c in -6..=6 {
                    for d in -6..=6 {
                        let v = [a, b, c, d];
                        if v != [0; 4] && quad_form(&g, &v) <= bound {
                            slow.push(v);
                        }
                    }
                }
            }
        }
        fast.sort();
        slow.sort();
        assert_eq!(fast, slow);
        assert!(short_vectors(&[[1.0, 2.0], [2.0, 1.0]], 3.0).is_err());
        assert!(short_vectors(&[[-1.0]], 3.0).is_err());
    }
}
