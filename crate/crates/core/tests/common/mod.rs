//! Brute-force oracles shared by the property and acceptance suites.
//! None of these go through the crate's conic or spectrum code paths.

#![allow(dead_code)]

use untouchable::gf::{is_prime, Elem, Field};
use untouchable::plane::{Plane, PointSet};

/// Prime powers in `lo..=hi`.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi)
        .filter(|&q| {
            let p = (2..=q).find(|d| q % d == 0).unwrap();
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            r == 1 && is_prime(p)
        })
        .collect()
}

pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    prime_powers(lo, hi).into_iter().filter(|q| q % 2 == 1).collect()
}

pub fn even_orders(hi: u64) -> Vec<u64> {
    prime_powers(2, hi).into_iter().filter(|q| q % 2 == 0).collect()
}

/// Intersection size of every line, by direct dot products.
pub fn brute_hits(plane: &Plane, set: &PointSet) -> Vec<usize> {
    (0..plane.num_lines() as u32)
        .map(|l| set.iter().filter(|&p| plane.incident(p, l)).count())
        .collect()
}

/// Zero set of a quadratic given by a closure on coordinates.
pub fn zero_set(plane: &Plane, form: impl Fn([Elem; 3]) -> Elem) -> PointSet {
    let pts = (0..plane.num_points() as u32).filter(|&i| form(plane.coords(i)).is_zero());
    plane.point_set(pts).unwrap()
}

/// `xy + k z²`.
pub fn p3_zero_set(plane: &Plane, k: Elem) -> PointSet {
    let f = plane.field().clone();
    zero_set(plane, move |[x, y, z]| f.add(f.mul(x, y), f.mul(k, f.mul(z, z))))
}

/// Tangent lines of a point set that is an oval: lines meeting it once.
pub fn brute_tangents(plane: &Plane, oval: &PointSet) -> Vec<u32> {
    brute_hits(plane, oval)
        .iter()
        .enumerate()
        .filter(|(_, &h)| h == 1)
        .map(|(l, _)| l as u32)
        .collect()
}

/// Whether every point of `b` off `a` lies on exactly two tangents of `a`,
/// and vice versa.
pub fn brute_mutually_exterior(plane: &Plane, a: &PointSet, b: &PointSet) -> bool {
    let exterior_to = |oval: &PointSet, other: &PointSet| {
        let tangents = brute_tangents(plane, oval);
        other
            .iter()
            .filter(|&p| !oval.contains(p))
            .all(|p| tangents.iter().filter(|&&l| plane.incident(p, l)).count() == 2)
    };
    exterior_to(a, b) && exterior_to(b, a)
}

/// Squares of GF(q) by squaring every element.
pub fn square_table(f: &Field) -> Vec<bool> {
    let mut t = vec![false; f.q() as usize];
    for e in f.elements() {
        t[f.mul(e, e).enc() as usize] = true;
    }
    t
}

/// Whether any `size`-subset of the plane is untouchable, by enumerating
/// every subset as a bitmask. No symmetry is assumed. Needs at most 64 points.
pub fn brute_untouchable_exists(plane: &Plane, size: usize) -> bool {
    let n = plane.num_points();
    assert!(n <= 64);
    if size == 0 {
        return true;
    }
    if size > n {
        return false;
    }
    let lines: Vec<u64> = (0..n as u32)
        .map(|l| (0..n as u32).filter(|&p| plane.incident(p, l)).fold(0u64, |m, p| m | 1 << p))
        .collect();
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut s: u64 = (1u64 << size) - 1;
    loop {
        if lines.iter().all(|&l| (s & l).count_ones() != 1) {
            return true;
        }
        // next subset of the same size
        let c = s & s.wrapping_neg();
        let r = s + c;
        if r > limit || r == 0 {
            return false;
        }
        s = (((r ^ s) >> 2) / c) | r;
        if s > limit {
            return false;
        }
    }
}
