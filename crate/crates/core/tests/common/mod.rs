//! Brute-force oracles and random generators shared by the integration
//! tests. None of these call into the library's distance code.

#![allow(dead_code)]

use fuzzdyn::spaces::{MetricSpace, SystemMap};
use fuzzdyn::{PointSet, Rational};
use rand::Rng;

/// Points of a subset given as a bit mask.
pub fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&x| mask >> x & 1 == 1).collect()
}

/// `d_H` by the sup-inf definition, with the empty-set convention.
pub fn hausdorff(space: &MetricSpace, a: &[usize], b: &[usize]) -> Rational {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Rational::from_integer(0),
        (true, false) | (false, true) => return diam(space),
        _ => {}
    }
    let directed = |a: &[usize], b: &[usize]| {
        a.iter()
            .map(|&x| b.iter().map(|&y| space.dist(x, y)).min().unwrap())
            .max()
            .unwrap()
    };
    directed(a, b).max(directed(b, a))
}

pub fn diam(space: &MetricSpace) -> Rational {
    let n = space.len();
    let mut best = Rational::from_integer(0);
    for x in 0..n {
        for y in 0..n {
            best = best.max(space.dist(x, y));
        }
    }
    best
}

/// Cut `{x : grade(x) >= j}` of a grade vector.
pub fn cut(grades: &[u8], j: u8) -> Vec<usize> {
    (0..grades.len()).filter(|&x| grades[x] >= j).collect()
}

/// Levelwise distance of two grade vectors on grid `m`.
pub fn levelwise(space: &MetricSpace, a: &[u8], b: &[u8], m: u8) -> Rational {
    (1..=m)
        .map(|j| hausdorff(space, &cut(a, j), &cut(b, j)))
        .max()
        .unwrap_or_else(|| Rational::from_integer(0))
}

/// Zadeh extension on grade vectors: `T(A)(y) = max_{T x = y} A(x)`.
pub fn zadeh(table: &[usize], a: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len()];
    for (x, &g) in a.iter().enumerate() {
        out[table[x]] = out[table[x]].max(g);
    }
    out
}

pub fn image(table: &[usize], s: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().map(|&x| table[x]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn table_of(sys: &SystemMap) -> Vec<usize> {
    sys.table().expect("point map").iter().map(|&x| x as usize).collect()
}

pub fn set_of(n: usize, pts: &[usize]) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    s.extend(pts.iter().copied());
    s
}

/// `n` random points in the plane with the L1 metric, so the result is a
/// genuine metric with repeated and distinct distances.
pub fn random_space(rng: &mut impl Rng, n: usize) -> MetricSpace {
    let pts: Vec<(i64, i64)> = loop {
        let p: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(0..4), rng.gen_range(0..4))).collect();
        let mut q = p.clone();
        q.sort_unstable();
        q.dedup();
        if q.len() == n {
            break p;
        }
    };
    let dist = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| Rational::new((a.0 - b.0).abs() + (a.1 - b.1).abs(), 4))
                .collect()
        })
        .collect();
    MetricSpace::from_table((0..n).map(|i| format!("p{i}")).collect(), dist).unwrap()
}

pub fn random_map(rng: &mut impl Rng, n: usize) -> SystemMap {
    let space = random_space(rng, n);
    let table = (0..n).map(|_| rng.gen_range(0..n)).collect();
    SystemMap::from_table(space, table).unwrap()
}
