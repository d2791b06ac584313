//! Exact Hausdorff distances between subsets of a table space of at most
//! 64 points, on `u64` masks.

use std::sync::OnceLock;

use crate::rational::Rational;

/// Bases up to this size get a full table of ranks over all mask pairs.
const TABLE_MAX_POINTS: usize = 9;

/// Distances are replaced by their rank among the distinct distance
/// values, so comparisons inside the kernel are integer comparisons.
pub(crate) struct HausdorffKernel {
    n: usize,
    values: Vec<Rational>,
    rank: Vec<u16>,
    /// Row `x` lists all points by increasing distance from `x`.
    order: Vec<u8>,
    diam: u16,
    /// `pairs[a << n | b]`, built on first use.
    pairs: OnceLock<Vec<u16>>,
}

impl HausdorffKernel {
    pub(crate) fn new(n: usize, dist: &[Rational]) -> Self {
        debug_assert!(n <= 64 && dist.len() == n * n);
        let mut values: Vec<Rational> = dist.to_vec();
        values.push(Rational::from_integer(0));
        values.sort();
        values.dedup();
        let rank: Vec<u16> = dist.iter().map(|d| values.binary_search(d).unwrap() as u16).collect();
        let mut order = Vec::with_capacity(n * n);
        for x in 0..n {
            let mut row: Vec<u8> = (0..n as u8).collect();
            row.sort_by_key(|&y| rank[x * n + y as usize]);
            order.extend(row);
        }
        let diam = rank.iter().copied().max().unwrap_or(0);
        HausdorffKernel {
            n,
            values,
            rank,
            order,
            diam,
            pairs: OnceLock::new(),
        }
    }

    pub(crate) fn values(&self) -> &[Rational] {
        &self.values
    }

    pub(crate) fn pair_rank(&self, x: usize, y: usize) -> u16 {
        self.rank[x * self.n + y]
    }

    fn nearest(&self, x: usize, b: u64) -> u16 {
        let row = &self.order[x * self.n..(x + 1) * self.n];
        for &y in row {
            if b >> y & 1 == 1 {
                return self.rank[x * self.n + y as usize];
            }
        }
        unreachable!("nearest point in an empty set")
    }

    /// `sup_{x in a} inf_{y in b} d(x, y)` for nonempty `a`, `b`.
    fn directed(&self, mut a: u64, b: u64, floor: u16) -> u16 {
        let mut best = floor;
        a &= !b;
        while a != 0 && best < self.diam {
            let x = a.trailing_zeros() as usize;
            a &= a - 1;
            best = best.max(self.nearest(x, b));
        }
        best
    }

    /// Rank of `d_H(a, b)`, with `d_H(∅, ∅) = 0` and `d_H(∅, a) = diam`.
    pub(crate) fn rank_of(&self, a: u64, b: u64) -> u16 {
        if self.n <= TABLE_MAX_POINTS {
            let n = self.n;
            let t = self.pairs.get_or_init(|| {
                (0..1u64 << (2 * n))
                    .map(|ab| self.rank_direct(ab >> n, ab & ((1 << n) - 1)))
                    .collect()
            });
            return t[(a << n | b) as usize];
        }
        self.rank_direct(a, b)
    }

    fn rank_direct(&self, a: u64, b: u64) -> u16 {
        if a == b {
            return 0;
        }
        if a == 0 || b == 0 {
            return self.diam;
        }
        let ab = self.directed(a, b, 0);
        self.directed(b, a, ab)
    }

    pub(crate) fn distance(&self, a: u64, b: u64) -> Rational {
        self.values[self.rank_of(a, b) as usize]
    }

    /// `max_j d_H(a_j, b_j)` over aligned cut chains.
    pub(crate) fn levelwise_rank(&self, a: &[u64], b: &[u64]) -> u16 {
        let mut best = 0;
        for (&x, &y) in a.iter().zip(b) {
            best = best.max(self.rank_of(x, y));
            if best == self.diam {
                break;
            }
        }
        best
    }

    pub(crate) fn levelwise(&self, a: &[u64], b: &[u64]) -> Rational {
        self.values[self.levelwise_rank(a, b) as usize]
    }
}
