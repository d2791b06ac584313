use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperspace::kernel::HausdorffKernel;
use crate::rational::{self, Rational};
use crate::PointSet;

/// A finite metric space with exact rational distances.
///
/// Cheap to clone; two handles denote the same space iff they share the
/// same allocation (see [`MetricSpace::same`]).
#[derive(Clone)]
pub struct MetricSpace {
    inner: Arc<Inner>,
}

struct Inner {
    kind: Kind,
    len: usize,
    diam: OnceLock<Rational>,
    kernel: OnceLock<Option<Arc<HausdorffKernel>>>,
    by_label: OnceLock<HashMap<String, usize>>,
}

pub(crate) enum Kind {
    Table {
        labels: Vec<String>,
        dist: Vec<Rational>,
        words: Option<WordInfo>,
    },
    /// Points are nonempty subsets of `base`, stored as bit masks.
    Hyperspace { base: MetricSpace, sets: Arc<Vec<u64>> },
    /// Points are grid-valued fuzzy sets on `base`.
    Fuzzy {
        base: MetricSpace,
        m: u8,
        /// `len * base.len()` grade indices in `0..=m`.
        grades: Arc<Vec<u8>>,
        /// `len * m` cut masks; entry `j - 1` is the cut at level `j/m`.
        cuts: Arc<Vec<u64>>,
    },
    /// Cartesian product with the max metric; the first factor varies fastest.
    Product { factors: Vec<MetricSpace> },
}

/// Word-space metadata for symbolic (truncated shift) spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordInfo {
    pub alphabet: Vec<String>,
    pub resolution: usize,
    /// Symbol indices of each point, in point order.
    pub words: Vec<Vec<u8>>,
}

/// A failed metric axiom, naming the offending points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    NonzeroDiagonal { p: String },
    NegativeDistance { p: String, q: String },
    ZeroOffDiagonal { p: String, q: String },
    Asymmetric { p: String, q: String },
    Triangle { p: String, q: String, r: String },
}

impl fmt::Debug for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.inner.kind {
            Kind::Table { words: Some(_), .. } => "words",
            Kind::Table { .. } => "table",
            Kind::Hyperspace { .. } => "hyperspace",
            Kind::Fuzzy { .. } => "fuzzy",
            Kind::Product { .. } => "product",
        };
        write!(f, "MetricSpace({kind}, {} points)", self.inner.len)
    }
}

impl MetricSpace {
    fn from_kind(kind: Kind, len: usize) -> Self {
        MetricSpace {
            inner: Arc::new(Inner {
                kind,
                len,
                diam: OnceLock::new(),
                kernel: OnceLock::new(),
                by_label: OnceLock::new(),
            }),
        }
    }

    /// Builds a table space. Only the shape is checked here; the metric
    /// axioms are reported by [`MetricSpace::validate`].
    pub fn from_table(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("a metric space needs at least one point"));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::invalid(format!("distance table must be {n}x{n}")));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate point id `{l}`")));
            }
        }
        let flat = dist.into_iter().flatten().collect();
        Ok(Self::from_kind(
            Kind::Table {
                labels,
                dist: flat,
                words: None,
            },
            n,
        ))
    }

    pub(crate) fn words(labels: Vec<String>, dist: Vec<Rational>, info: WordInfo) -> Self {
        let n = labels.len();
        Self::from_kind(
            Kind::Table {
                labels,
                dist,
                words: Some(info),
            },
            n,
        )
    }

    /// The integer circle `Z_n` with `d(i, j) = min(|i-j|, n-|i-j|) / n`.
    pub fn circle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("circle needs n >= 1"));
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let k = i.abs_diff(j);
                        Rational::new(k.min(n - k) as i64, n as i64)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(labels, dist)
    }

    /// The grid `{0, 1/m, ..., 1}` with the distance inherited from the line.
    pub fn unit_grid(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("grid needs m >= 1"));
        }
        let pts: Vec<Rational> = (0..=m).map(|i| Rational::new(i as i64, m as i64)).collect();
        let labels = pts.iter().map(rational::label).collect();
        let dist = pts
            .iter()
            .map(|x| pts.iter().map(|y| (x - y).abs()).collect())
            .collect();
        Self::from_table(labels, dist)
    }

    /// The discrete metric on `n` points.
    pub fn discrete(n: usize) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            Rational::from_integer(1)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_table(labels, dist)
    }

    pub(crate) fn hyperspace(base: MetricSpace, sets: Vec<u64>) -> Self {
        let n = sets.len();
        Self::from_kind(
            Kind::Hyperspace {
                base,
                sets: Arc::new(sets),
            },
            n,
        )
    }

    pub(crate) fn fuzzy(base: MetricSpace, m: u8, grades: Vec<u8>) -> Self {
        let nb = base.len();
        let len = grades.len().checked_div(nb).unwrap_or(0);
        let mut cuts = Vec::with_capacity(len * m as usize);
        for s in grades.chunks(nb) {
            for j in 1..=m {
                cuts.push(cut_mask(s, j));
            }
        }
        Self::from_kind(
            Kind::Fuzzy {
                base,
                m,
                grades: Arc::new(grades),
                cuts: Arc::new(cuts),
            },
            len,
        )
    }

    pub(crate) fn product(factors: Vec<MetricSpace>) -> Self {
        let len = factors.iter().map(|f| f.len()).product();
        Self::from_kind(Kind::Product { factors }, len)
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.inner.kind
    }

    pub fn len(&self) -> usize {
        self.inner.len
    }

    pub fn is_empty(&self) -> bool {
        self.inner.len == 0
    }

    /// At least two points.
    pub fn is_nontrivial(&self) -> bool {
        self.inner.len >= 2
    }

    pub fn same(&self, other: &MetricSpace) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Backed by an explicit distance table (finite or word space).
    pub fn is_table(&self) -> bool {
        matches!(self.inner.kind, Kind::Table { .. })
    }

    pub fn word_info(&self) -> Option<&WordInfo> {
        match &self.inner.kind {
            Kind::Table { words, .. } => words.as_ref(),
            _ => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.word_info().is_some()
    }

    pub fn factors(&self) -> Option<&[MetricSpace]> {
        match &self.inner.kind {
            Kind::Product { factors } => Some(factors),
            _ => None,
        }
    }

    /// Decodes a product index into factor coordinates.
    pub fn coordinates(&self, mut i: usize) -> Vec<usize> {
        match &self.inner.kind {
            Kind::Product { factors } => factors
                .iter()
                .map(|f| {
                    let c = i % f.len();
                    i /= f.len();
                    c
                })
                .collect(),
            _ => vec![i],
        }
    }

    /// Inverse of [`MetricSpace::coordinates`].
    pub fn encode(&self, coords: &[usize]) -> usize {
        match &self.inner.kind {
            Kind::Product { factors } => {
                let mut idx = 0;
                for (f, &c) in factors.iter().zip(coords).rev() {
                    idx = idx * f.len() + c;
                }
                idx
            }
            _ => coords[0],
        }
    }

    pub fn label(&self, i: usize) -> String {
        match &self.inner.kind {
            Kind::Table { labels, .. } => labels[i].clone(),
            Kind::Hyperspace { base, sets } => base.mask_label(sets[i]),
            Kind::Fuzzy { base, m, grades, .. } => {
                let nb = base.len();
                fuzzy_label(base, *m, &grades[i * nb..(i + 1) * nb])
            }
            Kind::Product { factors } => {
                let coords = self.coordinates(i);
                let parts: Vec<String> = factors.iter().zip(coords).map(|(f, c)| f.label(c)).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// `{a,b}` label of a subset given as a mask over this (table) space.
    pub(crate) fn mask_label(&self, mask: u64) -> String {
        let parts: Vec<String> = (0..self.len())
            .filter(|&x| mask >> x & 1 == 1)
            .map(|x| self.label(x))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn labels_of(&self, set: &PointSet) -> Vec<String> {
        set.ones().map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        let map = self
            .inner
            .by_label
            .get_or_init(|| (0..self.len()).map(|i| (self.label(i), i)).collect());
        map.get(label).copied()
    }

    pub fn dist(&self, i: usize, j: usize) -> Rational {
        match &self.inner.kind {
            Kind::Table { dist, .. } => dist[i * self.inner.len + j],
            Kind::Hyperspace { base, sets } => base
                .kernel()
                .expect("hyperspace base is a table")
                .distance(sets[i], sets[j]),
            Kind::Fuzzy { base, m, cuts, .. } => {
                let k = base.kernel().expect("fuzzy base is a table");
                let m = *m as usize;
                k.levelwise(&cuts[i * m..(i + 1) * m], &cuts[j * m..(j + 1) * m])
            }
            Kind::Product { factors } => {
                let (a, b) = (self.coordinates(i), self.coordinates(j));
                factors
                    .iter()
                    .zip(a.into_iter().zip(b))
                    .map(|(f, (x, y))| f.dist(x, y))
                    .max()
                    .unwrap_or_else(Rational::zero)
            }
        }
    }

    /// Index of `dist(i, j)` in [`Self::distance_values`], when distances
    /// come from a Hausdorff kernel.
    pub(crate) fn dist_rank(&self, i: usize, j: usize) -> Option<u16> {
        match &self.inner.kind {
            Kind::Table { .. } => self.kernel().map(|k| k.pair_rank(i, j)),
            Kind::Hyperspace { base, sets } => base.kernel().map(|k| k.rank_of(sets[i], sets[j])),
            Kind::Fuzzy { base, m, cuts, .. } => {
                let m = *m as usize;
                base.kernel()
                    .map(|k| k.levelwise_rank(&cuts[i * m..(i + 1) * m], &cuts[j * m..(j + 1) * m]))
            }
            Kind::Product { .. } => None,
        }
    }

    pub fn diam(&self) -> Rational {
        *self.inner.diam.get_or_init(|| match &self.inner.kind {
            Kind::Hyperspace { base, .. } | Kind::Fuzzy { base, .. } => base.diam(),
            Kind::Product { factors } => factors.iter().map(|f| f.diam()).max().unwrap_or_else(Rational::zero),
            _ => {
                let n = self.len();
                let mut best = Rational::zero();
                for i in 0..n {
                    for j in i + 1..n {
                        best = best.max(self.dist(i, j));
                    }
                }
                best
            }
        })
    }

    /// Diameter of a subset (0 for empty or singleton subsets).
    pub fn diam_of(&self, set: &PointSet) -> Rational {
        let pts: Vec<usize> = set.ones().collect();
        let mut best = Rational::zero();
        for (a, &i) in pts.iter().enumerate() {
            for &j in &pts[a + 1..] {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }

    /// Sorted distinct distance values, starting with 0.
    pub fn distance_values(&self) -> Vec<Rational> {
        if let Some(k) = self.kernel() {
            return k.values().to_vec();
        }
        // Lifted distances are base distances, and each one is attained
        // between singletons (or crisp singletons).
        match &self.inner.kind {
            Kind::Hyperspace { base, .. } | Kind::Fuzzy { base, .. } => return base.distance_values(),
            Kind::Product { factors } => {
                let mut v: Vec<Rational> = factors.iter().flat_map(|f| f.distance_values()).collect();
                v.sort();
                v.dedup();
                return v;
            }
            Kind::Table { .. } => {}
        }
        let n = self.len();
        let mut v = vec![Rational::zero()];
        for i in 0..n {
            for j in i + 1..n {
                v.push(self.dist(i, j));
            }
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn min_positive_distance(&self) -> Option<Rational> {
        self.distance_values().into_iter().find(|d| *d > Rational::zero())
    }

    /// Open ball `{y : d(center, y) < r}`.
    pub fn ball(&self, center: usize, r: Rational) -> PointSet {
        let mut s = PointSet::with_capacity(self.len());
        for y in 0..self.len() {
            if self.dist(center, y) < r {
                s.insert(y);
            }
        }
        s
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = PointSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    pub fn singleton(&self, x: usize) -> PointSet {
        let mut s = PointSet::with_capacity(self.len());
        s.insert(x);
        s
    }

    /// Exact Hausdorff kernel, available for table spaces of at most 64 points.
    pub(crate) fn kernel(&self) -> Option<&Arc<HausdorffKernel>> {
        self.inner
            .kernel
            .get_or_init(|| match &self.inner.kind {
                Kind::Table { dist, .. } if self.len() <= 64 => Some(Arc::new(HausdorffKernel::new(self.len(), dist))),
                _ => None,
            })
            .as_ref()
    }

    /// Reports every violated metric axiom. Never fails.
    pub fn validate(&self) -> Vec<MetricViolation> {
        let n = self.len();
        let l = |i: usize| self.label(i);
        let mut out = Vec::new();
        for p in 0..n {
            if !self.dist(p, p).is_zero() {
                out.push(MetricViolation::NonzeroDiagonal { p: l(p) });
            }
            for q in 0..n {
                if p == q {
                    continue;
                }
                let d = self.dist(p, q);
                if d < Rational::zero() {
                    out.push(MetricViolation::NegativeDistance { p: l(p), q: l(q) });
                }
                if p < q {
                    if d.is_zero() {
                        out.push(MetricViolation::ZeroOffDiagonal { p: l(p), q: l(q) });
                    }
                    if d != self.dist(q, p) {
                        out.push(MetricViolation::Asymmetric { p: l(p), q: l(q) });
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if self.dist(p, r) > self.dist(p, q) + self.dist(q, r) {
                        out.push(MetricViolation::Triangle {
                            p: l(p),
                            q: l(q),
                            r: l(r),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Free function form of [`MetricSpace::validate`].
pub fn validate_metric(space: &MetricSpace) -> Vec<MetricViolation> {
    space.validate()
}

/// `{a:1/2,c:1}`, listing the points of positive grade.
pub(crate) fn fuzzy_label(base: &MetricSpace, m: u8, grades: &[u8]) -> String {
    let parts: Vec<String> = grades
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0)
        .map(|(x, &g)| {
            format!(
                "{}:{}",
                base.label(x),
                rational::label(&Rational::new(g as i64, m as i64))
            )
        })
        .collect();
    format!("{{{}}}", parts.join(","))
}

pub(crate) fn cut_mask(grades: &[u8], level: u8) -> u64 {
    grades
        .iter()
        .enumerate()
        .filter(|(_, &g)| g >= level)
        .fold(0u64, |m, (x, _)| m | 1 << x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn triangle_violation_is_named() {
        let one = rat(1, 1);
        let three = rat(3, 1);
        let z = Rational::zero();
        let s = MetricSpace::from_table(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![z, one, three], vec![one, z, one], vec![three, one, z]],
        )
        .unwrap();
        let v = s.validate();
        // (a,b,c) and its mirror (c,b,a) both break the inequality.
        assert!(v.contains(&MetricViolation::Triangle {
            p: "a".into(),
            q: "b".into(),
            r: "c".into()
        }));
        assert!(v
            .iter()
            .all(|x| matches!(x, MetricViolation::Triangle { q, .. } if q == "b")));
    }

    #[test]
    fn discrete_and_circle_are_metrics() {
        assert!(MetricSpace::discrete(5).unwrap().validate().is_empty());
        assert!(MetricSpace::circle(8).unwrap().validate().is_empty());
        assert!(MetricSpace::unit_grid(8).unwrap().validate().is_empty());
    }

    #[test]
    fn circle_distances() {
        let c = MetricSpace::circle(8).unwrap();
        assert_eq!(c.dist(0, 4), rat(1, 2));
        assert_eq!(c.dist(1, 7), rat(1, 4));
        assert_eq!(c.diam(), rat(1, 2));
        assert_eq!(c.min_positive_distance(), Some(rat(1, 8)));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MetricSpace::from_table(vec![], vec![]).is_err());
        assert!(MetricSpace::from_table(vec!["a".into(), "a".into()], vec![vec![rat(0, 1); 2]; 2]).is_err());
        assert!(MetricSpace::circle(0).is_err());
    }
}
