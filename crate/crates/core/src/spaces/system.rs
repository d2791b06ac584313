use std::fmt;
use std::sync::{Arc, OnceLock};

use super::metric::MetricSpace;
use super::spec::SystemSpec;
use crate::error::{Error, Result};
use crate::PointSet;

/// Adjacency lists in compressed-row form.
#[derive(Clone, Debug, Default)]
pub(crate) struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    pub(crate) fn from_rows<I, R>(rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = usize>,
    {
        let mut offsets = vec![0u32];
        let mut targets = Vec::new();
        for row in rows {
            targets.extend(row.into_iter().map(|t| t as u32));
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    pub(crate) fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub(crate) fn transpose(&self) -> Csr {
        let n = self.rows();
        let mut rows = vec![Vec::new(); n];
        for i in 0..n {
            for &j in self.row(i) {
                rows[j as usize].push(i);
            }
        }
        Csr::from_rows(rows)
    }
}

pub(crate) enum Dynamics {
    /// A total function, stored as an image table.
    Map { table: Vec<u32>, preds: OnceLock<Csr> },
    /// A total relation (every point has at least one successor). Used for
    /// truncated shifts, where a word's future is only known up to the
    /// next symbol, and for their lifts.
    Relation { succ: Csr, pred: Csr },
    /// Product with at least one relational factor, explored lazily.
    Product { factors: Vec<SystemMap> },
}

/// A dynamical system on a finite metric space: either a point map or,
/// for truncated symbolic systems, a total relation.
#[derive(Clone)]
pub struct SystemMap {
    inner: Arc<SysInner>,
}

struct SysInner {
    space: MetricSpace,
    dynamics: Dynamics,
    surjective: bool,
    spec: SystemSpec,
}

impl fmt::Debug for SystemMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemMap")
            .field("space", &self.inner.space)
            .field("map", &self.is_map())
            .field("surjective", &self.inner.surjective)
            .finish()
    }
}

impl SystemMap {
    /// A point map on a table space, given by its image table.
    pub fn from_table(space: MetricSpace, table: Vec<usize>) -> Result<Self> {
        if !space.is_table() {
            return Err(Error::invalid("from_table needs a table space"));
        }
        let n = space.len();
        let spec = SystemSpec::Finite {
            points: (0..n).map(|i| space.label(i)).collect(),
            dist: (0..n)
                .map(|i| (0..n).map(|j| space.dist(i, j).into()).collect())
                .collect(),
            map: table
                .iter()
                .map(|&y| if y < n { space.label(y) } else { y.to_string() })
                .collect(),
        };
        Self::with_spec(space, table, spec)
    }

    pub(crate) fn with_spec(space: MetricSpace, table: Vec<usize>, spec: SystemSpec) -> Result<Self> {
        let n = space.len();
        if table.len() != n {
            return Err(Error::invalid(format!(
                "map table has {} entries for {n} points",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= n) {
            return Err(Error::invalid(format!("map image {bad} is not a point")));
        }
        let mut hit = PointSet::with_capacity(n);
        hit.extend(table.iter().copied());
        let surjective = hit.count_ones(..) == n;
        Ok(Self::assemble(
            space,
            Dynamics::Map {
                table: table.into_iter().map(|y| y as u32).collect(),
                preds: OnceLock::new(),
            },
            surjective,
            spec,
        ))
    }

    pub(crate) fn from_relation(space: MetricSpace, succ: Csr, spec: SystemSpec) -> Result<Self> {
        let n = space.len();
        if succ.rows() != n {
            return Err(Error::invalid("relation size does not match the space"));
        }
        if let Some(x) = (0..n).find(|&x| succ.row(x).is_empty()) {
            return Err(Error::invalid(format!("point {} has no successor", space.label(x))));
        }
        let pred = succ.transpose();
        let surjective = (0..n).all(|x| !pred.row(x).is_empty());
        Ok(Self::assemble(
            space,
            Dynamics::Relation { succ, pred },
            surjective,
            spec,
        ))
    }

    pub(crate) fn lazy_product(space: MetricSpace, factors: Vec<SystemMap>, spec: SystemSpec) -> Self {
        let surjective = factors.iter().all(|f| f.is_surjective());
        Self::assemble(space, Dynamics::Product { factors }, surjective, spec)
    }

    fn assemble(space: MetricSpace, dynamics: Dynamics, surjective: bool, spec: SystemSpec) -> Self {
        SystemMap {
            inner: Arc::new(SysInner {
                space,
                dynamics,
                surjective,
                spec,
            }),
        }
    }

    pub fn space(&self) -> &MetricSpace {
        &self.inner.space
    }

    pub fn len(&self) -> usize {
        self.inner.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.inner.spec
    }

    pub fn is_surjective(&self) -> bool {
        self.inner.surjective
    }

    pub(crate) fn dynamics(&self) -> &Dynamics {
        &self.inner.dynamics
    }

    /// True for point maps (every point has exactly one image).
    pub fn is_map(&self) -> bool {
        matches!(self.inner.dynamics, Dynamics::Map { .. })
    }

    pub fn same(&self, other: &SystemMap) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Image table of a point map.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.inner.dynamics {
            Dynamics::Map { table, .. } => Some(table),
            _ => None,
        }
    }

    /// Image table, or a backend error naming `op` for relational systems.
    pub fn require_map(&self, op: &str) -> Result<&[u32]> {
        self.table().ok_or_else(|| {
            Error::Backend(format!(
                "{op} needs a point map; symbolic systems only support set-level queries"
            ))
        })
    }

    /// The image of `x` under a point map.
    ///
    /// Panics on relational systems.
    pub fn apply(&self, x: usize) -> usize {
        self.table().expect("apply on a relational system")[x] as usize
    }

    pub fn for_each_successor(&self, x: usize, f: &mut dyn FnMut(usize)) {
        match &self.inner.dynamics {
            Dynamics::Map { table, .. } => f(table[x] as usize),
            Dynamics::Relation { succ, .. } => succ.row(x).iter().for_each(|&y| f(y as usize)),
            Dynamics::Product { factors } => {
                let coords = self.inner.space.coordinates(x);
                let lists: Vec<Vec<usize>> = factors.iter().zip(&coords).map(|(s, &c)| s.successors(c)).collect();
                self.for_each_combination(&lists, f);
            }
        }
    }

    pub fn for_each_predecessor(&self, x: usize, f: &mut dyn FnMut(usize)) {
        match &self.inner.dynamics {
            Dynamics::Map { table, preds } => preds
                .get_or_init(|| {
                    Csr::from_rows((0..table.len()).map(|i| std::iter::once(table[i] as usize))).transpose()
                })
                .row(x)
                .iter()
                .for_each(|&y| f(y as usize)),
            Dynamics::Relation { pred, .. } => pred.row(x).iter().for_each(|&y| f(y as usize)),
            Dynamics::Product { factors } => {
                let coords = self.inner.space.coordinates(x);
                let lists: Vec<Vec<usize>> = factors.iter().zip(&coords).map(|(s, &c)| s.predecessors(c)).collect();
                self.for_each_combination(&lists, f);
            }
        }
    }

    fn for_each_combination(&self, lists: &[Vec<usize>], f: &mut dyn FnMut(usize)) {
        if lists.iter().any(|l| l.is_empty()) {
            return;
        }
        let mut idx = vec![0usize; lists.len()];
        let mut coords: Vec<usize> = lists.iter().map(|l| l[0]).collect();
        loop {
            f(self.inner.space.encode(&coords));
            let mut k = 0;
            loop {
                if k == lists.len() {
                    return;
                }
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    coords[k] = lists[k][idx[k]];
                    break;
                }
                idx[k] = 0;
                coords[k] = lists[k][0];
                k += 1;
            }
        }
    }

    pub fn successors(&self, x: usize) -> Vec<usize> {
        let mut v = Vec::new();
        self.for_each_successor(x, &mut |y| v.push(y));
        v
    }

    pub fn predecessors(&self, x: usize) -> Vec<usize> {
        let mut v = Vec::new();
        self.for_each_predecessor(x, &mut |y| v.push(y));
        v
    }

    /// `T(S)`, the set of all successors of members of `set`.
    pub fn image_set(&self, set: &PointSet) -> PointSet {
        let mut out = PointSet::with_capacity(self.len());
        for x in set.ones() {
            self.for_each_successor(x, &mut |y| out.insert(y));
        }
        out
    }

    /// `T^{-1}(S)`.
    pub fn preimage_set(&self, set: &PointSet) -> PointSet {
        let mut out = PointSet::with_capacity(self.len());
        for x in set.ones() {
            self.for_each_predecessor(x, &mut |y| out.insert(y));
        }
        out
    }

    /// `T^n(x)` for a point map.
    pub fn apply_n(&self, mut x: usize, n: usize) -> usize {
        let t = self.table().expect("apply_n on a relational system");
        for _ in 0..n {
            x = t[x] as usize;
        }
        x
    }

    /// Whether the space carries a product structure with `k` factors.
    pub fn product_arity(&self) -> usize {
        self.inner.space.factors().map_or(1, |f| f.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::generators::{make_multiply, make_rotation};

    #[test]
    fn rejects_partial_tables() {
        let s = MetricSpace::discrete(3).unwrap();
        assert!(SystemMap::from_table(s.clone(), vec![0, 1]).is_err());
        assert!(SystemMap::from_table(s, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn predecessors_of_doubling() {
        let t = make_multiply(8, 2).unwrap();
        assert_eq!(t.predecessors(2), vec![1, 5]);
        assert!(t.predecessors(3).is_empty());
        assert!(!t.is_surjective());
    }

    #[test]
    fn image_sets() {
        let r = make_rotation(4, 1).unwrap();
        let mut s = PointSet::with_capacity(4);
        s.extend([0, 1]);
        assert_eq!(r.image_set(&s).ones().collect::<Vec<_>>(), vec![1, 2]);
    }
}
