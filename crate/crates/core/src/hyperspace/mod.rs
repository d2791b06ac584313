//! The hyperspace `K(X)` of nonempty compact subsets under the Hausdorff
//! metric, the induced map `T_K`, and Vietoris basic opens.

pub(crate) mod kernel;

use num_traits::Zero;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::spaces::{Csr, Kind, MetricSpace, SystemMap, SystemSpec};
use crate::PointSet;

/// A subset of a base space. The empty set is representable (it is needed
/// by the levelwise fuzzy metric) but is not a point of `K(X)`.
#[derive(Clone, Debug)]
pub struct CompactSet {
    base: MetricSpace,
    members: PointSet,
}

impl PartialEq for CompactSet {
    fn eq(&self, other: &Self) -> bool {
        self.base.same(&other.base) && self.members == other.members
    }
}

impl CompactSet {
    pub fn new(base: &MetricSpace, members: PointSet) -> Result<Self> {
        if members.len() > base.len() && members.ones().any(|x| x >= base.len()) {
            return Err(Error::invalid("set member outside the base space"));
        }
        let mut m = members;
        m.grow(base.len());
        Ok(CompactSet {
            base: base.clone(),
            members: m,
        })
    }

    pub fn from_indices(base: &MetricSpace, idx: &[usize]) -> Result<Self> {
        if let Some(&x) = idx.iter().find(|&&x| x >= base.len()) {
            return Err(Error::invalid(format!("point index {x} out of range")));
        }
        let mut m = PointSet::with_capacity(base.len());
        m.extend(idx.iter().copied());
        Self::new(base, m)
    }

    pub fn from_ids(base: &MetricSpace, ids: &[&str]) -> Result<Self> {
        let idx = ids
            .iter()
            .map(|id| {
                base.index_of(id)
                    .ok_or_else(|| Error::invalid(format!("unknown point `{id}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(base, &idx)
    }

    pub fn empty(base: &MetricSpace) -> Self {
        CompactSet {
            base: base.clone(),
            members: PointSet::with_capacity(base.len()),
        }
    }

    pub fn whole(base: &MetricSpace) -> Self {
        CompactSet {
            base: base.clone(),
            members: base.full_set(),
        }
    }

    pub(crate) fn from_mask(base: &MetricSpace, mask: u64) -> Self {
        let mut m = PointSet::with_capacity(base.len());
        m.extend((0..base.len()).filter(|&x| mask >> x & 1 == 1));
        CompactSet {
            base: base.clone(),
            members: m,
        }
    }

    pub fn base(&self) -> &MetricSpace {
        &self.base
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Whether this set is a point of `K(X)`, i.e. nonempty.
    pub fn in_hyperspace(&self) -> bool {
        !self.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    /// Sorted point ids, the serialized form.
    pub fn ids(&self) -> Vec<String> {
        self.base.labels_of(&self.members)
    }

    pub(crate) fn mask(&self) -> Option<u64> {
        (self.base.len() <= 64).then(|| self.members.ones().fold(0u64, |m, x| m | 1 << x))
    }

    pub fn is_subset(&self, other: &CompactSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Hausdorff distance with the conventions `d_H(∅, ∅) = 0` and
/// `d_H(∅, A) = diam(X)` for nonempty `A`.
pub fn hausdorff_distance(a: &CompactSet, b: &CompactSet) -> Result<Rational> {
    if !a.base.same(&b.base) {
        return Err(Error::SpaceMismatch);
    }
    let x = &a.base;
    if let (Some(k), Some(ma), Some(mb)) = (x.kernel(), a.mask(), b.mask()) {
        return Ok(k.distance(ma, mb));
    }
    Ok(match (a.is_empty(), b.is_empty()) {
        (true, true) => Rational::zero(),
        (true, false) | (false, true) => x.diam(),
        (false, false) => directed(x, &a.members, &b.members).max(directed(x, &b.members, &a.members)),
    })
}

fn directed(x: &MetricSpace, a: &PointSet, b: &PointSet) -> Rational {
    a.ones()
        .map(|p| b.ones().map(|q| x.dist(p, q)).min().unwrap())
        .max()
        .unwrap()
}

/// `T_K(A) = T(A)`. For relational systems this is the full successor set.
pub fn induced_apply(sys: &SystemMap, a: &CompactSet) -> Result<CompactSet> {
    if !sys.space().same(&a.base) {
        return Err(Error::SpaceMismatch);
    }
    if a.is_empty() {
        return Err(Error::invalid("T_K is defined on nonempty sets only"));
    }
    Ok(CompactSet {
        base: a.base.clone(),
        members: sys.image_set(&a.members),
    })
}

/// A Vietoris basic open `<U_1, ..., U_n>`.
#[derive(Clone, Debug)]
pub struct VietorisBasisElement {
    opens: Vec<PointSet>,
}

impl VietorisBasisElement {
    pub fn new(opens: Vec<PointSet>) -> Result<Self> {
        if opens.is_empty() {
            return Err(Error::invalid("a Vietoris open needs at least one open set"));
        }
        if opens.iter().any(|u| u.is_clear()) {
            return Err(Error::invalid("Vietoris opens must be nonempty"));
        }
        Ok(VietorisBasisElement { opens })
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }
}

/// `A ⊆ ∪ U_i` and `A ∩ U_i ≠ ∅` for every `i`.
pub fn in_vietoris(a: &CompactSet, v: &VietorisBasisElement) -> bool {
    let mut union = PointSet::with_capacity(a.base.len());
    for u in &v.opens {
        union.union_with(u);
    }
    a.members.is_subset(&union) && v.opens.iter().all(|u| !a.members.is_disjoint(u))
}

/// All nonempty subsets of `space`, each exactly once, in increasing mask
/// order.
pub fn enumerate_compacts(space: &MetricSpace, bounds: &Bounds) -> Result<impl Iterator<Item = CompactSet>> {
    bounds.check_base(space.len())?;
    let base = space.clone();
    let top = 1u64.checked_shl(space.len() as u32).map_or(u64::MAX, |t| t - 1);
    Ok((1..=top).map(move |m| CompactSet::from_mask(&base, m)))
}

/// The lifted system `(K(X), T_K)` on all nonempty subsets.
///
/// For a relational system the lift relates `S` to every `S'` with
/// `S' ⊆ R(S)` such that each member of `S` has a successor in `S'`; for
/// point maps this is exactly `T_K`.
pub fn lift_system(sys: &SystemMap, bounds: &Bounds) -> Result<SystemMap> {
    let base = sys.space();
    if !base.is_table() {
        return Err(Error::Backend("hyperspace lifts need a table base space".into()));
    }
    let n = base.len();
    bounds.check_base(n)?;
    let count = (1usize << n) - 1;
    let masks: Vec<u64> = (1..=count as u64).collect();
    let succ_mask: Vec<u64> = (0..n)
        .map(|x| sys.successors(x).into_iter().fold(0u64, |m, y| m | 1 << y))
        .collect();
    let image = |s: u64| {
        let mut out = 0u64;
        let mut r = s;
        while r != 0 {
            out |= succ_mask[r.trailing_zeros() as usize];
            r &= r - 1;
        }
        out
    };
    let space = MetricSpace::hyperspace(base.clone(), masks.clone());
    let spec = SystemSpec::HyperspaceLift {
        base: Box::new(sys.spec().clone()),
    };
    if sys.is_map() {
        let table = masks.iter().map(|&s| image(s) as usize - 1).collect();
        return SystemMap::with_spec(space, table, spec);
    }
    let work: u128 = masks.iter().map(|&s| 1u128 << image(s).count_ones()).sum();
    bounds.check_product(work)?;
    let rows = masks.iter().map(|&s| {
        let r = image(s);
        let members: Vec<u64> = (0..n).filter(|&x| s >> x & 1 == 1).map(|x| succ_mask[x]).collect();
        let mut out = Vec::new();
        let mut t = r;
        while t != 0 {
            if members.iter().all(|&m| m & t != 0) {
                out.push(t as usize - 1);
            }
            t = (t - 1) & r;
        }
        out.reverse();
        out
    });
    SystemMap::from_relation(space, Csr::from_rows(rows), spec)
}

/// The base subset standing for point `i` of a hyperspace lift.
pub fn compact_at(lifted: &MetricSpace, i: usize) -> Result<CompactSet> {
    match lifted.kind() {
        Kind::Hyperspace { base, sets } => Ok(CompactSet::from_mask(base, sets[i])),
        _ => Err(Error::invalid("not a hyperspace")),
    }
}

/// Index of `a` among the points of a hyperspace lift.
pub fn compact_index(lifted: &MetricSpace, a: &CompactSet) -> Option<usize> {
    match lifted.kind() {
        Kind::Hyperspace { base, .. } if base.same(&a.base) => match a.mask() {
            Some(m) if m != 0 => Some(m as usize - 1),
            _ => None,
        },
        _ => None,
    }
}

/// The base space of a hyperspace lift.
pub fn hyperspace_base(lifted: &MetricSpace) -> Option<&MetricSpace> {
    match lifted.kind() {
        Kind::Hyperspace { base, .. } => Some(base),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::spaces::{make_full_shift, make_multiply, make_rotation};

    #[test]
    fn circle_example() {
        let z8 = MetricSpace::circle(8).unwrap();
        let a = CompactSet::from_indices(&z8, &[0]).unwrap();
        let b = CompactSet::from_indices(&z8, &[0, 4]).unwrap();
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), rat(1, 2));
        let e = CompactSet::empty(&z8);
        assert_eq!(hausdorff_distance(&e, &b).unwrap(), rat(1, 2));
        assert_eq!(hausdorff_distance(&e, &e).unwrap(), rat(0, 1));
    }

    #[test]
    fn mismatched_bases() {
        let a = CompactSet::whole(&MetricSpace::circle(3).unwrap());
        let b = CompactSet::whole(&MetricSpace::circle(3).unwrap());
        assert!(matches!(hausdorff_distance(&a, &b), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn induced_images() {
        let r = make_rotation(4, 1).unwrap();
        let a = CompactSet::from_indices(r.space(), &[0, 1]).unwrap();
        assert_eq!(induced_apply(&r, &a).unwrap().indices(), vec![1, 2]);
        let t = make_multiply(8, 2).unwrap();
        let odd = CompactSet::from_indices(t.space(), &[1, 3, 5, 7]).unwrap();
        assert_eq!(induced_apply(&t, &odd).unwrap().indices(), vec![2, 6]);
        assert!(induced_apply(&t, &CompactSet::empty(t.space())).is_err());
    }

    #[test]
    fn vietoris_membership() {
        let z8 = MetricSpace::circle(8).unwrap();
        let open = |v: &[usize]| {
            let mut s = PointSet::with_capacity(8);
            s.extend(v.iter().copied());
            s
        };
        let v = VietorisBasisElement::new(vec![open(&[0, 1]), open(&[4, 5])]).unwrap();
        assert!(in_vietoris(&CompactSet::from_indices(&z8, &[0, 4]).unwrap(), &v));
        assert!(!in_vietoris(&CompactSet::from_indices(&z8, &[0]).unwrap(), &v));
        assert!(VietorisBasisElement::new(vec![]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        for (n, c) in [(1, 1), (3, 7), (5, 31)] {
            let s = MetricSpace::discrete(n).unwrap();
            assert_eq!(enumerate_compacts(&s, &Bounds::default()).unwrap().count(), c);
        }
        assert!(enumerate_compacts(&MetricSpace::discrete(17).unwrap(), &Bounds::default()).is_err());
    }

    #[test]
    fn lift_of_rotation_moves_singletons() {
        let r = make_rotation(3, 1).unwrap();
        let l = lift_system(&r, &Bounds::default()).unwrap();
        let s0 = compact_index(l.space(), &CompactSet::from_indices(r.space(), &[0]).unwrap()).unwrap();
        let orbit: Vec<String> = (0..4).map(|k| l.space().label(l.apply_n(s0, k))).collect();
        assert_eq!(orbit, vec!["{0}", "{1}", "{2}", "{0}"]);
        assert!(lift_system(&make_multiply(9, 2).unwrap(), &Bounds::default())
            .unwrap()
            .is_surjective());
    }

    #[test]
    fn bicover_lift_of_shift() {
        let s = make_full_shift(2, 2).unwrap();
        let l = lift_system(&s, &Bounds::default()).unwrap();
        let sp = s.space();
        let a = CompactSet::from_ids(sp, &["00"]).unwrap();
        let succ: Vec<String> = l
            .successors(compact_index(l.space(), &a).unwrap())
            .into_iter()
            .map(|i| l.space().label(i))
            .collect();
        assert_eq!(succ, vec!["{00}", "{01}", "{00,01}"]);
    }
}
