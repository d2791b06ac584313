use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, CompactSet};
use crate::rational::{self, Rational, RationalString};
use crate::spaces::MetricSpace;
use crate::PointSet;

/// The level grid `{1/m, 2/m, ..., 1}`; grades live in `{0} ∪ levels`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelGrid {
    m: u8,
}

impl LevelGrid {
    /// Largest supported grid size.
    pub const MAX_M: u8 = 64;

    pub fn new(m: u8) -> Result<Self> {
        if m == 0 || m > Self::MAX_M {
            return Err(Error::invalid(format!("grid size must be in 1..={}", Self::MAX_M)));
        }
        Ok(LevelGrid { m })
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    /// `j / m`.
    pub fn level(&self, j: u8) -> Rational {
        Rational::new(j as i64, self.m as i64)
    }

    /// The positive levels, increasing.
    pub fn levels(&self) -> Vec<Rational> {
        (1..=self.m).map(|j| self.level(j)).collect()
    }

    /// Index `j` with `j / m = q`, if `q` is a grid value (including 0).
    pub fn index_of(&self, q: Rational) -> Option<u8> {
        let s = q * Rational::from_integer(self.m as i64);
        (s.is_integer() && s >= Rational::zero() && *s.numer() <= self.m as i64).then(|| *s.numer() as u8)
    }

    pub(crate) fn require_index(&self, q: Rational) -> Result<u8> {
        self.index_of(q)
            .ok_or_else(|| Error::invalid(format!("{} is not on the grid of size {}", rational::label(&q), self.m)))
    }

    /// Least grid index `j` with `j / m >= q`, for `q` in `(0, 1]`.
    pub(crate) fn ceil_index(&self, q: Rational) -> u8 {
        (q * Rational::from_integer(self.m as i64)).ceil().to_integer() as u8
    }
}

/// A fuzzy set on a finite space with grades on a [`LevelGrid`].
#[derive(Clone, Debug)]
pub struct FuzzySet {
    base: MetricSpace,
    grid: LevelGrid,
    grades: Vec<u8>,
}

impl PartialEq for FuzzySet {
    fn eq(&self, other: &Self) -> bool {
        self.base.same(&other.base) && self.grid == other.grid && self.grades == other.grades
    }
}

impl FuzzySet {
    /// From grid indices `0..=m`, one per base point.
    pub fn from_indices(base: &MetricSpace, grid: LevelGrid, grades: Vec<u8>) -> Result<Self> {
        if grades.len() != base.len() {
            return Err(Error::invalid(format!(
                "{} grades for {} points",
                grades.len(),
                base.len()
            )));
        }
        if grades.iter().any(|&g| g > grid.m) {
            return Err(Error::invalid("grade index above the grid"));
        }
        Ok(FuzzySet {
            base: base.clone(),
            grid,
            grades,
        })
    }

    /// From rational grades, each of which must lie on the grid.
    pub fn from_grades(base: &MetricSpace, grid: LevelGrid, grades: &[Rational]) -> Result<Self> {
        let idx = grades
            .iter()
            .map(|&q| grid.require_index(q))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(base, grid, idx)
    }

    /// The empty fuzzy set `∅_X ≡ 0`.
    pub fn empty(base: &MetricSpace, grid: LevelGrid) -> Self {
        FuzzySet {
            base: base.clone(),
            grid,
            grades: vec![0; base.len()],
        }
    }

    pub fn base(&self) -> &MetricSpace {
        &self.base
    }

    pub fn grid(&self) -> LevelGrid {
        self.grid
    }

    pub fn grade_indices(&self) -> &[u8] {
        &self.grades
    }

    pub fn grade(&self, x: usize) -> Rational {
        self.grid.level(self.grades[x])
    }

    pub fn height_index(&self) -> u8 {
        self.grades.iter().copied().max().unwrap_or(0)
    }

    pub fn height(&self) -> Rational {
        self.grid.level(self.height_index())
    }

    /// True for `∅_X`; the complement of membership in `F_0(X)`.
    pub fn is_empty(&self) -> bool {
        self.height_index() == 0
    }

    /// The cut at grid level `j / m`, as a point set.
    pub fn cut_set(&self, j: u8) -> PointSet {
        let mut s = PointSet::with_capacity(self.base.len());
        s.extend((0..self.grades.len()).filter(|&x| self.grades[x] >= j));
        s
    }

    /// Display form, also the point id of this set in a fuzzy lift.
    pub fn label(&self) -> String {
        crate::spaces::fuzzy_label(&self.base, self.grid.m, &self.grades)
    }

    pub(crate) fn cut_masks(&self) -> Vec<u64> {
        (1..=self.grid.m)
            .map(|j| crate::spaces::cut_mask(&self.grades, j))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let grades: BTreeMap<String, RationalString> = (0..self.base.len())
            .map(|x| (self.base.label(x), self.grade(x).into()))
            .collect();
        serde_json::to_value(FuzzySetJson {
            grid_m: self.grid.m,
            grades,
        })
        .expect("serializable")
    }

    /// Points not listed get grade 0.
    pub fn from_json(base: &MetricSpace, value: &serde_json::Value) -> Result<Self> {
        let raw: FuzzySetJson = serde_json::from_value(value.clone())?;
        let grid = LevelGrid::new(raw.grid_m)?;
        let mut grades = vec![0u8; base.len()];
        for (id, q) in raw.grades {
            let x = base
                .index_of(&id)
                .ok_or_else(|| Error::invalid(format!("unknown point `{id}`")))?;
            grades[x] = grid.require_index(q.0)?;
        }
        Self::from_indices(base, grid, grades)
    }
}

#[derive(Serialize, Deserialize)]
struct FuzzySetJson {
    grid_m: u8,
    grades: BTreeMap<String, RationalString>,
}

/// `[A]_α = {x : A(x) >= α}` for `α` in `(0, 1]`; may be empty.
pub fn alpha_cut(a: &FuzzySet, alpha: Rational) -> Result<CompactSet> {
    if alpha <= Rational::zero() || alpha > Rational::from_integer(1) {
        return Err(Error::invalid(format!(
            "cut level {} is outside (0,1]",
            rational::label(&alpha)
        )));
    }
    CompactSet::new(&a.base, a.cut_set(a.grid.ceil_index(alpha)))
}

/// `{x : A(x) > 0}`.
pub fn support(a: &FuzzySet) -> CompactSet {
    CompactSet::new(&a.base, a.cut_set(1)).expect("same base")
}

/// `d_∞(A, B) = max_α d_H([A]_α, [B]_α)` over the grid levels, using
/// `d_H(∅, C) = diam(X)`.
pub fn levelwise_distance(a: &FuzzySet, b: &FuzzySet) -> Result<Rational> {
    if !a.base.same(&b.base) {
        return Err(Error::SpaceMismatch);
    }
    if a.grid != b.grid {
        return Err(Error::invalid("fuzzy sets on different grids"));
    }
    if let Some(k) = a.base.kernel() {
        return Ok(k.levelwise(&a.cut_masks(), &b.cut_masks()));
    }
    let mut best = Rational::zero();
    for j in 1..=a.grid.m {
        let ca = CompactSet::new(&a.base, a.cut_set(j))?;
        let cb = CompactSet::new(&b.base, b.cut_set(j))?;
        best = best.max(hausdorff_distance(&ca, &cb)?);
    }
    Ok(best)
}

/// `λ·χ_C`: grade `λ` on `C` and 0 elsewhere.
pub fn embed_indicator(grid: LevelGrid, lambda: Rational, c: &CompactSet) -> Result<FuzzySet> {
    let j = grid.require_index(lambda)?;
    if j == 0 {
        return Err(Error::invalid("indicator level must be positive"));
    }
    if c.is_empty() {
        return Err(Error::invalid("indicator of the empty set"));
    }
    let grades = (0..c.base().len()).map(|x| if c.contains(x) { j } else { 0 }).collect();
    FuzzySet::from_indices(c.base(), grid, grades)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn grid(m: u8) -> LevelGrid {
        LevelGrid::new(m).unwrap()
    }

    #[test]
    fn cuts_of_three_point_example() {
        let x = MetricSpace::discrete(3).unwrap();
        let a = FuzzySet::from_grades(&x, grid(4), &[rat(0, 1), rat(1, 2), rat(1, 1)]).unwrap();
        assert_eq!(alpha_cut(&a, rat(1, 2)).unwrap().indices(), vec![1, 2]);
        assert_eq!(alpha_cut(&a, rat(3, 4)).unwrap().indices(), vec![2]);
        assert_eq!(alpha_cut(&a, rat(1, 3)).unwrap().indices(), vec![1, 2]);
        assert!(alpha_cut(&a, rat(0, 1)).is_err());
        assert!(alpha_cut(&a, rat(5, 4)).is_err());
        assert_eq!(support(&a).indices(), vec![1, 2]);
        assert_eq!(a.height(), rat(1, 1));
    }

    #[test]
    fn indicator_distances() {
        let x = MetricSpace::circle(6).unwrap();
        let g = grid(2);
        let c = CompactSet::from_indices(&x, &[0, 1]).unwrap();
        let d = CompactSet::from_indices(&x, &[3]).unwrap();
        let half_c = embed_indicator(g, rat(1, 2), &c).unwrap();
        let half_d = embed_indicator(g, rat(1, 2), &d).unwrap();
        let one_c = embed_indicator(g, rat(1, 1), &c).unwrap();
        assert_eq!(
            levelwise_distance(&half_c, &half_d).unwrap(),
            hausdorff_distance(&c, &d).unwrap()
        );
        assert_eq!(levelwise_distance(&one_c, &half_c).unwrap(), x.diam());
        assert_eq!(levelwise_distance(&one_c, &one_c).unwrap(), rat(0, 1));
        assert!(embed_indicator(g, rat(0, 1), &c).is_err());
        assert!(embed_indicator(g, rat(1, 2), &CompactSet::empty(&x)).is_err());
        assert!(support(&FuzzySet::empty(&x, g)).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let x = MetricSpace::discrete(3).unwrap();
        let a = FuzzySet::from_grades(&x, grid(2), &[rat(1, 2), rat(0, 1), rat(1, 1)]).unwrap();
        let v = a.to_json();
        assert_eq!(v["grades"]["0"], "1/2");
        assert_eq!(FuzzySet::from_json(&x, &v).unwrap(), a);
    }

    #[test]
    fn grid_indices() {
        let g = grid(4);
        assert_eq!(g.index_of(rat(1, 2)), Some(2));
        assert_eq!(g.index_of(rat(1, 3)), None);
        assert_eq!(g.ceil_index(rat(1, 3)), 2);
        assert!(LevelGrid::new(0).is_err());
    }
}
