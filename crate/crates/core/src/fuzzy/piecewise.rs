use num_traits::Zero;

use super::set::{FuzzySet, LevelGrid};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, CompactSet};
use crate::rational::Rational;

/// A fuzzy set as a strictly decreasing chain of cuts: `[A]_α = cuts[i]`
/// for `α` in `(thresholds[i-1], thresholds[i]]` (with `thresholds[-1] = 0`),
/// and `∅` above the last threshold, which is the height.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseRepresentation {
    pub cuts: Vec<CompactSet>,
    pub thresholds: Vec<Rational>,
}

impl PiecewiseRepresentation {
    pub fn from_fuzzy(a: &FuzzySet) -> Self {
        let mut levels: Vec<u8> = a.grade_indices().iter().copied().filter(|&j| j > 0).collect();
        levels.sort_unstable();
        levels.dedup();
        let grid = a.grid();
        let cuts = levels
            .iter()
            .map(|&j| CompactSet::new(a.base(), a.cut_set(j)).expect("same base"))
            .collect();
        PiecewiseRepresentation {
            cuts,
            thresholds: levels.iter().map(|&j| grid.level(j)).collect(),
        }
    }

    /// The cut at `α`, which may be empty; `α` must be in `(0, 1]`.
    pub fn cut_at(&self, alpha: Rational) -> Option<&CompactSet> {
        let i = self.thresholds.partition_point(|t| *t < alpha);
        self.cuts.get(i)
    }

    /// Rebuilds the grade function: `A(x)` is the largest threshold whose
    /// cut contains `x`.
    pub fn reconstruct(&self, grid: LevelGrid) -> Result<FuzzySet> {
        let base = self
            .cuts
            .first()
            .map(|c| c.base().clone())
            .ok_or_else(|| Error::invalid("empty chain; reconstruct ∅_X with FuzzySet::empty"))?;
        let mut grades = vec![0u8; base.len()];
        for (c, t) in self.cuts.iter().zip(&self.thresholds) {
            let j = grid.require_index(*t)?;
            for x in c.indices() {
                grades[x] = grades[x].max(j);
            }
        }
        FuzzySet::from_indices(&base, grid, grades)
    }
}

/// Two cut chains on a common refinement of their thresholds.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedChains {
    /// Sorted union of both threshold lists.
    pub thresholds: Vec<Rational>,
    /// Both cuts on `(thresholds[i-1], thresholds[i]]`.
    pub pairs: Vec<(CompactSet, CompactSet)>,
}

impl MergedChains {
    pub fn pair_at(&self, alpha: Rational) -> Option<&(CompactSet, CompactSet)> {
        let i = self.thresholds.partition_point(|t| *t < alpha);
        self.pairs.get(i)
    }

    /// `d_∞` computed interval by interval. Above both heights the cuts are
    /// both empty, so only the listed intervals matter.
    pub fn distance(&self) -> Result<Rational> {
        let mut best = Rational::zero();
        for (a, b) in &self.pairs {
            best = best.max(hausdorff_distance(a, b)?);
        }
        Ok(best)
    }
}

/// Common refinement of two piecewise representations on the same base.
pub fn merge_chains(a: &PiecewiseRepresentation, b: &PiecewiseRepresentation) -> Result<MergedChains> {
    let base = match (a.cuts.first(), b.cuts.first()) {
        (Some(x), Some(y)) if !x.base().same(y.base()) => return Err(Error::SpaceMismatch),
        (Some(x), _) | (_, Some(x)) => x.base().clone(),
        (None, None) => {
            return Ok(MergedChains {
                thresholds: vec![],
                pairs: vec![],
            })
        }
    };
    let mut thresholds: Vec<Rational> = a.thresholds.iter().chain(&b.thresholds).copied().collect();
    thresholds.sort();
    thresholds.dedup();
    let empty = CompactSet::empty(&base);
    let pairs = thresholds
        .iter()
        .map(|&t| {
            (
                a.cut_at(t).cloned().unwrap_or_else(|| empty.clone()),
                b.cut_at(t).cloned().unwrap_or_else(|| empty.clone()),
            )
        })
        .collect();
    Ok(MergedChains { thresholds, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::levelwise_distance;
    use crate::rational::rat;
    use crate::spaces::MetricSpace;

    #[test]
    fn round_trip_and_lookup() {
        let x = MetricSpace::circle(4).unwrap();
        let grid = LevelGrid::new(6).unwrap();
        let a = FuzzySet::from_indices(&x, grid, vec![2, 0, 3, 6]).unwrap();
        let p = PiecewiseRepresentation::from_fuzzy(&a);
        assert_eq!(p.thresholds, vec![rat(1, 3), rat(1, 2), rat(1, 1)]);
        assert_eq!(p.cut_at(rat(1, 6)).unwrap().indices(), vec![0, 2, 3]);
        assert_eq!(p.cut_at(rat(1, 3)).unwrap().indices(), vec![0, 2, 3]);
        assert_eq!(p.cut_at(rat(2, 3)).unwrap().indices(), vec![3]);
        assert_eq!(p.reconstruct(grid).unwrap(), a);
    }

    #[test]
    fn merge_is_sorted_union() {
        let x = MetricSpace::circle(4).unwrap();
        let grid = LevelGrid::new(6).unwrap();
        let a = FuzzySet::from_indices(&x, grid, vec![3, 6, 0, 0]).unwrap();
        let b = FuzzySet::from_indices(&x, grid, vec![0, 2, 6, 0]).unwrap();
        let (pa, pb) = (
            PiecewiseRepresentation::from_fuzzy(&a),
            PiecewiseRepresentation::from_fuzzy(&b),
        );
        let m = merge_chains(&pa, &pb).unwrap();
        assert_eq!(m.thresholds, vec![rat(1, 3), rat(1, 2), rat(1, 1)]);
        assert_eq!(m.distance().unwrap(), levelwise_distance(&a, &b).unwrap());
        let same = merge_chains(&pa, &pa).unwrap();
        assert_eq!(same.thresholds, pa.thresholds);
        assert!(same.pairs.iter().all(|(l, r)| l == r));
    }
}
