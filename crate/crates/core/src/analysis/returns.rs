use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{FamilyClassifier, IndexSet};
use crate::spaces::SystemMap;
use crate::PointSet;

/// An eventually periodic subset of `Z⁺`: membership of `n` is
/// `pattern[n]` below `preperiod + period` and repeats with `period` after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnTimes {
    pub preperiod: usize,
    pub period: usize,
    pub pattern: Vec<bool>,
}

impl ReturnTimes {
    pub fn contains(&self, n: usize) -> bool {
        if n < self.pattern.len() {
            self.pattern[n]
        } else {
            self.pattern[self.preperiod + (n - self.preperiod) % self.period]
        }
    }

    fn periodic_part(&self) -> &[bool] {
        &self.pattern[self.preperiod..]
    }

    pub fn is_empty(&self) -> bool {
        !self.pattern.contains(&true)
    }

    pub fn min(&self) -> Option<usize> {
        self.pattern.iter().position(|&b| b)
    }

    pub fn is_infinite(&self) -> bool {
        self.periodic_part().contains(&true)
    }

    pub fn is_cofinite(&self) -> bool {
        self.periodic_part().iter().all(|&b| b)
    }

    /// Least `t` with `[t, ∞)` inside the set.
    pub fn tail_start(&self) -> Option<usize> {
        if !self.is_cofinite() {
            return None;
        }
        Some(
            self.pattern[..self.preperiod]
                .iter()
                .rposition(|&b| !b)
                .map_or(0, |i| i + 1),
        )
    }

    /// Every IP set has a sub-IP set inside `qZ`, so an eventually periodic
    /// set contains one iff it contains all large multiples of its period.
    pub fn contains_ip(&self) -> bool {
        let q = self.period;
        let first = self.preperiod.max(1).div_ceil(q) * q;
        self.contains(first)
    }

    /// Exact membership in a built-in family; `None` for custom families.
    pub fn in_family(&self, family: &FamilyClassifier) -> Option<bool> {
        match family {
            FamilyClassifier::Infinite | FamilyClassifier::Syndetic { .. } => Some(self.is_infinite()),
            FamilyClassifier::Cofinite { .. } | FamilyClassifier::Thick { .. } => Some(self.is_cofinite()),
            FamilyClassifier::Ip { .. } => Some(self.contains_ip()),
            FamilyClassifier::Custom { .. } => None,
        }
    }

    pub fn intersection(&self, other: &ReturnTimes) -> ReturnTimes {
        let preperiod = self.preperiod.max(other.preperiod);
        let period = self.period.lcm(&other.period);
        let pattern = (0..preperiod + period)
            .map(|n| self.contains(n) && other.contains(n))
            .collect();
        ReturnTimes {
            preperiod,
            period,
            pattern,
        }
    }

    pub fn to_index_set(&self, horizon: usize) -> IndexSet {
        IndexSet::from_fn(horizon, |n| self.contains(n)).expect("horizon is valid")
    }
}

/// The eventually periodic sequence `T^n(U)` of image sets.
#[derive(Clone, Debug)]
pub struct SetOrbit {
    pub sets: Vec<PointSet>,
    pub preperiod: usize,
    pub period: usize,
}

impl SetOrbit {
    pub fn of(sys: &SystemMap, u: &PointSet) -> Result<Self> {
        check_open(sys, u)?;
        let mut seen: HashMap<PointSet, usize> = HashMap::new();
        let mut sets = Vec::new();
        let mut cur = u.clone();
        loop {
            if let Some(&i) = seen.get(&cur) {
                let period = sets.len() - i;
                return Ok(SetOrbit {
                    sets,
                    preperiod: i,
                    period,
                });
            }
            let next = sys.image_set(&cur);
            seen.insert(cur.clone(), sets.len());
            sets.push(cur);
            cur = next;
        }
    }

    /// `N(U, V)` for the `U` this orbit started from.
    pub fn returns_to(&self, v: &PointSet) -> ReturnTimes {
        ReturnTimes {
            preperiod: self.preperiod,
            period: self.period,
            pattern: self.sets.iter().map(|s| !s.is_disjoint(v)).collect(),
        }
    }
}

fn check_open(sys: &SystemMap, u: &PointSet) -> Result<()> {
    if u.is_clear() {
        return Err(Error::invalid("open sets must be nonempty"));
    }
    if u.ones().any(|x| x >= sys.len()) {
        return Err(Error::invalid("open set outside the space"));
    }
    Ok(())
}

/// `N(U, V)` in full.
pub fn return_times(sys: &SystemMap, u: &PointSet, v: &PointSet) -> Result<ReturnTimes> {
    check_open(sys, v)?;
    Ok(SetOrbit::of(sys, u)?.returns_to(v))
}

/// `N(U, V) ∩ [0, H)`.
pub fn return_time_set(sys: &SystemMap, u: &PointSet, v: &PointSet, horizon: usize) -> Result<IndexSet> {
    Ok(return_times(sys, u, v)?.to_index_set(horizon))
}

/// `N(x, V) ∩ [0, H)`; for relations this is `N({x}, V)`.
pub fn point_return_set(sys: &SystemMap, x: usize, v: &PointSet, horizon: usize) -> Result<IndexSet> {
    if x >= sys.len() {
        return Err(Error::invalid(format!("point {x} outside the space")));
    }
    let mut u = PointSet::with_capacity(sys.len());
    u.insert(x);
    return_time_set(sys, &u, v, horizon)
}
