//! Furstenberg families at a finite horizon.
//!
//! Subsets of `Z⁺` are represented by their trace on `[0, H)`. Tail notions
//! (infinite, cofinite, syndetic, thick, IP) become threshold tests on that
//! trace, and every verdict reports the horizon and thresholds it used.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::PointSet;

/// Largest IP depth accepted by [`contains_ip`].
pub const MAX_IP_DEPTH: usize = 5;

/// A subset of `{0, ..., H-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    horizon: usize,
    members: PointSet,
}

impl IndexSet {
    pub fn new(horizon: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be positive"));
        }
        let mut s = PointSet::with_capacity(horizon);
        for n in members {
            if n >= horizon {
                return Err(Error::invalid(format!("{n} is beyond the horizon {horizon}")));
            }
            s.insert(n);
        }
        Ok(IndexSet { horizon, members: s })
    }

    /// Members are clipped to the horizon.
    pub fn truncated(horizon: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(horizon, members.into_iter().filter(|&n| n < horizon))
    }

    pub fn from_fn(horizon: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        Self::new(horizon, (0..horizon).filter(|&n| f(n)))
    }

    pub fn empty(horizon: usize) -> Result<Self> {
        Self::new(horizon, [])
    }

    pub fn full(horizon: usize) -> Result<Self> {
        Self::new(horizon, 0..horizon)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn contains(&self, n: usize) -> bool {
        n < self.horizon && self.members.contains(n)
    }

    pub fn insert(&mut self, n: usize) {
        assert!(n < self.horizon, "{n} is beyond the horizon");
        self.members.insert(n);
    }

    pub fn members(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn min(&self) -> Option<usize> {
        self.members.ones().next()
    }

    pub fn max(&self) -> Option<usize> {
        self.members.ones().next_back()
    }

    /// `[0, H) \ S`.
    pub fn complement(&self) -> IndexSet {
        let mut s = self.members.clone();
        s.toggle_range(..);
        IndexSet {
            horizon: self.horizon,
            members: s,
        }
    }

    pub fn intersection(&self, other: &IndexSet) -> Result<IndexSet> {
        self.same_horizon(other)?;
        let mut s = self.members.clone();
        s.intersect_with(&other.members);
        Ok(IndexSet {
            horizon: self.horizon,
            members: s,
        })
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        self.same_horizon(other)?;
        let mut s = self.members.clone();
        s.union_with(&other.members);
        Ok(IndexSet {
            horizon: self.horizon,
            members: s,
        })
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.horizon == other.horizon && self.members.is_subset(&other.members)
    }

    pub fn meets(&self, other: &IndexSet) -> bool {
        !self.members.is_disjoint(&other.members)
    }

    fn same_horizon(&self, other: &IndexSet) -> Result<()> {
        if self.horizon != other.horizon {
            return Err(Error::invalid("index sets with different horizons"));
        }
        Ok(())
    }
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IndexSetJson {
            horizon: self.horizon,
            members: self.members(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = IndexSetJson::deserialize(d)?;
        IndexSet::new(raw.horizon, raw.members).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct IndexSetJson {
    horizon: usize,
    members: Vec<usize>,
}

/// `⌊H/4⌋`, at least 1: default gap bound for syndeticity and run length
/// for thickness. Using the same value for both makes the two notions
/// exactly dual at every horizon.
pub fn default_window(horizon: usize) -> usize {
    (horizon / 4).max(1)
}

/// Largest distance between consecutive members, counting virtual members
/// at `-1` and `H`. Every window of this many consecutive integers in
/// `[0, H)` meets `S`.
pub fn max_gap(s: &IndexSet) -> usize {
    let mut prev: isize = -1;
    let mut gap = 0;
    for n in s.iter().chain(std::iter::once(s.horizon)) {
        gap = gap.max((n as isize - prev) as usize);
        prev = n as isize;
    }
    gap
}

/// Length of the longest run of consecutive members.
pub fn longest_run(s: &IndexSet) -> usize {
    let (mut best, mut cur, mut last) = (0, 0, None);
    for n in s.iter() {
        cur = if last.is_some_and(|l| l + 1 == n) { cur + 1 } else { 1 };
        best = best.max(cur);
        last = Some(n);
    }
    best
}

/// Syndetic at the default threshold; reports the observed gap.
pub fn classify_syndetic(s: &IndexSet) -> (bool, usize) {
    classify_syndetic_with(s, default_window(s.horizon))
}

pub fn classify_syndetic_with(s: &IndexSet, gap_bound: usize) -> (bool, usize) {
    let g = max_gap(s);
    (g <= gap_bound, g)
}

/// Thick at the default threshold; reports the longest run.
pub fn classify_thick(s: &IndexSet) -> (bool, usize) {
    classify_thick_with(s, default_window(s.horizon))
}

pub fn classify_thick_with(s: &IndexSet, min_run: usize) -> (bool, usize) {
    let r = longest_run(s);
    (r >= min_run, r)
}

/// Least `t` with `[t, H) ⊆ S` (`H` if `H-1 ∉ S`).
pub fn tail_start(s: &IndexSet) -> usize {
    s.complement().max().map_or(0, |n| n + 1)
}

/// Cofinite at horizon: the tail starts by `⌊H/2⌋`.
pub fn classify_cofinite(s: &IndexSet) -> (bool, usize) {
    classify_cofinite_with(s, s.horizon / 2)
}

pub fn classify_cofinite_with(s: &IndexSet, max_tail: usize) -> (bool, usize) {
    let t = tail_start(s);
    (t <= max_tail, t)
}

/// Infinite at horizon: meets `[⌊H/2⌋, H)`. Reports the largest member.
pub fn classify_infinite(s: &IndexSet) -> (bool, Option<usize>) {
    let m = s.max();
    (m.is_some_and(|m| m >= s.horizon / 2), m)
}

/// Sums of nonempty sets of distinct generators (by position), truncated
/// to `[0, H)`.
pub fn fs_set(generators: &[usize], horizon: usize) -> Result<IndexSet> {
    if generators.is_empty() {
        return Err(Error::invalid("fs_set needs at least one generator"));
    }
    if generators.contains(&0) {
        return Err(Error::invalid("generators must be positive"));
    }
    let mut sums = PointSet::with_capacity(horizon);
    for &p in generators {
        let prev: Vec<usize> = sums.ones().collect();
        if p < horizon {
            sums.insert(p);
        }
        for s in prev {
            if s + p < horizon {
                sums.insert(s + p);
            }
        }
    }
    IndexSet::new(horizon, sums.ones())
}

/// Searches for `depth` strictly increasing positive generators whose
/// `2^depth - 1` finite sums all lie in `S`. Generators are bounded by
/// `max(S)`. The verdict is "IP at this depth", not IP outright.
pub fn contains_ip(s: &IndexSet, depth: usize) -> Result<(bool, Vec<usize>)> {
    if depth == 0 || depth > MAX_IP_DEPTH {
        return Err(Error::invalid(format!("IP depth must be in 1..={MAX_IP_DEPTH}")));
    }
    let mut gens = Vec::with_capacity(depth);
    let mut sums = Vec::with_capacity(1 << depth);
    let found = ip_search(s, depth, 1, &mut gens, &mut sums);
    Ok((found, if found { gens } else { vec![] }))
}

fn ip_search(s: &IndexSet, depth: usize, from: usize, gens: &mut Vec<usize>, sums: &mut Vec<usize>) -> bool {
    if gens.len() == depth {
        return true;
    }
    let Some(top) = s.max() else { return false };
    for p in from..=top {
        if !s.contains(p) || sums.iter().any(|&q| !s.contains(q + p)) {
            continue;
        }
        let before = sums.len();
        for i in 0..before {
            sums.push(sums[i] + p);
        }
        sums.push(p);
        gens.push(p);
        if ip_search(s, depth, p + 1, gens, sums) {
            return true;
        }
        gens.pop();
        sums.truncate(before);
    }
    false
}

/// `(S - S) ∩ Z⁺`, including 0 when `S` is nonempty.
pub fn difference_set(s: &IndexSet) -> IndexSet {
    let mut out = PointSet::with_capacity(s.horizon);
    let m = s.members();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[..=i] {
            out.insert(a - b);
        }
    }
    IndexSet {
        horizon: s.horizon,
        members: out,
    }
}

/// A family of subsets of `Z⁺`, decided at a horizon.
#[derive(Clone)]
pub enum FamilyClassifier {
    /// `F_inf`: meets the upper half of the horizon.
    Infinite,
    /// Tail `[t, H) ⊆ S` with `t <= max_tail` (default `⌊H/2⌋`).
    Cofinite { max_tail: Option<usize> },
    /// `F_s`: gaps at most `max_gap` (default `⌊H/4⌋`).
    Syndetic { max_gap: Option<usize> },
    /// `F_t`: a run of at least `min_run` (default `⌊H/4⌋`).
    Thick { min_run: Option<usize> },
    /// `F_IP` at bounded depth.
    Ip { depth: usize },
    Custom {
        name: String,
        predicate: Arc<dyn Fn(&IndexSet) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for FamilyClassifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyClassifier::Custom { name, .. } => write!(f, "Custom({name})"),
            other => f.write_str(&other.name()),
        }
    }
}

/// Outcome of classifying one index set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifierVerdict {
    pub kind: String,
    pub verdict: bool,
    pub witness: serde_json::Value,
    pub horizon: usize,
    pub thresholds: BTreeMap<String, usize>,
}

impl FamilyClassifier {
    /// Built-in family by name: `infinite`, `cofinite`, `syndetic`,
    /// `thick`, `ip`.
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "infinite" | "inf" => FamilyClassifier::Infinite,
            "cofinite" => FamilyClassifier::Cofinite { max_tail: None },
            "syndetic" => FamilyClassifier::Syndetic { max_gap: None },
            "thick" => FamilyClassifier::Thick { min_run: None },
            "ip" => FamilyClassifier::Ip { depth: 3 },
            _ => return Err(Error::invalid(format!("unknown family `{name}`"))),
        })
    }

    pub fn name(&self) -> String {
        match self {
            FamilyClassifier::Infinite => "infinite".into(),
            FamilyClassifier::Cofinite { .. } => "cofinite".into(),
            FamilyClassifier::Syndetic { .. } => "syndetic".into(),
            FamilyClassifier::Thick { .. } => "thick".into(),
            FamilyClassifier::Ip { .. } => "ip".into(),
            FamilyClassifier::Custom { name, .. } => name.clone(),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, FamilyClassifier::Custom { .. })
    }

    pub fn contains(&self, s: &IndexSet) -> bool {
        self.classify(s).verdict
    }

    pub fn classify(&self, s: &IndexSet) -> ClassifierVerdict {
        let h = s.horizon;
        let mut thresholds = BTreeMap::new();
        let (verdict, witness) = match self {
            FamilyClassifier::Infinite => {
                thresholds.insert("from".into(), h / 2);
                let (v, m) = classify_infinite(s);
                (v, serde_json::json!({ "max_member": m }))
            }
            FamilyClassifier::Cofinite { max_tail } => {
                let t = max_tail.unwrap_or(h / 2);
                thresholds.insert("max_tail".into(), t);
                let (v, start) = classify_cofinite_with(s, t);
                (v, serde_json::json!({ "tail_start": start }))
            }
            FamilyClassifier::Syndetic { max_gap } => {
                let g = max_gap.unwrap_or_else(|| default_window(h));
                thresholds.insert("max_gap".into(), g);
                let (v, gap) = classify_syndetic_with(s, g);
                (v, serde_json::json!({ "gap": gap }))
            }
            FamilyClassifier::Thick { min_run } => {
                let r = min_run.unwrap_or_else(|| default_window(h));
                thresholds.insert("min_run".into(), r);
                let (v, run) = classify_thick_with(s, r);
                (v, serde_json::json!({ "max_run": run }))
            }
            FamilyClassifier::Ip { depth } => {
                let d = (*depth).clamp(1, MAX_IP_DEPTH);
                thresholds.insert("depth".into(), d);
                let (v, gens) = contains_ip(s, d).expect("depth clamped");
                (v, serde_json::json!({ "generators": gens }))
            }
            FamilyClassifier::Custom { predicate, .. } => (predicate(s), serde_json::Value::Null),
        };
        ClassifierVerdict {
            kind: self.name(),
            verdict,
            witness,
            horizon: h,
            thresholds,
        }
    }
}

/// Membership in the dual family `κF`: the complement of `S` is not in `F`.
pub fn dual_contains(s: &IndexSet, family: &FamilyClassifier) -> Result<bool> {
    if !family.is_builtin() {
        return Err(Error::invalid(format!(
            "no complement logic for custom family `{}`",
            family.name()
        )));
    }
    Ok(!family.contains(&s.complement()))
}
