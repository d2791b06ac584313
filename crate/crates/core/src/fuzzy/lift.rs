use serde::{Deserialize, Serialize};

use super::gfunction::GFunction;
use super::set::{FuzzySet, LevelGrid};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::rational::{self, Rational, RationalString};
use crate::spaces::{cut_mask, Csr, Kind, MetricSpace, SystemMap, SystemSpec};

/// Which fuzzy sets a lift enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Every grade function, `∅_X` included.
    All,
    /// `F_0(X)`: height `> 0`.
    Nonempty,
    /// `F^{=λ}(X)`: height exactly `λ`.
    HeightEq(RationalString),
    /// `F^{≥λ}(X)`: height at least `λ`.
    #[serde(rename = "height_ge")]
    HeightAtLeast(RationalString),
}

impl Constraint {
    pub fn height_eq(lambda: Rational) -> Self {
        Constraint::HeightEq(lambda.into())
    }

    pub fn height_at_least(lambda: Rational) -> Self {
        Constraint::HeightAtLeast(lambda.into())
    }

    /// Short name used in reports: `all`, `F_0`, `=1/2`, `>=1/2`.
    pub fn describe(&self) -> String {
        match self {
            Constraint::All => "all".into(),
            Constraint::Nonempty => "F_0".into(),
            Constraint::HeightEq(l) => format!("={}", rational::label(&l.0)),
            Constraint::HeightAtLeast(l) => format!(">={}", rational::label(&l.0)),
        }
    }

    fn threshold(&self, grid: LevelGrid) -> Result<u8> {
        match self {
            Constraint::HeightEq(l) | Constraint::HeightAtLeast(l) => {
                let j = grid.require_index(l.0)?;
                if j == 0 {
                    return Err(Error::invalid("height constraint needs a positive level"));
                }
                Ok(j)
            }
            _ => Ok(0),
        }
    }

    fn admits(&self, height: u8, threshold: u8) -> bool {
        match self {
            Constraint::All => true,
            Constraint::Nonempty => height > 0,
            Constraint::HeightEq(_) => height == threshold,
            Constraint::HeightAtLeast(_) => height >= threshold,
        }
    }
}

fn state_count(n: usize, grid: LevelGrid, bounds: &Bounds) -> Result<usize> {
    let q = grid.m() as u128 + 1;
    let states = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(q)).unwrap_or(u128::MAX);
    bounds.check_fuzzy(states)?;
    Ok(states as usize)
}

/// Grade vector of code `c`, point 0 varying fastest.
fn decode(mut c: usize, n: usize, q: usize, out: &mut [u8]) {
    for g in out.iter_mut().take(n) {
        *g = (c % q) as u8;
        c /= q;
    }
}

fn encode(grades: &[u8], q: usize) -> usize {
    grades.iter().rev().fold(0, |acc, &g| acc * q + g as usize)
}

/// Every grid-valued fuzzy set on `space` satisfying `constraint`, each
/// exactly once.
pub fn enumerate_fuzzy(
    space: &MetricSpace,
    grid: LevelGrid,
    constraint: Constraint,
    bounds: &Bounds,
) -> Result<impl Iterator<Item = FuzzySet>> {
    let n = space.len();
    let states = state_count(n, grid, bounds)?;
    let t = constraint.threshold(grid)?;
    let q = grid.m() as usize + 1;
    let base = space.clone();
    Ok((0..states).filter_map(move |c| {
        let mut g = vec![0u8; n];
        decode(c, n, q, &mut g);
        let h = g.iter().copied().max().unwrap_or(0);
        constraint
            .admits(h, t)
            .then(|| FuzzySet::from_indices(&base, grid, g).expect("valid grades"))
    }))
}

/// The Zadeh extension (or the `g`-fuzzification) as a system on the
/// enumerated fuzzy sets with the levelwise metric.
///
/// For relational systems, `A` is related to every admitted `A'` whose
/// cuts are related to the cuts of `g∘A` level by level, in the sense of
/// the hyperspace lift.
pub fn fuzzy_lift_system(
    sys: &SystemMap,
    grid: &LevelGrid,
    constraint: Constraint,
    g: Option<&GFunction>,
    bounds: &Bounds,
) -> Result<SystemMap> {
    let grid = *grid;
    let base = sys.space();
    if !base.is_table() || base.len() > 64 {
        return Err(Error::Backend(
            "fuzzy lifts need a table base space of at most 64 points".into(),
        ));
    }
    if let Some(g) = g {
        if g.grid() != grid {
            return Err(Error::invalid("g and the lift use different grids"));
        }
    }
    let n = base.len();
    let q = grid.m() as usize + 1;
    let states = state_count(n, grid, bounds)?;
    let t = constraint.threshold(grid)?;

    let mut lookup = vec![u32::MAX; states];
    let mut grades = Vec::new();
    let mut buf = vec![0u8; n];
    let mut count = 0u32;
    for (c, slot) in lookup.iter_mut().enumerate() {
        decode(c, n, q, &mut buf);
        let h = buf.iter().copied().max().unwrap_or(0);
        if constraint.admits(h, t) {
            *slot = count;
            count += 1;
            grades.extend_from_slice(&buf);
        }
    }
    if count == 0 {
        return Err(Error::invalid("constraint admits no fuzzy set"));
    }
    let succ: Vec<Vec<usize>> = (0..n).map(|x| sys.successors(x)).collect();
    let gmap: Vec<u8> = match g {
        Some(g) => g.table().to_vec(),
        None => (0..q as u8).collect(),
    };
    let push = |a: &[u8], out: &mut [u8]| {
        out.fill(0);
        for (y, &j) in a.iter().enumerate() {
            let v = gmap[j as usize];
            if v > 0 {
                for &x in &succ[y] {
                    out[x] = out[x].max(v);
                }
            }
        }
    };
    let space = MetricSpace::fuzzy(base.clone(), grid.m(), grades);
    let Kind::Fuzzy { grades: stored, .. } = space.kind() else {
        unreachable!()
    };
    let stored = stored.clone();
    let state = |i: usize| &stored[i * n..(i + 1) * n];
    let spec = SystemSpec::FuzzyLift {
        base: Box::new(sys.spec().clone()),
        grid_m: grid.m(),
        constraint,
        g: g.cloned(),
    };
    let leaves = |i: usize, img: &[u8]| {
        Error::NotInvariant(format!(
            "{} maps to {}, outside the {} enumeration",
            space.label(i),
            crate::spaces::fuzzy_label(base, grid.m(), img),
            constraint.describe()
        ))
    };

    if sys.is_map() {
        let mut img = vec![0u8; n];
        let mut table = Vec::with_capacity(count as usize);
        for i in 0..count as usize {
            push(state(i), &mut img);
            let j = lookup[encode(&img, q)];
            if j == u32::MAX {
                return Err(leaves(i, &img));
            }
            table.push(j as usize);
        }
        return SystemMap::with_spec(space.clone(), table, spec);
    }

    let succ_mask: Vec<u64> = succ.iter().map(|s| s.iter().fold(0u64, |m, &y| m | 1 << y)).collect();
    let mut up = vec![0u8; n];
    let mut work = 0u128;
    for i in 0..count as usize {
        push(state(i), &mut up);
        work += up.iter().map(|&u| u as u128 + 1).product::<u128>();
    }
    bounds.check_product(work)?;

    let mut rows = Vec::with_capacity(count as usize);
    let mut cand = vec![0u8; n];
    for i in 0..count as usize {
        let src: Vec<u8> = state(i).iter().map(|&j| gmap[j as usize]).collect();
        push(state(i), &mut up);
        let src_cuts: Vec<u64> = (1..q as u8).map(|j| cut_mask(&src, j)).collect();
        let mut row = Vec::new();
        cand.fill(0);
        // Odometer over all `cand <= up` pointwise.
        loop {
            let ok = (1..q as u8).all(|j| {
                let dst = cut_mask(&cand, j);
                let mut s = src_cuts[j as usize - 1];
                while s != 0 {
                    let u = s.trailing_zeros() as usize;
                    s &= s - 1;
                    if succ_mask[u] & dst == 0 {
                        return false;
                    }
                }
                true
            });
            if ok {
                let k = lookup[encode(&cand, q)];
                if k != u32::MAX {
                    row.push(k as usize);
                }
            }
            let mut x = 0;
            while x < n && cand[x] == up[x] {
                cand[x] = 0;
                x += 1;
            }
            if x == n {
                break;
            }
            cand[x] += 1;
        }
        if row.is_empty() {
            return Err(leaves(i, &up));
        }
        row.sort_unstable();
        rows.push(row);
    }
    SystemMap::from_relation(space.clone(), Csr::from_rows(rows), spec)
}

/// The fuzzy set standing for point `i` of a fuzzy lift.
pub fn fuzzy_at(lifted: &MetricSpace, i: usize) -> Result<FuzzySet> {
    match lifted.kind() {
        Kind::Fuzzy { base, m, grades, .. } => {
            let n = base.len();
            FuzzySet::from_indices(base, LevelGrid::new(*m)?, grades[i * n..(i + 1) * n].to_vec())
        }
        _ => Err(Error::invalid("not a fuzzy lift")),
    }
}

/// Index of `a` among the points of a fuzzy lift.
pub fn fuzzy_index(lifted: &MetricSpace, a: &FuzzySet) -> Option<usize> {
    match lifted.kind() {
        Kind::Fuzzy { base, m, .. } if base.same(a.base()) && *m == a.grid().m() => lifted.index_of(&a.label()),
        _ => None,
    }
}

/// Base space and grid of a fuzzy lift.
pub fn fuzzy_base(lifted: &MetricSpace) -> Option<(&MetricSpace, LevelGrid)> {
    match lifted.kind() {
        Kind::Fuzzy { base, m, .. } => Some((base, LevelGrid::new(*m).ok()?)),
        _ => None,
    }
}
