use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use super::returns::SetOrbit;
use super::verdict::{Exactness, Verdict};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::spaces::{eventual_period, Decomposition, SystemMap};

/// The distinct iterate tables `T^0, ..., T^{ρ+π-1}`.
fn iterate_tables(sys: &SystemMap, op: &str) -> Result<Vec<Vec<u32>>> {
    let t = sys.require_map(op)?;
    let (pre, per) = eventual_period(sys)?;
    let mut out = Vec::with_capacity(pre + per);
    let mut cur: Vec<u32> = (0..t.len() as u32).collect();
    for _ in 0..pre + per {
        let next = cur.iter().map(|&x| t[x as usize]).collect();
        out.push(std::mem::replace(&mut cur, next));
    }
    Ok(out)
}

/// Outcome of [`equicontinuity_modulus`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Modulus {
    #[serde(with = "opt_rational")]
    pub eps: Option<Rational>,
    /// Largest `δ <= ε` such that `d(x, y) < δ` keeps every iterate pair
    /// `ε`-close; `None` if no positive `δ` works.
    #[serde(with = "opt_rational")]
    pub delta: Option<Rational>,
    /// A pair `(x, y, n)` with `d(x, y) = δ` and `d(T^n x, T^n y) >= ε`,
    /// showing that `δ` cannot be enlarged.
    pub certificate: Option<(String, String, usize)>,
    pub iterates: usize,
}

mod opt_rational {
    use serde::Serializer;

    use crate::rational::{format, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format(q)),
            None => s.serialize_none(),
        }
    }
}

/// Exact modulus of uniform continuity for the family `{T^n}`. Only
/// pairs closer than `ε` can lower it, and `δ` is capped at `ε`.
pub fn equicontinuity_modulus(sys: &SystemMap, eps: Rational) -> Result<Modulus> {
    if eps <= Rational::zero() {
        return Err(Error::invalid("ε must be positive"));
    }
    let tables = iterate_tables(sys, "equicontinuity_modulus")?;
    let space = sys.space();
    let n = space.len();
    let mut best: Option<(Rational, usize, usize, usize)> = None;
    // Distinct points are at least the smallest positive distance apart.
    let trivial = space.min_positive_distance().is_none_or(|d| eps <= d);
    if !trivial {
        let values = space.distance_values();
        let eps_rank = values.partition_point(|v| *v < eps);
        // Ranks index `values` when available, so comparisons stay integral.
        let rank = |x: usize, y: usize| match space.dist_rank(x, y) {
            Some(r) => r as usize,
            None => values
                .binary_search(&space.dist(x, y))
                .expect("distance is a listed value"),
        };
        let mut best_rank = eps_rank;
        for x in 0..n {
            for y in x + 1..n {
                let d = rank(x, y);
                if d >= best_rank {
                    continue;
                }
                if let Some(k) = tables
                    .iter()
                    .position(|t| rank(t[x] as usize, t[y] as usize) >= eps_rank)
                {
                    best_rank = d;
                    best = Some((values[d], x, y, k));
                }
            }
        }
    }
    Ok(match best {
        Some((d, x, y, k)) => Modulus {
            eps: Some(eps),
            delta: Some(d),
            certificate: Some((space.label(x), space.label(y), k)),
            iterates: tables.len(),
        },
        None => Modulus {
            eps: Some(eps),
            delta: Some(eps),
            certificate: None,
            iterates: tables.len(),
        },
    })
}

/// `(ε, δ(ε))` for every positive distance value up to the diameter.
pub fn modulus_curve(sys: &SystemMap) -> Result<Vec<(Rational, Option<Rational>)>> {
    sys.space()
        .distance_values()
        .into_iter()
        .filter(|d| !d.is_zero())
        .map(|e| Ok((e, equicontinuity_modulus(sys, e)?.delta)))
        .collect()
}

pub fn equicontinuity(sys: &SystemMap, eps: Rational) -> Result<Verdict> {
    let m = equicontinuity_modulus(sys, eps)?;
    let w = serde_json::to_value(&m)?;
    Ok(match m.delta {
        Some(_) => Verdict::holds("equicontinuity", Exactness::Exact, w),
        None => Verdict::fails("equicontinuity", Exactness::Exact, w),
    })
}

/// `max_x d(T^n x, x)` for `n < H`.
pub fn rigidity_curve(sys: &SystemMap, horizon: usize) -> Result<Vec<Rational>> {
    let t = sys.require_map("rigidity_curve")?;
    let space = sys.space();
    let mut cur: Vec<usize> = (0..t.len()).collect();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        out.push(
            cur.iter()
                .enumerate()
                .map(|(x, &y)| space.dist(x, y))
                .max()
                .unwrap_or_else(Rational::zero),
        );
        for y in &mut cur {
            *y = t[*y] as usize;
        }
    }
    Ok(out)
}

/// Least `n >= 1` with `d(T^n x, x) < ε` for all `x`. The search covers
/// `1..=ρ+π`, past which the iterates repeat, so absence is exact.
pub fn is_uniformly_rigid(sys: &SystemMap, eps: Rational) -> Result<Verdict> {
    let name = "uniform_rigidity";
    if eps <= Rational::zero() {
        return Err(Error::invalid("ε must be positive"));
    }
    let t = sys.require_map(name)?;
    let (pre, per) = eventual_period(sys)?;
    let space = sys.space();
    let mut cur: Vec<usize> = (0..t.len()).collect();
    let mut closest: Option<Rational> = None;
    for n in 1..=pre + per {
        for y in &mut cur {
            *y = t[*y] as usize;
        }
        let disp = cur
            .iter()
            .enumerate()
            .map(|(x, &y)| space.dist(x, y))
            .max()
            .unwrap_or_else(Rational::zero);
        if disp < eps {
            return Ok(Verdict::holds(
                name,
                Exactness::Exact,
                json!({ "n": n, "max_displacement": rational::format(&disp), "eps": rational::format(&eps) }),
            ));
        }
        closest = Some(closest.map_or(disp, |c: Rational| c.min(disp)));
    }
    Ok(Verdict::fails(
        name,
        Exactness::Exact,
        json!({
            "eps": rational::format(&eps),
            "checked_up_to": pre + per,
            "min_max_displacement": closest.map(|c| rational::format(&c)),
        }),
    ))
}

/// `liminf d(T^n x, T^n y) = 0`, i.e. the orbits eventually merge.
pub fn is_proximal_pair(sys: &SystemMap, x: usize, y: usize) -> Result<bool> {
    let t = sys.require_map("is_proximal_pair")?;
    let n = t.len();
    if x >= n || y >= n {
        return Err(Error::invalid("point outside the space"));
    }
    let mut seen = std::collections::HashSet::new();
    let (mut a, mut b) = (x, y);
    while seen.insert((a, b)) {
        if a == b {
            return Ok(true);
        }
        a = t[a] as usize;
        b = t[b] as usize;
    }
    Ok(false)
}

/// Every pair is proximal, which on a finite space means a single fixed
/// point attracts everything.
pub fn is_proximal(sys: &SystemMap) -> Result<Verdict> {
    let name = "proximality";
    sys.require_map(name)?;
    let d = Decomposition::of(sys)?;
    let space = sys.space();
    let cycle_point = |id: usize| {
        (0..sys.len())
            .find(|&x| d.is_periodic(x) && d.cycle_id[x] == id)
            .unwrap()
    };
    if d.cycles > 1 {
        let (x, y) = (cycle_point(0), cycle_point(1));
        return Ok(Verdict::fails(
            name,
            Exactness::Exact,
            json!({ "x": space.label(x), "y": space.label(y), "reason": "orbits settle on different cycles" }),
        ));
    }
    let x = cycle_point(0);
    if d.cycle_len[x] > 1 {
        let y = sys.apply(x);
        return Ok(Verdict::fails(
            name,
            Exactness::Exact,
            json!({ "x": space.label(x), "y": space.label(y), "reason": "distinct points of one cycle never meet" }),
        ));
    }
    Ok(Verdict::holds(
        name,
        Exactness::Exact,
        json!({ "fixed_point": space.label(x), "merge_time": d.preperiod() }),
    ))
}

/// `diam(T^n X)` for `n < H`.
pub fn diam_decay(sys: &SystemMap, horizon: usize) -> Vec<Rational> {
    let space = sys.space();
    let mut cur = space.full_set();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        out.push(space.diam_of(&cur));
        cur = sys.image_set(&cur);
    }
    out
}

/// Whether `diam(T^n X)` reaches 0, with the first such `n`. Exact: the
/// image sequence is eventually periodic and nonincreasing.
pub fn diam_reaches_zero(sys: &SystemMap) -> Result<Verdict> {
    let space = sys.space();
    let orbit = SetOrbit::of(sys, &space.full_set())?;
    let exactness = super::topo::exactness_of(space);
    match orbit.sets.iter().position(|s| space.diam_of(s).is_zero()) {
        Some(n) => Ok(Verdict::holds("diam_decay_to_zero", exactness, json!({ "n": n }))),
        None => {
            let last = orbit.sets.last().expect("nonempty orbit");
            Ok(Verdict::fails(
                "diam_decay_to_zero",
                exactness,
                json!({
                    "limit_diam": rational::format(&space.diam_of(last)),
                    "preperiod": orbit.preperiod,
                    "period": orbit.period,
                }),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::spaces::{make_grid_interval_map, make_multiply, make_rotation, MetricSpace, PiecewiseLinear, Snap};

    fn half() -> SystemMap {
        make_grid_interval_map(&PiecewiseLinear::named("half").unwrap(), 8, Snap::Down).unwrap()
    }

    fn constant(n: usize) -> SystemMap {
        SystemMap::from_table(MetricSpace::discrete(n).unwrap(), vec![0; n]).unwrap()
    }

    #[test]
    fn isometry_modulus_is_eps() {
        let r = make_rotation(6, 1).unwrap();
        for e in [rat(1, 12), rat(1, 6), rat(1, 3)] {
            assert_eq!(equicontinuity_modulus(&r, e).unwrap().delta, Some(e));
        }
        for (e, d) in modulus_curve(&r).unwrap() {
            assert_eq!(d, Some(e));
        }
    }

    #[test]
    fn multiply_modulus() {
        let m = make_multiply(9, 2).unwrap();
        let md = equicontinuity_modulus(&m, rat(2, 9)).unwrap();
        assert_eq!(md.iterates, 6);
        // Neighbours separate under doubling, so δ is the least distance.
        assert_eq!(md.delta, Some(rat(1, 9)));
        assert!(md.certificate.is_some());
    }

    #[test]
    fn uniform_rigidity() {
        let r = make_rotation(12, 1).unwrap();
        let v = is_uniformly_rigid(&r, rat(1, 24)).unwrap();
        assert_eq!(v.witnesses["n"], 12);
        assert!(is_uniformly_rigid(&half(), rat(1, 16)).unwrap().is_fails());
        let id = make_rotation(3, 0).unwrap();
        assert_eq!(is_uniformly_rigid(&id, rat(1, 100)).unwrap().witnesses["n"], 1);
        let curve = rigidity_curve(&r, 25).unwrap();
        assert!(curve[0].is_zero() && curve[12].is_zero() && curve[24].is_zero());
        assert!(!curve[5].is_zero());
    }

    #[test]
    fn proximality() {
        assert!(is_proximal(&constant(3)).unwrap().is_holds());
        assert!(is_proximal(&half()).unwrap().is_holds());
        let r = make_rotation(4, 1).unwrap();
        assert!(is_proximal(&r).unwrap().is_fails());
        assert!(!is_proximal_pair(&r, 0, 1).unwrap());
        assert!(is_proximal_pair(&half(), 3, 8).unwrap());
    }

    #[test]
    fn decay() {
        let h = half();
        let d = diam_decay(&h, 6);
        assert!(d.windows(2).all(|w| w[0] >= w[1]));
        assert!(d[4].is_zero() && !d[3].is_zero());
        assert_eq!(diam_reaches_zero(&h).unwrap().witnesses["n"], 4);
        let c = diam_decay(&constant(3), 3);
        assert_eq!(c, vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        let r = make_rotation(5, 2).unwrap();
        assert!(diam_decay(&r, 4).iter().all(|x| *x == r.space().diam()));
        assert!(diam_reaches_zero(&r).unwrap().is_fails());
    }
}
