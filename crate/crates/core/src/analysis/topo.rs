use std::collections::VecDeque;

use serde_json::{json, Value};

use super::basis::{truncation, OpenBasis};
use super::returns::{ReturnTimes, SetOrbit};
use super::verdict::{Exactness, Verdict};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::families::{difference_set, fs_set, FamilyClassifier, IndexSet};
use crate::hyperspace::CompactSet;
use crate::spaces::{power_system, product_system, Decomposition, MetricSpace, SystemMap};
use crate::PointSet;

/// Exact on finite tables, exact up to the word length on symbolic ones.
pub fn exactness_of(space: &MetricSpace) -> Exactness {
    match truncation(space) {
        Some(resolution) => Exactness::Truncated { resolution },
        None => Exactness::Exact,
    }
}

fn check_basis(sys: &SystemMap, basis: &OpenBasis) -> Result<()> {
    if basis.space_len() != sys.len() {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

fn ids(space: &MetricSpace, set: &PointSet) -> Value {
    json!(space.labels_of(set))
}

fn pair_counterexample(sys: &SystemMap, u: &PointSet, v: &PointSet, extra: Value) -> Value {
    let mut c = json!({ "U": ids(sys.space(), u), "V": ids(sys.space(), v) });
    if let (Value::Object(c), Value::Object(extra)) = (&mut c, extra) {
        c.extend(extra);
    }
    c
}

/// Breadth-first distances from `sources`, `u32::MAX` where unreachable.
fn bfs(sys: &SystemMap, sources: &PointSet, forward: bool) -> Vec<u32> {
    let mut dist = vec![u32::MAX; sys.len()];
    let mut queue = VecDeque::new();
    for s in sources.ones() {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[x] + 1;
        let mut visit = |y: usize| {
            if dist[y] == u32::MAX {
                dist[y] = d;
                queue.push_back(y);
            }
        };
        if forward {
            sys.for_each_successor(x, &mut visit);
        } else {
            sys.for_each_predecessor(x, &mut visit);
        }
    }
    dist
}

/// Some `T^n(U)` meets `V` for every pair of basis opens.
pub fn is_transitive(sys: &SystemMap, basis: &OpenBasis) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let exactness = exactness_of(sys.space());
    let name = "transitivity";
    let n = sys.len();
    if basis.is_singletons() {
        // Strong connectivity of the transition graph.
        let root = sys.space().singleton(0);
        let back = bfs(sys, &root, false);
        if let Some(u) = back.iter().position(|&d| d == u32::MAX) {
            let cx = pair_counterexample(sys, &sys.space().singleton(u), &root, json!({}));
            return Ok(Verdict::fails(name, exactness, cx));
        }
        let fwd = bfs(sys, &root, true);
        if let Some(v) = fwd.iter().position(|&d| d == u32::MAX) {
            let cx = pair_counterexample(sys, &root, &sys.space().singleton(v), json!({}));
            return Ok(Verdict::fails(name, exactness, cx));
        }
        return Ok(Verdict::holds(
            name,
            exactness,
            json!({ "method": "strong connectivity", "states": n, "basis": basis.provenance() }),
        ));
    }
    let mut max_first = 0;
    for i in 0..basis.len() {
        let u = basis.open(i);
        let dist = bfs(sys, &u, true);
        for j in 0..basis.len() {
            let v = basis.open(j);
            match v.ones().map(|y| dist[y]).min().filter(|&d| d != u32::MAX) {
                Some(d) => max_first = max_first.max(d),
                None => {
                    let cx = pair_counterexample(sys, &u, &v, json!({}));
                    return Ok(Verdict::fails(name, exactness, cx));
                }
            }
        }
    }
    Ok(Verdict::holds(
        name,
        exactness,
        json!({ "method": "reachability", "max_first_return": max_first, "basis": basis.provenance() }),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakMixingMethod {
    /// Transitivity of `T x T` on the product basis.
    Product,
    /// `N(U, U) ∩ N(U, V)` nonempty for every pair.
    ReturnIntersection,
}

impl WeakMixingMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(WeakMixingMethod::Product),
            "return-intersection" => Ok(WeakMixingMethod::ReturnIntersection),
            _ => Err(Error::invalid(format!("unknown weak mixing method `{s}`"))),
        }
    }
}

fn renamed(mut v: Verdict, name: &str) -> Verdict {
    v.property = name.into();
    v
}

pub fn is_weakly_mixing(
    sys: &SystemMap,
    basis: &OpenBasis,
    method: WeakMixingMethod,
    bounds: &Bounds,
) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let name = "weak_mixing";
    match method {
        WeakMixingMethod::Product => {
            let p = power_system(sys, 2, bounds)?;
            let pb = OpenBasis::product(p.space(), &[basis.clone(), basis.clone()])?;
            Ok(renamed(is_transitive(&p, &pb)?, name))
        }
        WeakMixingMethod::ReturnIntersection => {
            let check = |o: &SetOrbit, u: &PointSet| {
                let nuu = o.returns_to(u);
                o.sets.iter().zip(&nuu.pattern).filter(|(_, &b)| b).fold(
                    PointSet::with_capacity(sys.len()),
                    |mut acc, (s, _)| {
                        acc.union_with(s);
                        acc
                    },
                )
            };
            pairwise(sys, basis, name, check, |o, u, v| {
                let both = o.returns_to(u).intersection(&o.returns_to(v));
                match both.min() {
                    Some(n) => Ok(n),
                    None => Err(json!({ "N(U,U)": o.returns_to(u), "N(U,V)": o.returns_to(v) })),
                }
            })
        }
    }
}

/// Runs a pair predicate over the basis. For singleton `V` opens the
/// predicate is evaluated for all `V` at once: `singles(orbit, U)` returns
/// the points `v` for which the pair `(U, {v})` passes.
fn pairwise(
    sys: &SystemMap,
    basis: &OpenBasis,
    name: &str,
    singles: impl Fn(&SetOrbit, &PointSet) -> PointSet,
    pair: impl Fn(&SetOrbit, &PointSet, &PointSet) -> std::result::Result<usize, Value>,
) -> Result<Verdict> {
    let exactness = exactness_of(sys.space());
    // Witness sizes are only tracked for explicit bases; for singletons
    // that would cost a pattern per pair.
    let mut worst = 0;
    for i in 0..basis.len() {
        let u = basis.open(i);
        let orbit = SetOrbit::of(sys, &u)?;
        if basis.is_singletons() {
            let good = singles(&orbit, &u);
            if let Some(v) = (0..sys.len()).find(|&v| !good.contains(v)) {
                let v = sys.space().singleton(v);
                let detail = pair(&orbit, &u, &v).expect_err("set and pair logic agree");
                let cx = pair_counterexample(sys, &u, &v, json!({ "detail": detail }));
                return Ok(Verdict::fails(name, exactness, cx));
            }
            continue;
        }
        for j in 0..basis.len() {
            let v = basis.open(j);
            match pair(&orbit, &u, &v) {
                Ok(n) => worst = worst.max(n),
                Err(detail) => {
                    let cx = pair_counterexample(sys, &u, &v, json!({ "detail": detail }));
                    return Ok(Verdict::fails(name, exactness, cx));
                }
            }
        }
    }
    Ok(Verdict::holds(
        name,
        exactness,
        json!({
            "max_witness": if basis.is_singletons() { Value::Null } else { json!(worst) },
            "basis": basis.provenance(),
        }),
    ))
}

fn periodic_sets(o: &SetOrbit) -> &[PointSet] {
    &o.sets[o.preperiod..]
}

fn union_of(n: usize, sets: &[PointSet]) -> PointSet {
    sets.iter().fold(PointSet::with_capacity(n), |mut acc, s| {
        acc.union_with(s);
        acc
    })
}

fn intersection_of(n: usize, sets: &[PointSet]) -> PointSet {
    let mut acc = PointSet::with_capacity(n);
    acc.insert_range(..);
    for s in sets {
        acc.intersect_with(s);
    }
    acc
}

/// Every `N(U, V)` is cofinite.
pub fn is_mixing(sys: &SystemMap, basis: &OpenBasis) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let n = sys.len();
    pairwise(
        sys,
        basis,
        "mixing",
        |o, _| intersection_of(n, periodic_sets(o)),
        |o, _, v| {
            let r = o.returns_to(v);
            r.tail_start().ok_or_else(|| json!({ "N(U,V)": r }))
        },
    )
}

/// The `IP` test only depends on the set `T^k(U)` for the least multiple
/// `k >= 1` of the period past the preperiod.
fn ip_set(o: &SetOrbit) -> &PointSet {
    let q = o.period;
    let k = o.preperiod.max(1).div_ceil(q) * q;
    let idx = if k < o.sets.len() {
        k
    } else {
        o.preperiod + (k - o.preperiod) % q
    };
    &o.sets[idx]
}

/// Every `N(U, V)` lies in `family`. Built-in families are decided
/// exactly from the eventually periodic return pattern; custom ones are
/// classified on `[0, H)`.
pub fn is_f_transitive(
    sys: &SystemMap,
    basis: &OpenBasis,
    family: &FamilyClassifier,
    horizon: usize,
) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let n = sys.len();
    let name = format!("{}-transitivity", family.name());
    let witness = |r: &ReturnTimes| family.classify(&r.to_index_set(horizon));
    if !family.is_builtin() {
        let mut v = pairwise(
            sys,
            basis,
            &name,
            |o, u| {
                let mut good = PointSet::with_capacity(n);
                good.extend((0..n).filter(|&v| family.contains(&o.returns_to(&single(n, v)).to_index_set(horizon))));
                let _ = u;
                good
            },
            |o, _, v| {
                let r = o.returns_to(v);
                let c = witness(&r);
                if c.verdict {
                    Ok(0)
                } else {
                    Err(json!({ "N(U,V)": r.to_index_set(horizon), "classifier": c }))
                }
            },
        )?;
        v.exactness = Exactness::Horizon { h: horizon };
        return Ok(v);
    }
    pairwise(
        sys,
        basis,
        &name,
        |o, _| match family {
            FamilyClassifier::Infinite | FamilyClassifier::Syndetic { .. } => union_of(n, periodic_sets(o)),
            FamilyClassifier::Ip { .. } => ip_set(o).clone(),
            _ => intersection_of(n, periodic_sets(o)),
        },
        |o, _, v| {
            let r = o.returns_to(v);
            if r.in_family(family) == Some(true) {
                Ok(r.min().unwrap_or(0))
            } else {
                Err(json!({ "N(U,V)": r, "classifier": witness(&r) }))
            }
        },
    )
}

fn single(n: usize, x: usize) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    s.insert(x);
    s
}

/// `F`-transitivity of `T x T`.
pub fn is_f_mixing(
    sys: &SystemMap,
    basis: &OpenBasis,
    family: &FamilyClassifier,
    horizon: usize,
    bounds: &Bounds,
) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let p = power_system(sys, 2, bounds)?;
    let pb = OpenBasis::product(p.space(), &[basis.clone(), basis.clone()])?;
    let v = is_f_transitive(&p, &pb, family, horizon)?;
    Ok(renamed(v, &format!("{}-mixing", family.name())))
}

/// Transitivity of `T^{a_1} x ... x T^{a_k}`.
pub fn is_a_transitive(sys: &SystemMap, a: &[usize], basis: &OpenBasis, bounds: &Bounds) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let factors: Vec<(SystemMap, usize)> = a.iter().map(|&k| (sys.clone(), k)).collect();
    let p = product_system(&factors, bounds)?;
    let pb = OpenBasis::product(p.space(), &vec![basis.clone(); a.len()])?;
    let v = is_transitive(&p, &pb)?;
    let mut v = renamed(v, "a-transitivity");
    if let Value::Object(w) = &mut v.witnesses {
        w.insert("a".into(), json!(a));
    }
    Ok(v)
}

/// Transitivity of the product `T x S`.
pub fn weakly_disjoint(
    a: &SystemMap,
    b: &SystemMap,
    basis_a: &OpenBasis,
    basis_b: &OpenBasis,
    bounds: &Bounds,
) -> Result<Verdict> {
    check_basis(a, basis_a)?;
    check_basis(b, basis_b)?;
    let p = product_system(&[(a.clone(), 1), (b.clone(), 1)], bounds)?;
    let pb = OpenBasis::product(p.space(), &[basis_a.clone(), basis_b.clone()])?;
    Ok(renamed(is_transitive(&p, &pb)?, "weak_disjointness"))
}

/// Largest generator used for the difference-of-IP evidence sets.
const IP_EVIDENCE_MAX: usize = 8;
const IP_EVIDENCE_DEPTH: usize = 3;

/// Weak disjointness from every member of a catalog of transitive
/// systems. The verdict is catalog-relative: the quantifier over all
/// transitive systems cannot be exhausted.
pub fn is_mildly_mixing_bounded(
    sys: &SystemMap,
    basis: &OpenBasis,
    catalog: &[(String, SystemMap)],
    horizon: usize,
    bounds: &Bounds,
) -> Result<Verdict> {
    check_basis(sys, basis)?;
    if catalog.is_empty() {
        return Err(Error::invalid("mild mixing needs a nonempty catalog"));
    }
    let name = "mild_mixing";
    let mut partners = Vec::new();
    for (label, c) in catalog {
        let cb = OpenBasis::default_for(c.space());
        if !is_transitive(c, &cb)?.is_holds() {
            return Err(Error::invalid(format!("catalog member `{label}` is not transitive")));
        }
        let v = weakly_disjoint(sys, c, basis, &cb, bounds)?;
        if v.is_fails() {
            return Ok(Verdict::fails(
                name,
                Exactness::CatalogRelative,
                json!({ "partner": label, "product": v.counterexample() }),
            ));
        }
        partners.push(label.clone());
    }
    let evidence = ip_difference_evidence(sys, basis, horizon)?;
    Ok(Verdict::holds(
        name,
        Exactness::CatalogRelative,
        json!({
            "catalog": partners,
            "universal": "inconclusive: weak disjointness from all transitive systems is not finitely checkable",
            "ip_evidence": evidence,
        }),
    ))
}

/// Checks that each `N(U, V) ∩ [0, H)` meets the positive differences of
/// `FS(p_1, p_2, p_3)` for all `p_1 < p_2 < p_3 <= 8`.
fn ip_difference_evidence(sys: &SystemMap, basis: &OpenBasis, horizon: usize) -> Result<Value> {
    if basis.len() * basis.len() > 4096 {
        return Ok(json!({ "skipped": "basis too large" }));
    }
    let mut witnesses = Vec::new();
    for a in 1..=IP_EVIDENCE_MAX {
        for b in a + 1..=IP_EVIDENCE_MAX {
            for c in b + 1..=IP_EVIDENCE_MAX {
                let fs = fs_set(&[a, b, c], horizon)?;
                let d = difference_set(&fs);
                let positive = IndexSet::new(horizon, d.iter().filter(|&x| x > 0))?;
                witnesses.push(((a, b, c), positive));
            }
        }
    }
    for i in 0..basis.len() {
        let u = basis.open(i);
        let orbit = SetOrbit::of(sys, &u)?;
        for j in 0..basis.len() {
            let v = basis.open(j);
            let r = orbit.returns_to(&v).to_index_set(horizon);
            if let Some((g, _)) = witnesses.iter().find(|(_, d)| !r.meets(d)) {
                return Ok(json!({
                    "all_met": false,
                    "depth": IP_EVIDENCE_DEPTH,
                    "horizon": horizon,
                    "U": ids(sys.space(), &u),
                    "V": ids(sys.space(), &v),
                    "generators": [g.0, g.1, g.2],
                }));
            }
        }
    }
    Ok(json!({ "all_met": true, "depth": IP_EVIDENCE_DEPTH, "horizon": horizon, "sets": witnesses.len() }))
}

/// Points lying on a cycle of the transition graph.
pub fn periodic_points(sys: &SystemMap) -> PointSet {
    let n = sys.len();
    let mut out = PointSet::with_capacity(n);
    if sys.is_map() {
        let d = Decomposition::of(sys).expect("map");
        out.extend((0..n).filter(|&x| d.is_periodic(x)));
        return out;
    }
    // Kosaraju: a point is periodic iff its strong component has an edge.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, sys.successors(s), 0usize)];
        while let Some((x, succ, i)) = stack.last_mut() {
            if let Some(&y) = succ.get(*i) {
                *i += 1;
                if !seen[y] {
                    seen[y] = true;
                    let sy = sys.successors(y);
                    stack.push((y, sy, 0));
                }
            } else {
                order.push(*x);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            sys.for_each_predecessor(x, &mut |y| {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                }
            });
        }
        comps.push(members);
    }
    for members in &comps {
        let cyclic = members.len() > 1 || {
            let x = members[0];
            let mut self_loop = false;
            sys.for_each_successor(x, &mut |y| self_loop |= y == x);
            self_loop
        };
        if cyclic {
            out.extend(members.iter().copied());
        }
    }
    out
}

/// Every basis open contains a periodic point.
pub fn is_periodically_dense(sys: &SystemMap, basis: &OpenBasis) -> Result<Verdict> {
    check_basis(sys, basis)?;
    let exactness = exactness_of(sys.space());
    let per = periodic_points(sys);
    for i in 0..basis.len() {
        let u = basis.open(i);
        if u.is_disjoint(&per) {
            return Ok(Verdict::fails(
                "periodic_density",
                exactness,
                json!({ "U": ids(sys.space(), &u) }),
            ));
        }
    }
    Ok(Verdict::holds(
        "periodic_density",
        exactness,
        json!({ "periodic_points": per.count_ones(..) }),
    ))
}

/// Transitive with dense periodic points. Sensitivity is left out: it
/// follows from the other two on infinite spaces and always fails on
/// finite ones.
pub fn is_devaney(sys: &SystemMap, basis: &OpenBasis) -> Result<Verdict> {
    Ok(Verdict::and(
        "devaney",
        vec![is_transitive(sys, basis)?, is_periodically_dense(sys, basis)?],
    ))
}

/// Sensitive dependence at `eps`. Isolated points defeat it on every
/// finite table; truncated symbolic systems are inconclusive.
pub fn is_sensitive(sys: &SystemMap, eps: crate::Rational) -> Result<Verdict> {
    let name = "sensitivity";
    if let Some(resolution) = truncation(sys.space()) {
        return Ok(Verdict::inconclusive(
            name,
            Exactness::Truncated { resolution },
            "sensitivity concerns arbitrarily small cylinders, below the truncation",
        ));
    }
    let space = sys.space();
    let r = space
        .min_positive_distance()
        .unwrap_or_else(|| crate::Rational::from_integer(1));
    let ball = space.ball(0, r);
    Ok(Verdict::fails(
        name,
        Exactness::Exact,
        json!({
            "x": space.label(0),
            "radius": crate::rational::format(&r),
            "ball": space.labels_of(&ball),
            "eps": crate::rational::format(&eps),
        }),
    ))
}

/// `ω(x, T)`: the cycle the orbit of `x` falls into.
pub fn omega_limit(sys: &SystemMap, x: usize) -> Result<CompactSet> {
    let t = sys.require_map("omega_limit")?;
    if x >= t.len() {
        return Err(Error::invalid(format!("point {x} outside the space")));
    }
    let mut seen = vec![usize::MAX; t.len()];
    let mut orbit = Vec::new();
    let mut y = x;
    while seen[y] == usize::MAX {
        seen[y] = orbit.len();
        orbit.push(y);
        y = t[y] as usize;
    }
    CompactSet::from_indices(sys.space(), &orbit[seen[y]..])
}

/// Points with `x ∈ ω(x, T)`.
pub fn recurrent_points(sys: &SystemMap) -> Result<Vec<usize>> {
    sys.require_map("recurrent_points")?;
    Ok(periodic_points(sys).ones().collect())
}

/// Every tuple in `X^n` is recurrent under `T^{(n)}`.
pub fn is_n_rigid(sys: &SystemMap, n: usize, bounds: &Bounds) -> Result<Verdict> {
    sys.require_map("is_n_rigid")?;
    if n == 0 {
        return Err(Error::invalid("rigidity order must be positive"));
    }
    let p = power_system(sys, n, bounds)?;
    let d = Decomposition::of(&p)?;
    let name = format!("{n}-rigidity");
    match (0..p.len()).find(|&x| !d.is_periodic(x)) {
        Some(x) => Ok(Verdict::fails(
            &name,
            Exactness::Exact,
            json!({ "tuple": p.space().label(x), "steps_to_cycle": d.depth[x] }),
        )),
        None => Ok(Verdict::holds(&name, Exactness::Exact, json!({ "tuples": p.len() }))),
    }
}

/// `n`-rigidity for each `n <= n_max`.
pub fn is_weakly_rigid_upto(sys: &SystemMap, n_max: usize, bounds: &Bounds) -> Result<Verdict> {
    let t = sys.require_map("is_weakly_rigid_upto")?;
    let mut image = vec![false; t.len()];
    for &y in t {
        image[y as usize] = true;
    }
    let bijection = image.iter().all(|&b| b);
    for n in 1..=n_max {
        let v = is_n_rigid(sys, n, bounds)?;
        if v.is_fails() {
            return Ok(Verdict::fails(
                "weak_rigidity",
                Exactness::Exact,
                json!({ "n": n, "counterexample": v.counterexample() }),
            ));
        }
    }
    Ok(Verdict::holds(
        "weak_rigidity",
        Exactness::Horizon { h: n_max },
        json!({ "checked_up_to": n_max, "bijection": bijection }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::spaces::{make_full_shift, make_grid_interval_map, make_multiply, make_rotation, PiecewiseLinear, Snap};

    fn sing(s: &SystemMap) -> OpenBasis {
        OpenBasis::singletons(s.space())
    }

    #[test]
    fn transitivity_examples() {
        let one = make_rotation(1, 0).unwrap();
        assert!(is_transitive(&one, &sing(&one)).unwrap().is_holds());
        let r = make_rotation(5, 1).unwrap();
        assert!(is_transitive(&r, &sing(&r)).unwrap().is_holds());
        let r = make_rotation(6, 2).unwrap();
        let v = is_transitive(&r, &sing(&r)).unwrap();
        assert_eq!(v.counterexample().unwrap(), &json!({ "U": ["1"], "V": ["0"] }));
        let m = make_multiply(8, 2).unwrap();
        assert!(is_transitive(&m, &sing(&m)).unwrap().is_fails());
    }

    #[test]
    fn weak_mixing_methods() {
        let b = Bounds::default();
        for n in 1..=6 {
            let r = make_rotation(n, 1).unwrap();
            let p = is_weakly_mixing(&r, &sing(&r), WeakMixingMethod::Product, &b).unwrap();
            let l = is_weakly_mixing(&r, &sing(&r), WeakMixingMethod::ReturnIntersection, &b).unwrap();
            assert_eq!(p.value(), Some(n == 1));
            assert_eq!(l.value(), Some(n == 1));
        }
        let s = make_full_shift(2, 3).unwrap();
        let basis = OpenBasis::default_for(s.space());
        for m in [WeakMixingMethod::Product, WeakMixingMethod::ReturnIntersection] {
            let v = is_weakly_mixing(&s, &basis, m, &b).unwrap();
            assert!(v.is_holds());
            assert_eq!(v.exactness, Exactness::Truncated { resolution: 3 });
        }
    }

    #[test]
    fn mixing_examples() {
        let one = make_rotation(1, 0).unwrap();
        assert!(is_mixing(&one, &sing(&one)).unwrap().is_holds());
        let r = make_rotation(2, 1).unwrap();
        assert!(is_mixing(&r, &sing(&r)).unwrap().is_fails());
        let s = make_full_shift(2, 3).unwrap();
        let v = is_mixing(&s, &OpenBasis::default_for(s.space())).unwrap();
        assert!(v.is_holds());
        assert!(v.witnesses["max_witness"].as_u64().unwrap() <= 3);
    }

    #[test]
    fn family_transitivity() {
        let r = make_rotation(5, 1).unwrap();
        let syn = FamilyClassifier::parse("syndetic").unwrap();
        assert!(is_f_transitive(&r, &sing(&r), &syn, 40).unwrap().is_holds());
        let thick = FamilyClassifier::parse("thick").unwrap();
        assert!(is_f_transitive(&r, &sing(&r), &thick, 40).unwrap().is_fails());
        let one = make_rotation(1, 0).unwrap();
        let inf = FamilyClassifier::Infinite;
        assert!(is_f_transitive(&one, &sing(&one), &inf, 40).unwrap().is_holds());
        let s = make_full_shift(2, 2).unwrap();
        let sb = OpenBasis::default_for(s.space());
        assert!(is_f_transitive(&s, &sb, &thick, 40).unwrap().is_holds());
        assert!(is_f_mixing(&s, &sb, &thick, 40, &Bounds::default()).unwrap().is_holds());
    }

    #[test]
    fn a_transitivity_and_disjointness() {
        let b = Bounds::default();
        let r3 = make_rotation(3, 1).unwrap();
        assert!(is_a_transitive(&r3, &[1], &sing(&r3), &b).unwrap().is_holds());
        assert!(is_a_transitive(&r3, &[1, 2], &sing(&r3), &b).unwrap().is_fails());
        let s = make_full_shift(2, 3).unwrap();
        let sb = OpenBasis::default_for(s.space());
        assert!(weakly_disjoint(&s, &r3, &sb, &sing(&r3), &b).unwrap().is_holds());
        let r2 = make_rotation(2, 1).unwrap();
        assert!(weakly_disjoint(&r2, &r2, &sing(&r2), &sing(&r2), &b)
            .unwrap()
            .is_fails());
        let one = make_rotation(1, 0).unwrap();
        assert!(weakly_disjoint(&r3, &one, &sing(&r3), &sing(&one), &b)
            .unwrap()
            .is_holds());
    }

    #[test]
    fn mild_mixing_against_catalog() {
        let b = Bounds::default();
        let catalog: Vec<(String, SystemMap)> = (2..=4)
            .map(|n| (format!("rotation:{n},1"), make_rotation(n, 1).unwrap()))
            .collect();
        let r2 = make_rotation(2, 1).unwrap();
        let v = is_mildly_mixing_bounded(&r2, &sing(&r2), &catalog, 64, &b).unwrap();
        assert!(v.is_fails());
        assert_eq!(v.exactness, Exactness::CatalogRelative);
        let one = make_rotation(1, 0).unwrap();
        let v = is_mildly_mixing_bounded(&one, &sing(&one), &catalog, 64, &b).unwrap();
        assert!(v.is_holds());
        assert_eq!(v.witnesses["ip_evidence"]["all_met"], true);
    }

    #[test]
    fn periodic_density_and_omega() {
        let half = make_grid_interval_map(&PiecewiseLinear::named("half").unwrap(), 8, Snap::Down).unwrap();
        assert!(is_periodically_dense(&half, &sing(&half)).unwrap().is_fails());
        let r = make_rotation(5, 2).unwrap();
        assert!(is_periodically_dense(&r, &sing(&r)).unwrap().is_holds());
        let one = half.space().index_of("1").unwrap();
        let w = omega_limit(&half, one).unwrap();
        assert_eq!(w.ids(), vec!["0"]);
        assert_eq!(
            recurrent_points(&half).unwrap(),
            vec![half.space().index_of("0").unwrap()]
        );
        let s = make_full_shift(2, 3).unwrap();
        assert_eq!(periodic_points(&s).count_ones(..), 8);
        assert!(omega_limit(&s, 0).is_err());
        assert!(is_sensitive(&r, rat(1, 5)).unwrap().is_fails());
        assert!(is_sensitive(&s, rat(1, 5)).unwrap().value().is_none());
    }

    #[test]
    fn rigidity_orders() {
        let b = Bounds::default();
        let r = make_rotation(5, 1).unwrap();
        assert!(is_n_rigid(&r, 2, &b).unwrap().is_holds());
        let half = make_grid_interval_map(&PiecewiseLinear::named("half").unwrap(), 8, Snap::Down).unwrap();
        assert!(is_n_rigid(&half, 1, &b).unwrap().is_fails());
        let v = is_weakly_rigid_upto(&r, 3, &b).unwrap();
        assert!(v.is_holds());
        assert_eq!(v.witnesses["bijection"], true);
    }
}
