use serde::{Deserialize, Serialize};

use super::metric::MetricSpace;
use super::spec::SystemSpec;
use super::system::{Csr, Dynamics, SystemMap};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::PointSet;

/// One factor of a product system in the JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductFactor {
    pub system: SystemSpec,
    pub exponent: usize,
}

/// `T_1^{a_1} x ... x T_n^{a_n}` on the product space with the max metric.
///
/// Products of point maps are materialized as tables; products with a
/// relational factor are explored lazily.
pub fn product_system(factors: &[(SystemMap, usize)], bounds: &Bounds) -> Result<SystemMap> {
    if factors.is_empty() {
        return Err(Error::invalid("product of zero factors"));
    }
    if factors.iter().any(|(_, e)| *e == 0) {
        return Err(Error::invalid("product exponents must be positive"));
    }
    let states = factors
        .iter()
        .try_fold(1u128, |acc, (s, _)| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    bounds.check_product(states)?;

    let powered = factors
        .iter()
        .map(|(s, e)| iterate(s, *e))
        .collect::<Result<Vec<_>>>()?;
    let space = MetricSpace::product(powered.iter().map(|s| s.space().clone()).collect());
    let spec = SystemSpec::Product {
        factors: factors
            .iter()
            .map(|(s, e)| ProductFactor {
                system: s.spec().clone(),
                exponent: *e,
            })
            .collect(),
    };
    if powered.iter().all(|s| s.is_map()) {
        let tables: Vec<&[u32]> = powered.iter().map(|s| s.table().unwrap()).collect();
        let table = (0..space.len())
            .map(|i| {
                let c: Vec<usize> = space
                    .coordinates(i)
                    .into_iter()
                    .zip(&tables)
                    .map(|(x, t)| t[x] as usize)
                    .collect();
                space.encode(&c)
            })
            .collect();
        SystemMap::with_spec(space, table, spec)
    } else {
        Ok(SystemMap::lazy_product(space, powered, spec))
    }
}

/// The `n`-fold product `T x ... x T`.
pub fn power_system(sys: &SystemMap, n: usize, bounds: &Bounds) -> Result<SystemMap> {
    let factors = vec![(sys.clone(), 1); n];
    product_system(&factors, bounds)
}

/// `T^k` on the same space; `T^0` is the identity.
pub fn iterate(sys: &SystemMap, k: usize) -> Result<SystemMap> {
    if k == 1 {
        return Ok(sys.clone());
    }
    let spec = SystemSpec::Iterate {
        base: Box::new(sys.spec().clone()),
        k,
    };
    let space = sys.space().clone();
    match sys.dynamics() {
        Dynamics::Map { table, .. } => SystemMap::with_spec(space, power_table(table, k), spec),
        Dynamics::Relation { .. } => {
            let rows = (0..sys.len()).map(|x| {
                let mut cur = sys.space().singleton(x);
                for _ in 0..k {
                    cur = sys.image_set(&cur);
                }
                cur.ones().collect::<Vec<_>>()
            });
            SystemMap::from_relation(space, Csr::from_rows(rows), spec)
        }
        Dynamics::Product { factors } => {
            let f = factors.iter().map(|s| iterate(s, k)).collect::<Result<Vec<_>>>()?;
            Ok(SystemMap::lazy_product(space, f, spec))
        }
    }
}

/// `t^k` by repeated squaring.
pub(crate) fn power_table(t: &[u32], mut k: usize) -> Vec<usize> {
    let mut result: Vec<u32> = (0..t.len() as u32).collect();
    let mut base = t.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            result = result.iter().map(|&x| base[x as usize]).collect();
        }
        k >>= 1;
        if k > 0 {
            base = base.iter().map(|&x| base[x as usize]).collect();
        }
    }
    result.into_iter().map(|x| x as usize).collect()
}

/// `T^n(S)` for every `n < count`, starting with `S` itself.
pub fn image_iterates(sys: &SystemMap, set: &PointSet, count: usize) -> Vec<PointSet> {
    let mut out = Vec::with_capacity(count);
    let mut cur = set.clone();
    for _ in 0..count {
        let next = sys.image_set(&cur);
        out.push(cur);
        cur = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::generators::{make_full_shift, make_multiply, make_rotation};

    #[test]
    fn exponents_compose() {
        let r = make_rotation(4, 1).unwrap();
        let p = product_system(&[(r.clone(), 1), (r, 2)], &Bounds::default()).unwrap();
        let sp = p.space();
        let x = sp.encode(&[0, 0]);
        let y = p.apply(x);
        assert_eq!(sp.coordinates(y), vec![1, 2]);
        assert_eq!(sp.coordinates(p.apply(y)), vec![2, 0]);
        assert_eq!(sp.label(y), "(1,2)");
    }

    #[test]
    fn iterate_of_order() {
        let t = make_multiply(9, 2).unwrap();
        let id = iterate(&t, 6).unwrap();
        assert!((0..9).all(|x| id.apply(x) == x));
        assert!(iterate(&t, 0)
            .unwrap()
            .table()
            .unwrap()
            .iter()
            .enumerate()
            .all(|(i, &y)| i == y as usize));
    }

    #[test]
    fn relational_iterate_reaches_all_continuations() {
        let s = make_full_shift(2, 3).unwrap();
        let s3 = iterate(&s, 3).unwrap();
        assert!((0..8).all(|x| s3.successors(x).len() == 8));
    }

    #[test]
    fn lazy_product_successors() {
        let s = make_full_shift(2, 2).unwrap();
        let r = make_rotation(3, 1).unwrap();
        let p = product_system(&[(s, 1), (r, 1)], &Bounds::default()).unwrap();
        assert!(!p.is_map());
        assert_eq!(p.len(), 12);
        let x = p.space().encode(&[0, 0]);
        let succ: Vec<Vec<usize>> = p.successors(x).into_iter().map(|y| p.space().coordinates(y)).collect();
        assert_eq!(succ, vec![vec![0, 1], vec![1, 1]]);
        for y in p.successors(x) {
            assert!(p.predecessors(y).contains(&x));
        }
    }

    #[test]
    fn product_bound_is_enforced() {
        let r = make_rotation(64, 1).unwrap();
        let tight = Bounds {
            max_product_states: 100,
            ..Bounds::default()
        };
        assert!(matches!(
            product_system(&[(r.clone(), 1), (r, 1)], &tight),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
