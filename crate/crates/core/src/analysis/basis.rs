use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::spaces::{Kind, MetricSpace};
use crate::PointSet;

/// The opens over which transitivity-type quantifiers range.
#[derive(Clone, Debug)]
pub struct OpenBasis {
    n: usize,
    kind: BasisKind,
    provenance: String,
}

#[derive(Clone, Debug)]
enum BasisKind {
    /// Every `{x}`; on a finite space these are the balls of radius half
    /// the minimum positive distance.
    Singletons,
    Sets(Vec<PointSet>),
}

/// A basis request that can be resolved against any space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisSpec {
    /// Cylinders up to the resolution on symbolic spaces, singletons
    /// everywhere else.
    Default,
    Singletons,
    Balls(Rational),
    Cylinders(usize),
}

impl BasisSpec {
    /// `default`, `singletons`, `balls:1/4`, `cylinders:2`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "default" => Ok(BasisSpec::Default),
            None if s == "singletons" => Ok(BasisSpec::Singletons),
            Some(("balls", r)) => Ok(BasisSpec::Balls(rational::parse(r)?)),
            Some(("cylinders", k)) => k
                .parse()
                .map(BasisSpec::Cylinders)
                .map_err(|_| Error::invalid(format!("bad cylinder length `{k}`"))),
            _ => Err(Error::invalid(format!("unknown basis `{s}`"))),
        }
    }

    pub fn resolve(&self, space: &MetricSpace) -> Result<OpenBasis> {
        match self {
            BasisSpec::Default => Ok(OpenBasis::default_for(space)),
            BasisSpec::Singletons => Ok(OpenBasis::singletons(space)),
            BasisSpec::Balls(r) => OpenBasis::balls(space, *r),
            BasisSpec::Cylinders(k) => OpenBasis::cylinders(space, *k),
        }
    }
}

impl OpenBasis {
    pub fn singletons(space: &MetricSpace) -> Self {
        let provenance = match space.min_positive_distance() {
            Some(d) if space.is_table() => format!(
                "balls of radius {} (singletons)",
                rational::label(&(d / Rational::from_integer(2)))
            ),
            _ => "singletons".into(),
        };
        OpenBasis {
            n: space.len(),
            kind: BasisKind::Singletons,
            provenance,
        }
    }

    /// All open balls `B(x, r)`.
    pub fn balls(space: &MetricSpace, r: Rational) -> Result<Self> {
        if r <= Rational::from_integer(0) {
            return Err(Error::invalid("ball radius must be positive"));
        }
        let mut opens: Vec<PointSet> = (0..space.len()).map(|x| space.ball(x, r)).collect();
        opens.sort_by_key(|s| s.ones().collect::<Vec<_>>());
        opens.dedup();
        Ok(OpenBasis {
            n: space.len(),
            kind: BasisKind::Sets(opens),
            provenance: format!("balls of radius {}", rational::label(&r)),
        })
    }

    /// Cylinders `[w]` for every allowed word of length `1..=k`.
    pub fn cylinders(space: &MetricSpace, k: usize) -> Result<Self> {
        let info = space
            .word_info()
            .ok_or_else(|| Error::invalid("cylinders need a symbolic space"))?;
        if k == 0 || k > info.resolution {
            return Err(Error::invalid(format!(
                "cylinder length must be in 1..={}",
                info.resolution
            )));
        }
        let mut opens = Vec::new();
        for len in 1..=k {
            let mut prefixes: Vec<&[u8]> = info.words.iter().map(|w| &w[..len]).collect();
            prefixes.sort();
            prefixes.dedup();
            for p in prefixes {
                let mut s = PointSet::with_capacity(space.len());
                s.extend((0..space.len()).filter(|&i| info.words[i].starts_with(p)));
                opens.push(s);
            }
        }
        Ok(OpenBasis {
            n: space.len(),
            kind: BasisKind::Sets(opens),
            provenance: format!("cylinders of length 1..={k}"),
        })
    }

    pub fn default_for(space: &MetricSpace) -> Self {
        match space.word_info() {
            Some(info) => Self::cylinders(space, info.resolution).expect("valid length"),
            None => Self::singletons(space),
        }
    }

    /// Explicit opens; each must be nonempty and together they must cover.
    pub fn custom(space: &MetricSpace, opens: Vec<PointSet>, provenance: &str) -> Result<Self> {
        let n = space.len();
        let mut cover = PointSet::with_capacity(n);
        for u in &opens {
            if u.is_clear() {
                return Err(Error::invalid("basis opens must be nonempty"));
            }
            if u.ones().any(|x| x >= n) {
                return Err(Error::invalid("basis open outside the space"));
            }
            cover.union_with(u);
        }
        if cover.count_ones(..) != n {
            return Err(Error::invalid("basis does not cover the space"));
        }
        Ok(OpenBasis {
            n,
            kind: BasisKind::Sets(opens),
            provenance: provenance.into(),
        })
    }

    /// Products `U_1 x ... x U_k` on a product space.
    pub fn product(space: &MetricSpace, factors: &[OpenBasis]) -> Result<Self> {
        let spaces = space
            .factors()
            .ok_or_else(|| Error::invalid("product basis on a non-product space"))?;
        if spaces.len() != factors.len() || spaces.iter().zip(factors).any(|(s, b)| s.len() != b.n) {
            return Err(Error::invalid("factor bases do not match the product"));
        }
        let provenance = format!(
            "products of ({})",
            factors
                .iter()
                .map(|b| b.provenance.as_str())
                .collect::<Vec<_>>()
                .join(") x (")
        );
        if factors.iter().all(|b| b.is_singletons()) {
            return Ok(OpenBasis {
                n: space.len(),
                kind: BasisKind::Singletons,
                provenance,
            });
        }
        let count: u128 = factors.iter().map(|b| b.len() as u128).product();
        if count > 1 << 20 {
            return Err(Error::BoundExceeded {
                what: "product basis",
                requested: count,
                limit: 1 << 20,
            });
        }
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for b in factors {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    (0..b.len()).map(move |i| {
                        let mut c = c.clone();
                        c.push(i);
                        c
                    })
                })
                .collect();
        }
        let sets = combos
            .into_iter()
            .map(|c| {
                let members: Vec<Vec<usize>> = c
                    .iter()
                    .zip(factors)
                    .map(|(&i, b)| b.open(i).ones().collect())
                    .collect();
                let mut s = PointSet::with_capacity(space.len());
                let mut idx = vec![0usize; members.len()];
                'outer: loop {
                    let coords: Vec<usize> = idx.iter().zip(&members).map(|(&i, m)| m[i]).collect();
                    s.insert(space.encode(&coords));
                    for k in 0..idx.len() {
                        idx[k] += 1;
                        if idx[k] < members[k].len() {
                            continue 'outer;
                        }
                        idx[k] = 0;
                    }
                    break;
                }
                s
            })
            .collect();
        Ok(OpenBasis {
            n: space.len(),
            kind: BasisKind::Sets(sets),
            provenance,
        })
    }

    pub fn is_singletons(&self) -> bool {
        matches!(self.kind, BasisKind::Singletons)
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            BasisKind::Singletons => self.n,
            BasisKind::Sets(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn space_len(&self) -> usize {
        self.n
    }

    pub fn open(&self, i: usize) -> PointSet {
        match &self.kind {
            BasisKind::Singletons => {
                let mut s = PointSet::with_capacity(self.n);
                s.insert(i);
                s
            }
            BasisKind::Sets(s) => s[i].clone(),
        }
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Point ids of open `i`, for witnesses.
    pub fn describe(&self, space: &MetricSpace, i: usize) -> Value {
        json!(space.labels_of(&self.open(i)))
    }
}

/// Word length at which a space is truncated, if it is symbolic or built
/// from a symbolic space.
pub fn truncation(space: &MetricSpace) -> Option<usize> {
    match space.kind() {
        Kind::Table { .. } => space.word_info().map(|w| w.resolution),
        Kind::Hyperspace { base, .. } | Kind::Fuzzy { base, .. } => truncation(base),
        Kind::Product { factors } => factors.iter().filter_map(truncation).max(),
    }
}
