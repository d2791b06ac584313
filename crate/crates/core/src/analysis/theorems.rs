use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::basis::{BasisSpec, OpenBasis};
use super::catalog::{mild_mixing_catalog, THEOREMS};
use super::metric_props::{diam_reaches_zero, equicontinuity, is_proximal, is_uniformly_rigid};
use super::topo::{
    is_a_transitive, is_devaney, is_f_mixing, is_f_transitive, is_mildly_mixing_bounded, is_mixing,
    is_periodically_dense, is_transitive, is_weakly_mixing, WeakMixingMethod,
};
use super::verdict::{Exactness, Verdict};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::families::FamilyClassifier;
use crate::fuzzy::{
    embed_indicator, fuzzy_at, fuzzy_index, fuzzy_lift_system, g_fuzzify_apply, xi_of, Constraint, FuzzySet, GFunction,
    LevelGrid,
};
use crate::hyperspace::{compact_at, lift_system};
use crate::rational::{self, Rational};
use crate::spaces::{eventual_period, SystemMap};
use crate::PointSet;

/// Settings shared by every theorem check.
#[derive(Clone, Debug)]
pub struct TheoremConfig {
    /// Grid size of the fuzzy lifts.
    pub m: u8,
    /// Heights `λ` to check; all positive grid levels when `None`.
    pub lambdas: Option<Vec<Rational>>,
    /// Horizon for index-set classification of custom families and the
    /// difference-of-IP evidence.
    pub horizon: usize,
    /// Basis of the base system; lifts always use singletons.
    pub basis: BasisSpec,
    pub family: FamilyClassifier,
    pub a: Vec<usize>,
    /// Defaults to half the smallest positive base distance.
    pub eps: Option<Rational>,
    pub g: Option<GFunction>,
    pub seed: u64,
    /// Random fuzzy sets per sampled check.
    pub samples: usize,
    pub bounds: Bounds,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            m: 2,
            lambdas: None,
            horizon: 64,
            basis: BasisSpec::Default,
            family: FamilyClassifier::Thick { min_run: None },
            a: vec![1, 2],
            eps: None,
            g: None,
            seed: 0,
            samples: 200,
            bounds: Bounds::default(),
        }
    }
}

impl TheoremConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "lambdas": self.lambdas.as_ref().map(|l| l.iter().map(rational::format).collect::<Vec<_>>()),
            "horizon": self.horizon,
            "basis": format!("{:?}", self.basis),
            "family": self.family.name(),
            "a": self.a,
            "eps": self.eps.map(|e| rational::format(&e)),
            "g": self.g.as_ref().map(|g| serde_json::to_value(g).expect("serializable")),
            "seed": self.seed,
            "samples": self.samples,
            "bounds": {
                "max_base_points": self.bounds.max_base_points,
                "max_fuzzy_states": self.bounds.max_fuzzy_states.to_string(),
                "max_product_states": self.bounds.max_product_states.to_string(),
            },
        })
    }
}

/// Where an item is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Base,
    Hyper,
    /// `F^{=λ}`.
    Fuzzy(Rational),
    /// `F^{≥λ}`.
    FuzzyGe(Rational),
    /// `F_0`.
    Fuzzy0,
    /// Every grade function, the empty one included.
    FuzzyAll,
}

impl Level {
    pub fn name(&self) -> String {
        match self {
            Level::Base => "base".into(),
            Level::Hyper => "hyper".into(),
            Level::Fuzzy(l) => format!("fuzzy({})", rational::label(l)),
            Level::FuzzyGe(l) => format!("fuzzy_ge({})", rational::label(l)),
            Level::Fuzzy0 => "fuzzy_0".into(),
            Level::FuzzyAll => "fuzzy_all".into(),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemRow {
    /// Position in the equivalence list, e.g. `(2)`.
    pub item: String,
    pub level: Level,
    pub property: String,
    pub verdict: Verdict,
    /// For side claims: the value the theory predicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
}

/// Two decisive verdicts that the theory says must agree, but do not.
#[derive(Clone, Debug, Serialize)]
pub struct RedAlert {
    pub first: String,
    pub second: String,
    pub replay: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub theorem: String,
    pub statement: String,
    pub system: Value,
    pub config: Value,
    pub items: Vec<ItemRow>,
    /// Side claims with a predicted value, and informational rows.
    pub extras: Vec<ItemRow>,
    /// `matrix[i][j]`: whether items `i` and `j` agree, `None` if either is
    /// inconclusive.
    pub matrix: Vec<Vec<Option<bool>>>,
    /// All conclusive items agree and every side claim matches.
    pub consistent: bool,
    pub red_alert: Option<RedAlert>,
    pub notes: Vec<String>,
}

impl EquivalenceReport {
    pub fn rows(&self) -> impl Iterator<Item = &ItemRow> {
        self.items.iter().chain(&self.extras)
    }
}

/// Caches the lifts of one base system.
struct Ctx<'a> {
    sys: &'a SystemMap,
    cfg: &'a TheoremConfig,
    grid: LevelGrid,
    lambdas: Vec<Rational>,
    base_basis: OpenBasis,
    lifts: RefCell<HashMap<Level, SystemMap>>,
}

impl<'a> Ctx<'a> {
    fn new(sys: &'a SystemMap, cfg: &'a TheoremConfig) -> Result<Self> {
        let grid = LevelGrid::new(cfg.m)?;
        let lambdas = match &cfg.lambdas {
            None => grid.levels(),
            Some(ls) => {
                for l in ls {
                    if grid.index_of(*l).is_none_or(|j| j == 0) {
                        return Err(Error::invalid(format!(
                            "λ = {} is not a positive level of the grid of size {}",
                            rational::label(l),
                            cfg.m
                        )));
                    }
                }
                ls.clone()
            }
        };
        Ok(Ctx {
            sys,
            cfg,
            grid,
            lambdas,
            base_basis: cfg.basis.resolve(sys.space())?,
            lifts: RefCell::new(HashMap::new()),
        })
    }

    fn lift(&self, level: &Level) -> Result<SystemMap> {
        if *level == Level::Base {
            return Ok(self.sys.clone());
        }
        if let Some(s) = self.lifts.borrow().get(level) {
            return Ok(s.clone());
        }
        let b = &self.cfg.bounds;
        let s = match level {
            Level::Base => unreachable!(),
            Level::Hyper => lift_system(self.sys, b)?,
            Level::Fuzzy(l) => fuzzy_lift_system(self.sys, &self.grid, Constraint::height_eq(*l), None, b)?,
            Level::FuzzyGe(l) => fuzzy_lift_system(self.sys, &self.grid, Constraint::height_at_least(*l), None, b)?,
            Level::Fuzzy0 => fuzzy_lift_system(self.sys, &self.grid, Constraint::Nonempty, None, b)?,
            Level::FuzzyAll => fuzzy_lift_system(self.sys, &self.grid, Constraint::All, None, b)?,
        };
        self.lifts.borrow_mut().insert(level.clone(), s.clone());
        Ok(s)
    }

    fn basis(&self, level: &Level, sys: &SystemMap) -> OpenBasis {
        match level {
            Level::Base => self.base_basis.clone(),
            _ => OpenBasis::singletons(sys.space()),
        }
    }

    /// Evaluates one row; unsupported backends give an inconclusive row.
    fn row(
        &self,
        item: &str,
        level: Level,
        property: &str,
        f: impl FnOnce(&SystemMap, &OpenBasis) -> Result<Verdict>,
    ) -> Result<ItemRow> {
        let verdict = match self.lift(&level).and_then(|s| {
            let b = self.basis(&level, &s);
            f(&s, &b)
        }) {
            Ok(v) => v,
            Err(Error::Backend(msg)) => {
                Verdict::inconclusive(property, super::topo::exactness_of(self.sys.space()), msg)
            }
            Err(e) => return Err(e),
        };
        Ok(ItemRow {
            item: item.into(),
            level,
            property: property.into(),
            verdict,
            expected: None,
        })
    }

    /// The same property at `F^{=λ}` for every `λ`.
    fn per_lambda(
        &self,
        item: &str,
        property: &str,
        f: impl Fn(&SystemMap, &OpenBasis) -> Result<Verdict>,
    ) -> Result<Vec<ItemRow>> {
        self.lambdas
            .iter()
            .map(|l| self.row(item, Level::Fuzzy(*l), property, &f))
            .collect()
    }

    fn default_eps(&self) -> Rational {
        self.cfg.eps.unwrap_or_else(|| {
            self.sys
                .space()
                .min_positive_distance()
                .map_or_else(|| Rational::from_integer(1), |d| d / Rational::from_integer(2))
        })
    }
}

fn expect(mut row: ItemRow, value: bool) -> ItemRow {
    row.expected = Some(value);
    row
}

/// Evaluates every item of a theorem's equivalence list on `sys`, its
/// hyperspace lift, and its fuzzy lifts, and cross-checks the verdicts.
pub fn verify_theorem(id: &str, sys: &SystemMap, cfg: &TheoremConfig) -> Result<EquivalenceReport> {
    let statement = THEOREMS
        .iter()
        .find(|(t, _)| *t == id)
        .map(|(_, s)| s.to_string())
        .ok_or_else(|| Error::UnknownTheorem(id.into()))?;
    let ctx = Ctx::new(sys, cfg)?;
    let b = &cfg.bounds;
    let mut items = Vec::new();
    let mut extras = Vec::new();
    let mut notes = Vec::new();
    // Whether disagreements among decisive items indicate a bug.
    let mut alerts_apply = true;
    let n = sys.len();

    match id {
        "transitivity" => {
            items.push(ctx.row("(1)", Level::Base, "weak_mixing", |s, bs| {
                is_weakly_mixing(s, bs, WeakMixingMethod::Product, b)
            })?);
            items.push(ctx.row("(2)", Level::Hyper, "transitivity", is_transitive)?);
            items.push(ctx.row("(3)", Level::Hyper, "weak_mixing", |s, bs| {
                is_weakly_mixing(s, bs, WeakMixingMethod::ReturnIntersection, b)
            })?);
            items.extend(ctx.per_lambda("(4)", "transitivity", is_transitive)?);
            items.extend(ctx.per_lambda("(5)", "weak_mixing", |s, bs| {
                is_weakly_mixing(s, bs, WeakMixingMethod::ReturnIntersection, b)
            })?);
            notes.push("weak mixing of lifts uses the N(U,U) ∩ N(U,V) criterion".into());
        }
        "mixing" => {
            items.push(ctx.row("(1)", Level::Base, "mixing", is_mixing)?);
            items.push(ctx.row("(2)", Level::Hyper, "mixing", is_mixing)?);
            items.extend(ctx.per_lambda("(3)", "mixing", is_mixing)?);
        }
        "f-mixing" => {
            let f = &cfg.family;
            let h = cfg.horizon;
            let fname = f.name();
            items.push(ctx.row("(1)", Level::Base, &format!("{fname}-mixing"), |s, bs| {
                is_f_mixing(s, bs, f, h, b)
            })?);
            items.push(ctx.row("(2)", Level::Hyper, &format!("{fname}-transitivity"), |s, bs| {
                is_f_transitive(s, bs, f, h)
            })?);
            items.push(ctx.row("(3)", Level::Hyper, &format!("{fname}-mixing"), |s, bs| {
                is_f_mixing(s, bs, f, h, b)
            })?);
            items.extend(ctx.per_lambda("(4)/(6)", &format!("{fname}-transitivity"), |s, bs| {
                is_f_transitive(s, bs, f, h)
            })?);
            items.extend(ctx.per_lambda("(5)/(7)", &format!("{fname}-mixing"), |s, bs| {
                is_f_mixing(s, bs, f, h, b)
            })?);
            if !f.is_builtin() {
                notes.push("custom family: fullness is not verified".into());
            }
        }
        "devaney" => {
            items.push(ctx.row("(1)", Level::Hyper, "devaney", is_devaney)?);
            items.extend(ctx.per_lambda("(2)", "devaney", is_devaney)?);
            extras.push(ctx.row("base", Level::Base, "devaney", is_devaney)?);
            notes.push("Devaney chaos is checked as transitivity plus dense periodic points".into());
        }
        "mild-mixing" => {
            let catalog = mild_mixing_catalog(b)?;
            let h = cfg.horizon;
            let f = |s: &SystemMap, bs: &OpenBasis| is_mildly_mixing_bounded(s, bs, &catalog, h, b);
            items.push(ctx.row("(1)", Level::Base, "mild_mixing", f)?);
            items.push(ctx.row("(2)", Level::Hyper, "mild_mixing", f)?);
            items.extend(ctx.per_lambda("(3)/(4)", "mild_mixing", f)?);
            notes.push("mild mixing is catalog-relative; agreement is evidence, not proof".into());
        }
        "a-transitivity" => {
            let a = &cfg.a;
            if a.is_empty() || a.contains(&0) {
                return Err(Error::invalid("a must be a nonempty list of positive integers"));
            }
            items.push(ctx.row("(1)", Level::Base, "weak_mixing_and_a-transitivity", |s, bs| {
                Ok(Verdict::and(
                    "weak_mixing_and_a-transitivity",
                    vec![
                        is_weakly_mixing(s, bs, WeakMixingMethod::Product, b)?,
                        is_a_transitive(s, a, bs, b)?,
                    ],
                ))
            })?);
            items.push(ctx.row("(2)", Level::Hyper, "a-transitivity", |s, bs| {
                is_a_transitive(s, a, bs, b)
            })?);
            items.extend(ctx.per_lambda("(3)/(4)", "a-transitivity", |s, bs| is_a_transitive(s, a, bs, b))?);
        }
        "equicontinuity" => {
            let eps = ctx.default_eps();
            let f = |s: &SystemMap, _: &OpenBasis| equicontinuity(s, eps);
            items.push(ctx.row("(1)", Level::Base, "equicontinuity", f)?);
            items.push(ctx.row("(2)", Level::Hyper, "equicontinuity", f)?);
            items.push(ctx.row("(3)", Level::Fuzzy0, "equicontinuity", f)?);
            notes.push(format!("ε = {}", rational::format(&eps)));
            notes.push("on a finite table every modulus is positive; δ(ε) is reported per level".into());
        }
        "uniform-rigidity" => {
            let eps = ctx.default_eps();
            let f = |s: &SystemMap, _: &OpenBasis| is_uniformly_rigid(s, eps);
            items.push(ctx.row("(1)", Level::Base, "uniform_rigidity", f)?);
            items.push(ctx.row("(2)", Level::Hyper, "uniform_rigidity", f)?);
            items.push(ctx.row("(3)", Level::Fuzzy0, "uniform_rigidity", f)?);
            items.extend(ctx.per_lambda("(4)/(6)", "uniform_rigidity", f)?);
            for l in &ctx.lambdas {
                items.push(ctx.row("(5)/(7)", Level::FuzzyGe(*l), "uniform_rigidity", f)?);
            }
            notes.push(format!("ε = {}", rational::format(&eps)));
            let mpd = sys.space().min_positive_distance();
            if mpd.is_some_and(|d| eps > d) {
                alerts_apply = false;
                notes.push(
                    "ε exceeds the smallest positive distance, so rows test ε-rigidity only; disagreements are not flagged"
                        .into(),
                );
            }
            let witnesses: Vec<&Value> = items
                .iter()
                .filter(|r| r.verdict.is_holds())
                .map(|r| &r.verdict.witnesses["n"])
                .collect();
            if !witnesses.is_empty() && witnesses.windows(2).all(|w| w[0] == w[1]) {
                notes.push(format!("common witness n = {}", witnesses[0]));
            }
        }
        "proximality" => {
            items.push(ctx.row("(1)", Level::Base, "diam_decay_to_zero", |s, _| diam_reaches_zero(s))?);
            items.push(ctx.row("(2)", Level::Hyper, "proximality", |s, _| is_proximal(s))?);
            items.extend(ctx.per_lambda("(3)", "proximality", |s, _| is_proximal(s))?);
            let row = ctx.row("F_0", Level::Fuzzy0, "proximality", |s, _| is_proximal(s))?;
            if cfg.m >= 2 && n >= 2 {
                extras.push(expect(row, false));
            } else {
                notes.push("with one grid level or one point F_0 has a single height; no obstruction".into());
                extras.push(row);
            }
        }
        "height-invariance" => {
            items.push(ctx.row("(1)", Level::FuzzyAll, "height_obstruction", |s, _| {
                height_obstruction(s, cfg)
            })?);
            if n >= 2 {
                extras.push(expect(
                    ctx.row("all", Level::FuzzyAll, "transitivity", is_transitive)?,
                    false,
                ));
                if cfg.m >= 2 {
                    extras.push(expect(
                        ctx.row("F_0", Level::Fuzzy0, "transitivity", is_transitive)?,
                        false,
                    ));
                    extras.push(expect(
                        ctx.row("F_0", Level::Fuzzy0, "proximality", |s, _| is_proximal(s))?,
                        false,
                    ));
                }
            }
        }
        "cut-lemma" => {
            items.push(ctx.row("(1)", Level::Base, "cut_commutation", |s, _| cut_lemma(s, cfg))?);
        }
        "conjugacy" => {
            for l in ctx.lambdas.clone() {
                items.push(ctx.row("(1)", Level::Fuzzy(l), "conjugacy_identity", |s, _| {
                    let hyper = ctx.lift(&Level::Hyper)?;
                    conjugacy(sys, &hyper, s, l, cfg)
                })?);
            }
        }
        "periodic-density" => {
            items.push(ctx.row("(1)", Level::Hyper, "periodic_density", is_periodically_dense)?);
            items.extend(ctx.per_lambda("(2)", "periodic_density", is_periodically_dense)?);
            extras.push(ctx.row("base", Level::Base, "periodic_density", is_periodically_dense)?);
        }
        _ => return Err(Error::UnknownTheorem(id.into())),
    }

    let values: Vec<Option<bool>> = items.iter().map(|r| r.verdict.value()).collect();
    let matrix = values
        .iter()
        .map(|a| values.iter().map(|b| Some((*a)? == (*b)?)).collect())
        .collect();
    let known: Vec<bool> = values.iter().flatten().copied().collect();
    let extras_ok = extras
        .iter()
        .all(|r| r.expected.is_none() || r.verdict.value().is_none() || r.verdict.value() == r.expected);
    let consistent = known.windows(2).all(|w| w[0] == w[1]) && extras_ok;

    let label = |r: &ItemRow| format!("{} {} {}", r.item, r.level.name(), r.property);
    let mut conflict = None;
    if alerts_apply {
        let decisive: Vec<&ItemRow> = items.iter().filter(|r| r.verdict.is_decisive()).collect();
        if let Some(w) = decisive
            .windows(2)
            .find(|w| w[0].verdict.value() != w[1].verdict.value())
        {
            conflict = Some((label(w[0]), label(w[1])));
        } else if let Some(r) = extras
            .iter()
            .find(|r| r.verdict.is_decisive() && r.expected.is_some() && r.verdict.value() != r.expected)
        {
            conflict = Some((label(r), format!("expected {}", r.expected.unwrap())));
        }
    }
    let system = serde_json::to_value(sys.spec())?;
    let red_alert = conflict.map(|(first, second)| RedAlert {
        first,
        second,
        replay: json!({
            "theorem": id,
            "system": system,
            "config": cfg.to_json(),
            "rows": items.iter().chain(&extras).collect::<Vec<_>>(),
        }),
    });
    Ok(EquivalenceReport {
        theorem: id.into(),
        statement,
        system,
        config: cfg.to_json(),
        items,
        extras,
        matrix,
        consistent,
        red_alert,
        notes,
    })
}

/// On the unconstrained lift, fuzzy sets of different heights stay at
/// distance `diam(X)` along all iterates. Exhaustive over pairs when the
/// lift is small, sampled otherwise.
fn height_obstruction(lift: &SystemMap, cfg: &TheoremConfig) -> Result<Verdict> {
    let name = "height_obstruction";
    let t = lift.require_map(name)?;
    let space = lift.space();
    let heights = (0..lift.len())
        .map(|i| Ok(fuzzy_at(space, i)?.height_index()))
        .collect::<Result<Vec<u8>>>()?;
    let diam = crate::fuzzy::fuzzy_base(space).expect("fuzzy lift").0.diam();
    let (pre, per) = eventual_period(lift)?;
    let steps = pre + per;
    let check = |a: usize, b: usize| -> Option<Value> {
        let (mut x, mut y) = (a, b);
        for k in 0..=steps {
            let d = space.dist(x, y);
            if d != diam {
                return Some(json!({
                    "A": space.label(a),
                    "B": space.label(b),
                    "n": k,
                    "distance": rational::format(&d),
                    "diam": rational::format(&diam),
                }));
            }
            x = t[x] as usize;
            y = t[y] as usize;
        }
        None
    };
    let n = lift.len();
    const EXHAUSTIVE_PAIRS: usize = 4_000_000;
    if n * n / 2 <= EXHAUSTIVE_PAIRS {
        let mut pairs = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                if heights[a] != heights[b] {
                    pairs += 1;
                    if let Some(cx) = check(a, b) {
                        return Ok(Verdict::fails(name, Exactness::Exact, cx));
                    }
                }
            }
        }
        return Ok(Verdict::holds(
            name,
            Exactness::Exact,
            json!({ "pairs": pairs, "steps": steps }),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = cfg.samples.max(1) * 100;
    let mut pairs = 0;
    while pairs < samples {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if heights[a] == heights[b] {
            continue;
        }
        pairs += 1;
        if let Some(cx) = check(a, b) {
            return Ok(Verdict::fails(name, Exactness::Sampled { samples }, cx));
        }
    }
    Ok(Verdict::holds(
        name,
        Exactness::Sampled { samples },
        json!({ "pairs": pairs, "steps": steps, "seed": cfg.seed }),
    ))
}

/// Largest `n` in the cut-commutation check.
const CUT_LEMMA_STEPS: usize = 10;

/// `[(T_F^g)^n A]_α = T^n([A]_{ξ_g^n(α)})` on random fuzzy sets, for
/// `n <= 10` and every grid level `α`.
fn cut_lemma(sys: &SystemMap, cfg: &TheoremConfig) -> Result<Verdict> {
    let name = "cut_commutation";
    let g = match &cfg.g {
        Some(g) => g.clone(),
        None => GFunction::identity(LevelGrid::new(cfg.m)?),
    };
    let grid = g.grid();
    let m = grid.m();
    let xi = xi_of(&g);
    let space = sys.space();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // equal[n][j - 1] counts agreeing samples.
    let mut equal = vec![vec![0usize; m as usize]; CUT_LEMMA_STEPS + 1];
    for _ in 0..cfg.samples {
        let grades: Vec<u8> = (0..space.len()).map(|_| rng.gen_range(0..=m)).collect();
        let a = FuzzySet::from_indices(space, grid, grades)?;
        let mut cur = a.clone();
        // xi_n[j] = ξ^n(j), images[n][i] = T^n([A]_{i/m}).
        let mut xi_n: Vec<u8> = (0..=m).collect();
        let mut images: Vec<PointSet> = (0..=m).map(|i| a.cut_set(i)).collect();
        for (step, row) in equal.iter_mut().enumerate() {
            for j in 1..=m {
                let left = cur.cut_set(j);
                let right = &images[xi_n[j as usize] as usize];
                if left == *right {
                    row[j as usize - 1] += 1;
                } else {
                    return Ok(Verdict::fails(
                        name,
                        Exactness::Sampled { samples: cfg.samples },
                        json!({
                            "A": a.to_json(),
                            "g": serde_json::to_value(&g)?,
                            "n": step,
                            "alpha": rational::format(&grid.level(j)),
                            "left": space.labels_of(&left),
                            "right": space.labels_of(right),
                        }),
                    ));
                }
            }
            cur = g_fuzzify_apply(sys, &g, &cur)?;
            for x in xi_n.iter_mut() {
                *x = xi[*x as usize];
            }
            for s in images.iter_mut() {
                *s = sys.image_set(s);
            }
        }
    }
    let table: Vec<Value> = equal
        .iter()
        .enumerate()
        .flat_map(|(step, row)| {
            row.iter().enumerate().map(move |(j, &count)| {
                json!({
                    "n": step,
                    "alpha": rational::format(&grid.level(j as u8 + 1)),
                    "equal": count,
                    "total": cfg.samples,
                })
            })
        })
        .collect();
    Ok(Verdict::holds(
        name,
        Exactness::Sampled { samples: cfg.samples },
        json!({ "seed": cfg.seed, "table": table }),
    ))
}

/// `d_H(T_K^n A, T_K^n B) = d_∞(T_F^n(λχ_A), T_F^n(λχ_B))` for all pairs
/// of compact sets and `n <= ρ+π`, read off the two lifted tables.
fn conjugacy(
    base: &SystemMap,
    hyper: &SystemMap,
    fuzzy: &SystemMap,
    lambda: Rational,
    cfg: &TheoremConfig,
) -> Result<Verdict> {
    let name = "conjugacy_identity";
    let th = hyper.require_map(name)?;
    let tf = fuzzy.require_map(name)?;
    let (pre, per) = eventual_period(base)?;
    let steps = pre + per;
    let grid = LevelGrid::new(cfg.m)?;
    let embed = (0..hyper.len())
        .map(|i| {
            let c = compact_at(hyper.space(), i)?;
            let f = embed_indicator(grid, lambda, &c)?;
            fuzzy_index(fuzzy.space(), &f).ok_or_else(|| Error::invalid("λ-indicator missing from the fuzzy lift"))
        })
        .collect::<Result<Vec<usize>>>()?;
    let (hs, fs) = (hyper.space(), fuzzy.space());
    let k = hyper.len();
    let check = |a: usize, b: usize| -> Option<Value> {
        let (mut ha, mut hb, mut fa, mut fb) = (a, b, embed[a], embed[b]);
        for step in 0..=steps {
            let (dh, df) = (hs.dist(ha, hb), fs.dist(fa, fb));
            if dh != df {
                return Some(json!({
                    "A": hs.label(a),
                    "B": hs.label(b),
                    "lambda": rational::format(&lambda),
                    "n": step,
                    "d_H": rational::format(&dh),
                    "d_inf": rational::format(&df),
                }));
            }
            ha = th[ha] as usize;
            hb = th[hb] as usize;
            fa = tf[fa] as usize;
            fb = tf[fb] as usize;
        }
        None
    };
    const EXHAUSTIVE_PAIRS: usize = 4_000_000;
    if k * k <= EXHAUSTIVE_PAIRS {
        for a in 0..k {
            for b in a..k {
                if let Some(cx) = check(a, b) {
                    return Ok(Verdict::fails(name, Exactness::Exact, cx));
                }
            }
        }
        return Ok(Verdict::holds(
            name,
            Exactness::Exact,
            json!({ "pairs": k * (k + 1) / 2, "steps": steps }),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = cfg.samples.max(1) * 100;
    for _ in 0..samples {
        if let Some(cx) = check(rng.gen_range(0..k), rng.gen_range(0..k)) {
            return Ok(Verdict::fails(name, Exactness::Sampled { samples }, cx));
        }
    }
    Ok(Verdict::holds(
        name,
        Exactness::Sampled { samples },
        json!({ "pairs": samples, "steps": steps, "seed": cfg.seed }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::parse_system;
    use crate::rational::rat;

    fn sys(s: &str) -> SystemMap {
        parse_system(s, &Bounds::default()).unwrap()
    }

    fn values(r: &EquivalenceReport) -> Vec<Option<bool>> {
        r.items.iter().map(|i| i.verdict.value()).collect()
    }

    #[test]
    fn transitivity_negative_on_rotation() {
        let cfg = TheoremConfig {
            m: 1,
            ..Default::default()
        };
        let r = verify_theorem("transitivity", &sys("rotation:2,1"), &cfg).unwrap();
        assert!(values(&r).iter().all(|v| *v == Some(false)));
        assert!(r.consistent && r.red_alert.is_none());
    }

    #[test]
    fn transitivity_positive_on_point() {
        let r = verify_theorem("transitivity", &sys("point"), &TheoremConfig::default()).unwrap();
        assert!(values(&r).iter().all(|v| *v == Some(true)));
    }

    #[test]
    fn uniform_rigidity_common_witness() {
        let cfg = TheoremConfig {
            eps: Some(rat(1, 24)),
            ..Default::default()
        };
        let r = verify_theorem("uniform-rigidity", &sys("rotation:12,1"), &cfg);
        // The fuzzy lifts of a 12-point space exceed the default bound.
        assert!(matches!(r, Err(Error::BoundExceeded { .. })));
        let cfg = TheoremConfig {
            bounds: Bounds {
                max_fuzzy_states: 531_441,
                ..Bounds::default()
            },
            ..cfg
        };
        let r = verify_theorem("uniform-rigidity", &sys("rotation:12,1"), &cfg).unwrap();
        assert!(r.items.iter().all(|i| i.verdict.witnesses["n"] == 12));
        assert!(r.notes.iter().any(|n| n.contains("common witness n = 12")));
    }

    #[test]
    fn proximality_with_f0_row() {
        let r = verify_theorem("proximality", &sys("gridmap:half,8"), &TheoremConfig::default()).unwrap();
        assert!(values(&r).iter().all(|v| *v == Some(true)));
        assert_eq!(r.extras[0].expected, Some(false));
        assert_eq!(r.extras[0].verdict.value(), Some(false));
        assert!(r.consistent && r.red_alert.is_none());
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(
            verify_theorem("entropy", &sys("point"), &TheoremConfig::default()),
            Err(Error::UnknownTheorem(_))
        ));
    }

    #[test]
    fn lambda_must_be_on_grid() {
        let cfg = TheoremConfig {
            lambdas: Some(vec![rat(1, 3)]),
            ..Default::default()
        };
        assert!(verify_theorem("mixing", &sys("point"), &cfg).is_err());
    }
}
