//! JSON description of systems, used for ingestion and provenance.

use serde::{Deserialize, Serialize};

use super::generators::{make_grid_interval_map, make_multiply, make_rotation, make_sft, PiecewiseLinear, Snap};
use super::metric::MetricSpace;
use super::product::{iterate, product_system, ProductFactor};
use super::system::SystemMap;
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::fuzzy::{fuzzy_lift_system, Constraint, GFunction, LevelGrid};
use crate::hyperspace::lift_system;
use crate::rational::RationalString;

/// How a system was built. Every [`SystemMap`] carries one, and
/// [`SystemSpec::build`] reconstructs an identical system from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    Finite {
        points: Vec<String>,
        dist: Vec<Vec<RationalString>>,
        /// Image of each point, by id.
        map: Vec<String>,
    },
    Rotation {
        n: usize,
        step: i64,
    },
    Multiply {
        n: usize,
        a: u64,
    },
    GridMap {
        m: usize,
        snap: Snap,
        breakpoints: Vec<[RationalString; 2]>,
    },
    Sft {
        alphabet: Vec<String>,
        transitions: Vec<Vec<u8>>,
        resolution: usize,
    },
    HyperspaceLift {
        base: Box<SystemSpec>,
    },
    FuzzyLift {
        base: Box<SystemSpec>,
        grid_m: u8,
        constraint: Constraint,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        g: Option<GFunction>,
    },
    Product {
        factors: Vec<ProductFactor>,
    },
    Iterate {
        base: Box<SystemSpec>,
        k: usize,
    },
}

impl SystemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("spec is serializable");
        serde_json::to_string_pretty(&v).expect("value is serializable")
    }

    pub fn build(&self, bounds: &Bounds) -> Result<SystemMap> {
        match self {
            SystemSpec::Finite { points, dist, map } => {
                let dist = dist.iter().map(|row| row.iter().map(|q| q.0).collect()).collect();
                let space = MetricSpace::from_table(points.clone(), dist)?;
                let violations = space.validate();
                if let Some(v) = violations.first() {
                    return Err(Error::invalid(format!(
                        "distance table is not a metric ({} violations, first: {})",
                        violations.len(),
                        serde_json::to_string(v)?
                    )));
                }
                if map.len() != points.len() {
                    return Err(Error::invalid("map must list one image per point"));
                }
                let table = map
                    .iter()
                    .map(|id| {
                        space
                            .index_of(id)
                            .ok_or_else(|| Error::invalid(format!("map image `{id}` is not a point")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SystemMap::from_table(space, table)
            }
            SystemSpec::Rotation { n, step } => make_rotation(*n, *step),
            SystemSpec::Multiply { n, a } => make_multiply(*n, *a),
            SystemSpec::GridMap { m, snap, breakpoints } => {
                let f = PiecewiseLinear::new(breakpoints.iter().map(|[x, y]| (x.0, y.0)).collect())?;
                make_grid_interval_map(&f, *m, *snap)
            }
            SystemSpec::Sft {
                alphabet,
                transitions,
                resolution,
            } => make_sft(alphabet.clone(), transitions.clone(), *resolution),
            SystemSpec::HyperspaceLift { base } => lift_system(&base.build(bounds)?, bounds),
            SystemSpec::FuzzyLift {
                base,
                grid_m,
                constraint,
                g,
            } => {
                let grid = LevelGrid::new(*grid_m)?;
                fuzzy_lift_system(&base.build(bounds)?, &grid, *constraint, g.as_ref(), bounds)
            }
            SystemSpec::Product { factors } => {
                let built = factors
                    .iter()
                    .map(|f| Ok((f.system.build(bounds)?, f.exponent)))
                    .collect::<Result<Vec<_>>>()?;
                product_system(&built, bounds)
            }
            SystemSpec::Iterate { base, k } => iterate(&base.build(bounds)?, *k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn finite_round_trip_with_sorted_keys() {
        let text = r#"{"map":["b","a"],"kind":"finite","points":["a","b"],"dist":[["0","1/2"],["1/2","0"]]}"#;
        let spec = SystemSpec::from_json(text).unwrap();
        let sys = spec.build(&Bounds::default()).unwrap();
        assert_eq!(sys.apply(0), 1);
        assert_eq!(sys.space().dist(0, 1), rat(1, 2));
        let out = sys.spec().to_json();
        let kinds: Vec<usize> = ["\"dist\"", "\"kind\"", "\"map\"", "\"points\""]
            .iter()
            .map(|k| out.find(k).unwrap())
            .collect();
        assert!(kinds.windows(2).all(|w| w[0] < w[1]));
        assert!(out.contains("\"1/2\""));
        assert_eq!(SystemSpec::from_json(&out).unwrap(), *sys.spec());
    }

    #[test]
    fn malformed_inputs() {
        let bad_metric = r#"{"kind":"finite","points":["a","b","c"],"dist":[["0","1","3"],["1","0","1"],["3","1","0"]],"map":["a","b","c"]}"#;
        assert!(SystemSpec::from_json(bad_metric)
            .unwrap()
            .build(&Bounds::default())
            .is_err());
        let bad_image = r#"{"kind":"finite","points":["a"],"dist":[["0"]],"map":["z"]}"#;
        assert!(SystemSpec::from_json(bad_image)
            .unwrap()
            .build(&Bounds::default())
            .is_err());
        assert!(SystemSpec::from_json(r#"{"kind":"torus"}"#).is_err());
    }

    #[test]
    fn generated_specs_rebuild() {
        let specs = [
            r#"{"kind":"rotation","n":5,"step":2}"#,
            r#"{"kind":"grid_map","m":8,"snap":"down","breakpoints":[["0","0"],["1","1/2"]]}"#,
            r#"{"kind":"sft","alphabet":["0","1"],"transitions":[[1,1],[1,0]],"resolution":3}"#,
            r#"{"kind":"hyperspace_lift","base":{"kind":"rotation","n":3,"step":1}}"#,
            r#"{"kind":"fuzzy_lift","base":{"kind":"rotation","n":3,"step":1},"grid_m":2,"constraint":{"height_eq":"1/1"}}"#,
            r#"{"kind":"product","factors":[{"system":{"kind":"rotation","n":4,"step":1},"exponent":2}]}"#,
            r#"{"kind":"iterate","base":{"kind":"multiply","n":9,"a":2},"k":3}"#,
        ];
        for text in specs {
            let sys = SystemSpec::from_json(text).unwrap().build(&Bounds::default()).unwrap();
            let again = sys.spec().build(&Bounds::default()).unwrap();
            assert_eq!(sys.len(), again.len(), "{text}");
            assert_eq!(sys.spec(), again.spec());
        }
    }
}
