use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::set::LevelGrid;
use crate::error::{Error, Result};
use crate::rational::{self, RationalString};

/// A grade distortion `g` on `{0} ∪ grid`: nondecreasing with `g(0) = 0`
/// and `g(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFunction {
    grid: LevelGrid,
    /// `table[j]` is the index of `g(j/m)`.
    table: Vec<u8>,
}

impl GFunction {
    pub fn new(grid: LevelGrid, table: Vec<u8>) -> Result<Self> {
        let m = grid.m();
        if table.len() != m as usize + 1 {
            return Err(Error::invalid(format!("g needs {} values, got {}", m + 1, table.len())));
        }
        if table[0] != 0 || table[m as usize] != m {
            return Err(Error::invalid("g must fix 0 and 1"));
        }
        if table.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("g must be nondecreasing"));
        }
        Ok(GFunction { grid, table })
    }

    pub fn identity(grid: LevelGrid) -> Self {
        GFunction {
            grid,
            table: (0..=grid.m()).collect(),
        }
    }

    pub fn grid(&self) -> LevelGrid {
        self.grid
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn apply(&self, j: u8) -> u8 {
        self.table[j as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i == v as usize)
    }
}

/// `ξ_g(x) = min g^{-1}([x, 1])` as a table of grid indices.
pub fn xi_of(g: &GFunction) -> Vec<u8> {
    (0..=g.grid.m())
        .map(|x| g.table.iter().position(|&v| v >= x).expect("g(1) = 1") as u8)
        .collect()
}

#[derive(Serialize, Deserialize)]
struct GJson {
    grid_m: u8,
    table: BTreeMap<RationalString, RationalString>,
}

impl Serialize for GFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GJson {
            grid_m: self.grid.m(),
            table: (0..=self.grid.m())
                .map(|j| (self.grid.level(j).into(), self.grid.level(self.apply(j)).into()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = GJson::deserialize(d)?;
        let grid = LevelGrid::new(raw.grid_m).map_err(D::Error::custom)?;
        let mut table = vec![None; grid.m() as usize + 1];
        for (k, v) in raw.table {
            let i = grid.require_index(k.0).map_err(D::Error::custom)?;
            table[i as usize] = Some(grid.require_index(v.0).map_err(D::Error::custom)?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(j, v)| {
                v.ok_or_else(|| {
                    D::Error::custom(format!("g is missing level {}", rational::label(&grid.level(j as u8))))
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        GFunction::new(grid, table).map_err(D::Error::custom)
    }
}
