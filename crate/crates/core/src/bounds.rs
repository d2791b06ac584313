use crate::error::{Error, Result};

/// Resource bounds for exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest base space whose hyperspace may be enumerated.
    pub max_base_points: usize,
    /// Largest fuzzy state set that may be enumerated.
    pub max_fuzzy_states: u128,
    /// Largest materialized or lazily explored product system.
    pub max_product_states: u128,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_base_points: 16,
            max_fuzzy_states: 19_683, // 3^9
            max_product_states: 1 << 22,
        }
    }
}

impl Bounds {
    /// Defaults overridden by `FUZZDYN_MAX_POINTS`, `FUZZDYN_MAX_FUZZY_STATES`
    /// and `FUZZDYN_MAX_PRODUCT_STATES` when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Bounds::default();
        if let Some(v) = read_env("FUZZDYN_MAX_POINTS")? {
            b.max_base_points = v as usize;
        }
        if let Some(v) = read_env("FUZZDYN_MAX_FUZZY_STATES")? {
            b.max_fuzzy_states = v;
        }
        if let Some(v) = read_env("FUZZDYN_MAX_PRODUCT_STATES")? {
            b.max_product_states = v;
        }
        Ok(b)
    }

    pub(crate) fn check_base(&self, n: usize) -> Result<()> {
        if n > self.max_base_points || n > 64 {
            return Err(Error::BoundExceeded {
                what: "base space for enumeration",
                requested: n as u128,
                limit: self.max_base_points.min(64) as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_fuzzy(&self, states: u128) -> Result<()> {
        if states > self.max_fuzzy_states {
            return Err(Error::BoundExceeded {
                what: "fuzzy enumeration",
                requested: states,
                limit: self.max_fuzzy_states,
            });
        }
        Ok(())
    }

    pub(crate) fn check_product(&self, states: u128) -> Result<()> {
        if states > self.max_product_states {
            return Err(Error::BoundExceeded {
                what: "product system",
                requested: states,
                limit: self.max_product_states,
            });
        }
        Ok(())
    }
}

fn read_env(key: &str) -> Result<Option<u128>> {
    match std::env::var(key) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::invalid(format!("{key} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}
