use serde::Serialize;
use serde_json::Value;

/// Outcome of a property check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Holds,
    /// The counterexample uses point ids and can be replayed.
    Fails {
        counterexample: Value,
    },
    Inconclusive {
        reason: String,
    },
}

/// How far a verdict can be trusted beyond what was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Exactness {
    /// Every quantifier was exhausted.
    Exact,
    /// Index sets were only inspected on `[0, h)`.
    Horizon { h: usize },
    /// Exact for the symbolic system truncated at this word length.
    Truncated { resolution: usize },
    /// Exact on a deterministic sample of the inputs.
    Sampled { samples: usize },
    /// Holds against a finite catalog, not every system.
    CatalogRelative,
}

impl Exactness {
    /// Disagreement between decisive verdicts indicates a bug, not a
    /// limitation of the evidence.
    pub fn is_decisive(&self) -> bool {
        matches!(
            self,
            Exactness::Exact | Exactness::Truncated { .. } | Exactness::Sampled { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub property: String,
    #[serde(flatten)]
    pub status: Status,
    pub exactness: Exactness,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witnesses: Value,
}

impl Verdict {
    pub fn holds(property: &str, exactness: Exactness, witnesses: Value) -> Self {
        Verdict {
            property: property.into(),
            status: Status::Holds,
            exactness,
            witnesses,
        }
    }

    pub fn fails(property: &str, exactness: Exactness, counterexample: Value) -> Self {
        Verdict {
            property: property.into(),
            status: Status::Fails { counterexample },
            exactness,
            witnesses: Value::Null,
        }
    }

    pub fn inconclusive(property: &str, exactness: Exactness, reason: impl Into<String>) -> Self {
        Verdict {
            property: property.into(),
            status: Status::Inconclusive { reason: reason.into() },
            exactness,
            witnesses: Value::Null,
        }
    }

    pub fn with_witnesses(mut self, w: Value) -> Self {
        self.witnesses = w;
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        matches!(self.status, Status::Fails { .. })
    }

    /// `Some(holds)` unless inconclusive.
    pub fn value(&self) -> Option<bool> {
        match self.status {
            Status::Holds => Some(true),
            Status::Fails { .. } => Some(false),
            Status::Inconclusive { .. } => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Value> {
        match &self.status {
            Status::Fails { counterexample } => Some(counterexample),
            _ => None,
        }
    }

    pub fn is_decisive(&self) -> bool {
        self.value().is_some() && self.exactness.is_decisive()
    }

    /// Conjunction, keeping the first failure and the weakest exactness.
    pub fn and(property: &str, parts: Vec<Verdict>) -> Verdict {
        let exactness = weakest(parts.iter().map(|v| &v.exactness));
        if let Some(f) = parts.iter().find(|v| v.is_fails()) {
            return Verdict::fails(
                property,
                exactness,
                serde_json::json!({ "failed": f.property, "counterexample": f.counterexample() }),
            );
        }
        if let Some(i) = parts.iter().find(|v| v.value().is_none()) {
            return Verdict::inconclusive(property, exactness, format!("{} is inconclusive", i.property));
        }
        let w: serde_json::Map<String, Value> = parts
            .iter()
            .map(|v| (v.property.clone(), v.witnesses.clone()))
            .collect();
        Verdict::holds(property, exactness, Value::Object(w))
    }
}

pub(crate) fn weakest<'a>(it: impl Iterator<Item = &'a Exactness>) -> Exactness {
    let rank = |e: &Exactness| match e {
        Exactness::Exact => 0,
        Exactness::Truncated { .. } => 1,
        Exactness::Sampled { .. } => 2,
        Exactness::Horizon { .. } => 3,
        Exactness::CatalogRelative => 4,
    };
    it.max_by_key(|e| rank(e)).cloned().unwrap_or(Exactness::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn serialized_shape() {
        let v = Verdict::fails("transitivity", Exactness::Exact, json!({"U": ["1"], "V": ["0"]}));
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["status"], "fails");
        assert_eq!(j["counterexample"]["U"][0], "1");
        assert_eq!(j["exactness"]["mode"], "exact");
        let h = Verdict::holds("mixing", Exactness::Horizon { h: 64 }, Value::Null);
        let j = serde_json::to_value(&h).unwrap();
        assert_eq!(j["exactness"]["h"], 64);
        assert!(j.get("witnesses").is_none());
    }

    #[test]
    fn conjunction() {
        let a = Verdict::holds("a", Exactness::Exact, json!(1));
        let b = Verdict::fails("b", Exactness::Truncated { resolution: 3 }, json!(2));
        let c = Verdict::and("both", vec![a.clone(), b]);
        assert!(c.is_fails());
        assert_eq!(c.exactness, Exactness::Truncated { resolution: 3 });
        assert!(Verdict::and("one", vec![a]).is_holds());
    }
}
