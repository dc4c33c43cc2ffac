//! JSON run configuration. Rationals travel as `"p/q"` strings so every
//! value is exact; unknown fields are rejected so typos surface as errors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::cone::{Beta, ConeModel, NumClass};
use crate::error::{Error, Result};
use crate::integrate::{InvariantTable, TableKind};
use crate::rat::{parse_rat, Rat};
use crate::series::SeriesMode;
use crate::stability::StabilityParam;

/// One parsed run configuration; commands pick the fields they need.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    /// The stability parameter k, as `"p/q"`.
    pub k: Option<String>,
    /// A second stability parameter (the Z′ side of a transform).
    pub k_prime: Option<String>,
    pub beta_cutoff: Option<Beta>,
    pub q_window: Option<(i64, i64)>,
    pub hall: Option<HallConfig>,
    pub tables: Option<TablesConfig>,
    /// `"window"` or `"closed"`.
    pub mode: Option<ModeConfig>,
    /// A tuple of classes, for the coefficient commands.
    pub tuple: Option<Vec<ClassConfig>>,
    /// A single class, for decomposition and transform commands.
    pub class: Option<ClassConfig>,
    pub beta: Option<Beta>,
    pub n: Option<i64>,
    /// Seed for the randomized self-test sweeps.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub omega: Vec<i64>,
    /// Box bound for the constant-table shorthand.
    pub bound: Option<Beta>,
    /// Constant `N(β)` used with `bound`.
    pub n_floor_constant: Option<i64>,
    /// Explicit `m(β)` entries; override the shorthand where present.
    pub m_table: Option<Vec<BetaInt>>,
    /// Explicit `N(β)` entries; override the shorthand where present.
    pub n_floor_table: Option<Vec<BetaInt>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaInt {
    pub beta: Beta,
    pub value: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HallConfig {
    /// Word-length truncation.
    pub max_len: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablesConfig {
    pub n: Option<Vec<PeriodEntry>>,
    pub p: Option<Vec<WindowEntry>>,
    pub l: Option<Vec<WindowEntry>>,
}

/// One period of N-values for a class (length must be `ω·β`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodEntry {
    pub beta: Beta,
    pub period: Vec<String>,
}

/// Finite support of an L- or P-table at a class.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub beta: Beta,
    pub coeffs: Vec<(i64, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeConfig {
    Window,
    Closed,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    pub r: i64,
    pub beta: Beta,
    pub n: i64,
}

fn field_rat(field: &str, s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| Error::Config(format!("field `{field}`: {e}")))
}

impl RunConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn model(&self) -> Result<ConeModel> {
        self.model.build()
    }

    pub fn k(&self) -> Result<StabilityParam> {
        let s = self
            .k
            .as_deref()
            .ok_or_else(|| Error::Config("field `k` is required for this command".into()))?;
        Ok(StabilityParam::new(field_rat("k", s)?))
    }

    pub fn k_prime(&self) -> Result<StabilityParam> {
        let s = self.k_prime.as_deref().ok_or_else(|| {
            Error::Config("field `k_prime` is required for this command".into())
        })?;
        Ok(StabilityParam::new(field_rat("k_prime", s)?))
    }

    pub fn beta_cutoff(&self) -> Result<Beta> {
        self.beta_cutoff
            .clone()
            .ok_or_else(|| Error::Config("field `beta_cutoff` is required for this command".into()))
    }

    pub fn q_window(&self) -> Result<(i64, i64)> {
        let (lo, hi) = self
            .q_window
            .ok_or_else(|| Error::Config("field `q_window` is required for this command".into()))?;
        if lo > hi {
            return Err(Error::Config(format!("field `q_window`: [{lo}, {hi}] is empty")));
        }
        Ok((lo, hi))
    }

    pub fn mode(&self) -> Result<SeriesMode> {
        match self.mode.unwrap_or(ModeConfig::Window) {
            ModeConfig::Window => {
                let (_, hi) = self.q_window()?;
                Ok(SeriesMode::Window { degree_hi: hi })
            }
            ModeConfig::Closed => Ok(SeriesMode::Closed),
        }
    }

    pub fn tuple(&self) -> Result<Vec<NumClass>> {
        let t = self
            .tuple
            .as_ref()
            .ok_or_else(|| Error::Config("field `tuple` is required for this command".into()))?;
        t.iter().map(|c| c.build()).collect()
    }

    pub fn class(&self) -> Result<NumClass> {
        self.class
            .as_ref()
            .ok_or_else(|| Error::Config("field `class` is required for this command".into()))?
            .build()
    }

    pub fn beta(&self) -> Result<Beta> {
        self.beta
            .clone()
            .ok_or_else(|| Error::Config("field `beta` is required for this command".into()))
    }

    pub fn n_table(&self, model: &ConeModel) -> Result<InvariantTable> {
        let entries = self
            .tables
            .as_ref()
            .and_then(|t| t.n.as_ref())
            .ok_or_else(|| Error::Config("field `tables.n` is required for this command".into()))?;
        let mut map = BTreeMap::new();
        for e in entries {
            let period: Result<Vec<Rat>> =
                e.period.iter().map(|s| field_rat("tables.n", s)).collect();
            map.insert(e.beta.clone(), period?);
        }
        InvariantTable::periodic(map, model)
    }

    pub fn window_table(&self, kind: TableKind) -> Result<InvariantTable> {
        let (name, entries) = match kind {
            TableKind::P => ("tables.p", self.tables.as_ref().and_then(|t| t.p.as_ref())),
            TableKind::L => ("tables.l", self.tables.as_ref().and_then(|t| t.l.as_ref())),
            TableKind::N => return Err(Error::Config("N-tables are periodic".into())),
        };
        let entries =
            entries.ok_or_else(|| Error::Config(format!("field `{name}` is required")))?;
        let mut map = BTreeMap::new();
        for e in entries {
            let mut w = BTreeMap::new();
            for (n, s) in &e.coeffs {
                w.insert(*n, field_rat(name, s)?);
            }
            map.insert(e.beta.clone(), w);
        }
        InvariantTable::window(kind, map)
    }
}

impl ModelConfig {
    pub fn build(&self) -> Result<ConeModel> {
        let mut m = BTreeMap::new();
        let mut f = BTreeMap::new();
        if let Some(bound) = &self.bound {
            for b in crate::cone::beta_box(bound) {
                let floor = if crate::cone::beta_is_zero(&b) {
                    0
                } else {
                    self.n_floor_constant.unwrap_or(0)
                };
                m.insert(b.clone(), 0);
                f.insert(b, floor);
            }
        }
        for e in self.m_table.iter().flatten() {
            m.insert(e.beta.clone(), e.value);
        }
        for e in self.n_floor_table.iter().flatten() {
            f.insert(e.beta.clone(), e.value);
        }
        ConeModel::new(self.omega.clone(), m, f)
    }
}

impl ClassConfig {
    pub fn build(&self) -> Result<NumClass> {
        NumClass::new(self.r, self.beta.clone(), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    const BASIC: &str = r#"{
        "model": { "omega": [1], "bound": [3] },
        "k": "-3/2",
        "beta_cutoff": [2],
        "q_window": [-4, 4],
        "tables": {
            "n": [ { "beta": [1], "period": ["2"] },
                   { "beta": [2], "period": ["0", "1/2"] } ],
            "p": [ { "beta": [1], "coeffs": [[0, "3"], [1, "-1/3"]] } ]
        },
        "tuple": [ { "r": -1, "beta": [0], "n": 0 },
                   { "r": 0, "beta": [1], "n": 2 } ]
    }"#;

    #[test]
    fn parses_a_full_document() {
        let cfg = RunConfig::from_str(BASIC).unwrap();
        let model = cfg.model().unwrap();
        assert_eq!(cfg.k().unwrap().value(), &rat(-3, 2));
        assert_eq!(cfg.beta_cutoff().unwrap(), vec![2]);
        let n = cfg.n_table(&model).unwrap();
        assert_eq!(n.value(3, &vec![2], &model).unwrap(), rat(1, 2));
        let p = cfg.window_table(TableKind::P).unwrap();
        assert_eq!(p.value(1, &vec![1], &model).unwrap(), rat(-1, 3));
        let tuple = cfg.tuple().unwrap();
        assert_eq!(tuple.len(), 2);
        assert_eq!(tuple[0].r, -1);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{ "model": { "omega": [1] }, "krom": "1" }"#;
        let err = RunConfig::from_str(bad).unwrap_err();
        assert!(err.to_string().contains("krom"), "{err}");
    }

    #[test]
    fn bad_rationals_name_the_field() {
        let bad = r#"{ "model": { "omega": [1] }, "k": "one half" }"#;
        let cfg = RunConfig::from_str(bad).unwrap();
        let err = cfg.k().unwrap_err();
        assert!(err.to_string().contains("`k`"), "{err}");
    }

    #[test]
    fn missing_fields_are_named() {
        let cfg = RunConfig::from_str(r#"{ "model": { "omega": [1] } }"#).unwrap();
        assert!(cfg.k().unwrap_err().to_string().contains("`k`"));
        assert!(cfg.q_window().is_err());
        assert!(cfg.class().is_err());
    }

    #[test]
    fn model_overrides_extend_the_shorthand() {
        let cfg = RunConfig::from_str(
            r#"{ "model": { "omega": [2], "bound": [2],
                  "m_table": [ { "beta": [1], "value": 3 } ],
                  "n_floor_table": [ { "beta": [2], "value": -1 } ] } }"#,
        )
        .unwrap();
        let m = cfg.model().unwrap();
        assert_eq!(m.m(&vec![1]).unwrap(), 3);
        assert_eq!(m.m(&vec![2]).unwrap(), 0);
        assert_eq!(m.n_floor(&vec![2]).unwrap(), -1);
    }
}
