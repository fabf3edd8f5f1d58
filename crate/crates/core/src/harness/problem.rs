use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::poly::{parse_polynomial, PolySet, Variable};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Lt,
        Relation::Gt,
        Relation::Le,
        Relation::Ge,
        Relation::Ne,
        Relation::Eq,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Ne => "!=",
            Relation::Eq => "=",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub poly: String,
    pub rel: Relation,
}

/// A quantifier-free problem `E = 0 /\ F rel 0`, stored as polynomial text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub id: String,
    pub variables: Vec<String>,
    #[serde(rename = "E")]
    pub e: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<Constraint>,
    pub seed: u64,
}

impl ProblemInstance {
    pub fn vars(&self) -> Vec<Variable> {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, n)| Variable::new(i, n.clone()))
            .collect()
    }

    fn parse_all<'a>(&self, texts: impl Iterator<Item = &'a String>) -> Result<PolySet, HarnessError> {
        let vars = self.vars();
        let polys = texts
            .map(|t| parse_polynomial(t, &vars))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| HarnessError::InvalidProblem {
                id: self.id.clone(),
                reason: e.to_string(),
            })?;
        Ok(PolySet::new(vars, polys))
    }

    pub fn equalities(&self) -> Result<PolySet, HarnessError> {
        self.parse_all(self.e.iter())
    }

    /// Supports of the other constraints; relations do not affect CAD input.
    pub fn constraints(&self) -> Result<PolySet, HarnessError> {
        self.parse_all(self.f.iter().map(|c| &c.poly))
    }

    /// `E ∪ F` as one set.
    pub fn all_polys(&self) -> Result<PolySet, HarnessError> {
        Ok(self.equalities()?.union(&self.constraints()?))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |reason: &str| HarnessError::InvalidProblem {
            id: self.id.clone(),
            reason: reason.to_string(),
        };
        if self.variables.is_empty() || self.variables.len() > 3 {
            return Err(bad("need 1 to 3 variables"));
        }
        self.equalities()?;
        self.constraints()?;
        Ok(())
    }
}

/// Checks `format_version` before decoding the rest of the document.
pub fn decode_versioned<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, HarnessError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| HarnessError::Corrupt(format!("{what}: {e}")))?;
    let found = value
        .get("format_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| HarnessError::Corrupt(format!("{what}: missing format_version")))?;
    if found != FORMAT_VERSION {
        return Err(HarnessError::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        });
    }
    serde_json::from_value(value).map_err(|e| HarnessError::Corrupt(format!("{what}: {e}")))
}

pub fn read_text(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    decode_versioned(&read_text(path)?, &path.display().to_string())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_text(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ProblemInstance {
        ProblemInstance {
            id: "p1".into(),
            variables: vec!["x".into(), "y".into(), "z".into()],
            e: vec!["x*y - 1".into(), "z^2".into()],
            f: vec![Constraint {
                poly: "x + z".into(),
                rel: Relation::Le,
            }],
            seed: 7,
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(sample()).unwrap();
        assert_eq!(v["E"][0], "x*y - 1");
        assert_eq!(v["F"][0]["rel"], "<=");
        assert_eq!(v["F"][0]["poly"], "x + z");
        let back: ProblemInstance = serde_json::from_value(v).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn parse_sets() {
        let p = sample();
        assert_eq!(p.equalities().unwrap().len(), 2);
        assert_eq!(p.all_polys().unwrap().len(), 3);
        let mut bad = sample();
        bad.e.push("w + 1".into());
        assert!(matches!(bad.validate(), Err(HarnessError::InvalidProblem { .. })));
    }

    #[test]
    fn version_checked() {
        #[derive(Deserialize)]
        struct Doc {
            #[allow(dead_code)]
            format_version: u64,
        }
        assert!(decode_versioned::<Doc>(r#"{"format_version": 1}"#, "t").is_ok());
        assert!(matches!(
            decode_versioned::<Doc>(r#"{"format_version": 9}"#, "t"),
            Err(HarnessError::VersionMismatch { found: 9, .. })
        ));
        assert!(matches!(
            decode_versioned::<Doc>(r#"{"format_vers"#, "t"),
            Err(HarnessError::Corrupt(_))
        ));
    }
}
