//! Problem files: JSON documents holding `f`, `g`, the constraints, optional
//! grid overrides for the oracle and optional expected results.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::duals::DCProblem;
use crate::extreal::{parse_rational, ExtReal, Rational};
use crate::oracle::GridSpec;
use crate::pwafun::PwaFunction;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub f: PwaFunction,
    pub g: PwaFunction,
    pub constraints: Vec<PwaFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<GridOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// Grid settings; each field is a rational string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_range: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_range: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<String>,
}

impl GridOverrides {
    pub fn apply(&self, base: &GridSpec) -> Result<GridSpec, Error> {
        let pair = |r: &Option<[String; 2]>, d: &(Rational, Rational)| -> Result<(Rational, Rational), Error> {
            match r {
                Some([a, b]) => Ok((parse_rational(a)?, parse_rational(b)?)),
                None => Ok(d.clone()),
            }
        };
        let one = |s: &Option<String>, d: &Rational| match s {
            Some(s) => parse_rational(s),
            None => Ok(d.clone()),
        };
        GridSpec::new(
            pair(&self.x_range, &base.x_range)?,
            pair(&self.w_range, &base.w_range)?,
            one(&self.lambda_max, &base.lambda_max)?,
            one(&self.step, &base.step)?,
        )
    }
}

/// Expected optimal values keyed by `P`, `P_e`, `D_L`, `D_bar_L`, `D_FL`,
/// `D_bar_FL`, and expected verdicts keyed by pair (`L`, `bar`, `fl`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, ExtReal>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub verdicts: BTreeMap<String, ExpectedVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedVerdict {
    pub weak: bool,
    pub zero_gap: bool,
    pub strong: bool,
}

impl ProblemFile {
    pub fn from_problem(p: &DCProblem) -> Self {
        ProblemFile {
            space: "R".into(),
            name: None,
            f: p.f.clone(),
            g: p.g.clone(),
            constraints: p.constraints.clone(),
            oracle: None,
            expected: None,
        }
    }

    /// Validates the data and builds the problem.
    pub fn problem(&self) -> Result<DCProblem, Error> {
        if self.space != "R" {
            return Err(Error::Invalid(format!("space must be \"R\", found {:?}", self.space)));
        }
        DCProblem::new(self.f.clone(), self.g.clone(), self.constraints.clone())
    }

    pub fn grid(&self, base: &GridSpec) -> Result<GridSpec, Error> {
        match &self.oracle {
            Some(o) => o.apply(base),
            None => Ok(base.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Parses a problem file, reporting the failing field path and position.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile, Error> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        let at = format!("line {} column {}", inner.line(), inner.column());
        if path == "." {
            Error::Parse(format!("{inner} ({at})"))
        } else {
            Error::Parse(format!("at {path}: {inner} ({at})"))
        }
    })?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(file)
}

pub fn read_problem_file(path: &Path) -> Result<ProblemFile, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_problem_file(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{boundary_jump, slater};

    #[test]
    fn round_trip() {
        for p in [boundary_jump(), slater()] {
            let text = ProblemFile::from_problem(&p).to_json();
            let back = parse_problem_file(&text).unwrap().problem().unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn reports_field_path() {
        let text = r#"{"space": "R", "f": {"pieces": [{"lo": "0", "lo_closed": true, "hi": "+inf",
            "hi_closed": false, "slope": "x", "intercept": "0"}]}, "g": {"pieces": []}, "constraints": []}"#;
        let err = parse_problem_file(text).unwrap_err().to_string();
        assert!(err.contains("f.pieces[0].slope"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn rejects_other_spaces_and_unknown_keys() {
        let mut file = ProblemFile::from_problem(&slater());
        file.space = "R2".into();
        assert!(matches!(file.problem(), Err(Error::Invalid(_))));
        let text = ProblemFile::from_problem(&slater()).to_json().replacen("\"space\"", "\"spice\": 1, \"space\"", 1);
        assert!(parse_problem_file(&text).is_err());
    }
}
