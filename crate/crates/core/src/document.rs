//! JSON model documents.
//!
//! ```json
//! { "model": "linear_atomic",
//!   "variables": ["Y", "X1", "X2"],
//!   "bits": ["a", "b", "c"],
//!   "atoms": { "w": "1/3" },
//!   "components": { "Y": ["a", "b^c", "w"], "X1": ["a", "b"], "X2": ["c"] },
//!   "dependent": "Y" }
//! ```
//!
//! `pmf` documents carry `"outcomes": [{"p": "1/4", "values": [0, 1, 1]}, ...]`;
//! `entropy_table` documents carry `"entropy": {"A": "1", "A,B": "3/2", ...}`
//! keyed by comma-joined variable names. Rational literals are `"p/q"` strings
//! or integers. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::set::Subset;
use crate::sources::{
    EntropyTableSource, LinearAtomicSource, PmfSource, Severity, SourceModel, Violation, ViolationKind,
};

/// A rational literal: `"p/q"`, `"n"`, or a JSON integer.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalLiteral(pub Rational);

impl Serialize for RationalLiteral {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalLiteral {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalLiteral;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse_rational(v).map(RationalLiteral).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(RationalLiteral(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(RationalLiteral(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearAtomicDoc {
    pub variables: Vec<String>,
    #[serde(default)]
    pub bits: Vec<String>,
    #[serde(default)]
    pub atoms: BTreeMap<String, RationalLiteral>,
    pub components: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependent: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDoc {
    pub p: RationalLiteral,
    pub values: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfDoc {
    pub variables: Vec<String>,
    pub outcomes: Vec<OutcomeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependent: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyTableDoc {
    pub variables: Vec<String>,
    pub entropy: BTreeMap<String, RationalLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependent: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelDocument {
    LinearAtomic(LinearAtomicDoc),
    Pmf(PmfDoc),
    EntropyTable(EntropyTableDoc),
}

fn error(kind: ViolationKind) -> Violation {
    Violation { severity: Severity::Error, kind }
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn variables(&self) -> &[String] {
        match self {
            ModelDocument::LinearAtomic(d) => &d.variables,
            ModelDocument::Pmf(d) => &d.variables,
            ModelDocument::EntropyTable(d) => &d.variables,
        }
    }

    pub fn dependent(&self) -> Option<&str> {
        match self {
            ModelDocument::LinearAtomic(d) => d.dependent.as_deref(),
            ModelDocument::Pmf(d) => d.dependent.as_deref(),
            ModelDocument::EntropyTable(d) => d.dependent.as_deref(),
        }
    }

    /// Constructs the model, collecting every structural violation.
    pub fn build(&self) -> Result<SourceModel> {
        let mut violations = Vec::new();
        if let Some(dep) = self.dependent() {
            if !self.variables().iter().any(|v| v == dep) {
                violations.push(error(ViolationKind::UndeclaredVariable { section: "dependent", name: dep.to_string() }));
            }
        }
        let built = match self {
            ModelDocument::LinearAtomic(d) => build_linear_atomic(d, &mut violations),
            ModelDocument::Pmf(d) => build_pmf(d, &mut violations),
            ModelDocument::EntropyTable(d) => build_table(d, &mut violations),
        };
        match built {
            Err(Error::InvalidModel(more)) => {
                violations.extend(more);
                Err(Error::InvalidModel(violations))
            }
            Err(e) => Err(e),
            Ok(_) if !violations.is_empty() => Err(Error::InvalidModel(violations)),
            Ok(model) => Ok(model),
        }
    }
}

fn build_linear_atomic(d: &LinearAtomicDoc, violations: &mut Vec<Violation>) -> Result<SourceModel> {
    for name in d.components.keys().filter(|k| !d.variables.contains(k)) {
        violations.push(error(ViolationKind::UndeclaredVariable { section: "components", name: name.clone() }));
    }
    let mut vars = Vec::with_capacity(d.variables.len());
    for v in &d.variables {
        match d.components.get(v) {
            Some(c) => vars.push((v.clone(), c.clone())),
            None => {
                violations.push(error(ViolationKind::MissingDefinition { variable: v.clone() }));
                vars.push((v.clone(), Vec::new()));
            }
        }
    }
    let atoms = d.atoms.iter().map(|(k, w)| (k.clone(), w.0.clone())).collect();
    Ok(LinearAtomicSource::new(d.bits.clone(), atoms, vars)?.into())
}

fn build_pmf(d: &PmfDoc, violations: &mut Vec<Violation>) -> Result<SourceModel> {
    let mut outcomes = Vec::with_capacity(d.outcomes.len());
    for (i, o) in d.outcomes.iter().enumerate() {
        let mut values = Vec::with_capacity(o.values.len());
        for v in &o.values {
            match v {
                serde_json::Value::String(s) => values.push(s.clone()),
                serde_json::Value::Number(n) => values.push(n.to_string()),
                serde_json::Value::Bool(b) => values.push(b.to_string()),
                other => violations.push(error(ViolationKind::BadValue {
                    section: "outcomes",
                    detail: format!("outcome {i} has non-scalar value {other}"),
                })),
            }
        }
        outcomes.push((o.p.0.clone(), values));
    }
    let src = PmfSource::new(d.variables.clone(), outcomes)?;
    // Probability violations are structural for a document.
    violations.extend(src.validate());
    Ok(src.into())
}

fn build_table(d: &EntropyTableDoc, violations: &mut Vec<Violation>) -> Result<SourceModel> {
    let mut entries = Vec::with_capacity(d.entropy.len());
    for (key, value) in &d.entropy {
        let mut b = Subset::empty();
        let mut ok = true;
        for name in key.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match d.variables.iter().position(|v| v == name) {
                Some(i) if !b.contains(i) => b = b.with(i),
                Some(_) => {
                    ok = false;
                    violations.push(error(ViolationKind::BadValue {
                        section: "entropy",
                        detail: format!("key {key:?} repeats {name}"),
                    }));
                }
                None => {
                    ok = false;
                    violations.push(error(ViolationKind::UndeclaredVariable { section: "entropy", name: name.to_string() }));
                }
            }
        }
        if ok {
            entries.push((b, value.0.clone()));
        }
    }
    if !violations.is_empty() {
        // Dropped keys would otherwise show up again as missing entries.
        return Err(Error::InvalidModel(Vec::new()));
    }
    Ok(EntropyTableSource::new(d.variables.clone(), entries)?.into())
}

/// Reads, parses and constructs a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<(SourceModel, Option<String>)> {
    let doc = ModelDocument::load(path)?;
    let model = doc.build()?;
    Ok((model, doc.dependent().map(str::to_string)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::submodular::SetFunction;

    const EXAMPLE_A: &str = r#"{
        "model": "linear_atomic",
        "variables": ["Y", "X1", "X2"],
        "bits": ["a", "b", "c"],
        "components": {"Y": ["a", "b", "c"], "X1": ["a", "b"], "X2": ["c"]},
        "dependent": "Y"
    }"#;

    #[test]
    fn parses_linear_atomic() {
        let doc = ModelDocument::from_json(EXAMPLE_A).unwrap();
        assert_eq!(doc.dependent(), Some("Y"));
        let SourceModel::LinearAtomic(s) = doc.build().unwrap() else { panic!() };
        assert_eq!(s.eval(Subset::full(3)), rational(3, 1));
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = EXAMPLE_A.replace("\"dependent\"", "\"dependant\"");
        assert!(matches!(ModelDocument::from_json(&text), Err(Error::Json(_))));
        assert!(ModelDocument::from_json(r#"{"model": "gaussian", "variables": []}"#).is_err());
    }

    #[test]
    fn pmf_with_rational_probabilities() {
        let text = r#"{"model": "pmf", "variables": ["A", "B"],
            "outcomes": [{"p": "1/2", "values": [0, 0]}, {"p": "1/2", "values": [1, "x"]}]}"#;
        let model = ModelDocument::from_json(text).unwrap().build().unwrap();
        let SourceModel::Pmf(s) = model else { panic!() };
        assert!((s.eval(Subset::full(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pmf_mass_violation_is_reported() {
        let text = r#"{"model": "pmf", "variables": ["A"],
            "outcomes": [{"p": "9/20", "values": [0]}, {"p": "9/20", "values": [1]}]}"#;
        let doc = ModelDocument::from_json(text).unwrap();
        let v = crate::sources::validate(&doc);
        assert!(v.iter().any(|x| matches!(x.kind, ViolationKind::ProbabilitySum { .. })));
    }

    #[test]
    fn entropy_table_keys() {
        let text = r#"{"model": "entropy_table", "variables": ["A", "B"],
            "entropy": {"A": 1, "B": "1", "A,B": "3/2"}}"#;
        let model = ModelDocument::from_json(text).unwrap().build().unwrap();
        let SourceModel::EntropyTable(s) = model else { panic!() };
        assert_eq!(s.eval(Subset::full(2)), rational(3, 2));

        let bad = r#"{"model": "entropy_table", "variables": ["A"], "entropy": {"A": 1, "Q": 2}}"#;
        let Err(Error::InvalidModel(v)) = ModelDocument::from_json(bad).unwrap().build() else { panic!() };
        assert!(matches!(&v[0].kind, ViolationKind::UndeclaredVariable { name, .. } if name == "Q"));
    }

    #[test]
    fn undeclared_dependent() {
        let text = EXAMPLE_A.replace("\"dependent\": \"Y\"", "\"dependent\": \"Q\"");
        assert!(matches!(ModelDocument::from_json(&text).unwrap().build(), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn round_trips_through_json() {
        let doc = ModelDocument::from_json(EXAMPLE_A).unwrap();
        let again = ModelDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(again.variables(), doc.variables());
    }
}
