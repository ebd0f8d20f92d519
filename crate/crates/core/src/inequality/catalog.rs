//! JSON catalog documents:
//!
//! ```json
//! {"inequalities": [
//!   {"name": "CHSH", "settings": [2, 2],
//!    "terms": [{"tuple": [1, 1], "coeff": "1"}, ...],
//!    "lower": "-2", "upper": "2"}
//! ]}
//! ```
//!
//! Coefficients and bounds are rational strings `"p"` or `"p/q"`; tuple entry
//! `0` marks an unmeasured party.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BellInequality;
use crate::error::{Error, Result};
use crate::polytope::{Scenario, SettingTuple};
use crate::rational;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    inequalities: Vec<Entry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub settings: Vec<usize>,
    pub terms: Vec<TermEntry>,
    pub lower: Option<String>,
    pub upper: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub tuple: SettingTuple,
    pub coeff: String,
}

impl From<&BellInequality> for Entry {
    fn from(ineq: &BellInequality) -> Self {
        Entry {
            name: ineq.name.clone(),
            settings: ineq.scenario().settings().to_vec(),
            terms: ineq
                .terms()
                .iter()
                .map(|(t, c)| TermEntry {
                    tuple: t.clone(),
                    coeff: rational::format(c),
                })
                .collect(),
            lower: ineq.lower().map(rational::format),
            upper: ineq.upper().map(rational::format),
        }
    }
}

impl TryFrom<Entry> for BellInequality {
    type Error = Error;

    fn try_from(entry: Entry) -> Result<Self> {
        let name = entry.name;
        let fail = |message: String| Error::CatalogEntry {
            entry: name.clone(),
            message,
        };
        let scenario = Scenario::new(entry.settings).map_err(|e| fail(e.to_string()))?;
        let parse = |what: &str, text: &str| {
            rational::parse(text).ok_or_else(|| fail(format!("{what} `{text}` is not a rational")))
        };
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(entry.terms.len());
        for term in entry.terms {
            scenario
                .check_tuple(&term.tuple)
                .map_err(|e| fail(format!("tuple {:?}: {e}", term.tuple)))?;
            if !seen.insert(term.tuple.clone()) {
                return Err(fail(format!("duplicate tuple {:?}", term.tuple)));
            }
            terms.push((term.tuple, parse("coefficient", &term.coeff)?));
        }
        let lower = entry.lower.as_deref().map(|t| parse("lower bound", t)).transpose()?;
        let upper = entry.upper.as_deref().map(|t| parse("upper bound", t)).transpose()?;
        BellInequality::new(name.clone(), scenario, terms, lower, upper)
            .map_err(|e| fail(e.to_string()))
    }
}

impl Serialize for BellInequality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Entry::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BellInequality {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entry = Entry::deserialize(d)?;
        BellInequality::try_from(entry).map_err(serde::de::Error::custom)
    }
}

pub fn parse_catalog(text: &str) -> Result<Vec<BellInequality>> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::CatalogSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.inequalities.into_iter().map(BellInequality::try_from).collect()
}

pub fn serialize_catalog(inequalities: &[BellInequality]) -> String {
    let doc = Document {
        inequalities: inequalities.iter().map(Entry::from).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("catalog serialization cannot fail")
}

/// A parsed catalog with lookup by name.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub inequalities: Vec<BellInequality>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Catalog {
            inequalities: parse_catalog(text)?,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, name: &str) -> Result<&BellInequality> {
        self.inequalities
            .iter()
            .find(|i| i.name == name)
            .ok_or_else(|| Error::UnknownInequality(name.to_string()))
    }

    pub fn to_json(&self) -> String {
        serialize_catalog(&self.inequalities)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;

    #[test]
    fn minimal_document_with_i10() {
        let text = serialize_catalog(&[fixtures::i10()]);
        let parsed = parse_catalog(&text).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].terms().len(), 17);
        assert_eq!(parsed[0].lower(), Some(&int(0)));
        assert_eq!(parsed[0].upper(), Some(&int(8)));
        assert_eq!(parsed[0], fixtures::i10());
    }

    #[test]
    fn empty_document() {
        assert!(parse_catalog(r#"{"inequalities": []}"#).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_tuple() {
        let text = r#"{"inequalities": [{"name": "bad", "settings": [3, 3],
            "terms": [{"tuple": [4, 1], "coeff": "1"}], "lower": null, "upper": null}]}"#;
        let err = parse_catalog(text).unwrap_err();
        assert!(matches!(err, Error::CatalogEntry { ref entry, .. } if entry == "bad"), "{err}");
    }

    #[test]
    fn decimal_coefficient_rejected() {
        let text = r#"{"inequalities": [{"name": "bad", "settings": [1, 1],
            "terms": [{"tuple": [1, 1], "coeff": "0.5"}], "lower": null, "upper": null}]}"#;
        assert!(matches!(parse_catalog(text), Err(Error::CatalogEntry { .. })));
    }

    #[test]
    fn syntax_error_reports_position() {
        let text = "{\"inequalities\": [\n  {\"name\": }\n]}";
        match parse_catalog(text) {
            Err(Error::CatalogSyntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_tuple_rejected() {
        let text = r#"{"inequalities": [{"name": "dup", "settings": [1, 1],
            "terms": [{"tuple": [1, 1], "coeff": "1"}, {"tuple": [1, 1], "coeff": "2"}],
            "lower": null, "upper": null}]}"#;
        assert!(parse_catalog(text).is_err());
    }

    #[test]
    fn lookup_by_name() {
        let cat = Catalog {
            inequalities: vec![fixtures::i10(), fixtures::h10()],
        };
        assert_eq!(cat.get("H10").unwrap().terms().len(), 16);
        assert!(matches!(cat.get("nope"), Err(Error::UnknownInequality(_))));
    }
}
