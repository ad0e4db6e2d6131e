//! Input documents: either `{"m", "n", "v"}` or `{"family", "params"}`.

use hankelkit_core::GeneratingVector;
use serde::Deserialize;
use serde_json::Value;

use crate::family::{FamilyParams, FamilySpec};
use crate::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDocument {
    m: usize,
    n: usize,
    v: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDocument {
    family: String,
    #[serde(default)]
    params: Option<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputDocument {
    Vector(GeneratingVector),
    Family(FamilySpec),
}

pub fn parse_document(text: &str) -> CliResult<InputDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed input: {e}")))?;
    let is_family = value.as_object().is_some_and(|o| o.contains_key("family"));
    if is_family {
        let doc: FamilyDocument =
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("malformed family document: {e}")))?;
        let params: FamilyParams = match doc.params {
            Some(p) => serde_json::from_value(p).map_err(|e| CliError::Input(format!("bad family params: {e}")))?,
            None => FamilyParams::default(),
        };
        return Ok(InputDocument::Family(FamilySpec::resolve(&doc.family, &params)?));
    }
    let doc: VectorDocument =
        serde_json::from_value(value).map_err(|e| CliError::Input(format!("malformed vector document: {e}")))?;
    let gen = GeneratingVector::new(doc.m, doc.n, doc.v).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(InputDocument::Vector(gen))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vector_with_scientific_notation() {
        let doc = parse_document(r#"{"m": 2, "n": 2, "v": [1e0, -2.5E-1, 3]}"#).unwrap();
        let InputDocument::Vector(gen) = doc else { panic!() };
        assert_eq!(gen.values(), &[1.0, -0.25, 3.0]);
    }

    #[test]
    fn parses_family_document() {
        let doc = parse_document(r#"{"family": "noncd", "params": {"k": 3}}"#).unwrap();
        assert_eq!(doc, InputDocument::Family(FamilySpec::Noncd { k: 3 }));
    }

    #[test]
    fn rejects_bad_documents() {
        for text in [
            "not json",
            r#"{"m": 2, "n": 2, "v": [1, 2]}"#,
            r#"{"m": 2, "n": 2, "v": [1, 2, 3], "extra": 1}"#,
            r#"{"family": "bogus", "params": {}}"#,
            r#"{"family": "noncd", "params": {"q": 1}}"#,
            r#"{"family": "truncated", "params": {"m": 6}}"#,
        ] {
            assert!(matches!(parse_document(text), Err(CliError::Input(_))), "{text}");
        }
    }
}
