//! JSON presentation files:
//! `{"generators": ["g", ...], "relations": [[["g", 1], ["h", -1]], ...]}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Presentation, PresentationError, Word};

/// On-disk form of a presentation, with relations spelled by generator name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<(String, i64)>>,
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        serde_json::from_str(text).map_err(|e| PresentationError::Format(e.to_string()))
    }

    pub fn into_presentation(self) -> Result<Presentation, PresentationError> {
        let mut index = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if index.insert(g.as_str(), i).is_some() {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        let mut rels = Vec::with_capacity(self.relations.len());
        for r in &self.relations {
            let mut terms = Vec::with_capacity(r.len());
            for (g, e) in r {
                let &id = index
                    .get(g.as_str())
                    .ok_or_else(|| PresentationError::UnknownGenerator(g.clone()))?;
                if *e == 0 {
                    return Err(PresentationError::ZeroExponent(g.clone()));
                }
                terms.push((id, *e));
            }
            rels.push(Word::new(terms));
        }
        Presentation::new(self.generators, rels)
    }

    /// Canonical file for `p`: generators sorted, relations in order.
    pub fn from_presentation(p: &Presentation) -> Self {
        let mut generators = p.generators().to_vec();
        generators.sort();
        let relations = p
            .relations()
            .iter()
            .map(|r| r.terms().iter().map(|&(g, e)| (p.generators()[g].clone(), e)).collect())
            .collect();
        PresentationFile { generators, relations }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        PresentationFile::parse(text)?.into_presentation()
    }

    pub fn to_json(&self) -> String {
        PresentationFile::from_presentation(self).to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{standard_zn, StandardStyle};

    #[test]
    fn round_trip_keeps_relations() {
        let p = standard_zn(3, StandardStyle::Intro3);
        let q = Presentation::from_json(&p.to_json()).unwrap();
        assert_eq!(q.relation_count(), p.relation_count());
        for (a, b) in p.relations().iter().zip(q.relations()) {
            assert_eq!(p.format_word(a), q.format_word(b));
        }
        let mut sorted = p.generators().to_vec();
        sorted.sort();
        assert_eq!(q.generators(), sorted.as_slice());
        // the canonical writer is a fixpoint
        assert_eq!(q.to_json(), p.to_json());
    }

    #[test]
    fn bad_files() {
        let dup = r#"{"generators": ["a", "a"], "relations": []}"#;
        assert_eq!(
            Presentation::from_json(dup),
            Err(PresentationError::DuplicateGenerator("a".into()))
        );
        let unknown = r#"{"generators": ["a"], "relations": [[["b", 1]]]}"#;
        assert_eq!(
            Presentation::from_json(unknown),
            Err(PresentationError::UnknownGenerator("b".into()))
        );
        let zero = r#"{"generators": ["a"], "relations": [[["a", 0]]]}"#;
        assert_eq!(
            Presentation::from_json(zero),
            Err(PresentationError::ZeroExponent("a".into()))
        );
        assert!(matches!(
            Presentation::from_json("{"),
            Err(PresentationError::Format(_))
        ));
        let ok = r#"{"generators": ["a", "b"], "relations": [[["a", 2], ["b", -1]], []]}"#;
        let p = Presentation::from_json(ok).unwrap();
        assert_eq!(p.to_string(), "< a, b | a^2 b^-1, <> >");
    }
}
