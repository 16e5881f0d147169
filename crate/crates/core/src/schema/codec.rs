//! Versioned JSON envelope shared by every persisted record.
//!
//! Documents look like:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "kind": "story",
//!   "data": { ... }
//! }
//! ```
//!
//! Encoding is deterministic: struct fields serialize in declaration order,
//! collections are `Vec`/`BTreeMap`, and the same record always produces
//! byte-identical output.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{SchemaError, Validate};

pub const SCHEMA_VERSION: u32 = 1;

/// Stable identifiers for record kinds, written into every document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    StorySetting,
    DialogueTranscript,
    Outline,
    Story,
    RoleTable,
    PromptSet,
    AssetManifest,
    PipelineState,
    TimelinePlan,
    EncoderPlan,
    TopicSet,
    Report,
}

impl std::fmt::Display for RecordKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).expect("kind serializes");
        write!(f, "{}", s.as_str().expect("kind is a string"))
    }
}

/// Implemented by every record type that can live in a document envelope.
pub trait Recordable: Serialize + DeserializeOwned + Validate {
    const KIND: RecordKind;
}

impl Recordable for super::StorySetting {
    const KIND: RecordKind = RecordKind::StorySetting;
}
impl Recordable for super::DialogueTranscript {
    const KIND: RecordKind = RecordKind::DialogueTranscript;
}
impl Recordable for super::Outline {
    const KIND: RecordKind = RecordKind::Outline;
}
impl Recordable for super::Story {
    const KIND: RecordKind = RecordKind::Story;
}
impl Recordable for super::RoleTable {
    const KIND: RecordKind = RecordKind::RoleTable;
}
impl Recordable for super::PipelineState {
    const KIND: RecordKind = RecordKind::PipelineState;
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema_version: u32,
    kind: RecordKind,
    data: T,
}

/// Serializes a valid record into its canonical document text.
///
/// Encoding a record that satisfies its invariants cannot fail; the caller
/// is expected to have validated anything user-supplied first.
pub fn encode_record<T: Recordable>(record: &T) -> String {
    let envelope = Envelope { schema_version: SCHEMA_VERSION, kind: T::KIND, data: record };
    let mut text = serde_json::to_string_pretty(&envelope).expect("schema types serialize");
    text.push('\n');
    text
}

/// Parses and validates a document produced by [`encode_record`].
pub fn decode_record<T: Recordable>(doc: &str) -> Result<T, SchemaError> {
    // Malformed text is a parse error; a well-formed document with missing
    // or mistyped fields is a validation error naming the field.
    let value: serde_json::Value =
        serde_json::from_str(doc).map_err(|e| SchemaError::Parse(e.to_string()))?;
    decode_value(value)
}

/// Decodes an already-parsed JSON value into a validated record.
pub fn decode_value<T: Recordable>(value: serde_json::Value) -> Result<T, SchemaError> {
    let version = value.get("schema_version").and_then(|v| v.as_u64());
    if let Some(found) = version {
        if found != SCHEMA_VERSION as u64 {
            return Err(SchemaError::Version {
                found: found as u32,
                supported: SCHEMA_VERSION,
            });
        }
    }
    if let Some(kind) = value.get("kind").and_then(|k| k.as_str()) {
        let expected = T::KIND.to_string();
        if kind != expected {
            return Err(SchemaError::KindMismatch { expected, found: kind.to_string() });
        }
    }
    let envelope: Envelope<T> = serde_json::from_value(value)
        .map_err(|e| SchemaError::Validation { violations: vec![e.to_string()] })?;
    envelope.data.check()?;
    Ok(envelope.data)
}

#[cfg(test)]
mod tests {
    use super::super::{
        Story, StoryPage, StorySetting, TopicType, Validate, WritingMethod,
    };
    use super::*;

    fn setting() -> StorySetting {
        StorySetting {
            topic: "sharing".into(),
            topic_type: TopicType::FamilyFriendship,
            audience: "children 4-8".into(),
            num_pages: 1,
            requirements: vec!["warmth".into(), "education".into()],
            main_role_hints: None,
        }
    }

    #[test]
    fn round_trip_identity() {
        let original = setting();
        let doc = encode_record(&original);
        let decoded: StorySetting = decode_record(&doc).unwrap();
        assert_eq!(decoded, original);
    }

    #[test]
    fn empty_optional_is_omitted_and_round_trips() {
        let doc = encode_record(&setting());
        assert!(!doc.contains("main_role_hints"));
        let decoded: StorySetting = decode_record(&doc).unwrap();
        assert_eq!(decoded.main_role_hints, None);
    }

    #[test]
    fn encoding_is_deterministic() {
        let record = setting();
        assert_eq!(encode_record(&record), encode_record(&record));
    }

    #[test]
    fn missing_required_field_names_it() {
        let doc = r#"{"schema_version":1,"kind":"story_setting","data":{"topic_type":"custom","audience":"kids","num_pages":1,"requirements":["x"]}}"#;
        let err = decode_record::<StorySetting>(doc).unwrap_err();
        match err {
            SchemaError::Validation { violations } => {
                assert!(violations[0].contains("topic"), "{violations:?}");
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn malformed_text_is_parse_error() {
        let err = decode_record::<StorySetting>("{not json").unwrap_err();
        assert!(matches!(err, SchemaError::Parse(_)));
    }

    #[test]
    fn non_contiguous_pages_rejected_on_decode() {
        let story = Story {
            pages: vec![
                StoryPage { index: 1, text: "a".into() },
                StoryPage { index: 3, text: "b".into() },
            ],
            method: WritingMethod::Direct,
        };
        // Encode bypasses validation; decode must reject.
        let doc = encode_record(&story);
        let err = decode_record::<Story>(&doc).unwrap_err();
        match err {
            SchemaError::Validation { violations } => {
                assert!(violations.iter().any(|m| m.contains("non-contiguous indices")));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let doc = encode_record(&setting());
        let err = decode_record::<Story>(&doc).unwrap_err();
        assert!(matches!(err, SchemaError::KindMismatch { .. }));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let doc = encode_record(&setting()).replace("\"schema_version\": 1", "\"schema_version\": 99");
        let err = decode_record::<StorySetting>(&doc).unwrap_err();
        assert!(matches!(err, SchemaError::Version { found: 99, .. }));
    }

    #[test]
    fn validate_trait_check_ok_for_valid() {
        assert!(setting().check().is_ok());
    }
}
