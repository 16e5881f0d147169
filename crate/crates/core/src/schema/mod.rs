//! Pipeline artifacts and inter-agent messages as versioned, validated,
//! round-trippable records.
//!
//! Every record that crosses a stage boundary is one of the types in this
//! module, serialized through [`encode_record`] / [`decode_record`] so the
//! on-disk artifact layout stays stable and diffable.

mod codec;
mod config;
mod types;

pub use codec::{decode_record, decode_value, encode_record, RecordKind, Recordable, SCHEMA_VERSION};
pub use config::{
    AcquireMode, AudioProviderConfig, CacheConfig, ChatProviderConfig, EmbeddingProviderConfig,
    EvalConfig, ImageProviderConfig, MixGains, PipelineConfig, ProviderKind, ProvidersConfig,
    RetryConfig, SearchProviderConfig, SpeechProviderConfig, VideoConfig,
};
pub use types::{
    Asset, AssetModality, Chapter, DialogueTranscript, DialogueTurn, ModalityPrompt, Outline,
    PipelineState, PromptModality, Provenance, RevisionExchange, Role, RoleTable, StageStatus,
    Story, StoryPage, StorySetting, TopicType, Verdict, WritingMethod,
};

use thiserror::Error;

/// Errors produced while decoding or validating schema records.
#[derive(Debug, Error)]
pub enum SchemaError {
    /// The document is not well-formed structured text at all.
    #[error("parse error: {0}")]
    Parse(String),
    /// The document parsed but does not satisfy the record contract.
    #[error("validation error: {}", violations.join("; "))]
    Validation { violations: Vec<String> },
    /// The document carries a different record kind than requested.
    #[error("kind mismatch: expected `{expected}`, found `{found}`")]
    KindMismatch { expected: String, found: String },
    /// The document's schema version is not supported.
    #[error("unsupported schema version {found} (supported: {supported})")]
    Version { found: u32, supported: u32 },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Invariant checking shared by every schema type.
///
/// An empty violation list means the record is valid. Violations are
/// human-readable and name the field or invariant that failed.
pub trait Validate {
    fn violations(&self) -> Vec<String>;

    fn check(&self) -> Result<(), SchemaError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(SchemaError::Validation { violations })
        }
    }
}

/// Lists every invariant violation of a story setting; empty means valid.
pub fn validate_setting(setting: &StorySetting) -> Vec<String> {
    setting.violations()
}
