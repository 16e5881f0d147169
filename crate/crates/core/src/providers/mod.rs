//! Uniform clients for every external capability: chat LLM, text-to-image,
//! text-to-speech, text-to-audio, audio search, and cross-modal embeddings.
//!
//! Each capability is a trait; HTTP implementations, deterministic mocks,
//! and the caching/retry wrappers all live behind the same interfaces so
//! agents never care which one they talk to.

pub mod cache;
pub mod http;
pub mod media;
pub mod mock;
pub mod registry;
pub mod retry;
pub mod trace;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cache::{cached_call, CacheStore};
pub use registry::Providers;

#[derive(Debug, Error)]
pub enum ProviderError {
    /// Network-level failure; retryable.
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { message: String, attempts: u32 },
    /// The provider answered with an error status.
    #[error("provider `{provider}` error: {message}")]
    Provider { provider: String, message: String },
    /// Required auth token environment variable is unset.
    #[error("authentication error: environment variable `{token_env}` is not set")]
    Auth { token_env: String },
    #[error("empty completion from provider `{provider}`")]
    EmptyCompletion { provider: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Returned payload does not match what was requested.
    #[error("{0}")]
    Mismatch(String),
    #[error("embedding space `{space}` does not accept {payload} payloads")]
    SpaceMismatch { space: String, payload: String },
    #[error("cannot normalize a zero-norm embedding vector")]
    ZeroNorm,
    #[error("malformed provider response: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChatRole {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: ChatRole,
    pub content: String,
}

/// A chat-completions style request: messages in, one completion out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_tokens: u32,
    pub model: String,
}

impl ChatRequest {
    pub fn new(system: impl Into<String>, user: impl Into<String>) -> Self {
        ChatRequest {
            messages: vec![
                ChatMessage { role: ChatRole::System, content: system.into() },
                ChatMessage { role: ChatRole::User, content: user.into() },
            ],
            temperature: 0.7,
            max_tokens: 2048,
            model: String::new(),
        }
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    /// All message contents joined, used by prompt-capture assertions.
    pub fn joined_content(&self) -> String {
        self.messages
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.messages.is_empty() {
            v.push("messages must be non-empty".to_string());
        }
        if let Some(last) = self.messages.last() {
            if last.role == ChatRole::Assistant {
                v.push("last message must have role user or system".to_string());
            }
        }
        v
    }

    /// Stable JSON used for cache keys: field order fixed, prompt text
    /// whitespace-normalized so formatting churn does not bust the cache.
    pub fn canonical_json(&self) -> String {
        let messages: Vec<serde_json::Value> = self
            .messages
            .iter()
            .map(|m| {
                serde_json::json!({
                    "role": match m.role {
                        ChatRole::System => "system",
                        ChatRole::User => "user",
                        ChatRole::Assistant => "assistant",
                    },
                    "content": normalize_whitespace(&m.content),
                })
            })
            .collect();
        serde_json::json!({
            "kind": "chat",
            "model": self.model,
            "temperature": format!("{:.6}", self.temperature),
            "max_tokens": self.max_tokens,
            "messages": messages,
        })
        .to_string()
    }
}

pub(crate) fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Transport for every LLM agent in the pipeline.
pub trait ChatProvider: Send + Sync {
    fn id(&self) -> &str;
    fn chat(&self, request: &ChatRequest) -> Result<String, ProviderError>;
}

/// Text-to-image generation; returns encoded PNG bytes.
pub trait ImageProvider: Send + Sync {
    fn id(&self) -> &str;
    fn generate(
        &self,
        prompt: &str,
        seed: u64,
        width: u32,
        height: u32,
    ) -> Result<Vec<u8>, ProviderError>;
}

/// Text-to-speech synthesis; returns encoded WAV bytes.
pub trait SpeechProvider: Send + Sync {
    fn id(&self) -> &str;
    fn synthesize(&self, text: &str, voice: &str) -> Result<Vec<u8>, ProviderError>;
}

/// Text-to-audio generation for sound effects and music; returns WAV bytes.
pub trait AudioProvider: Send + Sync {
    fn id(&self) -> &str;
    fn generate(&self, prompt: &str, target_duration_s: f64) -> Result<Vec<u8>, ProviderError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub query: String,
    pub duration_min_s: f64,
    pub duration_max_s: f64,
    pub limit: u32,
}

impl SearchQuery {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.limit < 1 {
            v.push("limit ≥ 1".to_string());
        }
        if self.query.trim().is_empty() {
            v.push("query must be non-empty".to_string());
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub id: String,
    /// Where the preview audio can be fetched from (URL or path).
    pub preview_location: String,
    pub duration_s: f64,
}

/// Ranked audio retrieval (Freesound-style full-text search).
pub trait AudioSearchProvider: Send + Sync {
    fn id(&self) -> &str;
    fn search(&self, query: &SearchQuery) -> Result<Vec<SearchHit>, ProviderError>;
    fn fetch(&self, hit: &SearchHit) -> Result<Vec<u8>, ProviderError>;
}

/// The three cross-modal embedding spaces used for alignment scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingSpace {
    ImageText,
    AudioText,
    AudioImage,
}

impl std::fmt::Display for EmbeddingSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmbeddingSpace::ImageText => write!(f, "image_text"),
            EmbeddingSpace::AudioText => write!(f, "audio_text"),
            EmbeddingSpace::AudioImage => write!(f, "audio_image"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum EmbedPayload {
    Text(String),
    /// Encoded image bytes (PNG).
    Image(Vec<u8>),
    /// Encoded audio bytes (WAV).
    Audio(Vec<u8>),
}

impl EmbedPayload {
    pub fn label(&self) -> &'static str {
        match self {
            EmbedPayload::Text(_) => "text",
            EmbedPayload::Image(_) => "image",
            EmbedPayload::Audio(_) => "audio",
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            EmbedPayload::Text(t) => t.trim().is_empty(),
            EmbedPayload::Image(b) | EmbedPayload::Audio(b) => b.is_empty(),
        }
    }

    pub fn bytes(&self) -> &[u8] {
        match self {
            EmbedPayload::Text(t) => t.as_bytes(),
            EmbedPayload::Image(b) | EmbedPayload::Audio(b) => b,
        }
    }
}

impl EmbeddingSpace {
    pub fn accepts(&self, payload: &EmbedPayload) -> bool {
        matches!(
            (self, payload),
            (EmbeddingSpace::ImageText, EmbedPayload::Text(_))
                | (EmbeddingSpace::ImageText, EmbedPayload::Image(_))
                | (EmbeddingSpace::AudioText, EmbedPayload::Text(_))
                | (EmbeddingSpace::AudioText, EmbedPayload::Audio(_))
                | (EmbeddingSpace::AudioImage, EmbedPayload::Audio(_))
                | (EmbeddingSpace::AudioImage, EmbedPayload::Image(_))
        )
    }
}

/// Unit-norm vector in one of the embedding spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
    pub space: EmbeddingSpace,
}

impl EmbeddingVector {
    /// Builds a unit-norm vector, rejecting the undefined zero direction.
    pub fn normalized(values: Vec<f64>, space: EmbeddingSpace) -> Result<Self, ProviderError> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(ProviderError::ZeroNorm);
        }
        Ok(EmbeddingVector { values: values.into_iter().map(|v| v / norm).collect(), space })
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub trait EmbeddingProvider: Send + Sync {
    fn id(&self) -> &str;
    fn embed(
        &self,
        space: EmbeddingSpace,
        payload: &EmbedPayload,
    ) -> Result<EmbeddingVector, ProviderError>;
}

/// Checks the payload against the space before delegating to the provider,
/// and guarantees the result is unit-norm.
pub fn embed_checked(
    provider: &dyn EmbeddingProvider,
    space: EmbeddingSpace,
    payload: &EmbedPayload,
) -> Result<EmbeddingVector, ProviderError> {
    if payload.is_empty() {
        return Err(ProviderError::Precondition("embedding payload is empty".to_string()));
    }
    if !space.accepts(payload) {
        return Err(ProviderError::SpaceMismatch {
            space: space.to_string(),
            payload: payload.label().to_string(),
        });
    }
    let vector = provider.embed(space, payload)?;
    EmbeddingVector::normalized(vector.values, vector.space)
}

/// Dot product of two unit vectors from the same space.
pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, ProviderError> {
    if a.space != b.space {
        return Err(ProviderError::Mismatch(format!(
            "cosine over different spaces: {} vs {}",
            a.space, b.space
        )));
    }
    if a.values.len() != b.values.len() {
        return Err(ProviderError::Mismatch(format!(
            "cosine over different dimensions: {} vs {}",
            a.values.len(),
            b.values.len()
        )));
    }
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum())
}
