//! Run configuration: one declarative file covering providers, turn budgets,
//! mix gains, and video parameters, with `${VAR}` environment interpolation
//! for secrets.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{SchemaError, Validate, WritingMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    /// Deterministic scripted stand-in, no network.
    Mock,
    /// HTTP endpoint speaking the provider's wire shape.
    Http,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcquireMode {
    Generate,
    Retrieve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryConfig {
    pub max_attempts: u32,
    pub base_delay_ms: u64,
}

impl Default for RetryConfig {
    fn default() -> Self {
        Self { max_attempts: 3, base_delay_ms: 250 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChatProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: String,
    /// Model tag sent with every request; a deployment choice, not a code dependency.
    pub model: String,
    pub token_env: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub retry: RetryConfig,
}

impl Default for ChatProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: String::new(),
            model: String::new(),
            token_env: "STORYPIPE_LLM_TOKEN".to_string(),
            temperature: 0.7,
            max_tokens: 2048,
            retry: RetryConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImageProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: String,
    pub token_env: String,
    pub width: u32,
    pub height: u32,
    /// Optional style suffix appended to every image prompt,
    /// e.g. "children's book illustration".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub style: Option<String>,
}

impl Default for ImageProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: String::new(),
            token_env: "STORYPIPE_IMAGE_TOKEN".to_string(),
            width: 1280,
            height: 720,
            style: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpeechProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: String,
    pub token_env: String,
    pub voice: String,
    pub sample_rate: u32,
}

impl Default for SpeechProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: String::new(),
            token_env: "STORYPIPE_SPEECH_TOKEN".to_string(),
            voice: "default".to_string(),
            sample_rate: 24_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AudioProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: String,
    pub token_env: String,
    pub mode: AcquireMode,
    pub enabled: bool,
}

impl Default for AudioProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: String::new(),
            token_env: "STORYPIPE_AUDIO_TOKEN".to_string(),
            mode: AcquireMode::Generate,
            enabled: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: String,
    pub token_env: String,
    /// Duration window applied to retrieval queries, in seconds.
    pub duration_min_s: f64,
    pub duration_max_s: f64,
    pub limit: u32,
}

impl Default for SearchProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: String::new(),
            token_env: "STORYPIPE_FREESOUND_TOKEN".to_string(),
            duration_min_s: 3.0,
            duration_max_s: 30.0,
            limit: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: String,
    pub token_env: String,
    pub dim: usize,
}

impl Default for EmbeddingProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: String::new(),
            token_env: "STORYPIPE_EMBED_TOKEN".to_string(),
            dim: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ProvidersConfig {
    pub chat: ChatProviderConfig,
    pub image: ImageProviderConfig,
    pub speech: SpeechProviderConfig,
    pub sound: AudioProviderConfig,
    pub music: AudioProviderConfig,
    pub search: SearchProviderConfig,
    pub embedding: EmbeddingProviderConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixGains {
    pub speech: f64,
    pub sound: f64,
    pub music: f64,
    /// Master peak ceiling in dBFS (negative).
    pub ceiling_dbfs: f64,
}

impl Default for MixGains {
    fn default() -> Self {
        Self { speech: 1.0, sound: 0.5, music: 0.25, ceiling_dbfs: -1.0 }
    }
}

impl MixGains {
    pub fn ceiling_linear(&self) -> f64 {
        10f64.powf(self.ceiling_dbfs / 20.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VideoConfig {
    pub width: u32,
    pub height: u32,
    pub fps: u32,
    /// Total slide transition duration between adjacent pages, in seconds.
    pub transition_s: f64,
    /// Ken Burns motion magnitude bounds, as a fraction of the frame.
    pub motion_min: f64,
    pub motion_max: f64,
    /// External encoder executable; overridden by `STORYPIPE_ENCODER`.
    pub encoder_bin: String,
}

impl Default for VideoConfig {
    fn default() -> Self {
        Self {
            width: 1280,
            height: 720,
            fps: 24,
            transition_s: 0.5,
            motion_min: 0.02,
            motion_max: 0.06,
            encoder_bin: "ffmpeg".to_string(),
        }
    }
}

impl VideoConfig {
    pub fn encoder_bin(&self) -> String {
        std::env::var("STORYPIPE_ENCODER").unwrap_or_else(|_| self.encoder_bin.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    /// The judge is configured separately from the writing model.
    pub judge: ChatProviderConfig,
    pub num_pages: u32,
    pub audience: String,
    pub requirements: Vec<String>,
    pub topic_retry_budget: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            judge: ChatProviderConfig::default(),
            num_pages: 4,
            audience: "children 4-8".to_string(),
            requirements: vec![
                "attractiveness".to_string(),
                "education".to_string(),
                "warmth".to_string(),
                "relevance".to_string(),
                "coherence".to_string(),
            ],
            topic_retry_budget: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CacheConfig {
    pub enabled: bool,
    /// Cache root; defaults to `<workdir>/cache` when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

impl Default for CacheConfig {
    fn default() -> Self {
        Self { enabled: true, dir: None }
    }
}

/// Everything a run needs, loadable from one TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Maximum writer/expert dialogue turns before outline writing.
    pub dialogue_turns: u32,
    /// Maximum reviser/reviewer turns per prompt refinement.
    pub refine_turns: u32,
    pub rng_seed: u64,
    pub writing_method: WritingMethod,
    /// Worker bound for stage and per-page fan-out. Does not affect outputs.
    pub workers: usize,
    /// Target sentences per chapter, inclusive range.
    pub chapter_sentences: [u32; 2],
    /// Optional directory overriding the built-in instruction templates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template_dir: Option<PathBuf>,
    pub providers: ProvidersConfig,
    pub mix: MixGains,
    pub video: VideoConfig,
    pub eval: EvalConfig,
    pub cache: CacheConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            dialogue_turns: 3,
            refine_turns: 3,
            rng_seed: 0,
            writing_method: WritingMethod::StoryAgent,
            workers: 4,
            chapter_sentences: [2, 4],
            template_dir: None,
            providers: ProvidersConfig::default(),
            mix: MixGains::default(),
            video: VideoConfig::default(),
            eval: EvalConfig::default(),
            cache: CacheConfig::default(),
        }
    }
}

impl Validate for PipelineConfig {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.dialogue_turns < 1 {
            v.push("dialogue_turns ≥ 1".to_string());
        }
        if self.refine_turns < 1 {
            v.push("refine_turns ≥ 1".to_string());
        }
        if self.workers < 1 {
            v.push("workers ≥ 1".to_string());
        }
        for (name, gain) in [
            ("speech", self.mix.speech),
            ("sound", self.mix.sound),
            ("music", self.mix.music),
        ] {
            if !(gain > 0.0 && gain <= 1.0) {
                v.push(format!("mix gain `{name}` must be in (0, 1], got {gain}"));
            }
        }
        if self.video.motion_min <= 0.0 || self.video.motion_max < self.video.motion_min {
            v.push("motion bounds must satisfy 0 < motion_min ≤ motion_max".to_string());
        }
        if self.video.transition_s < 0.0 {
            v.push("transition_s must be ≥ 0".to_string());
        }
        if self.video.fps == 0 || self.video.width == 0 || self.video.height == 0 {
            v.push("video dimensions and fps must be positive".to_string());
        }
        v
    }
}

impl PipelineConfig {
    /// Loads a TOML config file, interpolating `${VAR}` references from the
    /// environment before parsing.
    pub fn load(path: &Path) -> Result<Self, SchemaError> {
        let raw = std::fs::read_to_string(path)?;
        let interpolated = interpolate_env(&raw)?;
        let config: PipelineConfig = toml::from_str(&interpolated)
            .map_err(|e| SchemaError::Config(format!("{}: {e}", path.display())))?;
        config.check()?;
        Ok(config)
    }

    /// Content hash of everything that affects run outputs.
    ///
    /// The worker bound is excluded: parallel and serial execution produce
    /// identical artifacts, so resuming under a different worker count is
    /// legitimate.
    pub fn fingerprint(&self) -> String {
        let mut canonical = self.clone();
        canonical.workers = 0;
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(&json);
        hex::encode(hasher.finalize())
    }
}

/// Replaces `${VAR}` with the value of environment variable `VAR`.
/// Referencing an unset variable is a config error.
fn interpolate_env(text: &str) -> Result<String, SchemaError> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        let Some(end) = after.find('}') else {
            return Err(SchemaError::Config("unterminated ${ in config".to_string()));
        };
        let name = &after[..end];
        let value = std::env::var(name)
            .map_err(|_| SchemaError::Config(format!("environment variable `{name}` is not set")))?;
        out.push_str(&value);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_experiment_settings() {
        let config = PipelineConfig::default();
        assert_eq!(config.dialogue_turns, 3);
        assert_eq!(config.refine_turns, 3);
    }

    #[test]
    fn fingerprint_ignores_worker_count() {
        let mut a = PipelineConfig::default();
        let mut b = PipelineConfig::default();
        a.workers = 1;
        b.workers = 8;
        assert_eq!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn fingerprint_tracks_refine_turns() {
        let a = PipelineConfig::default();
        let mut b = PipelineConfig::default();
        b.refine_turns = 5;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn env_interpolation_resolves_variables() {
        std::env::set_var("STORYPIPE_TEST_INTERP", "resolved");
        let out = interpolate_env("token = \"${STORYPIPE_TEST_INTERP}\"").unwrap();
        assert_eq!(out, "token = \"resolved\"");
    }

    #[test]
    fn env_interpolation_errors_on_unset() {
        let err = interpolate_env("x = \"${STORYPIPE_DEFINITELY_UNSET_VAR}\"").unwrap_err();
        assert!(err.to_string().contains("STORYPIPE_DEFINITELY_UNSET_VAR"));
    }

    #[test]
    fn invalid_gain_rejected() {
        let mut config = PipelineConfig::default();
        config.mix.sound = 0.0;
        assert!(config.violations().iter().any(|v| v.contains("sound")));
    }

    #[test]
    fn load_round_trips_minimal_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        std::fs::write(&path, "rng_seed = 42\n[providers.chat]\nkind = \"mock\"\n").unwrap();
        let config = PipelineConfig::load(&path).unwrap();
        assert_eq!(config.rng_seed, 42);
        assert_eq!(config.providers.chat.kind, ProviderKind::Mock);
    }
}
