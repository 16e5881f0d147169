//! The narrative and media records that flow through the pipeline stages.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::Validate;

/// User-provided bundle that seeds the whole pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorySetting {
    pub topic: String,
    pub topic_type: TopicType,
    /// Target audience, e.g. "children 4-8".
    pub audience: String,
    pub num_pages: u32,
    /// Writing requirements, e.g. attractiveness, education, warmth.
    pub requirements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main_role_hints: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicType {
    SelfGrowing,
    FamilyFriendship,
    Environments,
    KnowledgeLearning,
    Custom,
}

impl TopicType {
    /// The four canonical children-storybook topic types used in batch evaluation.
    pub const CANONICAL: [TopicType; 4] = [
        TopicType::SelfGrowing,
        TopicType::FamilyFriendship,
        TopicType::Environments,
        TopicType::KnowledgeLearning,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            TopicType::SelfGrowing => "self-growing",
            TopicType::FamilyFriendship => "family and friendship",
            TopicType::Environments => "environments",
            TopicType::KnowledgeLearning => "knowledge learning",
            TopicType::Custom => "custom",
        }
    }
}

impl Validate for StorySetting {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.topic.trim().is_empty() {
            v.push("topic must be non-empty".to_string());
        }
        if self.num_pages < 1 {
            v.push("num_pages ≥ 1".to_string());
        }
        if self.requirements.is_empty() {
            v.push("requirements must be non-empty".to_string());
        }
        v
    }
}

/// One writer question / expert answer exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialogueTurn {
    pub question: String,
    pub answer: String,
}

/// Record of the simulated pre-writing discussion, bounded by `max_turns`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialogueTranscript {
    pub turns: Vec<DialogueTurn>,
    /// The turn budget the dialogue ran under.
    pub max_turns: u32,
}

impl Validate for DialogueTranscript {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.max_turns < 1 {
            v.push("max_turns ≥ 1".to_string());
        }
        if self.turns.len() > self.max_turns as usize {
            v.push(format!(
                "transcript has {} turns, exceeding max_turns = {}",
                self.turns.len(),
                self.max_turns
            ));
        }
        for (i, turn) in self.turns.iter().enumerate() {
            if turn.question.trim().is_empty() {
                v.push(format!("turn {} has an empty question", i + 1));
            }
            if turn.answer.trim().is_empty() {
                v.push(format!("turn {} has an empty answer", i + 1));
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chapter {
    /// 1-based chapter index.
    pub index: u32,
    pub synopsis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outline {
    pub chapters: Vec<Chapter>,
}

impl Validate for Outline {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.chapters.is_empty() {
            v.push("outline must have at least one chapter".to_string());
        }
        if !indices_contiguous(self.chapters.iter().map(|c| c.index)) {
            v.push("non-contiguous indices: chapter indices must run 1..=n".to_string());
        }
        for c in &self.chapters {
            if c.synopsis.trim().is_empty() {
                v.push(format!("chapter {} has an empty synopsis", c.index));
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WritingMethod {
    Direct,
    StoryAgent,
}

impl std::fmt::Display for WritingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WritingMethod::Direct => write!(f, "direct"),
            WritingMethod::StoryAgent => write!(f, "story_agent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryPage {
    /// 1-based page index.
    pub index: u32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Story {
    pub pages: Vec<StoryPage>,
    pub method: WritingMethod,
}

impl Story {
    pub fn page(&self, index: u32) -> Option<&StoryPage> {
        self.pages.iter().find(|p| p.index == index)
    }

    /// All page texts joined in order, one paragraph per page.
    pub fn full_text(&self) -> String {
        self.pages
            .iter()
            .map(|p| p.text.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Validate for Story {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.pages.is_empty() {
            v.push("story must have at least one page".to_string());
        }
        if !indices_contiguous(self.pages.iter().map(|p| p.index)) {
            v.push("non-contiguous indices: page indices must run 1..=n".to_string());
        }
        for p in &self.pages {
            if p.text.trim().is_empty() {
                v.push(format!("page {} has empty text", p.index));
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Role {
    pub name: String,
    pub description: String,
}

/// Named characters with the fixed descriptions that keep them visually
/// consistent across pages.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RoleTable {
    pub roles: Vec<Role>,
}

impl Validate for RoleTable {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for role in &self.roles {
            if role.name.trim().is_empty() {
                v.push("role name must be non-empty".to_string());
            }
            if !seen.insert(role.name.as_str()) {
                v.push(format!("duplicate role name `{}`", role.name));
            }
            if role.description.trim().is_empty() {
                v.push(format!("role `{}` has an empty description", role.name));
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptModality {
    Image,
    Sound,
    Music,
}

impl std::fmt::Display for PromptModality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PromptModality::Image => write!(f, "image"),
            PromptModality::Sound => write!(f, "sound"),
            PromptModality::Music => write!(f, "music"),
        }
    }
}

/// Reviewer outcome for one refinement turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Passed,
    Revise { suggestion: String },
}

impl Verdict {
    pub fn is_passed(&self) -> bool {
        matches!(self, Verdict::Passed)
    }

    pub fn suggestion(&self) -> Option<&str> {
        match self {
            Verdict::Passed => None,
            Verdict::Revise { suggestion } => Some(suggestion),
        }
    }
}

/// One reviser candidate and the reviewer's response to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevisionExchange {
    /// 1-based refinement turn.
    pub turn: u32,
    pub candidate: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// A refined, generation-ready prompt for one modality.
///
/// `page_index` 0 is the whole-story sentinel used by music prompts. A sound
/// prompt with empty `text` means "no sound effect for this page"; image and
/// music prompts must be non-empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalityPrompt {
    pub modality: PromptModality,
    pub page_index: u32,
    pub text: String,
    #[serde(default)]
    pub history: Vec<RevisionExchange>,
}

impl Validate for ModalityPrompt {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        match self.modality {
            PromptModality::Music => {
                if self.page_index != 0 {
                    v.push("music prompts use page_index 0".to_string());
                }
                if self.text.trim().is_empty() {
                    v.push("music prompt text must be non-empty".to_string());
                }
            }
            PromptModality::Image => {
                if self.page_index == 0 {
                    v.push("image prompts must reference an existing page (index ≥ 1)".to_string());
                }
                if self.text.trim().is_empty() {
                    v.push("image prompt text must be non-empty".to_string());
                }
            }
            PromptModality::Sound => {
                // Empty text is the "no sound effect" signal, so only the
                // page reference is checked here.
                if self.page_index == 0 {
                    v.push("sound prompts must reference an existing page (index ≥ 1)".to_string());
                }
            }
        }
        let mut prev_passed = false;
        for exchange in &self.history {
            if prev_passed {
                v.push("a passed verdict must terminate the revision history".to_string());
                break;
            }
            prev_passed = exchange.verdict.is_passed();
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssetModality {
    Image,
    Speech,
    Sound,
    Music,
}

impl std::fmt::Display for AssetModality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AssetModality::Image => write!(f, "image"),
            AssetModality::Speech => write!(f, "speech"),
            AssetModality::Sound => write!(f, "sound"),
            AssetModality::Music => write!(f, "music"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generated,
    Retrieved,
}

/// A generated or retrieved media file with measured properties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Asset {
    pub modality: AssetModality,
    pub page_index: u32,
    pub location: PathBuf,
    /// Measured from the decoded waveform; 0 for images.
    pub duration_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    pub provenance: Provenance,
    pub provider_id: String,
    pub cache_key: String,
}

impl Validate for Asset {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        match self.modality {
            AssetModality::Image => {
                if self.width.map_or(true, |w| w == 0) || self.height.map_or(true, |h| h == 0) {
                    v.push(format!(
                        "image asset for page {} must have positive dimensions",
                        self.page_index
                    ));
                }
                if self.duration_s != 0.0 {
                    v.push("image assets have duration_s = 0".to_string());
                }
            }
            AssetModality::Speech | AssetModality::Sound | AssetModality::Music => {
                if self.duration_s <= 0.0 {
                    v.push(format!(
                        "{} asset for page {} must have duration_s > 0",
                        self.modality, self.page_index
                    ));
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Pending,
    Done,
    Failed,
}

/// Persisted run progress: per-stage status plus the fingerprint of the
/// config the run was started under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineState {
    pub stages: BTreeMap<String, StageStatus>,
    pub config_fingerprint: String,
}

impl Validate for PipelineState {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.config_fingerprint.trim().is_empty() {
            v.push("config_fingerprint must be non-empty".to_string());
        }
        v
    }
}

fn indices_contiguous(indices: impl Iterator<Item = u32>) -> bool {
    let mut expected = 1u32;
    for index in indices {
        if index != expected {
            return false;
        }
        expected += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setting() -> StorySetting {
        StorySetting {
            topic: "sharing".to_string(),
            topic_type: TopicType::FamilyFriendship,
            audience: "children 4-8".to_string(),
            num_pages: 1,
            requirements: vec!["warmth".to_string()],
            main_role_hints: None,
        }
    }

    #[test]
    fn valid_setting_has_no_violations() {
        assert!(setting().violations().is_empty());
    }

    #[test]
    fn zero_pages_is_violation() {
        let mut s = setting();
        s.num_pages = 0;
        let v = s.violations();
        assert_eq!(v, vec!["num_pages ≥ 1".to_string()]);
    }

    #[test]
    fn empty_requirements_is_violation() {
        let mut s = setting();
        s.requirements.clear();
        assert!(s.violations().iter().any(|v| v.contains("requirements")));
    }

    #[test]
    fn non_contiguous_pages_detected() {
        let story = Story {
            pages: vec![
                StoryPage { index: 1, text: "a".into() },
                StoryPage { index: 3, text: "b".into() },
            ],
            method: WritingMethod::Direct,
        };
        let v = story.violations();
        assert!(v.iter().any(|m| m.contains("non-contiguous indices")), "{v:?}");
    }

    #[test]
    fn duplicate_role_names_detected() {
        let table = RoleTable {
            roles: vec![
                Role { name: "Ann".into(), description: "a girl".into() },
                Role { name: "Ann".into(), description: "someone else".into() },
            ],
        };
        assert!(table.violations().iter().any(|m| m.contains("duplicate")));
    }

    #[test]
    fn music_prompt_requires_page_zero() {
        let p = ModalityPrompt {
            modality: PromptModality::Music,
            page_index: 2,
            text: "soft piano".into(),
            history: vec![],
        };
        assert!(!p.violations().is_empty());
    }

    #[test]
    fn sound_prompt_may_be_empty() {
        let p = ModalityPrompt {
            modality: PromptModality::Sound,
            page_index: 1,
            text: String::new(),
            history: vec![],
        };
        assert!(p.violations().is_empty());
    }

    #[test]
    fn passed_verdict_must_terminate_history() {
        let p = ModalityPrompt {
            modality: PromptModality::Image,
            page_index: 1,
            text: "a boy".into(),
            history: vec![
                RevisionExchange { turn: 1, candidate: "x".into(), verdict: Verdict::Passed },
                RevisionExchange {
                    turn: 2,
                    candidate: "y".into(),
                    verdict: Verdict::Revise { suggestion: "more".into() },
                },
            ],
        };
        assert!(p.violations().iter().any(|m| m.contains("terminate")));
    }

    #[test]
    fn audio_asset_needs_positive_duration() {
        let a = Asset {
            modality: AssetModality::Speech,
            page_index: 1,
            location: PathBuf::from("speech_1.wav"),
            duration_s: 0.0,
            width: None,
            height: None,
            provenance: Provenance::Generated,
            provider_id: "mock".into(),
            cache_key: "k".into(),
        };
        assert!(!a.violations().is_empty());
    }
}
