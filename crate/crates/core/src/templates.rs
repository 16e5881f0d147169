//! Versioned instruction templates for every agent.
//!
//! The defaults are compiled in from `templates/`; a config-supplied
//! directory can override any of them by relative name. Placeholders use
//! `<<NAME>>` so they never collide with the JSON braces that several
//! instruction texts contain.

use std::path::PathBuf;

/// Relative template names, also the file names under an override dir.
pub mod names {
    pub const WRITER_QUESTION: &str = "story/writer_question.txt";
    pub const EXPERT_ANSWER: &str = "story/expert_answer.txt";
    pub const OUTLINE: &str = "story/outline.txt";
    pub const CHAPTER: &str = "story/chapter.txt";
    pub const DIRECT: &str = "story/direct.txt";
    pub const IMAGE_REVISER: &str = "prompts/image_reviser.txt";
    pub const IMAGE_REVIEWER: &str = "prompts/image_reviewer.txt";
    pub const ROLE_REVISER: &str = "prompts/role_reviser.txt";
    pub const ROLE_REVIEWER: &str = "prompts/role_reviewer.txt";
    pub const SOUND_REVISER: &str = "prompts/sound_reviser.txt";
    pub const SOUND_REVIEWER: &str = "prompts/sound_reviewer.txt";
    pub const MUSIC_REVISER: &str = "prompts/music_reviser.txt";
    pub const MUSIC_REVIEWER: &str = "prompts/music_reviewer.txt";
    pub const TOPICS: &str = "eval/topics.txt";
    pub const JUDGE: &str = "eval/judge.txt";
    pub const RUBRIC_ATTRACTIVENESS: &str = "eval/rubric_attractiveness.txt";
    pub const RUBRIC_WARMTH: &str = "eval/rubric_warmth.txt";
    pub const RUBRIC_EDUCATION: &str = "eval/rubric_education.txt";
    pub const RUBRIC_RELEVANCE: &str = "eval/rubric_relevance.txt";
    pub const RUBRIC_COHERENCE: &str = "eval/rubric_coherence.txt";
}

/// Distinctive leading phrases, used by the offline chat mock to recognize
/// which agent is calling. Kept next to the templates so they stay in sync.
pub mod markers {
    pub const WRITER_QUESTION: &str = "You are an amateur story writer";
    pub const EXPERT_ANSWER: &str = "You are an experienced story-writing expert";
    pub const OUTLINE: &str = "You are an outline writer";
    pub const CHAPTER: &str = "You are a chapter writer";
    pub const DIRECT: &str = "You are a children's storybook writer";
    pub const IMAGE_REVISER: &str = "Convert the provided story content into image descriptions";
    pub const IMAGE_REVIEWER: &str = "Review the provided image description";
    pub const ROLE_REVISER: &str = "Summarize all main roles";
    pub const ROLE_REVIEWER: &str = "Review the provided role list";
    pub const SOUND_REVISER: &str = "Convert the provided story content into a sound effect";
    pub const SOUND_REVIEWER: &str = "Review the provided sound effect description";
    pub const MUSIC_REVISER: &str = "Summarize an appropriate background music description";
    pub const MUSIC_REVIEWER: &str = "Review the provided background music description";
    pub const TOPICS: &str = "List distinct children's story topics";
    pub const JUDGE: &str = "You are a strict children's story evaluator";
}

static BUILTIN: &[(&str, &str)] = &[
    (names::WRITER_QUESTION, include_str!("../templates/story/writer_question.txt")),
    (names::EXPERT_ANSWER, include_str!("../templates/story/expert_answer.txt")),
    (names::OUTLINE, include_str!("../templates/story/outline.txt")),
    (names::CHAPTER, include_str!("../templates/story/chapter.txt")),
    (names::DIRECT, include_str!("../templates/story/direct.txt")),
    (names::IMAGE_REVISER, include_str!("../templates/prompts/image_reviser.txt")),
    (names::IMAGE_REVIEWER, include_str!("../templates/prompts/image_reviewer.txt")),
    (names::ROLE_REVISER, include_str!("../templates/prompts/role_reviser.txt")),
    (names::ROLE_REVIEWER, include_str!("../templates/prompts/role_reviewer.txt")),
    (names::SOUND_REVISER, include_str!("../templates/prompts/sound_reviser.txt")),
    (names::SOUND_REVIEWER, include_str!("../templates/prompts/sound_reviewer.txt")),
    (names::MUSIC_REVISER, include_str!("../templates/prompts/music_reviser.txt")),
    (names::MUSIC_REVIEWER, include_str!("../templates/prompts/music_reviewer.txt")),
    (names::TOPICS, include_str!("../templates/eval/topics.txt")),
    (names::JUDGE, include_str!("../templates/eval/judge.txt")),
    (names::RUBRIC_ATTRACTIVENESS, include_str!("../templates/eval/rubric_attractiveness.txt")),
    (names::RUBRIC_WARMTH, include_str!("../templates/eval/rubric_warmth.txt")),
    (names::RUBRIC_EDUCATION, include_str!("../templates/eval/rubric_education.txt")),
    (names::RUBRIC_RELEVANCE, include_str!("../templates/eval/rubric_relevance.txt")),
    (names::RUBRIC_COHERENCE, include_str!("../templates/eval/rubric_coherence.txt")),
];

#[derive(Debug, Clone, Default)]
pub struct TemplateSet {
    override_dir: Option<PathBuf>,
}

impl TemplateSet {
    pub fn builtin() -> Self {
        TemplateSet { override_dir: None }
    }

    pub fn with_override_dir(dir: Option<PathBuf>) -> Self {
        TemplateSet { override_dir: dir }
    }

    /// Template text by relative name; override dir wins when it has the file.
    pub fn get(&self, name: &str) -> String {
        if let Some(dir) = &self.override_dir {
            if let Ok(text) = std::fs::read_to_string(dir.join(name)) {
                return text;
            }
        }
        BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| (*t).to_string())
            .unwrap_or_else(|| panic!("unknown template `{name}`"))
    }
}

/// Replaces every `<<KEY>>` placeholder with its value.
pub fn fill(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (key, value) in vars {
        out = out.replace(&format!("<<{key}>>"), value);
    }
    out
}
