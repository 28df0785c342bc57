//! End-to-end translation: source text in, TASML out.
//!
//! Text goes through an optional translator, is split into sentences, and
//! each sentence is recognized, scored for emotion, checked for proper
//! nouns, ordered for the target and rendered. Templates learned along the
//! way are appended to the corpus file once the run is over.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::corpus::{parse_corpus, serialize_template, CorpusError, CorpusStore, Template};
use crate::emitter::{detect_fingerspell, RenderedSentence, SentenceEntry, TargetLanguageProfile, TasmlDocument};
use crate::emotion::{fuzzy_blend, score_intensities, EmotionError, EmotionLexicon, EmotionWheel};
use crate::pivot::{PivotForm, TargetLanguage};
use crate::recognizer::{recognize, OutcomeKind, RecognitionConfig};
use crate::text::{normalize_sentence, SentenceSplitter};

pub const DEFAULT_TRANSLATOR_TIMEOUT: Duration = Duration::from_secs(10);
pub const DEFAULT_SOURCE_LANGUAGE: &str = "auto";
/// Request header carrying the source-language hint.
pub const SOURCE_LANGUAGE_HEADER: &str = "X-Source-Language";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TranslatorSetting {
    #[default]
    Identity,
    /// Plain-text POST to `endpoint`; the response body is the English text.
    Remote { endpoint: String, timeout: Duration },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslatorError {
    #[error("translator at {endpoint} is unreachable: {reason}")]
    Unreachable { endpoint: String, reason: String },
    #[error("translator at {endpoint} answered badly: {reason}")]
    BadResponse { endpoint: String, reason: String },
}

/// Brings source text into English.
///
/// The identity setting hands the text back untouched. A remote endpoint
/// receives the UTF-8 text as a `text/plain` POST body with the language
/// hint in the `X-Source-Language` header and must answer 2xx with UTF-8
/// English text. Anything else is an error; the input is never passed
/// through silently.
pub fn normalize_source_language(
    text: &str,
    setting: &TranslatorSetting,
    source_language: &str,
) -> Result<String, TranslatorError> {
    let (endpoint, timeout) = match setting {
        TranslatorSetting::Identity => return Ok(text.to_string()),
        TranslatorSetting::Remote { endpoint, timeout } => (endpoint, *timeout),
    };
    let agent = ureq::AgentBuilder::new().timeout(timeout).build();
    let bad = |reason: String| TranslatorError::BadResponse {
        endpoint: endpoint.clone(),
        reason,
    };
    let response = agent
        .post(endpoint)
        .set("Content-Type", "text/plain; charset=utf-8")
        .set(SOURCE_LANGUAGE_HEADER, source_language)
        .send_string(text)
        .map_err(|e| match e {
            ureq::Error::Status(code, _) => bad(format!("HTTP status {code}")),
            ureq::Error::Transport(t) => TranslatorError::Unreachable {
                endpoint: endpoint.clone(),
                reason: t.to_string(),
            },
        })?;
    response
        .into_string()
        .map_err(|e| bad(format!("unreadable body: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("config line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("config line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("bad value '{value}' for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("no {0} given")]
    Missing(&'static str),
}

/// Keys a config file may set. Each mirrors the flag of the same name.
pub const CONFIG_KEYS: &[&str] = &[
    "corpus",
    "lexicon",
    "target",
    "global-threshold",
    "lcs-threshold",
    "learn",
    "speed",
    "translator",
    "translator-timeout-ms",
    "source-language",
    "pause-time",
    "pause-subject",
    "pause-object",
    "abbreviations",
];

/// Flat `key = value` settings. Blank lines and lines starting with `#` are
/// ignored; a key may appear once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(document: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in document.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                reason: "expected key = value".into(),
            })?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: key.into() });
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(ConfigError::Syntax {
                    line,
                    reason: format!("'{key}' set twice"),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parses a value with `FromStr`, naming the key on failure.
    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse().map_err(|e: T::Err| ConfigError::BadValue {
                    key: key.into(),
                    value: v.into(),
                    reason: e.to_string(),
                })
            })
            .transpose()
    }
}

/// Builds the translator setting from a config value: `identity` or an
/// `http://` / `https://` URL.
pub fn translator_from_str(value: &str, timeout: Duration) -> Result<TranslatorSetting, ConfigError> {
    if value == "identity" {
        Ok(TranslatorSetting::Identity)
    } else if value.starts_with("http://") || value.starts_with("https://") {
        Ok(TranslatorSetting::Remote {
            endpoint: value.to_string(),
            timeout,
        })
    } else {
        Err(ConfigError::BadValue {
            key: "translator".into(),
            value: value.into(),
            reason: "expected 'identity' or an http(s) URL".into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus_path: PathBuf,
    pub lexicon_path: PathBuf,
    pub recognition: RecognitionConfig,
    /// Carries the target language.
    pub profile: TargetLanguageProfile,
    pub translator: TranslatorSetting,
    pub source_language: String,
    /// Signs per second.
    pub speed: f64,
    /// Guarded in addition to the built-in abbreviations.
    pub extra_abbreviations: Vec<String>,
}

impl PipelineConfig {
    pub fn new(corpus_path: impl Into<PathBuf>, lexicon_path: impl Into<PathBuf>, target: TargetLanguage) -> Self {
        Self {
            corpus_path: corpus_path.into(),
            lexicon_path: lexicon_path.into(),
            recognition: RecognitionConfig::default(),
            profile: TargetLanguageProfile::for_language(target),
            translator: TranslatorSetting::Identity,
            source_language: DEFAULT_SOURCE_LANGUAGE.into(),
            speed: PivotForm::DEFAULT_SPEED,
            extra_abbreviations: Vec::new(),
        }
    }

    pub fn target_language(&self) -> TargetLanguage {
        self.profile.language()
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{}: {source}", path.display())]
    Lexicon { path: PathBuf, source: EmotionError },
    #[error(transparent)]
    Translator(#[from] TranslatorError),
}

pub fn read_file(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_corpus(path: &Path) -> Result<CorpusStore, PipelineError> {
    parse_corpus(&read_file(path)?).map_err(|source| PipelineError::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_lexicon(path: &Path) -> Result<EmotionLexicon, PipelineError> {
    EmotionLexicon::parse(&read_file(path)?).map_err(|source| PipelineError::Lexicon {
        path: path.to_path_buf(),
        source,
    })
}

/// Appends records to a corpus file, each after a blank line, so the file
/// stays in canonical form.
pub fn append_templates(path: &Path, templates: &[&Template]) -> Result<(), PipelineError> {
    if templates.is_empty() {
        return Ok(());
    }
    let io_err = |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    };
    let existing = fs::read(path).map_err(io_err)?;
    let mut out = String::new();
    if !existing.is_empty() && !existing.ends_with(b"\n") {
        out.push('\n');
    }
    for t in templates {
        out.push('\n');
        out.push_str(&serialize_template(t));
    }
    let mut file = OpenOptions::new().append(true).open(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceReport {
    pub text: String,
    pub kind: OutcomeKind,
    pub score: i32,
    pub template_id: Option<String>,
    pub learned: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationReport {
    pub sentences: Vec<SentenceReport>,
    pub learned_count: usize,
    pub document: TasmlDocument,
}

impl TranslationReport {
    pub fn recognized_count(&self) -> usize {
        self.sentences.iter().filter(|s| s.kind != OutcomeKind::Unrecognized).count()
    }

    pub fn unrecognized_count(&self) -> usize {
        self.sentences.len() - self.recognized_count()
    }
}

/// A loaded corpus and lexicon ready to translate.
#[derive(Debug, Clone)]
pub struct Pipeline {
    config: PipelineConfig,
    store: CorpusStore,
    lexicon: EmotionLexicon,
    wheel: EmotionWheel,
    /// Templates the file on disk does not have yet.
    unsaved: Vec<String>,
}

impl Pipeline {
    pub fn new(config: PipelineConfig, store: CorpusStore, lexicon: EmotionLexicon) -> Self {
        Self {
            config,
            store,
            lexicon,
            wheel: EmotionWheel::default(),
            unsaved: Vec::new(),
        }
    }

    /// Reads the corpus and lexicon named by the config. Data errors surface
    /// here, before any sentence is touched.
    pub fn load(config: PipelineConfig) -> Result<Self, PipelineError> {
        let store = load_corpus(&config.corpus_path)?;
        let lexicon = load_lexicon(&config.lexicon_path)?;
        Ok(Self::new(config, store, lexicon))
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn store(&self) -> &CorpusStore {
        &self.store
    }

    /// Sentences are handled in order, so one may match a template learned
    /// from an earlier one.
    pub fn translate_text(&mut self, text: &str) -> Result<TranslationReport, TranslatorError> {
        let english = normalize_source_language(text, &self.config.translator, &self.config.source_language)?;
        let mut document = TasmlDocument::new(self.config.target_language());
        let mut sentences = Vec::new();
        let splitter = self
            .config
            .extra_abbreviations
            .iter()
            .fold(SentenceSplitter::default(), |s, a| s.with_abbreviation(a));
        for sentence in splitter.split(&english) {
            let outcome = recognize(&sentence, &mut self.store, &self.config.recognition);
            if let Some(id) = &outcome.learned {
                self.unsaved.push(id.clone());
            }
            let entry = match (&outcome.pivot, normalize_sentence(&sentence)) {
                (Some(pivot), Ok(normalized)) => {
                    let mut pivot = detect_fingerspell(pivot.clone(), &normalized.tokens);
                    pivot.emotion = fuzzy_blend(&score_intensities(&normalized.words(), &self.lexicon), &self.wheel);
                    pivot.speed = self.config.speed;
                    SentenceEntry::Recognized(RenderedSentence::from_pivot(&pivot, &self.config.profile))
                }
                _ => SentenceEntry::Unrecognized { raw: sentence.clone() },
            };
            document.sentences.push(entry);
            sentences.push(SentenceReport {
                text: sentence,
                kind: outcome.kind,
                score: outcome.score,
                template_id: outcome.template_id,
                learned: outcome.learned,
            });
        }
        let learned_count = sentences.iter().filter(|s| s.learned.is_some()).count();
        Ok(TranslationReport {
            sentences,
            learned_count,
            document,
        })
    }

    /// Templates learned since the last save.
    pub fn unsaved_templates(&self) -> Vec<&Template> {
        self.unsaved.iter().filter_map(|id| self.store.get(id)).collect()
    }

    /// Appends learned templates to the corpus file; returns how many.
    pub fn save_learned(&mut self) -> Result<usize, PipelineError> {
        let templates = self.unsaved_templates();
        let n = templates.len();
        append_templates(&self.config.corpus_path, &templates)?;
        self.unsaved.clear();
        Ok(n)
    }
}

/// Loads, translates and saves learned templates in one go.
pub fn translate_text(text: &str, config: &PipelineConfig) -> Result<TranslationReport, PipelineError> {
    let mut pipeline = Pipeline::load(config.clone())?;
    let report = pipeline.translate_text(text)?;
    pipeline.save_learned()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CORPUS: &str = "#TASML-CORPUS v1

#TEMPLATE id=raid lang=ASL
TEXT: The warriors raided the island.
PLACE: -
TIME: -
SUBJECT: the warriors
VERB: raided
OBJECT: the island
EMOTION: -
";

    fn pipeline(learn: bool) -> Pipeline {
        let mut cfg = PipelineConfig::new("unused", "unused", TargetLanguage::Asl);
        cfg.recognition.learning_enabled = learn;
        Pipeline::new(cfg, parse_corpus(CORPUS).unwrap(), EmotionLexicon::parse("#TASML-EMOLEX v1\nraided\tanger\t0.8\n").unwrap())
    }

    #[test]
    fn identity_translator() {
        assert_eq!(
            normalize_source_language("Hello world", &TranslatorSetting::Identity, "fr").unwrap(),
            "Hello world"
        );
    }

    #[test]
    fn empty_text_gives_empty_document() {
        let report = pipeline(true).translate_text("").unwrap();
        assert!(report.sentences.is_empty());
        assert_eq!(report.document.render(), "<tasml version=\"1.0\" target=\"ASL\">\n</tasml>\n");
    }

    #[test]
    fn gibberish_second_sentence() {
        let report = pipeline(false)
            .translate_text("The warriors raided the island. Xq zzkv pfft!")
            .unwrap();
        assert_eq!(report.recognized_count(), 1);
        assert_eq!(report.unrecognized_count(), 1);
        assert_eq!(report.sentences[0].kind, OutcomeKind::ExactMatch);
        let text = report.document.render();
        assert!(text.contains("<emotion components=\"anger:1.000\">anger</emotion>"));
        assert!(text.contains("<sentence id=\"2\" unrecognized=\"true\">Xq zzkv pfft!</sentence>"));
    }

    #[test]
    fn learns_in_sentence_order() {
        let mut p = pipeline(true);
        let report = p
            .translate_text("The warriors attacked the island. The warriors attacked the island.")
            .unwrap();
        assert_eq!(report.sentences[0].kind, OutcomeKind::TemplateProjection);
        assert_eq!(report.sentences[1].kind, OutcomeKind::ExactMatch);
        assert_eq!(report.learned_count, 1);
        assert_eq!(p.unsaved_templates().len(), 1);
    }

    #[test]
    fn extra_abbreviations_hold_sentences_together() {
        let mut p = pipeline(false);
        assert_eq!(p.translate_text("Capt. Ivar raided the island.").unwrap().sentences.len(), 2);
        p.config.extra_abbreviations.push("capt".into());
        assert_eq!(p.translate_text("Capt. Ivar raided the island.").unwrap().sentences.len(), 1);
    }

    #[test]
    fn config_file_parsing() {
        let cfg = ConfigFile::parse("# defaults\ncorpus = data/corpus.txt\n\ntarget=fsl\nspeed = 2\n").unwrap();
        assert_eq!(cfg.get("corpus"), Some("data/corpus.txt"));
        assert_eq!(cfg.parsed::<TargetLanguage>("target").unwrap(), Some(TargetLanguage::Fsl));
        assert_eq!(cfg.parsed::<f64>("speed").unwrap(), Some(2.0));
        assert_eq!(cfg.parsed::<u32>("lcs-threshold").unwrap(), None);

        assert!(matches!(ConfigFile::parse("corpus"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(ConfigFile::parse("\ncolour = red"), Err(ConfigError::UnknownKey { line: 2, .. })));
        assert!(ConfigFile::parse("speed=1\nspeed=2").is_err());
        let bad = ConfigFile::parse("speed = fast").unwrap();
        assert!(matches!(bad.parsed::<f64>("speed"), Err(ConfigError::BadValue { .. })));
    }

    #[test]
    fn translator_values() {
        let t = Duration::from_secs(1);
        assert_eq!(translator_from_str("identity", t).unwrap(), TranslatorSetting::Identity);
        assert!(matches!(translator_from_str("http://127.0.0.1:9/x", t).unwrap(), TranslatorSetting::Remote { .. }));
        assert!(translator_from_str("ftp://x", t).is_err());
    }

    #[test]
    fn append_keeps_canonical_layout() {
        let dir = std::env::temp_dir().join(format!("tasml-append-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("corpus.txt");
        fs::write(&path, CORPUS.trim_end()).unwrap();
        let mut p = pipeline(true);
        p.config.corpus_path = path.clone();
        p.translate_text("The warriors attacked the island.").unwrap();
        assert_eq!(p.save_learned().unwrap(), 1);
        let on_disk = fs::read_to_string(&path).unwrap();
        let reparsed = parse_corpus(&on_disk).unwrap();
        assert_eq!(reparsed.len(), 2);
        assert_eq!(crate::corpus::serialize_corpus(&reparsed), on_disk);
        assert_eq!(p.save_learned().unwrap(), 0);
        fs::remove_dir_all(&dir).unwrap();
    }
}
