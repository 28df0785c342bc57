//! Learned templates and their line-oriented file format.
//!
//! ```text
//! #TASML-CORPUS v1
//!
//! #TEMPLATE id=t1 lang=ASL
//! TEXT: The warriors raided the island.
//! PLACE: -
//! TIME: past | in 793
//! SUBJECT: the warriors
//! VERB: raided
//! OBJECT: the island
//! EMOTION: fear
//! ```
//!
//! `VERB`/`OBJECT` pairs repeat; empty slots are written as `-`.

use std::collections::HashMap;

use thiserror::Error;

use crate::emotion::EmotionLabel;
use crate::pivot::{Role, TargetLanguage, Tense};
use crate::text;

pub const CORPUS_HEADER: &str = "#TASML-CORPUS v1";
const EMPTY: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("template id '{0}' already exists")]
    DuplicateId(String),
    #[error("sentence already learned as template '{existing}'")]
    DuplicateText { existing: String },
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotAnnotation {
    pub role: Role,
    pub text: String,
    pub tense: Option<Tense>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeAnnotation {
    pub tense: Tense,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionAnnotation {
    pub verb: String,
    pub object: String,
}

/// An example sentence annotated with its pivot-form slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    id: String,
    language: TargetLanguage,
    source_text: String,
    place: String,
    time: Option<TimeAnnotation>,
    subject: String,
    actions: Vec<ActionAnnotation>,
    emotions: Vec<EmotionLabel>,
    normalized: String,
}

/// A slot-annotated word of a template, in slot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateWord {
    pub text: String,
    pub role: Role,
    /// Index of the (verb, object) pair for VERB and OBJECT words.
    pub action: Option<usize>,
}

fn clean(value: &str) -> String {
    let v = value.trim();
    if v == EMPTY {
        String::new()
    } else {
        v.to_string()
    }
}

impl Template {
    /// Builds a template, trimming slot texts and treating `-` as empty.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        language: TargetLanguage,
        source_text: impl Into<String>,
        place: &str,
        time: Option<(Tense, &str)>,
        subject: &str,
        actions: &[(&str, &str)],
        emotions: Vec<EmotionLabel>,
    ) -> Result<Self, CorpusError> {
        let invalid = |m: String| Err(CorpusError::InvalidTemplate(m));
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return invalid(format!("bad id '{id}'"));
        }
        let source_text = source_text.into().trim().to_string();
        if source_text.contains('\n') {
            return invalid("sentence spans several lines".into());
        }
        let Some(normalized) = text::normalized_text(&source_text) else {
            return invalid("sentence is empty after normalization".into());
        };
        if actions.is_empty() {
            return invalid("at least one VERB is required".into());
        }
        let mut acts = Vec::with_capacity(actions.len());
        for (verb, object) in actions {
            let verb = clean(verb);
            if verb.is_empty() {
                return invalid("VERB must not be empty".into());
            }
            acts.push(ActionAnnotation {
                verb,
                object: clean(object),
            });
        }
        let time = match time {
            Some((tense, t)) if !clean(t).is_empty() => Some(TimeAnnotation { tense, text: clean(t) }),
            _ => None,
        };
        let t = Self {
            id,
            language,
            source_text,
            place: clean(place),
            time,
            subject: clean(subject),
            actions: acts,
            emotions,
            normalized,
        };
        if t.slots().iter().any(|s| s.text.contains('\n')) {
            return invalid("slot text spans several lines".into());
        }
        Ok(t)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn language(&self) -> TargetLanguage {
        self.language
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    pub fn normalized_text(&self) -> &str {
        &self.normalized
    }

    pub fn place(&self) -> &str {
        &self.place
    }

    pub fn time(&self) -> Option<&TimeAnnotation> {
        self.time.as_ref()
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn actions(&self) -> &[ActionAnnotation] {
        &self.actions
    }

    pub fn emotions(&self) -> &[EmotionLabel] {
        &self.emotions
    }

    /// Slot annotations in file order: PLACE, TIME, SUBJECT, then VERB and
    /// OBJECT for each pair. Empty slots have empty text.
    pub fn slots(&self) -> Vec<SlotAnnotation> {
        let mut out = vec![
            SlotAnnotation {
                role: Role::Place,
                text: self.place.clone(),
                tense: None,
            },
            SlotAnnotation {
                role: Role::Time,
                text: self.time.as_ref().map(|t| t.text.clone()).unwrap_or_default(),
                tense: self.time.as_ref().map(|t| t.tense),
            },
            SlotAnnotation {
                role: Role::Subject,
                text: self.subject.clone(),
                tense: None,
            },
        ];
        for a in &self.actions {
            out.push(SlotAnnotation {
                role: Role::Verb,
                text: a.verb.clone(),
                tense: None,
            });
            out.push(SlotAnnotation {
                role: Role::Object,
                text: a.object.clone(),
                tense: None,
            });
        }
        out
    }

    /// Normalized slot words in slot order, each tagged with its role.
    pub fn words(&self) -> Vec<TemplateWord> {
        let mut out = Vec::new();
        let mut push = |phrase: &str, role: Role, action: Option<usize>| {
            for w in text::normalized_words(phrase) {
                out.push(TemplateWord { text: w, role, action });
            }
        };
        push(&self.place, Role::Place, None);
        if let Some(t) = &self.time {
            push(&t.text, Role::Time, None);
        }
        push(&self.subject, Role::Subject, None);
        for (i, a) in self.actions.iter().enumerate() {
            push(&a.verb, Role::Verb, Some(i));
            push(&a.object, Role::Object, Some(i));
        }
        out
    }
}

/// Ordered templates with an index from normalized sentence to template.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStore {
    templates: Vec<Template>,
    by_text: HashMap<String, usize>,
    by_id: HashMap<String, usize>,
}

impl CorpusStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn get(&self, id: &str) -> Option<&Template> {
        self.by_id.get(id).map(|&i| &self.templates[i])
    }

    /// Appends a template. Rejects a reused id and a sentence whose
    /// normalized form is already indexed.
    pub fn add_template(&mut self, template: Template) -> Result<(), CorpusError> {
        if self.by_id.contains_key(template.id()) {
            return Err(CorpusError::DuplicateId(template.id().to_string()));
        }
        if let Some(&i) = self.by_text.get(template.normalized_text()) {
            return Err(CorpusError::DuplicateText {
                existing: self.templates[i].id().to_string(),
            });
        }
        let i = self.templates.len();
        self.by_id.insert(template.id().to_string(), i);
        self.by_text.insert(template.normalized_text().to_string(), i);
        self.templates.push(template);
        Ok(())
    }

    /// Looks up an already normalized sentence.
    pub fn find_exact(&self, normalized_text: &str) -> Option<&Template> {
        self.by_text.get(normalized_text).map(|&i| &self.templates[i])
    }

    /// An id of the form `{prefix}{n}` not yet in use.
    pub fn next_id(&self, prefix: &str) -> String {
        (self.templates.len() + 1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|id| !self.by_id.contains_key(id))
            .expect("unbounded range")
    }
}

/// Renders one record, without the separating blank line.
pub fn serialize_template(t: &Template) -> String {
    let or_dash = |s: &str| if s.is_empty() { EMPTY.to_string() } else { s.to_string() };
    let mut out = String::new();
    out.push_str(&format!("#TEMPLATE id={} lang={}\n", t.id, t.language));
    out.push_str(&format!("TEXT: {}\n", t.source_text));
    out.push_str(&format!("PLACE: {}\n", or_dash(&t.place)));
    match &t.time {
        Some(time) => out.push_str(&format!("TIME: {} | {}\n", time.tense, time.text)),
        None => out.push_str("TIME: -\n"),
    }
    out.push_str(&format!("SUBJECT: {}\n", or_dash(&t.subject)));
    for a in &t.actions {
        out.push_str(&format!("VERB: {}\n", a.verb));
        out.push_str(&format!("OBJECT: {}\n", or_dash(&a.object)));
    }
    let emotions = if t.emotions.is_empty() {
        EMPTY.to_string()
    } else {
        t.emotions.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(",")
    };
    out.push_str(&format!("EMOTION: {emotions}\n"));
    out
}

/// Canonical document: the header line, then each record preceded by a
/// blank line.
pub fn serialize_corpus(store: &CorpusStore) -> String {
    let mut out = format!("{CORPUS_HEADER}\n");
    for t in &store.templates {
        out.push('\n');
        out.push_str(&serialize_template(t));
    }
    out
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn line_no(&self) -> usize {
        self.pos + 1
    }

    fn err<T>(&self, reason: impl Into<String>) -> Result<T, CorpusError> {
        Err(CorpusError::Syntax {
            line: self.line_no().min(self.lines.len().max(1)),
            reason: reason.into(),
        })
    }

    /// Consumes a `KEY: value` line for the expected key.
    fn field(&mut self, key: &str) -> Result<&'a str, CorpusError> {
        let Some(line) = self.peek() else {
            return self.err(format!("missing {key}"));
        };
        if line.trim().is_empty() || line.starts_with('#') {
            return self.err(format!("missing {key}"));
        }
        let Some((found, value)) = line.split_once(':') else {
            return self.err(format!("expected '{key}: ...'"));
        };
        if !KEYS.contains(&found) {
            return self.err(format!("unknown key '{found}'"));
        }
        if found != key {
            return self.err(format!("missing {key} (found {found})"));
        }
        self.pos += 1;
        Ok(value.trim())
    }
}

const KEYS: [&str; 7] = ["TEXT", "PLACE", "TIME", "SUBJECT", "VERB", "OBJECT", "EMOTION"];

/// Parses a whole corpus document. Any malformed record rejects the
/// document, reporting the offending line.
pub fn parse_corpus(document: &str) -> Result<CorpusStore, CorpusError> {
    let mut lines = Lines {
        lines: document.lines().collect(),
        pos: 0,
    };
    let mut store = CorpusStore::new();
    match lines.peek() {
        None => return Ok(store),
        Some(CORPUS_HEADER) => lines.pos += 1,
        Some(_) => return lines.err(format!("expected header '{CORPUS_HEADER}'")),
    }
    loop {
        while lines.peek().is_some_and(|l| l.trim().is_empty()) {
            lines.pos += 1;
        }
        let Some(head) = lines.peek() else {
            break;
        };
        let head_line = lines.line_no();
        let (id, lang) = parse_record_head(head).or_else(|reason| lines.err(reason))?;
        lines.pos += 1;

        let text = lines.field("TEXT")?;
        if text.is_empty() || text == EMPTY {
            return lines.err("missing TEXT");
        }
        let place = lines.field("PLACE")?;
        let time_line = lines.line_no();
        let time = lines.field("TIME")?;
        let time = if time == EMPTY {
            None
        } else {
            let Some((tense, span)) = time.split_once('|') else {
                return Err(CorpusError::Syntax {
                    line: time_line,
                    reason: "expected 'TIME: <tense> | <text>' or 'TIME: -'".into(),
                });
            };
            let tense: Tense = tense.trim().parse().map_err(|reason| CorpusError::Syntax {
                line: time_line,
                reason,
            })?;
            let span = span.trim();
            if span.is_empty() || span == EMPTY {
                return Err(CorpusError::Syntax {
                    line: time_line,
                    reason: "TIME has a tense but no text".into(),
                });
            }
            Some((tense, span))
        };
        let subject = lines.field("SUBJECT")?;
        let mut actions = Vec::new();
        loop {
            let verb_line = lines.line_no();
            let verb = lines.field("VERB")?;
            if verb.is_empty() || verb == EMPTY {
                return Err(CorpusError::Syntax {
                    line: verb_line,
                    reason: "missing VERB text".into(),
                });
            }
            let object = lines.field("OBJECT")?;
            actions.push((verb, object));
            if !lines.peek().is_some_and(|l| l.starts_with("VERB:")) {
                break;
            }
        }
        let emotion_line = lines.line_no();
        let emotions = lines.field("EMOTION")?;
        let emotions = if emotions == EMPTY {
            Vec::new()
        } else {
            emotions
                .split(',')
                .map(|e| e.parse::<EmotionLabel>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CorpusError::Syntax {
                    line: emotion_line,
                    reason: e.to_string(),
                })?
        };
        if let Some(extra) = lines.peek() {
            if !extra.trim().is_empty() {
                return match extra.split_once(':') {
                    Some((k, _)) if !KEYS.contains(&k) => lines.err(format!("unknown key '{k}'")),
                    _ => lines.err("expected a blank line after EMOTION"),
                };
            }
        }

        let at_head = |reason: String| CorpusError::Syntax { line: head_line, reason };
        let template = Template::new(id, lang, text, place, time, subject, &actions, emotions)
            .map_err(|e| at_head(e.to_string()))?;
        store.add_template(template).map_err(|e| at_head(e.to_string()))?;
    }
    Ok(store)
}

fn parse_record_head(line: &str) -> Result<(&str, TargetLanguage), String> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts[..] {
        ["#TEMPLATE", id, lang] => {
            let id = id
                .strip_prefix("id=")
                .filter(|s| !s.is_empty())
                .ok_or_else(|| format!("expected id=<id>, found '{id}'"))?;
            let lang = lang
                .strip_prefix("lang=")
                .ok_or_else(|| format!("expected lang=<ASL|FSL>, found '{lang}'"))?;
            let lang = match lang {
                "ASL" => TargetLanguage::Asl,
                "FSL" => TargetLanguage::Fsl,
                other => return Err(format!("unknown language '{other}'")),
            };
            Ok((id, lang))
        }
        _ => match line.split_once(':') {
            Some((k, _)) if !KEYS.contains(&k) => Err(format!("unknown key '{k}'")),
            _ => Err("expected '#TEMPLATE id=<id> lang=<ASL|FSL>'".into()),
        },
    }
}
