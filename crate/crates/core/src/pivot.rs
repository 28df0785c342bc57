//! The Place / Time / Subject / (Verb, Object)+ pivot form.

use std::fmt;
use std::str::FromStr;

use crate::emotion::EmotionBlend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetLanguage {
    Asl,
    Fsl,
}

impl TargetLanguage {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetLanguage::Asl => "ASL",
            TargetLanguage::Fsl => "FSL",
        }
    }
}

impl fmt::Display for TargetLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetLanguage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ASL" => Ok(TargetLanguage::Asl),
            "FSL" => Ok(TargetLanguage::Fsl),
            _ => Err(format!("unknown target language '{s}' (expected ASL or FSL)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Place,
    Time,
    Subject,
    Verb,
    Object,
}

impl Role {
    pub fn key(self) -> &'static str {
        match self {
            Role::Place => "PLACE",
            Role::Time => "TIME",
            Role::Subject => "SUBJECT",
            Role::Verb => "VERB",
            Role::Object => "OBJECT",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Role::Place => "place",
            Role::Time => "time",
            Role::Subject => "subject",
            Role::Verb => "verb",
            Role::Object => "object",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tense {
    Past,
    Present,
    Future,
}

impl Tense {
    pub fn as_str(self) -> &'static str {
        match self {
            Tense::Past => "past",
            Tense::Present => "present",
            Tense::Future => "future",
        }
    }
}

impl fmt::Display for Tense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tense {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "past" => Ok(Tense::Past),
            "present" => Ok(Tense::Present),
            "future" => Ok(Tense::Future),
            _ => Err(format!("bad tense '{s}' (expected past, present or future)")),
        }
    }
}

/// A run of normalized words filling one slot. Empty means the slot is null.
pub type Span = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSlot {
    pub tense: Tense,
    pub words: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub verb: Span,
    pub object: Span,
}

/// A proper-noun span to be finger-spelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerspellSpan {
    /// Normalized words joined by spaces.
    pub text: String,
    /// Source capitalization, letter-exact.
    pub original: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotForm {
    pub place: Span,
    pub time: Option<TimeSlot>,
    pub subject: Span,
    pub actions: Vec<Action>,
    pub emotion: Option<EmotionBlend>,
    pub fingerspell: Vec<FingerspellSpan>,
    /// Signs per second.
    pub speed: f64,
}

impl PivotForm {
    pub const DEFAULT_SPEED: f64 = 1.0;

    pub fn new(place: Span, time: Option<TimeSlot>, subject: Span, actions: Vec<Action>) -> Self {
        Self {
            place,
            time,
            subject,
            actions,
            emotion: None,
            fingerspell: Vec::new(),
            speed: Self::DEFAULT_SPEED,
        }
    }

    /// Slot spans in pivot order: place, time, subject, then each verb and
    /// its object.
    pub fn slot_spans(&self) -> Vec<(Role, &Span)> {
        let mut out = vec![(Role::Place, &self.place)];
        if let Some(t) = &self.time {
            out.push((Role::Time, &t.words));
        }
        out.push((Role::Subject, &self.subject));
        for a in &self.actions {
            out.push((Role::Verb, &a.verb));
            out.push((Role::Object, &a.object));
        }
        out
    }

    /// All slot words in pivot order.
    pub fn words(&self) -> Vec<&str> {
        self.slot_spans()
            .into_iter()
            .flat_map(|(_, span)| span.iter().map(String::as_str))
            .collect()
    }

    /// Slot texts joined in pivot order, empty slots skipped.
    pub fn flatten(&self) -> String {
        self.words().join(" ")
    }

    pub fn has_verb(&self) -> bool {
        self.actions.iter().any(|a| !a.verb.is_empty())
    }
}
