//! Example-based recognition of the pivot form.
//!
//! A sentence goes through up to four stages, stopping at the first that
//! succeeds:
//!
//! 1. exact lookup of its normalized form in the corpus;
//! 2. global proximity: character-level global alignment against every
//!    stored sentence, accepted when the best score falls short of a perfect
//!    self-match by at most `global_threshold`; the slots are then projected
//!    from that template;
//! 3. template projection: every template word is locally aligned with
//!    every input word, the template with the largest sum of per-word maxima
//!    wins, its slot roles are projected onto the input, and the result is
//!    kept only if its longest common subsequence with the input is within
//!    `lcs_threshold` characters of the input length. Accepted projections
//!    are learned as new templates;
//! 4. otherwise the sentence is unrecognized.

use thiserror::Error;

use crate::alignment::{global_alignment_score, lcs_length, local_alignment_score, ScoringScheme};
use crate::corpus::{CorpusError, CorpusStore, Template, TemplateWord};
use crate::pivot::{Action, PivotForm, Role, Span, Tense, TimeSlot};
use crate::text::{self, normalize_sentence};

pub use crate::text::{split_sentences, NormalizedSentence, Token};

pub const DEFAULT_GLOBAL_THRESHOLD: u32 = 6;
pub const DEFAULT_LCS_THRESHOLD: u32 = 5;
pub const LEARNED_ID_PREFIX: &str = "learned";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("the corpus holds no templates")]
    EmptyCorpus,
    #[error("no input word landed in a VERB slot")]
    NoVerbProjected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecognitionConfig {
    pub scheme: ScoringScheme,
    /// Largest accepted shortfall of the best global score from a perfect
    /// self-alignment.
    pub global_threshold: u32,
    /// Characters of the input the projected pivot may lose.
    pub lcs_threshold: u32,
    pub learning_enabled: bool,
}

impl Default for RecognitionConfig {
    fn default() -> Self {
        Self {
            scheme: ScoringScheme::unit(),
            global_threshold: DEFAULT_GLOBAL_THRESHOLD,
            lcs_threshold: DEFAULT_LCS_THRESHOLD,
            learning_enabled: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    ExactMatch,
    GlobalProximity,
    TemplateProjection,
    Unrecognized,
}

impl OutcomeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeKind::ExactMatch => "exact-match",
            OutcomeKind::GlobalProximity => "global-proximity",
            OutcomeKind::TemplateProjection => "template-projection",
            OutcomeKind::Unrecognized => "unrecognized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecognitionOutcome {
    pub kind: OutcomeKind,
    pub template_id: Option<String>,
    pub pivot: Option<PivotForm>,
    pub score: i32,
    /// Id of the template learned from this sentence, if any.
    pub learned: Option<String>,
}

impl RecognitionOutcome {
    fn unrecognized(score: i32) -> Self {
        Self {
            kind: OutcomeKind::Unrecognized,
            template_id: None,
            pivot: None,
            score,
            learned: None,
        }
    }

    pub fn is_recognized(&self) -> bool {
        self.kind != OutcomeKind::Unrecognized
    }
}

/// Best whole-sentence match found by global alignment.
#[derive(Debug, Clone, Copy)]
pub struct Proximity<'a> {
    pub template: &'a Template,
    pub best_score: i32,
    pub perfect_score: i32,
}

/// Global alignment of the normalized input against every stored sentence,
/// character by character. Ties go to the earliest template.
pub fn global_proximity<'a>(
    sentence_norm: &str,
    store: &'a CorpusStore,
    scheme: &ScoringScheme,
) -> Result<Proximity<'a>, RecognizeError> {
    let input: Vec<char> = sentence_norm.chars().collect();
    let mut best: Option<(&Template, i32)> = None;
    for t in store.templates() {
        let other: Vec<char> = t.normalized_text().chars().collect();
        let score = global_alignment_score(&input, &other, scheme).value();
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((t, score));
        }
    }
    let (template, best_score) = best.ok_or(RecognizeError::EmptyCorpus)?;
    Ok(Proximity {
        template,
        best_score,
        perfect_score: input.len() as i32 * scheme.match_score(),
    })
}

/// Accepts when the best score is within `global_threshold` of perfect.
pub fn decide_recognition(best_score: i32, perfect_score: i32, cfg: &RecognitionConfig) -> bool {
    i64::from(perfect_score) - i64::from(best_score) <= i64::from(cfg.global_threshold)
}

/// The template word an input word aligned with best.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordAssignment {
    /// Index into [`Template::words`].
    pub template_word: usize,
    pub score: i32,
}

#[derive(Debug, Clone)]
pub struct SlotMatch<'a> {
    pub template: &'a Template,
    pub template_words: Vec<TemplateWord>,
    /// Per input word; `None` when no template word scores above zero.
    pub assignments: Vec<Option<WordAssignment>>,
    /// Per template word: the input word reaching its maximum, and that
    /// maximum.
    pub template_best: Vec<(usize, i32)>,
    /// Sum over template words of their maximum local score.
    pub total: i32,
}

/// Local-alignment match of the input words against one template.
pub fn match_template<'a, S: AsRef<str>>(words: &[S], template: &'a Template, scheme: &ScoringScheme) -> SlotMatch<'a> {
    let template_words = template.words();
    let input: Vec<Vec<char>> = words.iter().map(|w| w.as_ref().chars().collect()).collect();
    let scores: Vec<Vec<i32>> = template_words
        .iter()
        .map(|tw| {
            let t: Vec<char> = tw.text.chars().collect();
            input
                .iter()
                .map(|s| local_alignment_score(&t, s, scheme).value())
                .collect()
        })
        .collect();

    let mut template_best = Vec::with_capacity(template_words.len());
    let mut total = 0;
    for row in &scores {
        let mut best = (0usize, 0i32);
        for (s, &v) in row.iter().enumerate() {
            if v > best.1 {
                best = (s, v);
            }
        }
        total += best.1;
        template_best.push(best);
    }

    // Each input word takes the highest-scoring template word. Among equal
    // scores an identical word wins, then the closest position, then the
    // earliest.
    let assignments = (0..input.len())
        .map(|s| {
            let mut best: Option<(usize, i32)> = None;
            for (t, row) in scores.iter().enumerate() {
                let v = row[s];
                if v <= 0 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bt, bv)) => {
                        let key = |t: usize| {
                            (
                                template_words[t].text != words[s].as_ref(),
                                t.abs_diff(s),
                                t,
                            )
                        };
                        v > bv || (v == bv && key(t) < key(bt))
                    }
                };
                if better {
                    best = Some((t, v));
                }
            }
            best.map(|(template_word, score)| WordAssignment { template_word, score })
        })
        .collect();

    SlotMatch {
        template,
        template_words,
        assignments,
        template_best,
        total,
    }
}

/// Runs [`match_template`] over the whole corpus and keeps the template
/// with the largest total; ties go to the earliest template.
pub fn template_slot_match<'a, S: AsRef<str>>(
    words: &[S],
    store: &'a CorpusStore,
    scheme: &ScoringScheme,
) -> Result<SlotMatch<'a>, RecognizeError> {
    let mut best: Option<SlotMatch<'a>> = None;
    for t in store.templates() {
        let m = match_template(words, t, scheme);
        if best.as_ref().is_none_or(|b| m.total > b.total) {
            best = Some(m);
        }
    }
    best.ok_or(RecognizeError::EmptyCorpus)
}

/// Builds a pivot form for the input from the slot roles of the matched
/// template.
///
/// An input word takes the role (and verb/object pair) of the template word
/// it matched. Words that matched nothing take the role of the word to their
/// left, or SUBJECT at the start. Words keep input order inside each slot.
/// An object whose pair received no verb joins the nearest pair that did.
pub fn project_slots<S: AsRef<str>>(
    words: &[S],
    template: &Template,
    template_words: &[TemplateWord],
    assignments: &[Option<WordAssignment>],
) -> Result<PivotForm, RecognizeError> {
    let mut place: Span = Vec::new();
    let mut time: Span = Vec::new();
    let mut subject: Span = Vec::new();
    let mut verbs: Vec<Vec<(usize, String)>> = vec![Vec::new(); template.actions().len()];
    let mut objects: Vec<Vec<(usize, String)>> = vec![Vec::new(); template.actions().len()];

    let mut current = (Role::Subject, None::<usize>);
    for (pos, word) in words.iter().enumerate() {
        if let Some(a) = assignments.get(pos).copied().flatten().filter(|a| a.score > 0) {
            let tw = &template_words[a.template_word];
            current = (tw.role, tw.action);
        }
        let word = word.as_ref().to_string();
        match current {
            (Role::Place, _) => place.push(word),
            (Role::Time, _) => time.push(word),
            (Role::Subject, _) => subject.push(word),
            (Role::Verb, Some(k)) => verbs[k].push((pos, word)),
            (Role::Object, Some(k)) => objects[k].push((pos, word)),
            (Role::Verb | Role::Object, None) => unreachable!("action words carry a pair index"),
        }
    }

    let with_verb: Vec<usize> = (0..verbs.len()).filter(|&k| !verbs[k].is_empty()).collect();
    if with_verb.is_empty() {
        return Err(RecognizeError::NoVerbProjected);
    }
    for k in 0..objects.len() {
        if !verbs[k].is_empty() || objects[k].is_empty() {
            continue;
        }
        let host = with_verb
            .iter()
            .rev()
            .find(|&&h| h < k)
            .or_else(|| with_verb.iter().find(|&&h| h > k))
            .copied()
            .expect("at least one pair has a verb");
        let moved = std::mem::take(&mut objects[k]);
        objects[host].extend(moved);
        objects[host].sort_by_key(|(p, _)| *p);
    }
    let strip = |v: Vec<(usize, String)>| v.into_iter().map(|(_, w)| w).collect::<Span>();
    let actions = verbs
        .into_iter()
        .zip(objects)
        .filter(|(v, _)| !v.is_empty())
        .map(|(v, o)| Action {
            verb: strip(v),
            object: strip(o),
        })
        .collect();

    let time = (!time.is_empty()).then(|| TimeSlot {
        tense: template.time().map_or(Tense::Present, |t| t.tense),
        words: time,
    });
    Ok(PivotForm::new(place, time, subject, actions))
}

/// Checks that the pivot, flattened in slot order, keeps enough of the
/// input: its character-level LCS with the normalized input must reach the
/// input length minus `lcs_threshold`.
pub fn verify_lcs(pivot: &PivotForm, original_norm: &str, cfg: &RecognitionConfig) -> bool {
    let rebuilt: Vec<char> = pivot.flatten().chars().collect();
    let original: Vec<char> = original_norm.chars().collect();
    let lcs = lcs_length(&rebuilt, &original) as i64;
    lcs >= original.len() as i64 - i64::from(cfg.lcs_threshold)
}

/// The template's own slots as a pivot form.
pub fn pivot_from_template(template: &Template) -> PivotForm {
    let place = text::normalized_words(template.place());
    let time = template.time().and_then(|t| {
        let words = text::normalized_words(&t.text);
        (!words.is_empty()).then_some(TimeSlot { tense: t.tense, words })
    });
    let subject = text::normalized_words(template.subject());
    let actions = template
        .actions()
        .iter()
        .map(|a| Action {
            verb: text::normalized_words(&a.verb),
            object: text::normalized_words(&a.object),
        })
        .collect();
    PivotForm::new(place, time, subject, actions)
}

/// Turns an accepted projection into a template for later sentences.
pub fn template_from_pivot(
    id: String,
    sentence: &str,
    pivot: &PivotForm,
    like: &Template,
) -> Result<Template, CorpusError> {
    let join = |s: &Span| s.join(" ");
    let time_text = pivot.time.as_ref().map(|t| (t.tense, join(&t.words)));
    let actions: Vec<(String, String)> = pivot.actions.iter().map(|a| (join(&a.verb), join(&a.object))).collect();
    let action_refs: Vec<(&str, &str)> = actions.iter().map(|(v, o)| (v.as_str(), o.as_str())).collect();
    Template::new(
        id,
        like.language(),
        sentence,
        &join(&pivot.place),
        time_text.as_ref().map(|(t, s)| (*t, s.as_str())),
        &join(&pivot.subject),
        &action_refs,
        Vec::new(),
    )
}

struct Analysis {
    outcome: RecognitionOutcome,
    learnable: Option<Template>,
}

fn analyze(sentence: &str, store: &CorpusStore, cfg: &RecognitionConfig) -> Analysis {
    let done = |outcome| Analysis {
        outcome,
        learnable: None,
    };
    let Ok(norm) = normalize_sentence(sentence) else {
        return done(RecognitionOutcome::unrecognized(0));
    };
    let words = norm.words();

    if let Some(t) = store.find_exact(&norm.normalized) {
        return done(RecognitionOutcome {
            kind: OutcomeKind::ExactMatch,
            template_id: Some(t.id().to_string()),
            pivot: Some(pivot_from_template(t)),
            score: norm.normalized.chars().count() as i32 * cfg.scheme.match_score(),
            learned: None,
        });
    }

    let Ok(near) = global_proximity(&norm.normalized, store, &cfg.scheme) else {
        return done(RecognitionOutcome::unrecognized(0));
    };
    if decide_recognition(near.best_score, near.perfect_score, cfg) {
        let m = match_template(&words, near.template, &cfg.scheme);
        if let Ok(pivot) = project_slots(&words, near.template, &m.template_words, &m.assignments) {
            return done(RecognitionOutcome {
                kind: OutcomeKind::GlobalProximity,
                template_id: Some(near.template.id().to_string()),
                pivot: Some(pivot),
                score: near.best_score,
                learned: None,
            });
        }
    }

    let m = template_slot_match(&words, store, &cfg.scheme).expect("corpus is not empty");
    let projected = project_slots(&words, m.template, &m.template_words, &m.assignments);
    match projected {
        Ok(pivot) if verify_lcs(&pivot, &norm.normalized, cfg) => {
            let learnable = template_from_pivot(store.next_id(LEARNED_ID_PREFIX), sentence, &pivot, m.template).ok();
            Analysis {
                outcome: RecognitionOutcome {
                    kind: OutcomeKind::TemplateProjection,
                    template_id: Some(m.template.id().to_string()),
                    pivot: Some(pivot),
                    score: m.total,
                    learned: None,
                },
                learnable,
            }
        }
        _ => done(RecognitionOutcome::unrecognized(m.total)),
    }
}

/// Recognizes without touching the corpus.
pub fn recognize_readonly(sentence: &str, store: &CorpusStore, cfg: &RecognitionConfig) -> RecognitionOutcome {
    analyze(sentence, store, cfg).outcome
}

/// Recognizes a sentence and, when learning is enabled, stores an accepted
/// template projection as a new template. A sentence already present in
/// normalized form is not learned twice.
pub fn recognize(sentence: &str, store: &mut CorpusStore, cfg: &RecognitionConfig) -> RecognitionOutcome {
    let Analysis { mut outcome, learnable } = analyze(sentence, store, cfg);
    if cfg.learning_enabled {
        if let Some(template) = learnable {
            let id = template.id().to_string();
            if store.add_template(template).is_ok() {
                outcome.learned = Some(id);
            }
        }
    }
    outcome
}
