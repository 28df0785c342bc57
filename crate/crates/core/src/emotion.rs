//! Lexicon-driven emotion intensities and fuzzy blending on the emotion
//! wheel.
//!
//! Detection accumulates per-emotion intensities from a word lexicon and
//! normalizes them so the dominant emotion reads 1.0. Blending then keeps
//! the dominant emotion plus its strongest wheel neighbour (and possibly a
//! third emotion continuing the arc), with weights proportional to their
//! intensities. Emotions that are not neighbours on the wheel do not blend;
//! the strongest one wins, except when two of them tie exactly for first
//! place, in which case they share the face equally.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const LEXICON_HEADER: &str = "#TASML-EMOLEX v1";

/// Minimum rescaled weight for a third blend component.
pub const DEFAULT_THIRD_COMPONENT_MIN: f64 = 0.15;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmotionError {
    #[error("unknown emotion '{0}'")]
    UnknownLabel(String),
    #[error("intensity {0} outside [0, 1]")]
    IntensityOutOfRange(f64),
    #[error("membership degree {0} outside [0, 1]")]
    MembershipOutOfRange(f64),
    #[error("invalid blend: {0}")]
    InvalidBlend(String),
    #[error("lexicon line {line}: {reason}")]
    LexiconSyntax { line: usize, reason: String },
}

/// The nine emotions of the wheel, declared in wheel order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EmotionLabel {
    Joy,
    Surprise,
    Suffering,
    Fear,
    Anger,
    Disgust,
    Contempt,
    Love,
    Gaiety,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 9] = [
        EmotionLabel::Joy,
        EmotionLabel::Surprise,
        EmotionLabel::Suffering,
        EmotionLabel::Fear,
        EmotionLabel::Anger,
        EmotionLabel::Disgust,
        EmotionLabel::Contempt,
        EmotionLabel::Love,
        EmotionLabel::Gaiety,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Joy => "joy",
            EmotionLabel::Surprise => "surprise",
            EmotionLabel::Suffering => "suffering",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Anger => "anger",
            EmotionLabel::Disgust => "disgust",
            EmotionLabel::Contempt => "contempt",
            EmotionLabel::Love => "love",
            EmotionLabel::Gaiety => "gaiety",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = EmotionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_lowercase();
        EmotionLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == lower)
            .ok_or_else(|| EmotionError::UnknownLabel(s.to_string()))
    }
}

/// Cyclic adjacency joy, surprise, suffering, fear, anger, disgust, contempt,
/// love, gaiety and back to joy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmotionWheel {
    ring: [EmotionLabel; 9],
}

impl Default for EmotionWheel {
    fn default() -> Self {
        Self {
            ring: EmotionLabel::ALL,
        }
    }
}

impl EmotionWheel {
    pub fn labels(&self) -> &[EmotionLabel; 9] {
        &self.ring
    }

    pub fn position(&self, label: EmotionLabel) -> usize {
        self.ring
            .iter()
            .position(|l| *l == label)
            .expect("every label sits on the wheel")
    }

    pub fn neighbors(&self, label: EmotionLabel) -> [EmotionLabel; 2] {
        let p = self.position(label);
        let n = self.ring.len();
        [self.ring[(p + n - 1) % n], self.ring[(p + 1) % n]]
    }

    pub fn adjacent(&self, a: EmotionLabel, b: EmotionLabel) -> bool {
        self.neighbors(a).contains(&b)
    }

    /// True when the labels are distinct and occupy consecutive wheel
    /// positions.
    pub fn is_arc(&self, labels: &[EmotionLabel]) -> bool {
        match labels {
            [] => false,
            [_] => true,
            [a, b] => self.adjacent(*a, *b),
            _ => {
                let n = self.ring.len();
                if labels.len() >= n {
                    return false;
                }
                let mut positions: Vec<usize> = labels.iter().map(|l| self.position(*l)).collect();
                positions.sort_unstable();
                positions.dedup();
                if positions.len() != labels.len() {
                    return false;
                }
                // contiguous on a ring iff exactly one gap between consecutive
                // members (cyclically) is larger than one step
                let big_gaps = positions
                    .iter()
                    .zip(positions.iter().cycle().skip(1))
                    .filter(|(a, b)| (**b + n - **a) % n != 1)
                    .count();
                big_gaps == 1
            }
        }
    }
}

/// Word to (emotion, intensity) entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmotionLexicon {
    entries: HashMap<String, Vec<(EmotionLabel, f64)>>,
}

impl EmotionLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds an entry. The word is lowercased. Returns `false` if the
    /// (word, emotion) pair already existed, leaving the lexicon unchanged.
    pub fn insert(&mut self, word: &str, label: EmotionLabel, intensity: f64) -> Result<bool, EmotionError> {
        if !(0.0..=1.0).contains(&intensity) {
            return Err(EmotionError::IntensityOutOfRange(intensity));
        }
        let list = self.entries.entry(word.trim().to_lowercase()).or_default();
        if list.iter().any(|(l, _)| *l == label) {
            return Ok(false);
        }
        list.push((label, intensity));
        Ok(true)
    }

    pub fn lookup(&self, word: &str) -> &[(EmotionLabel, f64)] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn parse(document: &str) -> Result<Self, EmotionError> {
        let syntax = |line: usize, reason: String| EmotionError::LexiconSyntax { line, reason };
        let mut lines = document.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            None => return Ok(Self::new()),
            Some((_, header)) if header == LEXICON_HEADER => {}
            Some((n, _)) => return Err(syntax(n, format!("expected header '{LEXICON_HEADER}'"))),
        }
        let mut lexicon = Self::new();
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [word, label, intensity] = fields[..] else {
                return Err(syntax(n, format!("expected 3 tab-separated fields, found {}", fields.len())));
            };
            if word.trim().is_empty() {
                return Err(syntax(n, "empty word".into()));
            }
            let label: EmotionLabel = label.parse().map_err(|e: EmotionError| syntax(n, e.to_string()))?;
            let intensity: f64 = intensity
                .trim()
                .parse()
                .map_err(|_| syntax(n, format!("bad intensity '{intensity}'")))?;
            let fresh = lexicon
                .insert(word, label, intensity)
                .map_err(|e| syntax(n, e.to_string()))?;
            if !fresh {
                return Err(syntax(n, format!("duplicate entry for '{}' / {label}", word.trim())));
            }
        }
        Ok(lexicon)
    }
}

/// Per-emotion intensities in [0, 1].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntensityProfile {
    values: BTreeMap<EmotionLabel, f64>,
}

impl IntensityProfile {
    /// Builds a profile from explicit values. Zero entries are dropped.
    pub fn new<I>(values: I) -> Result<Self, EmotionError>
    where
        I: IntoIterator<Item = (EmotionLabel, f64)>,
    {
        let mut map = BTreeMap::new();
        for (label, v) in values {
            if !(0.0..=1.0).contains(&v) {
                return Err(EmotionError::IntensityOutOfRange(v));
            }
            if v > 0.0 {
                map.insert(label, v);
            }
        }
        Ok(Self { values: map })
    }

    pub fn get(&self, label: EmotionLabel) -> f64 {
        self.values.get(&label).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Entries in wheel order.
    pub fn iter(&self) -> impl Iterator<Item = (EmotionLabel, f64)> + '_ {
        self.values.iter().map(|(l, v)| (*l, *v))
    }
}

/// Sums lexicon contributions over the tokens and divides by the largest
/// total, so the dominant emotion reads exactly 1.0.
pub fn score_intensities<S: AsRef<str>>(tokens: &[S], lexicon: &EmotionLexicon) -> IntensityProfile {
    let mut totals: BTreeMap<EmotionLabel, f64> = BTreeMap::new();
    for token in tokens {
        for (label, intensity) in lexicon.lookup(token.as_ref()) {
            *totals.entry(*label).or_insert(0.0) += intensity;
        }
    }
    let peak = totals.values().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return IntensityProfile::default();
    }
    IntensityProfile {
        values: totals
            .into_iter()
            .filter(|(_, v)| *v > 0.0)
            .map(|(l, v)| (l, if v == peak { 1.0 } else { v / peak }))
            .collect(),
    }
}

/// One to three weighted emotions sharing a single facial expression.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionBlend {
    components: Vec<(EmotionLabel, f64)>,
}

impl EmotionBlend {
    pub fn pure(label: EmotionLabel) -> Self {
        Self {
            components: vec![(label, 1.0)],
        }
    }

    /// Validates and orders the components.
    ///
    /// Weights must be positive and sum to 1. Two or three components must
    /// form a contiguous wheel arc; the one exception is a pair with exactly
    /// equal weights, which is how two tied non-neighbouring emotions are
    /// represented.
    pub fn new(mut components: Vec<(EmotionLabel, f64)>, wheel: &EmotionWheel) -> Result<Self, EmotionError> {
        let bad = |msg: String| Err(EmotionError::InvalidBlend(msg));
        if components.is_empty() || components.len() > 3 {
            return bad(format!("{} components (expected 1 to 3)", components.len()));
        }
        if let Some((l, w)) = components.iter().find(|(_, w)| w.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
            return bad(format!("weight {w} for {l} is not positive"));
        }
        let sum: f64 = components.iter().map(|(_, w)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return bad(format!("weights sum to {sum}"));
        }
        let labels: Vec<EmotionLabel> = components.iter().map(|(l, _)| *l).collect();
        let tied_pair = components.len() == 2 && components[0].1 == components[1].1 && labels[0] != labels[1];
        if !wheel.is_arc(&labels) && !tied_pair {
            return bad(format!("{labels:?} is not a contiguous wheel arc"));
        }
        sort_components(&mut components, wheel);
        Ok(Self { components })
    }

    /// Components by descending weight, ties in wheel order.
    pub fn components(&self) -> &[(EmotionLabel, f64)] {
        &self.components
    }

    pub fn labels(&self) -> Vec<EmotionLabel> {
        self.components.iter().map(|(l, _)| *l).collect()
    }

    pub fn weight(&self, label: EmotionLabel) -> f64 {
        self.components
            .iter()
            .find(|(l, _)| *l == label)
            .map_or(0.0, |(_, w)| *w)
    }

    /// Hyphen-joined component names, e.g. `surprise-fear`.
    pub fn compound_name(&self) -> String {
        self.components
            .iter()
            .map(|(l, _)| l.as_str())
            .collect::<Vec<_>>()
            .join("-")
    }

    pub fn is_compound(&self) -> bool {
        self.components.len() > 1
    }
}

fn sort_components(components: &mut [(EmotionLabel, f64)], wheel: &EmotionWheel) {
    components.sort_by(|(la, wa), (lb, wb)| {
        wb.total_cmp(wa)
            .then_with(|| wheel.position(*la).cmp(&wheel.position(*lb)))
    });
}

fn normalized(parts: &[(EmotionLabel, f64)]) -> Vec<(EmotionLabel, f64)> {
    let total: f64 = parts.iter().map(|(_, v)| v).sum();
    parts.iter().map(|(l, v)| (*l, v / total)).collect()
}

/// Blends with the default third-component threshold.
pub fn fuzzy_blend(profile: &IntensityProfile, wheel: &EmotionWheel) -> Option<EmotionBlend> {
    fuzzy_blend_with(profile, wheel, DEFAULT_THIRD_COMPONENT_MIN)
}

/// Turns an intensity profile into a simple or compound emotion.
///
/// The top emotion A pairs with its strongest wheel neighbour B, weights
/// proportional to intensity. A third emotion C extending the arc on either
/// side joins when its share of the three-way total reaches `third_min`.
/// Without any present neighbour, A is returned alone. When the top
/// intensity is shared by emotions none of which are neighbours, the first
/// two in wheel order are blended equally.
pub fn fuzzy_blend_with(profile: &IntensityProfile, wheel: &EmotionWheel, third_min: f64) -> Option<EmotionBlend> {
    let present: Vec<(EmotionLabel, f64)> = wheel
        .labels()
        .iter()
        .filter_map(|l| {
            let v = profile.get(*l);
            (v > 0.0).then_some((*l, v))
        })
        .collect();
    let top = present.iter().map(|(_, v)| *v).fold(f64::NAN, f64::max);
    let tied: Vec<EmotionLabel> = present.iter().filter(|(_, v)| *v == top).map(|(l, _)| *l).collect();
    let first = *tied.first()?;

    let has_tied_neighbour = |a: &EmotionLabel| tied.iter().any(|b| wheel.adjacent(*a, *b));
    if tied.len() >= 2 && !tied.iter().any(has_tied_neighbour) {
        let pair = vec![(tied[0], 0.5), (tied[1], 0.5)];
        return EmotionBlend::new(pair, wheel).ok();
    }
    let dominant = tied.iter().copied().find(has_tied_neighbour).unwrap_or(first);

    // strongest present label among `candidates`, ties to the wheel-earliest
    let strongest = |candidates: &[EmotionLabel]| -> Option<(EmotionLabel, f64)> {
        let mut best: Option<(EmotionLabel, f64)> = None;
        for c in candidates {
            let v = profile.get(*c);
            if v <= 0.0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bl, bv)) => v > bv || (v == bv && wheel.position(*c) < wheel.position(bl)),
            };
            if better {
                best = Some((*c, v));
            }
        }
        best
    };

    let a = (dominant, top);
    let Some(b) = strongest(&wheel.neighbors(dominant)) else {
        return Some(EmotionBlend::pure(dominant));
    };

    let mut parts = vec![a, b];
    let extension: Vec<EmotionLabel> = wheel
        .neighbors(a.0)
        .into_iter()
        .chain(wheel.neighbors(b.0))
        .filter(|l| *l != a.0 && *l != b.0)
        .collect();
    if let Some(c) = strongest(&extension) {
        let share = c.1 / (a.1 + b.1 + c.1);
        if share >= third_min {
            parts.push(c);
        }
    }
    EmotionBlend::new(normalized(&parts), wheel).ok()
}

/// Splits a membership degree into the weights of the two interpolated
/// expressions: `mu` for the first, `1 - mu` for the second.
pub fn membership_split(mu: f64) -> Result<(f64, f64), EmotionError> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(EmotionError::MembershipOutOfRange(mu));
    }
    Ok((mu, 1.0 - mu))
}
