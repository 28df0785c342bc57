//! Target-language ordering, timing, finger spelling and TASML rendering.
//!
//! A rendered document looks like this:
//!
//! ```text
//! <tasml version="1.0" target="ASL">
//!   <sentence id="1" speed="1">
//!     <place/>
//!     <time tense="past" pause="1.0">for about three to four hundred years</time>
//!     <subject pause="0.5">the viking period in history</subject>
//!     <verb>stretched</verb>
//!     <object/>
//!     <emotion components="surprise:0.500,fear:0.500">surprise-fear</emotion>
//!     <fingerspell original="Jesus-Christ">jesus-christ</fingerspell>
//!   </sentence>
//! </tasml>
//! ```
//!
//! Slot elements come first in signing order, then the optional emotion,
//! then one `fingerspell` element per proper-noun span. Sentences the
//! recognizer could not handle are kept as
//! `<sentence id="n" unrecognized="true">raw text</sentence>`.

use thiserror::Error;

use crate::emotion::{EmotionBlend, EmotionLabel};
use crate::pivot::{FingerspellSpan, PivotForm, Role, Span, TargetLanguage, Tense};
use crate::text::Token;

pub const TASML_VERSION: &str = "1.0";

pub const DEFAULT_PAUSE_AFTER_TIME: f64 = 1.0;
pub const DEFAULT_PAUSE_AFTER_SUBJECT: f64 = 0.5;
pub const DEFAULT_PAUSE_AFTER_OBJECT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOrder {
    Svo,
    Sov,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("pause {0} must be a finite number of seconds >= 0")]
    BadPause(f64),
}

/// Word order and pause lengths (seconds) for one sign language.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetLanguageProfile {
    language: TargetLanguage,
    pause_after_time: f64,
    pause_after_subject: f64,
    pause_after_object: f64,
}

impl TargetLanguageProfile {
    pub fn new(language: TargetLanguage, after_time: f64, after_subject: f64, after_object: f64) -> Result<Self, ProfileError> {
        for p in [after_time, after_subject, after_object] {
            if !p.is_finite() || p < 0.0 {
                return Err(ProfileError::BadPause(p));
            }
        }
        Ok(Self {
            language,
            pause_after_time: after_time,
            pause_after_subject: after_subject,
            pause_after_object: after_object,
        })
    }

    pub fn for_language(language: TargetLanguage) -> Self {
        Self {
            language,
            pause_after_time: DEFAULT_PAUSE_AFTER_TIME,
            pause_after_subject: DEFAULT_PAUSE_AFTER_SUBJECT,
            pause_after_object: DEFAULT_PAUSE_AFTER_OBJECT,
        }
    }

    pub fn language(&self) -> TargetLanguage {
        self.language
    }

    /// ASL signs subject-verb-object, FSL subject-object-verb.
    pub fn order(&self) -> WordOrder {
        match self.language {
            TargetLanguage::Asl => WordOrder::Svo,
            TargetLanguage::Fsl => WordOrder::Sov,
        }
    }

    pub fn pause_after_time(&self) -> f64 {
        self.pause_after_time
    }

    pub fn pause_after_subject(&self) -> f64 {
        self.pause_after_subject
    }

    pub fn pause_after_object(&self) -> f64 {
        self.pause_after_object
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedSlot {
    pub role: Role,
    pub tense: Option<Tense>,
    pub words: Span,
    /// Pair index for verbs and objects.
    pub action: Option<usize>,
}

impl OrderedSlot {
    fn new(role: Role, words: &Span, action: Option<usize>) -> Self {
        Self {
            role,
            tense: None,
            words: words.clone(),
            action,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Place, time, subject, then each (verb, object) pair in the order the
/// target language signs it. Empty slots are kept.
pub fn order_for_target(pivot: &PivotForm, profile: &TargetLanguageProfile) -> Vec<OrderedSlot> {
    let mut out = vec![OrderedSlot::new(Role::Place, &pivot.place, None)];
    out.push(match &pivot.time {
        Some(t) => OrderedSlot {
            role: Role::Time,
            tense: Some(t.tense),
            words: t.words.clone(),
            action: None,
        },
        None => OrderedSlot::new(Role::Time, &Vec::new(), None),
    });
    out.push(OrderedSlot::new(Role::Subject, &pivot.subject, None));
    for (k, a) in pivot.actions.iter().enumerate() {
        let verb = OrderedSlot::new(Role::Verb, &a.verb, Some(k));
        let object = OrderedSlot::new(Role::Object, &a.object, Some(k));
        match profile.order() {
            WordOrder::Svo => out.extend([verb, object]),
            WordOrder::Sov => out.extend([object, verb]),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedSlot {
    pub slot: OrderedSlot,
    /// Seconds of pause after the slot; `None` when no pause is signed.
    pub pause: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedSentence {
    pub slots: Vec<TimedSlot>,
    /// Signs per second.
    pub speed: f64,
}

/// Pauses follow a non-empty time, subject or object slot. A zero pause is
/// no pause.
pub fn assign_timing(slots: Vec<OrderedSlot>, profile: &TargetLanguageProfile, speed: f64) -> TimedSentence {
    let slots = slots
        .into_iter()
        .map(|slot| {
            let pause = match slot.role {
                _ if slot.is_empty() => None,
                Role::Time => Some(profile.pause_after_time),
                Role::Subject => Some(profile.pause_after_subject),
                Role::Object => Some(profile.pause_after_object),
                Role::Place | Role::Verb => None,
            };
            TimedSlot {
                slot,
                pause: pause.filter(|p| *p > 0.0),
            }
        })
        .collect();
    TimedSentence { slots, speed }
}

const DETERMINERS: [&str; 7] = ["the", "a", "an", "this", "that", "these", "those"];

/// Marks proper nouns for finger spelling.
///
/// Candidates are runs of words written with a capital away from the start
/// of the sentence; adjacent capitalized words merge into one span unless
/// punctuation separates them, and hyphenated names stay whole. A run that
/// sits between a determiner and a lowercase word ("the Viking period") is
/// read as a proper adjective and left to be signed. The pronoun "I" is
/// never spelled. Each span is listed once, in order of first occurrence,
/// and only if all its words appear in the pivot's slots.
pub fn detect_fingerspell(mut pivot: PivotForm, tokens: &[Token]) -> PivotForm {
    let slot_words: Vec<&str> = pivot.words();
    let mut spans: Vec<FingerspellSpan> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !tokens[i].capitalized || tokens[i].text == "i" {
            i += 1;
            continue;
        }
        let start = i;
        while !tokens[i].punct_after && tokens.get(i + 1).is_some_and(|t| t.capitalized && t.text != "i") {
            i += 1;
        }
        let end = i + 1;
        i = end;

        let after_determiner = start > 0
            && !tokens[start - 1].punct_after
            && DETERMINERS.contains(&tokens[start - 1].text.as_str());
        let before_lowercase = !tokens[end - 1].punct_after && tokens.get(end).is_some_and(|t| !t.capitalized);
        if after_determiner && before_lowercase {
            continue;
        }

        let run = &tokens[start..end];
        if !run.iter().all(|t| slot_words.contains(&t.text.as_str())) {
            continue;
        }
        let span = FingerspellSpan {
            text: run.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" "),
            original: run.iter().map(|t| t.original.as_str()).collect::<Vec<_>>().join(" "),
        };
        if !spans.iter().any(|s| s.text == span.text) {
            spans.push(span);
        }
    }
    pivot.fingerspell = spans;
    pivot
}

/// Everything needed to render one recognized sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedSentence {
    pub timed: TimedSentence,
    pub emotion: Option<EmotionBlend>,
    pub fingerspell: Vec<FingerspellSpan>,
}

impl RenderedSentence {
    /// Orders, times and packages a pivot for the given profile.
    pub fn from_pivot(pivot: &PivotForm, profile: &TargetLanguageProfile) -> Self {
        Self {
            timed: assign_timing(order_for_target(pivot, profile), profile, pivot.speed),
            emotion: pivot.emotion.clone(),
            fingerspell: pivot.fingerspell.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SentenceEntry {
    Recognized(RenderedSentence),
    Unrecognized { raw: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TasmlDocument {
    pub target: TargetLanguage,
    pub sentences: Vec<SentenceEntry>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    s.replace("&#10;", "\n")
        .replace("&quot;", "\"")
        .replace("&gt;", ">")
        .replace("&lt;", "<")
        .replace("&amp;", "&")
}

fn element(tag: &str, attrs: &[(&str, String)], text: &str) -> String {
    let mut out = format!("<{tag}");
    for (k, v) in attrs {
        out.push_str(&format!(" {k}=\"{}\"", escape(v)));
    }
    if text.is_empty() {
        out.push_str("/>");
    } else {
        out.push_str(&format!(">{}</{tag}>", escape(text)));
    }
    out
}

/// Rounds weights summing to 1 into thousandths summing to exactly 1000,
/// giving leftover units to the largest remainders (earlier ones on ties).
fn thousandths(weights: &[f64]) -> Vec<u32> {
    let scaled: Vec<f64> = weights.iter().map(|w| w * 1000.0).collect();
    let mut out: Vec<u32> = scaled.iter().map(|x| x.floor() as u32).collect();
    let short = 1000u32.saturating_sub(out.iter().sum());
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| (scaled[b] - scaled[b].floor()).total_cmp(&(scaled[a] - scaled[a].floor())));
    for &i in order.iter().cycle().take(short as usize) {
        out[i] += 1;
    }
    out
}

/// Renders one `<sentence>` element, indented for its place in a document.
pub fn render_tasml(sentence: &RenderedSentence, id: usize) -> String {
    let mut out = format!("  <sentence id=\"{id}\" speed=\"{}\">\n", sentence.timed.speed);
    for timed in &sentence.timed.slots {
        let slot = &timed.slot;
        let mut attrs = Vec::new();
        if let (Some(tense), false) = (slot.tense, slot.is_empty()) {
            attrs.push(("tense", tense.as_str().to_string()));
        }
        if let Some(p) = timed.pause {
            attrs.push(("pause", format!("{p:.1}")));
        }
        out.push_str(&format!("    {}\n", element(slot.role.tag(), &attrs, &slot.words.join(" "))));
    }
    if let Some(blend) = &sentence.emotion {
        let weights: Vec<f64> = blend.components().iter().map(|(_, w)| *w).collect();
        let components = blend
            .components()
            .iter()
            .zip(thousandths(&weights))
            .map(|((l, _), t)| format!("{l}:{}.{:03}", t / 1000, t % 1000))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "    {}\n",
            element("emotion", &[("components", components)], &blend.compound_name())
        ));
    }
    for span in &sentence.fingerspell {
        out.push_str(&format!(
            "    {}\n",
            element("fingerspell", &[("original", span.original.clone())], &span.text)
        ));
    }
    out.push_str("  </sentence>\n");
    out
}

impl TasmlDocument {
    pub fn new(target: TargetLanguage) -> Self {
        Self {
            target,
            sentences: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("<tasml version=\"{TASML_VERSION}\" target=\"{}\">\n", self.target);
        for (i, s) in self.sentences.iter().enumerate() {
            let id = i + 1;
            match s {
                SentenceEntry::Recognized(r) => out.push_str(&render_tasml(r, id)),
                SentenceEntry::Unrecognized { raw } => {
                    out.push_str(&format!("  <sentence id=\"{id}\" unrecognized=\"true\">{}</sentence>\n", escape(raw)));
                }
            }
        }
        out.push_str("</tasml>\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("TASML line {line}: {reason}")]
pub struct TasmlParseError {
    pub line: usize,
    pub reason: String,
}

/// One element as read back from a document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedElement {
    pub tag: String,
    pub attrs: Vec<(String, String)>,
    pub text: String,
}

impl ParsedElement {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSentence {
    pub id: usize,
    pub speed: Option<String>,
    /// Raw text of an unrecognized sentence.
    pub unrecognized: Option<String>,
    pub elements: Vec<ParsedElement>,
}

impl ParsedSentence {
    pub fn tags(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.tag.as_str()).collect()
    }

    /// Weights listed by the emotion element.
    pub fn emotion_weights(&self) -> Option<Vec<(EmotionLabel, f64)>> {
        let e = self.elements.iter().find(|e| e.tag == "emotion")?;
        parse_components(e.attr("components")?).ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDocument {
    pub target: TargetLanguage,
    pub sentences: Vec<ParsedSentence>,
}

fn parse_components(s: &str) -> Result<Vec<(EmotionLabel, f64)>, String> {
    s.split(',')
        .map(|part| {
            let (label, weight) = part.split_once(':').ok_or_else(|| format!("bad component '{part}'"))?;
            let label: EmotionLabel = label.parse().map_err(|e: crate::emotion::EmotionError| e.to_string())?;
            let (_, decimals) = weight.split_once('.').ok_or_else(|| format!("weight '{weight}' needs 3 decimals"))?;
            if decimals.len() != 3 {
                return Err(format!("weight '{weight}' needs 3 decimals"));
            }
            let w: f64 = weight.parse().map_err(|_| format!("bad weight '{weight}'"))?;
            Ok((label, w))
        })
        .collect()
}

/// Splits `<tag a="x" b="y">text</tag>` or `<tag a="x"/>`.
fn parse_element(s: &str) -> Result<ParsedElement, String> {
    let inner = s.strip_prefix('<').ok_or("expected '<'")?;
    let name_end = inner
        .find([' ', '>', '/'])
        .ok_or("unterminated tag")?;
    let tag = &inner[..name_end];
    if tag.is_empty() || !tag.chars().all(|c| c.is_ascii_lowercase()) {
        return Err(format!("bad tag name '{tag}'"));
    }
    let mut rest = &inner[name_end..];
    let mut attrs = Vec::new();
    while let Some(r) = rest.strip_prefix(' ') {
        let eq = r.find("=\"").ok_or("attribute without =\"")?;
        let key = &r[..eq];
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase()) {
            return Err(format!("bad attribute name '{key}'"));
        }
        let value_start = eq + 2;
        let close = r[value_start..].find('"').ok_or("unterminated attribute value")? + value_start;
        attrs.push((key.to_string(), unescape(&r[value_start..close])));
        rest = &r[close + 1..];
    }
    if rest == "/>" {
        return Ok(ParsedElement {
            tag: tag.to_string(),
            attrs,
            text: String::new(),
        });
    }
    let body = rest.strip_prefix('>').ok_or("expected '>' or '/>'")?;
    let closing = format!("</{tag}>");
    let text = body.strip_suffix(&closing).ok_or_else(|| format!("missing {closing}"))?;
    if text.is_empty() || text.contains('<') {
        return Err("element text must be non-empty and contain no markup".into());
    }
    Ok(ParsedElement {
        tag: tag.to_string(),
        attrs,
        text: unescape(text),
    })
}

/// Reads an opening tag such as `<sentence id="1" speed="1">`.
fn parse_open(s: &str) -> Result<ParsedElement, String> {
    let head = s
        .strip_suffix('>')
        .filter(|h| !h.ends_with('/'))
        .ok_or("expected an opening tag")?;
    parse_element(&format!("{head}/>"))
}

fn check_attrs(e: &ParsedElement, allowed: &[&str]) -> Result<(), String> {
    let mut last = None;
    for (k, _) in &e.attrs {
        let pos = allowed
            .iter()
            .position(|a| a == k)
            .ok_or_else(|| format!("unexpected attribute '{k}' on <{}>", e.tag))?;
        if last.is_some_and(|l| pos <= l) {
            return Err(format!("attributes of <{}> out of order", e.tag));
        }
        last = Some(pos);
    }
    Ok(())
}

fn check_pause(e: &ParsedElement) -> Result<(), String> {
    if let Some(p) = e.attr("pause") {
        let ok = p.split_once('.').is_some_and(|(a, b)| {
            !a.is_empty() && a.chars().all(|c| c.is_ascii_digit()) && b.len() == 1 && b.chars().all(|c| c.is_ascii_digit())
        });
        if !ok {
            return Err(format!("pause '{p}' must have one decimal"));
        }
        if e.text.is_empty() {
            return Err(format!("empty <{}> carries a pause", e.tag));
        }
    }
    Ok(())
}

/// Checks a sentence body: place, time, subject, one or more verb/object
/// pairs in the order the target signs them, an optional emotion, then
/// finger-spelled spans.
fn check_sentence(elements: &[ParsedElement], target: TargetLanguage) -> Result<(), String> {
    let tags: Vec<&str> = elements.iter().map(|e| e.tag.as_str()).collect();
    if tags.len() < 5 || tags[..3] != ["place", "time", "subject"] {
        return Err("a sentence opens with <place>, <time>, <subject>".into());
    }
    let (first, second) = match target {
        TargetLanguage::Asl => ("verb", "object"),
        TargetLanguage::Fsl => ("object", "verb"),
    };
    let mut i = 3;
    let mut pairs = 0;
    while i + 1 < tags.len() && tags[i] == first && tags[i + 1] == second {
        i += 2;
        pairs += 1;
    }
    if pairs == 0 {
        return Err(format!("expected <{first}> then <{second}> after <subject>"));
    }
    if tags.get(i) == Some(&"emotion") {
        i += 1;
    }
    while tags.get(i) == Some(&"fingerspell") {
        i += 1;
    }
    if i != tags.len() {
        return Err(format!("unexpected <{}>", tags[i]));
    }
    for e in elements {
        match e.tag.as_str() {
            "place" | "verb" => check_attrs(e, &[])?,
            "time" => {
                check_attrs(e, &["tense", "pause"])?;
                match (e.attr("tense"), e.text.is_empty()) {
                    (Some(t), false) => {
                        t.parse::<Tense>()?;
                    }
                    (None, true) => {}
                    _ => return Err("a non-empty <time> needs a tense, an empty one none".into()),
                }
                check_pause(e)?;
            }
            "subject" | "object" => {
                check_attrs(e, &["pause"])?;
                check_pause(e)?;
            }
            "emotion" => {
                check_attrs(e, &["components"])?;
                let comps = parse_components(e.attr("components").ok_or("<emotion> without components")?)?;
                if comps.is_empty() || comps.len() > 3 {
                    return Err("an emotion has 1 to 3 components".into());
                }
                let sum: f64 = comps.iter().map(|(_, w)| w).sum();
                if (sum - 1.0).abs() > 0.001 + 1e-12 {
                    return Err(format!("emotion weights sum to {sum}"));
                }
                let name = comps.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join("-");
                if e.text != name {
                    return Err(format!("emotion name '{}' does not match its components", e.text));
                }
            }
            "fingerspell" => {
                check_attrs(e, &["original"])?;
                if e.attr("original").is_none() || e.text.is_empty() {
                    return Err("<fingerspell> needs text and an original attribute".into());
                }
            }
            _ => unreachable!("tags were checked above"),
        }
    }
    Ok(())
}

/// Reads a document back, enforcing the grammar [`TasmlDocument::render`]
/// produces.
pub fn parse_tasml(document: &str) -> Result<ParsedDocument, TasmlParseError> {
    let fail = |line: usize, reason: String| TasmlParseError { line, reason };
    if !document.ends_with('\n') {
        return Err(fail(document.lines().count().max(1), "document must end with a newline".into()));
    }
    let lines: Vec<&str> = document.lines().collect();
    let head = lines.first().ok_or_else(|| fail(1, "empty document".into()))?;
    let root = parse_open(head).map_err(|r| fail(1, r))?;
    if root.tag != "tasml"
        || root.attrs.len() != 2
        || root.attr("version") != Some(TASML_VERSION)
        || root.attrs[0].0 != "version"
    {
        return Err(fail(1, format!("expected <tasml version=\"{TASML_VERSION}\" target=\"...\">")));
    }
    let target: TargetLanguage = root
        .attr("target")
        .ok_or_else(|| fail(1, "missing target".into()))?
        .parse()
        .map_err(|r| fail(1, r))?;
    if root.attr("target") != Some(target.as_str()) {
        return Err(fail(1, "target must be ASL or FSL".into()));
    }
    if lines.last() != Some(&"</tasml>") || lines.len() < 2 {
        return Err(fail(lines.len(), "expected closing </tasml>".into()));
    }

    let mut sentences = Vec::new();
    let mut n = 1;
    while n < lines.len() - 1 {
        let line_no = n + 1;
        let line = lines[n];
        let Some(body) = line.strip_prefix("  ").filter(|b| !b.starts_with(' ')) else {
            return Err(fail(line_no, "sentence elements are indented by two spaces".into()));
        };
        let expected_id = sentences.len() + 1;
        if body.ends_with("</sentence>") {
            let e = parse_element(body).map_err(|r| fail(line_no, r))?;
            if e.tag != "sentence"
                || e.attrs.len() != 2
                || e.attr("id") != Some(&expected_id.to_string())
                || e.attrs[0].0 != "id"
                || e.attr("unrecognized") != Some("true")
            {
                return Err(fail(line_no, format!("expected <sentence id=\"{expected_id}\" unrecognized=\"true\">")));
            }
            sentences.push(ParsedSentence {
                id: expected_id,
                speed: None,
                unrecognized: Some(e.text),
                elements: Vec::new(),
            });
            n += 1;
            continue;
        }
        let open = parse_open(body).map_err(|r| fail(line_no, r))?;
        let speed_ok = open
            .attr("speed")
            .and_then(|s| s.parse::<f64>().ok())
            .is_some_and(|s| s > 0.0 && s.is_finite());
        if open.tag != "sentence"
            || open.attrs.len() != 2
            || open.attrs[0].0 != "id"
            || open.attr("id") != Some(&expected_id.to_string())
            || !speed_ok
        {
            return Err(fail(line_no, format!("expected <sentence id=\"{expected_id}\" speed=\"...\">")));
        }
        let mut elements = Vec::new();
        n += 1;
        while n < lines.len() - 1 && lines[n] != "  </sentence>" {
            let Some(body) = lines[n].strip_prefix("    ").filter(|b| !b.starts_with(' ')) else {
                return Err(fail(n + 1, "slot elements are indented by four spaces".into()));
            };
            elements.push(parse_element(body).map_err(|r| fail(n + 1, r))?);
            n += 1;
        }
        if n >= lines.len() - 1 {
            return Err(fail(n + 1, "missing </sentence>".into()));
        }
        check_sentence(&elements, target).map_err(|r| fail(line_no, r))?;
        sentences.push(ParsedSentence {
            id: expected_id,
            speed: open.attr("speed").map(String::from),
            unrecognized: None,
            elements,
        });
        n += 1;
    }
    Ok(ParsedDocument { target, sentences })
}
