//! Sentence splitting and word normalization.

use thiserror::Error;

/// Words that end in a period without ending the sentence.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &["mr", "mrs", "dr", "st", "vs", "etc", "e.g", "i.e"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("sentence is empty after normalization")]
    EmptyAfterNormalization,
}

/// Splits running text into sentences.
#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    abbreviations: Vec<String>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        Self::new(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

impl SentenceSplitter {
    pub fn new<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            abbreviations: abbreviations
                .into_iter()
                .map(|a| a.as_ref().trim_end_matches('.').to_lowercase())
                .collect(),
        }
    }

    pub fn with_abbreviation(mut self, abbreviation: &str) -> Self {
        self.abbreviations
            .push(abbreviation.trim_end_matches('.').to_lowercase());
        self
    }

    /// Splits on `.`, `!` or `?` followed by whitespace or the end of text.
    ///
    /// A period directly after a single letter or a known abbreviation does
    /// not end a sentence. Closing quotes and brackets right after the
    /// terminator stay with the sentence.
    pub fn split(&self, text: &str) -> Vec<String> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut sentences = Vec::new();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            let (_, c) = chars[i];
            if !is_terminator(c) {
                i += 1;
                continue;
            }
            let mut end = i + 1;
            while end < chars.len() && is_terminator(chars[end].1) {
                end += 1;
            }
            while end < chars.len() && is_closer(chars[end].1) {
                end += 1;
            }
            let at_boundary = end == chars.len() || chars[end].1.is_whitespace();
            let only_period = chars[i..end]
                .iter()
                .take_while(|(_, ch)| is_terminator(*ch))
                .all(|(_, ch)| *ch == '.');
            let guarded = only_period && self.is_abbreviation(&text[..chars[i].0]);
            if at_boundary && !guarded {
                let stop = chars.get(end).map_or(text.len(), |(pos, _)| *pos);
                push_trimmed(&mut sentences, &text[start..stop]);
                start = stop;
            }
            i = end;
        }
        push_trimmed(&mut sentences, &text[start..]);
        sentences
    }

    fn is_abbreviation(&self, before: &str) -> bool {
        let word = before
            .rsplit(char::is_whitespace)
            .next()
            .unwrap_or("")
            .trim_start_matches(|c: char| !c.is_alphanumeric())
            .to_lowercase();
        if word.is_empty() {
            return false;
        }
        let mut letters = word.chars();
        let single_letter = matches!((letters.next(), letters.next()), (Some(c), None) if c.is_alphabetic());
        single_letter || self.abbreviations.contains(&word)
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’' | '»')
}

fn push_trimmed(out: &mut Vec<String>, piece: &str) {
    let piece = piece.trim();
    if !piece.is_empty() {
        out.push(piece.to_string());
    }
}

/// Splits with the default abbreviation list.
pub fn split_sentences(text: &str) -> Vec<String> {
    SentenceSplitter::default().split(text)
}

/// One surviving word of a normalized sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Lowercased form with punctuation stripped.
    pub text: String,
    /// The word as written, minus surrounding punctuation.
    pub original: String,
    /// Written with an initial capital somewhere other than the first word.
    pub capitalized: bool,
    /// Punctuation separates this word from the next one.
    pub punct_after: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedSentence {
    pub tokens: Vec<Token>,
    /// Tokens joined by single spaces.
    pub normalized: String,
}

impl NormalizedSentence {
    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn capital_flags(&self) -> Vec<bool> {
        self.tokens.iter().map(|t| t.capitalized).collect()
    }

    pub fn chars(&self) -> Vec<char> {
        self.normalized.chars().collect()
    }
}

/// Lowercases, strips punctuation (keeping hyphens and apostrophes between
/// letters or digits) and collapses whitespace.
pub fn normalize_sentence(sentence: &str) -> Result<NormalizedSentence, TextError> {
    let mut tokens: Vec<Token> = Vec::new();
    for raw in sentence.split_whitespace() {
        let Some((original, trailing_punct)) = clean_word(raw) else {
            if let Some(last) = tokens.last_mut() {
                last.punct_after = true;
            }
            continue;
        };
        let capitalized = !tokens.is_empty()
            && original
                .chars()
                .find(|c| c.is_alphabetic())
                .is_some_and(char::is_uppercase);
        tokens.push(Token {
            text: original.to_lowercase(),
            original,
            capitalized,
            punct_after: trailing_punct,
        });
    }
    if tokens.is_empty() {
        return Err(TextError::EmptyAfterNormalization);
    }
    let normalized = tokens
        .iter()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    Ok(NormalizedSentence { tokens, normalized })
}

/// Normalized form of a whole sentence, or `None` if nothing survives.
pub fn normalized_text(sentence: &str) -> Option<String> {
    normalize_sentence(sentence).ok().map(|n| n.normalized)
}

/// Normalized words of a phrase; empty when nothing survives.
pub fn normalized_words(phrase: &str) -> Vec<String> {
    normalize_sentence(phrase)
        .map(|n| n.tokens.into_iter().map(|t| t.text).collect())
        .unwrap_or_default()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '’')
}

/// Keeps alphanumerics plus joiners that sit between two alphanumerics.
/// Returns the cleaned word and whether punctuation followed its last
/// alphanumeric character.
fn clean_word(raw: &str) -> Option<(String, bool)> {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            out.push(c);
        } else if is_joiner(c)
            && i > 0
            && chars[i - 1].is_alphanumeric()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            out.push(if c == '’' { '\'' } else { c });
        }
    }
    if out.is_empty() {
        return None;
    }
    let last_alnum = chars.iter().rposition(|c| c.is_alphanumeric()).unwrap_or(0);
    let trailing_punct = chars[last_alnum + 1..]
        .iter()
        .any(|c| !c.is_alphanumeric());
    Some((out, trailing_punct))
}
