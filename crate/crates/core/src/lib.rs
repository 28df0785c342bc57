//! Text to TASML preprocessing for sign-language avatars.
//!
//! English (or translated) text is split into sentences and each one is
//! matched against a corpus of annotated example sentences. A match yields a
//! pivot form (place, time, subject, then verb/object pairs) that is ordered
//! for the target sign language, timed, tagged with a blended emotion and
//! proper nouns to finger-spell, and rendered as a TASML document.

pub mod alignment;
pub mod text;
pub mod pivot;
pub mod emotion;
pub mod corpus;
pub mod recognizer;
pub mod emitter;
pub mod pipeline;
pub mod cli;
