//! Proptest generators for small corpora, sentences, pivots and emotion
//! profiles. Words come from a six-letter alphabet so that inputs and
//! templates overlap often.

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::subsequence;

use tasml::corpus::{CorpusStore, Template};
use tasml::emotion::{EmotionLabel, IntensityProfile};
use tasml::pivot::{Action, PivotForm, Span, TargetLanguage, Tense, TimeSlot};

pub fn word() -> impl Strategy<Value = String> {
    "[a-f]{1,5}"
}

pub fn words(min: usize, max: usize) -> impl Strategy<Value = Vec<String>> {
    vec(word(), min..=max)
}

pub fn tense() -> impl Strategy<Value = Tense> {
    prop_oneof![Just(Tense::Past), Just(Tense::Present), Just(Tense::Future)]
}

pub fn language() -> impl Strategy<Value = TargetLanguage> {
    prop_oneof![Just(TargetLanguage::Asl), Just(TargetLanguage::Fsl)]
}

/// Slot contents of one template or pivot.
#[derive(Debug, Clone)]
pub struct Parts {
    pub place: Span,
    pub time: Option<(Tense, Span)>,
    pub subject: Span,
    pub actions: Vec<(Span, Span)>,
}

impl Parts {
    pub fn all_words(&self) -> Vec<String> {
        let mut out = self.place.clone();
        if let Some((_, t)) = &self.time {
            out.extend(t.iter().cloned());
        }
        out.extend(self.subject.iter().cloned());
        for (v, o) in &self.actions {
            out.extend(v.iter().cloned());
            out.extend(o.iter().cloned());
        }
        out
    }

    pub fn pivot(&self) -> PivotForm {
        PivotForm::new(
            self.place.clone(),
            self.time.clone().map(|(tense, words)| TimeSlot { tense, words }),
            self.subject.clone(),
            self.actions
                .iter()
                .map(|(v, o)| Action {
                    verb: v.clone(),
                    object: o.clone(),
                })
                .collect(),
        )
    }

    pub fn template(&self, id: &str, language: TargetLanguage, emotions: Vec<EmotionLabel>) -> Template {
        let join = |s: &Span| s.join(" ");
        let actions: Vec<(String, String)> = self.actions.iter().map(|(v, o)| (join(v), join(o))).collect();
        let refs: Vec<(&str, &str)> = actions.iter().map(|(v, o)| (v.as_str(), o.as_str())).collect();
        let time = self.time.as_ref().map(|(t, w)| (*t, join(w)));
        Template::new(
            id,
            language,
            format!("{}.", self.all_words().join(" ")),
            &join(&self.place),
            time.as_ref().map(|(t, w)| (*t, w.as_str())),
            &join(&self.subject),
            &refs,
            emotions,
        )
        .expect("generated template is valid")
    }
}

pub fn parts() -> impl Strategy<Value = Parts> {
    (
        words(0, 2),
        proptest::option::of((tense(), words(1, 3))),
        words(0, 3),
        vec((words(1, 2), words(0, 3)), 1..=3),
    )
        .prop_map(|(place, time, subject, actions)| Parts {
            place,
            time,
            subject,
            actions,
        })
}

pub fn emotions() -> impl Strategy<Value = Vec<EmotionLabel>> {
    subsequence(EmotionLabel::ALL.to_vec(), 0..=3)
}

pub fn template(id: &'static str) -> impl Strategy<Value = Template> {
    (parts(), language(), emotions()).prop_map(move |(p, lang, emo)| p.template(id, lang, emo))
}

/// One to four templates with distinct sentences, ids `t1`, `t2`, ...
pub fn store() -> impl Strategy<Value = CorpusStore> {
    vec((parts(), language(), emotions()), 1..=4).prop_map(|list| {
        let mut store = CorpusStore::new();
        for (p, lang, emo) in list {
            let id = store.next_id("t");
            let _ = store.add_template(p.template(&id, lang, emo));
        }
        store
    })
}

/// Intensities with frequent exact ties.
pub fn profile() -> impl Strategy<Value = IntensityProfile> {
    let intensity = prop_oneof![(0u8..=4).prop_map(|k| f64::from(k) / 4.0), 0.0..=1.0f64];
    vec((0..EmotionLabel::ALL.len(), intensity), 0..=9).prop_map(|entries| {
        IntensityProfile::new(entries.into_iter().map(|(i, v)| (EmotionLabel::ALL[i], v))).expect("in range")
    })
}
