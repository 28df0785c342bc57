mod support;

use proptest::prelude::*;
use tasml::emitter::{
    detect_fingerspell, parse_tasml, RenderedSentence, SentenceEntry, TargetLanguageProfile, TasmlDocument,
};
use tasml::emotion::{fuzzy_blend, EmotionWheel};
use tasml::pivot::TargetLanguage;
use tasml::text::normalize_sentence;

use support::fixtures::{span, three_pair_pivot};
use support::strategies::{language, parts, profile, Parts};

fn document(items: &[(Parts, Option<tasml::emotion::EmotionBlend>, f64)], target: TargetLanguage) -> TasmlDocument {
    let profile = TargetLanguageProfile::for_language(target);
    let mut doc = TasmlDocument::new(target);
    for (p, emotion, speed) in items {
        let mut pivot = p.pivot();
        pivot.emotion = emotion.clone();
        pivot.speed = *speed;
        doc.sentences.push(SentenceEntry::Recognized(RenderedSentence::from_pivot(&pivot, &profile)));
    }
    doc
}

fn speed() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(0.5), Just(2.0), Just(1.5), 0.25..4.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn documents_reparse_in_target_order(
        items in proptest::collection::vec((parts(), profile(), speed()), 0..4),
        target in language(),
    ) {
        let wheel = EmotionWheel::default();
        let items: Vec<_> = items.into_iter().map(|(p, prof, s)| {
            let e = fuzzy_blend(&prof, &wheel);
            (p, e, s)
        }).collect();
        let doc = document(&items, target);
        let text = doc.render();
        prop_assert_eq!(&doc.render(), &text);
        let parsed = parse_tasml(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(parsed.target, target);
        prop_assert_eq!(parsed.sentences.len(), items.len());

        for ((p, emotion, _), s) in items.iter().zip(&parsed.sentences) {
            let tags = s.tags();
            prop_assert_eq!(&tags[..3], &["place", "time", "subject"][..]);
            let (first, second) = match target {
                TargetLanguage::Asl => ("verb", "object"),
                TargetLanguage::Fsl => ("object", "verb"),
            };
            for k in 0..p.actions.len() {
                prop_assert_eq!(tags[3 + 2 * k], first);
                prop_assert_eq!(tags[4 + 2 * k], second);
            }

            let mut inside: Vec<String> = s.elements.iter()
                .filter(|e| ["place", "time", "subject", "verb", "object"].contains(&e.tag.as_str()))
                .flat_map(|e| e.text.split_whitespace().map(String::from).collect::<Vec<_>>())
                .collect();
            let mut expected = p.all_words();
            inside.sort();
            expected.sort();
            prop_assert_eq!(inside, expected);

            match (emotion, s.emotion_weights()) {
                (None, None) => {}
                (Some(_), Some(weights)) => {
                    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
                    prop_assert!((sum - 1.0).abs() <= 0.001);
                }
                other => prop_assert!(false, "emotion mismatch {:?}", other),
            }
        }
    }
}

#[test]
fn fsl_three_pairs_object_first() {
    let profile = TargetLanguageProfile::for_language(TargetLanguage::Fsl);
    let mut doc = TasmlDocument::new(TargetLanguage::Fsl);
    doc.sentences.push(SentenceEntry::Recognized(RenderedSentence::from_pivot(&three_pair_pivot(), &profile)));
    let parsed = parse_tasml(&doc.render()).unwrap();
    let s = &parsed.sentences[0];
    assert_eq!(
        s.tags(),
        vec!["place", "time", "subject", "object", "verb", "object", "verb", "object", "verb"]
    );
    let texts: Vec<&str> = s.elements[3..].iter().map(|e| e.text.as_str()).collect();
    assert_eq!(
        texts,
        vec![
            "les terres avoisinantes",
            "envahir",
            "des mers inconnues",
            "explorer",
            "des routes commerciales",
            "chercher et trouver"
        ]
    );
    assert!(s.elements[3..].iter().filter(|e| e.tag == "object").all(|e| e.attr("pause") == Some("1.0")));
}

#[test]
fn harald_hardrada_is_one_span() {
    let n = normalize_sentence("The last recorded battle took place in 1066 when the Norwegian king, Harald Hardrada, invaded England").unwrap();
    let words: Vec<String> = n.words().iter().map(|w| w.to_string()).collect();
    let mut pivot = three_pair_pivot();
    pivot.subject = words;
    pivot.actions.truncate(1);
    pivot.actions[0].verb = span("invaded");
    let pivot = detect_fingerspell(pivot, &n.tokens);
    let names: Vec<&str> = pivot.fingerspell.iter().map(|s| s.text.as_str()).collect();
    assert_eq!(names, vec!["harald hardrada", "england"]);
}
