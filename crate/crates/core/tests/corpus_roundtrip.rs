mod support;

use proptest::prelude::*;
use tasml::corpus::{parse_corpus, serialize_corpus, serialize_template, CorpusError, CORPUS_HEADER};

use support::fixtures::{STORY_CORPUS, RAID_CORPUS};
use support::strategies::store;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn serialize_parse_is_stable(store in store()) {
        let text = serialize_corpus(&store);
        let back = parse_corpus(&text).unwrap();
        prop_assert_eq!(back.templates(), store.templates());
        prop_assert_eq!(serialize_corpus(&back), text);
    }

    #[test]
    fn appended_records_parse(store in store()) {
        let mut text = format!("{CORPUS_HEADER}\n");
        for t in store.templates() {
            text.push('\n');
            text.push_str(&serialize_template(t));
        }
        prop_assert_eq!(parse_corpus(&text).unwrap().len(), store.len());
    }
}

#[test]
fn fixtures_are_canonical() {
    for doc in [STORY_CORPUS, RAID_CORPUS] {
        assert_eq!(serialize_corpus(&parse_corpus(doc).unwrap()), doc);
    }
}

#[test]
fn malformed_record_names_its_line() {
    let broken = RAID_CORPUS.replace("SUBJECT: the warriors", "SUBJECT the warriors");
    match parse_corpus(&broken) {
        Err(CorpusError::Syntax { line, .. }) => assert_eq!(line, 7),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn duplicate_sentence_rejected() {
    let doubled = format!("{RAID_CORPUS}\n{}", RAID_CORPUS[CORPUS_HEADER.len() + 2..].replace("id=raid", "id=raid2"));
    match parse_corpus(&doubled) {
        Err(CorpusError::Syntax { line, reason }) => {
            assert_eq!(line, 12);
            assert!(reason.contains("raid"), "{reason}");
        }
        other => panic!("expected the duplicate to be rejected, got {other:?}"),
    }
}
