//! Shared inputs: the opening sentence of the Viking story and a small
//! raid corpus.

use tasml::pivot::{Action, PivotForm, Span, TimeSlot, Tense};

pub const STORY_OPENING: &str = "The Viking period in history stretched for about three to four hundred years from 790 after Jesus-Christ to 1100 after Jesus-Christ.";

pub const STORY_CORPUS: &str = "#TASML-CORPUS v1

#TEMPLATE id=s1 lang=ASL
TEXT: The Viking period in history stretched for about three to four hundred years from 790 after Jesus-Christ to 1100 after Jesus-Christ.
PLACE: -
TIME: past | for about three to four hundred years from 790 to 1100 after Jesus-Christ
SUBJECT: the Viking period in history
VERB: stretched
OBJECT: -
EMOTION: surprise,fear
";

/// Equal surprise and fear for the opening sentence.
pub const TIE_LEXICON: &str = "#TASML-EMOLEX v1\nstretched\tsurprise\t0.6\nperiod\tfear\t0.6\n";

pub const STORY_EXPECTED: &str = r#"<tasml version="1.0" target="ASL">
  <sentence id="1" speed="1">
    <place/>
    <time tense="past" pause="1.0">for about three to four hundred years from 790 to 1100 after jesus-christ</time>
    <subject pause="0.5">the viking period in history</subject>
    <verb>stretched</verb>
    <object/>
    <emotion components="surprise:0.500,fear:0.500">surprise-fear</emotion>
    <fingerspell original="Jesus-Christ">jesus-christ</fingerspell>
  </sentence>
</tasml>
"#;

pub const RAID_CORPUS: &str = "#TASML-CORPUS v1

#TEMPLATE id=raid lang=ASL
TEXT: The warriors raided the island.
PLACE: -
TIME: -
SUBJECT: the warriors
VERB: raided
OBJECT: the island
EMOTION: -
";

pub const RAID_LEXICON: &str = "#TASML-EMOLEX v1\nraided\tanger\t0.8\nattacked\tanger\t0.9\n";

pub const NOVEL_SENTENCE: &str = "The warriors attacked the island.";

pub fn span(s: &str) -> Span {
    s.split_whitespace().map(String::from).collect()
}

/// The French second sentence: three object/verb groups.
pub fn three_pair_pivot() -> PivotForm {
    PivotForm::new(
        vec![],
        Some(TimeSlot {
            tense: Tense::Past,
            words: span("au cours de cette période"),
        }),
        span("les guerriers viking"),
        vec![
            Action {
                verb: span("envahir"),
                object: span("les terres avoisinantes"),
            },
            Action {
                verb: span("explorer"),
                object: span("des mers inconnues"),
            },
            Action {
                verb: span("chercher et trouver"),
                object: span("des routes commerciales"),
            },
        ],
    )
}

/// Writes `contents` to `name` inside `dir` and returns the path.
pub fn write(dir: &std::path::Path, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}
