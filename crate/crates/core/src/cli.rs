//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data-file error, 3 translator
//! error. `translate` writes nothing but the TASML document to standard
//! output; diagnostics go to standard error.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::corpus::{CorpusStore, Template, CORPUS_HEADER};
use crate::emitter::TargetLanguageProfile;
use crate::emotion::{fuzzy_blend, score_intensities, EmotionLabel, EmotionWheel};
use crate::pipeline::{
    append_templates, load_corpus, load_lexicon, read_file, translator_from_str, ConfigError, ConfigFile, Pipeline,
    PipelineConfig, PipelineError, DEFAULT_TRANSLATOR_TIMEOUT,
};
use crate::pivot::{TargetLanguage, Tense};
use crate::text::normalized_words;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_TRANSLATOR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tasml", version, about = "Turn written text into TASML sign-language markup")]
struct Cli {
    /// Flat key = value file supplying defaults for the flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Translate text from a file or standard input.
    Translate(TranslateArgs),
    /// Inspect or extend a corpus file.
    Corpus {
        #[command(subcommand)]
        action: CorpusCommand,
    },
    /// Print the emotion intensities and blend of a sentence.
    Emotions {
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
        sentence: String,
    },
    /// Validate corpus and lexicon files.
    Check {
        #[arg(long, value_name = "FILE")]
        corpus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
    },
}

fn positive_speed(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

fn pause(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("'{s}' is not a number of seconds >= 0")),
    }
}

#[derive(Debug, Args)]
struct TranslateArgs {
    /// Input text file; standard input when absent.
    input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// asl or fsl.
    #[arg(long)]
    target: Option<TargetLanguage>,
    #[arg(long, value_name = "N")]
    global_threshold: Option<u32>,
    #[arg(long, value_name = "N")]
    lcs_threshold: Option<u32>,
    /// Do not add learned sentences to the corpus.
    #[arg(long)]
    no_learn: bool,
    /// Signs per second.
    #[arg(long, value_parser = positive_speed)]
    speed: Option<f64>,
    /// Write the document here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// `identity` or the URL of a translation endpoint.
    #[arg(long)]
    translator: Option<String>,
    #[arg(long, value_name = "MS")]
    translator_timeout_ms: Option<u64>,
    /// Language hint sent to the translator.
    #[arg(long, value_name = "CODE")]
    source_language: Option<String>,
    #[arg(long, value_name = "SECONDS", value_parser = pause)]
    pause_time: Option<f64>,
    #[arg(long, value_name = "SECONDS", value_parser = pause)]
    pause_subject: Option<f64>,
    #[arg(long, value_name = "SECONDS", value_parser = pause)]
    pause_object: Option<f64>,
    /// Extra abbreviation whose period does not end a sentence; repeatable.
    #[arg(long = "abbreviation", value_name = "WORD")]
    abbreviations: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum CorpusCommand {
    /// One line per template: id, language, sentence.
    List {
        #[arg(long, value_name = "FILE")]
        corpus: Option<PathBuf>,
    },
    /// Print one template record.
    Show {
        #[arg(long, value_name = "FILE")]
        corpus: Option<PathBuf>,
        id: String,
    },
    /// Append a template, creating the file if needed.
    Add(AddArgs),
}

#[derive(Debug, Args)]
struct AddArgs {
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    /// Defaults to the next free `t<n>`.
    #[arg(long)]
    id: Option<String>,
    #[arg(long, default_value = "ASL")]
    lang: TargetLanguage,
    #[arg(long)]
    text: String,
    #[arg(long, default_value = "-")]
    place: String,
    /// `tense | words`, e.g. `past | in 793`.
    #[arg(long)]
    time: Option<String>,
    #[arg(long, default_value = "-")]
    subject: String,
    /// `verb | object`, repeatable; the object may be `-`.
    #[arg(long = "action", required = true)]
    actions: Vec<String>,
    /// Comma-separated labels.
    #[arg(long, value_delimiter = ',')]
    emotions: Vec<EmotionLabel>,
}

enum Failure {
    Usage(String),
    Data(String),
    Translator(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Translator(_) => EXIT_TRANSLATOR,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Translator(m) => m,
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(ConfigError::Missing(_)) => Failure::Usage(e.to_string()),
            PipelineError::Translator(_) => Failure::Translator(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        PipelineError::from(e).into()
    }
}

type Outcome = Result<(), Failure>;

/// Runs the tool and returns its exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(cli, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "tasml: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let file = match &cli.config {
        Some(path) => ConfigFile::parse(&read_file(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Translate(args) => translate(args, &file, stdin, stdout, stderr),
        Command::Corpus { action } => corpus(action, &file, stdout),
        Command::Emotions { lexicon, sentence } => emotions(&path_or(lexicon, &file, "lexicon")?, &sentence, stdout),
        Command::Check { corpus, lexicon } => check(corpus, lexicon, &file, stdout),
    }
}

fn path_or(flag: Option<PathBuf>, file: &ConfigFile, key: &'static str) -> Result<PathBuf, Failure> {
    flag.or_else(|| file.get(key).map(PathBuf::from))
        .ok_or_else(|| Failure::Usage(format!("no {key} given (use --{key} or the config file)")))
}

fn write_out(stdout: &mut dyn Write, text: &str) -> Outcome {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Data(format!("cannot write output: {e}")))
}

/// Flags win over the config file, which wins over built-in defaults.
fn pipeline_config(args: &TranslateArgs, file: &ConfigFile) -> Result<PipelineConfig, Failure> {
    let target = match args.target {
        Some(t) => t,
        None => file.parsed("target")?.unwrap_or(TargetLanguage::Asl),
    };
    let mut cfg = PipelineConfig::new(
        path_or(args.corpus.clone(), file, "corpus")?,
        path_or(args.lexicon.clone(), file, "lexicon")?,
        target,
    );
    if let Some(n) = args.global_threshold.or(file.parsed("global-threshold")?) {
        cfg.recognition.global_threshold = n;
    }
    if let Some(n) = args.lcs_threshold.or(file.parsed("lcs-threshold")?) {
        cfg.recognition.lcs_threshold = n;
    }
    cfg.recognition.learning_enabled = !args.no_learn && file.parsed("learn")?.unwrap_or(true);

    let speed = match args.speed {
        Some(s) => s,
        None => file.parsed("speed")?.unwrap_or(cfg.speed),
    };
    if !(speed.is_finite() && speed > 0.0) {
        return Err(ConfigError::BadValue {
            key: "speed".into(),
            value: speed.to_string(),
            reason: "must be positive".into(),
        }
        .into());
    }
    cfg.speed = speed;

    let defaults = TargetLanguageProfile::for_language(target);
    let pick = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, ConfigError> {
        Ok(flag.or(file.parsed(key)?).unwrap_or(default))
    };
    cfg.profile = TargetLanguageProfile::new(
        target,
        pick(args.pause_time, "pause-time", defaults.pause_after_time())?,
        pick(args.pause_subject, "pause-subject", defaults.pause_after_subject())?,
        pick(args.pause_object, "pause-object", defaults.pause_after_object())?,
    )
    .map_err(|e| Failure::Data(e.to_string()))?;

    let timeout = args
        .translator_timeout_ms
        .or(file.parsed("translator-timeout-ms")?)
        .map(Duration::from_millis)
        .unwrap_or(DEFAULT_TRANSLATOR_TIMEOUT);
    if let Some(t) = &args.translator {
        cfg.translator = translator_from_str(t, timeout).map_err(|e| Failure::Usage(e.to_string()))?;
    } else if let Some(t) = file.get("translator") {
        cfg.translator = translator_from_str(t, timeout)?;
    }
    cfg.extra_abbreviations = file
        .get("abbreviations")
        .map(|list| list.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect())
        .unwrap_or_default();
    cfg.extra_abbreviations.extend(args.abbreviations.iter().cloned());
    if let Some(lang) = args.source_language.clone().or(file.get("source-language").map(String::from)) {
        cfg.source_language = lang;
    }
    Ok(cfg)
}

fn translate(
    args: TranslateArgs,
    file: &ConfigFile,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let cfg = pipeline_config(&args, file)?;
    let mut pipeline = Pipeline::load(cfg)?;
    let text = match &args.input {
        Some(path) => read_file(path)?,
        None => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Data(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    let report = pipeline.translate_text(&text).map_err(PipelineError::from)?;
    let document = report.document.render();
    match &args.out {
        Some(path) => fs::write(path, &document).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?,
        None => write_out(stdout, &document)?,
    }
    pipeline.save_learned()?;
    let _ = writeln!(
        stderr,
        "{} sentences: {} recognized, {} unrecognized, {} learned",
        report.sentences.len(),
        report.recognized_count(),
        report.unrecognized_count(),
        report.learned_count
    );
    Ok(())
}

fn corpus(action: CorpusCommand, file: &ConfigFile, stdout: &mut dyn Write) -> Outcome {
    match action {
        CorpusCommand::List { corpus } => {
            let store = load_corpus(&path_or(corpus, file, "corpus")?)?;
            let mut out = String::new();
            for t in store.templates() {
                out.push_str(&format!("{}\t{}\t{}\n", t.id(), t.language(), t.source_text()));
            }
            write_out(stdout, &out)
        }
        CorpusCommand::Show { corpus, id } => {
            let store = load_corpus(&path_or(corpus, file, "corpus")?)?;
            let t = store
                .get(&id)
                .ok_or_else(|| Failure::Usage(format!("no template with id '{id}'")))?;
            write_out(stdout, &crate::corpus::serialize_template(t))
        }
        CorpusCommand::Add(args) => {
            let path = path_or(args.corpus.clone(), file, "corpus")?;
            add_template(&path, args, stdout)
        }
    }
}

fn split_pair(value: &str, what: &str) -> Result<(String, String), Failure> {
    value
        .split_once('|')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| Failure::Usage(format!("{what} '{value}' must look like 'a | b'")))
}

fn add_template(path: &Path, args: AddArgs, stdout: &mut dyn Write) -> Outcome {
    let mut store = if path.exists() {
        load_corpus(path)?
    } else {
        fs::write(path, format!("{CORPUS_HEADER}\n")).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        CorpusStore::new()
    };
    let time = match args.time.as_deref().map(str::trim) {
        None | Some("-") => None,
        Some(t) => {
            let (tense, words) = split_pair(t, "time")?;
            Some((tense.parse::<Tense>().map_err(Failure::Usage)?, words))
        }
    };
    let actions = args
        .actions
        .iter()
        .map(|a| match a.split_once('|') {
            Some(_) => split_pair(a, "action"),
            None => Ok((a.trim().to_string(), "-".to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let action_refs: Vec<(&str, &str)> = actions.iter().map(|(v, o)| (v.as_str(), o.as_str())).collect();
    let id = args.id.unwrap_or_else(|| store.next_id("t"));
    let template = Template::new(
        id.clone(),
        args.lang,
        args.text,
        &args.place,
        time.as_ref().map(|(t, w)| (*t, w.as_str())),
        &args.subject,
        &action_refs,
        args.emotions,
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    store
        .add_template(template)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let added = store.get(&id).expect("just added");
    append_templates(path, &[added])?;
    write_out(stdout, &format!("{id}\n"))
}

fn emotions(lexicon: &Path, sentence: &str, stdout: &mut dyn Write) -> Outcome {
    let lexicon = load_lexicon(lexicon)?;
    let profile = score_intensities(&normalized_words(sentence), &lexicon);
    let mut out = String::new();
    for (label, v) in profile.iter() {
        out.push_str(&format!("{label}\t{v:.3}\n"));
    }
    match fuzzy_blend(&profile, &EmotionWheel::default()) {
        Some(blend) => {
            let parts: Vec<String> = blend.components().iter().map(|(l, w)| format!("{l}:{w:.3}")).collect();
            out.push_str(&format!("blend\t{}\t{}\n", blend.compound_name(), parts.join(",")));
        }
        None => out.push_str("blend\tnone\n"),
    }
    write_out(stdout, &out)
}

fn check(corpus: Option<PathBuf>, lexicon: Option<PathBuf>, file: &ConfigFile, stdout: &mut dyn Write) -> Outcome {
    let corpus = corpus.or_else(|| file.get("corpus").map(PathBuf::from));
    let lexicon = lexicon.or_else(|| file.get("lexicon").map(PathBuf::from));
    if corpus.is_none() && lexicon.is_none() {
        return Err(Failure::Usage("nothing to check (use --corpus and/or --lexicon)".into()));
    }
    let mut out = String::new();
    if let Some(path) = corpus {
        let store = load_corpus(&path)?;
        out.push_str(&format!("{}: {} templates\n", path.display(), store.len()));
    }
    if let Some(path) = lexicon {
        let lex = load_lexicon(&path)?;
        out.push_str(&format!("{}: {} words\n", path.display(), lex.len()));
    }
    write_out(stdout, &out)
}
