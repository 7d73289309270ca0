//! Command-line front end: `prepare`, `stopgen`, `classify`, `evaluate` and
//! `stats`, sharing an optional TOML configuration file.
//!
//! Exit codes: 0 on success (including `--help`/`--version`), 1 on usage
//! errors, 2 on data errors. Diagnostics go to the error stream; data goes
//! to files or the output stream.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    ClassifierKind, ClassifyError, FeatureMode, TrainParams, TrainedModel, DEFAULT_SMOOTHING,
};
use crate::corpus_prep::{
    corpus_stats, ingest, normalize_gloss, run_pipeline, write_corpus, AbbreviationMap, Document, FilterReport,
    Label, LineDiagnostic, PipelineConfig, PostDiagnostics, PrepError, Source, TranslitRules,
};
use crate::evaluate::{
    accuracy, results_csv, results_table, run_matrix, Corpus, EvalError, MatrixOptions, SplitSpec, StopwordLists,
    DEFAULT_TRAIN_FRACTION,
};
use crate::resource::{self, ResourceError};
use crate::stopgen::{
    build_frequency_table, combine_lists, english_stoplist, generate_corpus_based, generate_egyptian_general,
    load_candidates, remove_stopwords, ListKind, MorphRules, StopgenError, StopwordList, DEFAULT_K,
};
use crate::textkit::EmoticonLexicon;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: no such file or directory", .0.display())]
    MissingPath(PathBuf),
    #[error("invalid config file {}: {message}", .path.display())]
    Config { path: PathBuf, message: String },
    #[error("cannot write {}: {source}", .path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error(transparent)]
    Prep(#[from] PrepError),
    #[error(transparent)]
    Stopgen(#[from] StopgenError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "arabic-osn", version, about = "Arabic OSN corpus preparation, stopword lists and sentiment experiments")]
pub struct Cli {
    /// TOML file with default settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean, filter and annotate an exported corpus.
    Prepare(PrepareArgs),
    /// Generate a stopword list from prepared corpora.
    Stopgen(StopgenArgs),
    /// Train one classifier and label a corpus.
    Classify(ClassifyArgs),
    /// Run the classifier × feature × stopword-list experiment matrix.
    Evaluate(EvaluateArgs),
    /// Label counts per source.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Corpus file, one JSON record per line.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Reject records from any other source.
    #[arg(long)]
    pub source: Option<Source>,
    /// Words marking a post as on-topic; without it nothing is dropped as unrelated.
    #[arg(long, value_name = "FILE")]
    pub topic_words: Option<PathBuf>,
    /// Post ids kept by the topic filter regardless of their words.
    #[arg(long, value_name = "FILE")]
    pub topic_exempt: Option<PathBuf>,
    /// Phrases (one per line) marking a post as advertising.
    #[arg(long, value_name = "FILE")]
    pub spam_phrases: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub emoticons: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub abbrev: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub translit_rules: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub translit_overrides: Option<PathBuf>,
    /// English → Arabic dictionary.
    #[arg(long, value_name = "FILE")]
    pub gloss: Option<PathBuf>,
    /// Prepared corpus output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// JSON report: stage counts, dropped ids and per-post diagnostics.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StopgenMode {
    /// Most frequent corpus words.
    CorpusBased,
    /// Validated Egyptian dialect list.
    Egyptian,
    /// Egyptian list merged with the MSA lists.
    Combined,
}

#[derive(Debug, Args)]
pub struct StopgenArgs {
    /// Prepared corpora.
    #[arg(long, num_args = 1.., value_name = "FILE")]
    pub corpora: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<StopgenMode>,
    /// Number of most frequent words considered.
    #[arg(long)]
    pub k: Option<usize>,
    /// Candidate annotation TSV (required for egyptian and combined).
    #[arg(long, value_name = "FILE")]
    pub candidates: Option<PathBuf>,
    /// MSA stopword lists (default: bundled).
    #[arg(long, num_args = 1.., value_name = "FILE")]
    pub msa_lists: Vec<PathBuf>,
    /// English stopword list (default: bundled).
    #[arg(long, value_name = "FILE")]
    pub english_stoplist: Option<PathBuf>,
    /// Morphology rules TOML (default: bundled).
    #[arg(long, value_name = "FILE")]
    pub rules: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// TSV of words left out of the list and why.
    #[arg(long, value_name = "FILE")]
    pub review: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Prepared training corpus.
    #[arg(long, value_name = "FILE")]
    pub train: Option<PathBuf>,
    /// Prepared corpus to label.
    #[arg(long, value_name = "FILE")]
    pub predict: Option<PathBuf>,
    /// `nb` or `dt`.
    #[arg(long, value_parser = parse_classifier)]
    pub classifier: Option<ClassifierKind>,
    /// `unigram` or `bigram`.
    #[arg(long, value_parser = parse_features)]
    pub features: Option<FeatureMode>,
    /// Stopword list removed before feature extraction.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    #[arg(long)]
    pub smoothing: Option<f64>,
    #[arg(long)]
    pub entropy_cutoff: Option<f64>,
    #[arg(long)]
    pub depth_cutoff: Option<usize>,
    #[arg(long)]
    pub support_cutoff: Option<usize>,
    /// Text dump of the trained model.
    #[arg(long, value_name = "FILE")]
    pub model_out: Option<PathBuf>,
    /// Predictions TSV (id, predicted, gold); standard output if absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Prepared corpora; each file stem names a corpus.
    #[arg(long, num_args = 1.., value_name = "FILE")]
    pub corpora: Vec<PathBuf>,
    /// Directory with corpus_based.txt, egyptian_general.txt and optionally msa.txt, all_lists.txt.
    #[arg(long, value_name = "DIR")]
    pub lists: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Results CSV; standard output if absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Markdown results table.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
    /// Run cells one at a time for undisturbed timings.
    #[arg(long)]
    pub serial_timing: bool,
    /// Split each label separately.
    #[arg(long)]
    pub stratify: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, num_args = 1.., value_name = "FILE")]
    pub corpora: Vec<PathBuf>,
    /// CSV output; standard output if absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn parse_classifier(s: &str) -> std::result::Result<ClassifierKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "nb" => Ok(ClassifierKind::NaiveBayes),
        "dt" => Ok(ClassifierKind::DecisionTree),
        _ => Err(format!("expected nb or dt, got {s:?}")),
    }
}

fn parse_features(s: &str) -> std::result::Result<FeatureMode, String> {
    FeatureMode::ALL
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| format!("expected unigram or bigram, got {s:?}"))
}

/// Settings that may come from the `--config` file. Relative paths are
/// resolved against the file's directory; relative output paths are then
/// placed under `out_dir` when it is set.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpora: Option<Vec<PathBuf>>,
    pub emoticons: Option<PathBuf>,
    pub abbrev: Option<PathBuf>,
    pub translit_rules: Option<PathBuf>,
    pub translit_overrides: Option<PathBuf>,
    pub gloss: Option<PathBuf>,
    pub topic_words: Option<PathBuf>,
    pub topic_exempt: Option<PathBuf>,
    pub spam_phrases: Option<PathBuf>,
    pub msa_lists: Option<Vec<PathBuf>>,
    pub english_stoplist: Option<PathBuf>,
    pub candidates: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub lists: Option<PathBuf>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub train_fraction: Option<f64>,
    pub smoothing: Option<f64>,
    pub entropy_cutoff: Option<f64>,
    pub depth_cutoff: Option<usize>,
    pub support_cutoff: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str, base: &Path) -> std::result::Result<Self, toml::de::Error> {
        let mut cfg: RunConfig = toml::from_str(text)?;
        cfg.rebase(base);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = resource::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        RunConfig::parse(&text, base).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    fn rebase(&mut self, base: &Path) {
        let join = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.emoticons,
            &mut self.abbrev,
            &mut self.translit_rules,
            &mut self.translit_overrides,
            &mut self.gloss,
            &mut self.topic_words,
            &mut self.topic_exempt,
            &mut self.spam_phrases,
            &mut self.english_stoplist,
            &mut self.candidates,
            &mut self.rules,
            &mut self.lists,
            &mut self.out_dir,
        ] {
            join(p);
        }
        for list in [&mut self.corpora, &mut self.msa_lists].into_iter().flatten() {
            for p in list.iter_mut() {
                *p = base.join(&*p);
            }
        }
    }

    /// Where an output file goes.
    fn output(&self, path: PathBuf) -> PathBuf {
        match &self.out_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path,
        }
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing required setting --{flag} (flag or config file)")))
}

fn flags_or_file(flags: Vec<PathBuf>, file: Option<Vec<PathBuf>>) -> Vec<PathBuf> {
    if flags.is_empty() {
        file.unwrap_or_default()
    } else {
        flags
    }
}

/// Fails before any work starts if an input is missing or an output has
/// nowhere to go.
fn check_paths<'a>(
    inputs: impl IntoIterator<Item = &'a PathBuf>,
    outputs: impl IntoIterator<Item = &'a PathBuf>,
) -> Result<()> {
    for p in inputs {
        if !p.exists() {
            return Err(CliError::MissingPath(p.clone()));
        }
    }
    for p in outputs {
        let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return Err(CliError::MissingPath(dir.to_path_buf()));
            }
        }
    }
    Ok(())
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => stdout.write_all(contents.as_bytes()).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn report_ingest(path: &Path, diagnostics: &[LineDiagnostic], stderr: &mut dyn Write) {
    for d in diagnostics {
        let _ = writeln!(stderr, "{}: skipped {d}", path.display());
    }
}

/// Prepared corpus records as documents.
fn load_documents(path: &Path, emoticons: &EmoticonLexicon, stderr: &mut dyn Write) -> Result<Vec<Document>> {
    let ingested = ingest(path, None)?;
    report_ingest(path, &ingested.diagnostics, stderr);
    Ok(ingested
        .posts
        .iter()
        .map(|p| Document::from_post(p, emoticons))
        .collect())
}

fn corpus_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Parses `args` and runs the chosen subcommand, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let file = match &cli.config {
        Some(path) => {
            check_paths([path], [])?;
            RunConfig::load(path)?
        }
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Prepare(args) => prepare(args, file, stdout, stderr),
        Command::Stopgen(args) => stopgen(args, file, stderr),
        Command::Classify(args) => classify(args, file, stdout, stderr),
        Command::Evaluate(args) => evaluate(args, file, stdout, stderr),
        Command::Stats(args) => stats(args, file, stdout, stderr),
    }
}

#[derive(Debug, Serialize)]
struct PrepareReport<'a> {
    skipped_lines: &'a [LineDiagnostic],
    filter: &'a FilterReport,
    posts: &'a [PostDiagnostics],
}

fn prepare(args: PrepareArgs, file: RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let input = required(args.input, "in")?;
    let out = file.output(required(args.out, "out")?);
    let report = args.report.map(|p| file.output(p));
    let emoticons = args.emoticons.or(file.emoticons);
    let abbrev = args.abbrev.or(file.abbrev);
    let rules = args.translit_rules.or(file.translit_rules);
    let overrides = args.translit_overrides.or(file.translit_overrides);
    let gloss = args.gloss.or(file.gloss);
    let topic = args.topic_words.or(file.topic_words);
    let exempt = args.topic_exempt.or(file.topic_exempt);
    let spam = args.spam_phrases.or(file.spam_phrases);
    check_paths(
        std::iter::once(&input)
            .chain(&emoticons)
            .chain(&abbrev)
            .chain(&rules)
            .chain(&overrides)
            .chain(&gloss)
            .chain(&topic)
            .chain(&exempt)
            .chain(&spam),
        std::iter::once(&out).chain(&report),
    )?;

    let mut cfg = PipelineConfig::default();
    if let Some(p) = &emoticons {
        cfg.emoticons = EmoticonLexicon::load(p)?;
    }
    if let Some(p) = &abbrev {
        cfg.abbreviations = AbbreviationMap::load(p)?;
    }
    if let Some(p) = &rules {
        cfg.translit_rules = TranslitRules::load(p)?;
    }
    if let Some(p) = &overrides {
        cfg.translit_overrides = resource::load_tsv_map(p)?
            .into_iter()
            .map(|(k, v)| (k.to_lowercase(), v))
            .collect();
    }
    if let Some(p) = &gloss {
        cfg.gloss = normalize_gloss(resource::load_tsv_map(p)?);
    }
    if let Some(p) = &topic {
        cfg.set_topic_words(resource::load_word_list(p)?);
    }
    if let Some(p) = &exempt {
        cfg.topic_exempt_ids = resource::load_word_list(p)?.into_iter().collect();
    }
    if let Some(p) = &spam {
        let text = resource::read_to_string(p)?;
        cfg.spam_phrases = resource::content_lines(&text).map(|(_, l)| l.to_string()).collect();
    }

    let ingested = ingest(&input, args.source)?;
    report_ingest(&input, &ingested.diagnostics, stderr);
    cfg.lexicon = cfg.lexicon_from_posts(&ingested.posts);
    let output = run_pipeline(&ingested.posts, &cfg);

    write_atomic(&out, &write_corpus(&output.documents.iter().map(Document::to_post).collect::<Vec<_>>()))?;
    let rendered = PrepareReport {
        skipped_lines: &ingested.diagnostics,
        filter: &output.report,
        posts: &output.diagnostics,
    };
    let mut json = serde_json::to_string_pretty(&rendered).expect("report serializes");
    json.push('\n');
    match &report {
        Some(p) => write_atomic(p, &json)?,
        None => emit(None, &output.report.to_csv(), stdout)?,
    }
    let _ = writeln!(
        stderr,
        "prepare: {} posts -> {} documents",
        output.report.initial_count,
        output.report.final_count()
    );
    Ok(())
}

fn stopgen(args: StopgenArgs, file: RunConfig, stderr: &mut dyn Write) -> Result<()> {
    let corpora = flags_or_file(args.corpora, file.corpora.clone());
    if corpora.is_empty() {
        return Err(CliError::Usage("missing required setting --corpora (flag or config file)".into()));
    }
    let mode = required(args.mode, "mode")?;
    let k = args.k.or(file.k).unwrap_or(DEFAULT_K);
    let out = file.output(required(args.out, "out")?);
    let review = args.review.map(|p| file.output(p));
    let candidates = args.candidates.or(file.candidates);
    let msa_lists = flags_or_file(args.msa_lists, file.msa_lists);
    let english = args.english_stoplist.or(file.english_stoplist);
    let rules = args.rules.or(file.rules);
    if mode != StopgenMode::CorpusBased && candidates.is_none() {
        return Err(CliError::Usage("--candidates is required for the egyptian and combined modes".into()));
    }
    check_paths(
        corpora.iter().chain(&candidates).chain(&msa_lists).chain(&english).chain(&rules),
        std::iter::once(&out).chain(&review),
    )?;

    let emoticons = EmoticonLexicon::bundled();
    let docs = corpora
        .iter()
        .map(|p| load_documents(p, &emoticons, stderr))
        .collect::<Result<Vec<_>>>()?;
    let table = build_frequency_table(docs.iter().map(Vec::as_slice));
    let rules = match &rules {
        Some(p) => MorphRules::load(p)?,
        None => MorphRules::bundled(),
    };

    let (list, review_rows) = if mode == StopgenMode::CorpusBased {
        (generate_corpus_based(&table, &rules, k)?, Vec::new())
    } else {
        let candidates = load_candidates(candidates.as_deref().expect("checked above"))?;
        let msa = if msa_lists.is_empty() {
            StopwordList::bundled_msa()
        } else {
            let mut words = BTreeSet::new();
            for p in &msa_lists {
                words.extend(StopwordList::load(p, ListKind::MsaGeneral)?.words);
            }
            StopwordList::new("msa", ListKind::MsaGeneral, words)
        };
        let english = match &english {
            Some(p) => resource::load_word_list(p)?.into_iter().collect(),
            None => english_stoplist(),
        };
        let generated = generate_egyptian_general(&table, &candidates, &rules, k, &msa.words, &english)?;
        let rows: Vec<(String, &str)> = generated
            .content_words
            .iter()
            .map(|w| (w.clone(), "content_word"))
            .chain(generated.needs_review.iter().map(|w| (w.clone(), "needs_review")))
            .collect();
        let list = if mode == StopgenMode::Combined {
            let mut combined = combine_lists(&msa, &generated.list);
            combined.name = "all_lists".into();
            combined
        } else {
            generated.list
        };
        (list, rows)
    };

    write_atomic(&out, &list.to_file_string())?;
    if let Some(p) = &review {
        let mut tsv = String::from("word\tstatus\n");
        for (w, status) in &review_rows {
            tsv.push_str(&format!("{w}\t{status}\n"));
        }
        write_atomic(p, &tsv)?;
    }
    let _ = writeln!(
        stderr,
        "stopgen: {} words in {} ({} excluded for review)",
        list.len(),
        list.name,
        review_rows.len()
    );
    Ok(())
}

fn classify(args: ClassifyArgs, file: RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let train_path = required(args.train, "train")?;
    let kind = required(args.classifier, "classifier")?;
    let features = args.features.unwrap_or(FeatureMode::Unigram);
    let predict_path = args.predict;
    let model_out = args.model_out.map(|p| file.output(p));
    let out = args.out.map(|p| file.output(p));
    check_paths(
        std::iter::once(&train_path).chain(&predict_path).chain(&args.stopwords),
        model_out.iter().chain(&out),
    )?;
    let defaults = TrainParams::default();
    let params = TrainParams {
        entropy_cutoff: args.entropy_cutoff.or(file.entropy_cutoff).unwrap_or(defaults.entropy_cutoff),
        depth_cutoff: args.depth_cutoff.or(file.depth_cutoff).unwrap_or(defaults.depth_cutoff),
        support_cutoff: args.support_cutoff.or(file.support_cutoff).unwrap_or(defaults.support_cutoff),
    };
    let smoothing = args.smoothing.or(file.smoothing).unwrap_or(DEFAULT_SMOOTHING);

    let emoticons = EmoticonLexicon::bundled();
    let stopwords = match &args.stopwords {
        Some(p) => Some(StopwordList::load(p, ListKind::Combined)?),
        None => None,
    };
    let featurize = |d: &Document| {
        let tokens = match &stopwords {
            Some(list) => remove_stopwords(&d.tokens, list),
            None => d.tokens.clone(),
        };
        features.extract(&tokens)
    };
    let train: Vec<_> = load_documents(&train_path, &emoticons, stderr)?
        .iter()
        .filter(|d| d.label != Label::Unlabeled)
        .map(|d| (featurize(d), d.label))
        .collect();
    let model = TrainedModel::train(kind, &train, smoothing, params)?;
    if let Some(p) = &model_out {
        write_atomic(p, &model.dump())?;
    }

    let targets = load_documents(predict_path.as_ref().unwrap_or(&train_path), &emoticons, stderr)?;
    let mut tsv = String::from("id\tpredicted\tgold\n");
    let mut predicted = Vec::new();
    let mut gold = Vec::new();
    for d in &targets {
        let p = model.predict(&featurize(d));
        tsv.push_str(&format!("{}\t{p}\t{}\n", d.id, d.label));
        if d.label != Label::Unlabeled {
            predicted.push(p);
            gold.push(d.label);
        }
    }
    emit(out.as_deref(), &tsv, stdout)?;
    if !gold.is_empty() {
        let _ = writeln!(
            stderr,
            "classify: accuracy {:.4} on {} labelled documents",
            accuracy(&predicted, &gold)?,
            gold.len()
        );
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs, file: RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let corpora = flags_or_file(args.corpora, file.corpora.clone());
    if corpora.is_empty() {
        return Err(CliError::Usage("missing required setting --corpora (flag or config file)".into()));
    }
    let lists_dir = required(args.lists.or(file.lists.clone()), "lists")?;
    let seed = required(args.seed.or(file.seed), "seed")?;
    let out = args.out.map(|p| file.output(p));
    let table = args.table.map(|p| file.output(p));
    check_paths(corpora.iter().chain([&lists_dir]), out.iter().chain(&table))?;

    let spec = SplitSpec {
        train_fraction: args.train_fraction.or(file.train_fraction).unwrap_or(DEFAULT_TRAIN_FRACTION),
        stratify: args.stratify,
        ..SplitSpec::new(seed)
    };
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(CliError::Usage(format!(
            "--train-fraction must be strictly between 0 and 1, got {}",
            spec.train_fraction
        )));
    }
    let defaults = TrainParams::default();
    let opts = MatrixOptions {
        serial_timing: args.serial_timing,
        smoothing: file.smoothing.unwrap_or(DEFAULT_SMOOTHING),
        tree: TrainParams {
            entropy_cutoff: file.entropy_cutoff.unwrap_or(defaults.entropy_cutoff),
            depth_cutoff: file.depth_cutoff.unwrap_or(defaults.depth_cutoff),
            support_cutoff: file.support_cutoff.unwrap_or(defaults.support_cutoff),
        },
    };

    let lists = StopwordLists::load_dir(&lists_dir)?;
    let emoticons = EmoticonLexicon::bundled();
    let corpora = corpora
        .iter()
        .map(|p| {
            Ok(Corpus {
                name: corpus_name(p),
                documents: load_documents(p, &emoticons, stderr)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let results = run_matrix(&corpora, &lists, &spec, &opts);
    for r in &results {
        if let Err(e) = &r.outcome {
            let _ = writeln!(
                stderr,
                "evaluate: {}/{}/{}/{} failed: {e}",
                r.corpus, r.classifier, r.features, r.stopwords
            );
        }
    }
    emit(out.as_deref(), &results_csv(&results), stdout)?;
    if let Some(p) = &table {
        write_atomic(p, &results_table(&results))?;
    }
    let _ = writeln!(stderr, "evaluate: {} cells", results.len());
    Ok(())
}

fn stats(args: StatsArgs, file: RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let corpora = flags_or_file(args.corpora, file.corpora.clone());
    if corpora.is_empty() {
        return Err(CliError::Usage("missing required setting --corpora (flag or config file)".into()));
    }
    let out = args.out.map(|p| file.output(p));
    check_paths(&corpora, &out)?;
    let emoticons = EmoticonLexicon::bundled();
    let mut docs = Vec::new();
    for p in &corpora {
        docs.extend(load_documents(p, &emoticons, stderr)?);
    }
    emit(out.as_deref(), &corpus_stats(&docs).to_csv(), stdout)
}
