//! Train/test splitting, accuracy and training-time measurement, and the
//! classifier × feature × stopword-list experiment matrix.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ClassifierKind, FeatureMode, FeatureSet, TrainParams, TrainedModel, DEFAULT_SMOOTHING};
use crate::corpus_prep::{Document, Label};
use crate::resource::ResourceError;
use crate::stopgen::{combine_lists, remove_stopwords, ListKind, StopwordList};

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.75;

/// Slack for `train_fraction · n` so that e.g. 0.7 · 10 counts as 7, not 8.
const FRACTION_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("train fraction must be strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("need at least 2 documents to split, got {0}")]
    TooFewDocuments(usize),
    #[error("need at least 2 labels to split, got {0}")]
    TooFewLabels(usize),
    #[error("split of {n} documents at {fraction} leaves the test set empty")]
    EmptyTestSet { n: usize, fraction: f64 },
    #[error("predictions and gold labels differ in length ({predictions} vs {gold})")]
    LengthMismatch { predictions: usize, gold: usize },
    #[error("cannot compute accuracy of zero predictions")]
    NoPredictions,
    #[error("unknown stopword mode \"{0}\"")]
    UnknownMode(String),
    #[error(transparent)]
    Resource(#[from] ResourceError),
}

/// How a corpus is divided into training and test documents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    /// Drop neutral documents (two-class problem).
    pub exclude_neutral: bool,
    /// Split each label separately so both sides keep the label mix.
    pub stratify: bool,
}

impl SplitSpec {
    pub fn new(seed: u64) -> Self {
        SplitSpec {
            train_fraction: DEFAULT_TRAIN_FRACTION,
            seed,
            exclude_neutral: true,
            stratify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split<'a> {
    pub train: Vec<&'a Document>,
    pub test: Vec<&'a Document>,
}

fn train_size(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64 - FRACTION_SLACK).ceil() as usize).min(n)
}

/// Removes unlabeled (and, if requested, neutral) documents, shuffles the
/// rest with a generator seeded from `spec.seed` and puts the first
/// ⌈fraction · n⌉ into the training set.
pub fn split_corpus<'a>(docs: &'a [Document], spec: &SplitSpec) -> Result<Split<'a>, EvalError> {
    let f = spec.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(EvalError::InvalidFraction(f));
    }
    let retained: Vec<&Document> = docs
        .iter()
        .filter(|d| d.label != Label::Unlabeled && !(spec.exclude_neutral && d.label == Label::Neutral))
        .collect();
    if retained.len() < 2 {
        return Err(EvalError::TooFewDocuments(retained.len()));
    }
    let mut by_label: BTreeMap<Label, Vec<&Document>> = BTreeMap::new();
    for d in &retained {
        by_label.entry(d.label).or_default().push(d);
    }
    if by_label.len() < 2 {
        return Err(EvalError::TooFewLabels(by_label.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (train, test) = if spec.stratify {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for mut group in by_label.into_values() {
            group.shuffle(&mut rng);
            let cut = train_size(group.len(), f);
            test.extend(group.split_off(cut));
            train.extend(group);
        }
        (train, test)
    } else {
        let mut all = retained;
        all.shuffle(&mut rng);
        let cut = train_size(all.len(), f);
        let test = all.split_off(cut);
        (all, test)
    };
    if test.is_empty() {
        return Err(EvalError::EmptyTestSet {
            n: train.len(),
            fraction: f,
        });
    }
    Ok(Split { train, test })
}

/// Fraction of positions where prediction equals gold.
pub fn accuracy<L: PartialEq>(predictions: &[L], gold: &[L]) -> Result<f64, EvalError> {
    if predictions.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    if gold.is_empty() {
        return Err(EvalError::NoPredictions);
    }
    let hits = predictions.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / gold.len() as f64)
}

/// Runs `train` and returns its result with the wall-clock time in
/// seconds, rounded to milliseconds.
pub fn measure_training_time<T>(train: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = train();
    let millis = start.elapsed().as_secs_f64() * 1000.0;
    (out, millis.round() / 1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopwordMode {
    Without,
    MsaLists,
    CorpusBased,
    EgyptianGeneral,
    AllLists,
}

impl StopwordMode {
    pub const ALL: [StopwordMode; 5] = [
        StopwordMode::Without,
        StopwordMode::MsaLists,
        StopwordMode::CorpusBased,
        StopwordMode::EgyptianGeneral,
        StopwordMode::AllLists,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StopwordMode::Without => "without",
            StopwordMode::MsaLists => "msa_lists",
            StopwordMode::CorpusBased => "corpus_based",
            StopwordMode::EgyptianGeneral => "egyptian_general",
            StopwordMode::AllLists => "all_lists",
        }
    }

    /// Row caption in the human-readable table.
    pub fn caption(self) -> &'static str {
        match self {
            StopwordMode::Without => "Without",
            StopwordMode::MsaLists => "MSA lists",
            StopwordMode::CorpusBased => "Corpus-based",
            StopwordMode::EgyptianGeneral => "General",
            StopwordMode::AllLists => "All lists",
        }
    }
}

impl Display for StopwordMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StopwordMode {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StopwordMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| EvalError::UnknownMode(s.to_string()))
    }
}

/// The four lists the matrix removes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordLists {
    pub msa: StopwordList,
    pub corpus_based: StopwordList,
    pub egyptian_general: StopwordList,
    pub all_lists: StopwordList,
}

impl StopwordLists {
    /// The combined list defaults to MSA ∪ Egyptian.
    pub fn new(msa: StopwordList, corpus_based: StopwordList, egyptian_general: StopwordList) -> Self {
        let mut all_lists = combine_lists(&msa, &egyptian_general);
        all_lists.name = "all_lists".into();
        StopwordLists {
            msa,
            corpus_based,
            egyptian_general,
            all_lists,
        }
    }

    /// Reads `corpus_based.txt` and `egyptian_general.txt` from `dir`, plus
    /// `msa.txt` (otherwise the bundled MSA list) and `all_lists.txt`
    /// (otherwise MSA ∪ Egyptian) if present.
    pub fn load_dir(dir: &Path) -> Result<Self, EvalError> {
        let msa_path = dir.join("msa.txt");
        let msa = if msa_path.exists() {
            StopwordList::load(&msa_path, ListKind::MsaGeneral)?
        } else {
            StopwordList::bundled_msa()
        };
        let corpus_based = StopwordList::load(&dir.join("corpus_based.txt"), ListKind::CorpusBased)?;
        let egyptian = StopwordList::load(&dir.join("egyptian_general.txt"), ListKind::EgyptianGeneral)?;
        let mut lists = StopwordLists::new(msa, corpus_based, egyptian);
        let combined = dir.join("all_lists.txt");
        if combined.exists() {
            lists.all_lists = StopwordList::load(&combined, ListKind::Combined)?;
        }
        Ok(lists)
    }

    pub fn get(&self, mode: StopwordMode) -> Option<&StopwordList> {
        match mode {
            StopwordMode::Without => None,
            StopwordMode::MsaLists => Some(&self.msa),
            StopwordMode::CorpusBased => Some(&self.corpus_based),
            StopwordMode::EgyptianGeneral => Some(&self.egyptian_general),
            StopwordMode::AllLists => Some(&self.all_lists),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub name: String,
    pub documents: Vec<Document>,
}

/// Measurements of one successful cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMetrics {
    pub accuracy: f64,
    pub train_time_seconds: f64,
    pub train_docs: usize,
    pub test_docs: usize,
    /// Feature-bearing tokens over train and test, before and after removal.
    pub tokens_before: usize,
    pub tokens_after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub corpus: String,
    pub classifier: ClassifierKind,
    pub features: FeatureMode,
    pub stopwords: StopwordMode,
    /// A failed cell keeps its error message.
    pub outcome: Result<CellMetrics, String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixOptions {
    /// Run cells one at a time so timings are not disturbed by other cells.
    pub serial_timing: bool,
    pub smoothing: f64,
    pub tree: TrainParams,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        MatrixOptions {
            serial_timing: false,
            smoothing: DEFAULT_SMOOTHING,
            tree: TrainParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    corpus: usize,
    classifier: ClassifierKind,
    features: FeatureMode,
    stopwords: StopwordMode,
}

fn featurize(
    docs: &[&Document],
    list: Option<&StopwordList>,
    mode: FeatureMode,
) -> (Vec<(FeatureSet, Label)>, usize, usize) {
    let mut before = 0;
    let mut after = 0;
    let examples = docs
        .iter()
        .map(|d| {
            let tokens = match list {
                Some(list) => remove_stopwords(&d.tokens, list),
                None => d.tokens.clone(),
            };
            before += d.tokens.len();
            after += tokens.len();
            (mode.extract(&tokens), d.label)
        })
        .collect();
    (examples, before, after)
}

fn run_cell(split: &Split<'_>, list: Option<&StopwordList>, cell: Cell, opts: &MatrixOptions) -> Result<CellMetrics, String> {
    let (train, train_before, train_after) = featurize(&split.train, list, cell.features);
    let (test, test_before, test_after) = featurize(&split.test, list, cell.features);
    let (model, train_time_seconds) = measure_training_time(|| {
        TrainedModel::train(cell.classifier, &train, opts.smoothing, opts.tree)
    });
    let model = model.map_err(|e| e.to_string())?;
    let predictions: Vec<Label> = test.iter().map(|(f, _)| model.predict(f)).collect();
    let gold: Vec<Label> = test.iter().map(|(_, l)| *l).collect();
    let accuracy = accuracy(&predictions, &gold).map_err(|e| e.to_string())?;
    Ok(CellMetrics {
        accuracy,
        train_time_seconds,
        train_docs: train.len(),
        test_docs: test.len(),
        tokens_before: train_before + test_before,
        tokens_after: train_after + test_after,
    })
}

/// Every corpus × classifier × feature mode × stopword mode, in that
/// nesting order. Each corpus is split once and all its cells share that
/// split; stopwords are removed from training and test documents alike.
/// A failing cell is recorded and the rest still run.
pub fn run_matrix(corpora: &[Corpus], lists: &StopwordLists, spec: &SplitSpec, opts: &MatrixOptions) -> Vec<EvalResult> {
    let splits: Vec<Result<Split<'_>, String>> = corpora
        .iter()
        .map(|c| split_corpus(&c.documents, spec).map_err(|e| e.to_string()))
        .collect();

    let mut cells = Vec::new();
    for corpus in 0..corpora.len() {
        for classifier in ClassifierKind::ALL {
            for features in FeatureMode::ALL {
                for stopwords in StopwordMode::ALL {
                    cells.push(Cell {
                        corpus,
                        classifier,
                        features,
                        stopwords,
                    });
                }
            }
        }
    }

    let evaluate = |cell: &Cell| EvalResult {
        corpus: corpora[cell.corpus].name.clone(),
        classifier: cell.classifier,
        features: cell.features,
        stopwords: cell.stopwords,
        outcome: match &splits[cell.corpus] {
            Ok(split) => run_cell(split, lists.get(cell.stopwords), *cell, opts),
            Err(e) => Err(e.clone()),
        },
    };
    if opts.serial_timing {
        cells.iter().map(evaluate).collect()
    } else {
        cells.par_iter().map(evaluate).collect()
    }
}

/// Comma-separated results, one row per cell. Failed cells show `ERR` in
/// both measurement columns.
pub fn results_csv(results: &[EvalResult]) -> String {
    let mut s = String::from("corpus,classifier,features,stopwords,accuracy,train_time_s\n");
    for r in results {
        let (acc, time) = match &r.outcome {
            Ok(m) => (format!("{:.4}", m.accuracy), format!("{:.3}", m.train_time_seconds)),
            Err(_) => ("ERR".to_string(), "ERR".to_string()),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{acc},{time}",
            csv_field(&r.corpus),
            r.classifier,
            r.features,
            r.stopwords
        );
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Markdown table with one row per classifier/feature/stopword mode and
/// accuracy and time columns per corpus.
pub fn results_table(results: &[EvalResult]) -> String {
    let mut corpora: Vec<&str> = Vec::new();
    for r in results {
        if !corpora.contains(&r.corpus.as_str()) {
            corpora.push(&r.corpus);
        }
    }
    let cell: BTreeMap<(&str, ClassifierKind, FeatureMode, StopwordMode), &Result<CellMetrics, String>> = results
        .iter()
        .map(|r| ((r.corpus.as_str(), r.classifier, r.features, r.stopwords), &r.outcome))
        .collect();

    let mut s = String::from("| Classifier | Features | Stopwords |");
    for c in &corpora {
        let _ = write!(s, " Accuracy {c} |");
    }
    for c in &corpora {
        let _ = write!(s, " Time (s) {c} |");
    }
    s.push_str("\n|---|---|---|");
    s.push_str(&"---:|".repeat(corpora.len() * 2));
    s.push('\n');

    for classifier in ClassifierKind::ALL {
        for features in FeatureMode::ALL {
            for mode in StopwordMode::ALL {
                let name = match classifier {
                    ClassifierKind::NaiveBayes => "Naive Bayes",
                    ClassifierKind::DecisionTree => "Decision Tree",
                };
                let _ = write!(s, "| {name} | {features} | {} |", mode.caption());
                for c in &corpora {
                    let v = match cell.get(&(*c, classifier, features, mode)) {
                        Some(Ok(m)) => format!("{:.2}%", m.accuracy * 100.0),
                        Some(Err(_)) => "ERR".into(),
                        None => "".into(),
                    };
                    let _ = write!(s, " {v} |");
                }
                for c in &corpora {
                    let v = match cell.get(&(*c, classifier, features, mode)) {
                        Some(Ok(m)) => format!("{:.3}", m.train_time_seconds),
                        Some(Err(_)) => "ERR".into(),
                        None => "".into(),
                    };
                    let _ = write!(s, " {v} |");
                }
                s.push('\n');
            }
        }
    }
    s
}
