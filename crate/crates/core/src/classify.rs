//! Presence features (unigrams and bigrams) and the two classifiers:
//! Bernoulli Naive Bayes and an entropy-driven decision tree with depth,
//! entropy and support cutoffs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textkit::{Token, TokenKind};

/// Joins the two words of a bigram feature (U+241F, never part of a word).
pub const BIGRAM_JOINER: char = '\u{241F}';

/// Gains at or below this are treated as zero.
const GAIN_EPSILON: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("no training examples")]
    NoExamples,
    #[error("training data has a single label; need at least two")]
    SingleLabel,
    #[error("smoothing constant must be positive and finite, got {0}")]
    InvalidSmoothing(f64),
    #[error("probability {0} is negative")]
    NegativeProbability(f64),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("invalid training parameters: {0}")]
    InvalidParams(String),
}

/// Binary presence features of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureSet(BTreeSet<String>);

impl FeatureSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, feature: impl Into<String>) {
        self.0.insert(feature.into());
    }

    pub fn contains(&self, feature: &str) -> bool {
        self.0.contains(feature)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        FeatureSet(iter.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    Unigram,
    Bigram,
}

impl FeatureMode {
    pub const ALL: [FeatureMode; 2] = [FeatureMode::Unigram, FeatureMode::Bigram];

    pub fn extract(self, tokens: &[Token]) -> FeatureSet {
        match self {
            FeatureMode::Unigram => extract_unigrams(tokens),
            FeatureMode::Bigram => extract_bigrams(tokens),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::Unigram => "unigram",
            FeatureMode::Bigram => "bigram",
        }
    }
}

impl Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Only words and emoticons are features.
fn feature_words(tokens: &[Token]) -> impl Iterator<Item = &str> {
    tokens
        .iter()
        .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Emoticon))
        .map(|t| t.text.as_str())
}

pub fn extract_unigrams(tokens: &[Token]) -> FeatureSet {
    feature_words(tokens).collect()
}

/// Adjacent pairs over the word/emoticon subsequence.
pub fn extract_bigrams(tokens: &[Token]) -> FeatureSet {
    let words: Vec<&str> = feature_words(tokens).collect();
    words
        .windows(2)
        .map(|w| format!("{}{BIGRAM_JOINER}{}", w[0], w[1]))
        .collect()
}

/// Sorted distinct labels of the examples.
fn label_index<L: Ord + Clone>(examples: &[(FeatureSet, L)]) -> Vec<L> {
    let set: BTreeSet<&L> = examples.iter().map(|(_, l)| l).collect();
    set.into_iter().cloned().collect()
}

/// Bernoulli Naive Bayes over presence features.
#[derive(Debug, Clone, PartialEq)]
pub struct NbModel<L> {
    labels: Vec<L>,
    prior: Vec<f64>,
    /// feature → P(present | label), indexed like `labels`.
    cond: BTreeMap<String, Vec<f64>>,
    smoothing: f64,
    /// Per label: log prior + Σ log(1 − p) over the vocabulary.
    base_scores: Vec<f64>,
}

pub const DEFAULT_SMOOTHING: f64 = 0.5;

/// Trains the presence model:
/// `prior(l) = count(l) / N` and
/// `cond(f, l) = (examples of l containing f + s) / (count(l) + 2s)`.
pub fn nb_train<L: Ord + Clone>(examples: &[(FeatureSet, L)], smoothing: f64) -> Result<NbModel<L>, ClassifyError> {
    if !(smoothing.is_finite() && smoothing > 0.0) {
        return Err(ClassifyError::InvalidSmoothing(smoothing));
    }
    if examples.is_empty() {
        return Err(ClassifyError::NoExamples);
    }
    let labels = label_index(examples);
    if labels.len() < 2 {
        return Err(ClassifyError::SingleLabel);
    }
    let index_of = |l: &L| labels.binary_search(l).expect("label is indexed");

    let mut label_counts = vec![0usize; labels.len()];
    let mut present: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (features, label) in examples {
        let li = index_of(label);
        label_counts[li] += 1;
        for f in features.iter() {
            present.entry(f).or_insert_with(|| vec![0; labels.len()])[li] += 1;
        }
    }

    let n = examples.len() as f64;
    let prior: Vec<f64> = label_counts.iter().map(|&c| c as f64 / n).collect();
    let cond: BTreeMap<String, Vec<f64>> = present
        .into_iter()
        .map(|(f, counts)| {
            let probs = counts
                .iter()
                .zip(&label_counts)
                .map(|(&with_f, &total)| (with_f as f64 + smoothing) / (total as f64 + 2.0 * smoothing))
                .collect();
            (f.to_string(), probs)
        })
        .collect();

    let mut model = NbModel {
        labels,
        prior,
        cond,
        smoothing,
        base_scores: Vec::new(),
    };
    model.base_scores = model.compute_base_scores();
    Ok(model)
}

impl<L: Ord + Clone> NbModel<L> {
    fn compute_base_scores(&self) -> Vec<f64> {
        (0..self.labels.len())
            .map(|li| {
                self.prior[li].ln() + self.cond.values().map(|p| (1.0 - p[li]).ln()).sum::<f64>()
            })
            .collect()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn prior(&self, label: &L) -> Option<f64> {
        self.labels.binary_search(label).ok().map(|i| self.prior[i])
    }

    pub fn cond(&self, feature: &str, label: &L) -> Option<f64> {
        let li = self.labels.binary_search(label).ok()?;
        self.cond.get(feature).map(|p| p[li])
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.cond.keys().map(String::as_str)
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    /// Log score per label; features outside the vocabulary are ignored.
    pub fn log_scores(&self, features: &FeatureSet) -> Vec<f64> {
        let mut scores = self.base_scores.clone();
        for f in features.iter() {
            if let Some(p) = self.cond.get(f) {
                for (s, &pl) in scores.iter_mut().zip(p) {
                    *s += pl.ln() - (1.0 - pl).ln();
                }
            }
        }
        scores
    }

    /// Text dump: priors then conditionals, features sorted.
    pub fn dump(&self) -> String
    where
        L: Display,
    {
        let mut s = format!(
            "naive_bayes smoothing={} labels={} vocabulary={}\n",
            self.smoothing,
            self.labels.len(),
            self.cond.len()
        );
        for (l, p) in self.labels.iter().zip(&self.prior) {
            let _ = writeln!(s, "prior\t{l}\t{p:.10}");
        }
        for (f, probs) in &self.cond {
            let _ = write!(s, "cond\t{f}");
            for (l, p) in self.labels.iter().zip(probs) {
                let _ = write!(s, "\t{l}={p:.10}");
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<L> {
    pub label: L,
    /// Posterior per label, in label order; sums to 1.
    pub posterior: Vec<(L, f64)>,
}

/// Highest-scoring label (ties go to the smallest label) and the posterior.
pub fn nb_predict<L: Ord + Clone>(model: &NbModel<L>, features: &FeatureSet) -> Prediction<L> {
    let scores = model.log_scores(features);
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    let max = scores[best];
    let weights: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = weights.iter().sum();
    Prediction {
        label: model.labels[best].clone(),
        posterior: model
            .labels
            .iter()
            .cloned()
            .zip(weights.iter().map(|w| w / z))
            .collect(),
    }
}

/// Shannon entropy in bits, with 0·log 0 = 0.
pub fn entropy(distribution: &[f64]) -> Result<f64, ClassifyError> {
    if let Some(&p) = distribution.iter().find(|&&p| p < 0.0 || p.is_nan()) {
        return Err(ClassifyError::NegativeProbability(p));
    }
    let sum: f64 = distribution.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(ClassifyError::NotNormalized(sum));
    }
    Ok(entropy_unchecked(distribution))
}

fn entropy_unchecked(distribution: &[f64]) -> f64 {
    -distribution
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

fn entropy_of_counts(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    entropy_unchecked(&probs)
}

/// Decision tree refinement cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    /// Nodes whose label entropy is at or below this become leaves.
    pub entropy_cutoff: f64,
    /// Maximum tree depth (root at depth 0).
    pub depth_cutoff: usize,
    /// Nodes with this many examples or fewer become leaves.
    pub support_cutoff: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            entropy_cutoff: 0.8,
            depth_cutoff: 5,
            support_cutoff: 30,
        }
    }
}

impl TrainParams {
    pub fn validate(&self) -> Result<(), ClassifyError> {
        if !(self.entropy_cutoff.is_finite() && self.entropy_cutoff > 0.0) {
            return Err(ClassifyError::InvalidParams(format!(
                "entropy_cutoff must be positive, got {}",
                self.entropy_cutoff
            )));
        }
        if self.depth_cutoff == 0 || self.support_cutoff == 0 {
            return Err(ClassifyError::InvalidParams(
                "depth_cutoff and support_cutoff must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Why a node stopped being refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Halt {
    LowEntropy,
    DepthCutoff,
    Support,
    NoGain,
}

impl Display for Halt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Halt::LowEntropy => "low_entropy",
            Halt::DepthCutoff => "depth_cutoff",
            Halt::Support => "support",
            Halt::NoGain => "no_gain",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DtNode<L> {
    Leaf {
        label: L,
        distribution: BTreeMap<L, usize>,
        halt: Halt,
    },
    Split {
        feature: String,
        present: Box<DtNode<L>>,
        absent: Box<DtNode<L>>,
    },
}

impl<L> DtNode<L> {
    /// Depth of the deepest leaf below this node (0 for a leaf).
    pub fn depth(&self) -> usize {
        match self {
            DtNode::Leaf { .. } => 0,
            DtNode::Split { present, absent, .. } => 1 + present.depth().max(absent.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtModel<L> {
    pub root: DtNode<L>,
    pub params: TrainParams,
}

/// Grows a binary present/absent tree. A node becomes a leaf labelled with
/// its majority label (ties to the smallest label) when its entropy is at or
/// below the cutoff, it sits at the depth cutoff, it has no more examples
/// than the support cutoff, or no feature has positive information gain.
/// Otherwise it splits on the feature with the highest gain, ties going to
/// the smallest feature.
pub fn dt_train<L: Ord + Clone>(examples: &[(FeatureSet, L)], params: TrainParams) -> Result<DtModel<L>, ClassifyError> {
    params.validate()?;
    if examples.is_empty() {
        return Err(ClassifyError::NoExamples);
    }
    let labels = label_index(examples);
    let label_ids: Vec<usize> = examples
        .iter()
        .map(|(_, l)| labels.binary_search(l).expect("label is indexed"))
        .collect();
    let grower = Grower {
        examples,
        labels: &labels,
        label_ids: &label_ids,
        params,
    };
    let all: Vec<usize> = (0..examples.len()).collect();
    Ok(DtModel {
        root: grower.grow(&all, 0),
        params,
    })
}

struct Grower<'a, L> {
    examples: &'a [(FeatureSet, L)],
    labels: &'a [L],
    label_ids: &'a [usize],
    params: TrainParams,
}

impl<'a, L: Ord + Clone> Grower<'a, L> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.labels.len()];
        for &i in idx {
            c[self.label_ids[i]] += 1;
        }
        c
    }

    fn leaf(&self, counts: &[usize], halt: Halt) -> DtNode<L> {
        let mut best = 0;
        for (i, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = i;
            }
        }
        DtNode::Leaf {
            label: self.labels[best].clone(),
            distribution: self
                .labels
                .iter()
                .cloned()
                .zip(counts.iter().copied())
                .filter(|(_, c)| *c > 0)
                .collect(),
            halt,
        }
    }

    /// Best (feature, gain) over features seen in `idx`.
    fn best_split(&self, idx: &[usize], parent_counts: &[usize]) -> Option<(&'a str, f64)> {
        let n = idx.len();
        let mut present_counts: BTreeMap<&'a str, Vec<usize>> = BTreeMap::new();
        for &i in idx {
            for f in self.examples[i].0.iter() {
                present_counts.entry(f).or_insert_with(|| vec![0; self.labels.len()])[self.label_ids[i]] += 1;
            }
        }
        let parent_entropy = entropy_of_counts(parent_counts);
        let mut best: Option<(&str, f64)> = None;
        for (f, present) in present_counts {
            let n_present: usize = present.iter().sum();
            let absent: Vec<usize> = parent_counts.iter().zip(&present).map(|(t, p)| t - p).collect();
            let gain = parent_entropy
                - (n_present as f64 / n as f64) * entropy_of_counts(&present)
                - ((n - n_present) as f64 / n as f64) * entropy_of_counts(&absent);
            if best.is_none_or(|(_, g)| gain > g + GAIN_EPSILON) {
                best = Some((f, gain));
            }
        }
        best.filter(|&(_, g)| g > GAIN_EPSILON)
    }

    fn grow(&self, idx: &[usize], depth: usize) -> DtNode<L> {
        let counts = self.counts(idx);
        if entropy_of_counts(&counts) <= self.params.entropy_cutoff {
            return self.leaf(&counts, Halt::LowEntropy);
        }
        if depth >= self.params.depth_cutoff {
            return self.leaf(&counts, Halt::DepthCutoff);
        }
        if idx.len() <= self.params.support_cutoff {
            return self.leaf(&counts, Halt::Support);
        }
        let Some((feature, _)) = self.best_split(idx, &counts) else {
            return self.leaf(&counts, Halt::NoGain);
        };
        let (with, without): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.examples[i].0.contains(feature));
        DtNode::Split {
            feature: feature.to_string(),
            present: Box::new(self.grow(&with, depth + 1)),
            absent: Box::new(self.grow(&without, depth + 1)),
        }
    }
}

pub fn dt_predict<'m, L>(model: &'m DtModel<L>, features: &FeatureSet) -> &'m L {
    let mut node = &model.root;
    loop {
        match node {
            DtNode::Leaf { label, .. } => return label,
            DtNode::Split {
                feature,
                present,
                absent,
            } => {
                node = if features.contains(feature) { present } else { absent };
            }
        }
    }
}

impl<L: Display> DtModel<L> {
    /// Indented text form of the tree.
    pub fn dump(&self) -> String {
        let mut s = format!(
            "decision_tree entropy_cutoff={} depth_cutoff={} support_cutoff={}\n",
            self.params.entropy_cutoff, self.params.depth_cutoff, self.params.support_cutoff
        );
        dump_node(&self.root, 0, &mut s);
        s
    }
}

fn dump_node<L: Display>(node: &DtNode<L>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match node {
        DtNode::Leaf {
            label,
            distribution,
            halt,
        } => {
            let dist: Vec<String> = distribution.iter().map(|(l, c)| format!("{l}={c}")).collect();
            let _ = writeln!(out, "{pad}-> {label} [{}] ({halt})", dist.join(" "));
        }
        DtNode::Split {
            feature,
            present,
            absent,
        } => {
            let _ = writeln!(out, "{pad}if {feature} present:");
            dump_node(present, indent + 1, out);
            let _ = writeln!(out, "{pad}else:");
            dump_node(absent, indent + 1, out);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    #[serde(rename = "NB")]
    NaiveBayes,
    #[serde(rename = "DT")]
    DecisionTree,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 2] = [ClassifierKind::NaiveBayes, ClassifierKind::DecisionTree];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "NB",
            ClassifierKind::DecisionTree => "DT",
        }
    }
}

impl Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Either trained classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel<L> {
    NaiveBayes(NbModel<L>),
    DecisionTree(DtModel<L>),
}

impl<L: Ord + Clone> TrainedModel<L> {
    pub fn train(
        kind: ClassifierKind,
        examples: &[(FeatureSet, L)],
        smoothing: f64,
        params: TrainParams,
    ) -> Result<Self, ClassifyError> {
        Ok(match kind {
            ClassifierKind::NaiveBayes => TrainedModel::NaiveBayes(nb_train(examples, smoothing)?),
            ClassifierKind::DecisionTree => TrainedModel::DecisionTree(dt_train(examples, params)?),
        })
    }

    pub fn predict(&self, features: &FeatureSet) -> L {
        match self {
            TrainedModel::NaiveBayes(m) => nb_predict(m, features).label,
            TrainedModel::DecisionTree(m) => dt_predict(m, features).clone(),
        }
    }

    pub fn dump(&self) -> String
    where
        L: Display,
    {
        match self {
            TrainedModel::NaiveBayes(m) => m.dump(),
            TrainedModel::DecisionTree(m) => m.dump(),
        }
    }
}
