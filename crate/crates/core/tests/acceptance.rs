//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs as a plain binary (`harness = false`) so the lines
//! are always printed; `cargo test --test acceptance` shows them.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arabic_osn::classify::{
    dt_train, entropy, nb_predict, nb_train, DtNode, FeatureMode, FeatureSet, TrainParams,
};
use arabic_osn::corpus_prep::{
    ingest, normalize_gloss, resolve_word, run_pipeline, Document, Label, PipelineConfig, Resolution, Source, Stage,
    TranslitRules,
};
use arabic_osn::evaluate::{
    accuracy, results_csv, run_matrix, split_corpus, Corpus, MatrixOptions, SplitSpec, StopwordLists, StopwordMode,
};
use arabic_osn::resource;
use arabic_osn::stopgen::{
    classify_validity, english_stoplist, expand_morphology, remove_stopwords, top_k, CandidateWord, Dialect, Evidence,
    FrequencyTable, ListKind, MorphRules, StopwordList, Verdict,
};
use arabic_osn::textkit::{EmoticonLexicon, Token, VariantTable};

/// Largest allowed gap between a model posterior and the exact one.
const POSTERIOR_TOLERANCE: f64 = 1e-9;
/// Wall-clock budget for the exhaustive Naive Bayes sweep.
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
/// Largest allowed gap for the 0.75/0.25 entropy value.
const ENTROPY_TOLERANCE: f64 = 1e-6;
/// Gains at or below this count as zero.
const ZERO_GAIN: f64 = 1e-12;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("Naive Bayes matches exhaustive brute-force posteriors", nb_oracle_equivalence),
        ("decision tree halting rules and gain-maximal splits", dt_halting_invariants),
        ("stopword validity, expansion and top-k anchors", stopword_anchors),
        ("Franco-Arab transliteration anchors", transliteration_anchors),
        ("pipeline stage accounting on the 20-post fixture", pipeline_accounting),
        ("evaluation arithmetic, split and determinism", evaluation_arithmetic),
        ("stopword neutrality on a separable corpus", stopword_neutrality),
        ("entropy values", entropy_values),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- 1

const FEATURES: [&str; 4] = ["f0", "f1", "f2", "f3"];
const LABELS: [&str; 2] = ["a", "b"];

/// Per-label counts of a two-label corpus of (feature bitmask, label) documents.
struct Counts {
    n: [i64; 2],
    /// n_lf: documents of label l containing feature f.
    n_f: [[i64; 4]; 2],
    /// Features present in at least one document.
    vocabulary: Vec<usize>,
}

impl Counts {
    fn new(docs: &[(u8, usize)]) -> Self {
        let mut c = Counts {
            n: [0; 2],
            n_f: [[0; 4]; 2],
            vocabulary: Vec::new(),
        };
        for &(mask, l) in docs {
            c.n[l] += 1;
            for f in 0..FEATURES.len() {
                if mask & (1 << f) != 0 {
                    c.n_f[l][f] += 1;
                }
            }
        }
        c.vocabulary = (0..FEATURES.len()).filter(|&f| c.n_f[0][f] + c.n_f[1][f] > 0).collect();
        c
    }
}

/// Exact posterior of label `a` under the Bernoulli model with s = 1/2:
/// prior(l) = n_l/N and P(f|l) = (n_lf + 1/2)/(n_l + 1) = (2n_lf + 1)/(2n_l + 2);
/// absent features contribute 1 − P(f|l) and features never seen in
/// training are ignored. Evaluated in integers: joint(l) = n_l·Π num_l /
/// (N·(2n_l + 2)^|V|), and the common N cancels in the posterior.
fn exact_posterior_a(c: &Counts, query: u8) -> Ratio<i64> {
    let mut num = [0i64; 2];
    let mut den = [0i64; 2];
    for l in 0..2 {
        num[l] = c.n[l];
        den[l] = 1;
        for &f in &c.vocabulary {
            let present = 2 * c.n_f[l][f] + 1;
            let total = 2 * c.n[l] + 2;
            num[l] *= if query & (1 << f) != 0 { present } else { total - present };
            den[l] *= total;
        }
    }
    let a = num[0] * den[1];
    let b = num[1] * den[0];
    Ratio::new(a, a + b)
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Calls `visit` with every multiset of `size` items drawn from `0..kinds`
/// (as a non-decreasing sequence).
fn multisets(kinds: usize, size: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(kinds: usize, size: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        for k in start..kinds {
            cur.push(k);
            go(kinds, size, k, cur, visit);
            cur.pop();
        }
    }
    go(kinds, size, 0, &mut Vec::with_capacity(size), visit);
}

fn nb_oracle_equivalence() -> Result<String, String> {
    let start = Instant::now();
    // Document kinds: every feature subset paired with every label.
    let kinds: Vec<(u8, usize)> = (0..1u8 << FEATURES.len())
        .flat_map(|m| (0..LABELS.len()).map(move |l| (m, l)))
        .collect();
    let feature_set = |mask: u8| -> FeatureSet {
        FEATURES
            .iter()
            .enumerate()
            .filter(|(f, _)| mask & (1 << f) != 0)
            .map(|(_, name)| *name)
            .collect()
    };
    let sets: Vec<FeatureSet> = (0..1u8 << FEATURES.len()).map(feature_set).collect();

    let mut corpora = 0u64;
    let mut comparisons = 0u64;
    let mut worst = 0f64;
    let mut failure: Option<String> = None;
    for size in 1..=6 {
        multisets(kinds.len(), size, &mut |picked| {
            if failure.is_some() {
                return;
            }
            let docs: Vec<(u8, usize)> = picked.iter().map(|&k| kinds[k]).collect();
            let two_labels = docs.iter().any(|d| d.1 == 0) && docs.iter().any(|d| d.1 == 1);
            let examples: Vec<(FeatureSet, &str)> =
                docs.iter().map(|&(m, l)| (sets[m as usize].clone(), LABELS[l])).collect();
            let model = nb_train(&examples, 0.5);
            if !two_labels {
                if model.is_ok() {
                    failure = Some(format!("single-label corpus {docs:?} was accepted"));
                }
                return;
            }
            let Ok(model) = model else {
                failure = Some(format!("two-label corpus {docs:?} was rejected"));
                return;
            };
            corpora += 1;
            let counts = Counts::new(&docs);
            for (q, query) in sets.iter().enumerate() {
                let expected = ratio_to_f64(exact_posterior_a(&counts, q as u8));
                let prediction = nb_predict(&model, query);
                let got_a = prediction.posterior[0].1;
                let got_b = prediction.posterior[1].1;
                let gap = (got_a - expected).abs().max((got_b - (1.0 - expected)).abs());
                worst = worst.max(gap);
                comparisons += 1;
                if gap > POSTERIOR_TOLERANCE {
                    failure = Some(format!("corpus {docs:?}, query {q:04b}: posterior {got_a} vs exact {expected}"));
                    return;
                }
                if (expected - 0.5).abs() > POSTERIOR_TOLERANCE {
                    let want = if expected > 0.5 { "a" } else { "b" };
                    if prediction.label != want {
                        failure = Some(format!("corpus {docs:?}, query {q:04b}: label {} vs {want}", prediction.label));
                        return;
                    }
                }
            }
        });
    }
    if let Some(f) = failure {
        return Err(f);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < SWEEP_BUDGET, "sweep took {elapsed:?}, budget {SWEEP_BUDGET:?}");
    Ok(format!(
        "{corpora} corpora, {comparisons} queries, max gap {worst:.1e}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------- 2

fn shannon(counts: &BTreeMap<&str, usize>) -> f64 {
    let n: usize = counts.values().sum();
    counts
        .values()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

fn label_counts<'a>(examples: &[&(FeatureSet, &'a str)]) -> BTreeMap<&'a str, usize> {
    let mut m = BTreeMap::new();
    for (_, l) in examples {
        *m.entry(*l).or_insert(0) += 1;
    }
    m
}

/// Information gain of splitting `examples` on `feature`, computed from
/// scratch.
fn gain(examples: &[&(FeatureSet, &str)], feature: &str) -> f64 {
    let (with, without): (Vec<_>, Vec<_>) = examples.iter().partition(|(f, _)| f.contains(feature));
    let n = examples.len() as f64;
    let mut g = shannon(&label_counts(examples));
    for side in [&with, &without] {
        if !side.is_empty() {
            g -= side.len() as f64 / n * shannon(&label_counts(side));
        }
    }
    g
}

/// Walks the tree, routing the examples, and checks every node against the
/// halting rules and every split against all candidate features.
fn audit_tree(
    node: &DtNode<&str>,
    examples: Vec<&(FeatureSet, &str)>,
    depth: usize,
    features: &[&str],
    params: &TrainParams,
    stats: &mut (usize, usize),
) -> Result<(), String> {
    ensure!(depth <= params.depth_cutoff, "node at depth {depth}");
    let counts = label_counts(&examples);
    let h = shannon(&counts);
    let best_gain = features.iter().map(|f| gain(&examples, f)).fold(0.0, f64::max);
    let halts = h <= params.entropy_cutoff
        || examples.len() <= params.support_cutoff
        || depth == params.depth_cutoff
        || best_gain <= ZERO_GAIN;
    match node {
        DtNode::Leaf { label, distribution, .. } => {
            stats.0 += 1;
            ensure!(halts, "leaf at depth {depth} with entropy {h}, {} examples, gain {best_gain}", examples.len());
            let expected: BTreeMap<&str, usize> = counts.clone();
            ensure!(*distribution == expected, "leaf distribution {distribution:?} vs routed {expected:?}");
            let top = counts.values().copied().max().unwrap_or(0);
            let majority = counts.iter().find(|(_, &c)| c == top).map(|(l, _)| *l);
            ensure!(majority.is_none_or(|m| m == *label), "leaf label {label} vs majority {majority:?}");
        }
        DtNode::Split { feature, present, absent } => {
            stats.1 += 1;
            ensure!(!halts, "split at depth {depth} where a halting rule applies");
            let chosen = gain(&examples, feature);
            for f in features {
                let g = gain(&examples, f);
                ensure!(g <= chosen + ZERO_GAIN, "split on {feature} (gain {chosen}) but {f} has gain {g}");
                if (g - chosen).abs() <= ZERO_GAIN {
                    ensure!(feature.as_str() <= *f, "tie between {feature} and smaller feature {f}");
                    break;
                }
            }
            let (with, without): (Vec<_>, Vec<_>) = examples.into_iter().partition(|(f, _)| f.contains(feature));
            audit_tree(present, with, depth + 1, features, params, stats)?;
            audit_tree(absent, without, depth + 1, features, params, stats)?;
        }
    }
    Ok(())
}

fn random_training_set(rng: &mut ChaCha8Rng, features: &[&'static str]) -> Vec<(FeatureSet, &'static str)> {
    let labels = ["neg", "neu", "pos"];
    let n_labels = rng.gen_range(2..=3);
    let n = rng.gen_range(1..=400);
    // Each label favours some features, so deep trees actually occur.
    let bias: Vec<Vec<f64>> = (0..n_labels)
        .map(|_| features.iter().map(|_| rng.gen_range(0.05..0.95)).collect())
        .collect();
    (0..n)
        .map(|_| {
            let l = rng.gen_range(0..n_labels);
            let set: FeatureSet = features
                .iter()
                .zip(&bias[l])
                .filter(|(_, &p)| rng.gen_bool(p))
                .map(|(f, _)| *f)
                .collect();
            (set, labels[l])
        })
        .collect()
}

fn dt_halting_invariants() -> Result<String, String> {
    let params = TrainParams::default();
    ensure!(
        (params.entropy_cutoff, params.depth_cutoff, params.support_cutoff) == (0.8, 5, 30),
        "defaults are {params:?}"
    );
    let pool = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut stats = (0, 0);
    let mut deepest = 0;
    for round in 0..1000 {
        // The first half uses at most five features for exhaustive gain checks.
        let n_features = if round < 500 { rng.gen_range(1..=5) } else { rng.gen_range(1..=pool.len()) };
        let features = &pool[..n_features];
        let data = random_training_set(&mut rng, features);
        let model = dt_train(&data, params).map_err(|e| e.to_string())?;
        deepest = deepest.max(model.root.depth());
        ensure!(model.root.depth() <= 5, "round {round}: depth {}", model.root.depth());
        audit_tree(&model.root, data.iter().collect(), 0, features, &params, &mut stats)
            .map_err(|e| format!("round {round}: {e}"))?;
    }
    ensure!(deepest == 5, "no tree reached the depth cutoff (deepest {deepest})");
    Ok(format!("1000 trees, {} leaves, {} splits, deepest {deepest}", stats.0, stats.1))
}

// ---------------------------------------------------------------- 3

fn stopword_anchors() -> Result<String, String> {
    let msa = StopwordList::bundled_msa().words;
    let english = english_stoplist();
    ensure!(english.len() == 127, "English list has {} words", english.len());

    let bas = CandidateWord::new("بس", Dialect::Egyptian).correspondent("فقط").gloss("only");
    let c = classify_validity(&bas, &msa, &english);
    ensure!(c.verdict == Verdict::Valid, "بس verdict {:?}", c.verdict);
    ensure!(
        c.evidence.contains(&Evidence::CorrespondentInMsaList)
            && c.evidence.contains(&Evidence::CorrespondentGlossInEnglishList),
        "بس evidence {:?}",
        c.evidence
    );

    let lazem = CandidateWord::new("لازم", Dialect::Egyptian).correspondent("لابد").gloss("should");
    let c = classify_validity(&lazem, &msa, &english);
    ensure!(!msa.contains("لابد"), "لابد unexpectedly in the MSA lists");
    ensure!(
        c.verdict == Verdict::Valid && c.evidence == vec![Evidence::CorrespondentGlossInEnglishList],
        "لازم classified {c:?}"
    );

    let singles: Vec<String> = ["ال", "و", "ب", "ف", "ل"].into_iter().map(String::from).collect();
    let rules = MorphRules::new(singles, Vec::new(), VariantTable::arabic()).map_err(|e| e.to_string())?;
    let forms = expand_morphology("بس", &rules, false);
    let expected: BTreeSet<String> =
        ["بس", "البس", "وبس", "ببس", "فبس", "لبس"].into_iter().map(String::from).collect();
    ensure!(forms == expected, "expansion {forms:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let mut table = FrequencyTable::new();
        for _ in 0..rng.gen_range(1..600) {
            table.add(&format!("w{}", rng.gen_range(0..400)), rng.gen_range(1..20));
        }
        let top = top_k(&table, 200).map_err(|e| e.to_string())?;
        ensure!(top.len() <= 200 && top.len() == table.len().min(200), "top_k returned {}", top.len());
        ensure!(top.windows(2).all(|w| w[0].1 >= w[1].1), "counts increase");
    }
    Ok("بس and لازم valid, 6 forms, 200 top-k tables".into())
}

// ---------------------------------------------------------------- 4

fn transliteration_anchors() -> Result<String, String> {
    let rules = TranslitRules::bundled();
    let de7k = rules.candidates("de7k");
    ensure!(de7k.forms.contains("ضحك"), "candidates of de7k: {:?}", de7k.forms);
    let lexicon: FrequencyTable = ["مالوش", "ضحك"].into_iter().collect();
    let (resolution, _) = resolve_word("maloosh", &rules, &lexicon, &BTreeMap::new());
    ensure!(
        matches!(&resolution, Resolution::Attested { arabic, .. } if arabic == "مالوش"),
        "maloosh resolved to {resolution:?}"
    );
    let (resolution, _) = resolve_word("de7k", &rules, &lexicon, &BTreeMap::new());
    ensure!(resolution.arabic() == Some("ضحك"), "de7k resolved to {resolution:?}");
    Ok(format!("{} candidates for de7k", de7k.forms.len()))
}

// ---------------------------------------------------------------- 5

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn pipeline_accounting() -> Result<String, String> {
    let posts = ingest(&fixture("posts20.jsonl"), None).map_err(|e| e.to_string())?;
    ensure!(posts.diagnostics.is_empty() && posts.posts.len() == 20, "fixture did not load cleanly");
    let mut cfg = PipelineConfig::default();
    cfg.set_topic_words(resource::load_word_list(&fixture("topic_words.txt")).map_err(|e| e.to_string())?);
    cfg.gloss = normalize_gloss(resource::load_tsv_map(&fixture("gloss.tsv")).map_err(|e| e.to_string())?);
    cfg.lexicon = cfg.lexicon_from_posts(&posts.posts);
    let out = run_pipeline(&posts.posts, &cfg);

    // Fixture composition: 3 URL-only, 2 photo-only, 2 mention-only,
    // 1 off-topic, 2 English-only, 10 valid.
    let expected_counts = vec![20, 17, 15, 13, 12, 10, 10, 10];
    ensure!(out.report.counts() == expected_counts, "counts {:?}", out.report.counts());
    let expected_drops: [(Stage, &[&str]); 5] = [
        (Stage::UrlOrAdvertising, &["t02", "t08", "t17"]),
        (Stage::PhotoOnly, &["f06", "f13"]),
        (Stage::MentionOnly, &["t04", "t15"]),
        (Stage::Unrelated, &["t10"]),
        (Stage::NonArabic, &["t11", "t19"]),
    ];
    for (stage, ids) in expected_drops {
        let got = &out.report.stages.iter().find(|s| s.stage == stage).unwrap().dropped_ids;
        ensure!(got == ids, "{stage} dropped {got:?}, expected {ids:?}");
    }
    let mut attributed = 0;
    for s in &out.report.stages {
        attributed += s.dropped_ids.len();
        ensure!(s.surviving + attributed == 20, "{}: {} + {attributed} != 20", s.stage, s.surviving);
    }
    ensure!(out.documents.len() == 10, "{} documents", out.documents.len());
    Ok(format!("{:?}", out.report.counts()))
}

// ---------------------------------------------------------------- 6

fn labelled_docs(n: usize) -> Vec<Document> {
    let lex = EmoticonLexicon::bundled();
    (0..n)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Positive } else { Label::Negative };
            let text = if i % 2 == 0 { "فيلم ممتاز" } else { "فيلم سيء" };
            Document::new(format!("d{i}"), Source::Twitter, text, label, &lex)
        })
        .collect()
}

fn small_lists() -> StopwordLists {
    StopwordLists::new(
        StopwordList::new("msa", ListKind::MsaGeneral, ["في", "من", "على"]),
        StopwordList::new("corpus_based", ListKind::CorpusBased, ["فيلم", "في"]),
        StopwordList::new("egyptian_general", ListKind::EgyptianGeneral, ["بس", "اوي", "ده"]),
    )
}

fn strip_time(csv: &str) -> String {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0).collect::<Vec<_>>().join("\n")
}

fn evaluation_arithmetic() -> Result<String, String> {
    let acc = accuracy(&["p", "p", "n", "n"], &["p", "p", "n", "p"]).map_err(|e| e.to_string())?;
    ensure!(acc == 0.75, "accuracy {acc}");

    let docs = labelled_docs(100);
    let split = split_corpus(&docs, &SplitSpec::new(17)).map_err(|e| e.to_string())?;
    ensure!((split.train.len(), split.test.len()) == (75, 25), "split {}/{}", split.train.len(), split.test.len());
    let train: BTreeSet<&str> = split.train.iter().map(|d| d.id.as_str()).collect();
    let test: BTreeSet<&str> = split.test.iter().map(|d| d.id.as_str()).collect();
    ensure!(train.is_disjoint(&test) && train.len() + test.len() == 100, "train and test overlap");

    let lists = small_lists();
    let corpora: Vec<Corpus> = (0..3)
        .map(|i| Corpus {
            name: format!("c{i}"),
            documents: labelled_docs(12 + 4 * i),
        })
        .collect();
    for k in 1..=3 {
        let results = run_matrix(&corpora[..k], &lists, &SplitSpec::new(5), &MatrixOptions::default());
        ensure!(results.len() == k * 2 * 2 * 5, "{} cells for {k} corpora", results.len());
        let distinct: BTreeSet<_> =
            results.iter().map(|r| (r.corpus.clone(), r.classifier, r.features, r.stopwords)).collect();
        ensure!(distinct.len() == results.len(), "duplicate cells");
    }
    let a = results_csv(&run_matrix(&corpora, &lists, &SplitSpec::new(99), &MatrixOptions::default()));
    let b = results_csv(&run_matrix(&corpora, &lists, &SplitSpec::new(99), &MatrixOptions::default()));
    ensure!(strip_time(&a) == strip_time(&b), "same seed, different results");
    Ok("3/4 = 0.75, 75/25 split, 20·|corpora| cells, seeded CSV stable".into())
}

// ---------------------------------------------------------------- 7

fn stopword_neutrality() -> Result<String, String> {
    let lists = StopwordLists::new(
        StopwordList::bundled_msa(),
        StopwordList::new("corpus_based", ListKind::CorpusBased, ["الفيلم", "ده", "في", "من"]),
        StopwordList::new("egyptian_general", ListKind::EgyptianGeneral, ["بس", "اوي", "ده", "دي", "مش"]),
    );
    let positive = ["ممتاز", "رائع", "تحفة"];
    let negative = ["سيء", "فظيع", "ممل"];
    let filler = ["في", "من", "على", "بس", "اوي", "ده", "دي", "الفيلم", "عن", "مع"];
    for w in positive.iter().chain(&negative) {
        for mode in StopwordMode::ALL {
            ensure!(lists.get(mode).is_none_or(|l| !l.contains(w)), "{w} is in the {mode} list");
        }
    }

    let lex = EmoticonLexicon::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let documents: Vec<Document> = (0..120)
        .map(|i| {
            let (label, own) = if i % 2 == 0 { (Label::Positive, &positive) } else { (Label::Negative, &negative) };
            let mut words: Vec<&str> = (0..rng.gen_range(2..6)).map(|_| filler[rng.gen_range(0..filler.len())]).collect();
            words.push(own[rng.gen_range(0..own.len())]);
            words.push(own[rng.gen_range(0..own.len())]);
            Document::new(format!("s{i}"), Source::Facebook, words.join(" "), label, &lex)
        })
        .collect();
    let corpus = Corpus { name: "separable".into(), documents };

    let results = run_matrix(std::slice::from_ref(&corpus), &lists, &SplitSpec::new(21), &MatrixOptions::default());
    let nb_unigram: Vec<_> = results
        .iter()
        .filter(|r| r.classifier == arabic_osn::classify::ClassifierKind::NaiveBayes && r.features == FeatureMode::Unigram)
        .collect();
    ensure!(nb_unigram.len() == 5, "{} NB/unigram cells", nb_unigram.len());
    let mut accuracies = Vec::new();
    for r in &nb_unigram {
        let m = r.outcome.as_ref().map_err(|e| e.clone())?;
        if r.stopwords != StopwordMode::Without {
            ensure!(m.tokens_after < m.tokens_before, "{} removed nothing", r.stopwords);
        }
        accuracies.push(m.accuracy.to_bits());
    }
    ensure!(accuracies.windows(2).all(|w| w[0] == w[1]), "accuracies differ: {accuracies:?}");

    let tokens: Vec<Token> = corpus.documents.iter().flat_map(|d| d.tokens.clone()).collect();
    let removed = |l: &StopwordList| tokens.len() - remove_stopwords(&tokens, l).len();
    let (msa, egy, all) = (removed(&lists.msa), removed(&lists.egyptian_general), removed(&lists.all_lists));
    ensure!(all >= msa && all >= egy, "combined removed {all}, constituents {msa} and {egy}");

    // The same monotonicity for arbitrary pairs of lists.
    let vocab: Vec<&str> = filler.iter().chain(&positive).chain(&negative).copied().collect();
    for _ in 0..500 {
        let pick = |rng: &mut ChaCha8Rng| -> Vec<&str> { vocab.iter().copied().filter(|_| rng.gen_bool(0.3)).collect() };
        let a = StopwordList::new("a", ListKind::MsaGeneral, pick(&mut rng));
        let b = StopwordList::new("b", ListKind::EgyptianGeneral, pick(&mut rng));
        let ab = arabic_osn::stopgen::combine_lists(&a, &b);
        ensure!(removed(&ab) >= removed(&a).max(removed(&b)), "combined list removed fewer tokens");
    }
    Ok(format!(
        "NB/unigram accuracy {} in all modes; removed msa {msa}, egyptian {egy}, combined {all}",
        f64::from_bits(accuracies[0])
    ))
}

// ---------------------------------------------------------------- 8

fn entropy_values() -> Result<String, String> {
    let h = |d: &[f64]| entropy(d).map_err(|e| e.to_string());
    ensure!(h(&[0.5, 0.5])? == 1.0, "entropy(0.5, 0.5) = {}", h(&[0.5, 0.5])?);
    ensure!(h(&[1.0, 0.0])? == 0.0, "entropy(1, 0) = {}", h(&[1.0, 0.0])?);
    let v = h(&[0.75, 0.25])?;
    ensure!((v - 0.811278).abs() <= ENTROPY_TOLERANCE, "entropy(0.75, 0.25) = {v}");
    Ok(format!("entropy(0.75, 0.25) = {v:.6}"))
}
