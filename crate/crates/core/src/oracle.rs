//! Independent reference matcher and labeled synthetic-corpus generator.
//!
//! [`oracle_match`] reimplements the matching contract by exhaustive
//! enumeration: every token position is tried as a subject, every gap size
//! in order, and intent/target phrases are found by linear scans over the
//! lexicon vectors rather than the matcher's set probes. It shares only the
//! lexicon loader and the tokenizer with the production matcher; the
//! matching logic itself is written twice on purpose, as a standing
//! regression oracle.
//!
//! [`generate_corpus`] emits deterministic ground-truth corpora: positives
//! assembled from the grammar, near-misses that each break exactly one rule,
//! and distractor word salads. Ground truth assumes the generating lexicon's
//! threshold and the default matcher config.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::Category;
use crate::corpus::{CorpusError, PostRecord};
use crate::lexicon::{LexiconSet, ScoredTerm};
use crate::matcher::{HateMatch, MatcherConfig, Template};
use crate::normalize::tokenize;

/// Brute-force reference implementation of post matching. Intended for
/// posts of at most a couple hundred tokens; enumeration is quadratic.
pub fn oracle_match(post: &PostRecord, lex: &LexiconSet, cfg: MatcherConfig) -> Vec<HateMatch> {
    let tokens = tokenize(&post.text);
    let texts = tokens.texts();
    let threshold = cfg.threshold_override.unwrap_or(lex.threshold());
    let active = lex.active_terms_at(threshold);
    let mut out = Vec::new();
    let mut i = 0;
    while i < texts.len() {
        if lex.subjects().contains(texts[i].as_str()) {
            if let Some(m) = attempt(&post.id, texts, i, lex, cfg, &active) {
                i = m.span.1;
                out.push(m);
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Longest intent phrase at `pos` by linear scan over every phrase.
fn intent_len_at(texts: &[String], pos: usize, lex: &LexiconSet) -> Option<usize> {
    lex.intents()
        .iter()
        .filter(|phrase| {
            pos + phrase.len() <= texts.len() && texts[pos..pos + phrase.len()] == phrase[..]
        })
        .map(Vec::len)
        .max()
}

fn attempt(
    post_id: &str,
    texts: &[String],
    subject: usize,
    lex: &LexiconSet,
    cfg: MatcherConfig,
    active: &[&ScoredTerm],
) -> Option<HateMatch> {
    // Enumerate gap sizes from zero upward. The first gap size at which an
    // intent phrase matches is the committed decomposition; a negator or a
    // non-intensifier anywhere in the gap kills the whole candidate.
    let mut committed = None;
    'gaps: for gap in 0..=cfg.max_intensifiers {
        let intent_pos = subject + 1 + gap;
        if intent_pos >= texts.len() {
            break;
        }
        for q in (subject + 1)..intent_pos {
            if intent_len_at(texts, q, lex).is_some() {
                // an earlier position already carried an intent; the
                // candidate was committed there
                break 'gaps;
            }
            let tok = texts[q].as_str();
            if lex.negators().contains(tok) || !lex.intensifiers().contains(tok) {
                break 'gaps;
            }
        }
        if let Some(len) = intent_len_at(texts, intent_pos, lex) {
            committed = Some((intent_pos, len));
            break;
        }
    }
    let (intent_pos, intent_len) = committed?;
    let (target, template, end) = target_at(texts, intent_pos + intent_len, lex, cfg, active)?;
    Some(HateMatch {
        post_id: post_id.to_string(),
        expression: texts[subject..intent_pos + intent_len].join(" "),
        target: target.clone(),
        template,
        category: lex.categorize(&target),
        span: (subject, end),
    })
}

/// Target resolution by scanning the full active-term list, then the
/// `<word> people` template.
fn target_at(
    texts: &[String],
    pos: usize,
    lex: &LexiconSet,
    cfg: MatcherConfig,
    active: &[&ScoredTerm],
) -> Option<(String, Template, usize)> {
    let mut best: Option<&ScoredTerm> = None;
    for term in active {
        let len = term.phrase.len();
        if pos + len <= texts.len()
            && texts[pos..pos + len] == term.phrase[..]
            && best.is_none_or(|b| len > b.phrase.len())
        {
            best = Some(term);
        }
    }
    if let Some(term) = best {
        return Some((term.text(), Template::Lexicon, pos + term.phrase.len()));
    }
    if pos + 1 < texts.len() && texts[pos + 1] == "people" {
        let word = texts[pos].as_str();
        if !lex.exclusions().contains(word)
            && !word.chars().all(char::is_numeric)
            && !(cfg.gerund_filter && word.ends_with("ing"))
        {
            return Some((format!("{word} people"), Template::People, pos + 2));
        }
    }
    None
}

/// Synthetic-corpus shape: post count, class mix, seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub n_posts: usize,
    pub positive_rate: f64,
    pub near_miss_rate: f64,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("rates must lie in [0,1] and sum to at most 1 (positive {positive}, near-miss {near_miss})")]
    InvalidRates { positive: f64, near_miss: f64 },
    #[error("lexicon leaves no usable {0} vocabulary for the generator")]
    NoVocabulary(&'static str),
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let ok = |r: f64| (0.0..=1.0).contains(&r);
        if !ok(self.positive_rate)
            || !ok(self.near_miss_rate)
            || self.positive_rate + self.near_miss_rate > 1.0
        {
            return Err(SynthError::InvalidRates {
                positive: self.positive_rate,
                near_miss: self.near_miss_rate,
            });
        }
        Ok(())
    }
}

/// Ground-truth class of a generated post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruthLabel {
    #[serde(rename = "positive")]
    Positive,
    #[serde(rename = "nearmiss")]
    NearMiss,
    #[serde(rename = "distractor")]
    Distractor,
}

/// The match a positive post is expected to produce (all fields of the
/// match record except the post id).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedMatch {
    pub expression: String,
    pub target: String,
    pub template: Template,
    pub category: Category,
    pub span: (usize, usize),
}

impl ExpectedMatch {
    pub fn agrees_with(&self, m: &HateMatch) -> bool {
        self.expression == m.expression
            && self.target == m.target
            && self.template == m.template
            && self.category == m.category
            && self.span == m.span
    }
}

/// A corpus record plus its ground-truth label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPost {
    #[serde(flatten)]
    pub post: PostRecord,
    pub label: TruthLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedMatch>,
}

/// Words used for padding, distractor salads and non-intensifier gap
/// inserts. Filtered against the lexicon at generator construction so no
/// entry collides with any matcher vocabulary.
const FILLER_WORDS: &[&str] = &[
    "today", "tomorrow", "weather", "coffee", "homework", "traffic", "morning", "evening",
    "monday", "deadline", "meeting", "music", "playlist", "season", "winter", "summer", "pizza",
    "laundry", "commute", "subway", "email", "schedule", "workout", "garden", "window", "kitchen",
    "library", "weekend", "holiday", "ticket", "airport", "luggage", "battery", "charger",
    "umbrella", "puddle", "sidewalk", "elevator", "stairs", "printer", "keyboard", "monitor",
    "notebook", "pencil", "backpack", "bottle", "sandwich", "banana", "apple", "orange",
];

/// Extra first words for `<word> people` targets beyond those recovered
/// from the category map. Deliberately unlabeled so synthetic corpora
/// exercise the `Other` fallback and partial coverage.
const EXTRA_TARGET_WORDS: &[&str] = &[
    "loud", "messy", "bossy", "clingy", "flaky", "nosy", "smug", "petty",
];

/// Deterministic generator over [`LabeledPost`]s. Construct via
/// [`generate_corpus`].
pub struct CorpusGenerator<'a> {
    lex: &'a LexiconSet,
    spec: SynthSpec,
    rng: ChaCha8Rng,
    produced: usize,
    subjects: Vec<String>,
    intensifiers: Vec<String>,
    negators: Vec<String>,
    intents: Vec<Vec<String>>,
    safe_exclusions: Vec<String>,
    lexicon_targets: Vec<Vec<String>>,
    people_words: Vec<String>,
    fillers: Vec<String>,
}

/// Build the deterministic ground-truth corpus stream for `spec`.
pub fn generate_corpus<'a>(
    spec: SynthSpec,
    lex: &'a LexiconSet,
) -> Result<CorpusGenerator<'a>, SynthError> {
    spec.validate()?;
    // every token the matcher could react to; padding must avoid them all
    let mut reserved: BTreeSet<&str> = BTreeSet::new();
    reserved.extend(lex.subjects().iter().map(String::as_str));
    reserved.extend(lex.intensifiers().iter().map(String::as_str));
    reserved.extend(lex.negators().iter().map(String::as_str));
    reserved.extend(lex.exclusions().iter().map(String::as_str));
    reserved.extend(lex.intents().iter().flatten().map(String::as_str));
    reserved.extend(lex.scored_terms().iter().flat_map(|t| &t.phrase).map(String::as_str));
    reserved.insert("people");

    let fillers: Vec<String> = FILLER_WORDS
        .iter()
        .filter(|w| !reserved.contains(**w))
        .map(|w| w.to_string())
        .collect();
    if fillers.len() < 8 {
        return Err(SynthError::NoVocabulary("filler"));
    }

    let mut people_words: Vec<String> = lex
        .category_map()
        .iter()
        .filter_map(|(target, _)| target.strip_suffix(" people"))
        .filter(|w| !w.contains(' '))
        .chain(EXTRA_TARGET_WORDS.iter().copied())
        .filter(|w| {
            !reserved.contains(*w)
                && !w.ends_with("ing")
                && !w.chars().all(char::is_numeric)
        })
        .map(str::to_string)
        .collect();
    people_words.sort();
    people_words.dedup();

    let lexicon_targets: Vec<Vec<String>> = lex
        .active_terms()
        .iter()
        .map(|t| t.phrase.clone())
        .collect();
    if people_words.is_empty() && lexicon_targets.is_empty() {
        return Err(SynthError::NoVocabulary("target"));
    }

    let active_first_tokens: BTreeSet<&String> =
        lexicon_targets.iter().filter_map(|p| p.first()).collect();
    let safe_exclusions: Vec<String> = lex
        .exclusions()
        .iter()
        .filter(|w| !active_first_tokens.contains(w))
        .cloned()
        .collect();

    Ok(CorpusGenerator {
        lex,
        spec,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        produced: 0,
        subjects: lex.subjects().iter().cloned().collect(),
        intensifiers: lex.intensifiers().iter().cloned().collect(),
        negators: lex.negators().iter().cloned().collect(),
        intents: lex.intents().iter().cloned().collect(),
        safe_exclusions,
        lexicon_targets,
        people_words,
        fillers,
    })
}

/// The grammar slots of a positive before it is rendered or mutated.
struct Assembly {
    prefix: Vec<String>,
    subject: String,
    intensifiers: Vec<String>,
    intent: Vec<String>,
    target: Vec<String>,
    template: Template,
    suffix: Vec<String>,
}

impl Assembly {
    fn tokens(&self) -> Vec<String> {
        let mut tokens = self.prefix.clone();
        tokens.push(self.subject.clone());
        tokens.extend(self.intensifiers.iter().cloned());
        tokens.extend(self.intent.iter().cloned());
        tokens.extend(self.target.iter().cloned());
        tokens.extend(self.suffix.iter().cloned());
        tokens
    }

    fn expected(&self, lex: &LexiconSet) -> ExpectedMatch {
        let start = self.prefix.len();
        let end = start + 1 + self.intensifiers.len() + self.intent.len() + self.target.len();
        let mut expression = vec![self.subject.clone()];
        expression.extend(self.intensifiers.iter().cloned());
        expression.extend(self.intent.iter().cloned());
        let target = self.target.join(" ");
        ExpectedMatch {
            expression: expression.join(" "),
            category: lex.categorize(&target),
            target,
            template: self.template,
            span: (start, end),
        }
    }
}

impl CorpusGenerator<'_> {
    fn pick<'v, T>(rng: &mut ChaCha8Rng, pool: &'v [T]) -> &'v T {
        &pool[rng.random_range(0..pool.len())]
    }

    fn filler_run(&mut self, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
        let n = self.rng.random_range(range);
        (0..n)
            .map(|_| Self::pick(&mut self.rng, &self.fillers).clone())
            .collect()
    }

    fn assemble_positive(&mut self) -> Assembly {
        let prefix = if self.rng.random_bool(0.3) {
            self.filler_run(1..=2)
        } else {
            Vec::new()
        };
        let subject = Self::pick(&mut self.rng, &self.subjects).clone();
        let n_ints = self.rng.random_range(0..=2);
        let intensifiers: Vec<String> = (0..n_ints)
            .map(|_| Self::pick(&mut self.rng, &self.intensifiers).clone())
            .collect();
        let intent = Self::pick(&mut self.rng, &self.intents).clone();
        let use_lexicon = !self.lexicon_targets.is_empty()
            && (self.people_words.is_empty() || self.rng.random_bool(0.5));
        let (target, template) = if use_lexicon {
            (
                Self::pick(&mut self.rng, &self.lexicon_targets).clone(),
                Template::Lexicon,
            )
        } else {
            let word = Self::pick(&mut self.rng, &self.people_words).clone();
            (vec![word, "people".to_string()], Template::People)
        };
        let suffix = if self.rng.random_bool(0.5) {
            self.filler_run(1..=3)
        } else {
            Vec::new()
        };
        Assembly {
            prefix,
            subject,
            intensifiers,
            intent,
            target,
            template,
            suffix,
        }
    }

    /// Break exactly one grammar rule of a freshly assembled positive.
    fn near_miss_tokens(&mut self) -> Vec<String> {
        let assembly = self.assemble_positive();
        let mut mutation = self.rng.random_range(0..4u8);
        if mutation == 1 && self.safe_exclusions.is_empty() {
            mutation = 3;
        }
        let gap_slot = self.rng.random_range(0..=assembly.intensifiers.len());
        let mut tokens = assembly.tokens();
        let subject_idx = assembly.prefix.len();
        match mutation {
            // negator in the gap
            0 => {
                let negator = Self::pick(&mut self.rng, &self.negators).clone();
                tokens.insert(subject_idx + 1 + gap_slot, negator);
            }
            // target word replaced by an exclusion word
            1 => {
                let exclusion = Self::pick(&mut self.rng, &self.safe_exclusions).clone();
                let target_idx =
                    subject_idx + 1 + assembly.intensifiers.len() + assembly.intent.len();
                match assembly.template {
                    Template::People => tokens[target_idx] = exclusion,
                    Template::Lexicon => {
                        tokens.splice(
                            target_idx..target_idx + assembly.target.len(),
                            [exclusion],
                        );
                    }
                }
            }
            // no subject at all
            2 => {
                tokens.remove(subject_idx);
            }
            // a non-intensifier token in the gap
            _ => {
                let filler = Self::pick(&mut self.rng, &self.fillers).clone();
                tokens.insert(subject_idx + 1 + gap_slot, filler);
            }
        }
        tokens
    }

    fn distractor_tokens(&mut self) -> Vec<String> {
        let mut tokens = self.filler_run(4..=12);
        // sprinkle in grammar-adjacent tokens that must not complete
        if self.rng.random_bool(0.2) {
            let subject = Self::pick(&mut self.rng, &self.subjects).clone();
            let at = self.rng.random_range(0..=tokens.len());
            tokens.insert(at, subject);
        }
        if self.rng.random_bool(0.15) {
            let at = self.rng.random_range(0..=tokens.len());
            tokens.insert(at, "people".to_string());
        }
        tokens
    }

    fn render(&mut self, tokens: &[String]) -> String {
        let mut text = tokens.join(" ");
        if let Some(first) = text.chars().next() {
            let upper: String = first.to_uppercase().collect();
            text = format!("{upper}{}", &text[first.len_utf8()..]);
        }
        if self.rng.random_bool(0.3) {
            text.push(if self.rng.random_bool(0.5) { '!' } else { '.' });
        }
        text
    }
}

impl Iterator for CorpusGenerator<'_> {
    type Item = LabeledPost;

    fn next(&mut self) -> Option<LabeledPost> {
        if self.produced >= self.spec.n_posts {
            return None;
        }
        let id = format!("s{:07}", self.produced);
        self.produced += 1;
        let class = self.rng.random_range(0.0..1.0);
        let (label, tokens, expected) = if class < self.spec.positive_rate {
            let assembly = self.assemble_positive();
            let expected = assembly.expected(self.lex);
            (TruthLabel::Positive, assembly.tokens(), Some(expected))
        } else if class < self.spec.positive_rate + self.spec.near_miss_rate {
            (TruthLabel::NearMiss, self.near_miss_tokens(), None)
        } else {
            (TruthLabel::Distractor, self.distractor_tokens(), None)
        };
        let text = self.render(&tokens);
        Some(LabeledPost {
            post: PostRecord::new(id, text),
            label,
            expected,
        })
    }
}

/// Write a ground-truth corpus as JSON-Lines. Returns the record count.
pub fn write_labeled_corpus<I, P>(posts: I, path: P) -> io::Result<u64>
where
    I: IntoIterator<Item = LabeledPost>,
    P: AsRef<Path>,
{
    let mut out = BufWriter::new(File::create(path.as_ref())?);
    let mut written = 0u64;
    for post in posts {
        let line = serde_json::to_string(&post).expect("labeled post serializes");
        writeln!(out, "{line}")?;
        written += 1;
    }
    out.flush()?;
    Ok(written)
}

/// Read a ground-truth corpus written by [`write_labeled_corpus`].
pub fn read_labeled_corpus<P: AsRef<Path>>(path: P) -> Result<Vec<LabeledPost>, CorpusError> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|source| CorpusError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let post: LabeledPost = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        out.push(post);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::match_post;

    fn lex() -> LexiconSet {
        LexiconSet::bundled()
    }

    fn spec(n: usize, pos: f64, near: f64, seed: u64) -> SynthSpec {
        SynthSpec {
            n_posts: n,
            positive_rate: pos,
            near_miss_rate: near,
            seed,
        }
    }

    #[test]
    fn oracle_agrees_on_hand_cases() {
        let lex = lex();
        let cfg = MatcherConfig::default();
        let cases = [
            "I hate stupid people",
            "",
            "I really hate black people",
            "I don't hate gay people",
            "I hate following people",
            "i'm so sick of fake people",
            "she hates rude people",
            "tbh I hate nigga drama",
            "I hate porch monkey insults and I can't stand paki shops",
            "I hate fake people and I really hate rude people",
            "I really truly honestly absolutely hate fake people",
            "I hate 2 people",
            "I hate people",
        ];
        for text in cases {
            let post = PostRecord::new("t", text);
            assert_eq!(
                oracle_match(&post, &lex, cfg),
                match_post(&post, &lex, cfg),
                "disagreement on {text:?}"
            );
        }
        let post = PostRecord::new("t", "I hate stupid people");
        let ms = oracle_match(&post, &lex, cfg);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].target, "stupid people");
    }

    #[test]
    fn invalid_rates_rejected() {
        let lex = lex();
        assert!(generate_corpus(spec(10, 0.7, 0.4, 1), &lex).is_err());
        assert!(generate_corpus(spec(10, -0.1, 0.0, 1), &lex).is_err());
        assert!(generate_corpus(spec(10, 0.0, 1.5, 1), &lex).is_err());
        assert!(generate_corpus(spec(10, 1.0, 0.0, 1), &lex).is_ok());
    }

    #[test]
    fn generator_is_deterministic() {
        let lex = lex();
        let once: Vec<String> = generate_corpus(spec(200, 0.4, 0.3, 99), &lex)
            .unwrap()
            .map(|p| serde_json::to_string(&p).unwrap())
            .collect();
        let again: Vec<String> = generate_corpus(spec(200, 0.4, 0.3, 99), &lex)
            .unwrap()
            .map(|p| serde_json::to_string(&p).unwrap())
            .collect();
        assert_eq!(once, again);
        let other: Vec<String> = generate_corpus(spec(200, 0.4, 0.3, 100), &lex)
            .unwrap()
            .map(|p| serde_json::to_string(&p).unwrap())
            .collect();
        assert_ne!(once, other);
    }

    #[test]
    fn all_positive_corpus_matches_expectations() {
        let lex = lex();
        let cfg = MatcherConfig::default();
        for labeled in generate_corpus(spec(300, 1.0, 0.0, 7), &lex).unwrap() {
            let expected = labeled.expected.expect("positives carry expectations");
            let matches = match_post(&labeled.post, &lex, cfg);
            assert_eq!(matches.len(), 1, "post {:?}", labeled.post.text);
            assert!(
                expected.agrees_with(&matches[0]),
                "expected {expected:?}, got {:?} on {:?}",
                matches[0],
                labeled.post.text
            );
        }
    }

    #[test]
    fn no_positive_corpus_matches_nothing() {
        let lex = lex();
        let cfg = MatcherConfig::default();
        for labeled in generate_corpus(spec(300, 0.0, 0.0, 11), &lex).unwrap() {
            assert_eq!(labeled.label, TruthLabel::Distractor);
            assert!(match_post(&labeled.post, &lex, cfg).is_empty());
        }
    }

    #[test]
    fn near_misses_match_neither_implementation() {
        let lex = lex();
        let cfg = MatcherConfig::default();
        for labeled in generate_corpus(spec(500, 0.0, 1.0, 13), &lex).unwrap() {
            assert_eq!(labeled.label, TruthLabel::NearMiss);
            let production = match_post(&labeled.post, &lex, cfg);
            let reference = oracle_match(&labeled.post, &lex, cfg);
            assert!(
                production.is_empty() && reference.is_empty(),
                "near-miss matched: {:?} -> {production:?} / {reference:?}",
                labeled.post.text
            );
        }
    }

    #[test]
    fn mixed_corpus_oracle_parity() {
        let lex = lex();
        let cfg = MatcherConfig::default();
        for labeled in generate_corpus(spec(500, 0.35, 0.35, 17), &lex).unwrap() {
            let production = match_post(&labeled.post, &lex, cfg);
            let reference = oracle_match(&labeled.post, &lex, cfg);
            assert_eq!(production, reference, "on {:?}", labeled.post.text);
        }
    }

    #[test]
    fn labeled_corpus_round_trips_and_reads_as_plain_corpus() {
        let lex = lex();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("truth.jsonl");
        let posts: Vec<LabeledPost> =
            generate_corpus(spec(50, 0.5, 0.25, 3), &lex).unwrap().collect();
        let n = write_labeled_corpus(posts.clone(), &path).unwrap();
        assert_eq!(n, 50);
        assert_eq!(read_labeled_corpus(&path).unwrap(), posts);
        let plain = crate::corpus::read_corpus(&path).unwrap();
        assert_eq!(plain.len(), 50);
        assert_eq!(plain[0], posts[0].post);
    }
}
