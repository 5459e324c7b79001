//! Sentence-structure hate-speech detection and target analytics.
//!
//! The matcher looks for posts shaped *subject, optional intensifiers,
//! intent phrase, hate target* ("I really hate black people"), rejecting
//! negated candidates ("I don't hate X") and excluded pseudo-targets
//! ("I hate following people"). Targets come from two templates: the literal
//! `<word> people` pattern and a scored hate-term lexicon filtered by an
//! offensiveness threshold. Detected targets are categorized via a manual
//! label map and aggregated into ranked report tables (top expressions, top
//! targets, category distribution, template split, labeled coverage).
//!
//! Modules:
//! - [`normalize`]: deterministic tokenizer, the single text contract
//! - [`lexicon`]: vocabulary loading, validation and the threshold
//! - [`category`]: the ten-way target taxonomy and bundled labels
//! - [`matcher`]: the expression grammar over token streams
//! - [`corpus`]: JSON-Lines corpus and match-file I/O
//! - [`analytics`]: mergeable post-level counters and report tables
//! - [`report`]: the combined report document (JSON + text)
//! - [`oracle`]: brute-force reference matcher and ground-truth generator
//! - [`scan`]: the streaming, multi-worker scan pipeline
//!
//! Corpora are expected to be pre-filtered to English; no language
//! detection happens here.

pub mod analytics;
pub mod category;
pub mod corpus;
pub mod lexicon;
pub mod matcher;
pub mod normalize;
pub mod oracle;
pub mod report;
pub mod scan;

pub use analytics::{
    coverage, reservoir_sample, summarize, template_split, top_table, Dimension, ReportRow,
    ReportTable, ScanSummary, TemplateSplit,
};
pub use category::Category;
pub use corpus::{
    read_corpus, read_matches, write_matches, CorpusError, CorpusReader, ParseMode, PostRecord,
};
pub use lexicon::{
    default_category_map, load_lexicons, CategoryMap, IntentPhrase, LexiconError, LexiconPaths,
    LexiconSet, ScoredTerm, DEFAULT_THRESHOLD,
};
pub use matcher::{expression_breakdown, match_post, HateMatch, Matcher, MatcherConfig, Template};
pub use normalize::{normalize_phrase, tokenize, TokenStream};
pub use oracle::{
    generate_corpus, oracle_match, read_labeled_corpus, write_labeled_corpus, CorpusGenerator,
    ExpectedMatch, LabeledPost, SynthError, SynthSpec, TruthLabel,
};
pub use report::{build_report, Report, ReportTables};
pub use scan::{scan_corpus, ScanError, ScanOptions, ScanOutcome};
