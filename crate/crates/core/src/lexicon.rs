//! Loading and validation of the matcher's vocabulary resources.
//!
//! Five phrase-list files (subjects, negators, intensifiers, intents,
//! exclusions), a scored-term table, and a target category map together form
//! a [`LexiconSet`]. All entries are normalized exactly like post text
//! (lowercased, curly apostrophes straightened), so lexicon lookups and
//! tokenizer output always agree. A `LexiconSet` is immutable once built and
//! can be shared read-only across scan workers.
//!
//! File formats:
//! - phrase lists: UTF-8, one phrase per line, `#` starts a comment, blank
//!   lines ignored
//! - scored terms: tab-separated `phrase<TAB>score<TAB>category?` with a
//!   required `phrase\tscore\tcategory` header; score is 0..=100
//! - category map: tab-separated `target<TAB>category` with a required
//!   `target\tcategory` header

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::category::{Category, DEFAULT_CATEGORY_MAP};
use crate::normalize::tokenize;

/// Default offensiveness threshold: terms scoring strictly above it are
/// matched as targets.
pub const DEFAULT_THRESHOLD: u8 = 50;

const BUNDLED_SUBJECTS: &str = include_str!("../data/lexicons/subjects.txt");
const BUNDLED_NEGATORS: &str = include_str!("../data/lexicons/negators.txt");
const BUNDLED_INTENSIFIERS: &str = include_str!("../data/lexicons/intensifiers.txt");
const BUNDLED_INTENTS: &str = include_str!("../data/lexicons/intents.txt");
const BUNDLED_EXCLUSIONS: &str = include_str!("../data/lexicons/exclusions.txt");
const BUNDLED_SCORED_TERMS: &str = include_str!("../data/lexicons/scored_terms.tsv");

/// Errors raised while loading or validating lexicon files.
#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed entry at {file}:{line}: {reason}")]
    Malformed {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("duplicate entry at {file}:{line}: {entry:?}")]
    Duplicate {
        file: String,
        line: usize,
        entry: String,
    },
    #[error("intent lexicon {file} is empty")]
    EmptyIntents { file: String },
    #[error("subject lexicon {file} must contain \"i\" and \"i'm\"")]
    MissingRequiredSubjects { file: String },
    #[error("token {token:?} appears in both intensifiers and negators")]
    VocabularyConflict { token: String },
    #[error("threshold {0} out of range 0..=100")]
    ThresholdOutOfRange(u32),
}

/// A validated intent phrase: one to four lowercase word tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntentPhrase {
    tokens: Vec<String>,
}

impl IntentPhrase {
    /// Validate a token list as an intent phrase.
    pub fn new(tokens: Vec<String>) -> Result<Self, String> {
        if tokens.is_empty() || tokens.len() > 4 {
            return Err(format!(
                "intent phrase must have 1..=4 tokens, got {}",
                tokens.len()
            ));
        }
        for t in &tokens {
            check_lexical_token(t)?;
        }
        Ok(IntentPhrase { tokens })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Space-joined phrase text.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// A hate term with its offensiveness score and optional category tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredTerm {
    /// One to three lowercase tokens.
    pub phrase: Vec<String>,
    /// 0..=100; higher is more offensive.
    pub offensiveness: u8,
    /// Source category tags; may be empty. Target categorization goes
    /// through the category map, not these.
    pub categories: Vec<Category>,
}

impl ScoredTerm {
    /// Space-joined phrase text.
    pub fn text(&self) -> String {
        self.phrase.join(" ")
    }
}

/// Normalized target string -> category.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CategoryMap {
    entries: BTreeMap<String, Category>,
}

impl CategoryMap {
    pub fn get(&self, target: &str) -> Option<Category> {
        self.entries.get(target).copied()
    }

    pub fn contains(&self, target: &str) -> bool {
        self.entries.contains_key(target)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Category)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// The bundled default category map: hand labels for common targets plus
/// labels for the bundled scored terms.
pub fn default_category_map() -> CategoryMap {
    parse_category_map("<bundled categories>", DEFAULT_CATEGORY_MAP)
        .expect("bundled category map is valid")
}

/// Locations of the seven lexicon files.
#[derive(Debug, Clone)]
pub struct LexiconPaths {
    pub subjects: PathBuf,
    pub negators: PathBuf,
    pub intensifiers: PathBuf,
    pub intents: PathBuf,
    pub exclusions: PathBuf,
    pub scored_terms: PathBuf,
    pub categories: PathBuf,
}

impl LexiconPaths {
    /// Conventional file names inside one directory: `subjects.txt`,
    /// `negators.txt`, `intensifiers.txt`, `intents.txt`, `exclusions.txt`,
    /// `scored_terms.tsv`, `categories.tsv`.
    pub fn from_dir<P: AsRef<Path>>(dir: P) -> Self {
        let dir = dir.as_ref();
        LexiconPaths {
            subjects: dir.join("subjects.txt"),
            negators: dir.join("negators.txt"),
            intensifiers: dir.join("intensifiers.txt"),
            intents: dir.join("intents.txt"),
            exclusions: dir.join("exclusions.txt"),
            scored_terms: dir.join("scored_terms.tsv"),
            categories: dir.join("categories.tsv"),
        }
    }
}

/// All vocabulary the matcher consumes. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconSet {
    subjects: BTreeSet<String>,
    negators: BTreeSet<String>,
    intensifiers: BTreeSet<String>,
    intents: BTreeSet<Vec<String>>,
    max_intent_len: usize,
    exclusions: BTreeSet<String>,
    scored_terms: Vec<ScoredTerm>,
    max_term_len: usize,
    category_map: CategoryMap,
    threshold: u8,
}

impl LexiconSet {
    /// Load and validate all lexicon files. The threshold starts at the
    /// default 50; adjust with [`LexiconSet::with_threshold`].
    pub fn load(paths: &LexiconPaths) -> Result<Self, LexiconError> {
        let subjects = parse_token_list(&read(&paths.subjects)?, &label(&paths.subjects))?;
        let negators = parse_token_list(&read(&paths.negators)?, &label(&paths.negators))?;
        let intensifiers =
            parse_token_list(&read(&paths.intensifiers)?, &label(&paths.intensifiers))?;
        let intents = parse_intents(&read(&paths.intents)?, &label(&paths.intents))?;
        let exclusions = parse_token_list(&read(&paths.exclusions)?, &label(&paths.exclusions))?;
        let scored_terms =
            parse_scored_terms(&label(&paths.scored_terms), &read(&paths.scored_terms)?)?;
        let category_map = parse_category_map(&label(&paths.categories), &read(&paths.categories)?)?;
        Self::build(
            subjects,
            negators,
            intensifiers,
            intents,
            exclusions,
            scored_terms,
            category_map,
            &label(&paths.intents),
            &label(&paths.subjects),
        )
    }

    /// The lexicons bundled into the library. A working default covering the
    /// common expression forms, and a template for user-maintained lexicon
    /// directories.
    pub fn bundled() -> Self {
        let subjects =
            parse_token_list(BUNDLED_SUBJECTS, "<bundled subjects>").expect("bundled subjects");
        let negators =
            parse_token_list(BUNDLED_NEGATORS, "<bundled negators>").expect("bundled negators");
        let intensifiers = parse_token_list(BUNDLED_INTENSIFIERS, "<bundled intensifiers>")
            .expect("bundled intensifiers");
        let intents = parse_intents(BUNDLED_INTENTS, "<bundled intents>").expect("bundled intents");
        let exclusions = parse_token_list(BUNDLED_EXCLUSIONS, "<bundled exclusions>")
            .expect("bundled exclusions");
        let scored_terms = parse_scored_terms("<bundled scored terms>", BUNDLED_SCORED_TERMS)
            .expect("bundled scored terms");
        let category_map = default_category_map();
        Self::build(
            subjects,
            negators,
            intensifiers,
            intents,
            exclusions,
            scored_terms,
            category_map,
            "<bundled intents>",
            "<bundled subjects>",
        )
        .expect("bundled lexicons are consistent")
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        subjects: BTreeSet<String>,
        negators: BTreeSet<String>,
        intensifiers: BTreeSet<String>,
        intents: Vec<IntentPhrase>,
        exclusions: BTreeSet<String>,
        scored_terms: Vec<ScoredTerm>,
        category_map: CategoryMap,
        intents_label: &str,
        subjects_label: &str,
    ) -> Result<Self, LexiconError> {
        if intents.is_empty() {
            return Err(LexiconError::EmptyIntents {
                file: intents_label.to_string(),
            });
        }
        if !subjects.contains("i") || !subjects.contains("i'm") {
            return Err(LexiconError::MissingRequiredSubjects {
                file: subjects_label.to_string(),
            });
        }
        if let Some(token) = intensifiers.intersection(&negators).next() {
            return Err(LexiconError::VocabularyConflict {
                token: token.clone(),
            });
        }
        let max_intent_len = intents.iter().map(|p| p.tokens().len()).max().unwrap_or(0);
        let intents: BTreeSet<Vec<String>> =
            intents.into_iter().map(|p| p.tokens).collect();
        let max_term_len = scored_terms.iter().map(|t| t.phrase.len()).max().unwrap_or(0);
        let mut scored_terms = scored_terms;
        scored_terms.sort_by(|a, b| a.phrase.cmp(&b.phrase));
        Ok(LexiconSet {
            subjects,
            negators,
            intensifiers,
            intents,
            max_intent_len,
            exclusions,
            scored_terms,
            max_term_len,
            category_map,
            threshold: DEFAULT_THRESHOLD,
        })
    }

    /// Replace the offensiveness threshold. Values above 100 are rejected.
    pub fn with_threshold(mut self, threshold: u32) -> Result<Self, LexiconError> {
        if threshold > 100 {
            return Err(LexiconError::ThresholdOutOfRange(threshold));
        }
        self.threshold = threshold as u8;
        Ok(self)
    }

    pub fn threshold(&self) -> u8 {
        self.threshold
    }

    pub fn subjects(&self) -> &BTreeSet<String> {
        &self.subjects
    }

    pub fn negators(&self) -> &BTreeSet<String> {
        &self.negators
    }

    pub fn intensifiers(&self) -> &BTreeSet<String> {
        &self.intensifiers
    }

    /// Intent phrases as token lists, ordered.
    pub fn intents(&self) -> &BTreeSet<Vec<String>> {
        &self.intents
    }

    pub fn max_intent_len(&self) -> usize {
        self.max_intent_len
    }

    pub fn exclusions(&self) -> &BTreeSet<String> {
        &self.exclusions
    }

    /// All scored terms, sorted by phrase, regardless of threshold.
    pub fn scored_terms(&self) -> &[ScoredTerm] {
        &self.scored_terms
    }

    pub fn max_term_len(&self) -> usize {
        self.max_term_len
    }

    /// Terms scoring strictly above the configured threshold.
    pub fn active_terms(&self) -> Vec<&ScoredTerm> {
        self.active_terms_at(self.threshold)
    }

    /// Terms scoring strictly above `threshold`.
    pub fn active_terms_at(&self, threshold: u8) -> Vec<&ScoredTerm> {
        self.scored_terms
            .iter()
            .filter(|t| t.offensiveness > threshold)
            .collect()
    }

    pub fn category_map(&self) -> &CategoryMap {
        &self.category_map
    }

    /// Category for a normalized target string; `Other` when unmapped.
    pub fn categorize(&self, target: &str) -> Category {
        self.category_map.get(target).unwrap_or(Category::Other)
    }

    /// Whether the target carries an explicit label in the category map
    /// (an explicit `Other` label counts).
    pub fn is_labeled(&self, target: &str) -> bool {
        self.category_map.contains(target)
    }

    /// Write the normalized lexicons back out in the loader's formats.
    /// Loading the written directory reproduces this set (minus comments).
    pub fn save_to_dir<P: AsRef<Path>>(&self, dir: P) -> std::io::Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let write_list = |name: &str, items: &BTreeSet<String>| -> std::io::Result<()> {
            let mut f = fs::File::create(dir.join(name))?;
            for item in items {
                writeln!(f, "{item}")?;
            }
            Ok(())
        };
        write_list("subjects.txt", &self.subjects)?;
        write_list("negators.txt", &self.negators)?;
        write_list("intensifiers.txt", &self.intensifiers)?;
        write_list("exclusions.txt", &self.exclusions)?;
        let mut f = fs::File::create(dir.join("intents.txt"))?;
        for phrase in &self.intents {
            writeln!(f, "{}", phrase.join(" "))?;
        }
        let mut f = fs::File::create(dir.join("scored_terms.tsv"))?;
        writeln!(f, "phrase\tscore\tcategory")?;
        for term in &self.scored_terms {
            let cat = term
                .categories
                .first()
                .map(|c| c.name())
                .unwrap_or_default();
            writeln!(f, "{}\t{}\t{}", term.text(), term.offensiveness, cat)?;
        }
        let mut f = fs::File::create(dir.join("categories.tsv"))?;
        writeln!(f, "target\tcategory")?;
        for (target, cat) in self.category_map.iter() {
            writeln!(f, "{}\t{}", target, cat.name())?;
        }
        Ok(())
    }
}

/// Load and validate all lexicon files at the given paths.
pub fn load_lexicons(paths: &LexiconPaths) -> Result<LexiconSet, LexiconError> {
    LexiconSet::load(paths)
}

fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

/// Strip the comment (from the first `#`) and surrounding whitespace.
/// Returns `None` for lines with no content.
fn content_of(line: &str) -> Option<&str> {
    let line = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let line = line.trim();
    (!line.is_empty()).then_some(line)
}

fn check_lexical_token(token: &str) -> Result<(), String> {
    if token.is_empty() {
        return Err("empty token".to_string());
    }
    if let Some(bad) = token.chars().find(|c| !c.is_alphabetic() && *c != '\'') {
        return Err(format!(
            "token {token:?} contains {bad:?}; only letters and apostrophes are allowed"
        ));
    }
    Ok(())
}

/// Parse a one-token-per-line file.
fn parse_token_list(content: &str, file: &str) -> Result<BTreeSet<String>, LexiconError> {
    let mut out = BTreeSet::new();
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let Some(line) = content_of(raw) else {
            continue;
        };
        let tokens = tokenize(line);
        let malformed = |reason: String| LexiconError::Malformed {
            file: file.to_string(),
            line: line_no,
            reason,
        };
        if tokens.len() != 1 {
            return Err(malformed(format!(
                "expected a single token, got {} in {line:?}",
                tokens.len()
            )));
        }
        let token = tokens.texts()[0].clone();
        check_lexical_token(&token).map_err(malformed)?;
        if !out.insert(token.clone()) {
            return Err(LexiconError::Duplicate {
                file: file.to_string(),
                line: line_no,
                entry: token,
            });
        }
    }
    Ok(out)
}

/// Parse the intent phrase file (one phrase of 1..=4 tokens per line).
fn parse_intents(content: &str, file: &str) -> Result<Vec<IntentPhrase>, LexiconError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let Some(line) = content_of(raw) else {
            continue;
        };
        let tokens = tokenize(line).texts().to_vec();
        let phrase = IntentPhrase::new(tokens).map_err(|reason| LexiconError::Malformed {
            file: file.to_string(),
            line: line_no,
            reason,
        })?;
        if !seen.insert(phrase.tokens().to_vec()) {
            return Err(LexiconError::Duplicate {
                file: file.to_string(),
                line: line_no,
                entry: phrase.text(),
            });
        }
        out.push(phrase);
    }
    Ok(out)
}

/// Parse the scored-term table.
pub(crate) fn parse_scored_terms(
    file: &str,
    content: &str,
) -> Result<Vec<ScoredTerm>, LexiconError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut saw_header = false;
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let Some(line) = content_of(raw) else {
            continue;
        };
        let malformed = |reason: String| LexiconError::Malformed {
            file: file.to_string(),
            line: line_no,
            reason,
        };
        if !saw_header {
            if line != "phrase\tscore\tcategory" {
                return Err(malformed(format!(
                    "expected header \"phrase\\tscore\\tcategory\", got {line:?}"
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(malformed(format!(
                "expected phrase<TAB>score<TAB>category?, got {} fields",
                fields.len()
            )));
        }
        let phrase = tokenize(fields[0]).texts().to_vec();
        if phrase.is_empty() || phrase.len() > 3 {
            return Err(malformed(format!(
                "term phrase must have 1..=3 tokens, got {} in {:?}",
                phrase.len(),
                fields[0]
            )));
        }
        for t in &phrase {
            check_lexical_token(t).map_err(malformed)?;
        }
        let score: u32 = fields[1]
            .trim()
            .parse()
            .map_err(|_| malformed(format!("score {:?} is not an integer", fields[1])))?;
        if score > 100 {
            return Err(malformed(format!("score {score} out of range 0..=100")));
        }
        let categories = match fields.get(2).map(|s| s.trim()) {
            None | Some("") => Vec::new(),
            Some(name) => vec![Category::parse(name)
                .ok_or_else(|| malformed(format!("unknown category {name:?}")))?],
        };
        if !seen.insert(phrase.clone()) {
            return Err(LexiconError::Duplicate {
                file: file.to_string(),
                line: line_no,
                entry: phrase.join(" "),
            });
        }
        out.push(ScoredTerm {
            phrase,
            offensiveness: score as u8,
            categories,
        });
    }
    if !saw_header {
        return Err(LexiconError::Malformed {
            file: file.to_string(),
            line: content.lines().count().max(1),
            reason: "missing \"phrase\\tscore\\tcategory\" header".to_string(),
        });
    }
    Ok(out)
}

/// Parse the target category map.
pub(crate) fn parse_category_map(file: &str, content: &str) -> Result<CategoryMap, LexiconError> {
    let mut entries = BTreeMap::new();
    let mut saw_header = false;
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let Some(line) = content_of(raw) else {
            continue;
        };
        let malformed = |reason: String| LexiconError::Malformed {
            file: file.to_string(),
            line: line_no,
            reason,
        };
        if !saw_header {
            if line != "target\tcategory" {
                return Err(malformed(format!(
                    "expected header \"target\\tcategory\", got {line:?}"
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(malformed(format!(
                "expected target<TAB>category, got {} fields",
                fields.len()
            )));
        }
        let target = tokenize(fields[0]).texts().join(" ");
        if target.is_empty() {
            return Err(malformed("empty target".to_string()));
        }
        let category = Category::parse(fields[1].trim())
            .ok_or_else(|| malformed(format!("unknown category {:?}", fields[1])))?;
        if entries.insert(target.clone(), category).is_some() {
            return Err(LexiconError::Duplicate {
                file: file.to_string(),
                line: line_no,
                entry: target,
            });
        }
    }
    if !saw_header {
        return Err(LexiconError::Malformed {
            file: file.to_string(),
            line: content.lines().count().max(1),
            reason: "missing \"target\\tcategory\" header".to_string(),
        });
    }
    Ok(CategoryMap { entries })
}

impl fmt::Display for LexiconSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} subjects, {} negators, {} intensifiers, {} intents, {} exclusions, \
             {} scored terms ({} active at threshold {}), {} labeled targets",
            self.subjects.len(),
            self.negators.len(),
            self.intensifiers.len(),
            self.intents.len(),
            self.exclusions.len(),
            self.scored_terms.len(),
            self.active_terms().len(),
            self.threshold,
            self.category_map.len(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn bundled_lexicons_load() {
        let lex = LexiconSet::bundled();
        assert!(lex.subjects().contains("i"));
        assert!(lex.subjects().contains("i'm"));
        assert!(!lex.intents().is_empty());
        assert_eq!(lex.threshold(), 50);
    }

    #[test]
    fn intent_phrase_sizes_cover_multiword_synonyms() {
        let parsed = parse_intents("hate\ncan't stand\ndon't like\nsick of\n", "intents").unwrap();
        let sizes: Vec<usize> = parsed.iter().map(|p| p.tokens().len()).collect();
        assert_eq!(sizes, [1, 2, 2, 2]);
    }

    #[test]
    fn empty_exclusion_file_is_fine() {
        let parsed = parse_token_list("# nothing here\n\n", "exclusions").unwrap();
        assert!(parsed.is_empty());
    }

    #[test]
    fn ten_row_fixture_yields_four_active_terms() {
        // Four of these score strictly above 50.
        let tsv = "phrase\tscore\tcategory\n\
                   alpha\t90\tRace\n\
                   bravo\t80\t\n\
                   charlie\t51\tClass\n\
                   delta\t72\tGender\n\
                   echo\t50\t\n\
                   foxtrot\t39\t\n\
                   golf\t12\tBehavior\n\
                   hotel\t7\t\n\
                   india juliet\t44\t\n\
                   kilo\t0\t\n";
        let terms = parse_scored_terms("fixture", tsv).unwrap();
        assert_eq!(terms.len(), 10);
        let lex = LexiconSet::build(
            set(&["i", "i'm"]),
            set(&["not"]),
            set(&["really"]),
            vec![IntentPhrase::new(vec!["hate".into()]).unwrap()],
            BTreeSet::new(),
            terms,
            CategoryMap::default(),
            "intents",
            "subjects",
        )
        .unwrap();
        assert_eq!(lex.active_terms().len(), 4);
    }

    #[test]
    fn threshold_edges() {
        let lex = LexiconSet::bundled();
        assert!(lex.clone().with_threshold(100).unwrap().active_terms().is_empty());
        let all = lex.clone().with_threshold(0).unwrap();
        // every bundled score is >= 1, so all terms are active at 0
        assert_eq!(all.active_terms().len(), all.scored_terms().len());
        assert!(lex.with_threshold(101).is_err());
    }

    #[test]
    fn active_terms_monotone_in_threshold() {
        let lex = LexiconSet::bundled();
        for t in 0..100u8 {
            let lower: BTreeSet<String> = lex
                .active_terms_at(t)
                .iter()
                .map(|term| term.text())
                .collect();
            let higher: BTreeSet<String> = lex
                .active_terms_at(t + 1)
                .iter()
                .map(|term| term.text())
                .collect();
            assert!(higher.is_subset(&lower), "threshold {t} -> {}", t + 1);
        }
    }

    #[test]
    fn malformed_lines_report_file_and_line() {
        let err = parse_token_list("ok\nbad token\n", "negators.txt").unwrap_err();
        match err {
            LexiconError::Malformed { file, line, .. } => {
                assert_eq!(file, "negators.txt");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected error: {other}"),
        }
        let err = parse_token_list("x\n\n2pac\n", "subjects.txt").unwrap_err();
        assert!(matches!(err, LexiconError::Malformed { line: 3, .. }), "{err}");
    }

    #[test]
    fn duplicates_rejected() {
        let err = parse_token_list("so\nreally\nso\n", "intensifiers.txt").unwrap_err();
        assert!(
            matches!(err, LexiconError::Duplicate { line: 3, ref entry, .. } if entry == "so"),
            "{err}"
        );
        let err = parse_intents("hate\nsick of\nhate\n", "intents.txt").unwrap_err();
        assert!(matches!(err, LexiconError::Duplicate { line: 3, .. }), "{err}");
    }

    #[test]
    fn scored_term_validation() {
        assert!(matches!(
            parse_scored_terms("t", "alpha\t90\t\n").unwrap_err(),
            LexiconError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            parse_scored_terms("t", "phrase\tscore\tcategory\nalpha\t101\t\n").unwrap_err(),
            LexiconError::Malformed { line: 2, .. }
        ));
        assert!(matches!(
            parse_scored_terms("t", "phrase\tscore\tcategory\nalpha\tnine\t\n").unwrap_err(),
            LexiconError::Malformed { line: 2, .. }
        ));
        assert!(matches!(
            parse_scored_terms("t", "phrase\tscore\tcategory\nalpha\t9\tNope\n").unwrap_err(),
            LexiconError::Malformed { line: 2, .. }
        ));
        assert!(matches!(
            parse_scored_terms("t", "phrase\tscore\tcategory\na b c d\t9\t\n").unwrap_err(),
            LexiconError::Malformed { line: 2, .. }
        ));
    }

    #[test]
    fn intensifier_negator_overlap_rejected() {
        let err = LexiconSet::build(
            set(&["i", "i'm"]),
            set(&["not", "so"]),
            set(&["so"]),
            vec![IntentPhrase::new(vec!["hate".into()]).unwrap()],
            BTreeSet::new(),
            Vec::new(),
            CategoryMap::default(),
            "intents",
            "subjects",
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::VocabularyConflict { ref token } if token == "so"));
    }

    #[test]
    fn missing_required_subjects_rejected() {
        let err = LexiconSet::build(
            set(&["i"]),
            set(&["not"]),
            set(&["really"]),
            vec![IntentPhrase::new(vec!["hate".into()]).unwrap()],
            BTreeSet::new(),
            Vec::new(),
            CategoryMap::default(),
            "intents",
            "subjects",
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::MissingRequiredSubjects { .. }));
    }

    #[test]
    fn empty_intents_rejected() {
        let err = LexiconSet::build(
            set(&["i", "i'm"]),
            set(&["not"]),
            set(&["really"]),
            Vec::new(),
            BTreeSet::new(),
            Vec::new(),
            CategoryMap::default(),
            "intents",
            "subjects",
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::EmptyIntents { .. }));
    }

    #[test]
    fn categorize_maps_known_targets_and_falls_back() {
        let lex = LexiconSet::bundled();
        assert_eq!(lex.categorize("gay people"), Category::SexualOrientation);
        assert_eq!(lex.categorize("nigga"), Category::Race);
        assert_eq!(lex.categorize("ghetto people"), Category::Class);
        assert_eq!(lex.categorize("retard"), Category::Disability);
        assert_eq!(lex.categorize("drunk people"), Category::Other);
        assert_eq!(lex.categorize("zxqv people"), Category::Other);
        assert!(lex.is_labeled("drunk people"));
        assert!(!lex.is_labeled("zxqv people"));
    }

    #[test]
    fn bundled_map_labels_common_top_targets() {
        let lex = LexiconSet::bundled();
        let top_targets = [
            "nigga",
            "nigger",
            "white people",
            "black people",
            "fake people",
            "stupid people",
            "rude people",
            "negative people",
            "ignorant people",
            "ungrateful people",
            "fat people",
            "gay people",
            "racist people",
            "old people",
        ];
        for target in top_targets {
            assert!(lex.is_labeled(target), "{target:?} is unlabeled");
            assert_ne!(lex.categorize(target), Category::Other, "{target:?}");
        }
    }

    #[test]
    fn save_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let original = LexiconSet::bundled();
        original.save_to_dir(dir.path()).unwrap();
        let reloaded = LexiconSet::load(&LexiconPaths::from_dir(dir.path())).unwrap();
        assert_eq!(original, reloaded);
    }

    #[test]
    fn missing_file_error_names_the_path() {
        let paths = LexiconPaths::from_dir("/nonexistent-lexicon-dir");
        let err = LexiconSet::load(&paths).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-lexicon-dir"), "{err}");
    }
}
