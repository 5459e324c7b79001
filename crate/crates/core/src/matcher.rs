//! The sentence-structure matcher: finds expressions of the form
//! subject + optional intensifiers + intent phrase + hate target.
//!
//! Matching is left-to-right and non-overlapping. At each subject token the
//! candidate grows through a gap of intensifier tokens until an intent
//! phrase matches (longest phrase first). A negator in the gap rejects the
//! candidate; any other non-intensifier token aborts it. The target must
//! directly follow the intent: first the scored-term lexicon is tried
//! (longest active phrase wins), then the `<word> people` template. When a
//! match is emitted, scanning resumes after its last token.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::corpus::PostRecord;
use crate::lexicon::LexiconSet;
use crate::normalize::{tokenize, TokenStream};

/// Which target template produced a match.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Template {
    /// `<one word> people`
    People,
    /// A scored lexicon term above the offensiveness threshold.
    Lexicon,
}

impl Template {
    pub fn name(self) -> &'static str {
        match self {
            Template::People => "people",
            Template::Lexicon => "lexicon",
        }
    }
}

/// One detected hate expression in a post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HateMatch {
    pub post_id: String,
    /// Canonical space-joined `subject intensifiers intent`.
    pub expression: String,
    /// Normalized target string.
    pub target: String,
    pub template: Template,
    pub category: Category,
    /// Token index span `[start, end)`, subject through target inclusive.
    pub span: (usize, usize),
}

/// Matcher knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatcherConfig {
    /// Longest allowed intensifier gap between subject and intent.
    pub max_intensifiers: usize,
    /// Reject `<...ing> people` targets in addition to the exclusion list.
    pub gerund_filter: bool,
    /// Override the lexicon set's offensiveness threshold.
    pub threshold_override: Option<u8>,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig {
            max_intensifiers: 3,
            gerund_filter: false,
            threshold_override: None,
        }
    }
}

/// A compiled matcher: an immutable lexicon view plus config, reusable
/// across any number of posts (and threads, by reference).
pub struct Matcher<'a> {
    lex: &'a LexiconSet,
    cfg: MatcherConfig,
    /// Active scored-term phrases at the effective threshold.
    active: BTreeSet<Vec<String>>,
    max_active_len: usize,
}

impl<'a> Matcher<'a> {
    pub fn new(lex: &'a LexiconSet, cfg: MatcherConfig) -> Self {
        let threshold = cfg.threshold_override.unwrap_or(lex.threshold());
        let active: BTreeSet<Vec<String>> = lex
            .active_terms_at(threshold)
            .into_iter()
            .map(|t| t.phrase.clone())
            .collect();
        let max_active_len = active.iter().map(Vec::len).max().unwrap_or(0);
        Matcher {
            lex,
            cfg,
            active,
            max_active_len,
        }
    }

    pub fn config(&self) -> MatcherConfig {
        self.cfg
    }

    pub fn lexicon(&self) -> &LexiconSet {
        self.lex
    }

    /// All non-overlapping matches in a post, left to right.
    pub fn match_post(&self, post: &PostRecord) -> Vec<HateMatch> {
        self.match_tokens(&post.id, &tokenize(&post.text))
    }

    /// Match over an already-tokenized post.
    pub fn match_tokens(&self, post_id: &str, tokens: &TokenStream) -> Vec<HateMatch> {
        let texts = tokens.texts();
        let mut matches = Vec::new();
        let mut i = 0;
        while i < texts.len() {
            if self.lex.subjects().contains(texts[i].as_str()) {
                if let Some(m) = self.match_at(post_id, texts, i) {
                    i = m.span.1;
                    matches.push(m);
                    continue;
                }
            }
            i += 1;
        }
        matches
    }

    /// Try to complete a match whose subject sits at `subject_idx`.
    fn match_at(&self, post_id: &str, texts: &[String], subject_idx: usize) -> Option<HateMatch> {
        let mut pos = subject_idx + 1;
        let mut gap = 0;
        loop {
            if pos >= texts.len() {
                return None;
            }
            if let Some(len) = self.longest_intent_at(texts, pos) {
                // Committed to this intent; the candidate stands or falls
                // on the target directly after it.
                let (target, template, end) = self.resolve_target(texts, pos + len)?;
                let category = self.lex.categorize(&target);
                return Some(HateMatch {
                    post_id: post_id.to_string(),
                    expression: texts[subject_idx..pos + len].join(" "),
                    target,
                    template,
                    category,
                    span: (subject_idx, end),
                });
            }
            let tok = texts[pos].as_str();
            if self.lex.negators().contains(tok) {
                return None;
            }
            if gap < self.cfg.max_intensifiers && self.lex.intensifiers().contains(tok) {
                gap += 1;
                pos += 1;
                continue;
            }
            return None;
        }
    }

    /// Longest intent phrase starting at `pos`, if any.
    fn longest_intent_at(&self, texts: &[String], pos: usize) -> Option<usize> {
        let longest = self.lex.max_intent_len().min(texts.len() - pos);
        (1..=longest)
            .rev()
            .find(|&len| self.lex.intents().contains(&texts[pos..pos + len]))
    }

    /// Resolve the hate target at `pos`: scored lexicon first (longest
    /// active phrase), then `<word> people`.
    fn resolve_target(&self, texts: &[String], pos: usize) -> Option<(String, Template, usize)> {
        let longest = self.max_active_len.min(texts.len().saturating_sub(pos));
        for len in (1..=longest).rev() {
            if self.active.contains(&texts[pos..pos + len]) {
                return Some((texts[pos..pos + len].join(" "), Template::Lexicon, pos + len));
            }
        }
        if pos + 1 < texts.len() && texts[pos + 1] == "people" {
            let word = texts[pos].as_str();
            let excluded = self.lex.exclusions().contains(word)
                || word.chars().all(char::is_numeric)
                || (self.cfg.gerund_filter && word.ends_with("ing"));
            if !excluded {
                return Some((format!("{word} people"), Template::People, pos + 2));
            }
        }
        None
    }
}

/// Convenience one-shot matcher. Building a [`Matcher`] once is cheaper when
/// scanning many posts.
pub fn match_post(post: &PostRecord, lex: &LexiconSet, cfg: MatcherConfig) -> Vec<HateMatch> {
    Matcher::new(lex, cfg).match_post(post)
}

/// Exact multiset count of expression texts across matches.
pub fn expression_breakdown<'a, I>(matches: I) -> BTreeMap<String, u64>
where
    I: IntoIterator<Item = &'a HateMatch>,
{
    let mut counts = BTreeMap::new();
    for m in matches {
        *counts.entry(m.expression.clone()).or_insert(0) += 1;
    }
    counts
}
