//! Post-level aggregation of match streams into the report statistics.
//!
//! Counting is per post and per distinct value: a post with three matches on
//! the same expression contributes 1 to that expression, and a post with
//! matches in two categories contributes 1 to each. Summaries are plain
//! integer counters in ordered maps, so merging shards is field-wise
//! addition and serialization is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::corpus::PostRecord;
use crate::lexicon::LexiconSet;
use crate::matcher::{HateMatch, Template};

/// Mergeable aggregate counters over a scanned corpus shard.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSummary {
    pub total_posts: u64,
    /// Posts with at least one match.
    pub matched_posts: u64,
    /// Expression -> count of posts containing it.
    pub per_expression: BTreeMap<String, u64>,
    /// Target -> count of posts containing it.
    pub per_target: BTreeMap<String, u64>,
    /// Category -> count of posts containing it.
    pub per_category: BTreeMap<Category, u64>,
    /// Template -> count of posts with at least one match of it.
    pub per_template: BTreeMap<Template, u64>,
    /// Matched posts with at least one explicitly labeled target.
    pub labeled_target_posts: u64,
}

impl ScanSummary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fold one post's match list into the counters.
    pub fn observe_post(&mut self, matches: &[HateMatch], lex: &LexiconSet) {
        self.total_posts += 1;
        if matches.is_empty() {
            return;
        }
        self.matched_posts += 1;
        let expressions: BTreeSet<&str> = matches.iter().map(|m| m.expression.as_str()).collect();
        let targets: BTreeSet<&str> = matches.iter().map(|m| m.target.as_str()).collect();
        let categories: BTreeSet<Category> = matches.iter().map(|m| m.category).collect();
        let templates: BTreeSet<Template> = matches.iter().map(|m| m.template).collect();
        for e in expressions {
            *self.per_expression.entry(e.to_string()).or_insert(0) += 1;
        }
        for c in categories {
            *self.per_category.entry(c).or_insert(0) += 1;
        }
        for t in templates {
            *self.per_template.entry(t).or_insert(0) += 1;
        }
        let mut any_labeled = false;
        for t in targets {
            *self.per_target.entry(t.to_string()).or_insert(0) += 1;
            any_labeled |= lex.is_labeled(t);
        }
        if any_labeled {
            self.labeled_target_posts += 1;
        }
    }

    /// Field-wise sum. Intended for summaries over disjoint post sets.
    pub fn merge(mut self, other: ScanSummary) -> ScanSummary {
        self.total_posts += other.total_posts;
        self.matched_posts += other.matched_posts;
        self.labeled_target_posts += other.labeled_target_posts;
        for (k, v) in other.per_expression {
            *self.per_expression.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.per_target {
            *self.per_target.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.per_category {
            *self.per_category.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.per_template {
            *self.per_template.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Aggregate a stream of posts paired with their match lists.
pub fn summarize<I>(pairs: I, lex: &LexiconSet) -> ScanSummary
where
    I: IntoIterator<Item = (PostRecord, Vec<HateMatch>)>,
{
    let mut summary = ScanSummary::new();
    for (_, matches) in pairs {
        summary.observe_post(&matches, lex);
    }
    summary
}

/// A ranked table row: label, post count, percent of matched posts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub count: u64,
    pub percent: f64,
}

/// Ranked rows over one dimension, with the shared denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
    /// Matched-post count the percentages are relative to.
    pub denominator: u64,
}

/// Report dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Expression,
    Target,
    Category,
}

/// Round to two decimals, half away from zero (counts are non-negative, so
/// this is round-half-up).
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn percent_of(count: u64, denominator: u64) -> f64 {
    round2(100.0 * count as f64 / denominator as f64)
}

/// Top-k rows for a dimension, count descending then label ascending.
/// For the category dimension the `Other` row is appended after the ranked
/// rows regardless of its count, since it is the catch-all.
/// Returns `None` when no posts matched (percentages would be undefined).
pub fn top_table(summary: &ScanSummary, dimension: Dimension, k: usize) -> Option<ReportTable> {
    if summary.matched_posts == 0 {
        return None;
    }
    let denominator = summary.matched_posts;
    let row = |label: String, count: u64| ReportRow {
        label,
        count,
        percent: percent_of(count, denominator),
    };
    let mut rows: Vec<ReportRow>;
    let mut other_row = None;
    match dimension {
        Dimension::Expression => {
            rows = summary
                .per_expression
                .iter()
                .map(|(label, &count)| row(label.clone(), count))
                .collect();
        }
        Dimension::Target => {
            rows = summary
                .per_target
                .iter()
                .map(|(label, &count)| row(label.clone(), count))
                .collect();
        }
        Dimension::Category => {
            rows = Vec::new();
            for (&cat, &count) in &summary.per_category {
                let r = row(cat.display_name().to_string(), count);
                if cat == Category::Other {
                    other_row = Some(r);
                } else {
                    rows.push(r);
                }
            }
        }
    }
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    rows.truncate(k);
    rows.extend(other_row);
    Some(ReportTable { rows, denominator })
}

/// Share of matched posts carrying each template, as percentages. A post
/// with both templates counts toward both, so the pair may exceed 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemplateSplit {
    pub people: f64,
    pub lexicon: f64,
}

pub fn template_split(summary: &ScanSummary) -> Option<TemplateSplit> {
    if summary.matched_posts == 0 {
        return None;
    }
    let count = |t: Template| summary.per_template.get(&t).copied().unwrap_or(0);
    Some(TemplateSplit {
        people: percent_of(count(Template::People), summary.matched_posts),
        lexicon: percent_of(count(Template::Lexicon), summary.matched_posts),
    })
}

/// Percentage of matched posts whose target carries an explicit category
/// label.
pub fn coverage(summary: &ScanSummary) -> Option<f64> {
    if summary.matched_posts == 0 {
        return None;
    }
    Some(percent_of(summary.labeled_target_posts, summary.matched_posts))
}

/// Uniform sample of `n` items without replacement (reservoir over the
/// stream), deterministic for a fixed seed. Yields the whole population
/// when it has `n` or fewer items. Order follows the reservoir, not the
/// stream.
pub fn reservoir_sample<T, I>(items: I, n: usize, seed: u64) -> Vec<T>
where
    I: IntoIterator<Item = T>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reservoir: Vec<T> = Vec::with_capacity(n.min(1024));
    if n == 0 {
        return reservoir;
    }
    for (i, item) in items.into_iter().enumerate() {
        if i < n {
            reservoir.push(item);
        } else {
            let j = rng.random_range(0..=i);
            if j < n {
                reservoir[j] = item;
            }
        }
    }
    reservoir
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> LexiconSet {
        LexiconSet::bundled()
    }

    fn mk(target: &str, template: Template, expression: &str, lex: &LexiconSet) -> HateMatch {
        HateMatch {
            post_id: "p".into(),
            expression: expression.into(),
            target: target.into(),
            template,
            category: lex.categorize(target),
            span: (0, 4),
        }
    }

    #[test]
    fn unmatched_posts_count_only_totals() {
        let lex = lex();
        let mut s = ScanSummary::new();
        for _ in 0..10 {
            s.observe_post(&[], &lex);
        }
        assert_eq!(s.total_posts, 10);
        assert_eq!(s.matched_posts, 0);
        assert!(s.per_expression.is_empty());
        assert!(s.per_target.is_empty());
    }

    #[test]
    fn distinct_values_count_once_per_post() {
        let lex = lex();
        let mut s = ScanSummary::new();
        let a = mk("black people", Template::People, "i hate", &lex);
        let b = mk("nigga", Template::Lexicon, "i hate", &lex);
        s.observe_post(&[a.clone(), b, a.clone(), a], &lex);
        assert_eq!(s.matched_posts, 1);
        assert_eq!(s.per_target.get("black people"), Some(&1));
        assert_eq!(s.per_target.get("nigga"), Some(&1));
        // both matches are Race: one distinct category
        assert_eq!(s.per_category.get(&Category::Race), Some(&1));
        assert_eq!(s.per_expression.get("i hate"), Some(&1));
        assert_eq!(s.per_template.get(&Template::People), Some(&1));
        assert_eq!(s.per_template.get(&Template::Lexicon), Some(&1));
        assert_eq!(s.labeled_target_posts, 1);
    }

    #[test]
    fn unlabeled_targets_do_not_count_as_labeled() {
        let lex = lex();
        let mut s = ScanSummary::new();
        s.observe_post(&[mk("zxqv people", Template::People, "i hate", &lex)], &lex);
        assert_eq!(s.matched_posts, 1);
        assert_eq!(s.labeled_target_posts, 0);
        assert_eq!(coverage(&s), Some(0.0));
    }

    #[test]
    fn merge_is_commutative_associative_with_identity() {
        let lex = lex();
        let mut a = ScanSummary::new();
        a.observe_post(&[mk("black people", Template::People, "i hate", &lex)], &lex);
        a.observe_post(&[], &lex);
        let mut b = ScanSummary::new();
        b.observe_post(&[mk("fake people", Template::People, "i just hate", &lex)], &lex);
        let mut c = ScanSummary::new();
        c.observe_post(&[mk("cunt", Template::Lexicon, "i'm sick of", &lex)], &lex);

        assert_eq!(a.clone().merge(ScanSummary::new()), a);
        assert_eq!(ScanSummary::new().merge(a.clone()), a);
        assert_eq!(a.clone().merge(b.clone()), b.clone().merge(a.clone()));
        assert_eq!(
            a.clone().merge(b.clone()).merge(c.clone()),
            a.clone().merge(b.clone().merge(c.clone()))
        );
    }

    #[test]
    fn sharded_summaries_equal_single_pass() {
        let lex = lex();
        let posts: Vec<Vec<HateMatch>> = (0..40)
            .map(|i| match i % 4 {
                0 => vec![mk("black people", Template::People, "i hate", &lex)],
                1 => vec![mk("nigga", Template::Lexicon, "i hate", &lex)],
                2 => vec![],
                _ => vec![
                    mk("fat people", Template::People, "i really hate", &lex),
                    mk("retard", Template::Lexicon, "i hate", &lex),
                ],
            })
            .collect();
        let mut single = ScanSummary::new();
        for m in &posts {
            single.observe_post(m, &lex);
        }
        for shards in [2, 4, 5] {
            let merged = posts
                .chunks(posts.len() / shards)
                .map(|chunk| {
                    let mut s = ScanSummary::new();
                    for m in chunk {
                        s.observe_post(m, &lex);
                    }
                    s
                })
                .fold(ScanSummary::new(), ScanSummary::merge);
            assert_eq!(merged, single, "shards={shards}");
        }
    }

    #[test]
    fn top_table_orders_and_rounds() {
        let lex = lex();
        let mut s = ScanSummary::new();
        for _ in 0..2 {
            s.observe_post(&[mk("rude people", Template::People, "i hate", &lex)], &lex);
        }
        for _ in 0..2 {
            s.observe_post(&[mk("fake people", Template::People, "i hate", &lex)], &lex);
        }
        s.observe_post(&[mk("old people", Template::People, "i despise", &lex)], &lex);
        s.observe_post(&[], &lex);
        let table = top_table(&s, Dimension::Target, 10).unwrap();
        assert_eq!(table.denominator, 5);
        let labels: Vec<&str> = table.rows.iter().map(|r| r.label.as_str()).collect();
        // count descending, ties broken lexicographically
        assert_eq!(labels, ["fake people", "rude people", "old people"]);
        assert_eq!(table.rows[0].percent, 40.0);
        assert_eq!(table.rows[2].percent, 20.0);
    }

    #[test]
    fn top_table_k_truncates_but_never_pads() {
        let lex = lex();
        let mut s = ScanSummary::new();
        for target in ["a people", "b people", "c people"] {
            s.observe_post(&[mk(target, Template::People, "i hate", &lex)], &lex);
        }
        assert_eq!(top_table(&s, Dimension::Target, 2).unwrap().rows.len(), 2);
        assert_eq!(top_table(&s, Dimension::Target, 99).unwrap().rows.len(), 3);
        assert_eq!(top_table(&s, Dimension::Expression, 99).unwrap().rows.len(), 1);
    }

    #[test]
    fn category_table_keeps_other_last() {
        let lex = lex();
        let mut s = ScanSummary::new();
        // 3 posts in Other, 2 in Race, 1 in Class: Other ranks first by
        // count but must still render last.
        for _ in 0..3 {
            s.observe_post(&[mk("drunk people", Template::People, "i hate", &lex)], &lex);
        }
        for _ in 0..2 {
            s.observe_post(&[mk("black people", Template::People, "i hate", &lex)], &lex);
        }
        s.observe_post(&[mk("rich people", Template::People, "i hate", &lex)], &lex);
        let table = top_table(&s, Dimension::Category, 10).unwrap();
        let labels: Vec<&str> = table.rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["Race", "Class", "Other"]);
    }

    #[test]
    fn single_category_table_is_total() {
        let lex = lex();
        let mut s = ScanSummary::new();
        s.observe_post(&[mk("black people", Template::People, "i hate", &lex)], &lex);
        let table = top_table(&s, Dimension::Category, 10).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].label, "Race");
        assert_eq!(table.rows[0].percent, 100.0);
    }

    #[test]
    fn zero_matches_yield_empty_signals() {
        let lex = lex();
        let mut s = ScanSummary::new();
        s.observe_post(&[], &lex);
        assert!(top_table(&s, Dimension::Expression, 10).is_none());
        assert!(template_split(&s).is_none());
        assert!(coverage(&s).is_none());
    }

    #[test]
    fn template_split_counts_posts_per_template() {
        let lex = lex();
        let mut s = ScanSummary::new();
        s.observe_post(&[mk("black people", Template::People, "i hate", &lex)], &lex);
        let split = template_split(&s).unwrap();
        assert_eq!((split.people, split.lexicon), (100.0, 0.0));

        let mut s = ScanSummary::new();
        s.observe_post(
            &[
                mk("black people", Template::People, "i hate", &lex),
                mk("nigga", Template::Lexicon, "i hate", &lex),
            ],
            &lex,
        );
        let split = template_split(&s).unwrap();
        assert_eq!((split.people, split.lexicon), (100.0, 100.0));
    }

    #[test]
    fn coverage_all_or_none() {
        let lex = lex();
        let mut s = ScanSummary::new();
        s.observe_post(&[mk("black people", Template::People, "i hate", &lex)], &lex);
        assert_eq!(coverage(&s), Some(100.0));
    }

    #[test]
    fn percentages_sum_to_hundred_for_single_match_posts() {
        let lex = lex();
        let mut s = ScanSummary::new();
        let targets = ["black people", "fake people", "old people", "nigga", "cunt", "x people", "y people"];
        for (i, target) in targets.iter().cycle().take(37).enumerate() {
            let template = if lex.categorize(target) == Category::Other {
                Template::People
            } else {
                Template::Lexicon
            };
            let expr = if i % 2 == 0 { "i hate" } else { "i despise" };
            s.observe_post(&[mk(target, template, expr, &lex)], &lex);
        }
        for dim in [Dimension::Expression, Dimension::Target, Dimension::Category] {
            let table = top_table(&s, dim, usize::MAX).unwrap();
            let sum: f64 = table.rows.iter().map(|r| r.percent).sum();
            let tolerance = 0.01 * table.rows.len() as f64;
            assert!(
                (sum - 100.0).abs() <= tolerance + 1e-9,
                "{dim:?}: sum {sum}"
            );
        }
    }

    #[test]
    fn round2_is_half_up() {
        // 0.375 and 0.125 are exact in binary, so these really are halves.
        assert_eq!(round2(0.375), 0.38);
        assert_eq!(round2(0.125), 0.13);
        assert_eq!(round2(100.0 * 1.0 / 3.0), 33.33);
        assert_eq!(round2(100.0 * 2.0 / 3.0), 66.67);
    }

    #[test]
    fn reservoir_returns_whole_small_population() {
        let sample = reservoir_sample(0..5, 10, 42);
        assert_eq!(sample, vec![0, 1, 2, 3, 4]);
        assert!(reservoir_sample(0..5, 0, 42).is_empty());
    }

    #[test]
    fn reservoir_is_deterministic_per_seed() {
        let a = reservoir_sample(0..1000, 10, 7);
        let b = reservoir_sample(0..1000, 10, 7);
        let c = reservoir_sample(0..1000, 10, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn reservoir_single_draw_is_uniform() {
        // Binomial(10000, 1/10): mean 1000, sd 30; +-150 is five sigma.
        let mut counts = [0u32; 10];
        for seed in 0..10_000u64 {
            let pick = reservoir_sample(0..10usize, 1, seed)[0];
            counts[pick] += 1;
        }
        for (value, &count) in counts.iter().enumerate() {
            assert!(
                (850..=1150).contains(&count),
                "value {value} drawn {count} times"
            );
        }
    }
}
