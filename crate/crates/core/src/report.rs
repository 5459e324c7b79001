//! The report document: top-expression, top-target and category tables plus
//! the template split and labeled-target coverage, as JSON and as aligned
//! text.

use serde::{Deserialize, Serialize};

use crate::analytics::{
    coverage, template_split, top_table, Dimension, ReportTable, ScanSummary, TemplateSplit,
};

/// The three ranked tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTables {
    pub expressions: ReportTable,
    pub targets: ReportTable,
    pub categories: ReportTable,
}

/// Everything `report` emits, in one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub matched_posts: u64,
    pub total_posts: u64,
    pub tables: ReportTables,
    /// `None` when no posts matched.
    pub template_split: Option<TemplateSplit>,
    /// `None` when no posts matched.
    pub coverage: Option<f64>,
}

fn empty_table() -> ReportTable {
    ReportTable {
        rows: Vec::new(),
        denominator: 0,
    }
}

/// Build the report document from a summary, with `k` rows per ranked table.
pub fn build_report(summary: &ScanSummary, k: usize) -> Report {
    let table = |dim| top_table(summary, dim, k).unwrap_or_else(empty_table);
    Report {
        matched_posts: summary.matched_posts,
        total_posts: summary.total_posts,
        tables: ReportTables {
            expressions: table(Dimension::Expression),
            targets: table(Dimension::Target),
            categories: table(Dimension::Category),
        },
        template_split: template_split(summary),
        coverage: coverage(summary),
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned-column text rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Posts matched: {} of {}\n",
            self.matched_posts, self.total_posts
        ));
        if self.matched_posts == 0 {
            out.push_str("No matches: nothing to report.\n");
            return out;
        }
        render_table(&mut out, "Top hate expressions", &self.tables.expressions);
        render_table(&mut out, "Top hate targets", &self.tables.targets);
        render_table(&mut out, "Hate categories", &self.tables.categories);
        if let Some(split) = self.template_split {
            out.push_str(&format!(
                "\nTemplate split (% of matched posts): people {:.2}, lexicon {:.2}\n",
                split.people, split.lexicon
            ));
        }
        if let Some(cov) = self.coverage {
            out.push_str(&format!("Labeled-target coverage: {cov:.2}%\n"));
        }
        out
    }
}

fn render_table(out: &mut String, title: &str, table: &ReportTable) {
    out.push_str(&format!("\n{title}\n"));
    let label_width = table
        .rows
        .iter()
        .map(|r| r.label.len())
        .max()
        .unwrap_or(0)
        .max("(none)".len());
    if table.rows.is_empty() {
        out.push_str(&format!("  {:<label_width$}\n", "(none)"));
        return;
    }
    out.push_str(&format!(
        "  {:>3}  {:<label_width$}  {:>7}  {:>7}\n",
        "#", "label", "posts", "% posts"
    ));
    for (rank, row) in table.rows.iter().enumerate() {
        out.push_str(&format!(
            "  {:>3}  {:<label_width$}  {:>7}  {:>7.2}\n",
            rank + 1,
            row.label,
            row.count,
            row.percent
        ));
    }
}
