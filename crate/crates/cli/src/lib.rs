//! Command-line pipeline over the hatescan library: scan a corpus, report
//! on a match file, sample matches for a manual precision audit, generate
//! ground-truth corpora, and validate lexicon directories.
//!
//! Exit codes: 0 success, 1 validation failure (bad flags, bad lexicons,
//! malformed data), 2 I/O failure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use hatescan::{
    build_report, generate_corpus, read_labeled_corpus, read_matches, reservoir_sample,
    scan_corpus, CorpusError, CorpusReader, HateMatch, LexiconError, LexiconPaths, LexiconSet,
    Matcher, MatcherConfig, ParseMode, ScanError, ScanOptions, ScanSummary, SynthSpec, Template,
    TruthLabel,
};

/// Scan social-media corpora for hate expressions and report on the targets.
#[derive(Debug, Parser)]
#[command(name = "hatescan", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan a corpus file, writing matches and a summary.
    Scan(ScanArgs),
    /// Render report tables from a match file.
    Report(ReportArgs),
    /// Randomly sample matches for a manual precision audit.
    Sample(SampleArgs),
    /// Generate a labeled synthetic corpus.
    Synth(SynthArgs),
    /// Validate a lexicon directory and print its counts.
    LexiconCheck(LexiconCheckArgs),
}

#[derive(Debug, Args)]
struct LexiconArgs {
    /// Lexicon directory (defaults to the bundled lexicons).
    #[arg(long, value_name = "DIR")]
    lexicons: Option<PathBuf>,
    /// Offensiveness threshold: scored terms must exceed it to match.
    #[arg(long, value_name = "N", default_value_t = 50)]
    threshold: u32,
}

impl LexiconArgs {
    fn load(&self) -> Result<LexiconSet, CliError> {
        let lex = match &self.lexicons {
            Some(dir) => LexiconSet::load(&LexiconPaths::from_dir(dir))?,
            None => LexiconSet::bundled(),
        };
        Ok(lex.with_threshold(self.threshold)?)
    }
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    lexicons: LexiconArgs,
    /// Corpus file (JSON-Lines, one post per line).
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Match output file (JSON-Lines, one match per line).
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Summary output file (default: <out>.summary.json).
    #[arg(long, value_name = "FILE")]
    summary_out: Option<PathBuf>,
    /// Also reject "<...ing> people" targets.
    #[arg(long)]
    gerund_filter: bool,
    /// Worker threads.
    #[arg(long, value_name = "N", default_value_t = 1)]
    workers: usize,
    /// Skip malformed corpus lines instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Match file produced by scan.
    #[arg(long, value_name = "FILE")]
    matches: PathBuf,
    /// Summary file from the same scan (default: <matches>.summary.json).
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
    /// Rows per table.
    #[arg(long, value_name = "K", default_value_t = 10)]
    top: usize,
    /// Where to write the JSON report (default: <matches>.report.json).
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Match file produced by scan.
    #[arg(long, value_name = "FILE")]
    matches: PathBuf,
    /// Corpus file; when given, sampled rows include the post text.
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    /// Sample size.
    #[arg(short = 'n', long = "sample-size", value_name = "N", default_value_t = 100)]
    n: usize,
    /// Sampling seed.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    lexicons: LexiconArgs,
    /// Ground-truth corpus output file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Number of posts.
    #[arg(long, value_name = "N", default_value_t = 1000)]
    posts: usize,
    /// Fraction of posts assembled from the grammar.
    #[arg(long, value_name = "F", default_value_t = 0.3)]
    positive_rate: f64,
    /// Fraction of posts that break exactly one grammar rule.
    #[arg(long, value_name = "F", default_value_t = 0.3)]
    near_miss_rate: f64,
    /// Generator seed.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct LexiconCheckArgs {
    #[command(flatten)]
    lexicons: LexiconArgs,
}

/// Errors with their process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad lexicons, malformed data: exit 1.
    Validation(String),
    /// The filesystem failed us: exit 2.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<LexiconError> for CliError {
    fn from(e: LexiconError) -> Self {
        // lexicons are configuration: any problem with them, including a
        // missing file, is a validation failure
        CliError::Validation(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Malformed { .. } => CliError::Validation(e.to_string()),
            CorpusError::Open { .. } | CorpusError::Read { .. } => CliError::Io(e.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Corpus(inner) => inner.into(),
            ScanError::CreateOutput { .. } | ScanError::WriteMatches { .. } => {
                CliError::Io(e.to_string())
            }
        }
    }
}

/// Parse arguments and run. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scan(args) => cmd_scan(args),
        Command::Report(args) => cmd_report(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Synth(args) => cmd_synth(args),
        Command::LexiconCheck(args) => cmd_lexicon_check(args),
    }
}

fn sibling_path(base: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", base.display()))
}

fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    if args.workers < 1 {
        return Err(CliError::Validation("--workers must be at least 1".into()));
    }
    let lex = args.lexicons.load()?;
    let cfg = MatcherConfig {
        gerund_filter: args.gerund_filter,
        ..MatcherConfig::default()
    };
    let matcher = Matcher::new(&lex, cfg);
    let opts = ScanOptions {
        workers: args.workers,
        lenient: args.lenient,
        ..ScanOptions::default()
    };
    let outcome = scan_corpus(&args.corpus, &matcher, &args.out, opts)?;
    let summary_path = args
        .summary_out
        .unwrap_or_else(|| sibling_path(&args.out, ".summary.json"));
    let summary_json = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    write_text(&summary_path, &format!("{summary_json}\n"))?;
    println!(
        "matched {}/{} posts",
        outcome.summary.matched_posts, outcome.summary.total_posts
    );
    if outcome.skipped_lines > 0 {
        println!("skipped {} malformed lines", outcome.skipped_lines);
    }
    eprintln!(
        "matches: {} ({} records); summary: {}",
        args.out.display(),
        outcome.matches_written,
        summary_path.display()
    );
    Ok(())
}

/// Rebuild post-level counters from the match file itself; only the fields a
/// match file cannot carry (total posts, labeled-target posts) come from the
/// scan summary.
fn rebuild_summary(matches: &[HateMatch], scan_summary: &ScanSummary) -> ScanSummary {
    let mut by_post: BTreeMap<&str, Vec<&HateMatch>> = BTreeMap::new();
    for m in matches {
        by_post.entry(&m.post_id).or_default().push(m);
    }
    let mut rebuilt = ScanSummary {
        total_posts: scan_summary.total_posts,
        matched_posts: by_post.len() as u64,
        labeled_target_posts: scan_summary.labeled_target_posts,
        ..ScanSummary::default()
    };
    for post_matches in by_post.values() {
        let expressions: BTreeSet<&str> =
            post_matches.iter().map(|m| m.expression.as_str()).collect();
        let targets: BTreeSet<&str> = post_matches.iter().map(|m| m.target.as_str()).collect();
        let categories: BTreeSet<_> = post_matches.iter().map(|m| m.category).collect();
        let templates: BTreeSet<Template> = post_matches.iter().map(|m| m.template).collect();
        for e in expressions {
            *rebuilt.per_expression.entry(e.to_string()).or_insert(0) += 1;
        }
        for t in targets {
            *rebuilt.per_target.entry(t.to_string()).or_insert(0) += 1;
        }
        for c in categories {
            *rebuilt.per_category.entry(c).or_insert(0) += 1;
        }
        for t in templates {
            *rebuilt.per_template.entry(t).or_insert(0) += 1;
        }
    }
    rebuilt
}

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    if args.top < 1 {
        return Err(CliError::Validation("--top must be at least 1".into()));
    }
    let matches = read_matches(&args.matches)?;
    let summary_path = args
        .summary
        .unwrap_or_else(|| sibling_path(&args.matches, ".summary.json"));
    let summary_raw = fs::read_to_string(&summary_path).map_err(|e| {
        CliError::Validation(format!(
            "cannot read scan summary {} ({e}); run scan first or pass --summary",
            summary_path.display()
        ))
    })?;
    let scan_summary: ScanSummary = serde_json::from_str(&summary_raw).map_err(|e| {
        CliError::Validation(format!("malformed summary {}: {e}", summary_path.display()))
    })?;
    let rebuilt = rebuild_summary(&matches, &scan_summary);
    if rebuilt.matched_posts != scan_summary.matched_posts {
        eprintln!(
            "warning: match file has {} matched posts but summary says {}; are they from the same scan?",
            rebuilt.matched_posts, scan_summary.matched_posts
        );
    }
    let report = build_report(&rebuilt, args.top);
    let json_path = args
        .json
        .unwrap_or_else(|| sibling_path(&args.matches, ".report.json"));
    write_text(&json_path, &format!("{}\n", report.to_json()))?;
    print!("{}", report.render_text());
    eprintln!("report json: {}", json_path.display());
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    if args.n < 1 {
        return Err(CliError::Validation("--sample-size must be at least 1".into()));
    }
    let matches = read_matches(&args.matches)?;
    if matches.is_empty() {
        return Err(CliError::Validation(format!(
            "match file {} is empty; nothing to sample",
            args.matches.display()
        )));
    }
    if args.n > matches.len() {
        eprintln!(
            "warning: sample size {} exceeds population {}; printing everything",
            args.n,
            matches.len()
        );
    }
    let sampled = reservoir_sample(matches, args.n, args.seed);
    let texts: BTreeMap<String, String> = match &args.corpus {
        Some(corpus) => {
            let wanted: BTreeSet<&str> = sampled.iter().map(|m| m.post_id.as_str()).collect();
            let mut texts = BTreeMap::new();
            for record in CorpusReader::open(corpus, ParseMode::Strict)? {
                let record = record?;
                if wanted.contains(record.id.as_str()) {
                    texts.insert(record.id, record.text);
                }
            }
            texts
        }
        None => BTreeMap::new(),
    };
    for m in &sampled {
        let text = texts.get(&m.post_id).map(String::as_str).unwrap_or("");
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            m.post_id,
            m.expression,
            m.target,
            m.template.name(),
            m.category,
            text
        );
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), CliError> {
    let lex = args.lexicons.load()?;
    let spec = SynthSpec {
        n_posts: args.posts,
        positive_rate: args.positive_rate,
        near_miss_rate: args.near_miss_rate,
        seed: args.seed,
    };
    let generator = generate_corpus(spec, &lex).map_err(|e| CliError::Validation(e.to_string()))?;
    let written = hatescan::write_labeled_corpus(generator, &args.out)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", args.out.display())))?;
    println!("wrote {written} posts to {}", args.out.display());
    Ok(())
}

fn cmd_lexicon_check(args: LexiconCheckArgs) -> Result<(), CliError> {
    let lex = args.lexicons.load()?;
    let source = match &args.lexicons.lexicons {
        Some(dir) => dir.display().to_string(),
        None => "<bundled>".to_string(),
    };
    println!("lexicons: {source}");
    println!("subjects: {}", lex.subjects().len());
    println!("negators: {}", lex.negators().len());
    println!("intensifiers: {}", lex.intensifiers().len());
    println!("intents: {}", lex.intents().len());
    println!("exclusions: {}", lex.exclusions().len());
    println!("scored terms: {}", lex.scored_terms().len());
    println!(
        "active terms at threshold {}: {}",
        lex.threshold(),
        lex.active_terms().len()
    );
    println!("labeled targets: {}", lex.category_map().len());
    Ok(())
}

/// Compare a scan of a labeled corpus against its own ground truth and
/// print precision/recall. Used by `scan --corpus <ground truth>` flows in
/// tests; exposed for the audit workflow.
pub fn evaluate_against_labels(
    corpus: &Path,
    matcher: &Matcher<'_>,
) -> Result<(f64, f64), CliError> {
    let labeled = read_labeled_corpus(corpus)?;
    let mut true_positives = 0u64;
    let mut false_positives = 0u64;
    let mut false_negatives = 0u64;
    for post in &labeled {
        let matched = !matcher.match_post(&post.post).is_empty();
        let positive = post.label == TruthLabel::Positive;
        match (matched, positive) {
            (true, true) => true_positives += 1,
            (true, false) => false_positives += 1,
            (false, true) => false_negatives += 1,
            (false, false) => {}
        }
    }
    let precision = if true_positives + false_positives == 0 {
        1.0
    } else {
        true_positives as f64 / (true_positives + false_positives) as f64
    };
    let recall = if true_positives + false_negatives == 0 {
        1.0
    } else {
        true_positives as f64 / (true_positives + false_negatives) as f64
    };
    Ok((precision, recall))
}
