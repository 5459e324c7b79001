//! Text normalization and tokenization shared by the matcher and the oracle.
//!
//! The rules are deliberately simple and form a fixed contract:
//! tokens are maximal runs of alphanumeric characters and apostrophes,
//! lowercased, with the curly apostrophe U+2019 mapped to the straight one.
//! Any other character separates tokens, so `#` and `@` split hashtags and
//! mentions, and `"don't"` keeps its intra-word apostrophe while quoting
//! apostrophes are stripped from token edges. Each token remembers the byte
//! span it came from in the raw text.

/// Tokens plus their byte spans into the original text.
///
/// Token texts and spans are parallel: `texts()[i]` came from
/// `spans()[i]`. Spans are non-overlapping and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    texts: Vec<String>,
    spans: Vec<(usize, usize)>,
}

impl TokenStream {
    /// Normalized token texts, in order.
    pub fn texts(&self) -> &[String] {
        &self.texts
    }

    /// Byte spans `(start, end)` into the raw text, one per token.
    pub fn spans(&self) -> &[(usize, usize)] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }

    /// Iterate `(token, byte_start, byte_end)`.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, usize)> {
        self.texts
            .iter()
            .zip(&self.spans)
            .map(|(t, &(s, e))| (t.as_str(), s, e))
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || is_apostrophe(c)
}

/// Split raw post text into lowercase tokens with byte spans.
///
/// Empty input yields an empty stream; there is no error case.
pub fn tokenize(text: &str) -> TokenStream {
    let mut stream = TokenStream::default();
    // Char positions of the current run: (byte offset, char).
    let mut run: Vec<(usize, char)> = Vec::new();

    let mut flush = |run: &mut Vec<(usize, char)>, end_of_run: usize| {
        if run.is_empty() {
            return;
        }
        // Strip leading/trailing apostrophes so quoting doesn't leak into
        // tokens; interior ones ("don't") stay.
        let head = run.iter().take_while(|(_, c)| is_apostrophe(*c)).count();
        let tail = run
            .iter()
            .rev()
            .take_while(|(_, c)| is_apostrophe(*c))
            .count();
        if head + tail < run.len() {
            let kept = &run[head..run.len() - tail];
            let start = kept[0].0;
            let end = if tail == 0 {
                end_of_run
            } else {
                run[run.len() - tail].0
            };
            let token: String = kept
                .iter()
                .map(|&(_, c)| if c == '\u{2019}' { '\'' } else { c })
                .flat_map(|c| c.to_lowercase())
                .collect();
            stream.texts.push(token);
            stream.spans.push((start, end));
        }
        run.clear();
    };

    let mut prev_end = 0;
    for (pos, c) in text.char_indices() {
        if is_token_char(c) {
            run.push((pos, c));
        } else {
            flush(&mut run, pos);
        }
        prev_end = pos + c.len_utf8();
    }
    flush(&mut run, prev_end);
    stream
}

/// Normalize a phrase the same way `tokenize` normalizes post text and join
/// the tokens with single spaces. Used for lexicon entries and target keys.
pub fn normalize_phrase(s: &str) -> String {
    tokenize(s).texts().join(" ")
}
