//! Text normalization ahead of vectorization: lowercase, strip volatile
//! tokens (hex ids, numbers, uuids, addresses), drop stop words.

use std::sync::OnceLock;

use regex::Regex;

fn volatile_token() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?x)^(
                0x[0-9a-f]+                                        # hex literal
              | [0-9a-f]{8,}                                       # long hex run
              | [0-9]+(\.[0-9]+)?                                  # plain number
              | [0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}  # uuid
              | [0-9]{1,3}(\.[0-9]{1,3}){3}(:[0-9]+)?              # ipv4, optional port
            )$",
        )
        .expect("static regex")
    })
}

/// Fixed English stop list shipped with the artifact. Sorted for binary
/// search; lowercase.
const STOP_WORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "cannot", "could", "did", "do", "does", "doing", "down", "during", "each",
    "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
    "him", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "me",
    "more", "most", "my", "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
    "other", "our", "ours", "out", "over", "own", "same", "she", "should", "so", "some", "such",
    "than", "that", "the", "their", "theirs", "them", "then", "there", "these", "they", "this",
    "those", "through", "to", "too", "under", "until", "up", "very", "was", "we", "were", "what",
    "when", "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you",
    "your", "yours",
];

fn is_stop_word(token: &str) -> bool {
    STOP_WORDS.binary_search(&token).is_ok()
}

/// Lowercases, trims punctuation off token edges, removes volatile tokens
/// (hex strings, numbers, uuids, addresses), pure-punctuation runs and stop
/// words, and collapses whitespace. Idempotent; may return an empty string.
pub fn filter_text(raw: &str) -> String {
    let lowered = raw.to_lowercase();
    let mut kept: Vec<&str> = Vec::new();
    for token in lowered.split_whitespace() {
        let trimmed = token.trim_matches(|c: char| !c.is_alphanumeric());
        if trimmed.is_empty() {
            continue; // punctuation run
        }
        if volatile_token().is_match(trimmed) {
            continue;
        }
        if is_stop_word(trimmed) {
            continue;
        }
        kept.push(trimmed);
    }
    kept.join(" ")
}

/// Whitespace split, order preserved for the embedding's context windows.
pub fn tokenize(clean: &str) -> Vec<String> {
    clean.split_whitespace().map(str::to_string).collect()
}
