//! Shared word tokenizer.
//!
//! Every operation that needs word tokens (turn truncation, Rouge scoring,
//! coherence vectors, token statistics) goes through this one function so the
//! toolkit has a single, deterministic notion of a "token": split on unicode
//! whitespace, then detach leading and trailing ASCII punctuation characters
//! into their own tokens. Case is preserved; callers that want case-folded
//! tokens lowercase the input first.

/// Characters detached from the edges of a whitespace-delimited chunk.
fn is_detached_punct(c: char) -> bool {
    c.is_ascii_punctuation()
}

/// Split `text` into tokens.
///
/// Interior punctuation (hyphens, apostrophes, decimal points) stays inside
/// its word; only leading and trailing punctuation becomes separate
/// single-character tokens. An all-punctuation chunk yields one token per
/// character.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && is_detached_punct(chars[start]) {
            start += 1;
        }
        while end > start && is_detached_punct(chars[end - 1]) {
            end -= 1;
        }
        for &c in &chars[..start] {
            out.push(c.to_string());
        }
        if start < end {
            out.push(chars[start..end].iter().collect());
        }
        for &c in &chars[end..] {
            out.push(c.to_string());
        }
    }
    out
}

/// Tokenize after lowercasing, as used by the Rouge metrics.
pub fn tokenize_lower(text: &str) -> Vec<String> {
    tokenize(&text.to_lowercase())
}
