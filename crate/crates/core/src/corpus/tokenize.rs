//! Surface tokenizer: NFC normalization, lowercasing, whitespace split, and
//! punctuation stripping with intra-word apostrophes kept intact.

use unicode_normalization::UnicodeNormalization;

use super::TokenizerConfig;

/// Splits `text` into tokens under `config`. Total function: empty or
/// all-punctuation input yields an empty list.
///
/// With `strip_punctuation` every character that is neither alphanumeric nor
/// an intra-word apostrophe acts as a token boundary and is dropped, so
/// `"It's red, no?"` becomes `["it's", "red", "no"]` and `"twenty-two"`
/// splits into two tokens.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    // Lowercase before NFC: lowercasing can emit decomposed sequences
    // (e.g. 'İ' -> "i\u{307}") that normalization must settle before the
    // splitting pass, or tokenize would not be idempotent on its output.
    let lowered: String = if config.lowercase {
        text.to_lowercase()
    } else {
        text.to_string()
    };
    let lowered: String = if config.unicode_nfc {
        lowered.nfc().collect()
    } else {
        lowered
    };

    let mut tokens = Vec::new();
    for word in lowered.split_whitespace() {
        if !config.strip_punctuation {
            tokens.push(word.to_string());
            continue;
        }
        split_word(word, &mut tokens);
    }
    tokens
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn split_word(word: &str, tokens: &mut Vec<String>) {
    let chars: Vec<char> = word.chars().collect();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let keep = c.is_alphanumeric()
            || (is_apostrophe(c)
                && i > 0
                && chars[i - 1].is_alphanumeric()
                && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric()));
        if keep {
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
}
