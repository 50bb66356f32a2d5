//! Title and ISSN normalization rules used by every index and matcher.
//!
//! The rules are deliberately fixed: two titles (or ISSNs) are "the same"
//! exactly when their normalized forms are byte-equal, so every stage of the
//! pipeline agrees on identity.

/// Normalizes a journal title for indexing and comparison.
///
/// Steps, in order: uppercase, replace `&` with `AND`, collapse internal
/// whitespace to single spaces, strip leading/trailing whitespace and
/// trailing punctuation, drop a leading `THE `.
pub fn normalize_title(raw: &str) -> String {
    let upper = raw.to_uppercase().replace('&', "AND");
    let collapsed = upper.split_whitespace().collect::<Vec<_>>().join(" ");
    let trimmed =
        collapsed.trim_end_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace());
    let s = trimmed.trim_start();
    let s = s.strip_prefix("THE ").unwrap_or(s);
    s.trim().to_string()
}

/// Cleans an ISSN into the canonical `NNNN-NNNC` form (`C` is a digit or `X`).
///
/// Hyphens and whitespace are stripped and the string uppercased before
/// validation. Returns `None` for anything that is not 8 characters of
/// 7 digits plus a digit/`X` check character; callers log and skip those.
pub fn clean_issn(raw: &str) -> Option<String> {
    let cleaned: String = raw
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '-')
        .collect::<String>()
        .to_uppercase();
    if cleaned.len() != 8 {
        return None;
    }
    let bytes = cleaned.as_bytes();
    if !bytes[..7].iter().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let check = bytes[7];
    if !(check.is_ascii_digit() || check == b'X') {
        return None;
    }
    Some(format!("{}-{}", &cleaned[..4], &cleaned[4..]))
}

/// True when a raw field names the residual "All others" category, which is
/// treated as a missing value rather than a journal.
pub fn is_all_others(raw: &str) -> bool {
    normalize_title(raw) == "ALL OTHERS"
}
