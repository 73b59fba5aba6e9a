use super::entities::decode_references;
use super::IngestError;

/// Author name after entity decoding, whitespace collapsing and suffix split.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedName {
    pub canonical: String,
    /// DBLP homonym identifier, e.g. `"0001"`.
    pub suffix: Option<String>,
}

impl NormalizedName {
    pub fn full_key(&self) -> String {
        full_key(&self.canonical, self.suffix.as_deref())
    }
}

/// `"Chen Li"` + `Some("0001")` → `"Chen Li 0001"`.
pub fn full_key(canonical: &str, suffix: Option<&str>) -> String {
    match suffix {
        Some(s) => format!("{canonical} {s}"),
        None => canonical.to_owned(),
    }
}

pub fn is_homonym_suffix(token: &str) -> bool {
    token.len() == 4 && token.bytes().all(|b| b.is_ascii_digit())
}

/// Normalizes a raw DBLP author string.
///
/// Matching downstream is exact on the canonical form; there is no case
/// folding, transliteration or initial expansion here.
pub fn normalize_name(raw: &str) -> Result<NormalizedName, IngestError> {
    let (decoded, _) = decode_references(raw);
    let mut tokens: Vec<&str> = decoded.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(IngestError::RejectedName(raw.to_owned()));
    }
    let suffix = match tokens.last() {
        Some(last) if tokens.len() > 1 && is_homonym_suffix(last) => {
            let s = (*last).to_owned();
            tokens.pop();
            Some(s)
        }
        _ => None,
    };
    Ok(NormalizedName {
        canonical: tokens.join(" "),
        suffix,
    })
}

/// Whitespace collapse without suffix handling (titles, query strings).
pub fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
