//! Character entity table for the DBLP dump.
//!
//! `dblp.xml` is not self-contained: its named entities are declared in
//! `dblp.dtd`, which maps the ISO Latin-1 names onto code points 160..=255.
//! The table below covers that block plus the five XML built-ins.

use std::borrow::Cow;

/// Entity names for code points 160..=255, in code point order.
const LATIN1: [&str; 96] = [
    "nbsp", "iexcl", "cent", "pound", "curren", "yen", "brvbar", "sect", "uml", "copy", "ordf",
    "laquo", "not", "shy", "reg", "macr", "deg", "plusmn", "sup2", "sup3", "acute", "micro",
    "para", "middot", "cedil", "sup1", "ordm", "raquo", "frac14", "frac12", "frac34", "iquest",
    "Agrave", "Aacute", "Acirc", "Atilde", "Auml", "Aring", "AElig", "Ccedil", "Egrave", "Eacute",
    "Ecirc", "Euml", "Igrave", "Iacute", "Icirc", "Iuml", "ETH", "Ntilde", "Ograve", "Oacute",
    "Ocirc", "Otilde", "Ouml", "times", "Oslash", "Ugrave", "Uacute", "Ucirc", "Uuml", "Yacute",
    "THORN", "szlig", "agrave", "aacute", "acirc", "atilde", "auml", "aring", "aelig", "ccedil",
    "egrave", "eacute", "ecirc", "euml", "igrave", "iacute", "icirc", "iuml", "eth", "ntilde",
    "ograve", "oacute", "ocirc", "otilde", "ouml", "divide", "oslash", "ugrave", "uacute", "ucirc",
    "uuml", "yacute", "thorn", "yuml",
];

/// Resolves a named entity (without `&` and `;`).
pub fn named_entity(name: &str) -> Option<char> {
    match name {
        "amp" => return Some('&'),
        "lt" => return Some('<'),
        "gt" => return Some('>'),
        "quot" => return Some('"'),
        "apos" => return Some('\''),
        _ => {}
    }
    LATIN1
        .iter()
        .position(|n| *n == name)
        .and_then(|i| char::from_u32(160 + i as u32))
}

/// Resolves `#123` / `#x7B` style character references.
pub fn char_reference(body: &str) -> Option<char> {
    let digits = body.strip_prefix('#')?;
    let code = if let Some(hex) = digits
        .strip_prefix('x')
        .or_else(|| digits.strip_prefix('X'))
    {
        u32::from_str_radix(hex, 16).ok()?
    } else {
        digits.parse::<u32>().ok()?
    };
    if code == 0 {
        return None;
    }
    char::from_u32(code)
}

/// Resolves the body of any reference, named or numeric.
pub fn resolve_reference(body: &str) -> Option<char> {
    if body.starts_with('#') {
        char_reference(body)
    } else {
        named_entity(body)
    }
}

/// Decodes well-formed `&name;` / `&#n;` references in free text.
///
/// Unknown or malformed references are kept verbatim; the second element of
/// the result counts them.
pub fn decode_references(text: &str) -> (Cow<'_, str>, usize) {
    if !text.contains('&') {
        return (Cow::Borrowed(text), 0);
    }
    let mut out = String::with_capacity(text.len());
    let mut unknown = 0;
    let mut rest = text;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp + 1..];
        let body_len = tail
            .find(|c: char| c == ';' || c == '&' || c.is_whitespace())
            .filter(|&end| tail[end..].starts_with(';'));
        match body_len.and_then(|end| resolve_reference(&tail[..end]).map(|c| (end, c))) {
            Some((end, c)) => {
                out.push(c);
                rest = &tail[end + 1..];
            }
            None => {
                if body_len.is_some() {
                    unknown += 1;
                }
                out.push('&');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    (Cow::Owned(out), unknown)
}
