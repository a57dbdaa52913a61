//! String and name codecs.
//!
//! Literal strings carry raw bytes behind backslash escapes, hexadecimal
//! strings carry raw bytes as hex digits, and both become text through
//! [`decode_text`]: a leading `FE FF` byte-order mark selects UTF-16BE
//! (with surrogate pairs for characters outside the basic plane), anything
//! else is read byte-per-code-point as Latin-1.
//!
//! Names are written with `#xx` escapes for every byte outside the regular
//! character range, so `/application#2Fx-tex` decodes to `application/x-tex`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Which string syntax a piece of text was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StringOrigin {
    Literal,
    Hex,
}

/// Decoded document text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextString {
    pub text: String,
    pub origin: StringOrigin,
}

impl TextString {
    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub(crate) fn is_whitespace(b: u8) -> bool {
    matches!(b, b'\0' | b'\t' | b'\n' | b'\x0c' | b'\r' | b' ')
}

pub(crate) fn is_delimiter(b: u8) -> bool {
    matches!(b, b'(' | b')' | b'<' | b'>' | b'[' | b']' | b'{' | b'}' | b'/' | b'%')
}

pub(crate) fn is_regular(b: u8) -> bool {
    !is_whitespace(b) && !is_delimiter(b)
}

/// Reads a literal string whose opening parenthesis has already been
/// consumed. Returns the unescaped bytes and the position just past the
/// closing parenthesis.
pub(crate) fn read_literal(bytes: &[u8], start: usize) -> Result<(Vec<u8>, usize)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b'\\' => {
                i += 1;
                let Some(&e) = bytes.get(i) else {
                    return Err(Error::UnterminatedString);
                };
                match e {
                    b'n' => out.push(b'\n'),
                    b'r' => out.push(b'\r'),
                    b't' => out.push(b'\t'),
                    b'b' => out.push(0x08),
                    b'f' => out.push(0x0c),
                    b'0'..=b'7' => {
                        let mut value: u32 = 0;
                        let mut digits = 0;
                        while digits < 3 {
                            match bytes.get(i) {
                                Some(&d @ b'0'..=b'7') => {
                                    value = value * 8 + u32::from(d - b'0');
                                    digits += 1;
                                    i += 1;
                                }
                                _ => break,
                            }
                        }
                        out.push((value & 0xff) as u8);
                        continue;
                    }
                    b'\r' => {
                        // line continuation
                        if bytes.get(i + 1) == Some(&b'\n') {
                            i += 1;
                        }
                    }
                    b'\n' => {}
                    other => out.push(other),
                }
                i += 1;
            }
            b'(' => {
                depth += 1;
                out.push(b);
                i += 1;
            }
            b')' => {
                if depth == 0 {
                    return Ok((out, i + 1));
                }
                depth -= 1;
                out.push(b);
                i += 1;
            }
            b'\r' => {
                // an unescaped end-of-line reads as a single LF
                out.push(b'\n');
                i += 1;
                if bytes.get(i) == Some(&b'\n') {
                    i += 1;
                }
            }
            _ => {
                out.push(b);
                i += 1;
            }
        }
    }
    Err(Error::UnterminatedString)
}

/// Decodes the bytes found between the outer parentheses of a literal
/// string.
pub fn decode_literal(body: &[u8]) -> Result<Vec<u8>> {
    let mut framed = Vec::with_capacity(body.len() + 1);
    framed.extend_from_slice(body);
    framed.push(b')');
    let (out, end) = read_literal(&framed, 0)?;
    if end != framed.len() {
        // an unescaped ')' closed the string early
        return Err(Error::UnterminatedString);
    }
    Ok(out)
}

/// Escapes raw bytes for use between the parentheses of a literal string.
///
/// Backslash, both parentheses and CR/LF are always written as 3-digit octal
/// codes, as is every byte outside printable ASCII.
pub fn encode_literal(bytes: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(bytes.len());
    for &b in bytes {
        match b {
            b'\\' | b'(' | b')' | b'\r' | b'\n' => push_octal(&mut out, b),
            0x20..=0x7e => out.push(b),
            _ => push_octal(&mut out, b),
        }
    }
    out
}

fn push_octal(out: &mut Vec<u8>, b: u8) {
    out.push(b'\\');
    out.push(b'0' + (b >> 6));
    out.push(b'0' + ((b >> 3) & 7));
    out.push(b'0' + (b & 7));
}

/// Turns string bytes into text.
pub fn decode_text(bytes: &[u8], origin: StringOrigin) -> Result<TextString> {
    let text = if let Some(rest) = bytes.strip_prefix(&[0xfe, 0xff]) {
        decode_utf16be(rest)?
    } else {
        bytes.iter().map(|&b| char::from(b)).collect()
    };
    Ok(TextString { text, origin })
}

/// Shorthand for [`decode_text`] when the origin does not matter.
pub fn text_from_bytes(bytes: &[u8]) -> Result<String> {
    decode_text(bytes, StringOrigin::Literal).map(|t| t.text)
}

fn decode_utf16be(bytes: &[u8]) -> Result<String> {
    if !bytes.len().is_multiple_of(2) {
        return Err(Error::syntax(bytes.len() + 1, "odd-length UTF-16BE text"));
    }
    let units = bytes.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]));
    let mut text = String::with_capacity(bytes.len() / 2);
    let mut offset = 2;
    for decoded in char::decode_utf16(units) {
        match decoded {
            Ok(c) => {
                text.push(c);
                offset += 2 * c.len_utf16();
            }
            Err(_) => return Err(Error::UnpairedSurrogate(offset)),
        }
    }
    Ok(text)
}

/// UTF-16BE with a leading byte-order mark.
pub fn encode_text_utf16be(text: &str) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 + text.len() * 2);
    out.extend_from_slice(&[0xfe, 0xff]);
    for unit in text.encode_utf16() {
        out.extend_from_slice(&unit.to_be_bytes());
    }
    out
}

/// Plain ASCII stays as bytes; anything else goes out as UTF-16BE so that no
/// reader has to guess at PDFDocEncoding.
pub fn encode_text(text: &str) -> Vec<u8> {
    if text.is_ascii() {
        text.as_bytes().to_vec()
    } else {
        encode_text_utf16be(text)
    }
}

/// Resolves `#xx` escapes in the bytes of a name (without the leading `/`).
pub fn decode_name(raw: &[u8]) -> Result<String> {
    let mut bytes = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == b'#' {
            let hex = raw
                .get(i + 1..i + 3)
                .and_then(|h| std::str::from_utf8(h).ok())
                .and_then(|h| u8::from_str_radix(h, 16).ok())
                .ok_or(Error::BadHexEscape(i))?;
            bytes.push(hex);
            i += 3;
        } else {
            bytes.push(raw[i]);
            i += 1;
        }
    }
    Ok(match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => e.into_bytes().iter().map(|&b| char::from(b)).collect(),
    })
}

/// Escapes a name for writing (without the leading `/`).
pub fn encode_name(name: &str) -> Vec<u8> {
    let mut out = Vec::with_capacity(name.len());
    for &b in name.as_bytes() {
        if b == b'#' || !(0x21..=0x7e).contains(&b) || is_delimiter(b) {
            out.extend_from_slice(format!("#{b:02X}").as_bytes());
        } else {
            out.push(b);
        }
    }
    out
}

/// Uppercase hex digits, as used for hex strings and checksums.
pub fn to_hex_upper(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02X}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decodes_access_tag_payload_escapes() {
        let body = br"\015<latex>\015k \134in \134RR\015</latex>\015<content>\015";
        assert_eq!(
            decode_literal(body).unwrap(),
            b"\r<latex>\rk \\in \\RR\r</latex>\r<content>\r".to_vec()
        );
    }

    #[test]
    fn decodes_plain_and_paren_escapes() {
        assert_eq!(decode_literal(b"abc").unwrap(), vec![0x61, 0x62, 0x63]);
        assert_eq!(decode_literal(br"\050x\051").unwrap(), b"(x)".to_vec());
        assert_eq!(decode_literal(b"a (b) c").unwrap(), b"a (b) c".to_vec());
    }

    #[test]
    fn short_octal_and_continuations() {
        assert_eq!(decode_literal(br"\0\7x\53").unwrap(), vec![0, 7, b'x', 0o53]);
        assert_eq!(decode_literal(b"\\101\\60a").unwrap(), b"A0a".to_vec());
        assert_eq!(decode_literal(b"ab\\\ncd").unwrap(), b"abcd".to_vec());
        assert_eq!(decode_literal(b"ab\\\r\ncd").unwrap(), b"abcd".to_vec());
        assert_eq!(decode_literal(b"a\r\nb\rc").unwrap(), b"a\nb\nc".to_vec());
        assert_eq!(decode_literal(br"\q").unwrap(), b"q".to_vec());
    }

    #[test]
    fn unterminated_literals() {
        assert_eq!(decode_literal(b"a(b"), Err(Error::UnterminatedString));
        assert_eq!(decode_literal(b"trailing\\"), Err(Error::UnterminatedString));
        assert_eq!(decode_literal(b"a)b"), Err(Error::UnterminatedString));
    }

    #[test]
    fn encodes_specials_as_octal() {
        assert_eq!(encode_literal(br"k \in \RR"), br"k \134in \134RR".to_vec());
        assert_eq!(encode_literal(b""), Vec::<u8>::new());
        assert_eq!(encode_literal(b"(a)\r\n"), br"\050a\051\015\012".to_vec());
        assert_eq!(encode_literal(&[0xfe, 0xff, 0x09]), br"\376\377\011".to_vec());
    }

    #[test]
    fn utf16_with_surrogates() {
        let k = decode_text(&[0xfe, 0xff, 0xd8, 0x35, 0xdc, 0x58], StringOrigin::Hex).unwrap();
        assert_eq!(k.text, "\u{1D458}");
        assert_eq!(k.origin, StringOrigin::Hex);
        assert_eq!(
            decode_text(&[0xfe, 0xff, 0x22, 0x08], StringOrigin::Hex).unwrap().text,
            "\u{2208}"
        );
        assert_eq!(decode_text(b"AB", StringOrigin::Literal).unwrap().text, "AB");
        assert_eq!(decode_text(&[0xe9], StringOrigin::Literal).unwrap().text, "\u{e9}");
    }

    #[test]
    fn unpaired_surrogates_are_rejected() {
        assert_eq!(
            decode_text(&[0xfe, 0xff, 0x00, 0x41, 0xd8, 0x35], StringOrigin::Hex),
            Err(Error::UnpairedSurrogate(4))
        );
        assert_eq!(
            decode_text(&[0xfe, 0xff, 0xdc, 0x58], StringOrigin::Hex),
            Err(Error::UnpairedSurrogate(2))
        );
    }

    #[test]
    fn utf16_encoding() {
        assert_eq!(encode_text_utf16be("\u{211D}"), vec![0xfe, 0xff, 0x21, 0x1d]);
        assert_eq!(
            encode_text_utf16be("\u{1D458}"),
            vec![0xfe, 0xff, 0xd8, 0x35, 0xdc, 0x58]
        );
        assert_eq!(encode_text_utf16be(""), vec![0xfe, 0xff]);
    }

    #[test]
    fn names() {
        assert_eq!(decode_name(b"application#2Fx-tex").unwrap(), "application/x-tex");
        assert_eq!(
            decode_name(b"application#2Fmathml+xml").unwrap(),
            "application/mathml+xml"
        );
        assert_eq!(decode_name(b"Formula").unwrap(), "Formula");
        assert_eq!(encode_name("application/x-tex"), b"application#2Fx-tex".to_vec());
        assert_eq!(encode_name("a b#c"), b"a#20b#23c".to_vec());
        assert_eq!(decode_name(b"bad#4"), Err(Error::BadHexEscape(3)));
        assert_eq!(decode_name(b"bad#zz"), Err(Error::BadHexEscape(3)));
    }

    proptest! {
        #[test]
        fn literal_round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            let encoded = encode_literal(&bytes);
            prop_assert!(!encoded.iter().any(|b| matches!(b, b'(' | b')' | b'\r')));
            // every backslash starts a 3-digit octal escape
            let mut i = 0;
            while i < encoded.len() {
                if encoded[i] == b'\\' {
                    prop_assert!(encoded[i + 1..i + 4].iter().all(|d| (b'0'..=b'7').contains(d)));
                    i += 4;
                } else {
                    i += 1;
                }
            }
            prop_assert_eq!(decode_literal(&encoded).unwrap(), bytes);
        }

        #[test]
        fn utf16_round_trip(text in "\\PC*") {
            let decoded = decode_text(&encode_text_utf16be(&text), StringOrigin::Hex).unwrap();
            prop_assert!(!decoded.text.chars().any(|c| (0xD800..=0xDFFF).contains(&(c as u32))));
            prop_assert_eq!(decoded.text, text);
        }

        #[test]
        fn name_round_trip(name in "\\PC{0,24}") {
            prop_assert_eq!(decode_name(&encode_name(&name)).unwrap(), name);
        }
    }
}
