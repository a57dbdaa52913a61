//! Tokenizer and recursive-descent value parser shared by the object
//! reader and the content-stream reader.

use crate::codec::{decode_name, is_regular, is_whitespace, read_literal};
use crate::cos::object::{CosValue, Dictionary, ObjectId};
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Value(CosValue),
    /// A bare word such as `obj`, `R`, `BDC` or `T*`.
    Keyword(String),
}

pub(crate) struct Parser<'a> {
    bytes: &'a [u8],
    pub pos: usize,
    allow_refs: bool,
}

impl<'a> Parser<'a> {
    pub fn new(bytes: &'a [u8], pos: usize) -> Self {
        Parser {
            bytes,
            pos,
            allow_refs: true,
        }
    }

    /// Content streams have no indirect references, so `1 0 R` there would
    /// be three operands-and-operator tokens, not a reference.
    pub fn for_content(bytes: &'a [u8]) -> Self {
        Parser {
            bytes,
            pos: 0,
            allow_refs: false,
        }
    }

    pub fn bytes(&self) -> &'a [u8] {
        self.bytes
    }

    pub fn skip_whitespace(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if is_whitespace(b) {
                self.pos += 1;
            } else if b == b'%' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\r' || c == b'\n' {
                        break;
                    }
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    /// Skips exactly one end-of-line marker (CRLF, LF or CR) if present.
    pub fn skip_eol(&mut self) {
        match self.bytes.get(self.pos) {
            Some(b'\r') => {
                self.pos += 1;
                if self.bytes.get(self.pos) == Some(&b'\n') {
                    self.pos += 1;
                }
            }
            Some(b'\n') => self.pos += 1,
            _ => {}
        }
    }

    fn regular_run(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.bytes.len() && is_regular(self.bytes[self.pos]) {
            self.pos += 1;
        }
        &self.bytes[start..self.pos]
    }

    /// Reads the next bare word, if the next token is one.
    pub fn peek_keyword(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace();
        let save = self.pos;
        let word = self.regular_run();
        self.pos = save;
        if word.is_empty() || classify_number(word).is_some() {
            None
        } else {
            Some(word)
        }
    }

    pub fn expect_keyword(&mut self, keyword: &str) -> Result<()> {
        self.skip_whitespace();
        let at = self.pos;
        let word = self.regular_run();
        if word == keyword.as_bytes() {
            Ok(())
        } else {
            Err(Error::syntax(at, format!("expected `{keyword}`")))
        }
    }

    pub fn read_unsigned(&mut self) -> Result<u64> {
        self.skip_whitespace();
        let at = self.pos;
        let word = self.regular_run();
        std::str::from_utf8(word)
            .ok()
            .filter(|w| !w.is_empty() && w.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| Error::syntax(at, "expected an unsigned integer"))
    }

    pub fn next_token(&mut self) -> Result<Option<Token>> {
        self.skip_whitespace();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let at = self.pos;
        match self.bytes[at] {
            b']' | b'}' | b'{' => {
                self.pos += 1;
                Ok(Some(Token::Keyword((self.bytes[at] as char).to_string())))
            }
            b'>' if self.bytes.get(at + 1) == Some(&b'>') => {
                self.pos += 2;
                Ok(Some(Token::Keyword(">>".into())))
            }
            b')' | b'>' => Err(Error::syntax(at, "unexpected closing delimiter")),
            b'/' | b'(' | b'<' | b'[' => self.parse_value_at_depth(0).map(|v| Some(Token::Value(v))),
            _ => {
                let word = self.regular_run();
                if word.is_empty() {
                    return Err(Error::syntax(at, "unexpected byte"));
                }
                match classify_word(word) {
                    Some(value) => {
                        let value = self.maybe_reference(value)?;
                        Ok(Some(Token::Value(value)))
                    }
                    None if starts_numeric(word) => Err(Error::syntax(at, "malformed number")),
                    None => Ok(Some(Token::Keyword(String::from_utf8_lossy(word).into_owned()))),
                }
            }
        }
    }

    /// Parses one complete value.
    pub fn parse_value(&mut self) -> Result<CosValue> {
        self.parse_value_at_depth(0)
    }

    fn parse_value_at_depth(&mut self, depth: usize) -> Result<CosValue> {
        if depth > MAX_DEPTH {
            return Err(Error::syntax(self.pos, "nesting too deep"));
        }
        self.skip_whitespace();
        let at = self.pos;
        let Some(&b) = self.bytes.get(at) else {
            return Err(Error::syntax(at, "unexpected end of input"));
        };
        match b {
            b'/' => {
                self.pos += 1;
                let raw = self.regular_run();
                Ok(CosValue::Name(decode_name(raw).map_err(|e| match e {
                    Error::BadHexEscape(i) => Error::BadHexEscape(at + 1 + i),
                    other => other,
                })?))
            }
            b'(' => {
                let (bytes, next) = read_literal(self.bytes, at + 1).map_err(|e| match e {
                    Error::UnterminatedString => Error::syntax(at, "unterminated literal string"),
                    other => other,
                })?;
                self.pos = next;
                Ok(CosValue::LiteralString(bytes))
            }
            b'<' if self.bytes.get(at + 1) == Some(&b'<') => {
                self.pos += 2;
                self.parse_dict_body(depth).map(CosValue::Dictionary)
            }
            b'<' => {
                self.pos += 1;
                self.parse_hex_body().map(CosValue::HexString)
            }
            b'[' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_whitespace();
                    match self.bytes.get(self.pos) {
                        None => return Err(Error::syntax(at, "unterminated array")),
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(CosValue::Array(items));
                        }
                        Some(_) => items.push(self.parse_value_at_depth(depth + 1)?),
                    }
                }
            }
            _ => {
                let word = self.regular_run();
                if word.is_empty() {
                    return Err(Error::syntax(at, "unexpected delimiter"));
                }
                match classify_word(word) {
                    Some(value) => self.maybe_reference(value),
                    None => Err(Error::syntax(
                        at,
                        format!("unexpected token `{}`", String::from_utf8_lossy(word)),
                    )),
                }
            }
        }
    }

    fn parse_dict_body(&mut self, depth: usize) -> Result<Dictionary> {
        let start = self.pos;
        let mut dict = Dictionary::new();
        loop {
            self.skip_whitespace();
            let at = self.pos;
            match self.bytes.get(at) {
                None => return Err(Error::syntax(start, "unterminated dictionary")),
                Some(b'>') if self.bytes.get(at + 1) == Some(&b'>') => {
                    self.pos += 2;
                    return Ok(dict);
                }
                Some(b'/') => {
                    let key = match self.parse_value_at_depth(depth + 1)? {
                        CosValue::Name(n) => n,
                        _ => unreachable!(),
                    };
                    self.skip_whitespace();
                    if self.bytes.get(self.pos) == Some(&b'>') && self.bytes.get(self.pos + 1) == Some(&b'>') {
                        return Err(Error::syntax(self.pos, format!("key /{key} has no value")));
                    }
                    let value = self.parse_value_at_depth(depth + 1)?;
                    dict.push(key, value);
                }
                Some(_) => return Err(Error::syntax(at, "dictionary key must be a name")),
            }
        }
    }

    fn parse_hex_body(&mut self) -> Result<Vec<u8>> {
        let start = self.pos - 1;
        let mut nibbles = Vec::new();
        loop {
            let Some(&b) = self.bytes.get(self.pos) else {
                return Err(Error::syntax(start, "unterminated hex string"));
            };
            self.pos += 1;
            match b {
                b'>' => break,
                b if is_whitespace(b) => {}
                b if b.is_ascii_hexdigit() => nibbles.push((b as char).to_digit(16).unwrap() as u8),
                _ => return Err(Error::syntax(self.pos - 1, "bad hex digit")),
            }
        }
        if nibbles.len() % 2 == 1 {
            nibbles.push(0);
        }
        Ok(nibbles.chunks(2).map(|p| (p[0] << 4) | p[1]).collect())
    }

    /// `<int> <int> R` becomes a reference; otherwise the first integer
    /// stands on its own and the cursor does not move past it.
    fn maybe_reference(&mut self, value: CosValue) -> Result<CosValue> {
        let CosValue::Integer(number) = value else {
            return Ok(value);
        };
        if !self.allow_refs || number < 0 || number > u32::MAX as i64 {
            return Ok(value);
        }
        let save = self.pos;
        self.skip_whitespace();
        let gen_word = self.regular_run();
        let generation = std::str::from_utf8(gen_word)
            .ok()
            .filter(|w| !w.is_empty() && w.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|w| w.parse::<u16>().ok());
        if let Some(generation) = generation {
            self.skip_whitespace();
            if self.regular_run() == b"R" {
                return Ok(CosValue::Reference(ObjectId::new(number as u32, generation)));
            }
        }
        self.pos = save;
        Ok(value)
    }
}

fn starts_numeric(word: &[u8]) -> bool {
    matches!(word[0], b'0'..=b'9' | b'+' | b'-' | b'.')
}

fn classify_word(word: &[u8]) -> Option<CosValue> {
    match word {
        b"true" => Some(CosValue::Boolean(true)),
        b"false" => Some(CosValue::Boolean(false)),
        b"null" => Some(CosValue::Null),
        _ => classify_number(word),
    }
}

fn classify_number(word: &[u8]) -> Option<CosValue> {
    let text = std::str::from_utf8(word).ok()?;
    let unsigned = text.strip_prefix(['+', '-']).unwrap_or(text);
    if unsigned.is_empty() {
        return None;
    }
    let dots = unsigned.bytes().filter(|&b| b == b'.').count();
    if dots > 1 || !unsigned.bytes().all(|b| b.is_ascii_digit() || b == b'.') || unsigned == "." {
        return None;
    }
    if dots == 0 {
        if let Ok(i) = text.parse::<i64>() {
            return Some(CosValue::Integer(i));
        }
    }
    let normalized = text.strip_prefix('+').unwrap_or(text);
    let normalized = if normalized.ends_with('.') {
        format!("{normalized}0")
    } else {
        normalized.to_string()
    };
    normalized.parse::<f64>().ok().map(CosValue::Real)
}

/// Parses one value starting at `offset`; returns it with the offset just
/// past it.
pub fn parse_value(bytes: &[u8], offset: usize) -> Result<(CosValue, usize)> {
    let mut parser = Parser::new(bytes, offset);
    let value = parser.parse_value()?;
    Ok((value, parser.pos))
}
