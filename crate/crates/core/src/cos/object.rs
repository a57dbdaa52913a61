use std::fmt;

use serde::Serialize;

use crate::codec::{decode_text, StringOrigin};
use crate::error::Result;

/// Object number and generation of an indirect object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ObjectId {
    pub number: u32,
    pub generation: u16,
}

impl ObjectId {
    pub const fn new(number: u32, generation: u16) -> Self {
        ObjectId { number, generation }
    }
}

impl From<u32> for ObjectId {
    fn from(number: u32) -> Self {
        ObjectId::new(number, 0)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.number, self.generation)
    }
}

/// A stream: its dictionary plus the raw bytes between `stream` and
/// `endstream`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stream {
    pub dict: Dictionary,
    pub data: Vec<u8>,
}

impl Stream {
    pub fn new(dict: Dictionary, data: Vec<u8>) -> Self {
        Stream { dict, data }
    }
}

/// One PDF value.
#[derive(Debug, Clone, PartialEq)]
pub enum CosValue {
    Null,
    Boolean(bool),
    Integer(i64),
    Real(f64),
    /// Bytes after escape processing.
    LiteralString(Vec<u8>),
    HexString(Vec<u8>),
    /// Name text after `#xx` decoding, without the leading slash.
    Name(String),
    Array(Vec<CosValue>),
    Dictionary(Dictionary),
    Stream(Stream),
    Reference(ObjectId),
}

impl CosValue {
    pub fn name(name: impl Into<String>) -> Self {
        CosValue::Name(name.into())
    }

    pub fn literal(bytes: impl Into<Vec<u8>>) -> Self {
        CosValue::LiteralString(bytes.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CosValue::Null => "null",
            CosValue::Boolean(_) => "boolean",
            CosValue::Integer(_) => "integer",
            CosValue::Real(_) => "real",
            CosValue::LiteralString(_) | CosValue::HexString(_) => "string",
            CosValue::Name(_) => "name",
            CosValue::Array(_) => "array",
            CosValue::Dictionary(_) => "dictionary",
            CosValue::Stream(_) => "stream",
            CosValue::Reference(_) => "reference",
        }
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            CosValue::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match *self {
            CosValue::Integer(i) => Some(i),
            CosValue::Real(r) if r.fract() == 0.0 && r.abs() < 9.0e15 => Some(r as i64),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            CosValue::Integer(i) => Some(i as f64),
            CosValue::Real(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            CosValue::Boolean(b) => Some(b),
            _ => None,
        }
    }

    /// Raw bytes of either string form.
    pub fn as_string_bytes(&self) -> Option<&[u8]> {
        match self {
            CosValue::LiteralString(b) | CosValue::HexString(b) => Some(b),
            _ => None,
        }
    }

    /// Decodes a string value as text.
    pub fn as_text(&self) -> Option<Result<String>> {
        match self {
            CosValue::LiteralString(b) => Some(decode_text(b, StringOrigin::Literal).map(|t| t.text)),
            CosValue::HexString(b) => Some(decode_text(b, StringOrigin::Hex).map(|t| t.text)),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&Vec<CosValue>> {
        match self {
            CosValue::Array(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_array_mut(&mut self) -> Option<&mut Vec<CosValue>> {
        match self {
            CosValue::Array(a) => Some(a),
            _ => None,
        }
    }

    /// The dictionary of a dictionary or of a stream.
    pub fn as_dict(&self) -> Option<&Dictionary> {
        match self {
            CosValue::Dictionary(d) => Some(d),
            CosValue::Stream(s) => Some(&s.dict),
            _ => None,
        }
    }

    pub fn as_dict_mut(&mut self) -> Option<&mut Dictionary> {
        match self {
            CosValue::Dictionary(d) => Some(d),
            CosValue::Stream(s) => Some(&mut s.dict),
            _ => None,
        }
    }

    pub fn as_stream(&self) -> Option<&Stream> {
        match self {
            CosValue::Stream(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_reference(&self) -> Option<ObjectId> {
        match *self {
            CosValue::Reference(id) => Some(id),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, CosValue::Null)
    }

    /// Calls `f` on every reference nested anywhere in this value.
    pub fn visit_references(&self, f: &mut impl FnMut(ObjectId)) {
        match self {
            CosValue::Reference(id) => f(*id),
            CosValue::Array(items) => items.iter().for_each(|v| v.visit_references(f)),
            CosValue::Dictionary(d) => d.iter().for_each(|(_, v)| v.visit_references(f)),
            CosValue::Stream(s) => s.dict.iter().for_each(|(_, v)| v.visit_references(f)),
            _ => {}
        }
    }

    pub(crate) fn map_references(&mut self, f: &impl Fn(ObjectId) -> ObjectId) {
        match self {
            CosValue::Reference(id) => *id = f(*id),
            CosValue::Array(items) => items.iter_mut().for_each(|v| v.map_references(f)),
            CosValue::Dictionary(d) => d.entries.iter_mut().for_each(|(_, v)| v.map_references(f)),
            CosValue::Stream(s) => s.dict.entries.iter_mut().for_each(|(_, v)| v.map_references(f)),
            _ => {}
        }
    }
}

impl From<ObjectId> for CosValue {
    fn from(id: ObjectId) -> Self {
        CosValue::Reference(id)
    }
}

impl From<i64> for CosValue {
    fn from(i: i64) -> Self {
        CosValue::Integer(i)
    }
}

impl From<Dictionary> for CosValue {
    fn from(d: Dictionary) -> Self {
        CosValue::Dictionary(d)
    }
}

/// Ordered key/value pairs. Duplicate keys are kept as read; lookups see the
/// first occurrence only.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dictionary {
    entries: Vec<(String, CosValue)>,
}

impl Dictionary {
    pub fn new() -> Self {
        Dictionary::default()
    }

    /// Value of the first entry with this key.
    pub fn get(&self, key: &str) -> Option<&CosValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_mut(&mut self, key: &str) -> Option<&mut CosValue> {
        self.entries.iter_mut().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    /// Replaces the first entry with this key in place, or appends.
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<CosValue>) {
        let key = key.into();
        let value = value.into();
        match self.get_mut(&key) {
            Some(slot) => *slot = value,
            None => self.entries.push((key, value)),
        }
    }

    /// Builder-style [`Dictionary::set`].
    pub fn with(mut self, key: impl Into<String>, value: impl Into<CosValue>) -> Self {
        self.set(key, value);
        self
    }

    /// Appends without checking for an existing key.
    pub fn push(&mut self, key: impl Into<String>, value: CosValue) {
        self.entries.push((key.into(), value));
    }

    /// Removes every entry with this key, returning the first value.
    pub fn remove(&mut self, key: &str) -> Option<CosValue> {
        let mut first = None;
        let mut kept = Vec::with_capacity(self.entries.len());
        for (k, v) in self.entries.drain(..) {
            if k == key {
                if first.is_none() {
                    first = Some(v);
                }
            } else {
                kept.push((k, v));
            }
        }
        self.entries = kept;
        first
    }

    /// All entries including duplicates, in file order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &CosValue)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Entries with later duplicates dropped.
    pub fn unique_entries(&self) -> impl Iterator<Item = (&str, &CosValue)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(i, (k, _))| !self.entries[..*i].iter().any(|(p, _)| p == k))
            .map(|(_, (k, v))| (k.as_str(), v))
    }

    pub fn has_duplicates(&self) -> bool {
        self.unique_entries().count() != self.entries.len()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Drops later duplicates.
    pub fn dedup(&mut self) {
        let mut seen: Vec<String> = Vec::new();
        self.entries.retain(|(k, _)| {
            if seen.contains(k) {
                false
            } else {
                seen.push(k.clone());
                true
            }
        });
    }

    /// The `/Type` name, if any.
    pub fn type_name(&self) -> Option<&str> {
        self.get("Type").and_then(CosValue::as_name)
    }

    pub fn get_name(&self, key: &str) -> Option<&str> {
        self.get(key).and_then(CosValue::as_name)
    }

    pub fn get_i64(&self, key: &str) -> Option<i64> {
        self.get(key).and_then(CosValue::as_i64)
    }

    pub fn get_reference(&self, key: &str) -> Option<ObjectId> {
        self.get(key).and_then(CosValue::as_reference)
    }

    /// Decoded text of a string-valued entry.
    pub fn get_text(&self, key: &str) -> Option<String> {
        self.get(key).and_then(CosValue::as_text).and_then(|r| r.ok())
    }

    pub(crate) fn entries_mut(&mut self) -> &mut Vec<(String, CosValue)> {
        &mut self.entries
    }
}

impl FromIterator<(String, CosValue)> for Dictionary {
    fn from_iter<I: IntoIterator<Item = (String, CosValue)>>(iter: I) -> Self {
        Dictionary {
            entries: iter.into_iter().collect(),
        }
    }
}

/// First-occurrence lookup.
pub fn dict_get<'a>(dict: &'a Dictionary, key: &str) -> Option<&'a CosValue> {
    dict.get(key)
}
