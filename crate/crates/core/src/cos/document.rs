use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::codec::is_regular;
use crate::cos::object::{CosValue, Dictionary, ObjectId, Stream};
use crate::cos::parser::Parser;
use crate::error::{Error, Result};

/// Something wrong with the file that lenient parsing worked around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseIssue {
    /// The xref entry does not point at the object's header.
    XrefOffsetMismatch {
        id: ObjectId,
        declared: usize,
        actual: Option<usize>,
    },
    /// The declared /Length does not reach the `endstream` keyword.
    StreamLengthMismatch { id: ObjectId, declared: i64, actual: usize },
}

/// A parsed PDF file.
#[derive(Debug, Clone)]
pub struct Document {
    pub version: String,
    objects: BTreeMap<ObjectId, CosValue>,
    pub trailer: Dictionary,
    xref: BTreeMap<ObjectId, usize>,
    free: Vec<u32>,
    issues: Vec<ParseIssue>,
}

/// Equality covers content only, not where the objects sat in the file.
impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version && self.objects == other.objects && self.trailer == other.trailer
    }
}

impl Default for Document {
    fn default() -> Self {
        Document::new()
    }
}

pub fn parse_document(bytes: &[u8]) -> Result<Document> {
    Document::parse(bytes)
}

/// Chases references from `value` to a direct value.
pub fn resolve<'a>(doc: &'a Document, value: &'a CosValue) -> Result<&'a CosValue> {
    doc.resolve(value)
}

impl Document {
    /// A one-page-tree document: catalog plus an empty /Pages node.
    pub fn new() -> Self {
        let mut objects = BTreeMap::new();
        objects.insert(
            ObjectId::from(1),
            Dictionary::new()
                .with("Type", CosValue::name("Catalog"))
                .with("Pages", ObjectId::from(2))
                .into(),
        );
        objects.insert(
            ObjectId::from(2),
            Dictionary::new()
                .with("Type", CosValue::name("Pages"))
                .with("Kids", CosValue::Array(Vec::new()))
                .with("Count", 0i64)
                .into(),
        );
        Document {
            version: "1.7".into(),
            objects,
            trailer: Dictionary::new().with("Size", 3i64).with("Root", ObjectId::from(1)),
            xref: BTreeMap::new(),
            free: Vec::new(),
            issues: Vec::new(),
        }
    }

    /// Strict parse: any xref entry that misses its object header is an error.
    pub fn parse(bytes: &[u8]) -> Result<Document> {
        Loader::new(bytes, false).load()
    }

    /// Like [`Document::parse`], but locates objects by scanning when the xref
    /// table is wrong and records what it had to repair.
    pub fn parse_lenient(bytes: &[u8]) -> Result<Document> {
        Loader::new(bytes, true).load()
    }

    pub fn parse_issues(&self) -> &[ParseIssue] {
        &self.issues
    }

    /// Byte offsets from the xref table this document was read from.
    pub fn xref_offsets(&self) -> &BTreeMap<ObjectId, usize> {
        &self.xref
    }

    /// Object numbers the xref table marked free.
    pub fn free_list(&self) -> &[u32] {
        &self.free
    }

    pub fn objects(&self) -> impl Iterator<Item = (ObjectId, &CosValue)> {
        self.objects.iter().map(|(id, v)| (*id, v))
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn get(&self, id: ObjectId) -> Option<&CosValue> {
        self.objects.get(&id)
    }

    pub fn get_mut(&mut self, id: ObjectId) -> Option<&mut CosValue> {
        self.objects.get_mut(&id)
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        self.objects.contains_key(&id)
    }

    pub fn insert(&mut self, id: ObjectId, value: CosValue) -> Option<CosValue> {
        self.objects.insert(id, value)
    }

    pub fn remove(&mut self, id: ObjectId) -> Option<CosValue> {
        self.objects.remove(&id)
    }

    /// Stores `value` under the next unused object number.
    pub fn add_object(&mut self, value: impl Into<CosValue>) -> ObjectId {
        let next = self.objects.keys().map(|id| id.number).max().unwrap_or(0) + 1;
        let id = ObjectId::from(next);
        self.objects.insert(id, value.into());
        id
    }

    pub fn get_dict(&self, id: ObjectId) -> Result<&Dictionary> {
        self.get(id)
            .ok_or(Error::DanglingReference(id))?
            .as_dict()
            .ok_or_else(|| Error::type_mismatch(format!("object {id}"), "dictionary"))
    }

    pub fn get_dict_mut(&mut self, id: ObjectId) -> Result<&mut Dictionary> {
        self.get_mut(id)
            .ok_or(Error::DanglingReference(id))?
            .as_dict_mut()
            .ok_or_else(|| Error::type_mismatch(format!("object {id}"), "dictionary"))
    }

    pub fn resolve<'a>(&'a self, value: &'a CosValue) -> Result<&'a CosValue> {
        let mut current = value;
        let mut seen = BTreeSet::new();
        while let CosValue::Reference(id) = current {
            if !seen.insert(*id) {
                return Err(Error::ReferenceCycle(*id));
            }
            current = self.objects.get(id).ok_or(Error::DanglingReference(*id))?;
        }
        Ok(current)
    }

    pub fn resolve_id(&self, id: ObjectId) -> Result<&CosValue> {
        let mut current = id;
        let mut seen = BTreeSet::new();
        loop {
            if !seen.insert(current) {
                return Err(Error::ReferenceCycle(current));
            }
            match self.objects.get(&current).ok_or(Error::DanglingReference(current))? {
                CosValue::Reference(next) => current = *next,
                value => return Ok(value),
            }
        }
    }

    /// Resolves and requires a dictionary (or stream dictionary).
    pub fn resolve_dict<'a>(&'a self, value: &'a CosValue, what: &str) -> Result<&'a Dictionary> {
        self.resolve(value)?
            .as_dict()
            .ok_or_else(|| Error::type_mismatch(what, "dictionary"))
    }

    /// Looks up `key` in `dict` and resolves it.
    pub fn lookup<'a>(&'a self, dict: &'a Dictionary, key: &str) -> Result<Option<&'a CosValue>> {
        dict.get(key).map(|v| self.resolve(v)).transpose()
    }

    pub fn root_id(&self) -> Result<ObjectId> {
        self.trailer
            .get_reference("Root")
            .ok_or_else(|| Error::type_mismatch("trailer /Root", "reference"))
    }

    pub fn catalog(&self) -> Result<&Dictionary> {
        let root = self.root_id()?;
        self.resolve_id(root)?
            .as_dict()
            .ok_or_else(|| Error::type_mismatch("/Root", "dictionary"))
    }

    pub fn catalog_mut(&mut self) -> Result<&mut Dictionary> {
        let root = self.root_id()?;
        self.get_dict_mut(root)
    }

    /// Page objects in document order.
    pub fn pages(&self) -> Result<Vec<ObjectId>> {
        let catalog = self.catalog()?;
        let Some(root) = catalog.get_reference("Pages") else {
            return Ok(Vec::new());
        };
        let mut pages = Vec::new();
        let mut seen = BTreeSet::new();
        self.collect_pages(root, &mut pages, &mut seen)?;
        Ok(pages)
    }

    fn collect_pages(&self, node: ObjectId, out: &mut Vec<ObjectId>, seen: &mut BTreeSet<ObjectId>) -> Result<()> {
        if !seen.insert(node) {
            return Err(Error::ReferenceCycle(node));
        }
        let dict = self.get_dict(node)?;
        match dict.get("Kids") {
            Some(kids) if dict.type_name() != Some("Page") => {
                let kids = self
                    .resolve(kids)?
                    .as_array()
                    .ok_or_else(|| Error::type_mismatch("/Kids", "array"))?;
                for kid in kids {
                    let id = kid
                        .as_reference()
                        .ok_or_else(|| Error::type_mismatch("page tree kid", "reference"))?;
                    self.collect_pages(id, out, seen)?;
                }
            }
            _ => out.push(node),
        }
        Ok(())
    }

    /// Zero-based index of a page object.
    pub fn page_index(&self, page: ObjectId) -> Result<Option<usize>> {
        Ok(self.pages()?.iter().position(|p| *p == page))
    }

    /// The object holding the page's effective /Resources entry, which may be
    /// an ancestor /Pages node.
    pub fn resources_holder(&self, page: ObjectId) -> Result<Option<ObjectId>> {
        let mut node = page;
        let mut seen = BTreeSet::new();
        loop {
            if !seen.insert(node) {
                return Err(Error::ReferenceCycle(node));
            }
            let dict = self.get_dict(node)?;
            if dict.contains_key("Resources") {
                return Ok(Some(node));
            }
            match dict.get_reference("Parent") {
                Some(parent) => node = parent,
                None => return Ok(None),
            }
        }
    }

    /// Effective resources of a page, following /Parent inheritance.
    pub fn page_resources(&self, page: ObjectId) -> Result<Option<&Dictionary>> {
        let Some(holder) = self.resources_holder(page)? else {
            return Ok(None);
        };
        let dict = self.get_dict(holder)?;
        self.resolve_dict(dict.get("Resources").unwrap(), "/Resources")
            .map(Some)
    }

    /// Names of the fonts in the page's resources, in dictionary order.
    pub fn page_font_names(&self, page: ObjectId) -> Result<Vec<String>> {
        let Some(resources) = self.page_resources(page)? else {
            return Ok(Vec::new());
        };
        Ok(match self.lookup(resources, "Font")? {
            Some(fonts) => fonts
                .as_dict()
                .map(|d| d.unique_entries().map(|(k, _)| k.to_string()).collect())
                .unwrap_or_default(),
            None => Vec::new(),
        })
    }

    fn content_stream_ids(&self, page: ObjectId) -> Result<Vec<ObjectId>> {
        let dict = self.get_dict(page)?;
        let Some(contents) = dict.get("Contents") else {
            return Ok(Vec::new());
        };
        let items = match contents {
            CosValue::Reference(id) => match self.resolve_id(*id)? {
                CosValue::Array(items) => items.clone(),
                _ => vec![contents.clone()],
            },
            CosValue::Array(items) => items.clone(),
            _ => return Err(Error::type_mismatch("/Contents", "reference")),
        };
        items
            .iter()
            .map(|v| {
                v.as_reference()
                    .ok_or_else(|| Error::type_mismatch("/Contents entry", "reference"))
            })
            .collect()
    }

    /// The page's content, with the pieces of a /Contents array joined by a
    /// newline.
    pub fn page_content(&self, page: ObjectId) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for (i, id) in self.content_stream_ids(page)?.into_iter().enumerate() {
            let stream = self
                .resolve_id(id)?
                .as_stream()
                .ok_or_else(|| Error::type_mismatch(format!("content object {id}"), "stream"))?;
            if i > 0 {
                out.push(b'\n');
            }
            out.extend_from_slice(&stream.data);
        }
        Ok(out)
    }

    /// Replaces the page content. A /Contents array collapses onto its first
    /// stream.
    pub fn set_page_content(&mut self, page: ObjectId, data: Vec<u8>) -> Result<()> {
        let ids = self.content_stream_ids(page)?;
        let length = data.len() as i64;
        match ids.first() {
            Some(&first) if matches!(self.get(first), Some(CosValue::Stream(_))) => {
                if let Some(CosValue::Stream(s)) = self.get_mut(first) {
                    s.data = data;
                    s.dict.set("Length", length);
                }
                if ids.len() > 1 {
                    self.get_dict_mut(page)?.set("Contents", first);
                }
            }
            _ => {
                let id = self.add_object(CosValue::Stream(Stream::new(
                    Dictionary::new().with("Length", length),
                    data,
                )));
                self.get_dict_mut(page)?.set("Contents", id);
            }
        }
        Ok(())
    }

    /// Appends a page under the root /Pages node.
    pub fn add_page(&mut self, content: Vec<u8>, resources: Dictionary) -> Result<ObjectId> {
        let pages = self
            .catalog()?
            .get_reference("Pages")
            .ok_or_else(|| Error::type_mismatch("/Pages", "reference"))?;
        let contents = self.add_object(CosValue::Stream(Stream::new(
            Dictionary::new().with("Length", content.len() as i64),
            content,
        )));
        let page = self.add_object(
            Dictionary::new()
                .with("Type", CosValue::name("Page"))
                .with("Parent", pages)
                .with(
                    "MediaBox",
                    CosValue::Array([0, 0, 612, 792].into_iter().map(CosValue::Integer).collect()),
                )
                .with("Resources", resources)
                .with("Contents", contents),
        );
        let node = self.get_dict_mut(pages)?;
        match node.get_mut("Kids").and_then(CosValue::as_array_mut) {
            Some(kids) => kids.push(page.into()),
            None => node.set("Kids", CosValue::Array(vec![page.into()])),
        }
        let count = node.get_i64("Count").unwrap_or(0) + 1;
        node.set("Count", count);
        Ok(page)
    }

    /// The form the writer emits: generations zeroed, duplicate keys dropped,
    /// stream lengths recomputed, trailer /Size refreshed.
    pub fn canonical(&self) -> Document {
        let zero = |id: ObjectId| ObjectId::new(id.number, 0);
        let objects: BTreeMap<_, _> = self
            .objects
            .iter()
            .map(|(id, v)| {
                let mut v = v.clone();
                v.map_references(&zero);
                normalize(&mut v);
                (zero(*id), v)
            })
            .collect();
        let size = objects.keys().map(|id| id.number as i64).max().unwrap_or(0) + 1;
        let mut trailer = Dictionary::new().with("Size", size);
        for (key, value) in self.trailer.unique_entries() {
            if !matches!(key, "Size" | "Prev" | "XRefStm") {
                let mut value = value.clone();
                value.map_references(&zero);
                normalize(&mut value);
                trailer.push(key, value);
            }
        }
        Document {
            version: self.version.clone(),
            objects,
            trailer,
            xref: BTreeMap::new(),
            free: Vec::new(),
            issues: Vec::new(),
        }
    }
}

fn normalize(value: &mut CosValue) {
    match value {
        CosValue::Array(items) => items.iter_mut().for_each(normalize),
        CosValue::Dictionary(d) => {
            d.dedup();
            d.entries_mut().iter_mut().for_each(|(_, v)| normalize(v));
        }
        CosValue::Stream(s) => {
            s.dict.dedup();
            s.dict.entries_mut().iter_mut().for_each(|(_, v)| normalize(v));
            s.dict.set("Length", s.data.len() as i64);
        }
        _ => {}
    }
}

fn find(hay: &[u8], needle: &[u8], from: usize) -> Option<usize> {
    if from >= hay.len() {
        return None;
    }
    hay[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

fn rfind(hay: &[u8], needle: &[u8]) -> Option<usize> {
    hay.windows(needle.len()).rposition(|w| w == needle)
}

struct Loader<'a> {
    bytes: &'a [u8],
    lenient: bool,
    xref: BTreeMap<ObjectId, usize>,
    headers: Option<HashMap<u32, (u16, usize)>>,
    issues: Vec<ParseIssue>,
}

impl<'a> Loader<'a> {
    fn new(bytes: &'a [u8], lenient: bool) -> Self {
        Loader {
            bytes,
            lenient,
            xref: BTreeMap::new(),
            headers: None,
            issues: Vec::new(),
        }
    }

    fn load(mut self) -> Result<Document> {
        let version = self.header()?;
        let startxref =
            rfind(self.bytes, b"startxref").ok_or_else(|| Error::MalformedXref("no startxref keyword".into()))?;
        let mut p = Parser::new(self.bytes, startxref + b"startxref".len());
        let xref_at = p
            .read_unsigned()
            .map_err(|_| Error::MalformedXref("startxref has no offset".into()))? as usize;
        let (free, trailer) = self.xref_table(xref_at)?;
        for key in ["Prev", "XRefStm", "Encrypt"] {
            if trailer.contains_key(key) {
                return Err(Error::UnsupportedFeature(format!("trailer /{key}")));
            }
        }
        let mut objects = BTreeMap::new();
        for id in self.xref.keys().copied().collect::<Vec<_>>() {
            let at = self.locate(id)?;
            let (found, value) = self.object_at(at)?;
            objects.insert(found, value);
        }
        Ok(Document {
            version,
            objects,
            trailer,
            xref: self.xref,
            free,
            issues: self.issues,
        })
    }

    fn header(&self) -> Result<String> {
        if self.bytes.is_empty() {
            return Err(Error::syntax(0, "empty input"));
        }
        let window = &self.bytes[..self.bytes.len().min(1024)];
        let at = find(window, b"%PDF-", 0).ok_or_else(|| Error::syntax(0, "missing %PDF- header"))?;
        let rest = &self.bytes[at + 5..];
        let end = rest
            .iter()
            .position(|&b| !is_regular(b) || b == b'%')
            .unwrap_or(rest.len());
        Ok(String::from_utf8_lossy(&rest[..end]).into_owned())
    }

    fn xref_table(&mut self, at: usize) -> Result<(Vec<u32>, Dictionary)> {
        if at >= self.bytes.len() {
            return Err(Error::MalformedXref(format!("startxref offset {at} is past the end")));
        }
        let mut p = Parser::new(self.bytes, at);
        match p.peek_keyword() {
            Some(b"xref") => p.expect_keyword("xref")?,
            _ => {
                let mut probe = Parser::new(self.bytes, at);
                if probe.read_unsigned().is_ok() && probe.read_unsigned().is_ok() && probe.expect_keyword("obj").is_ok()
                {
                    return Err(Error::UnsupportedFeature("cross-reference stream".into()));
                }
                return Err(Error::MalformedXref(format!("no xref table at offset {at}")));
            }
        }
        let bad = |what: &str| Error::MalformedXref(what.to_string());
        let mut free = Vec::new();
        loop {
            if p.peek_keyword() == Some(b"trailer") {
                p.expect_keyword("trailer")?;
                break;
            }
            let start = p.read_unsigned().map_err(|_| bad("bad subsection header"))?;
            let count = p.read_unsigned().map_err(|_| bad("bad subsection header"))?;
            for number in start..start + count {
                let offset = p.read_unsigned().map_err(|_| bad("bad entry offset"))?;
                let generation = p.read_unsigned().map_err(|_| bad("bad entry generation"))?;
                p.skip_whitespace();
                let kind = self.bytes.get(p.pos).copied();
                p.pos += 1;
                let number = u32::try_from(number).map_err(|_| bad("object number too large"))?;
                let generation = u16::try_from(generation).map_err(|_| bad("generation too large"))?;
                match kind {
                    Some(b'n') => {
                        if number == 0 {
                            return Err(bad("object 0 marked in use"));
                        }
                        self.xref.insert(ObjectId::new(number, generation), offset as usize);
                    }
                    Some(b'f') => {
                        if number != 0 {
                            free.push(number);
                        }
                    }
                    _ => return Err(bad("entry type must be n or f")),
                }
            }
        }
        let trailer = match p.parse_value() {
            Ok(CosValue::Dictionary(d)) => d,
            Ok(_) => return Err(bad("trailer is not a dictionary")),
            Err(e) => return Err(e),
        };
        Ok((free, trailer))
    }

    fn header_at(&self, at: usize) -> Option<ObjectId> {
        if at > 0 && is_regular(self.bytes[at - 1]) {
            return None;
        }
        let mut p = Parser::new(self.bytes, at);
        if self.bytes.get(at).is_none_or(|b| !b.is_ascii_digit()) {
            return None;
        }
        let number = u32::try_from(p.read_unsigned().ok()?).ok()?;
        let generation = u16::try_from(p.read_unsigned().ok()?).ok()?;
        p.expect_keyword("obj").ok()?;
        Some(ObjectId::new(number, generation))
    }

    /// Every `n g obj` header in the file; later ones win.
    fn scan_headers(&self) -> HashMap<u32, (u16, usize)> {
        let mut found = HashMap::new();
        let mut from = 0;
        while let Some(obj) = find(self.bytes, b"obj", from) {
            from = obj + 3;
            if self.bytes.get(obj + 3).is_some_and(|&b| is_regular(b)) {
                continue;
            }
            let line_start = self.bytes[..obj]
                .iter()
                .rposition(|&b| b == b'\n' || b == b'\r')
                .map_or(0, |i| i + 1);
            let mut at = line_start;
            while at < obj && !self.bytes[at].is_ascii_digit() {
                at += 1;
            }
            if let Some(id) = self.header_at(at) {
                found.insert(id.number, (id.generation, at));
            }
        }
        found
    }

    fn locate(&mut self, id: ObjectId) -> Result<usize> {
        let declared = self.xref[&id];
        if declared < self.bytes.len() && self.header_at(declared).map(|h| h.number) == Some(id.number) {
            return Ok(declared);
        }
        if !self.lenient {
            return Err(Error::MalformedXref(format!(
                "entry for object {id} points at offset {declared}, which is not its header"
            )));
        }
        if self.headers.is_none() {
            self.headers = Some(self.scan_headers());
        }
        let actual = self.headers.as_ref().unwrap().get(&id.number).map(|&(_, at)| at);
        let issue = ParseIssue::XrefOffsetMismatch { id, declared, actual };
        if !self.issues.contains(&issue) {
            self.issues.push(issue);
        }
        actual.ok_or_else(|| Error::MalformedXref(format!("object {id} not found in file")))
    }

    fn object_at(&mut self, at: usize) -> Result<(ObjectId, CosValue)> {
        let id = self
            .header_at(at)
            .ok_or_else(|| Error::syntax(at, "expected an object header"))?;
        let mut p = Parser::new(self.bytes, at);
        p.read_unsigned()?;
        p.read_unsigned()?;
        p.expect_keyword("obj")?;
        let value = p.parse_value()?;
        if p.peek_keyword() != Some(b"stream") {
            return Ok((id, value));
        }
        let CosValue::Dictionary(dict) = value else {
            return Err(Error::syntax(p.pos, "stream without a dictionary"));
        };
        if dict.contains_key("Filter") {
            return Err(Error::UnsupportedFeature(format!("/Filter on stream {id}")));
        }
        if let Some(kind @ ("XRef" | "ObjStm")) = dict.type_name() {
            return Err(Error::UnsupportedFeature(format!("/Type /{kind} stream")));
        }
        p.expect_keyword("stream")?;
        p.skip_eol();
        let data_start = p.pos;
        let declared = match dict.get("Length") {
            Some(CosValue::Integer(n)) => *n,
            Some(CosValue::Reference(r)) => self.indirect_length(*r)?,
            Some(_) => return Err(Error::type_mismatch(format!("/Length of {id}"), "integer")),
            None => return Err(Error::syntax(data_start, format!("stream {id} has no /Length"))),
        };
        let data_end = match self.stream_end_at(data_start, declared) {
            Some(end) => end,
            None => {
                let end = self
                    .scan_stream_end(data_start)
                    .ok_or_else(|| Error::syntax(data_start, format!("stream {id} has no endstream")))?;
                self.issues.push(ParseIssue::StreamLengthMismatch {
                    id,
                    declared,
                    actual: end - data_start,
                });
                end
            }
        };
        let data = self.bytes[data_start..data_end].to_vec();
        Ok((id, CosValue::Stream(Stream::new(dict, data))))
    }

    /// End of data if `declared` bytes are followed by an EOL and `endstream`.
    fn stream_end_at(&self, data_start: usize, declared: i64) -> Option<usize> {
        let end = data_start.checked_add(usize::try_from(declared).ok()?)?;
        let rest = self.bytes.get(end..)?;
        let eol = if rest.starts_with(b"\r\n") {
            2
        } else if rest.starts_with(b"\n") || rest.starts_with(b"\r") {
            1
        } else {
            0
        };
        rest[eol..].starts_with(b"endstream").then_some(end)
    }

    /// Finds `endstream` followed by `endobj`, dropping one EOL before it.
    fn scan_stream_end(&self, data_start: usize) -> Option<usize> {
        let mut from = data_start;
        while let Some(at) = find(self.bytes, b"endstream", from) {
            from = at + 1;
            let mut p = Parser::new(self.bytes, at + b"endstream".len());
            if p.peek_keyword() != Some(b"endobj") {
                continue;
            }
            let mut end = at;
            if end > data_start && self.bytes[end - 1] == b'\n' {
                end -= 1;
            }
            if end > data_start && self.bytes[end - 1] == b'\r' {
                end -= 1;
            }
            return Some(end);
        }
        None
    }

    fn indirect_length(&mut self, id: ObjectId) -> Result<i64> {
        let key = self
            .xref
            .keys()
            .find(|k| k.number == id.number)
            .copied()
            .ok_or(Error::DanglingReference(id))?;
        let at = self.locate(key)?;
        let mut p = Parser::new(self.bytes, at);
        p.read_unsigned()?;
        p.read_unsigned()?;
        p.expect_keyword("obj")?;
        p.parse_value()?
            .as_i64()
            .ok_or_else(|| Error::type_mismatch(format!("/Length object {id}"), "integer"))
    }
}
