//! Cross-object consistency checks over a whole file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::access_tags::{span_payload, AccessTagPayload};
use crate::attachments::{
    collect_af_references, declared_checksum, declared_size, md5_digest, name_tree_entries, registry,
};
use crate::codec::to_hex_upper;
use crate::content::{build_span_tree, check_well_formed, parse_content, spans, ContentNode};
use crate::cos::{CosValue, Dictionary, Document, ObjectId, ParseIssue};
use crate::error::{Error, Result};
use crate::structure::{parse_structure_lenient, struct_tree_root};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Code {
    XrefOffset,
    StreamLength,
    DanglingRef,
    ContentSyntax,
    TextEncoding,
    NameTreeMalformed,
    NameTreeUnsorted,
    NameTreeDuplicate,
    FilespecMissingType,
    NotAFilespec,
    EmbeddedFileMissing,
    SizeMismatch,
    ChecksumMismatch,
    AfUnregistered,
    RegistryDuplicate,
    StructMalformed,
    StructParentMismatch,
    StructCycle,
    DanglingMcid,
    DuplicateMcid,
    McidMultiplyClaimed,
    UnclaimedMcid,
    ParentTreeMismatch,
    UnbalancedMarkedContent,
    UnbalancedTextBlock,
    AccessTagMalformed,
    AccessTagUnbalanced,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::XrefOffset => "XREF_OFFSET",
            Code::StreamLength => "STREAM_LENGTH",
            Code::DanglingRef => "DANGLING_REF",
            Code::ContentSyntax => "CONTENT_SYNTAX",
            Code::TextEncoding => "TEXT_ENCODING",
            Code::NameTreeMalformed => "NAME_TREE_MALFORMED",
            Code::NameTreeUnsorted => "NAME_TREE_UNSORTED",
            Code::NameTreeDuplicate => "NAME_TREE_DUPLICATE",
            Code::FilespecMissingType => "FILESPEC_MISSING_TYPE",
            Code::NotAFilespec => "NOT_A_FILESPEC",
            Code::EmbeddedFileMissing => "EMBEDDED_FILE_MISSING",
            Code::SizeMismatch => "SIZE_MISMATCH",
            Code::ChecksumMismatch => "CHECKSUM_MISMATCH",
            Code::AfUnregistered => "AF_UNREGISTERED",
            Code::RegistryDuplicate => "REGISTRY_DUPLICATE",
            Code::StructMalformed => "STRUCT_MALFORMED",
            Code::StructParentMismatch => "STRUCT_PARENT_MISMATCH",
            Code::StructCycle => "STRUCT_CYCLE",
            Code::DanglingMcid => "DANGLING_MCID",
            Code::DuplicateMcid => "DUPLICATE_MCID",
            Code::McidMultiplyClaimed => "MCID_MULTIPLY_CLAIMED",
            Code::UnclaimedMcid => "UNCLAIMED_MCID",
            Code::ParentTreeMismatch => "PARENT_TREE_MISMATCH",
            Code::UnbalancedMarkedContent => "UNBALANCED_MARKED_CONTENT",
            Code::UnbalancedTextBlock => "UNBALANCED_TEXT_BLOCK",
            Code::AccessTagMalformed => "ACCESS_TAG_MALFORMED",
            Code::AccessTagUnbalanced => "ACCESS_TAG_UNBALANCED",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub code: Code,
    pub object: Option<ObjectId>,
    /// Zero-based page index.
    pub page: Option<usize>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)?;
        if let Some(id) = self.object {
            write!(f, " [obj {id}]")?;
        }
        if let Some(page) = self.page {
            write!(f, " [page {page}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn codes(&self) -> BTreeSet<Code> {
        self.findings.iter().map(|f| f.code).collect()
    }
}

/// Parses leniently and checks the file. Only files that cannot be parsed at
/// all are errors.
pub fn validate_bytes(bytes: &[u8]) -> Result<ValidationReport> {
    Ok(validate(&Document::parse_lenient(bytes)?))
}

pub fn validate(doc: &Document) -> ValidationReport {
    let mut v = Validator {
        doc,
        findings: Vec::new(),
    };
    v.parse_issues();
    v.references();
    v.text_strings();
    let pages = v.pages();
    v.name_tree();
    v.associations();
    v.structure(&pages);
    let mut findings = v.findings;
    findings.sort();
    findings.dedup();
    ValidationReport { findings }
}

/// Keys whose string values are text strings.
const TEXT_KEYS: &[&str] = &[
    "ActualText",
    "Alt",
    "Desc",
    "UF",
    "T",
    "TU",
    "Title",
    "Author",
    "Subject",
    "E",
];

/// The parsed content of one page, when it parsed.
struct PageContent {
    id: ObjectId,
    nodes: Option<Vec<ContentNode>>,
}

struct Validator<'a> {
    doc: &'a Document,
    findings: Vec<Finding>,
}

impl Validator<'_> {
    fn add(&mut self, code: Code, object: Option<ObjectId>, page: Option<usize>, message: impl Into<String>) {
        self.findings.push(Finding {
            code,
            object,
            page,
            message: message.into(),
        });
    }

    fn parse_issues(&mut self) {
        for issue in self.doc.parse_issues() {
            match issue {
                ParseIssue::XrefOffsetMismatch { id, declared, actual } => {
                    let actual = actual.map_or("nowhere".to_string(), |a| a.to_string());
                    self.add(
                        Code::XrefOffset,
                        Some(*id),
                        None,
                        format!("xref says offset {declared}, object header found at {actual}"),
                    );
                }
                ParseIssue::StreamLengthMismatch { id, declared, actual } => self.add(
                    Code::StreamLength,
                    Some(*id),
                    None,
                    format!("/Length {declared} but the stream data is {actual} bytes"),
                ),
            }
        }
    }

    fn references(&mut self) {
        let mut missing = Vec::new();
        for (holder, value) in self.doc.objects() {
            value.visit_references(&mut |id| {
                if !self.doc.contains(id) {
                    missing.push((Some(holder), id));
                }
            });
        }
        CosValue::Dictionary(self.doc.trailer.clone()).visit_references(&mut |id| {
            if !self.doc.contains(id) {
                missing.push((None, id));
            }
        });
        for (holder, id) in missing {
            self.add(
                Code::DanglingRef,
                holder,
                None,
                format!("reference to missing object {id}"),
            );
        }
    }

    fn text_strings(&mut self) {
        let mut bad = Vec::new();
        for (id, value) in self.doc.objects() {
            if let Some(dict) = value.as_dict() {
                for (key, v) in dict.unique_entries() {
                    if TEXT_KEYS.contains(&key) {
                        if let Some(Err(e)) = v.as_text() {
                            bad.push((id, format!("/{key}: {e}")));
                        }
                    }
                }
            }
        }
        for (id, message) in bad {
            self.add(Code::TextEncoding, Some(id), None, message);
        }
    }

    fn pages(&mut self) -> Vec<PageContent> {
        let pages = match self.doc.pages() {
            Ok(p) => p,
            Err(e) => {
                self.add(Code::DanglingRef, None, None, format!("page tree: {e}"));
                return Vec::new();
            }
        };
        pages
            .into_iter()
            .enumerate()
            .map(|(index, id)| PageContent {
                id,
                nodes: self.page_content(index, id),
            })
            .collect()
    }

    fn page_content(&mut self, index: usize, page: ObjectId) -> Option<Vec<ContentNode>> {
        let page_no = Some(index);
        let bytes = match self.doc.page_content(page) {
            Ok(b) => b,
            Err(e) => {
                self.add(
                    Code::ContentSyntax,
                    Some(page),
                    page_no,
                    format!("content unreadable: {e}"),
                );
                return None;
            }
        };
        let ops = match parse_content(&bytes) {
            Ok(ops) => ops,
            Err(e @ Error::UnbalancedTextBlock(_)) => {
                self.add(Code::UnbalancedTextBlock, Some(page), page_no, e.to_string());
                return None;
            }
            Err(e) => {
                self.add(Code::ContentSyntax, Some(page), page_no, e.to_string());
                return None;
            }
        };
        if let Err(e) = check_well_formed(&ops) {
            let code = match e {
                Error::WellFormedness(ref m) if m.contains("marked-content") || m.contains("EMC") => {
                    Code::UnbalancedMarkedContent
                }
                _ => Code::ContentSyntax,
            };
            self.add(code, Some(page), page_no, e.to_string());
            if code == Code::UnbalancedMarkedContent {
                return None;
            }
        }
        let nodes = match build_span_tree(ops) {
            Ok(nodes) => nodes,
            Err(e) => {
                self.add(Code::UnbalancedMarkedContent, Some(page), page_no, e.to_string());
                return None;
            }
        };

        let mut seen = BTreeMap::new();
        let mut open = false;
        for span in spans(&nodes) {
            if let Some(mcid) = span.mcid() {
                *seen.entry(mcid).or_insert(0) += 1;
            }
            for key in ["ActualText", "Alt"] {
                if let Some(Err(e)) = span
                    .inline_properties()
                    .and_then(|d| d.get(key))
                    .and_then(CosValue::as_text)
                {
                    self.add(
                        Code::TextEncoding,
                        Some(page),
                        page_no,
                        format!("/{key} of /{} span: {e}", span.tag),
                    );
                }
            }
            match span_payload(span) {
                Ok(Some(AccessTagPayload::Opening(_))) => {
                    if open {
                        self.add(
                            Code::AccessTagUnbalanced,
                            Some(page),
                            page_no,
                            "opening access tag inside an open one",
                        );
                    }
                    open = true;
                }
                Ok(Some(AccessTagPayload::Closing)) => {
                    if !open {
                        self.add(
                            Code::AccessTagUnbalanced,
                            Some(page),
                            page_no,
                            "closing access tag without an opening one",
                        );
                    }
                    open = false;
                }
                Ok(None) => {}
                Err(e) => self.add(Code::AccessTagMalformed, Some(page), page_no, e.to_string()),
            }
        }
        if open {
            self.add(
                Code::AccessTagUnbalanced,
                Some(page),
                page_no,
                "opening access tag never closed",
            );
        }
        for (mcid, count) in seen {
            if count > 1 {
                self.add(
                    Code::DuplicateMcid,
                    Some(page),
                    page_no,
                    format!("MCID {mcid} marks {count} sequences"),
                );
            }
        }
        Some(nodes)
    }

    /// Checks that `id` is a Filespec with an intact embedded file.
    fn filespec(&mut self, id: ObjectId) {
        let Some(value) = self.doc.get(id) else {
            return;
        };
        let Some(dict) = value.as_dict().filter(|_| !matches!(value, CosValue::Stream(_))) else {
            self.add(
                Code::NotAFilespec,
                Some(id),
                None,
                format!("object {id} is a {}", value.kind()),
            );
            return;
        };
        match dict.type_name() {
            Some("Filespec") => {}
            None if ["EF", "F", "UF"].iter().any(|k| dict.contains_key(k)) => {
                self.add(
                    Code::FilespecMissingType,
                    Some(id),
                    None,
                    "file specification without /Type /Filespec",
                );
            }
            other => {
                let what = other.map_or("untyped dictionary".to_string(), |t| format!("/{t}"));
                self.add(Code::NotAFilespec, Some(id), None, format!("object {id} is a {what}"));
                return;
            }
        }
        let dict = dict.clone();
        self.embedded_file(id, &dict);
    }

    fn embedded_file(&mut self, spec: ObjectId, dict: &Dictionary) {
        let stream = dict
            .get("EF")
            .and_then(|ef| self.doc.resolve(ef).ok())
            .and_then(CosValue::as_dict)
            .and_then(|ef| ef.get("UF").or_else(|| ef.get("F")))
            .and_then(|f| self.doc.resolve(f).ok())
            .and_then(CosValue::as_stream)
            .cloned();
        let Some(stream) = stream else {
            self.add(Code::EmbeddedFileMissing, Some(spec), None, "no /EF stream");
            return;
        };
        let params = stream
            .dict
            .get("Params")
            .and_then(|p| self.doc.resolve(p).ok())
            .and_then(CosValue::as_dict)
            .cloned()
            .unwrap_or_default();
        let len = stream.data.len();
        match declared_size(&params) {
            Some(n) if n == len as i64 => {}
            Some(n) => self.add(
                Code::SizeMismatch,
                Some(spec),
                None,
                format!("/Size {n}, payload {len} bytes"),
            ),
            None => self.add(Code::SizeMismatch, Some(spec), None, "no /Params /Size"),
        }
        let digest = md5_digest(&stream.data);
        match declared_checksum(&params) {
            Some(sum) if sum == digest => {}
            Some(sum) => self.add(
                Code::ChecksumMismatch,
                Some(spec),
                None,
                format!(
                    "/CheckSum {}, payload MD5 {}",
                    to_hex_upper(&sum),
                    to_hex_upper(&digest)
                ),
            ),
            None => self.add(Code::ChecksumMismatch, Some(spec), None, "no /Params /CheckSum"),
        }
    }

    fn name_tree(&mut self) {
        let entries = match name_tree_entries(self.doc) {
            Ok(e) => e,
            Err(e) => {
                self.add(Code::NameTreeMalformed, None, None, e.to_string());
                return;
            }
        };
        let mut seen = BTreeSet::new();
        for (i, (key, value)) in entries.iter().enumerate() {
            let shown = String::from_utf8_lossy(key);
            if !seen.insert(key.clone()) {
                self.add(
                    Code::NameTreeDuplicate,
                    None,
                    None,
                    format!("name ({shown}) appears more than once"),
                );
            }
            if i > 0 && entries[i - 1].0 > *key {
                self.add(
                    Code::NameTreeUnsorted,
                    None,
                    None,
                    format!("({shown}) follows ({})", String::from_utf8_lossy(&entries[i - 1].0)),
                );
            }
            match value.as_reference() {
                Some(id) => self.filespec(id),
                None => self.add(
                    Code::NotAFilespec,
                    None,
                    None,
                    format!("value for ({shown}) is not a reference"),
                ),
            }
        }
    }

    fn associations(&mut self) {
        let registered = match registry(self.doc) {
            Ok(r) => r,
            Err(e) => {
                self.add(Code::NotAFilespec, None, None, format!("/MarkInfo /AF: {e}"));
                Vec::new()
            }
        };
        let mut seen = BTreeSet::new();
        for id in &registered {
            if !seen.insert(*id) {
                self.add(
                    Code::RegistryDuplicate,
                    Some(*id),
                    None,
                    format!("{id} listed twice in /MarkInfo /AF"),
                );
            }
            self.filespec(*id);
        }
        let references = match collect_af_references(self.doc) {
            Ok(r) => r,
            Err(e) => {
                self.add(Code::DanglingRef, None, None, format!("/AF: {e}"));
                return;
            }
        };
        for (target, refs) in references {
            for id in refs {
                if !self.doc.contains(id) {
                    continue;
                }
                self.filespec(id);
                if !registered.contains(&id) {
                    self.add(
                        Code::AfUnregistered,
                        Some(id),
                        None,
                        format!("associated with {target} but missing from /MarkInfo /AF"),
                    );
                }
            }
        }
    }

    fn structure(&mut self, pages: &[PageContent]) {
        match struct_tree_root(self.doc) {
            Ok(_) => {}
            Err(Error::MissingStructTreeRoot) => return,
            Err(e) => {
                self.add(Code::StructMalformed, None, None, e.to_string());
                return;
            }
        }
        let (tree, issues) = match parse_structure_lenient(self.doc) {
            Ok(t) => t,
            Err(e) => {
                let code = match e {
                    Error::DanglingReference(_) => Code::DanglingRef,
                    _ => Code::StructMalformed,
                };
                self.add(code, None, None, format!("structure tree: {e}"));
                return;
            }
        };
        for issue in issues {
            match issue {
                Error::OrphanElem { elem, expected, found } => {
                    let found = found.map_or("none".to_string(), |f| f.to_string());
                    self.add(
                        Code::StructParentMismatch,
                        Some(elem),
                        None,
                        format!("/P is {found} but the element is a kid of {expected}"),
                    );
                }
                Error::CycleDetected(id) => self.add(Code::StructCycle, Some(id), None, "element reached twice"),
                Error::DanglingReference(id) => {
                    self.add(Code::DanglingRef, None, None, format!("structure kid {id} is missing"))
                }
                e => self.add(Code::StructMalformed, None, None, e.to_string()),
            }
        }

        let index_of: BTreeMap<ObjectId, usize> = pages.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
        let mut claimed: BTreeMap<(ObjectId, i64), Vec<ObjectId>> = BTreeMap::new();
        for claim in tree.all_claims() {
            let Some(page) = claim.page.filter(|p| index_of.contains_key(p)) else {
                self.add(
                    Code::DanglingMcid,
                    Some(claim.elem),
                    None,
                    format!("MCID {} has no page", claim.mcid),
                );
                continue;
            };
            claimed.entry((page, claim.mcid)).or_default().push(claim.elem);
        }
        for ((page, mcid), elems) in &claimed {
            let index = index_of[page];
            if elems.len() > 1 {
                self.add(
                    Code::McidMultiplyClaimed,
                    Some(elems[0]),
                    Some(index),
                    format!("MCID {mcid} claimed by {} elements", elems.len()),
                );
            }
            let Some(nodes) = &pages[index].nodes else { continue };
            if !crate::content::mcids(nodes).contains(mcid) {
                self.add(
                    Code::DanglingMcid,
                    Some(elems[0]),
                    Some(index),
                    format!("MCID {mcid} not found in the page content"),
                );
            }
        }
        for (index, page) in pages.iter().enumerate() {
            let Some(nodes) = &page.nodes else { continue };
            for mcid in crate::content::mcids(nodes) {
                if !claimed.contains_key(&(page.id, mcid)) {
                    self.add(
                        Code::UnclaimedMcid,
                        Some(page.id),
                        Some(index),
                        format!("MCID {mcid} belongs to no structure element"),
                    );
                }
            }
            let key = self.doc.get_dict(page.id).ok().and_then(|d| d.get_i64("StructParents"));
            let on_page: Vec<_> = claimed.iter().filter(|((p, _), _)| *p == page.id).collect();
            if on_page.is_empty() {
                continue;
            }
            let Some(slots) = key.and_then(|k| tree.parent_tree.get(&k)) else {
                self.add(
                    Code::ParentTreeMismatch,
                    Some(page.id),
                    Some(index),
                    "no /ParentTree entry for the page",
                );
                continue;
            };
            for ((_, mcid), elems) in on_page {
                let slot = usize::try_from(*mcid)
                    .ok()
                    .and_then(|m| slots.get(m))
                    .copied()
                    .flatten();
                if slot.is_none_or(|s| !elems.contains(&s)) {
                    self.add(
                        Code::ParentTreeMismatch,
                        Some(page.id),
                        Some(index),
                        format!("/ParentTree slot {mcid} does not name its claiming element"),
                    );
                }
            }
        }
    }
}
