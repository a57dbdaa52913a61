//! Embedded files, the /EmbeddedFiles name tree, /AF associations and the
//! /MarkInfo /AF registry.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use md5::{Digest, Md5};
use serde::Serialize;

use crate::codec::{encode_text, text_from_bytes, to_hex_upper};
use crate::content::{ContentNode, MarkedContentProperties, MarkedContentSpan};
use crate::cos::{CosValue, Dictionary, Document, ObjectId, Stream};
use crate::error::{Error, Result};
use crate::structure::attach_af_to_struct;

/// Entries per name-tree leaf before the tree gets a second level.
pub const NAME_TREE_LEAF_MAX: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AfRelationship {
    Source,
    Supplement,
    Data,
    Alternative,
    Unspecified,
}

impl AfRelationship {
    pub const ALL: [AfRelationship; 5] = [
        AfRelationship::Source,
        AfRelationship::Supplement,
        AfRelationship::Data,
        AfRelationship::Alternative,
        AfRelationship::Unspecified,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AfRelationship::Source => "Source",
            AfRelationship::Supplement => "Supplement",
            AfRelationship::Data => "Data",
            AfRelationship::Alternative => "Alternative",
            AfRelationship::Unspecified => "Unspecified",
        }
    }
}

impl fmt::Display for AfRelationship {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AfRelationship {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        AfRelationship::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!(
                    "unknown relationship {s:?}; expected one of Source, Supplement, Data, Alternative, Unspecified"
                )
            })
    }
}

/// Everything needed to embed one file.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedRequest {
    pub name: String,
    pub payload: Vec<u8>,
    pub description: Option<String>,
    pub relationship: AfRelationship,
    pub mime: Option<String>,
    /// A PDF date such as `D:20140201111224+11'00'`.
    pub mod_date: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AssociationTarget {
    Document,
    Page {
        page: ObjectId,
    },
    ContentSpan {
        page: ObjectId,
        resource: String,
    },
    Structure {
        elem: ObjectId,
    },
    XObject {
        xobject: ObjectId,
    },
    /// Method (vi); refused.
    Annotation {
        annot: ObjectId,
    },
}

impl fmt::Display for AssociationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssociationTarget::Document => write!(f, "Document"),
            AssociationTarget::Page { page } => write!(f, "Page({page})"),
            AssociationTarget::ContentSpan { page, resource } => write!(f, "ContentSpan({page}, {resource})"),
            AssociationTarget::Structure { elem } => write!(f, "Structure({elem})"),
            AssociationTarget::XObject { xobject } => write!(f, "XObject({xobject})"),
            AssociationTarget::Annotation { annot } => write!(f, "Annotation({annot})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssociateOptions {
    /// Put content-method resources in one /Properties dictionary shared by
    /// every page.
    pub shared_resources: bool,
}

pub fn md5_digest(payload: &[u8]) -> [u8; 16] {
    Md5::digest(payload).into()
}

fn filename_key(name: &str) -> Vec<u8> {
    encode_text(name)
}

/// Reads every (name, value) pair of the /EmbeddedFiles name tree in tree
/// order.
pub fn name_tree_entries(doc: &Document) -> Result<Vec<(Vec<u8>, CosValue)>> {
    let Some(root) = embedded_files_root(doc)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut stack = vec![root];
    let mut seen = BTreeSet::new();
    while let Some(node) = stack.pop() {
        if let CosValue::Reference(id) = node {
            if !seen.insert(id) {
                return Err(Error::ReferenceCycle(id));
            }
        }
        let dict = doc.resolve_dict(&node, "name tree node")?;
        if let Some(names) = doc.lookup(dict, "Names")?.and_then(CosValue::as_array) {
            for pair in names.chunks(2) {
                let [key, value] = pair else {
                    return Err(Error::type_mismatch("/Names array", "even length"));
                };
                let key = key
                    .as_string_bytes()
                    .ok_or_else(|| Error::type_mismatch("name tree key", "string"))?;
                out.push((key.to_vec(), value.clone()));
            }
        }
        if let Some(kids) = doc.lookup(dict, "Kids")?.and_then(CosValue::as_array) {
            stack.extend(kids.iter().rev().cloned());
        }
    }
    Ok(out)
}

fn embedded_files_root(doc: &Document) -> Result<Option<CosValue>> {
    let catalog = doc.catalog()?;
    let Some(names) = doc.lookup(catalog, "Names")? else {
        return Ok(None);
    };
    let names = names
        .as_dict()
        .ok_or_else(|| Error::type_mismatch("/Names", "dictionary"))?;
    Ok(names.get("EmbeddedFiles").cloned())
}

fn tree_node_ids(doc: &Document, node: &CosValue, out: &mut Vec<ObjectId>) {
    if let CosValue::Reference(id) = node {
        if out.contains(id) {
            return;
        }
        out.push(*id);
    }
    if let Ok(dict) = doc.resolve_dict(node, "name tree node") {
        if let Some(kids) = dict
            .get("Kids")
            .and_then(|k| doc.resolve(k).ok())
            .and_then(CosValue::as_array)
        {
            for kid in kids.clone() {
                tree_node_ids(doc, &kid, out);
            }
        }
    }
}

fn names_array(entries: &[(Vec<u8>, CosValue)]) -> CosValue {
    CosValue::Array(
        entries
            .iter()
            .flat_map(|(k, v)| [CosValue::LiteralString(k.clone()), v.clone()])
            .collect(),
    )
}

/// Rewrites the name tree with the given entries, sorted by key bytes. Up to
/// [`NAME_TREE_LEAF_MAX`] entries stay in one flat /Names array.
pub fn write_name_tree(doc: &mut Document, mut entries: Vec<(Vec<u8>, CosValue)>) -> Result<()> {
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let old_root = embedded_files_root(doc)?;
    let mut old_nodes = Vec::new();
    if let Some(root) = &old_root {
        tree_node_ids(doc, root, &mut old_nodes);
    }
    let root_id = match old_root {
        Some(CosValue::Reference(id)) => id,
        _ => doc.add_object(CosValue::Null),
    };
    for id in old_nodes.iter().filter(|id| **id != root_id) {
        doc.remove(*id);
    }
    let root = if entries.len() <= NAME_TREE_LEAF_MAX {
        Dictionary::new().with("Names", names_array(&entries))
    } else {
        let mut kids = Vec::new();
        for chunk in entries.chunks(NAME_TREE_LEAF_MAX) {
            let limits = CosValue::Array(vec![
                CosValue::LiteralString(chunk[0].0.clone()),
                CosValue::LiteralString(chunk[chunk.len() - 1].0.clone()),
            ]);
            let leaf = doc.add_object(
                Dictionary::new()
                    .with("Limits", limits)
                    .with("Names", names_array(chunk)),
            );
            kids.push(CosValue::from(leaf));
        }
        Dictionary::new().with("Kids", CosValue::Array(kids))
    };
    doc.insert(root_id, root.into());

    let names_ref = doc.catalog()?.get_reference("Names");
    let names = match names_ref {
        Some(id) => doc.get_dict_mut(id)?,
        None => {
            let catalog = doc.catalog_mut()?;
            if catalog.get("Names").and_then(CosValue::as_dict).is_none() {
                catalog.set("Names", Dictionary::new());
            }
            catalog.get_mut("Names").and_then(CosValue::as_dict_mut).unwrap()
        }
    };
    names.set("EmbeddedFiles", root_id);
    Ok(())
}

/// Creates the EmbeddedFile stream and its Filespec, and adds the name to
/// the /EmbeddedFiles name tree.
pub fn embed_file(doc: &mut Document, request: &EmbedRequest) -> Result<ObjectId> {
    if request.name.is_empty() {
        return Err(Error::UnknownTarget("an embedded file needs a name".into()));
    }
    let key = filename_key(&request.name);
    let mut entries = name_tree_entries(doc)?;
    if entries.iter().any(|(k, _)| *k == key) {
        return Err(Error::DuplicateName(request.name.clone()));
    }
    let params = Dictionary::new()
        .with("ModDate", CosValue::literal(request.mod_date.as_bytes()))
        .with("Size", request.payload.len() as i64)
        .with("CheckSum", CosValue::HexString(md5_digest(&request.payload).to_vec()));
    let stream_dict = Dictionary::new()
        .with("Type", CosValue::name("EmbeddedFile"))
        .with(
            "Subtype",
            CosValue::name(request.mime.as_deref().unwrap_or("application/octet-stream")),
        )
        .with("Params", params)
        .with("Length", request.payload.len() as i64);
    let stream = doc.add_object(CosValue::Stream(Stream::new(stream_dict, request.payload.clone())));
    let mut spec = Dictionary::new()
        .with("Type", CosValue::name("Filespec"))
        .with("F", CosValue::LiteralString(key.clone()))
        .with("UF", CosValue::LiteralString(key.clone()));
    if let Some(desc) = &request.description {
        spec.set("Desc", CosValue::LiteralString(encode_text(desc)));
    }
    spec.set("AFRelationship", CosValue::name(request.relationship.as_str()));
    spec.set("EF", Dictionary::new().with("F", stream));
    let spec = doc.add_object(spec);
    entries.push((key, spec.into()));
    write_name_tree(doc, entries)?;
    Ok(spec)
}

fn require_filespec(doc: &Document, id: ObjectId) -> Result<()> {
    match doc.get(id).and_then(CosValue::as_dict) {
        Some(d) if d.type_name() == Some("Filespec") => Ok(()),
        _ => Err(Error::NotAFilespec(id)),
    }
}

fn ref_list(value: &CosValue) -> Vec<ObjectId> {
    match value {
        CosValue::Array(items) => items.iter().filter_map(CosValue::as_reference).collect(),
        CosValue::Reference(id) => vec![*id],
        _ => Vec::new(),
    }
}

/// Appends `files` to the array stored under `key`, following a reference
/// to an array object when there is one.
fn append_refs(
    doc: &mut Document,
    holder: ObjectId,
    key: &str,
    files: &[ObjectId],
    indirect_if_new: bool,
) -> Result<()> {
    let existing = doc.get_dict(holder)?.get(key).cloned();
    let (target_id, mut list) = match &existing {
        Some(CosValue::Reference(id)) => match doc.get(*id) {
            Some(CosValue::Array(items)) => (Some(*id), ref_list(&CosValue::Array(items.clone()))),
            _ => (None, vec![*id]),
        },
        Some(v) => (None, ref_list(v)),
        None => (None, Vec::new()),
    };
    for id in files {
        if !list.contains(id) {
            list.push(*id);
        }
    }
    let array = CosValue::Array(list.into_iter().map(CosValue::from).collect());
    match target_id {
        Some(id) => {
            doc.insert(id, array);
        }
        None if existing.is_none() && indirect_if_new => {
            let id = doc.add_object(array);
            doc.get_dict_mut(holder)?.set(key, id);
        }
        None => doc.get_dict_mut(holder)?.set(key, array),
    }
    Ok(())
}

/// The /MarkInfo /AF array, resolved.
pub fn registry(doc: &Document) -> Result<Vec<ObjectId>> {
    let catalog = doc.catalog()?;
    let Some(info) = doc.lookup(catalog, "MarkInfo")?.and_then(CosValue::as_dict) else {
        return Ok(Vec::new());
    };
    Ok(match doc.lookup(info, "AF")? {
        Some(v) => ref_list(v),
        None => Vec::new(),
    })
}

/// Adds files to the /MarkInfo /AF registry, creating it as an indirect
/// array when absent.
pub fn register_associated_files(doc: &mut Document, files: &[ObjectId]) -> Result<()> {
    if files.is_empty() {
        return Ok(());
    }
    let root = doc.root_id()?;
    let info_holder = match doc.catalog()?.get("MarkInfo") {
        Some(CosValue::Reference(id)) => *id,
        Some(_) => root,
        None => {
            doc.catalog_mut()?.set("MarkInfo", Dictionary::new());
            root
        }
    };
    if info_holder == root {
        // MarkInfo is inline in the catalog: lift the AF array handling onto a
        // temporary object so `append_refs` can treat both cases alike.
        let info = doc.catalog()?.get("MarkInfo").cloned().unwrap();
        let temp = doc.add_object(info);
        append_refs(doc, temp, "AF", files, true)?;
        let info = doc.remove(temp).unwrap();
        doc.catalog_mut()?.set("MarkInfo", info);
        Ok(())
    } else {
        append_refs(doc, info_holder, "AF", files, true)
    }
}

fn require_page(doc: &Document, page: ObjectId) -> Result<()> {
    match doc.get(page).and_then(CosValue::as_dict) {
        Some(d) if d.type_name() == Some("Page") => Ok(()),
        _ => Err(Error::UnknownTarget(format!("object {page} is not a page"))),
    }
}

/// Associates files with a target by one of methods (i)-(v) and registers
/// them in /MarkInfo /AF. An empty list changes nothing.
pub fn associate(
    doc: &mut Document,
    files: &[ObjectId],
    target: &AssociationTarget,
    options: AssociateOptions,
) -> Result<()> {
    if let AssociationTarget::Annotation { .. } = target {
        return Err(Error::UnsupportedMethod(
            "association through annotations is deprecated in PDF/A-3".into(),
        ));
    }
    if files.is_empty() {
        return Ok(());
    }
    for id in files {
        require_filespec(doc, *id)?;
    }
    match target {
        AssociationTarget::Document => {
            let root = doc.root_id()?;
            append_refs(doc, root, "AF", files, false)?;
        }
        AssociationTarget::Page { page } => {
            require_page(doc, *page)?;
            append_refs(doc, *page, "AF", files, false)?;
        }
        AssociationTarget::ContentSpan { page, resource } => {
            require_page(doc, *page)?;
            let properties = properties_holder(doc, *page, options.shared_resources)?;
            append_refs(doc, properties, resource, files, false)?;
        }
        AssociationTarget::Structure { elem } => return attach_af_to_struct(doc, *elem, files),
        AssociationTarget::XObject { xobject } => {
            match doc.get(*xobject) {
                Some(CosValue::Stream(s)) if is_xobject(&s.dict) => {}
                _ => return Err(Error::UnknownTarget(format!("object {xobject} is not an XObject"))),
            }
            append_refs(doc, *xobject, "AF", files, false)?;
        }
        AssociationTarget::Annotation { .. } => unreachable!(),
    }
    register_associated_files(doc, files)
}

fn is_xobject(dict: &Dictionary) -> bool {
    dict.type_name() == Some("XObject") || matches!(dict.get_name("Subtype"), Some("Form" | "Image"))
}

/// The object whose dictionary is the /Properties resource of `page`,
/// creating what is missing on the way.
fn properties_holder(doc: &mut Document, page: ObjectId, shared: bool) -> Result<ObjectId> {
    if shared {
        return shared_properties(doc);
    }
    let resources = resources_object(doc, page)?;
    object_for_subdict(doc, resources, "Properties")
}

/// Makes the page's resources an indirect object (if it is not already) and
/// returns it.
fn resources_object(doc: &mut Document, page: ObjectId) -> Result<ObjectId> {
    let holder = doc.resources_holder(page)?.unwrap_or(page);
    object_for_subdict(doc, holder, "Resources")
}

/// Ensures `holder[key]` is a reference to a dictionary object and returns it.
fn object_for_subdict(doc: &mut Document, holder: ObjectId, key: &str) -> Result<ObjectId> {
    let current = doc.get_dict(holder)?.get(key).cloned();
    match current {
        Some(CosValue::Reference(id)) => Ok(id),
        Some(CosValue::Dictionary(d)) => {
            let id = doc.add_object(d);
            doc.get_dict_mut(holder)?.set(key, id);
            Ok(id)
        }
        Some(_) => Err(Error::type_mismatch(format!("/{key}"), "dictionary")),
        None => {
            let id = doc.add_object(Dictionary::new());
            doc.get_dict_mut(holder)?.set(key, id);
            Ok(id)
        }
    }
}

/// One /Properties object referenced from the resources of every page, so a
/// file used by many formulas is stored once.
fn shared_properties(doc: &mut Document) -> Result<ObjectId> {
    let pages = doc.pages()?;
    let mut shared = None;
    for page in &pages {
        let resources = resources_object(doc, *page)?;
        if let Some(id) = doc.get_dict(resources)?.get_reference("Properties") {
            shared.get_or_insert(id);
        }
    }
    let shared = match shared {
        Some(id) => id,
        None => doc.add_object(Dictionary::new()),
    };
    for page in pages {
        let resources = resources_object(doc, page)?;
        let existing = doc.get_dict(resources)?.get("Properties").cloned();
        if let Some(existing) = existing {
            let entries: Vec<(String, CosValue)> = doc
                .resolve(&existing)?
                .as_dict()
                .map(|d| d.unique_entries().map(|(k, v)| (k.to_string(), v.clone())).collect())
                .unwrap_or_default();
            let target = doc.get_dict_mut(shared)?;
            for (k, v) in entries {
                if !target.contains_key(&k) {
                    target.set(k, v);
                }
            }
        }
        doc.get_dict_mut(resources)?.set("Properties", shared);
    }
    Ok(shared)
}

/// Wraps content in an `/AF /<resource> BDC … EMC` span.
pub fn wrap_in_af_span(children: Vec<ContentNode>, resource: &str) -> ContentNode {
    let mut span = MarkedContentSpan::new("AF", MarkedContentProperties::Named(resource.to_string()));
    span.children = children;
    ContentNode::Span(span)
}

/// Every /AF reference in the document, grouped by the target that holds it.
pub fn collect_af_references(doc: &Document) -> Result<Vec<(AssociationTarget, Vec<ObjectId>)>> {
    let mut out = Vec::new();
    let catalog = doc.catalog()?;
    if let Some(af) = doc.lookup(catalog, "AF")? {
        out.push((AssociationTarget::Document, ref_list(af)));
    }
    let pages = doc.pages()?;
    for page in &pages {
        let dict = doc.get_dict(*page)?;
        if let Some(af) = doc.lookup(dict, "AF")? {
            out.push((AssociationTarget::Page { page: *page }, ref_list(af)));
        }
        let Some(resources) = doc.page_resources(*page)? else {
            continue;
        };
        let Some(props) = doc.lookup(resources, "Properties")?.and_then(CosValue::as_dict) else {
            continue;
        };
        for (name, value) in props.unique_entries() {
            let refs = match doc.resolve(value)? {
                CosValue::Array(_) => ref_list(doc.resolve(value)?),
                CosValue::Dictionary(d) => match d.get("AF") {
                    Some(af) => ref_list(doc.resolve(af)?),
                    None => continue,
                },
                _ => continue,
            };
            out.push((
                AssociationTarget::ContentSpan {
                    page: *page,
                    resource: name.to_string(),
                },
                refs,
            ));
        }
    }
    for (id, value) in doc.objects() {
        let Some(dict) = value.as_dict() else { continue };
        let Some(af) = dict.get("AF") else { continue };
        let target = if dict.type_name() == Some("StructElem") {
            AssociationTarget::Structure { elem: id }
        } else if matches!(value, CosValue::Stream(_)) && is_xobject(dict) {
            AssociationTarget::XObject { xobject: id }
        } else {
            continue;
        };
        out.push((target, ref_list(doc.resolve(af)?)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttachmentInfo {
    pub name: String,
    pub filespec: ObjectId,
    pub description: Option<String>,
    pub relationship: Option<String>,
    pub mime: Option<String>,
    pub size: Option<usize>,
    pub declared_size: Option<i64>,
    pub checksum: Option<String>,
    pub integrity_ok: bool,
    pub registered: bool,
    pub targets: Vec<AssociationTarget>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AttachmentReport {
    pub attachments: Vec<AttachmentInfo>,
    /// Inconsistencies found along the way, such as
    /// `associated-but-unregistered: 27 0`.
    pub findings: Vec<String>,
}

/// A file read back out of the document.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedFile {
    pub name: String,
    pub payload: Vec<u8>,
    pub description: Option<String>,
    pub relationship: Option<String>,
    pub mime: Option<String>,
}

/// /Params /Size as an integer, or a string holding one.
pub fn declared_size(params: &Dictionary) -> Option<i64> {
    match params.get("Size")? {
        CosValue::Integer(n) => Some(*n),
        v => text_from_bytes(v.as_string_bytes()?).ok()?.trim().parse().ok(),
    }
}

/// /Params /CheckSum as 16 digest bytes: a 16-byte string, or a string of 32
/// hex characters.
pub fn declared_checksum(params: &Dictionary) -> Option<Vec<u8>> {
    let bytes = params.get("CheckSum")?.as_string_bytes()?;
    if bytes.len() == 16 {
        return Some(bytes.to_vec());
    }
    let text = std::str::from_utf8(bytes).ok()?;
    if text.len() != 32 {
        return None;
    }
    (0..16)
        .map(|i| u8::from_str_radix(&text[2 * i..2 * i + 2], 16).ok())
        .collect()
}

/// The embedded file stream behind a Filespec.
pub fn embedded_stream(doc: &Document, spec: &Dictionary) -> Result<Option<(ObjectId, Stream)>> {
    let Some(ef) = doc.lookup(spec, "EF")?.and_then(CosValue::as_dict) else {
        return Ok(None);
    };
    let Some(f) = ef.get("UF").or_else(|| ef.get("F")) else {
        return Ok(None);
    };
    let id = f.as_reference().unwrap_or(ObjectId::from(0));
    Ok(doc.resolve(f)?.as_stream().map(|s| (id, s.clone())))
}

/// Problems with the stream's declared size and checksum.
pub fn integrity_problems(stream: &Stream) -> Vec<String> {
    let mut problems = Vec::new();
    let params = stream.dict.get("Params").and_then(CosValue::as_dict);
    match params.and_then(declared_size) {
        Some(n) if n == stream.data.len() as i64 => {}
        Some(n) => problems.push(format!("/Size {n} but payload has {} bytes", stream.data.len())),
        None => problems.push("missing /Params /Size".into()),
    }
    let digest = md5_digest(&stream.data);
    match params.and_then(declared_checksum) {
        Some(sum) if sum == digest => {}
        Some(sum) => problems.push(format!(
            "/CheckSum {} but payload MD5 is {}",
            to_hex_upper(&sum),
            to_hex_upper(&digest)
        )),
        None => problems.push("missing /Params /CheckSum".into()),
    }
    problems
}

pub fn list_attachments(doc: &Document) -> AttachmentReport {
    let mut report = AttachmentReport::default();
    let entries = match name_tree_entries(doc) {
        Ok(e) => e,
        Err(e) => {
            report.findings.push(format!("unreadable-name-tree: {e}"));
            Vec::new()
        }
    };
    let registered = registry(doc).unwrap_or_default();
    let associations = match collect_af_references(doc) {
        Ok(a) => a,
        Err(e) => {
            report.findings.push(format!("unreadable-associations: {e}"));
            Vec::new()
        }
    };
    let mut unregistered = BTreeSet::new();
    for (_, refs) in &associations {
        for id in refs {
            if !registered.contains(id) {
                unregistered.insert(*id);
            }
        }
    }
    for id in unregistered {
        report.findings.push(format!("associated-but-unregistered: {id}"));
    }
    for (key, value) in entries {
        let name = text_from_bytes(&key).unwrap_or_else(|_| String::from_utf8_lossy(&key).into_owned());
        let Some(spec_id) = value.as_reference() else {
            report.findings.push(format!("name-tree-value-not-a-reference: {name}"));
            continue;
        };
        let Some(spec) = doc.get(spec_id).and_then(CosValue::as_dict) else {
            report.findings.push(format!("dangling-filespec: {name}"));
            continue;
        };
        if spec.type_name() != Some("Filespec") {
            report.findings.push(format!("filespec-missing-type: {name}"));
        }
        let stream = embedded_stream(doc, spec).ok().flatten();
        let params = stream
            .as_ref()
            .and_then(|(_, s)| s.dict.get("Params").and_then(CosValue::as_dict).cloned());
        let problems = stream.as_ref().map(|(_, s)| integrity_problems(s));
        if let Some(problems) = &problems {
            for p in problems {
                report.findings.push(format!("integrity: {name}: {p}"));
            }
        } else {
            report.findings.push(format!("embedded-file-missing: {name}"));
        }
        let targets = associations
            .iter()
            .filter(|(_, refs)| refs.contains(&spec_id))
            .map(|(t, _)| t.clone())
            .collect();
        report.attachments.push(AttachmentInfo {
            name,
            filespec: spec_id,
            description: spec.get_text("Desc"),
            relationship: spec.get_name("AFRelationship").map(str::to_string),
            mime: stream
                .as_ref()
                .and_then(|(_, s)| s.dict.get_name("Subtype").map(str::to_string)),
            size: stream.as_ref().map(|(_, s)| s.data.len()),
            declared_size: params.as_ref().and_then(declared_size),
            checksum: params.as_ref().and_then(declared_checksum).map(|c| to_hex_upper(&c)),
            integrity_ok: problems.is_some_and(|p| p.is_empty()),
            registered: registered.contains(&spec_id),
            targets,
        });
    }
    report
}

fn find_by_name(doc: &Document, name: &str) -> Result<(ObjectId, Dictionary)> {
    let key = filename_key(name);
    let value = name_tree_entries(doc)?
        .into_iter()
        .find(|(k, _)| *k == key || text_from_bytes(k).ok().as_deref() == Some(name))
        .map(|(_, v)| v)
        .ok_or_else(|| Error::NameNotFound(name.to_string()))?;
    let id = value
        .as_reference()
        .ok_or_else(|| Error::type_mismatch("name tree value", "reference"))?;
    let spec = doc.resolve_dict(&value, "Filespec")?.clone();
    Ok((id, spec))
}

/// The Filespec registered under `name`.
pub fn filespec_by_name(doc: &Document, name: &str) -> Result<ObjectId> {
    find_by_name(doc, name).map(|(id, _)| id)
}

/// Reads a payload back, failing if its size or checksum disagree with
/// /Params.
pub fn extract_attachment(doc: &Document, name: &str) -> Result<ExtractedFile> {
    let (_, spec) = find_by_name(doc, name)?;
    let (_, stream) = embedded_stream(doc, &spec)?
        .ok_or_else(|| Error::IntegrityMismatch(format!("{name}: no embedded file stream")))?;
    let problems = integrity_problems(&stream);
    if !problems.is_empty() {
        return Err(Error::IntegrityMismatch(format!("{name}: {}", problems.join("; "))));
    }
    Ok(ExtractedFile {
        name: name.to_string(),
        description: spec.get_text("Desc"),
        relationship: spec.get_name("AFRelationship").map(str::to_string),
        mime: stream.dict.get_name("Subtype").map(str::to_string),
        payload: stream.data,
    })
}
