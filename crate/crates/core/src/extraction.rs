//! Reader-side recovery: copied text with /ActualText substitution, the /Alt
//! based accessible text, LaTeX harvesting and association reports.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::access_tags::{span_payload, AccessTagPayload, LATEX_CLOSE, LATEX_OPEN};
use crate::attachments::{collect_af_references, name_tree_entries, AssociationTarget};
use crate::codec::text_from_bytes;
use crate::content::{page_span_tree, spans, ContentNode, ContentOp, MarkedContentSpan};
use crate::cos::{CosValue, Document, ObjectId};
use crate::error::{Error, Result};
use crate::structure::{parse_structure, struct_tree_root, StructTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Document,
    /// Zero-based page index.
    Page {
        index: usize,
    },
    /// The marked content claimed by a structure element.
    Element {
        elem: ObjectId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum View {
    /// What Copy/Paste yields: /ActualText replaces content.
    Copy,
    /// What the accessible-text view yields: /Alt first, then /ActualText.
    Accessible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// String bytes of show-text operators read as Latin-1.
    RawGlyphs,
    ActualTextOf {
        tag: String,
        mcid: Option<i64>,
    },
    AltOf {
        tag: String,
        mcid: Option<i64>,
    },
    /// A space standing in for a horizontal gap.
    Spacing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtractedRun {
    pub text: String,
    pub provenance: Provenance,
    pub page: usize,
    pub order: usize,
}

fn latin1(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| b as char).collect()
}

/// Glyph bytes shown by a text operator.
fn shown_text(op: &ContentOp) -> Option<String> {
    let strings = |values: &[CosValue]| -> String {
        values
            .iter()
            .filter_map(CosValue::as_string_bytes)
            .map(latin1)
            .collect()
    };
    match op {
        ContentOp::ShowText(items) => Some(strings(items)),
        ContentOp::Other { operator, operands } => match operator.as_str() {
            "Tj" | "'" | "\"" => Some(strings(operands)),
            _ => None,
        },
        _ => None,
    }
}

struct Walker<'a> {
    view: View,
    page: usize,
    font_size: f64,
    pending_space: bool,
    runs: Vec<ExtractedRun>,
    order: &'a mut usize,
    select: &'a dyn Fn(&MarkedContentSpan) -> bool,
}

impl Walker<'_> {
    fn emit(&mut self, text: String, provenance: Provenance) {
        if text.is_empty() {
            return;
        }
        if std::mem::take(&mut self.pending_space) && !self.runs.is_empty() {
            self.push(" ".into(), Provenance::Spacing);
        }
        self.push(text, provenance);
    }

    fn push(&mut self, text: String, provenance: Provenance) {
        self.runs.push(ExtractedRun {
            text,
            provenance,
            page: self.page,
            order: *self.order,
        });
        *self.order += 1;
    }

    fn replacement(&self, span: &MarkedContentSpan) -> Option<(String, Provenance)> {
        let actual = || {
            span.actual_text().map(|t| {
                (
                    t,
                    Provenance::ActualTextOf {
                        tag: span.tag.clone(),
                        mcid: span.mcid(),
                    },
                )
            })
        };
        match self.view {
            View::Copy => actual(),
            View::Accessible => span
                .alt()
                .map(|t| {
                    (
                        t,
                        Provenance::AltOf {
                            tag: span.tag.clone(),
                            mcid: span.mcid(),
                        },
                    )
                })
                .or_else(actual),
        }
    }

    /// `suppressed`: inside a span whose replacement text was already taken;
    /// the walk continues only to follow the text state.
    fn walk(&mut self, nodes: &[ContentNode], selected: bool, suppressed: bool) {
        for node in nodes {
            match node {
                ContentNode::Op(ContentOp::SetFont { size, .. }) => self.font_size = *size,
                ContentNode::Op(ContentOp::Transform(m)) => {
                    if !suppressed && m[4] > self.font_size {
                        self.pending_space = true;
                    }
                }
                ContentNode::Op(op) => {
                    if selected && !suppressed {
                        if let Some(text) = shown_text(op) {
                            self.emit(text, Provenance::RawGlyphs);
                        }
                    }
                }
                ContentNode::Span(span) => {
                    let selected = selected || (self.select)(span);
                    let mut inner_suppressed = suppressed;
                    if !suppressed {
                        if let Some((text, provenance)) = self.replacement(span) {
                            if selected {
                                self.emit(text, provenance);
                            }
                            inner_suppressed = true;
                        }
                    }
                    self.walk(&span.children, selected, inner_suppressed);
                }
            }
        }
    }
}

fn walk_page(
    doc: &Document,
    page: ObjectId,
    index: usize,
    view: View,
    select: &dyn Fn(&MarkedContentSpan) -> bool,
    everything: bool,
    order: &mut usize,
) -> Result<Vec<ExtractedRun>> {
    let nodes = page_span_tree(doc, page)?;
    let mut walker = Walker {
        view,
        page: index,
        font_size: 0.0,
        pending_space: false,
        runs: Vec::new(),
        order,
        select,
    };
    walker.walk(&nodes, everything, false);
    Ok(walker.runs)
}

fn page_at(doc: &Document, index: usize) -> Result<ObjectId> {
    doc.pages()?
        .get(index)
        .copied()
        .ok_or_else(|| Error::TargetNotFound(format!("page {index}")))
}

fn optional_tree(doc: &Document) -> Result<Option<StructTree>> {
    match struct_tree_root(doc) {
        Ok(_) => parse_structure(doc).map(Some),
        Err(Error::MissingStructTreeRoot) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs in stream order, grouped by page.
pub fn extract_runs(doc: &Document, scope: Scope, view: View) -> Result<Vec<Vec<ExtractedRun>>> {
    let mut order = 0;
    let pages = doc.pages()?;
    match scope {
        Scope::Document => pages
            .iter()
            .enumerate()
            .map(|(i, page)| walk_page(doc, *page, i, view, &|_| false, true, &mut order))
            .collect(),
        Scope::Page { index } => {
            let page = page_at(doc, index)?;
            Ok(vec![walk_page(doc, page, index, view, &|_| false, true, &mut order)?])
        }
        Scope::Element { elem } => {
            let tree = optional_tree(doc)?.ok_or_else(|| Error::TargetNotFound(format!("structure element {elem}")))?;
            if tree.get(elem).is_none() {
                return Err(Error::TargetNotFound(format!("structure element {elem}")));
            }
            let mut by_page: BTreeMap<ObjectId, BTreeSet<i64>> = BTreeMap::new();
            for claim in tree.mcid_claims(elem) {
                let page = claim.page.ok_or(Error::DanglingMcid {
                    elem: claim.elem,
                    mcid: claim.mcid,
                })?;
                by_page.entry(page).or_default().insert(claim.mcid);
            }
            let mut out = Vec::new();
            for (index, page) in pages.iter().enumerate() {
                let Some(wanted) = by_page.get(page) else { continue };
                let select = |s: &MarkedContentSpan| s.mcid().is_some_and(|m| wanted.contains(&m));
                out.push(walk_page(doc, *page, index, view, &select, false, &mut order)?);
            }
            Ok(out)
        }
    }
}

fn join_pages(pages: &[Vec<ExtractedRun>]) -> String {
    pages
        .iter()
        .map(|runs| runs.iter().map(|r| r.text.as_str()).collect::<String>())
        .collect::<Vec<_>>()
        .join("\n")
}

/// The text Copy/Paste would produce. Pages are separated by a newline.
pub fn copy_text(doc: &Document, scope: Scope) -> Result<String> {
    Ok(join_pages(&extract_runs(doc, scope, View::Copy)?))
}

/// The text the accessible-text view would produce.
pub fn accessible_text(doc: &Document, scope: Scope) -> Result<String> {
    Ok(join_pages(&extract_runs(doc, scope, View::Accessible)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HarvestLocation {
    /// Decoded from an access-tag span.
    Span { mcid: Option<i64>, index: usize },
    /// Found only in the copied text of the page, at this line.
    Text { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarvestedFormula {
    pub latex: String,
    pub page: usize,
    pub location: HarvestLocation,
}

/// `<latex>` … `</latex>` blocks in copied text, as (line, source).
pub fn scan_latex_blocks(text: &str, page: usize) -> Result<Vec<(usize, String)>> {
    let lines: Vec<&str> = text.split(['\r', '\n']).collect();
    let mut out = Vec::new();
    let mut open: Option<(usize, Vec<&str>)> = None;
    for (n, line) in lines.iter().enumerate() {
        let trimmed = line.trim_matches([' ', '\t']);
        if trimmed == LATEX_OPEN {
            if open.is_some() {
                return Err(Error::UnbalancedDelimiters { page });
            }
            open = Some((n, Vec::new()));
        } else if trimmed == LATEX_CLOSE {
            let (start, body) = open.take().ok_or(Error::UnbalancedDelimiters { page })?;
            out.push((start, body.join("\n")));
        } else if let Some((_, body)) = open.as_mut() {
            body.push(line);
        }
    }
    if open.is_some() {
        return Err(Error::UnbalancedDelimiters { page });
    }
    Ok(out)
}

/// Comparison key for pairing text blocks with decoded spans; the framing
/// CRs can merge with line breaks inside the source, so breaks are ignored.
fn match_key(s: &str) -> String {
    s.chars().filter(|c| !matches!(c, '\r' | '\n')).collect()
}

/// LaTeX sources recovered from each page, in page order. Access-tag spans
/// are decoded directly; blocks that appear only in the copied text are
/// added after them.
pub fn harvest_latex(doc: &Document) -> Result<Vec<HarvestedFormula>> {
    let mut out = Vec::new();
    let mut order = 0;
    for (index, page) in doc.pages()?.into_iter().enumerate() {
        let nodes = page_span_tree(doc, page)?;
        let mut found = Vec::new();
        for (i, span) in spans(&nodes).into_iter().enumerate() {
            if let Some(AccessTagPayload::Opening(latex)) = span_payload(span)? {
                found.push(HarvestedFormula {
                    latex,
                    page: index,
                    location: HarvestLocation::Span {
                        mcid: span.mcid(),
                        index: i,
                    },
                });
            }
        }
        let runs = walk_page(doc, page, index, View::Copy, &|_| false, true, &mut order)?;
        let text: String = runs.iter().map(|r| r.text.as_str()).collect();
        let mut unmatched: Vec<String> = found.iter().map(|f| match_key(&f.latex)).collect();
        let blocks = match scan_latex_blocks(&text, index) {
            Ok(blocks) => blocks,
            // a source holding a delimiter line; the spans already carry it
            Err(_) if !found.is_empty() => Vec::new(),
            Err(e) => return Err(e),
        };
        for (line, latex) in blocks {
            match unmatched.iter().position(|u| *u == match_key(&latex)) {
                Some(at) => {
                    unmatched.remove(at);
                }
                None => found.push(HarvestedFormula {
                    latex,
                    page: index,
                    location: HarvestLocation::Text { line },
                }),
            }
        }
        out.extend(found);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetReport {
    pub target: AssociationTarget,
    pub page: Option<usize>,
    /// MCIDs of the associated region in stream or /K order.
    pub mcids: Vec<i64>,
    /// Copied text of the region.
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileAssociation {
    pub filespec: ObjectId,
    pub name: Option<String>,
    pub relationship: Option<String>,
    pub targets: Vec<TargetReport>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AssociationReport {
    pub files: Vec<FileAssociation>,
}

fn content_span_region(doc: &Document, page: ObjectId, resource: &str) -> Result<(Vec<i64>, String)> {
    let nodes = page_span_tree(doc, page)?;
    let index = doc.page_index(page)?.unwrap_or(0);
    let mcids = spans(&nodes)
        .into_iter()
        .filter(|s| s.named_resource() == Some(resource))
        .flat_map(|s| s.descendants().into_iter().filter_map(MarkedContentSpan::mcid))
        .collect();
    let mut order = 0;
    let select = |s: &MarkedContentSpan| s.named_resource() == Some(resource);
    let runs = walk_page(doc, page, index, View::Copy, &select, false, &mut order)?;
    Ok((mcids, runs.into_iter().map(|r| r.text).collect()))
}

/// Every associated file with its targets; files that are embedded but
/// never associated are listed with no targets.
pub fn association_report(doc: &Document) -> Result<AssociationReport> {
    let tree = optional_tree(doc)?;
    let mut targets: BTreeMap<ObjectId, Vec<AssociationTarget>> = BTreeMap::new();
    for (target, refs) in collect_af_references(doc)? {
        for id in refs {
            let list = targets.entry(id).or_default();
            if !list.contains(&target) {
                list.push(target.clone());
            }
        }
    }
    let mut names: BTreeMap<ObjectId, String> = BTreeMap::new();
    for (key, value) in name_tree_entries(doc)? {
        if let Some(id) = value.as_reference() {
            let name = text_from_bytes(&key).unwrap_or_else(|_| latin1(&key));
            names.entry(id).or_insert(name);
            targets.entry(id).or_default();
        }
    }
    let mut report = AssociationReport::default();
    for (filespec, list) in targets {
        let spec = doc.get(filespec).and_then(CosValue::as_dict);
        let mut file = FileAssociation {
            filespec,
            name: names
                .get(&filespec)
                .cloned()
                .or_else(|| spec.and_then(|s| s.get_text("UF").or_else(|| s.get_text("F")))),
            relationship: spec.and_then(|s| s.get_name("AFRelationship")).map(str::to_string),
            targets: Vec::new(),
        };
        for target in list {
            let (page, mcids, text) = match &target {
                AssociationTarget::Structure { elem } => match &tree {
                    Some(tree) => {
                        let claims = tree.mcid_claims(*elem);
                        let page = claims
                            .first()
                            .and_then(|c| c.page)
                            .and_then(|p| doc.page_index(p).ok().flatten());
                        let text = copy_text(doc, Scope::Element { elem: *elem }).ok();
                        (page, claims.iter().map(|c| c.mcid).collect(), text)
                    }
                    None => (None, Vec::new(), None),
                },
                AssociationTarget::ContentSpan { page, resource } => {
                    let (mcids, text) = content_span_region(doc, *page, resource)?;
                    (doc.page_index(*page)?, mcids, Some(text))
                }
                AssociationTarget::Page { page } => (doc.page_index(*page)?, Vec::new(), None),
                _ => (None, Vec::new(), None),
            };
            file.targets.push(TargetReport {
                target,
                page,
                mcids,
                text,
            });
        }
        report.files.push(file);
    }
    Ok(report)
}
