//! "Fake space" access tags: near-invisible spans whose /ActualText frames a
//! formula's LaTeX source between delimiter lines.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::codec::{encode_literal, encode_text};
use crate::content::{
    check_well_formed, flatten, page_span_tree, serialize_content, spans, ContentNode, ContentOp,
    MarkedContentProperties, MarkedContentSpan,
};
use crate::cos::{CosValue, Dictionary, Document, ObjectId};
use crate::error::{Error, Result};
use crate::structure::{
    leaf_elem, parse_structure, rebuild_parent_tree, set_role_mapping, struct_tree_root, StructTree,
};

pub const LATEX_OPEN: &str = "<latex>";
pub const LATEX_CLOSE: &str = "</latex>";
pub const CONTENT_OPEN: &str = "<content>";
pub const CONTENT_CLOSE: &str = "</content>";
const DELIMITERS: [&str; 4] = [LATEX_OPEN, LATEX_CLOSE, CONTENT_OPEN, CONTENT_CLOSE];

/// Structure type of the elements claiming the fake spaces.
pub const ACCESSTAG_TYPE: &str = "accesstag";
pub const DEFAULT_TAG: &str = "AccessTag";
/// Text size of the fake space.
pub const FAKE_SPACE_SIZE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "latex", rename_all = "lowercase")]
pub enum AccessTagPayload {
    Opening(String),
    Closing,
}

impl AccessTagPayload {
    /// The decoded /ActualText text.
    pub fn text(&self) -> String {
        match self {
            AccessTagPayload::Opening(latex) => opening_text(latex),
            AccessTagPayload::Closing => closing_text().to_string(),
        }
    }

    /// The /ActualText string value, before literal escaping.
    pub fn string_bytes(&self) -> Vec<u8> {
        encode_text(&self.text())
    }

    /// The escaped body of the literal string.
    pub fn rendered(&self) -> Vec<u8> {
        encode_literal(&self.string_bytes())
    }
}

pub fn opening_text(latex: &str) -> String {
    format!("\r{LATEX_OPEN}\r{latex}\r{LATEX_CLOSE}\r{CONTENT_OPEN}\r")
}

pub fn closing_text() -> &'static str {
    "\r</content>\r"
}

pub fn encode_opening(latex: &str) -> Vec<u8> {
    AccessTagPayload::Opening(latex.to_string()).rendered()
}

pub fn encode_closing() -> Vec<u8> {
    AccessTagPayload::Closing.rendered()
}

fn is_eol(c: char) -> bool {
    c == '\r' || c == '\n'
}

fn strip_eol_start(s: &str) -> &str {
    s.strip_prefix("\r\n").or_else(|| s.strip_prefix(is_eol)).unwrap_or(s)
}

fn strip_eol_end(s: &str) -> &str {
    s.strip_suffix("\r\n").or_else(|| s.strip_suffix(is_eol)).unwrap_or(s)
}

/// Splits off the last line: `(before, line)` with the EOL between removed.
fn rsplit_line(s: &str) -> Option<(&str, &str)> {
    let at = s.rfind(is_eol)?;
    let line = &s[at + 1..];
    let before = &s[..at];
    let before = if s.as_bytes()[at] == b'\n' {
        before.strip_suffix('\r').unwrap_or(before)
    } else {
        before
    };
    Some((before, line))
}

fn is_delimiter_line(line: &str, delimiter: &str) -> bool {
    line.trim_matches([' ', '\t']) == delimiter
}

/// Recognises an access-tag payload. Text without delimiter lines is not one.
pub fn decode_payload(text: &str) -> Result<Option<AccessTagPayload>> {
    let exact_open = format!("\r{LATEX_OPEN}\r");
    let exact_close = format!("\r{LATEX_CLOSE}\r{CONTENT_OPEN}\r");
    if let Some(source) = text
        .strip_prefix(&exact_open)
        .and_then(|rest| rest.strip_suffix(&exact_close))
    {
        return Ok(Some(AccessTagPayload::Opening(source.to_string())));
    }

    let body = strip_eol_start(text);
    if let Some(at) = body.find(is_eol) {
        if is_delimiter_line(&body[..at], LATEX_OPEN) {
            let rest = strip_eol_start(&body[at..]);
            return parse_opening_tail(rest)
                .map(|source| Some(AccessTagPayload::Opening(source.to_string())))
                .ok_or_else(|| Error::MalformedDelimiters(format!("{text:?}")));
        }
    }
    if is_delimiter_line(text.trim_matches(is_eol), CONTENT_CLOSE) {
        return Ok(Some(AccessTagPayload::Closing));
    }
    if text
        .split(is_eol)
        .any(|line| DELIMITERS.iter().any(|d| is_delimiter_line(line, d)))
    {
        return Err(Error::MalformedDelimiters(format!("{text:?}")));
    }
    Ok(None)
}

/// `source EOL </latex> EOL <content> [EOL]` → source.
fn parse_opening_tail(rest: &str) -> Option<&str> {
    let (before, last) = rsplit_line(strip_eol_end(rest))?;
    if !is_delimiter_line(last, CONTENT_OPEN) {
        return None;
    }
    let (source, line) = match rsplit_line(before) {
        Some(split) => split,
        None => ("", before),
    };
    is_delimiter_line(line, LATEX_CLOSE).then_some(source)
}

/// The payload of a span, if its /ActualText is an access tag.
pub fn span_payload(span: &MarkedContentSpan) -> Result<Option<AccessTagPayload>> {
    match span.actual_text() {
        Some(text) => decode_payload(&text),
        None => Ok(None),
    }
}

fn is_access_tag(span: &MarkedContentSpan) -> bool {
    !matches!(span_payload(span), Ok(None))
}

/// Where the fake spaces go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectTarget {
    /// The content claimed by a structure element, normally a Formula.
    Structure(ObjectId),
    /// The span marked with a named /Properties resource, e.g. `/AF /inline-1`.
    ContentSpan { page: ObjectId, resource: String },
    /// Spans carrying MCIDs `first..=last` on one page.
    McidRange { page: ObjectId, first: i64, last: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectOptions {
    /// Marked-content tag of the fake-space spans (`AccessTag` or `Span`).
    pub tag: String,
    /// Font resource for the fake space; defaults to a page font the content
    /// never selects, else the first page font.
    pub font: Option<String>,
    /// Map `accesstag` to `Custom` in the /RoleMap.
    pub role_map: bool,
}

impl Default for InjectOptions {
    fn default() -> Self {
        InjectOptions {
            tag: DEFAULT_TAG.to_string(),
            font: None,
            role_map: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectOutcome {
    pub page: ObjectId,
    pub font: String,
    /// MCIDs of the opening and closing spans in a tagged document.
    pub mcids: Option<(i64, i64)>,
    /// The element that received the accesstag kids.
    pub owner: Option<ObjectId>,
    pub elements: Option<(ObjectId, ObjectId)>,
}

/// A list of sibling nodes and the stretch of it the formula occupies.
struct Placement {
    container: Vec<usize>,
    open_at: usize,
    close_at: usize,
    /// MCIDs inside the stretch.
    covered: Vec<i64>,
}

fn span_paths(nodes: &[ContentNode], pred: &dyn Fn(&MarkedContentSpan) -> bool) -> Vec<Vec<usize>> {
    fn walk(
        nodes: &[ContentNode],
        prefix: &mut Vec<usize>,
        pred: &dyn Fn(&MarkedContentSpan) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        for (i, node) in nodes.iter().enumerate() {
            if let ContentNode::Span(span) = node {
                prefix.push(i);
                if pred(span) {
                    out.push(prefix.clone());
                }
                walk(&span.children, prefix, pred, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(nodes, &mut Vec::new(), pred, &mut out);
    out
}

fn children_at<'a>(nodes: &'a [ContentNode], path: &[usize]) -> &'a [ContentNode] {
    let mut current = nodes;
    for &i in path {
        match &current[i] {
            ContentNode::Span(span) => current = &span.children,
            ContentNode::Op(_) => unreachable!("paths only pass through spans"),
        }
    }
    current
}

fn children_at_mut<'a>(nodes: &'a mut Vec<ContentNode>, path: &[usize]) -> &'a mut Vec<ContentNode> {
    let mut current = nodes;
    for &i in path {
        match &mut current[i] {
            ContentNode::Span(span) => current = &mut span.children,
            ContentNode::Op(_) => unreachable!("paths only pass through spans"),
        }
    }
    current
}

fn is_transform(node: &ContentNode) -> bool {
    matches!(node, ContentNode::Op(ContentOp::Transform(_)))
}

fn node_mcids(nodes: &[ContentNode]) -> Vec<i64> {
    spans(nodes).into_iter().filter_map(MarkedContentSpan::mcid).collect()
}

/// Wrapping a whole span's children: open before the first non-transform
/// child, close at the end.
fn wrap_children(nodes: &[ContentNode], container: Vec<usize>) -> Placement {
    let children = children_at(nodes, &container);
    let open_at = children.iter().position(|n| !is_transform(n)).unwrap_or(children.len());
    Placement {
        covered: node_mcids(children),
        open_at,
        close_at: children.len(),
        container,
    }
}

/// The tightest sibling stretch holding every span in `paths`. When the
/// stretch fills its enclosing span apart from transforms, the enclosing
/// span's children are wrapped instead.
fn place_around(nodes: &[ContentNode], paths: &[Vec<usize>]) -> Placement {
    let min_len = paths.iter().map(Vec::len).min().unwrap_or(1);
    let mut depth = 0;
    while depth + 1 < min_len && paths.iter().all(|p| p[depth] == paths[0][depth]) {
        depth += 1;
    }
    let container = paths[0][..depth].to_vec();
    let first = paths.iter().map(|p| p[depth]).min().unwrap();
    let last = paths.iter().map(|p| p[depth]).max().unwrap();
    let children = children_at(nodes, &container);
    let outside_is_layout = children
        .iter()
        .enumerate()
        .all(|(i, n)| (first..=last).contains(&i) || is_transform(n));
    if !container.is_empty() && outside_is_layout {
        return wrap_children(nodes, container);
    }
    Placement {
        covered: node_mcids(&children[first..=last]),
        open_at: first,
        close_at: last + 1,
        container,
    }
}

/// Refuses when access tags already sit inside the stretch, or an opening
/// tag precedes it and a closing tag follows it.
fn check_not_tagged(nodes: &[ContentNode], placement: &Placement) -> Result<()> {
    let children = children_at(nodes, &placement.container);
    let inner = &children[placement.open_at..placement.close_at];
    if spans(inner).into_iter().any(is_access_tag) {
        return Err(Error::AlreadyTagged);
    }
    let neighbour_payload = |node: Option<&ContentNode>| match node {
        Some(ContentNode::Span(span)) => span_payload(span).ok().flatten(),
        _ => None,
    };
    let before = children[..placement.open_at].iter().rev().find(|n| !is_transform(n));
    let after = children[placement.close_at..].iter().find(|n| !is_transform(n));
    if matches!(neighbour_payload(before), Some(AccessTagPayload::Opening(_)))
        && neighbour_payload(after) == Some(AccessTagPayload::Closing)
    {
        return Err(Error::AlreadyTagged);
    }
    Ok(())
}

fn structure_tree(doc: &Document) -> Result<Option<StructTree>> {
    match struct_tree_root(doc) {
        Ok(_) => parse_structure(doc).map(Some),
        Err(Error::MissingStructTreeRoot) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether a structure element already has accesstag kids.
pub fn has_accesstag_kid(tree: &StructTree, elem: ObjectId) -> bool {
    tree.get(elem).is_some_and(|e| {
        e.element_kids()
            .any(|k| tree.get(k).is_some_and(|k| k.structure_type == ACCESSTAG_TYPE))
    })
}

fn ancestors(tree: &StructTree, elem: ObjectId) -> Vec<ObjectId> {
    let mut out = vec![elem];
    while let Some(parent) = tree.get(*out.last().unwrap()).and_then(|e| e.parent) {
        if out.contains(&parent) || !tree.elements.contains_key(&parent) {
            break;
        }
        out.push(parent);
    }
    out
}

fn is_formula(tree: &StructTree, elem: ObjectId) -> bool {
    let Some(e) = tree.get(elem) else { return false };
    if e.structure_type == "Formula" {
        return true;
    }
    let mapped = tree.role_map.as_ref().and_then(|m| m.get_name(&e.structure_type));
    mapped == Some("Formula")
}

/// The element that should own the accesstag kids for content claimed by
/// `claimants`: the nearest Formula at or above their common ancestor, else
/// the common ancestor.
fn owning_element(tree: &StructTree, claimants: &[ObjectId]) -> Option<ObjectId> {
    let chains: Vec<Vec<ObjectId>> = claimants.iter().map(|c| ancestors(tree, *c)).collect();
    let common = chains
        .first()?
        .iter()
        .copied()
        .find(|a| chains.iter().all(|chain| chain.contains(a)))?;
    ancestors(tree, common)
        .into_iter()
        .find(|a| is_formula(tree, *a))
        .or(Some(common))
}

fn choose_font(doc: &Document, page: ObjectId, nodes: &[ContentNode], requested: Option<&str>) -> Result<String> {
    let fonts = doc.page_font_names(page)?;
    if let Some(font) = requested {
        return if fonts.iter().any(|f| f == font) {
            Ok(font.to_string())
        } else {
            Err(Error::MissingResource(format!("font /{font}")))
        };
    }
    let used: BTreeSet<String> = flatten(nodes)
        .into_iter()
        .filter_map(|op| match op {
            ContentOp::SetFont { font, .. } => Some(font),
            _ => None,
        })
        .collect();
    fonts
        .iter()
        .find(|f| !used.contains(*f))
        .or(fonts.first())
        .cloned()
        .ok_or_else(|| Error::MissingResource("no font resource on the page".into()))
}

/// A marked-content span around `BT /<font> 1 Tf [( )] TJ ET`.
pub fn fake_space(tag: &str, font: &str, mcid: Option<i64>, payload: &AccessTagPayload) -> ContentNode {
    let mut props = Dictionary::new();
    if let Some(mcid) = mcid {
        props.set("MCID", mcid);
    }
    props.set("ActualText", CosValue::LiteralString(payload.string_bytes()));
    let mut span = MarkedContentSpan::new(tag, MarkedContentProperties::Inline(props));
    span.children = vec![
        ContentNode::Op(ContentOp::BeginText),
        ContentNode::Op(ContentOp::SetFont {
            font: font.to_string(),
            size: FAKE_SPACE_SIZE,
        }),
        ContentNode::Op(ContentOp::ShowText(vec![CosValue::literal(" ")])),
        ContentNode::Op(ContentOp::EndText),
    ];
    ContentNode::Span(span)
}

fn smallest_unused(used: &BTreeSet<i64>, count: usize) -> Vec<i64> {
    (0..).filter(|m| !used.contains(m)).take(count).collect()
}

/// Puts an opening fake space immediately before the formula's content and a
/// closing one immediately after it. In a tagged document the spans get
/// fresh MCIDs and `accesstag` elements become the first and last kids of the
/// owning Formula.
pub fn inject_access_tags(
    doc: &mut Document,
    target: &InjectTarget,
    latex: &str,
    options: &InjectOptions,
) -> Result<InjectOutcome> {
    let tree = structure_tree(doc)?;
    let (page, owner) = match target {
        InjectTarget::Structure(elem) => {
            let tree = tree
                .as_ref()
                .ok_or_else(|| Error::TargetNotFound("the document has no structure tree".into()))?;
            if tree.get(*elem).is_none() {
                return Err(Error::TargetNotFound(format!("structure element {elem}")));
            }
            let claims = tree.mcid_claims(*elem);
            let pages: BTreeSet<Option<ObjectId>> = claims.iter().map(|c| c.page).collect();
            if pages.len() > 1 {
                return Err(Error::CrossesPageBoundary);
            }
            let page = pages
                .into_iter()
                .next()
                .flatten()
                .ok_or_else(|| Error::TargetNotFound(format!("marked content of structure element {elem}")))?;
            (page, Some(*elem))
        }
        InjectTarget::ContentSpan { page, .. } | InjectTarget::McidRange { page, .. } => {
            if doc.page_index(*page)?.is_none() {
                return Err(Error::TargetNotFound(format!("page object {page}")));
            }
            (*page, None)
        }
    };

    let mut nodes = page_span_tree(doc, page)?;
    check_well_formed(&flatten(&nodes))?;
    let placement = match target {
        InjectTarget::Structure(elem) => {
            let wanted: Vec<i64> = tree
                .as_ref()
                .unwrap()
                .mcid_claims(*elem)
                .iter()
                .map(|c| c.mcid)
                .collect();
            let paths = span_paths(&nodes, &|s| s.mcid().is_some_and(|m| wanted.contains(&m)));
            for mcid in &wanted {
                let hits = paths.iter().filter(|p| mcid_at(&nodes, p) == Some(*mcid)).count();
                match hits {
                    0 => return Err(Error::TargetNotFound(format!("MCID {mcid} on the page"))),
                    1 => {}
                    _ => return Err(Error::DuplicateMcid(*mcid)),
                }
            }
            place_around(&nodes, &paths)
        }
        InjectTarget::ContentSpan { resource, .. } => {
            let path = span_paths(&nodes, &|s| s.named_resource() == Some(resource.as_str()))
                .into_iter()
                .next()
                .ok_or_else(|| Error::TargetNotFound(format!("marked content /{resource} on the page")))?;
            wrap_children(&nodes, path)
        }
        InjectTarget::McidRange { first, last, .. } => {
            let (first, last) = (*first, *last);
            let paths = span_paths(&nodes, &|s| s.mcid().is_some_and(|m| (first..=last).contains(&m)));
            for end in [first, last] {
                if !paths.iter().any(|p| mcid_at(&nodes, p) == Some(end)) {
                    return Err(Error::TargetNotFound(format!("MCID {end} on the page")));
                }
            }
            place_around(&nodes, &paths)
        }
    };
    check_not_tagged(&nodes, &placement)?;

    let owner = match (&tree, owner) {
        (Some(_), Some(elem)) => Some(elem),
        (Some(tree), None) => {
            let claimants: Vec<ObjectId> = tree
                .all_claims()
                .into_iter()
                .filter(|c| c.page == Some(page) && placement.covered.contains(&c.mcid))
                .map(|c| c.elem)
                .collect();
            owning_element(tree, &claimants)
        }
        (None, _) => None,
    };
    if let (Some(tree), Some(owner)) = (&tree, owner) {
        if has_accesstag_kid(tree, owner) {
            return Err(Error::AlreadyTagged);
        }
    }

    let font = choose_font(doc, page, &nodes, options.font.as_deref())?;
    let mcids = match (&tree, owner) {
        (Some(tree), Some(_)) => {
            let mut used: BTreeSet<i64> = node_mcids(&nodes).into_iter().collect();
            used.extend(
                tree.all_claims()
                    .iter()
                    .filter(|c| c.page == Some(page))
                    .map(|c| c.mcid),
            );
            let fresh = smallest_unused(&used, 2);
            Some((fresh[0], fresh[1]))
        }
        _ => None,
    };

    let opening = fake_space(
        &options.tag,
        &font,
        mcids.map(|m| m.0),
        &AccessTagPayload::Opening(latex.to_string()),
    );
    let closing = fake_space(&options.tag, &font, mcids.map(|m| m.1), &AccessTagPayload::Closing);
    let children = children_at_mut(&mut nodes, &placement.container);
    children.insert(placement.close_at, closing);
    children.insert(placement.open_at, opening);
    let data = serialize_content(&nodes)
        .map_err(|e| Error::UnsupportedFeature(format!("cannot place access tags here: {e}")))?;
    doc.set_page_content(page, data)?;

    let mut elements = None;
    if let (Some(owner), Some((open_mcid, close_mcid))) = (owner, mcids) {
        let open_elem = doc.add_object(leaf_elem(ACCESSTAG_TYPE, open_mcid, page, owner));
        let close_elem = doc.add_object(leaf_elem(ACCESSTAG_TYPE, close_mcid, page, owner));
        let dict = doc.get_dict_mut(owner)?;
        let mut kids = match dict.get("K") {
            Some(CosValue::Array(items)) => items.clone(),
            Some(other) => vec![other.clone()],
            None => Vec::new(),
        };
        kids.insert(0, open_elem.into());
        kids.push(close_elem.into());
        dict.set("K", CosValue::Array(kids));
        if options.role_map {
            set_role_mapping(doc, ACCESSTAG_TYPE, "Custom")?;
        }
        rebuild_parent_tree(doc)?;
        elements = Some((open_elem, close_elem));
    }
    Ok(InjectOutcome {
        page,
        font,
        mcids,
        owner: elements.and(owner),
        elements,
    })
}

fn mcid_at(nodes: &[ContentNode], path: &[usize]) -> Option<i64> {
    let (last, parent) = path.split_last()?;
    match &children_at(nodes, parent)[*last] {
        ContentNode::Span(span) => span.mcid(),
        ContentNode::Op(_) => None,
    }
}

/// Access-tag payloads on a page in stream order.
pub fn page_access_tags(doc: &Document, page: ObjectId) -> Result<Vec<(AccessTagPayload, Option<i64>)>> {
    let nodes = page_span_tree(doc, page)?;
    let mut out = Vec::new();
    for span in spans(&nodes) {
        if let Some(payload) = span_payload(span)? {
            out.push((payload, span.mcid()));
        }
    }
    Ok(out)
}
