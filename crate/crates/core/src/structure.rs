//! The logical structure tree and its links into page content.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::attachments::register_associated_files;
use crate::content::{find_span_by_mcid, page_span_tree, ContentNode, MarkedContentSpan};
use crate::cos::{CosValue, Dictionary, Document, ObjectId};
use crate::error::{Error, Result};

pub const MATHML_NAMESPACE: &str = "http://www.w3.org/1998/Math/MathML";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StructKid {
    Element {
        id: ObjectId,
    },
    /// A marked-content reference; `page` is set only when the kid names its
    /// own page.
    Mcid {
        mcid: i64,
        page: Option<ObjectId>,
    },
    /// An object reference (`/OBJR`).
    Object {
        id: ObjectId,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructElem {
    pub id: ObjectId,
    pub structure_type: String,
    pub kids: Vec<StructKid>,
    pub parent: Option<ObjectId>,
    pub page: Option<ObjectId>,
    pub attributes: Option<Dictionary>,
    pub element_id: Option<String>,
    pub title: Option<String>,
    pub associated_files: Vec<ObjectId>,
}

impl StructElem {
    pub fn element_kids(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.kids.iter().filter_map(|k| match k {
            StructKid::Element { id } => Some(*id),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructTree {
    pub root: ObjectId,
    pub top_level: Vec<ObjectId>,
    pub elements: BTreeMap<ObjectId, StructElem>,
    pub role_map: Option<Dictionary>,
    /// /StructParents key to the element owning each MCID slot.
    pub parent_tree: BTreeMap<i64, Vec<Option<ObjectId>>>,
}

/// An MCID claimed by a structure element, with its resolved page.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McidClaim {
    pub elem: ObjectId,
    pub page: Option<ObjectId>,
    pub mcid: i64,
}

impl StructTree {
    pub fn get(&self, id: ObjectId) -> Option<&StructElem> {
        self.elements.get(&id)
    }

    /// /Pg of the element or of its closest ancestor that has one.
    pub fn effective_page(&self, id: ObjectId) -> Option<ObjectId> {
        let mut current = self.elements.get(&id);
        let mut steps = 0;
        while let Some(elem) = current {
            if elem.page.is_some() {
                return elem.page;
            }
            steps += 1;
            if steps > self.elements.len() {
                return None;
            }
            current = elem.parent.and_then(|p| self.elements.get(&p));
        }
        None
    }

    pub fn find_by_element_id(&self, element_id: &str) -> Option<&StructElem> {
        self.elements
            .values()
            .find(|e| e.element_id.as_deref() == Some(element_id))
    }

    /// Elements in depth-first document order with their depth.
    pub fn outline(&self) -> Vec<(usize, &StructElem)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for id in &self.top_level {
            self.outline_into(*id, 0, &mut out, &mut seen);
        }
        out
    }

    fn outline_into<'a>(
        &'a self,
        id: ObjectId,
        depth: usize,
        out: &mut Vec<(usize, &'a StructElem)>,
        seen: &mut BTreeSet<ObjectId>,
    ) {
        let Some(elem) = self.elements.get(&id) else {
            return;
        };
        if !seen.insert(id) {
            return;
        }
        out.push((depth, elem));
        for kid in elem.element_kids() {
            self.outline_into(kid, depth + 1, out, seen);
        }
    }

    /// MCID kids under `elem`, depth first in /K order.
    pub fn mcid_claims(&self, elem: ObjectId) -> Vec<McidClaim> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        self.claims_into(elem, &mut out, &mut seen);
        out
    }

    fn claims_into(&self, id: ObjectId, out: &mut Vec<McidClaim>, seen: &mut BTreeSet<ObjectId>) {
        let Some(elem) = self.elements.get(&id) else {
            return;
        };
        if !seen.insert(id) {
            return;
        }
        for kid in &elem.kids {
            match kid {
                StructKid::Mcid { mcid, page } => out.push(McidClaim {
                    elem: id,
                    page: page.or_else(|| self.effective_page(id)),
                    mcid: *mcid,
                }),
                StructKid::Element { id } => self.claims_into(*id, out, seen),
                StructKid::Object { .. } => {}
            }
        }
    }

    /// Every MCID claim in the tree.
    pub fn all_claims(&self) -> Vec<McidClaim> {
        let mut out = Vec::new();
        for id in &self.top_level {
            out.extend(self.mcid_claims(*id));
        }
        out
    }
}

pub fn struct_tree_root(doc: &Document) -> Result<ObjectId> {
    doc.catalog()?
        .get_reference("StructTreeRoot")
        .ok_or(Error::MissingStructTreeRoot)
}

pub fn parse_structure(doc: &Document) -> Result<StructTree> {
    let mut issues = Vec::new();
    let tree = build_tree(doc, &mut issues)?;
    match issues.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(tree),
    }
}

/// Builds as much of the tree as possible, returning the problems met on the
/// way instead of stopping at the first.
pub fn parse_structure_lenient(doc: &Document) -> Result<(StructTree, Vec<Error>)> {
    let mut issues = Vec::new();
    let tree = build_tree(doc, &mut issues)?;
    Ok((tree, issues))
}

fn kid_refs(doc: &Document, value: Option<&CosValue>) -> Result<Vec<CosValue>> {
    Ok(match value {
        None => Vec::new(),
        Some(v) => match doc.resolve(v)? {
            CosValue::Array(items) => items.clone(),
            _ if matches!(v, CosValue::Reference(_)) => vec![v.clone()],
            other => vec![other.clone()],
        },
    })
}

fn build_tree(doc: &Document, issues: &mut Vec<Error>) -> Result<StructTree> {
    let root = struct_tree_root(doc)?;
    let root_dict = doc.get_dict(root)?;
    let role_map = doc.lookup(root_dict, "RoleMap")?.and_then(CosValue::as_dict).cloned();
    let parent_tree = match root_dict.get("ParentTree") {
        Some(v) => read_number_tree(doc, v)?,
        None => BTreeMap::new(),
    };
    let mut top_level = Vec::new();
    for kid in kid_refs(doc, root_dict.get("K"))? {
        match kid {
            CosValue::Reference(id) => top_level.push(id),
            _ => issues.push(Error::type_mismatch("/StructTreeRoot /K entry", "reference")),
        }
    }
    let mut tree = StructTree {
        root,
        top_level: top_level.clone(),
        elements: BTreeMap::new(),
        role_map,
        parent_tree,
    };
    let mut stack: Vec<(ObjectId, ObjectId)> = top_level.iter().rev().map(|id| (*id, root)).collect();
    while let Some((id, expected_parent)) = stack.pop() {
        if tree.elements.contains_key(&id) {
            issues.push(Error::CycleDetected(id));
            continue;
        }
        let dict = match doc.get_dict(id) {
            Ok(d) => d,
            Err(e) => {
                issues.push(e);
                continue;
            }
        };
        let parent = dict.get_reference("P");
        if parent != Some(expected_parent) {
            issues.push(Error::OrphanElem {
                elem: id,
                expected: expected_parent,
                found: parent,
            });
        }
        let mut kids = Vec::new();
        for kid in kid_refs(doc, dict.get("K"))? {
            match read_kid(doc, &kid) {
                Ok(k) => kids.push(k),
                Err(e) => issues.push(e),
            }
        }
        for kid in kids.iter().rev() {
            if let StructKid::Element { id: kid_id } = kid {
                stack.push((*kid_id, id));
            }
        }
        let associated_files = match dict.get("AF") {
            Some(v) => match doc.resolve(v)? {
                CosValue::Array(items) => items.iter().filter_map(CosValue::as_reference).collect(),
                _ => v.as_reference().into_iter().collect(),
            },
            None => Vec::new(),
        };
        tree.elements.insert(
            id,
            StructElem {
                id,
                structure_type: dict.get_name("S").unwrap_or_default().to_string(),
                kids,
                parent,
                page: dict.get_reference("Pg"),
                attributes: doc.lookup(dict, "A")?.and_then(CosValue::as_dict).cloned(),
                element_id: dict.get_text("ID"),
                title: dict.get_text("T"),
                associated_files,
            },
        );
    }
    Ok(tree)
}

fn read_kid(doc: &Document, kid: &CosValue) -> Result<StructKid> {
    match kid {
        CosValue::Integer(mcid) => Ok(StructKid::Mcid {
            mcid: *mcid,
            page: None,
        }),
        CosValue::Reference(id) => {
            let value = doc.resolve_id(*id)?;
            match value.as_dict() {
                Some(d) if d.type_name() == Some("MCR") || d.type_name() == Some("OBJR") => read_kid(doc, value),
                Some(_) => Ok(StructKid::Element { id: *id }),
                None => Err(Error::type_mismatch(format!("structure kid {id}"), "dictionary")),
            }
        }
        CosValue::Dictionary(d) if d.type_name() == Some("MCR") => Ok(StructKid::Mcid {
            mcid: d
                .get_i64("MCID")
                .ok_or_else(|| Error::type_mismatch("/MCR /MCID", "integer"))?,
            page: d.get_reference("Pg"),
        }),
        CosValue::Dictionary(d) if d.type_name() == Some("OBJR") => Ok(StructKid::Object {
            id: d
                .get_reference("Obj")
                .ok_or_else(|| Error::type_mismatch("/OBJR /Obj", "reference"))?,
        }),
        _ => Err(Error::type_mismatch("structure kid", "integer, reference or MCR")),
    }
}

/// Flattens a number tree whose values are arrays of element references.
pub fn read_number_tree(doc: &Document, node: &CosValue) -> Result<BTreeMap<i64, Vec<Option<ObjectId>>>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![node.clone()];
    let mut seen = BTreeSet::new();
    while let Some(node) = stack.pop() {
        if let CosValue::Reference(id) = node {
            if !seen.insert(id) {
                return Err(Error::ReferenceCycle(id));
            }
        }
        let dict = doc.resolve_dict(&node, "number tree node")?;
        if let Some(nums) = doc.lookup(dict, "Nums")?.and_then(CosValue::as_array) {
            for pair in nums.chunks(2) {
                let [key, value] = pair else { break };
                let key = key
                    .as_i64()
                    .ok_or_else(|| Error::type_mismatch("number tree key", "integer"))?;
                let slots = match value {
                    CosValue::Reference(id) => match doc.resolve_id(*id)? {
                        CosValue::Array(items) => items.iter().map(CosValue::as_reference).collect(),
                        _ => vec![Some(*id)],
                    },
                    CosValue::Array(items) => items.iter().map(CosValue::as_reference).collect(),
                    _ => Vec::new(),
                };
                out.insert(key, slots);
            }
        }
        if let Some(kids) = doc.lookup(dict, "Kids")?.and_then(CosValue::as_array) {
            stack.extend(kids.iter().rev().cloned());
        }
    }
    Ok(out)
}

/// Span forests per page, parsed once.
#[derive(Default)]
pub struct PageCache {
    trees: HashMap<ObjectId, Vec<ContentNode>>,
}

impl PageCache {
    pub fn tree(&mut self, doc: &Document, page: ObjectId) -> Result<&Vec<ContentNode>> {
        match self.trees.entry(page) {
            Entry::Occupied(e) => Ok(e.into_mut()),
            Entry::Vacant(e) => Ok(e.insert(page_span_tree(doc, page)?)),
        }
    }
}

/// The marked-content spans reached from `elem`, in /K order.
pub fn resolve_marked_content(tree: &StructTree, elem: ObjectId, doc: &Document) -> Result<Vec<MarkedContentSpan>> {
    let mut cache = PageCache::default();
    resolve_with_cache(tree, elem, doc, &mut cache)
}

pub fn resolve_with_cache(
    tree: &StructTree,
    elem: ObjectId,
    doc: &Document,
    cache: &mut PageCache,
) -> Result<Vec<MarkedContentSpan>> {
    if !tree.elements.contains_key(&elem) {
        return Err(Error::TargetNotFound(format!("structure element {elem}")));
    }
    let mut out = Vec::new();
    for claim in tree.mcid_claims(elem) {
        let dangling = Error::DanglingMcid {
            elem: claim.elem,
            mcid: claim.mcid,
        };
        let page = claim.page.ok_or(dangling.clone())?;
        let nodes = cache.tree(doc, page)?;
        let span = find_span_by_mcid(nodes, claim.mcid)?.ok_or(dangling)?;
        out.push(span.clone());
    }
    Ok(out)
}

fn require_filespec(doc: &Document, id: ObjectId) -> Result<()> {
    match doc.get(id).and_then(CosValue::as_dict) {
        Some(d) if d.type_name() == Some("Filespec") => Ok(()),
        Some(_) => Err(Error::NotAFilespec(id)),
        None => Err(Error::DanglingReference(id)),
    }
}

/// Sets /AF on a structure element and registers the files in /MarkInfo /AF.
/// An empty list removes /AF.
pub fn attach_af_to_struct(doc: &mut Document, elem: ObjectId, files: &[ObjectId]) -> Result<()> {
    for id in files {
        require_filespec(doc, *id)?;
    }
    let dict = doc.get_dict_mut(elem)?;
    if dict.type_name() != Some("StructElem") && !dict.contains_key("S") {
        return Err(Error::UnknownTarget(format!(
            "object {elem} is not a structure element"
        )));
    }
    if files.is_empty() {
        dict.remove("AF");
        return Ok(());
    }
    let mut list: Vec<ObjectId> = match dict.get("AF").and_then(CosValue::as_array) {
        Some(items) => items.iter().filter_map(CosValue::as_reference).collect(),
        None => Vec::new(),
    };
    for id in files {
        if !list.contains(id) {
            list.push(*id);
        }
    }
    dict.set("AF", CosValue::Array(list.into_iter().map(CosValue::from).collect()));
    register_associated_files(doc, files)
}

/// Returns the /StructTreeRoot, creating an empty one when the document has
/// none.
pub fn ensure_struct_root(doc: &mut Document) -> Result<ObjectId> {
    if let Ok(root) = struct_tree_root(doc) {
        return Ok(root);
    }
    let parent_tree = doc.add_object(Dictionary::new().with("Nums", CosValue::Array(Vec::new())));
    let root = doc.add_object(
        Dictionary::new()
            .with("Type", CosValue::name("StructTreeRoot"))
            .with("K", CosValue::Array(Vec::new()))
            .with("ParentTree", parent_tree)
            .with("ParentTreeNextKey", 0i64),
    );
    let catalog = doc.catalog_mut()?;
    catalog.set("StructTreeRoot", root);
    match catalog.get_mut("MarkInfo").and_then(CosValue::as_dict_mut) {
        Some(info) => info.set("Marked", CosValue::Boolean(true)),
        None => catalog.set("MarkInfo", Dictionary::new().with("Marked", CosValue::Boolean(true))),
    }
    Ok(root)
}

/// Adds `from` → `to` to the /RoleMap of the structure root.
pub fn set_role_mapping(doc: &mut Document, from: &str, to: &str) -> Result<()> {
    let root = struct_tree_root(doc)?;
    let role_ref = doc.get_dict(root)?.get_reference("RoleMap");
    let map = match role_ref {
        Some(id) => doc.get_dict_mut(id)?,
        None => {
            let root_dict = doc.get_dict_mut(root)?;
            if root_dict.get("RoleMap").and_then(CosValue::as_dict).is_none() {
                root_dict.set("RoleMap", Dictionary::new());
            }
            root_dict.get_mut("RoleMap").and_then(CosValue::as_dict_mut).unwrap()
        }
    };
    map.set(from, CosValue::name(to));
    Ok(())
}

/// Regenerates /ParentTree entries for every page from the structure tree.
/// Entries for keys that do not belong to a page are kept.
pub fn rebuild_parent_tree(doc: &mut Document) -> Result<()> {
    let tree = parse_structure(doc)?;
    let pages = doc.pages()?;
    let mut by_page: BTreeMap<ObjectId, BTreeMap<i64, ObjectId>> = BTreeMap::new();
    for claim in tree.all_claims() {
        if let Some(page) = claim.page {
            by_page.entry(page).or_default().insert(claim.mcid, claim.elem);
        }
    }
    let mut entries = tree.parent_tree.clone();
    let mut next_key = entries.keys().max().map_or(0, |k| k + 1);
    for page in &pages {
        if let Some(key) = doc.get_dict(*page)?.get_i64("StructParents") {
            next_key = next_key.max(key + 1);
        }
    }
    for page in pages {
        let Some(claims) = by_page.get(&page) else {
            if let Some(key) = doc.get_dict(page)?.get_i64("StructParents") {
                entries.remove(&key);
            }
            continue;
        };
        let key = match doc.get_dict(page)?.get_i64("StructParents") {
            Some(k) => k,
            None => {
                let k = next_key;
                next_key += 1;
                doc.get_dict_mut(page)?.set("StructParents", k);
                k
            }
        };
        let len = claims.keys().max().map_or(0, |m| m + 1).max(0) as usize;
        let mut slots = vec![None; len];
        for (mcid, elem) in claims {
            if *mcid >= 0 {
                slots[*mcid as usize] = Some(*elem);
            }
        }
        entries.insert(key, slots);
    }
    let mut nums = Vec::new();
    for (key, slots) in &entries {
        nums.push(CosValue::Integer(*key));
        nums.push(CosValue::Array(
            slots.iter().map(|s| s.map_or(CosValue::Null, CosValue::from)).collect(),
        ));
    }
    let node = Dictionary::new().with("Nums", CosValue::Array(nums));
    let root = tree.root;
    match doc.get_dict(root)?.get_reference("ParentTree") {
        Some(id) => {
            doc.insert(id, node.into());
        }
        None => {
            let id = doc.add_object(node);
            doc.get_dict_mut(root)?.set("ParentTree", id);
        }
    }
    doc.get_dict_mut(root)?.set("ParentTreeNextKey", next_key);
    Ok(())
}

/// One leaf of a formula's MathML tree, tied to a content span.
#[derive(Debug, Clone, PartialEq)]
pub struct MathLeaf {
    pub tag: String,
    pub mcid: i64,
    pub attributes: Option<Dictionary>,
}

impl MathLeaf {
    pub fn new(tag: impl Into<String>, mcid: i64) -> Self {
        MathLeaf {
            tag: tag.into(),
            mcid,
            attributes: None,
        }
    }
}

/// The content-side shape of a formula to be tagged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormulaLayout {
    pub display: bool,
    /// MCID of an opening access-tag span.
    pub opening_tag: Option<i64>,
    pub leaves: Vec<MathLeaf>,
    /// MCID of a closing access-tag span.
    pub closing_tag: Option<i64>,
    pub associated_files: Vec<ObjectId>,
}

fn next_formula_number(tree: Option<&StructTree>, page_index: usize) -> usize {
    let prefix = format!("Math{page_index}.");
    tree.map_or(0, |t| {
        t.elements
            .values()
            .filter_map(|e| e.element_id.as_deref()?.strip_prefix(&prefix)?.parse::<usize>().ok())
            .max()
            .unwrap_or(0)
    }) + 1
}

pub(crate) fn leaf_elem(tag: &str, mcid: i64, page: ObjectId, parent: ObjectId) -> Dictionary {
    Dictionary::new()
        .with("K", CosValue::Array(vec![CosValue::Integer(mcid)]))
        .with("Pg", page)
        .with("P", parent)
        .with("Type", CosValue::name("StructElem"))
        .with("S", CosValue::name(tag))
}

/// Builds Formula → [accesstag] math → mrow → leaves [accesstag] under
/// `parent` (the structure root when `None`) and returns the Formula.
pub fn build_formula_subtree(
    doc: &mut Document,
    page: ObjectId,
    layout: &FormulaLayout,
    parent: Option<ObjectId>,
) -> Result<ObjectId> {
    let page_index = doc
        .page_index(page)?
        .ok_or_else(|| Error::TargetNotFound(format!("page object {page}")))?;
    let existing = match struct_tree_root(doc) {
        Ok(_) => Some(parse_structure(doc)?),
        Err(Error::MissingStructTreeRoot) => None,
        Err(e) => return Err(e),
    };
    let mut wanted: Vec<i64> = layout.leaves.iter().map(|l| l.mcid).collect();
    wanted.extend(layout.opening_tag);
    wanted.extend(layout.closing_tag);
    let claimed: BTreeSet<i64> = existing
        .iter()
        .flat_map(|t| t.all_claims())
        .filter(|c| c.page == Some(page))
        .map(|c| c.mcid)
        .collect();
    let mut fresh = BTreeSet::new();
    for mcid in &wanted {
        if claimed.contains(mcid) || !fresh.insert(*mcid) {
            return Err(Error::McidAlreadyClaimed(*mcid));
        }
    }
    let present: BTreeSet<i64> = crate::content::mcids(&page_span_tree(doc, page)?).into_iter().collect();
    if let Some(missing) = wanted.iter().find(|m| !present.contains(m)) {
        return Err(Error::TargetNotFound(format!("MCID {missing} on page {page_index}")));
    }
    for id in &layout.associated_files {
        require_filespec(doc, *id)?;
    }

    let root = ensure_struct_root(doc)?;
    let parent = parent.unwrap_or(root);
    let k = next_formula_number(existing.as_ref(), page_index);

    let formula = doc.add_object(CosValue::Null);
    let mut kids = Vec::new();
    if let Some(mcid) = layout.opening_tag {
        kids.push(doc.add_object(leaf_elem("accesstag", mcid, page, formula)));
    }
    if !layout.leaves.is_empty() {
        let math = doc.add_object(CosValue::Null);
        let mrow = doc.add_object(CosValue::Null);
        let mut leaf_ids = Vec::new();
        for leaf in &layout.leaves {
            let mut dict = leaf_elem(&leaf.tag, leaf.mcid, page, mrow);
            if let Some(a) = &leaf.attributes {
                dict.set("A", a.clone());
            }
            leaf_ids.push(doc.add_object(dict));
        }
        doc.insert(
            mrow,
            Dictionary::new()
                .with("K", CosValue::Array(leaf_ids.into_iter().map(CosValue::from).collect()))
                .with("P", math)
                .with("Type", CosValue::name("StructElem"))
                .with("S", CosValue::name("mrow"))
                .into(),
        );
        doc.insert(
            math,
            Dictionary::new()
                .with("K", CosValue::Array(vec![mrow.into()]))
                .with("P", formula)
                .with("Type", CosValue::name("StructElem"))
                .with("S", CosValue::name("math"))
                .with(
                    "A",
                    Dictionary::new()
                        .with("O", CosValue::name("XML-1.00"))
                        .with("xmlns", CosValue::literal(MATHML_NAMESPACE))
                        .with(
                            "display",
                            CosValue::literal(if layout.display { "block" } else { "inline" }),
                        ),
                )
                .into(),
        );
        kids.push(math);
    }
    if let Some(mcid) = layout.closing_tag {
        kids.push(doc.add_object(leaf_elem("accesstag", mcid, page, formula)));
    }
    let label = if layout.display { "DisplayMath" } else { "InlineMath" };
    let mut dict = Dictionary::new()
        .with("K", CosValue::Array(kids.into_iter().map(CosValue::from).collect()))
        .with("P", parent)
        .with("Type", CosValue::name("StructElem"))
        .with("S", CosValue::name("Formula"))
        .with("ID", CosValue::literal(format!("Math{page_index}.{k}")))
        .with("T", CosValue::literal(format!("{label} {page_index}.{k}")));
    if !layout.associated_files.is_empty() {
        dict.set(
            "AF",
            CosValue::Array(layout.associated_files.iter().map(|id| CosValue::from(*id)).collect()),
        );
    }
    dict.set("A", Dictionary::new().with("O", CosValue::name("XML-1.01")));
    doc.insert(formula, dict.into());

    let parent_dict = doc.get_dict_mut(parent)?;
    match parent_dict.get_mut("K") {
        Some(CosValue::Array(items)) => items.push(formula.into()),
        Some(other) => {
            let previous = other.clone();
            *other = CosValue::Array(vec![previous, formula.into()]);
        }
        None => parent_dict.set("K", CosValue::Array(vec![formula.into()])),
    }
    if !layout.associated_files.is_empty() {
        register_associated_files(doc, &layout.associated_files)?;
    }
    rebuild_parent_tree(doc)?;
    Ok(formula)
}
