use std::path::PathBuf;

use texpdf::access_tags::{inject_access_tags, InjectOptions, InjectTarget};
use texpdf::attachments::{list_attachments, AssociationTarget};
use texpdf::content::{parse_content, ContentOp};
use texpdf::cos::{parse_document, Document, ObjectId};
use texpdf::extraction::{accessible_text, association_report, copy_text, harvest_latex, HarvestLocation, Scope};
use texpdf::structure::{parse_structure, resolve_marked_content};
use texpdf::Error;

fn load(name: &str) -> Document {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    parse_document(&std::fs::read(path).unwrap()).unwrap()
}

fn page_ops(doc: &Document, index: usize) -> Vec<ContentOp> {
    let page = doc.pages().unwrap()[index];
    parse_content(&doc.page_content(page).unwrap()).unwrap()
}

fn lines(text: &str) -> Vec<&str> {
    text.split(['\r', '\n']).collect()
}

#[test]
fn fig5_copy_text_frames_the_source() {
    let doc = load("fig5.pdf");
    let text = copy_text(&doc, Scope::Document).unwrap();
    let lines = lines(&text);
    let open = lines.iter().position(|l| *l == "<latex>").unwrap();
    assert_eq!(lines[open + 1], "k \\in \\RR");
    assert_eq!(lines[open + 2], "</latex>");
    assert_eq!(lines[open + 3], "<content>");
    let math: String = lines[open + 4].chars().filter(|c| !c.is_whitespace()).collect();
    assert_eq!(math, "\u{1D458}\u{2208}\u{211D}");
    assert_eq!(lines[open + 5], "</content>");
}

#[test]
fn fig1_accessible_text_uses_alt() {
    let doc = load("fig1_3.pdf");
    let text = accessible_text(&doc, Scope::Document).unwrap();
    assert!(text.contains("  as element of  "));
    assert!(text.contains("  real numbers  "));
    let copied = copy_text(&doc, Scope::Document).unwrap();
    assert!(copied.contains("\u{1D458}\u{2208}\u{211D}"));
}

#[test]
fn fig5_formula_resolves_to_mcids_8_to_12() {
    let doc = load("fig5.pdf");
    let tree = parse_structure(&doc).unwrap();
    let spans = resolve_marked_content(&tree, ObjectId::from(112), &doc).unwrap();
    let mcids: Vec<_> = spans.iter().filter_map(|s| s.mcid()).collect();
    assert_eq!(mcids, [8, 9, 10, 11, 12]);
}

#[test]
fn injecting_fig1_reproduces_fig5() {
    let mut doc = load("fig1_3.pdf");
    let outcome = inject_access_tags(
        &mut doc,
        &InjectTarget::Structure(ObjectId::from(112)),
        "k \\in \\RR",
        &InjectOptions::default(),
    )
    .unwrap();
    assert_eq!(outcome.mcids, Some((8, 12)));
    assert_eq!(outcome.font, "F79");
    let expected = load("fig5.pdf");
    assert_eq!(page_ops(&doc, 0), page_ops(&expected, 0));

    let tree = parse_structure(&doc).unwrap();
    let shape = |tree: &texpdf::structure::StructTree| -> Vec<(usize, String)> {
        tree.outline()
            .into_iter()
            .map(|(d, e)| (d, e.structure_type.clone()))
            .collect()
    };
    assert_eq!(shape(&tree), shape(&parse_structure(&expected).unwrap()));
    let (open, close) = outcome.elements.unwrap();
    assert_eq!(tree.parent_tree[&0][8], Some(open));
    assert_eq!(tree.parent_tree[&0][12], Some(close));
    assert_eq!(tree.role_map.as_ref().unwrap().get_name("accesstag"), Some("Custom"));

    let again = inject_access_tags(
        &mut doc,
        &InjectTarget::Structure(ObjectId::from(112)),
        "k \\in \\RR",
        &InjectOptions::default(),
    );
    assert_eq!(again, Err(Error::AlreadyTagged));
}

#[test]
fn harvest_fig5() {
    let found = harvest_latex(&load("fig5.pdf")).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].latex, "k \\in \\RR");
    assert_eq!(
        found[0].location,
        HarvestLocation::Span {
            mcid: Some(8),
            index: 9
        }
    );
    assert!(harvest_latex(&load("fig1_3.pdf")).unwrap().is_empty());
}

#[test]
fn multi_page_formulas_harvest_in_page_order() {
    let mut doc = load("multi_page.pdf");
    let tree = parse_structure(&doc).unwrap();
    let ids: Vec<_> = ["Math1.1", "Math0.2", "Math0.1"]
        .iter()
        .map(|i| tree.find_by_element_id(i).unwrap().id)
        .collect();
    for (id, latex) in ids.iter().zip(["z", "y+1", "x"]) {
        inject_access_tags(
            &mut doc,
            &InjectTarget::Structure(*id),
            latex,
            &InjectOptions::default(),
        )
        .unwrap();
    }
    let straddling = tree.find_by_element_id("Math0.3").unwrap().id;
    assert_eq!(
        inject_access_tags(
            &mut doc,
            &InjectTarget::Structure(straddling),
            "a b",
            &InjectOptions::default()
        ),
        Err(Error::CrossesPageBoundary)
    );
    let found: Vec<_> = harvest_latex(&doc)
        .unwrap()
        .into_iter()
        .map(|f| (f.page, f.latex))
        .collect();
    assert_eq!(found, [(0, "x".into()), (0, "y+1".into()), (1, "z".into())]);
    parse_structure(&doc).unwrap();
}

#[test]
fn untagged_injection() {
    let mut doc = load("untagged.pdf");
    let page = doc.pages().unwrap()[0];
    let before = page_ops(&doc, 0);
    let target = InjectTarget::ContentSpan {
        page,
        resource: "inline-1".into(),
    };
    let outcome = inject_access_tags(&mut doc, &target, "k \\in \\RR", &InjectOptions::default()).unwrap();
    assert_eq!(outcome.mcids, None);
    assert_eq!(page_ops(&doc, 0).len(), before.len() + 12);
    assert_eq!(harvest_latex(&doc).unwrap()[0].latex, "k \\in \\RR");
}

#[test]
fn fig3_association_closure() {
    let doc = load("fig1_3.pdf");
    let report = list_attachments(&doc);
    assert!(report.findings.is_empty(), "{:?}", report.findings);
    let tex = report.attachments.iter().find(|a| a.name == "inline-1.tex").unwrap();
    assert_eq!(tex.relationship.as_deref(), Some("Source"));
    assert_eq!(tex.size, Some(16));
    assert!(tex.integrity_ok && tex.registered);
    let page = doc.pages().unwrap()[0];
    assert_eq!(
        tex.targets,
        vec![
            AssociationTarget::ContentSpan {
                page,
                resource: "inline-1".into()
            },
            AssociationTarget::Structure {
                elem: ObjectId::from(112)
            },
        ]
    );
}

#[test]
fn fig3_association_report() {
    let doc = load("fig1_3.pdf");
    let report = association_report(&doc).unwrap();
    let tex = report
        .files
        .iter()
        .find(|f| f.name.as_deref() == Some("inline-1.tex"))
        .unwrap();
    let structure = tex
        .targets
        .iter()
        .find(|t| matches!(t.target, AssociationTarget::Structure { .. }))
        .unwrap();
    assert_eq!(structure.mcids, [9, 10, 11]);
    assert_eq!(structure.text.as_deref(), Some("\u{1D458}\u{2208}\u{211D}"));
    let source = report.files.iter().find(|f| f.filespec == ObjectId::from(22)).unwrap();
    assert_eq!(source.targets.len(), 1);
    assert_eq!(source.targets[0].target, AssociationTarget::Document);
    assert!(source.targets[0].mcids.is_empty());
}

#[test]
fn harvest_keeps_line_breaks_inside_sources() {
    for latex in ["\r\n", "a\nb", "\n\r", "x\n<latex>\ny"] {
        let mut doc = load("fig1_3.pdf");
        let target = InjectTarget::Structure(ObjectId::from(112));
        inject_access_tags(&mut doc, &target, latex, &InjectOptions::default()).unwrap();
        let found: Vec<_> = harvest_latex(&doc).unwrap().into_iter().map(|f| f.latex).collect();
        assert_eq!(found, [latex], "{latex:?}");
    }
}
