use std::path::PathBuf;

use texpdf::cos::{dict_get, parse_document, serialize_document, CosValue, Document, ObjectId};

const FIXTURES: &[&str] = &[
    "minimal.pdf",
    "crlf.pdf",
    "out_of_order.pdf",
    "generation.pdf",
    "dupkeys.pdf",
    "attachments_only.pdf",
    "indirect_length.pdf",
    "untagged.pdf",
    "multi_page.pdf",
    "fig1_3.pdf",
    "fig5.pdf",
];

fn fixture(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read(path).unwrap()
}

#[test]
fn every_fixture_round_trips() {
    for name in FIXTURES {
        let doc = parse_document(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let first = serialize_document(&doc);
        let back = parse_document(&first).unwrap_or_else(|e| panic!("{name} reparse: {e}"));
        assert_eq!(back, doc.canonical(), "{name}");
        assert_eq!(serialize_document(&back), first, "{name}");
        for (id, at) in back.xref_offsets() {
            assert!(
                first[*at..].starts_with(format!("{} 0 obj", id.number).as_bytes()),
                "{name}"
            );
        }
    }
}

#[test]
fn minimal_has_four_objects() {
    let doc = parse_document(&fixture("minimal.pdf")).unwrap();
    assert_eq!(doc.object_count(), 4);
    assert_eq!(doc.catalog().unwrap().type_name(), Some("Catalog"));
    assert_eq!(doc.pages().unwrap().len(), 1);
}

#[test]
fn formula_element_from_fig5() {
    let doc = parse_document(&fixture("fig5.pdf")).unwrap();
    let elem = doc.get_dict(ObjectId::from(112)).unwrap();
    assert_eq!(elem.get_name("S"), Some("Formula"));
    assert_eq!(
        elem.get("AF"),
        Some(&CosValue::Array(vec![
            ObjectId::from(27).into(),
            ObjectId::from(29).into()
        ]))
    );
    let mark_info = doc.lookup(doc.catalog().unwrap(), "MarkInfo").unwrap().unwrap();
    let mark_info = mark_info.as_dict().unwrap();
    assert_eq!(dict_get(mark_info, "Marked"), Some(&CosValue::Boolean(true)));
    assert!(matches!(dict_get(mark_info, "AF"), Some(CosValue::Reference(_))));
}

#[test]
fn filespec_resolves() {
    let doc = parse_document(&fixture("fig1_3.pdf")).unwrap();
    let reference = CosValue::Reference(ObjectId::from(27));
    let spec = doc.resolve(&reference).unwrap();
    let spec = spec.as_dict().unwrap();
    assert_eq!(spec.get_text("Desc").as_deref(), Some("TeX source for inline math"));
}

#[test]
fn duplicate_keys_first_wins_and_unknown_keys_survive() {
    let doc = parse_document(&fixture("dupkeys.pdf")).unwrap();
    let catalog = doc.catalog().unwrap();
    assert!(catalog.has_duplicates());
    assert_eq!(catalog.get_text("Lang").as_deref(), Some("en-AU"));
    let back = parse_document(&serialize_document(&doc)).unwrap();
    assert_eq!(back.catalog().unwrap().get_text("Lang").as_deref(), Some("en-AU"));
    assert!(back.trailer.contains_key("XYZ_TrailerKey"));
}

#[test]
fn generation_numbers_are_normalized() {
    let doc = parse_document(&fixture("generation.pdf")).unwrap();
    assert!(doc.get(ObjectId::new(6, 2)).is_some());
    let back = parse_document(&serialize_document(&doc)).unwrap();
    assert!(back.get(ObjectId::new(6, 0)).is_some());
    assert_eq!(
        back.catalog().unwrap().get_reference("Outlines"),
        Some(ObjectId::new(6, 0))
    );
}

#[test]
fn indirect_length_and_content_arrays() {
    let doc = parse_document(&fixture("indirect_length.pdf")).unwrap();
    let page = doc.pages().unwrap()[0];
    let content = doc.page_content(page).unwrap();
    assert!(content.starts_with(b"BT"));
    let crlf = parse_document(&fixture("crlf.pdf")).unwrap();
    assert_eq!(crlf.version, "1.4");
}

#[test]
fn new_document_serializes() {
    let doc = Document::new();
    let bytes = serialize_document(&doc);
    assert!(bytes.starts_with(b"%PDF-1.7"));
    assert!(parse_document(&bytes).is_ok());
}
