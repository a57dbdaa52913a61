use std::path::PathBuf;

use texpdf::validate::validate_bytes;

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
    std::fs::read(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(name),
    )
    .unwrap()
}

#[test]
fn pristine_fixtures_are_clean() {
    for name in FIXTURES {
        let report = validate_bytes(&fixture(name)).unwrap();
        assert!(report.is_clean(), "{name}: {:#?}", report.findings);
    }
}
