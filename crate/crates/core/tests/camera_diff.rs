use std::path::Path;

use ontomvn_core::versioning::{content_lines, diff, load_ontology, render_diff, semantic_diff};

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/camera")
        .join(name)
}

#[test]
fn camera_diff_matches_golden_lines() {
    let working = load_ontology(&fixture("working.owl")).unwrap();
    let base = load_ontology(&fixture("base.owl")).unwrap();
    let report = diff(&working, &base);
    assert!(report.added_entailments.is_empty() && report.removed_entailments.is_empty());
    let text = render_diff(&report);
    let golden = std::fs::read_to_string(fixture("expected-diff.txt")).unwrap();
    assert_eq!(content_lines(&text), golden.lines().collect::<Vec<_>>(), "{text}");
}

#[test]
fn camera_swap_is_antisymmetric() {
    let w = load_ontology(&fixture("working.owl")).unwrap().ontology;
    let b = load_ontology(&fixture("base.owl")).unwrap().ontology;
    let forward = semantic_diff(&w, &b);
    let back = semantic_diff(&b, &w);
    assert_eq!(forward.added_axioms, back.removed_axioms);
    assert_eq!(forward.removed_axioms, back.added_axioms);
}
