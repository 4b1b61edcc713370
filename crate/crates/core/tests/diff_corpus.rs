//! Identity, antisymmetry and coherence of the diff over the EL corpus.

use std::path::Path;

use ontomvn_core::ontology::{parse_ontology, serialize_ontology};
use ontomvn_core::versioning::{render_diff, semantic_diff};
use ontomvn_core::Ontology;

fn corpus() -> Vec<(String, Ontology)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/el-corpus");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                parse_ontology(&text).unwrap(),
            )
        })
        .collect()
}

#[test]
fn self_diff_is_empty() {
    for (name, o) in corpus() {
        assert!(semantic_diff(&o, &o).is_empty(), "{name}");
        let mut shuffled = o.clone();
        shuffled.axioms.reverse();
        let reparsed = parse_ontology(&serialize_ontology(&shuffled)).unwrap();
        assert!(semantic_diff(&reparsed, &o).is_empty(), "{name} reordered");
    }
}

#[test]
fn swapping_swaps_deltas() {
    let c = corpus();
    let mut rendered = std::collections::BTreeMap::new();
    for (na, a) in &c {
        for (nb, b) in &c {
            let f = semantic_diff(a, b);
            let r = semantic_diff(b, a);
            assert_eq!(f.added_axioms, r.removed_axioms, "{na} vs {nb}");
            assert_eq!(f.removed_axioms, r.added_axioms, "{na} vs {nb}");
            assert_eq!(f.added_entailments, r.removed_entailments, "{na} vs {nb}");
            assert_eq!(f.removed_entailments, r.added_entailments, "{na} vs {nb}");
            // distinct reports render differently
            if let Some(prev) = rendered.insert(render_diff(&f), f.clone()) {
                assert_eq!(prev, f, "{na} vs {nb}");
            }
        }
    }
}
