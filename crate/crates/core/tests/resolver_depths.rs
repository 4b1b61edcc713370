//! Resolution depths agree with all-pairs shortest paths on random graphs.

use std::collections::BTreeMap;
use std::sync::Arc;

use ontomvn_core::oracle::shortest_depths;
use ontomvn_core::pom::{serialize_pom, DependencyDecl};
use ontomvn_core::repository::{LocalRepository, MemoryTransport, RemoteRepository};
use ontomvn_core::resolver::{ImportRegistry, Resolver};
use ontomvn_core::{ArtifactCoordinate, ProjectDescriptor, RepositoryDecl};
use proptest::prelude::*;

fn coord(i: usize) -> ArtifactCoordinate {
    ArtifactCoordinate::new("g", format!("n{i}"), "1.0").unwrap()
}

/// Node 0 is the root project; edges may form cycles.
fn resolve_graph(n: usize, edges: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    let mem = Arc::new(MemoryTransport::new());
    let remote = RemoteRepository::new(
        RepositoryDecl {
            id: "r".into(),
            name: None,
            url: "http://r.test/".into(),
            snapshots_enabled: false,
        },
        mem.clone(),
    );
    let descriptor = |i: usize| {
        let mut p = ProjectDescriptor::new(coord(i));
        p.dependencies = edges
            .iter()
            .filter(|(a, _)| *a == i)
            .map(|(_, b)| DependencyDecl { coordinate: coord(*b) })
            .collect();
        p
    };
    for i in 1..n {
        mem.insert(&remote.url_for(&coord(i).artifact_path()), "Ontology()");
        mem.insert(&remote.url_for(&coord(i).pom_path()), serialize_pom(&descriptor(i)));
    }
    let dir = tempfile::tempdir().unwrap();
    let local = LocalRepository::new(dir.path());
    let repos = [remote];
    let registry = ImportRegistry::default();
    let r = Resolver {
        repos: &repos,
        local: &local,
        registry: &registry,
        transport: mem.as_ref(),
    }
    .resolve(&descriptor(0), None)
    .unwrap();
    r.selected
        .values()
        .map(|node| (node.coordinate.artifact_id[1..].parse().unwrap(), node.depth))
        .collect()
}

fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..9).prop_flat_map(|n| {
        let edge = (0..n, 0..n).prop_filter("no self loops", |(a, b)| a != b);
        (
            Just(n),
            prop::collection::btree_set(edge, 0..n * 2).prop_map(|s| s.into_iter().collect()),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn depths_match_shortest_paths((n, edges) in graph()) {
        let got = resolve_graph(n, &edges);
        let mut want = shortest_depths(&0usize, &edges);
        want.remove(&0);
        prop_assert_eq!(got, want);
    }
}

#[test]
fn chain_and_shortcut() {
    let got = resolve_graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    assert_eq!(got, BTreeMap::from([(1, 1), (2, 2), (3, 1)]));
}
