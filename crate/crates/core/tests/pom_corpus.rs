mod support;

use ontomvn_core::pom::{effective_repositories, parse_pom, serialize_pom};
use std::sync::Arc;

use ontomvn_core::repository::{OfflineTransport, RemoteRepository};
use support::{complete_listing, fixtures, pom_corpus};

fn listing(name: &str) -> String {
    complete_listing(&std::fs::read_to_string(fixtures().join("poms/listings").join(name)).unwrap())
}

#[test]
fn every_corpus_pom_round_trips() {
    let corpus = pom_corpus();
    assert!(corpus.len() >= 9, "corpus has {} entries", corpus.len());
    for (name, text) in corpus {
        let first = parse_pom(&text).unwrap_or_else(|e| panic!("{name}: {e}")).project;
        let written = serialize_pom(&first);
        let second = parse_pom(&written)
            .unwrap_or_else(|e| panic!("{name} reparse: {e}"))
            .project;
        assert_eq!(first, second, "{name}");
        assert_eq!(written, serialize_pom(&second), "{name}: serialization not stable");
    }
}

#[test]
fn dependency_listing() {
    let p = parse_pom(&listing("dependencies.txt")).unwrap().project;
    assert_eq!(p.dependencies.len(), 1);
    assert_eq!(
        p.dependencies[0].coordinate.to_string(),
        "de.onto.maven:TimeOntologie:1.0"
    );
    assert_eq!(p.dependencies[0].coordinate.kind, "owl");
}

#[test]
fn profile_listing() {
    let p = parse_pom(&listing("profile-repository.txt")).unwrap().project;
    let repos = effective_repositories(&p);
    assert_eq!(repos.len(), 1);
    // the descriptor keeps the listing text; the scheme is added when a client is built
    assert_eq!(repos[0].url, "www.corporate-semantic-web.de/repository/snapshots/");
    let remote = RemoteRepository::new(repos[0].clone(), Arc::new(OfflineTransport));
    assert_eq!(
        remote.base_url(),
        "http://www.corporate-semantic-web.de/repository/snapshots"
    );
    assert_eq!(repos[0].name.as_deref(), Some("OntoMaven Snapshot Repository"));
    assert!(repos[0].snapshots_enabled);
    let dep = &p.dependencies[0].coordinate;
    assert_eq!(dep.artifact_id, "Camera-OWL-Ontology");
    assert!(dep.is_snapshot());
}

#[test]
fn plugin_listings() {
    let p = parse_pom(&listing("semantic-diff-plugin.txt")).unwrap().project;
    assert_eq!(p.plugins[0].version.as_deref(), Some("1.0-SNAPSHOT"));
    assert!(p.plugins[0].has_goal("semantic-diff"));

    let p = parse_pom(&listing("owlimport-plugin.txt")).unwrap().project;
    assert_eq!(p.plugins[0].configuration["owlfile"], "src/resource/reputation.owl");
    assert_eq!(p.plugins[0].configuration["local"], "true");

    let p = parse_pom(&listing("test-plugins.txt")).unwrap().project;
    assert_eq!(p.plugins.len(), 2);
    assert!(p.plugins[1].has_goal("owlentailment"));

    let p = parse_pom(&listing("reporting.txt")).unwrap().project;
    assert_eq!(
        p.report_plugins[0].reports,
        ["ontologyreport", "technicalreport", "visualizer"]
    );
}

#[test]
fn metadata_listing() {
    let p = parse_pom(&listing("metadata.txt")).unwrap().project;
    let m = &p.metadata;
    assert_eq!(m.inception_year.as_deref(), Some("2013"));
    assert_eq!(m.licenses[0].name.as_deref(), Some("LGPL-3.0"));
    assert_eq!(m.developers[0].roles, ["developer"]);
    assert_eq!(
        m.developers[0].organization_url.as_deref(),
        Some("www.corporate-semantic-web.de/")
    );
}

#[test]
fn hand_written_project() {
    let text = std::fs::read_to_string(fixtures().join("poms/camera-project.xml")).unwrap();
    let parsed = parse_pom(&text).unwrap();
    assert!(parsed.warnings.is_empty(), "{:?}", parsed.warnings);
    let ids: Vec<_> = effective_repositories(&parsed.project)
        .into_iter()
        .map(|r| r.id)
        .collect();
    assert_eq!(ids, ["central", "snapshots"]);
}

#[test]
fn completion_leaves_whole_documents_alone() {
    let doc = "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version></project>\n";
    assert_eq!(complete_listing(doc), doc);
}
