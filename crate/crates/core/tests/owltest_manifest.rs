use std::fs;
use std::path::Path;

use ontomvn_core::repository::OfflineTransport;
use ontomvn_core::resolver::Catalog;
use ontomvn_core::test_runner::{run_cases, Status, TestCase, TestContext, TestReport};

fn manifest() -> Vec<(TestCase, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/owltest");
    fs::read_to_string(dir.join("manifest.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let case = match f[0] {
                "consistency" => TestCase::consistency(f[1]),
                "entailment" => TestCase::entailment(f[1], f[2]),
                k => panic!("unknown kind {k}"),
            };
            (case, f.last().unwrap().to_string())
        })
        .collect()
}

fn run(cases: &[TestCase]) -> TestReport {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/owltest");
    let catalog = Catalog::default();
    let ctx = TestContext {
        project_dir: &dir,
        catalog: &catalog,
        transport: &OfflineTransport,
    };
    run_cases(cases, &ctx)
}

#[test]
fn verdicts_match_the_manifest() {
    let m = manifest();
    let cases: Vec<TestCase> = m.iter().map(|(c, _)| c.clone()).collect();
    let report = run(&cases);
    for (outcome, (_, expected)) in report.outcomes.iter().zip(&m) {
        assert_eq!(
            outcome.verdict.as_str(),
            expected,
            "{} {:?}",
            outcome.case.name(),
            outcome.details
        );
        assert!(outcome.verdict.fits(outcome.case.kind));
        let should_fail = matches!(expected.as_str(), "inconsistent" | "NoEntailment");
        assert_eq!(outcome.status == Status::Failed, should_fail, "{}", outcome.case.name());
    }
    let s = report.summary;
    assert_eq!((s.total, s.failed, s.unknown), (10, 4, 2));
    assert!(report.failed());
}

#[test]
fn unknown_verdicts_do_not_fail_a_suite() {
    let cases: Vec<TestCase> = manifest()
        .into_iter()
        .filter(|(_, v)| v == "unknown")
        .map(|(c, _)| c)
        .collect();
    let report = run(&cases);
    assert_eq!(report.summary.unknown, 2);
    assert!(!report.failed());
}

#[test]
fn report_xml_is_well_formed_and_complete() {
    let m = manifest();
    let cases: Vec<TestCase> = m.iter().map(|(c, _)| c.clone()).collect();
    let xml = run(&cases).to_xml();
    let doc = roxmltree::Document::parse(&xml).unwrap();
    let root = doc.root_element();
    assert_eq!(root.attribute("tests"), Some("10"));
    assert_eq!(root.attribute("failures"), Some("4"));
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("testcase")).count(), 10);
}
