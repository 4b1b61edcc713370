#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub const LISTING_COORDINATES: (&str, &str, &str) = ("org.example.listing", "listing", "1.0");

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Turns a POM excerpt into a complete document.
///
/// Excerpts elide content with `...` lines, may stop short of the closing
/// `>` of the root tag, or omit `<project>` entirely. Everything else is
/// kept byte for byte, so the parser sees the excerpt's own markup.
pub fn complete_listing(text: &str) -> String {
    let (g, a, v) = LISTING_COORDINATES;
    let coords = format!("<groupId>{g}</groupId><artifactId>{a}</artifactId><version>{v}</version>");
    let mut body: String = text
        .lines()
        .filter(|l| l.trim() != "...")
        .map(|l| format!("{l}\n"))
        .collect();
    let trimmed = body.trim_end();
    if trimmed.ends_with("</project") {
        body = format!("{trimmed}>\n");
    }
    if !body.trim_start().starts_with("<project") {
        return format!("<project>{coords}\n{body}</project>\n");
    }
    let has_coords = roxmltree::Document::parse(&body)
        .map(|d| d.root_element().children().any(|c| c.has_tag_name("groupId")))
        .unwrap_or(false);
    if has_coords {
        body
    } else {
        body.replacen("<project>", &format!("<project>{coords}"), 1)
    }
}

/// Every POM in the corpus, excerpts completed, keyed by file name.
pub fn pom_corpus() -> Vec<(String, String)> {
    let dir = fixtures().join("poms");
    let mut out = Vec::new();
    for sub in ["", "listings"] {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir.join(sub))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        for p in paths {
            let raw = std::fs::read_to_string(&p).unwrap();
            let text = if sub.is_empty() { raw } else { complete_listing(&raw) };
            out.push((p.file_name().unwrap().to_string_lossy().into_owned(), text));
        }
    }
    out
}
