#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ontomvn_cli::{run, Context};
use ontomvn_core::repository::{OfflineTransport, Transport};

pub struct Run {
    pub code: i32,
    pub out: String,
    pub err: String,
}

impl Run {
    pub fn out_lines(&self) -> Vec<&str> {
        self.out.lines().collect()
    }
}

pub fn ontomvn_with(ctx: &Context, args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ontomvn").chain(args.iter().copied());
    let code = run(argv, ctx, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

/// Runs with the real HTTP transport online and no network offline.
pub fn ontomvn(args: &[&str]) -> Run {
    ontomvn_with(&Context::default(), args)
}

pub fn context(online: Arc<dyn Transport>, offline: Arc<dyn Transport>) -> Context {
    Context { online, offline }
}

pub fn offline_only() -> Context {
    context(Arc::new(OfflineTransport), Arc::new(OfflineTransport))
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn write(path: &Path, text: &str) {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).unwrap();
    }
    fs::write(path, text).unwrap();
}

/// A POM with the given coordinate and extra body markup.
pub fn pom(coordinate: &str, body: &str) -> String {
    let mut parts = coordinate.split(':');
    let (g, a, v) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
    format!("<project><groupId>{g}</groupId><artifactId>{a}</artifactId><version>{v}</version>{body}</project>\n")
}

/// Every file below `dir`, relative path and bytes, sorted.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}
