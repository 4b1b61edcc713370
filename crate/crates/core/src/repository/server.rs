//! Minimal artifact server over a directory in repository layout.

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::thread::JoinHandle;

use tiny_http::{Method, Response, Server};

use super::{write_atomic, RepositoryError};

#[derive(Debug, Clone, Copy, Default)]
pub struct ServeOptions {
    /// Answer every PUT with 403.
    pub read_only: bool,
}

pub struct ServerHandle {
    addr: SocketAddr,
    server: Arc<Server>,
    worker: Option<JoinHandle<()>>,
}

impl ServerHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Stops accepting requests and waits for the worker to finish.
    pub fn shutdown(mut self) {
        self.stop();
    }

    fn stop(&mut self) {
        self.server.unblock();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        self.stop();
    }
}

pub fn serve(root: &Path, bind: &str) -> Result<ServerHandle, RepositoryError> {
    serve_with(root, bind, ServeOptions::default())
}

pub fn serve_with(root: &Path, bind: &str, options: ServeOptions) -> Result<ServerHandle, RepositoryError> {
    if !root.is_dir() {
        return Err(RepositoryError::Bind(format!("{} is not a directory", root.display())));
    }
    let server = Arc::new(Server::http(bind).map_err(|e| RepositoryError::Bind(format!("{bind}: {e}")))?);
    let addr = server
        .server_addr()
        .to_ip()
        .ok_or_else(|| RepositoryError::Bind(format!("{bind}: not an IP listener")))?;
    let root = root.to_path_buf();
    let worker_server = Arc::clone(&server);
    let worker = std::thread::spawn(move || {
        for request in worker_server.incoming_requests() {
            // one thread per request keeps slow clients from blocking others
            let root = root.clone();
            std::thread::spawn(move || handle(&root, options, request));
        }
    });
    log::info!("serving {} on http://{addr}", addr);
    Ok(ServerHandle {
        addr,
        server,
        worker: Some(worker),
    })
}

/// Maps a request path onto `root`, refusing anything that could escape it.
fn local_path(root: &Path, url: &str) -> Option<PathBuf> {
    let path = url.split(['?', '#']).next().unwrap_or("");
    let mut out = root.to_path_buf();
    let mut any = false;
    for seg in path.split('/').filter(|s| !s.is_empty()) {
        if seg == "." || seg == ".." || seg.contains('\\') || seg.contains('\0') {
            return None;
        }
        out.push(seg);
        any = true;
    }
    any.then_some(out)
}

fn handle(root: &Path, options: ServeOptions, mut request: tiny_http::Request) {
    let url = request.url().to_string();
    let method = request.method().clone();
    let response = match (local_path(root, &url), &method) {
        (None, _) => Response::from_string("bad path").with_status_code(400),
        (Some(path), Method::Get) | (Some(path), Method::Head) => match fs::read(&path) {
            Ok(bytes) if path.is_file() => Response::from_data(bytes),
            _ => Response::from_string("not found").with_status_code(404),
        },
        (Some(_), Method::Put) if options.read_only => Response::from_string("read-only").with_status_code(403),
        (Some(path), Method::Put) => {
            let mut body = Vec::new();
            match request.as_reader().read_to_end(&mut body) {
                Ok(_) => match write_atomic(&path, &body) {
                    Ok(()) => Response::from_string("created").with_status_code(201),
                    Err(e) => {
                        log::warn!("PUT {url}: {e}");
                        Response::from_string("write failed").with_status_code(500)
                    }
                },
                Err(_) => Response::from_string("bad body").with_status_code(400),
            }
        }
        _ => Response::from_string("method not allowed").with_status_code(405),
    };
    log::debug!("{method} {url} -> {}", response.status_code().0);
    let _ = request.respond(response);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repository::{HttpTransport, Transport};

    #[test]
    fn get_put_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("a/b")).unwrap();
        fs::write(dir.path().join("a/b/x.owl"), b"\x00bytes\xff").unwrap();
        let h = serve(dir.path(), "127.0.0.1:0").unwrap();
        let t = HttpTransport::new();
        let base = h.base_url();
        assert_eq!(t.get(&format!("{base}/a/b/x.owl")).unwrap().unwrap(), b"\x00bytes\xff");
        assert_eq!(t.get(&format!("{base}/a/b/none.owl")).unwrap(), None);
        assert_eq!(t.put(&format!("{base}/c/d/y.pom"), b"pom").unwrap(), 201);
        assert_eq!(t.get(&format!("{base}/c/d/y.pom")).unwrap().unwrap(), b"pom");
        assert_eq!(fs::read(dir.path().join("c/d/y.pom")).unwrap(), b"pom");
        h.shutdown();
    }

    #[test]
    fn read_only_rejects_put() {
        let dir = tempfile::tempdir().unwrap();
        let h = serve_with(dir.path(), "127.0.0.1:0", ServeOptions { read_only: true }).unwrap();
        let t = HttpTransport::new();
        assert_eq!(t.put(&format!("{}/x", h.base_url()), b"z").unwrap(), 403);
    }

    #[test]
    fn traversal_is_refused() {
        assert!(local_path(Path::new("/r"), "/a/../b").is_none());
        assert!(local_path(Path::new("/r"), "/").is_none());
        assert_eq!(
            local_path(Path::new("/r"), "/a/b?x=1").unwrap(),
            PathBuf::from("/r/a/b")
        );
    }

    #[test]
    fn missing_root_is_bind_error() {
        assert!(matches!(
            serve(Path::new("/nonexistent/ontomvn"), "127.0.0.1:0"),
            Err(RepositoryError::Bind(_))
        ));
    }
}
