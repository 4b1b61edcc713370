use std::collections::HashMap;
use std::io::Read;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("transport error for {url}: {cause}")]
pub struct TransportError {
    pub url: String,
    pub cause: String,
}

impl TransportError {
    pub fn new(url: &str, cause: impl Into<String>) -> Self {
        TransportError {
            url: url.to_string(),
            cause: cause.into(),
        }
    }
}

/// Byte-level access to remote repositories.
pub trait Transport: Send + Sync {
    /// `Ok(None)` when the resource does not exist.
    fn get(&self, url: &str) -> Result<Option<Vec<u8>>, TransportError>;

    /// Returns the HTTP status of the upload.
    fn put(&self, url: &str, body: &[u8]) -> Result<u16, TransportError>;
}

/// Plain HTTP over `ureq`.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new() -> Self {
        HttpTransport {
            agent: ureq::AgentBuilder::new()
                .timeout_connect(Duration::from_secs(10))
                .timeout(Duration::from_secs(60))
                .build(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Option<Vec<u8>>, TransportError> {
        log::debug!("GET {url}");
        match self.agent.get(url).call() {
            Ok(resp) => {
                let mut body = Vec::new();
                resp.into_reader()
                    .read_to_end(&mut body)
                    .map_err(|e| TransportError::new(url, e.to_string()))?;
                Ok(Some(body))
            }
            Err(ureq::Error::Status(404, _)) | Err(ureq::Error::Status(410, _)) => Ok(None),
            Err(ureq::Error::Status(code, _)) => Err(TransportError::new(url, format!("HTTP status {code}"))),
            Err(e) => Err(TransportError::new(url, e.to_string())),
        }
    }

    fn put(&self, url: &str, body: &[u8]) -> Result<u16, TransportError> {
        log::debug!("PUT {url} ({} bytes)", body.len());
        match self.agent.put(url).send_bytes(body) {
            Ok(resp) => Ok(resp.status()),
            Err(ureq::Error::Status(code, _)) => Ok(code),
            Err(e) => Err(TransportError::new(url, e.to_string())),
        }
    }
}

/// Refuses every request. Used with `--offline`.
#[derive(Debug, Default, Clone, Copy)]
pub struct OfflineTransport;

impl Transport for OfflineTransport {
    fn get(&self, url: &str) -> Result<Option<Vec<u8>>, TransportError> {
        Err(TransportError::new(url, "offline mode"))
    }

    fn put(&self, url: &str, _body: &[u8]) -> Result<u16, TransportError> {
        Err(TransportError::new(url, "offline mode"))
    }
}

/// In-process remote keyed by full URL. Handy for tests and dry runs.
#[derive(Debug, Default)]
pub struct MemoryTransport {
    files: Mutex<HashMap<String, Vec<u8>>>,
}

impl MemoryTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&self, url: &str, body: impl Into<Vec<u8>>) {
        self.files.lock().unwrap().insert(url.to_string(), body.into());
    }
}

impl Transport for MemoryTransport {
    fn get(&self, url: &str) -> Result<Option<Vec<u8>>, TransportError> {
        Ok(self.files.lock().unwrap().get(url).cloned())
    }

    fn put(&self, url: &str, body: &[u8]) -> Result<u16, TransportError> {
        self.insert(url, body);
        Ok(201)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Get(String),
    Put(String),
}

/// Wraps another transport and records every call made through it.
#[derive(Clone)]
pub struct RecordingTransport {
    inner: Arc<dyn Transport>,
    log: Arc<Mutex<Vec<Operation>>>,
}

impl RecordingTransport {
    pub fn new(inner: Arc<dyn Transport>) -> Self {
        RecordingTransport {
            inner,
            log: Arc::default(),
        }
    }

    pub fn operations(&self) -> Vec<Operation> {
        self.log.lock().unwrap().clone()
    }

    pub fn count(&self) -> usize {
        self.log.lock().unwrap().len()
    }

    pub fn reset(&self) {
        self.log.lock().unwrap().clear();
    }
}

impl Transport for RecordingTransport {
    fn get(&self, url: &str) -> Result<Option<Vec<u8>>, TransportError> {
        self.log.lock().unwrap().push(Operation::Get(url.to_string()));
        self.inner.get(url)
    }

    fn put(&self, url: &str, body: &[u8]) -> Result<u16, TransportError> {
        self.log.lock().unwrap().push(Operation::Put(url.to_string()));
        self.inner.put(url, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recorder_counts_and_offline_refuses() {
        let t = RecordingTransport::new(Arc::new(OfflineTransport));
        assert!(t.get("http://h/x").is_err());
        assert!(t.put("http://h/y", b"z").is_err());
        assert_eq!(
            t.operations(),
            vec![Operation::Get("http://h/x".into()), Operation::Put("http://h/y".into())]
        );
        t.reset();
        assert_eq!(t.count(), 0);
    }

    #[test]
    fn unreachable_host_is_transport_error() {
        // port 9 on loopback is discard; nothing listens there in the sandbox
        let err = HttpTransport::new().get("http://127.0.0.1:9/x").unwrap_err();
        assert_eq!(err.url, "http://127.0.0.1:9/x");
    }
}
