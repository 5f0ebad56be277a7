use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::topology::NodeId;

/// A path known to be good for a (topology, source, destination) key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeBaseEntry {
    pub topology_digest: String,
    pub source: NodeId,
    pub destination: NodeId,
    pub best_path: Vec<NodeId>,
    pub bottleneck: f64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl KnowledgeBaseEntry {
    pub fn new(
        topology_digest: String,
        source: NodeId,
        destination: NodeId,
        best_path: Vec<NodeId>,
        bottleneck: f64,
    ) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self { topology_digest, source, destination, best_path, bottleneck, timestamp }
    }
}

/// Append-only JSON-lines store. Appends from multiple threads are serialized.
#[derive(Debug)]
pub struct KnowledgeBase {
    path: PathBuf,
    lock: Mutex<()>,
}

impl KnowledgeBase {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into(), lock: Mutex::new(()) }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn storage(&self, source: std::io::Error) -> HarnessError {
        HarnessError::Storage { path: self.path.display().to_string(), source }
    }

    pub fn record(&self, entry: &KnowledgeBaseEntry) -> Result<(), HarnessError> {
        let mut line = serde_json::to_string(entry)?;
        line.push('\n');
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| self.storage(e))?;
        file.write_all(line.as_bytes()).map_err(|e| self.storage(e))
    }

    /// Highest-bottleneck entry recorded for the key; earliest wins ties.
    pub fn lookup(
        &self,
        topology_digest: &str,
        source: NodeId,
        destination: NodeId,
    ) -> Result<Option<KnowledgeBaseEntry>, HarnessError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(self.storage(e)),
        };
        let mut best: Option<KnowledgeBaseEntry> = None;
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| self.storage(e))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: KnowledgeBaseEntry = serde_json::from_str(&line)?;
            if entry.topology_digest != topology_digest
                || entry.source != source
                || entry.destination != destination
            {
                continue;
            }
            if best.as_ref().is_none_or(|b| entry.bottleneck > b.bottleneck) {
                best = Some(entry);
            }
        }
        Ok(best)
    }
}
