//! On-disk cache of command outputs, keyed by a content hash.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::commands::{Outcome, Status};

pub struct Cache {
    dir: PathBuf,
}

/// Hex SHA-256 of the parts, each length-prefixed so that boundaries count.
pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A missing or unreadable entry is a miss.
    pub fn get(&self, key: &str) -> Option<Outcome> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        let status = match v["status"].as_str()? {
            "ok" => Status::Ok,
            "failed" => Status::Failed,
            _ => return None,
        };
        Some(Outcome {
            status,
            text: v["text"].as_str()?.to_string(),
            artifact: v["artifact"].as_str().map(str::to_string),
        })
    }

    pub fn put(&self, key: &str, out: &Outcome) -> io::Result<()> {
        let status = match out.status {
            Status::Ok => "ok",
            Status::Failed => "failed",
        };
        let v = json!({ "status": status, "text": out.text, "artifact": out.artifact });
        // write then rename, so a concurrent reader never sees half a file
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&v).expect("json value"))?;
        fs::rename(tmp, self.path(key))
    }
}
