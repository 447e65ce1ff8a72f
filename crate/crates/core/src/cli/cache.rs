//! Content-addressed result cache. Entries carry their request and a digest
//! of the result so tampering is detected on read.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, request: &Value) -> PathBuf {
        self.dir.join(format!("{}.json", digest(&request.to_string())))
    }

    /// The cached result, `Ok(None)` on a miss, `Err` with a reason when the
    /// entry exists but cannot be trusted.
    pub fn get(&self, request: &Value) -> Result<Option<Value>, String> {
        let path = self.path_for(request);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(format!("{}: {e}", path.display())),
        };
        let entry: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if &entry["request"] != request {
            return Err(format!("{}: request does not match", path.display()));
        }
        let result = &entry["result"];
        if entry["sha256"].as_str() != Some(&digest(&result.to_string())) {
            return Err(format!("{}: checksum mismatch", path.display()));
        }
        Ok(Some(result.clone()))
    }

    /// Writes through a temporary file in the cache directory and renames it
    /// into place.
    pub fn put(&self, request: &Value, result: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = json!({
            "request": request,
            "result": result,
            "sha256": digest(&result.to_string()),
        });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(entry.to_string().as_bytes())?;
        tmp.persist(self.path_for(request)).map_err(|e| e.error)?;
        Ok(())
    }
}
