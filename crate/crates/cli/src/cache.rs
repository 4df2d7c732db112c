use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};
use stacklab::report::Cache;

/// One file per cell, named by the SHA-256 of the cell key.
pub struct FileCache {
    dir: PathBuf,
}

impl FileCache {
    pub fn open(dir: PathBuf) -> std::io::Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(FileCache { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }
}

impl Cache for FileCache {
    fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    // A failed write only costs a recomputation next time.
    fn put(&self, key: &str, value: &str) {
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if fs::write(&tmp, value).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}
