//! A single-file key/value cache of computed counts.
//!
//! The file starts with a header line naming the tool version; a file
//! written by another version is discarded as a whole.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    version: String,
    entries: BTreeMap<String, String>,
    dirty: bool,
}

fn header(version: &str) -> String {
    format!("# asmtree-cache {version}")
}

impl Cache {
    pub const FILE_NAME: &'static str = "asmtree-cache.txt";

    /// Loads the cache in `dir`, starting empty when the file is missing,
    /// unreadable or from another version.
    pub fn open(dir: &Path, version: &str) -> Cache {
        let path = dir.join(Self::FILE_NAME);
        let mut entries = BTreeMap::new();
        let mut dirty = false;
        if let Ok(text) = fs::read_to_string(&path) {
            let mut lines = text.lines();
            if lines.next() == Some(header(version).as_str()) {
                for line in lines {
                    if let Some((k, v)) = line.split_once('\t') {
                        entries.insert(k.to_string(), v.to_string());
                    }
                }
            } else {
                dirty = true;
            }
        }
        Cache { path, version: version.to_string(), entries, dirty }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: String, value: String) {
        if self.entries.get(&key) != Some(&value) {
            self.entries.insert(key, value);
            self.dirty = true;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes the file back if anything changed.
    pub fn save(&mut self) -> io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut text = header(&self.version);
        text.push('\n');
        for (k, v) in &self.entries {
            text.push_str(k);
            text.push('\t');
            text.push_str(v);
            text.push('\n');
        }
        let tmp = self.path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &self.path)?;
        self.dirty = false;
        Ok(())
    }
}
