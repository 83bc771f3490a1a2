use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

pub const HEADER: &str = "queerlab-cache v1";

/// JSON tables under a directory, one file per key, each behind a version line.
/// Files with any other first line are treated as absent.
#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let (head, body) = text.split_once('\n')?;
        if head.trim_end() != HEADER {
            return None;
        }
        serde_json::from_str(body).ok()
    }

    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<(), CliError> {
        let Some(path) = self.path(key) else { return Ok(()) };
        let dir = path.parent().unwrap();
        fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
        let body = serde_json::to_string(value).expect("cache values serialize");
        fs::write(&path, format!("{HEADER}\n{body}\n")).map_err(|e| CliError::Io { path, source: e })
    }

    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<T, CliError>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, CliError>,
    {
        if let Some(v) = self.load(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(key, &v)?;
        Ok(v)
    }
}
