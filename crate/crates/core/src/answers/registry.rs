use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::logic::Theory;
use crate::parser::parse_theory_in;
use crate::specrel::{specrel0_theory, specrel_split_theory, specrel_theory, SPECREL0_SOURCE, SPECREL_SOURCE};

use super::report::{ComparisonReport, SCHEMA};
use super::verdict::Evidence;
use super::{Limits, Mode};

/// Cache directory inside a registry. Theory files are never written.
pub const CACHE_DIR: &str = ".why-cache";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("no theory named `{0}` in the registry")]
    Unknown(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Builtin,
    File(PathBuf),
    /// Given on the command line or built in code.
    Inline,
}

#[derive(Clone, Debug)]
struct Entry {
    theory: Theory,
    source: Source,
    hash: String,
}

/// Named theories: the shipped SpecRel variants plus every `.why` file of
/// a directory, named by file stem. Comparison reports and evidence are
/// cached under [`CACHE_DIR`], keyed by content hashes.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    root: Option<PathBuf>,
    entries: BTreeMap<String, Entry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_error(path: &Path, e: std::io::Error) -> RegistryError {
    RegistryError::Io { path: path.display().to_string(), message: e.to_string() }
}

impl Registry {
    /// The built-in theories only, with no cache.
    pub fn builtin() -> Registry {
        let mut reg = Registry::default();
        reg.insert("specrel", specrel_theory(), SPECREL_SOURCE, Source::Builtin);
        reg.insert("specrel0", specrel0_theory(), SPECREL0_SOURCE, Source::Builtin);
        let split = specrel_split_theory();
        reg.insert("specrel_split", split, &format!("split:{SPECREL_SOURCE}"), Source::Builtin);
        reg
    }

    /// Built-ins plus the `.why` files in `dir`, which is created if
    /// missing. A file shadows a built-in of the same name.
    pub fn open(dir: &Path) -> Result<Registry, RegistryError> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let mut reg = Registry::builtin();
        reg.root = Some(dir.to_path_buf());
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| io_error(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "why") && p.is_file())
            .collect();
        files.sort();
        for path in files {
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
            let th = parse_theory_in(&text, &path.display().to_string())
                .map_err(|e| RegistryError::Parse(e.to_string()))?
                .value;
            reg.insert(&name, th, &text, Source::File(path));
        }
        Ok(reg)
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    /// Adds or replaces a theory. `source` is the text hashed for caching.
    pub fn insert(&mut self, name: &str, theory: Theory, source: &str, origin: Source) {
        let hash = sha256_hex(source.as_bytes());
        self.entries.insert(name.to_string(), Entry { theory, source: origin, hash });
    }

    pub fn get(&self, name: &str) -> Result<&Theory, RegistryError> {
        self.entries.get(name).map(|e| &e.theory).ok_or_else(|| RegistryError::Unknown(name.to_string()))
    }

    pub fn source(&self, name: &str) -> Option<&Source> {
        self.entries.get(name).map(|e| &e.source)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn content_hash(&self, name: &str) -> Result<&str, RegistryError> {
        self.entries.get(name).map(|e| e.hash.as_str()).ok_or_else(|| RegistryError::Unknown(name.to_string()))
    }

    pub(crate) fn cache_key(&self, left: &str, right: &str, modes: &[Mode], limits: &Limits) -> Result<String, RegistryError> {
        #[derive(Serialize)]
        struct Key<'a> {
            schema: &'a str,
            left: (&'a str, &'a str),
            right: (&'a str, &'a str),
            modes: Vec<Mode>,
            limits: &'a Limits,
        }
        let mut modes = modes.to_vec();
        modes.sort();
        modes.dedup();
        let key = Key {
            schema: SCHEMA,
            left: (left, self.content_hash(left)?),
            right: (right, self.content_hash(right)?),
            modes,
            limits,
        };
        Ok(sha256_hex(serde_json::to_string(&key).expect("key serializes").as_bytes()))
    }

    fn cache_path(&self, parts: &[&str]) -> Option<PathBuf> {
        let mut p = self.root.as_ref()?.join(CACHE_DIR);
        p.extend(parts);
        Some(p)
    }

    pub(crate) fn cached_report(&self, key: &str) -> Option<ComparisonReport> {
        let path = self.cache_path(&["reports", &format!("{key}.json")])?;
        let text = fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub(crate) fn store_report(&self, key: &str, report: &ComparisonReport) -> Result<(), RegistryError> {
        match self.cache_path(&["reports", &format!("{key}.json")]) {
            Some(path) => write_atomic(&path, report.to_json().as_bytes()),
            None => Ok(()),
        }
    }

    /// Writes the artifact of `e`, if it has one, to a content-addressed
    /// file and returns its path relative to the registry.
    pub fn store_evidence(&self, e: &Evidence) -> Result<Option<String>, RegistryError> {
        let (Some(root), Some(text)) = (self.root.as_ref(), e.artifact()) else {
            return Ok(None);
        };
        let name = format!("{}-{}.txt", e.kind(), &sha256_hex(text.as_bytes())[..16]);
        let rel = format!("{CACHE_DIR}/evidence/{name}");
        let path = root.join(&rel);
        if !path.exists() {
            write_atomic(&path, text.as_bytes())?;
        }
        Ok(Some(rel))
    }
}

/// Write to a temporary file in the target directory, then rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RegistryError> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_error(path, e))?;
    tmp.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}
