//! Per-level catalog files and lookup of classes by key.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zscan_core::{canonical_key, enumerate_classes, Arrangement, CanonicalKey, ClassCatalog, ClassEntry};

use crate::error::CliError;
use crate::output::{read_file, Context, Header};

/// Largest level computed on the fly when no catalog file is present.
const ON_THE_FLY_MAX: usize = 5;

#[derive(Serialize)]
struct EnumerateConfig {
    command: &'static str,
}

pub fn enumerate_header(seed: u64) -> Header {
    Header::new(seed, &EnumerateConfig { command: "enumerate" })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LevelFile {
    pub header: Header,
    pub n: usize,
    pub classes: Vec<ClassEntry>,
}

impl LevelFile {
    pub fn new(header: Header, catalog: ClassCatalog) -> Self {
        LevelFile { header, n: catalog.n, classes: catalog.classes }
    }

    pub fn into_catalog(self) -> ClassCatalog {
        ClassCatalog { n: self.n, classes: self.classes }
    }
}

pub fn level_path(out: &Path, j: usize) -> PathBuf {
    out.join(format!("classes-{j}.json"))
}

/// Loads level `j` if the file exists, was written with the current header,
/// and is internally consistent (and consistent with `prev` when given).
pub fn load_level(ctx: &Context, j: usize, prev: Option<&ClassCatalog>) -> Option<ClassCatalog> {
    let text = std::fs::read_to_string(level_path(&ctx.out, j)).ok()?;
    let file: LevelFile = serde_json::from_str(&text).ok()?;
    if file.header != enumerate_header(ctx.seed) || file.n != j {
        return None;
    }
    let sorted = file.classes.windows(2).all(|w| w[0].key < w[1].key);
    let consistent = file.classes.iter().all(|c| {
        c.representative.n() == j
            && canonical_key(&c.representative) == c.key
            && match (prev, &c.parent) {
                (Some(prev), Some(parent)) => prev.get(parent).is_some(),
                (None, _) => true,
                (Some(_), None) => false,
            }
    });
    (sorted && consistent && !file.classes.is_empty()).then(|| file.into_catalog())
}

/// Catalog for level `n`: from the output directory when available,
/// otherwise computed in memory for small levels.
pub fn catalog_for(ctx: &Context, n: usize) -> Result<ClassCatalog, CliError> {
    if let Some(c) = load_level(ctx, n, None) {
        return Ok(c);
    }
    if n <= ON_THE_FLY_MAX {
        return Ok(enumerate_classes(n).pop().expect("level n present"));
    }
    Err(CliError::UnknownKey(format!(
        "no catalog for level {n} in {}; run `zscan enumerate -n {n}` first",
        ctx.out.display()
    )))
}

/// Interprets `target` as an arrangement file if such a file exists, and as
/// a canonical key otherwise.
pub fn resolve(ctx: &Context, target: &str) -> Result<(CanonicalKey, Arrangement), CliError> {
    let path = Path::new(target);
    if path.is_file() {
        let text = read_file(path)?;
        let a = Arrangement::from_json(&text).map_err(|e| CliError::invalid(path, e))?;
        return Ok((canonical_key(&a), a));
    }
    let key = CanonicalKey::parse(target).ok_or_else(|| CliError::UnknownKey(target.to_string()))?;
    let n = key.n().expect("parsed key has a level");
    let catalog = catalog_for(ctx, n)?;
    let entry = catalog.get(&key).ok_or_else(|| CliError::UnknownKey(target.to_string()))?;
    Ok((key, entry.representative.clone()))
}
