//! Output directory handling and the header shared by every written file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zscan_core::equivalence::KEY_FORMAT;

use crate::error::CliError;

pub const TOOL: &str = "zscan";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Global settings every command sees.
#[derive(Clone, Debug)]
pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub resume: bool,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
    pub key_format: String,
}

impl Header {
    /// `config` is any serializable description of the settings that
    /// determine the file's content.
    pub fn new(seed: u64, config: &impl Serialize) -> Self {
        let text = serde_json::to_string(config).expect("config serializes");
        Header {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            seed,
            config_hash: hex_prefix(text.as_bytes(), 16),
            key_format: KEY_FORMAT.to_string(),
        }
    }
}

/// First `len` hex digits of the SHA-256 digest of `bytes`.
pub fn hex_prefix(bytes: &[u8], len: usize) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex.truncate(len);
    hex
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Prints either the JSON form of `value` or the given text.
pub fn emit(ctx: &Context, value: &impl Serialize, text: impl FnOnce() -> String) {
    match ctx.format {
        Format::Json => print!("{}", to_json(value)),
        Format::Text => print!("{}", text()),
    }
}
