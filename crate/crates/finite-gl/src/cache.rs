//! On-disk cache of character tables, one JSON file per `(n, q)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{FglError, Result};
use crate::group::GlGroup;
use crate::induce::GlData;
use crate::table::{compute_table, CharacterTable};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "BTCHAR_FGL_CACHE";

/// The explicit directory if given, else the environment override, else none.
pub fn resolve_cache_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

pub fn cache_file(dir: &Path, n: usize, q: u32) -> PathBuf {
    dir.join(format!("gl_{n}_{q}.json"))
}

fn read_cached(path: &Path, group: &GlGroup) -> Option<CharacterTable> {
    let text = fs::read_to_string(path).ok()?;
    let t: CharacterTable = serde_json::from_str(&text).ok()?;
    (t.n == group.n && t.q == group.q && t.classes == group.classes && t.modulus == group.exponent).then_some(t)
}

/// Writes through a temporary file and a rename, so no partial file is left behind.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| FglError::Io(e.to_string()))?;
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| FglError::Io(e.to_string()))?;
    f.write_all(text.as_bytes()).map_err(|e| FglError::Io(e.to_string()))?;
    f.sync_all().map_err(|e| FglError::Io(e.to_string()))?;
    fs::rename(&tmp, path).map_err(|e| FglError::Io(e.to_string()))
}

/// Group and table for `GL(n, q)`, reading and filling the cache when a directory is
/// available. An unreadable or mismatching cache file is recomputed and replaced.
pub fn load_or_compute(n: usize, q: u32, budget: u64, cache_dir: Option<&Path>) -> Result<GlData> {
    let group = GlGroup::new(n, q, budget)?;
    let dir = resolve_cache_dir(cache_dir);
    if let Some(dir) = &dir {
        if let Some(table) = read_cached(&cache_file(dir, n, q), &group) {
            return Ok(GlData { group, table });
        }
    }
    let table = compute_table(&group)?;
    if let Some(dir) = &dir {
        let text = serde_json::to_string_pretty(&table).map_err(|e| FglError::Io(e.to_string()))?;
        write_atomic(&cache_file(dir, n, q), &text)?;
    }
    Ok(GlData { group, table })
}

/// `character_table(n, q)` without a cache.
pub fn character_table(n: usize, q: u32, budget: u64) -> Result<CharacterTable> {
    compute_table(&GlGroup::new(n, q, budget)?)
}
