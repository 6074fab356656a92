//! Group cache: verified permutation generators plus the group order, one
//! file per entry, filename = hex content key. Entries are rebuilt (never
//! trusted) on any verification failure; the version string in the key means
//! format changes invalidate without migration.

use std::fs;
use std::path::{Path, PathBuf};

use classprod_core::{ClassicalGroup, GroupSpec, Perm};
use serde::{Deserialize, Serialize};

use crate::error::AppError;
use crate::ingest::sha256_hex;

pub const CACHE_VERSION: &str = "classprod-cache-1";

#[derive(Serialize, Deserialize)]
struct CachePayload {
    version: String,
    spec: String,
    degree: usize,
    /// u128 as string: JSON numbers are not wide enough
    order: String,
    gens: Vec<Vec<u16>>,
}

pub fn cache_key(spec: &GroupSpec) -> String {
    sha256_hex(format!("{CACHE_VERSION}|{}", spec.describe()).as_bytes())
}

fn entry_path(cache_dir: &Path, spec: &GroupSpec) -> PathBuf {
    cache_dir.join(cache_key(spec))
}

/// Build the group, through the cache when a directory is given. A cache hit
/// is re-verified by reconstruction (the strong generating set must reproduce
/// the known order and contain every defining generator); corrupt or stale
/// entries are discarded and rebuilt.
pub fn build_group(
    spec: GroupSpec,
    seed: u64,
    memory_cap: usize,
    cache_dir: Option<&Path>,
) -> Result<ClassicalGroup, AppError> {
    if let Some(dir) = cache_dir {
        let path = entry_path(dir, &spec);
        if let Some(gens) = load_entry(&path, &spec) {
            match ClassicalGroup::build_from_cached_gens(spec, seed, memory_cap, &gens) {
                Ok(g) => return Ok(g),
                Err(_) => {
                    let _ = fs::remove_file(&path);
                }
            }
        }
        let g = ClassicalGroup::build_capped(spec, seed, memory_cap)?;
        store_entry(&path, &spec, &g)?;
        return Ok(g);
    }
    Ok(ClassicalGroup::build_capped(spec, seed, memory_cap)?)
}

fn load_entry(path: &Path, spec: &GroupSpec) -> Option<Vec<Perm>> {
    let text = fs::read_to_string(path).ok()?;
    let payload: CachePayload = serde_json::from_str(&text).ok()?;
    if payload.version != CACHE_VERSION || payload.spec != spec.describe() {
        return None;
    }
    payload
        .gens
        .into_iter()
        .map(|img| (img.len() == payload.degree).then_some(img))
        .map(|img| Perm::from_images(img?).ok())
        .collect()
}

fn store_entry(path: &Path, spec: &GroupSpec, g: &ClassicalGroup) -> Result<(), AppError> {
    let payload = CachePayload {
        version: CACHE_VERSION.to_string(),
        spec: spec.describe(),
        degree: g.group.degree(),
        order: g.group.order().to_string(),
        gens: g
            .group
            .generators()
            .iter()
            .map(|p| p.images().to_vec())
            .collect(),
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    // write-temp-rename so concurrent readers never see a torn entry
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&payload).expect("payload serializes"))?;
    fs::rename(&tmp, path)?;
    Ok(())
}
