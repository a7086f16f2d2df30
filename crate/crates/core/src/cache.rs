//! On-disk lattice cache.
//!
//! A cache file holds the ambient generators and the class representatives
//! as cycle strings, plus the recorded flags and a SHA-256 checksum of the
//! body. Files are named by a digest of the engine version and the ambient
//! generators. Loading recomputes every record and rejects the file on any
//! mismatch; files written by another engine version are rejected.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::{finish_records, subgroup_classes, Completeness, LatticeOptions, Method, SubgroupLattice};
use crate::mu::GroupLiteral;
use crate::perm::Perm;

/// Tag written into every cache file; bump when the format or the class
/// ordering changes.
pub const ENGINE_VERSION: &str = concat!("mindeg-", env!("CARGO_PKG_VERSION"), "/lattice-1");

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "MINDEG_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CachedClass {
    generators: Vec<String>,
    order: String,
    normalizer_order: String,
    is_normal: bool,
    is_nilpotent: bool,
    is_perfect: bool,
    parent: Option<(usize, u64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CacheBody {
    engine_version: String,
    label: String,
    ambient: GroupLiteral,
    method: Method,
    completeness: Completeness,
    classes: Vec<CachedClass>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CacheFile {
    #[serde(flatten)]
    body: CacheBody,
    checksum: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn body_checksum(body: &CacheBody) -> Result<String> {
    Ok(digest(&serde_json::to_vec(body)?))
}

/// Directory-backed store of subgroup lattices.
#[derive(Clone, Debug)]
pub struct LatticeCache {
    dir: PathBuf,
}

impl LatticeCache {
    pub fn new(dir: impl Into<PathBuf>) -> LatticeCache {
        LatticeCache { dir: dir.into() }
    }

    /// Cache rooted at `$MINDEG_CACHE`, if set.
    pub fn from_env() -> Option<LatticeCache> {
        std::env::var_os(CACHE_ENV).map(LatticeCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File that holds the lattice of `ambient`.
    pub fn path_for(&self, ambient: &PermGroup) -> PathBuf {
        let lit = GroupLiteral::of(ambient);
        let key = format!("{ENGINE_VERSION}\n{}\n{}", lit.degree, lit.generators.join("\n"));
        self.dir.join(format!("lattice-{}.json", &digest(key.as_bytes())[..24]))
    }

    /// Writes `lattice`; partial lattices are not stored.
    pub fn store(&self, label: &str, lattice: &SubgroupLattice) -> Result<Option<PathBuf>> {
        if lattice.completeness == Completeness::Partial {
            return Ok(None);
        }
        fs::create_dir_all(&self.dir)?;
        let body = CacheBody {
            engine_version: ENGINE_VERSION.to_string(),
            label: label.to_string(),
            ambient: GroupLiteral::of(&lattice.ambient),
            method: lattice.method,
            completeness: lattice.completeness,
            classes: lattice
                .classes
                .iter()
                .map(|c| CachedClass {
                    generators: c.representative.generators().iter().map(Perm::to_string).collect(),
                    order: c.order.to_string(),
                    normalizer_order: c.normalizer_order.to_string(),
                    is_normal: c.is_normal,
                    is_nilpotent: c.is_nilpotent,
                    is_perfect: c.is_perfect,
                    parent: c.parent,
                })
                .collect(),
        };
        let checksum = body_checksum(&body)?;
        let path = self.path_for(&lattice.ambient);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(&CacheFile { body, checksum })?)?;
        fs::rename(&tmp, &path)?;
        Ok(Some(path))
    }

    /// Reads and revalidates the lattice of `ambient`. `Ok(None)` when no
    /// file exists; `Err(Error::Cache)` when a file exists but is stale,
    /// corrupt or inconsistent.
    pub fn load(&self, ambient: &PermGroup) -> Result<Option<SubgroupLattice>> {
        let path = self.path_for(ambient);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let file: CacheFile =
            serde_json::from_slice(&bytes).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        validate(ambient, file).map(Some)
    }

    /// Cached lattice of `ambient`, computing and storing it on a miss or a
    /// rejected file.
    pub fn get_or_build(
        &self,
        label: &str,
        ambient: &PermGroup,
        opts: &LatticeOptions,
    ) -> Result<Arc<SubgroupLattice>> {
        match self.load(ambient) {
            Ok(Some(l)) => return Ok(Arc::new(l)),
            Ok(None) => {}
            Err(Error::Cache(msg)) => log::warn!("discarding cache entry: {msg}"),
            Err(e) => return Err(e),
        }
        let lattice = subgroup_classes(ambient, opts)?;
        self.store(label, &lattice)?;
        Ok(Arc::new(lattice))
    }
}

fn validate(ambient: &PermGroup, file: CacheFile) -> Result<SubgroupLattice> {
    let bad = |msg: &str| Error::Cache(msg.to_string());
    let body = file.body;
    if body.engine_version != ENGINE_VERSION {
        return Err(Error::Cache(format!(
            "engine version {} does not match {ENGINE_VERSION}",
            body.engine_version
        )));
    }
    if body_checksum(&body)? != file.checksum {
        return Err(bad("checksum mismatch"));
    }
    let stored = body.ambient.group().map_err(|_| bad("unparsable ambient"))?;
    if !stored.same_group(ambient) {
        return Err(bad("ambient group differs"));
    }
    let n = ambient.degree();
    let mut reps = Vec::with_capacity(body.classes.len());
    for c in &body.classes {
        let gens = c
            .generators
            .iter()
            .map(|s| Perm::parse(s, n))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| bad("unparsable class generator"))?;
        let rep = PermGroup::from_generators(n, gens).map_err(|_| bad("invalid class generators"))?;
        if rep.order().to_string() != c.order || !rep.is_subgroup_of(ambient) {
            return Err(bad("class representative does not match its record"));
        }
        reps.push(rep);
    }
    let parents = body.classes.iter().map(|c| c.parent).collect();
    let normalizer_orders = body.classes.iter().map(|_| None).collect();
    let records = finish_records(ambient, reps, parents, normalizer_orders)?;
    for (r, c) in records.iter().zip(&body.classes) {
        let same = r.normalizer_order.to_string() == c.normalizer_order
            && r.is_normal == c.is_normal
            && r.is_nilpotent == c.is_nilpotent
            && r.is_perfect == c.is_perfect
            && r.parent == c.parent
            && r.representative
                .generators()
                .iter()
                .map(Perm::to_string)
                .eq(c.generators.iter().cloned());
        if !same {
            return Err(bad("recomputed class record differs"));
        }
    }
    Ok(SubgroupLattice {
        ambient: ambient.clone(),
        classes: records,
        method: body.method,
        completeness: body.completeness,
    })
}
