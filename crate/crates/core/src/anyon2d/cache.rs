//! On-disk cache of assembled relative matrices.
//!
//! One little-endian binary file per parameter set. The file name and the
//! header both carry the exact bit patterns of the parameters; a header that
//! does not match is treated as a miss.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::assembly::{assemble_relative, RelativeProblem};
use super::sparse::SparseSymmetric;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"ANYONREL";
pub const CACHE_VERSION: u32 = 1;
/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "ANYON_CACHE_DIR";

fn key_words(p: &RelativeProblem) -> [u64; 6] {
    [
        p.alpha.to_bits(),
        p.epsilon.to_bits(),
        p.omega_b.to_bits(),
        p.n_max as u64,
        p.m_max as u64,
        p.quadrature_order() as u64,
    ]
}

pub fn cache_path(dir: &Path, p: &RelativeProblem) -> PathBuf {
    let k = key_words(p);
    dir.join(format!(
        "rel-v{CACHE_VERSION}-{:016x}-{:016x}-{:016x}-{}-{}-{}.bin",
        k[0], k[1], k[2], k[3], k[4], k[5]
    ))
}

pub fn write_matrix(path: &Path, p: &RelativeProblem, m: &SparseSymmetric) -> Result<()> {
    let nnz = m.nnz_upper();
    let mut buf = Vec::with_capacity(64 + nnz * 24);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    for w in key_words(p) {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    buf.extend_from_slice(&(m.dimension() as u64).to_le_bytes());
    buf.extend_from_slice(&(nnz as u64).to_le_bytes());
    for (r, c, v) in m.upper_entries() {
        buf.extend_from_slice(&(r as u64).to_le_bytes());
        buf.extend_from_slice(&(c as u64).to_le_bytes());
        buf.extend_from_slice(&v.to_bits().to_le_bytes());
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `Ok(None)` when the file belongs to different parameters or an older version.
pub fn read_matrix(path: &Path, p: &RelativeProblem) -> Result<Option<SparseSymmetric>> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut pos = 0usize;
    let mut take = |n: usize| -> Result<&[u8]> {
        let s = bytes
            .get(pos..pos + n)
            .ok_or_else(|| Error::Format(format!("{} is truncated", path.display())))?;
        pos += n;
        Ok(s)
    };
    if take(8)? != MAGIC {
        return Err(Error::Format(format!(
            "{} is not a matrix cache file",
            path.display()
        )));
    }
    let u64_at = |s: &[u8]| u64::from_le_bytes(s.try_into().expect("8 bytes"));
    let version = u32::from_le_bytes(take(4)?.try_into().expect("4 bytes"));
    if version != CACHE_VERSION {
        return Ok(None);
    }
    for w in key_words(p) {
        if u64_at(take(8)?) != w {
            return Ok(None);
        }
    }
    let dim = u64_at(take(8)?) as usize;
    let nnz = u64_at(take(8)?) as usize;
    if dim != p.dimension() {
        return Ok(None);
    }
    let mut rows = Vec::with_capacity(nnz);
    let mut cols = Vec::with_capacity(nnz);
    let mut vals = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        rows.push(u64_at(take(8)?) as usize);
        cols.push(u64_at(take(8)?) as usize);
        vals.push(f64::from_bits(u64_at(take(8)?)));
    }
    let m = SparseSymmetric::from_upper_parts(dim, rows, cols, vals)?;
    Ok(Some(m.with_meta(p.meta())))
}

/// Assemble, going through the cache in `dir` when one is given. Returns the
/// matrix and whether it came from the cache.
pub fn assemble_cached(p: &RelativeProblem, dir: Option<&Path>) -> Result<(SparseSymmetric, bool)> {
    let Some(dir) = dir else {
        return Ok((assemble_relative(p)?, false));
    };
    let path = cache_path(dir, p);
    if path.exists() {
        if let Some(m) = read_matrix(&path, p)? {
            return Ok((m, true));
        }
    }
    let m = assemble_relative(p)?;
    fs::create_dir_all(dir)?;
    write_matrix(&path, p, &m)?;
    Ok((m, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let p = RelativeProblem::new(0.5, 0.3, 6, 6).unwrap();
        let (a, hit_a) = assemble_cached(&p, Some(dir.path())).unwrap();
        let (b, hit_b) = assemble_cached(&p, Some(dir.path())).unwrap();
        assert!(!hit_a && hit_b);
        assert_eq!(a.nnz_upper(), b.nnz_upper());
        for (x, y) in a.upper_entries().zip(b.upper_entries()) {
            assert_eq!((x.0, x.1, x.2.to_bits()), (y.0, y.1, y.2.to_bits()));
        }
    }

    #[test]
    fn other_parameters_miss() {
        let dir = tempfile::tempdir().unwrap();
        let p = RelativeProblem::new(0.5, 0.3, 4, 4).unwrap();
        let q = RelativeProblem::new(0.5000000001, 0.3, 4, 4).unwrap();
        assemble_cached(&p, Some(dir.path())).unwrap();
        // force the other key onto this file
        fs::copy(cache_path(dir.path(), &p), cache_path(dir.path(), &q)).unwrap();
        let (_, hit) = assemble_cached(&q, Some(dir.path())).unwrap();
        assert!(!hit);
    }

    #[test]
    fn garbage_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = RelativeProblem::new(0.5, 0.3, 4, 4).unwrap();
        fs::write(cache_path(dir.path(), &p), b"nonsense").unwrap();
        assert!(matches!(
            assemble_cached(&p, Some(dir.path())),
            Err(Error::Format(_))
        ));
    }
}
