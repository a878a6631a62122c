//! Versioned on-disk codebook cache.
//!
//! Layout (all integers big-endian):
//!
//! ```text
//! magic "TSGC" | version u16 | n u16 | total u64 | ordering checksum [u8; 8]
//! per class, in code order:
//!     j u32 | count u64
//!     count × (canonical edge vector, ⌈m/8⌉ bytes MSB-first | labelings u64)
//! ```

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::codebook::{build_codebook, Codebook};
use super::ordering::class_ordering;
use crate::counting::TypeClassTable;
use crate::graphs::{pair_count, LabeledGraph, Structure};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"TSGC";
pub const FORMAT_VERSION: u16 = 1;

/// What [`load_or_build`] had to do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    /// An existing file was unusable and has been replaced.
    Rebuilt(String),
}

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("codebook-n{n}-v{FORMAT_VERSION}.tsgc"))
}

pub fn encode_cache(cb: &Codebook) -> Vec<u8> {
    let n = cb.n();
    let m = pair_count(n);
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_be_bytes());
    out.extend_from_slice(&(n as u16).to_be_bytes());
    out.extend_from_slice(&cb.total().to_be_bytes());
    out.extend_from_slice(&cb.ordering().checksum());
    for class in cb.ordering().classes() {
        let members = cb.class(class.j);
        out.extend_from_slice(&(class.j as u32).to_be_bytes());
        out.extend_from_slice(&(members.len() as u64).to_be_bytes());
        for s in members {
            let mut packed = vec![0u8; m.div_ceil(8)];
            for (i, bit) in s.canon().bits().enumerate() {
                packed[i / 8] |= (bit as u8) << (7 - i % 8);
            }
            out.extend_from_slice(&packed);
            let labelings = u64::try_from(s.labelings()).expect("labelings fit in u64 for cached n");
            out.extend_from_slice(&labelings.to_be_bytes());
        }
    }
    out
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let slice = self
            .data
            .get(self.pos..self.pos + k)
            .ok_or_else(|| Error::Cache(format!("truncated at byte {}", self.pos)))?;
        self.pos += k;
        Ok(slice)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parses a cache image and validates it against freshly computed counts.
pub fn decode_cache(data: &[u8], n: usize) -> Result<Codebook> {
    let mut r = Reader { data, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = r.u16()?;
    if version != FORMAT_VERSION {
        return Err(Error::Cache(format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let stored_n = r.u16()? as usize;
    if stored_n != n {
        return Err(Error::Cache(format!("file is for n = {stored_n}, expected {n}")));
    }
    let total = r.u64()?;
    let checksum = r.take(8)?;
    let ordering = class_ordering(&*TypeClassTable::cached(n)?);
    if checksum != ordering.checksum() {
        return Err(Error::Cache("ordering checksum mismatch".into()));
    }
    let m = pair_count(n);
    let mut classes: Vec<Vec<Structure>> = vec![Vec::new(); m + 1];
    for expected in ordering.classes() {
        let j = r.u32()? as usize;
        if j != expected.j {
            return Err(Error::Cache(format!("class j = {j} out of order")));
        }
        let count = r.u64()?;
        for _ in 0..count {
            let packed = r.take(m.div_ceil(8))?;
            let canon =
                LabeledGraph::from_bits(n, (0..m).map(|i| packed[i / 8] >> (7 - i % 8) & 1 == 1))?;
            let labelings = BigUint::from(r.u64()?);
            classes[j].push(Structure::from_parts(canon, labelings));
        }
    }
    if r.pos != data.len() {
        return Err(Error::Cache("trailing bytes".into()));
    }
    let cb = Codebook::from_classes(n, classes)?;
    if cb.total() != total {
        return Err(Error::Cache("header total disagrees with contents".into()));
    }
    Ok(cb)
}

/// Loads the cached codebook for `n` from `dir`, building (and writing) it
/// when the file is missing or stale.
pub fn load_or_build(dir: &Path, n: usize, max_exact: usize) -> Result<(Codebook, CacheStatus)> {
    if n > max_exact {
        return Err(Error::Capacity { n, max: max_exact });
    }
    let path = cache_path(dir, n);
    let stale = match fs::read(&path) {
        Ok(bytes) => match decode_cache(&bytes, n) {
            Ok(cb) => return Ok((cb, CacheStatus::Hit)),
            Err(e) => Some(e.to_string()),
        },
        Err(e) if e.kind() == ErrorKind::NotFound => None,
        Err(e) => return Err(e.into()),
    };
    let cb = build_codebook(n, max_exact)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode_cache(&cb))?;
    fs::rename(&tmp, &path)?;
    let status = match stale {
        Some(reason) => CacheStatus::Rebuilt(reason),
        None => CacheStatus::Built,
    };
    Ok((cb, status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tscode::DEFAULT_MAX_EXACT;

    #[test]
    fn round_trip_through_bytes() {
        for n in 1..=6 {
            let cb = build_codebook(n, DEFAULT_MAX_EXACT).unwrap();
            let bytes = encode_cache(&cb);
            assert_eq!(decode_cache(&bytes, n).unwrap(), cb);
        }
    }

    #[test]
    fn header_layout() {
        let bytes = encode_cache(&build_codebook(4, DEFAULT_MAX_EXACT).unwrap());
        assert_eq!(&bytes[..4], b"TSGC");
        assert_eq!(&bytes[4..8], &[0, 1, 0, 4]);
        assert_eq!(u64::from_be_bytes(bytes[8..16].try_into().unwrap()), 11);
        // 11 structures × (1 byte vector + 8 byte labelings) + 7 class headers.
        assert_eq!(bytes.len(), 24 + 11 * 9 + 7 * 12);
    }

    #[test]
    fn rejects_corruption() {
        let cb = build_codebook(5, DEFAULT_MAX_EXACT).unwrap();
        let bytes = encode_cache(&cb);
        assert!(decode_cache(&bytes, 4).is_err());
        assert!(decode_cache(&bytes[..bytes.len() - 1], 5).is_err());
        let mut flipped = bytes.clone();
        flipped[17] ^= 1;
        assert!(decode_cache(&flipped, 5).is_err());
        let mut version = bytes.clone();
        version[5] = 9;
        assert!(decode_cache(&version, 5).is_err());
        // Corrupt a canonical vector so the class is no longer sorted or
        // holds a wrong edge count.
        let mut body = bytes;
        let first_vector = 24 + 12;
        body[first_vector] ^= 0xff;
        assert!(decode_cache(&body, 5).is_err());
    }

    #[test]
    fn load_or_build_lifecycle() {
        let dir = tempfile::tempdir().unwrap();
        let (a, status) = load_or_build(dir.path(), 5, DEFAULT_MAX_EXACT).unwrap();
        assert_eq!(status, CacheStatus::Built);
        let (b, status) = load_or_build(dir.path(), 5, DEFAULT_MAX_EXACT).unwrap();
        assert_eq!(status, CacheStatus::Hit);
        assert_eq!(a, b);
        fs::write(cache_path(dir.path(), 5), b"junk").unwrap();
        let (c, status) = load_or_build(dir.path(), 5, DEFAULT_MAX_EXACT).unwrap();
        assert!(matches!(status, CacheStatus::Rebuilt(_)));
        assert_eq!(a, c);
        assert!(matches!(
            load_or_build(dir.path(), 9, DEFAULT_MAX_EXACT),
            Err(Error::Capacity { .. })
        ));
    }
}
