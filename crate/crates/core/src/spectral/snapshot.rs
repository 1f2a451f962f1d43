//! Binary field snapshots.
//!
//! Layout (little endian): magic `QGPE`, `u32` version, `u32` n1, n2, n3,
//! `f64` box length, `u32` component count, `f64` time, then the physical
//! samples as `f64`, component-major with `x3` fastest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::field::{PhysicalField4, SpectralField4};
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"QGPE";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 12 + 8 + 4 + 8;

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub time: f64,
    pub field: PhysicalField4,
}

impl Snapshot {
    pub fn from_spectral(time: f64, field: &SpectralField4) -> Result<Self> {
        Ok(Self { time, field: field.to_physical()? })
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    pub fn to_spectral(&self) -> SpectralField4 {
        SpectralField4::from_physical(&self.field).0
    }

    pub fn encode(&self) -> Vec<u8> {
        let g = self.field.grid();
        let mut buf = Vec::with_capacity(HEADER_LEN + 8 * self.field.data().len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        for n in g.dims() {
            buf.extend_from_slice(&(n as u32).to_le_bytes());
        }
        buf.extend_from_slice(&g.box_length().to_le_bytes());
        buf.extend_from_slice(&4u32.to_le_bytes());
        buf.extend_from_slice(&self.time.to_le_bytes());
        for v in self.field.data() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        buf
    }

    pub fn decode(bytes: &[u8], path: &Path) -> Result<Self> {
        let bad = |reason: String| Error::Snapshot { path: path.to_path_buf(), reason };
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!("truncated header ({} bytes)", bytes.len())));
        }
        if &bytes[0..4] != MAGIC {
            return Err(bad("bad magic".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let n = [u32_at(8) as usize, u32_at(12) as usize, u32_at(16) as usize];
        let box_length = f64_at(20);
        let comps = u32_at(28);
        if comps != 4 {
            return Err(bad(format!("expected 4 components, found {comps}")));
        }
        let time = f64_at(32);
        let grid = Grid::new(n, box_length).map_err(|e| bad(e.to_string()))?;
        let count = 4 * grid.len();
        let body = &bytes[HEADER_LEN..];
        if body.len() != 8 * count {
            return Err(bad(format!("truncated payload: expected {} bytes, found {}", 8 * count, body.len())));
        }
        let data = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(Self { time, field: PhysicalField4::new(&grid, data)? })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.encode())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes, path)
    }
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = temp_path(path);
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}
