//! Binary label-map and mask files.
//!
//! Label map: `GBSP`, version `u8`, height, width and region count as `u32`
//! little-endian, then one `u32` LE label per pixel in row-major order.
//!
//! Mask: `GBMK`, grid size as `u32` LE, then each row bit-packed into
//! `ceil(grid/8)` bytes, most significant bit first, zero-padded.

use std::io::{Read, Write};

use gbsp_core::{LabelMap, ScaleMask};

pub const LABEL_MAGIC: &[u8; 4] = b"GBSP";
pub const LABEL_VERSION: u8 = 1;
pub const MASK_MAGIC: &[u8; 4] = b"GBMK";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic {0:?}")]
    Magic([u8; 4]),
    #[error("unsupported version {0}")]
    Version(u8),
    #[error("{0}")]
    Invalid(String),
}

pub fn encode_label_map(map: &LabelMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(17 + map.labels().len() * 4);
    out.extend_from_slice(LABEL_MAGIC);
    out.push(LABEL_VERSION);
    out.extend_from_slice(&(map.height() as u32).to_le_bytes());
    out.extend_from_slice(&(map.width() as u32).to_le_bytes());
    out.extend_from_slice(&(map.region_count() as u32).to_le_bytes());
    for &l in map.labels() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    out
}

pub fn write_label_map(mut w: impl Write, map: &LabelMap) -> Result<(), FormatError> {
    w.write_all(&encode_label_map(map))?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32, FormatError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_label_map(mut r: impl Read) -> Result<LabelMap, FormatError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != LABEL_MAGIC {
        return Err(FormatError::Magic(magic));
    }
    let mut version = [0u8; 1];
    r.read_exact(&mut version)?;
    if version[0] != LABEL_VERSION {
        return Err(FormatError::Version(version[0]));
    }
    let height = read_u32(&mut r)? as usize;
    let width = read_u32(&mut r)? as usize;
    let count = read_u32(&mut r)? as usize;
    let n = height
        .checked_mul(width)
        .ok_or_else(|| FormatError::Invalid("dimensions overflow".into()))?;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != n * 4 {
        return Err(FormatError::Invalid(format!(
            "expected {} label bytes, found {}",
            n * 4,
            raw.len()
        )));
    }
    let labels = raw
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    LabelMap::new(height, width, count, labels).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn encode_mask(mask: &ScaleMask) -> Vec<u8> {
    let r = mask.grid_size();
    let row_bytes = r.div_ceil(8);
    let mut out = Vec::with_capacity(8 + row_bytes * r);
    out.extend_from_slice(MASK_MAGIC);
    out.extend_from_slice(&(r as u32).to_le_bytes());
    for row in 0..r {
        let mut bytes = vec![0u8; row_bytes];
        for col in 0..r {
            if mask.get(row, col) {
                bytes[col / 8] |= 0x80 >> (col % 8);
            }
        }
        out.extend_from_slice(&bytes);
    }
    out
}

pub fn write_mask(mut w: impl Write, mask: &ScaleMask) -> Result<(), FormatError> {
    w.write_all(&encode_mask(mask))?;
    Ok(())
}

pub fn read_mask(mut r: impl Read) -> Result<ScaleMask, FormatError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MASK_MAGIC {
        return Err(FormatError::Magic(magic));
    }
    let grid = read_u32(&mut r)? as usize;
    let row_bytes = grid.div_ceil(8);
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != row_bytes * grid {
        return Err(FormatError::Invalid(format!(
            "expected {} mask bytes, found {}",
            row_bytes * grid,
            raw.len()
        )));
    }
    let mut bits = Vec::with_capacity(grid * grid);
    for row in raw.chunks_exact(row_bytes.max(1)).take(grid) {
        for col in 0..grid {
            bits.push(row[col / 8] & (0x80 >> (col % 8)) != 0);
        }
    }
    ScaleMask::from_bits(grid, bits).ok_or_else(|| FormatError::Invalid("mask size".into()))
}
