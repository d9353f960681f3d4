//! On-disk formats for density grids.
//!
//! Binary layout (little-endian): `b"DDES"`, `u32` version (1), `u32` height,
//! `u32` width, then `height * width` `f32` cell values in row-major order.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DensityGrid, GridGeometry};

pub const MAGIC: &[u8; 4] = b"DDES";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

#[derive(Serialize, Deserialize)]
pub struct GridJson {
    pub height: usize,
    pub width: usize,
    #[serde(serialize_with = "crate::format::sig9_vec")]
    pub data: Vec<f64>,
}

impl From<&DensityGrid> for GridJson {
    fn from(grid: &DensityGrid) -> Self {
        GridJson {
            height: grid.geometry().height(),
            width: grid.geometry().width(),
            data: grid.values().to_vec(),
        }
    }
}

impl TryFrom<GridJson> for DensityGrid {
    type Error = Error;

    fn try_from(json: GridJson) -> Result<Self> {
        DensityGrid::from_raw(GridGeometry::new(json.height, json.width)?, json.data)
    }
}

pub fn grid_to_json(grid: &DensityGrid) -> Result<String> {
    Ok(serde_json::to_string(&GridJson::from(grid))?)
}

pub fn grid_from_json(s: &str) -> Result<DensityGrid> {
    serde_json::from_str::<GridJson>(s)?.try_into()
}

pub fn encode_binary(grid: &DensityGrid) -> Vec<u8> {
    let geo = grid.geometry();
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * geo.cell_count());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(geo.height() as u32).to_le_bytes());
    out.extend_from_slice(&(geo.width() as u32).to_le_bytes());
    for &v in grid.values() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<DensityGrid> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "binary grid truncated: {} bytes, header needs {HEADER_LEN}",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected \"DDES\"",
            String::from_utf8_lossy(&bytes[..4])
        )));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().unwrap());
    let version = word(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let (h, w) = (word(8) as usize, word(12) as usize);
    let geometry = GridGeometry::new(h, w)?;
    let payload = &bytes[HEADER_LEN..];
    let expected = geometry
        .cell_count()
        .checked_mul(4)
        .ok_or_else(|| Error::Format("grid dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "payload is {} bytes, {h}x{w} grid needs {expected}",
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    DensityGrid::from_normalized(geometry, values)
}

pub fn write_binary<W: Write>(grid: &DensityGrid, mut w: W) -> Result<()> {
    w.write_all(&encode_binary(grid))?;
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<DensityGrid> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode_binary(&bytes)
}

pub fn is_binary_grid(bytes: &[u8]) -> bool {
    bytes.starts_with(MAGIC)
}

/// Reads one grid from a file, sniffing binary vs JSON by the magic bytes.
pub fn load_grid(path: &Path) -> Result<DensityGrid> {
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    if is_binary_grid(&bytes) {
        decode_binary(&bytes)
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| Error::Format("grid file is neither DDES binary nor UTF-8 JSON".into()))?;
        grid_from_json(text.trim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> DensityGrid {
        DensityGrid::from_rows(&[vec![0.1, 0.2, 0.0], vec![0.3, 0.15, 0.25]]).unwrap()
    }

    #[test]
    fn binary_header_layout() {
        let bytes = encode_binary(&sample());
        assert_eq!(&bytes[..4], b"DDES");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..12], &[2, 0, 0, 0]);
        assert_eq!(&bytes[12..16], &[3, 0, 0, 0]);
        assert_eq!(bytes.len(), 16 + 6 * 4);
        assert_eq!(&bytes[16..20], &0.1f32.to_le_bytes());
    }

    #[test]
    fn binary_rejects_corruption() {
        let mut bytes = encode_binary(&sample());
        bytes[0] = b'X';
        assert!(matches!(decode_binary(&bytes), Err(Error::Format(m)) if m.contains("magic")));

        let mut bytes = encode_binary(&sample());
        bytes[4] = 2;
        assert!(matches!(decode_binary(&bytes), Err(Error::Format(m)) if m.contains("version")));

        let bytes = encode_binary(&sample());
        assert!(decode_binary(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode_binary(&bytes[..10]).is_err());

        let mut bytes = encode_binary(&sample());
        bytes[16..20].copy_from_slice(&0.5f32.to_le_bytes());
        assert!(matches!(decode_binary(&bytes), Err(Error::Format(m)) if m.contains("normalized")));
    }

    #[test]
    fn json_shape() {
        let s = grid_to_json(&DensityGrid::uniform(GridGeometry::new(2, 2).unwrap())).unwrap();
        assert_eq!(s, r#"{"height":2,"width":2,"data":[0.25,0.25,0.25,0.25]}"#);
        assert_eq!(grid_from_json(&s).unwrap().values(), &[0.25; 4]);
        assert!(grid_from_json(r#"{"height":2,"width":2,"data":[1,1,1]}"#).is_err());
    }

    proptest! {
        #[test]
        fn binary_roundtrip_is_bit_exact(
            (h, w, raw) in (2usize..12, 2usize..12).prop_flat_map(|(h, w)| {
                (Just(h), Just(w), prop::collection::vec(0.0f64..1.0, h * w))
            })
        ) {
            prop_assume!(raw.iter().sum::<f64>() > 0.0);
            let grid = DensityGrid::from_raw(GridGeometry::new(h, w).unwrap(), raw).unwrap();
            let bytes = encode_binary(&grid);
            let back = decode_binary(&bytes).unwrap();
            for (a, b) in grid.values().iter().zip(back.values()) {
                prop_assert_eq!((*a as f32).to_bits(), (*b as f32).to_bits());
            }
            prop_assert_eq!(encode_binary(&back), bytes);
        }
    }
}
