//! Field snapshot files: a text header `KS2D <n> <L> <t>` terminated by a
//! newline, followed by `n·n` little-endian `f64` values in row-major order.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;

pub const MAGIC: &str = "KS2D";

pub fn encode(field: &ScalarField, t: f64) -> Vec<u8> {
    let g = field.grid();
    let header = format!("{MAGIC} {} {:?} {:?}\n", g.n(), g.box_length(), t);
    let mut out = Vec::with_capacity(header.len() + 8 * g.len());
    out.extend_from_slice(header.as_bytes());
    for v in field.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<(ScalarField, f64)> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Snapshot("missing header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| Error::Snapshot("header is not utf-8".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != MAGIC {
        return Err(Error::Snapshot(format!("bad header `{header}`")));
    }
    let bad = |what: &str| Error::Snapshot(format!("bad {what} in header `{header}`"));
    let n: usize = parts[1].parse().map_err(|_| bad("n"))?;
    let l: f64 = parts[2].parse().map_err(|_| bad("L"))?;
    let t: f64 = parts[3].parse().map_err(|_| bad("t"))?;
    let grid = GridSpec::new(n, l)?;
    let body = &bytes[nl + 1..];
    if body.len() != 8 * grid.len() {
        return Err(Error::Snapshot(format!(
            "expected {} payload bytes, got {}",
            8 * grid.len(),
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((ScalarField::from_vec_unchecked(grid, values), t))
}

pub fn write_snapshot(path: impl AsRef<Path>, field: &ScalarField, t: f64) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode(field, t))?;
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(ScalarField, f64)> {
    decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = GridSpec::new(8, 32.0).unwrap();
        let f = ScalarField::from_fn(g, |x, y| x * 0.1 + y);
        let bytes = encode(&f, 0.25);
        assert!(bytes.starts_with(b"KS2D 8 32.0 0.25\n"));
        assert_eq!(bytes.len(), "KS2D 8 32.0 0.25\n".len() + 8 * 64);
        let (back, t) = decode(&bytes).unwrap();
        assert_eq!(t, 0.25);
        assert_eq!(back, f);
    }

    #[test]
    fn truncated_payload() {
        let g = GridSpec::new(8, 1.0).unwrap();
        let mut bytes = encode(&ScalarField::zeros(g), 0.0);
        bytes.pop();
        assert!(decode(&bytes).is_err());
        assert!(decode(b"KS3D 8 1 0\n").is_err());
    }
}
