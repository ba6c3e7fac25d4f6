//! Raw field files.
//!
//! `.fld`: an ASCII header line `FLD1 H W C` followed by `H·W·C` little-endian
//! `f64` values in row-major `(y, x, c)` order.
//!
//! CSV: one line per grid row holding `W·C` values, pixel-major.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array3;

use crate::error::{Error, Result};

pub fn write_fld(path: &Path, data: &Array3<f64>) -> Result<()> {
    let (h, w, c) = data.dim();
    let mut bytes = format!("FLD1 {h} {w} {c}\n").into_bytes();
    bytes.reserve(h * w * c * 8);
    for v in data.iter() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

pub fn read_fld(path: &Path) -> Result<Array3<f64>> {
    let bytes = fs::read(path)?;
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Parse("missing .fld header".into()))?;
    let header = std::str::from_utf8(&bytes[..nl]).map_err(|_| Error::Parse("bad .fld header".into()))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("FLD1") {
        return Err(Error::Parse(format!("not a .fld file (header '{header}')")));
    }
    let dims: Vec<usize> = parts
        .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad .fld dimension '{p}'"))))
        .collect::<Result<_>>()?;
    let [h, w, c] = dims[..] else {
        return Err(Error::Parse(format!("expected three dimensions in '{header}'")));
    };
    let body = &bytes[nl + 1..];
    let n = h * w * c;
    if body.len() != n * 8 {
        return Err(Error::Parse(format!("expected {} bytes of data, found {}", n * 8, body.len())));
    }
    let values: Vec<f64> = body.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
    Ok(Array3::from_shape_vec((h, w, c), values).expect("length checked"))
}

pub fn read_csv(path: &Path, channels: usize) -> Result<Array3<f64>> {
    if channels == 0 {
        return Err(Error::InvalidArgument("channel count must be positive".into()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Parse(e.to_string()))?;
    let mut values = Vec::new();
    let mut width = None;
    let mut height = 0;
    for (lineno, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row: Vec<f64> = record
            .iter()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("row {}: bad number '{t}'", lineno + 1))))
            .collect::<Result<_>>()?;
        if !row.len().is_multiple_of(channels) {
            return Err(Error::Parse(format!("row {}: {} values is not a multiple of {channels}", lineno + 1, row.len())));
        }
        let w = row.len() / channels;
        if *width.get_or_insert(w) != w {
            return Err(Error::Parse(format!("row {}: ragged row", lineno + 1)));
        }
        values.extend(row);
        height += 1;
    }
    let width = width.ok_or_else(|| Error::Parse("empty CSV field".into()))?;
    Ok(Array3::from_shape_vec((height, width, channels), values).expect("shape checked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fld_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.fld");
        let data = Array3::from_shape_fn((3, 4, 2), |(y, x, c)| (y as f64).sin() * 1e-7 + x as f64 / 3.0 - c as f64);
        write_fld(&path, &data).unwrap();
        assert_eq!(read_fld(&path).unwrap(), data);
        fs::write(&path, b"FLD1 2 2 1\n\0\0").unwrap();
        assert!(matches!(read_fld(&path), Err(Error::Parse(_))));
    }

    #[test]
    fn csv_import() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        fs::write(&path, "1,2,3,4\n5,6,7,8\n").unwrap();
        let a = read_csv(&path, 2).unwrap();
        assert_eq!(a.dim(), (2, 2, 2));
        assert_eq!(a[[1, 0, 1]], 6.0);
        fs::write(&path, "1,2\n3\n").unwrap();
        assert!(read_csv(&path, 1).is_err());
    }
}
