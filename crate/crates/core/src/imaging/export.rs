//! Raw saliency export.
//!
//! CSV: one line per image row, values separated by `,`, `.` as decimal mark,
//! shortest round-trip representation of each `f64`.
//!
//! Binary: `u32` height, `u32` width (both little-endian) followed by
//! `height * width` little-endian `f32` values in row-major order.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::SaliencyMap;
use crate::error::{Error, Result};

pub fn write_map_csv(map: &SaliencyMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(map.values().len() * 20);
    for row in map.values().chunks(map.width()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_map_csv(path: impl AsRef<Path>) -> Result<SaliencyMap> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::new();
    let mut width = None;
    let mut height = 0;
    for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::Input(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Dimension(format!(
                    "{}:{}: row has {} values, expected {w}",
                    path.display(),
                    lineno + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        values.extend(row);
        height += 1;
    }
    SaliencyMap::new(height, width.unwrap_or(0), values)
}

pub fn write_map_binary(map: &SaliencyMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::with_capacity(8 + map.values().len() * 4);
    buf.write_all(&(map.height() as u32).to_le_bytes()).unwrap();
    buf.write_all(&(map.width() as u32).to_le_bytes()).unwrap();
    for v in map.values() {
        buf.write_all(&(*v as f32).to_le_bytes()).unwrap();
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn read_map_binary(path: impl AsRef<Path>) -> Result<SaliencyMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < 8 {
        return Err(Error::Input(format!("{}: truncated header", path.display())));
    }
    let h = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let w = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let body = &bytes[8..];
    if body.len() != h * w * 4 {
        return Err(Error::Dimension(format!(
            "{}: header says {h}x{w} but body holds {} bytes",
            path.display(),
            body.len()
        )));
    }
    let values = body
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
        .collect();
    SaliencyMap::new(h, w, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binary_layout_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        let map = SaliencyMap::new(1, 2, vec![1.0, -0.5]).unwrap();
        write_map_binary(&map, &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        let mut expect = vec![1, 0, 0, 0, 2, 0, 0, 0];
        expect.extend(1.0f32.to_le_bytes());
        expect.extend((-0.5f32).to_le_bytes());
        assert_eq!(bytes, expect);
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let map = SaliencyMap::new(2, 2, vec![0.0, 0.25, 1.0, 0.1]).unwrap();
        write_map_csv(&map, &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "0,0.25\n1,0.1\n");
    }

    #[test]
    fn ragged_csv_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "0,1\n0\n").unwrap();
        assert!(matches!(read_map_csv(&path), Err(Error::Dimension(_))));
    }

    proptest! {
        #[test]
        fn round_trips(h in 1usize..6, w in 1usize..6, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = crate::rng::seeded(seed);
            let vals: Vec<f64> = (0..h * w).map(|_| rng.random_range(-3.0..3.0)).collect();
            let map = SaliencyMap::new(h, w, vals).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let csv = dir.path().join("m.csv");
            let bin = dir.path().join("m.bin");
            write_map_csv(&map, &csv).unwrap();
            write_map_binary(&map, &bin).unwrap();
            prop_assert_eq!(read_map_csv(&csv).unwrap(), map.clone());
            let back = read_map_binary(&bin).unwrap();
            for (a, b) in back.values().iter().zip(map.values()) {
                prop_assert_eq!(*a, f64::from(*b as f32));
            }
        }
    }
}
