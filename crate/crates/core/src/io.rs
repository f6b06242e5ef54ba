//! Grid function serialization.
//!
//! CSV layout: the first line is the `dim,n,L` record of the grid, followed
//! by one `index,value` row per sample in row-major order. Floats are
//! written in shortest round-trip form so a write/read cycle is exact.
//!
//! Binary layout (little endian): magic `GFN1`, `dim: u32`, `n: u32`,
//! `L: f64`, then `n^dim` samples as `f64`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

const MAGIC: &[u8; 4] = b"GFN1";

pub fn write_csv<W: Write>(u: &GridFunction, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let g = u.grid();
    writeln!(
        out,
        "{},{},{}",
        g.dim(),
        g.points_per_axis(),
        g.half_width()
    )?;
    for (i, v) in u.values().iter().enumerate() {
        writeln!(out, "{i},{v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<GridFunction> {
    let mut lines = BufReader::new(input).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty grid function file".into()))??;
    let fields: Vec<&str> = header.trim().split(',').collect();
    if fields.len() != 3 {
        return Err(Error::Parse(format!(
            "expected `dim,n,L` header, got `{header}`"
        )));
    }
    let dim: usize = parse(fields[0], "dim")?;
    let n: usize = parse(fields[1], "n")?;
    let half_width: f64 = parse(fields[2], "L")?;
    let grid = Grid::new(dim, half_width, n)?;

    let mut values = vec![f64::NAN; grid.len()];
    let mut seen = 0usize;
    for (line_no, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, val) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `index,value`", line_no + 2)))?;
        let idx: usize = parse(idx, "index")?;
        let val: f64 = parse(val, "value")?;
        let slot = values
            .get_mut(idx)
            .ok_or_else(|| Error::Parse(format!("index {idx} out of range")))?;
        *slot = val;
        seen += 1;
    }
    if seen != grid.len() {
        return Err(Error::Parse(format!(
            "expected {} samples, found {seen}",
            grid.len()
        )));
    }
    GridFunction::new(grid, values)
}

pub fn write_binary<W: Write>(u: &GridFunction, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let g = u.grid();
    out.write_all(MAGIC)?;
    out.write_all(&(g.dim() as u32).to_le_bytes())?;
    out.write_all(&(g.points_per_axis() as u32).to_le_bytes())?;
    out.write_all(&g.half_width().to_le_bytes())?;
    for v in u.values() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<GridFunction> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("bad magic, not a grid function file".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    input.read_exact(&mut b4)?;
    let dim = u32::from_le_bytes(b4) as usize;
    input.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    input.read_exact(&mut b8)?;
    let half_width = f64::from_le_bytes(b8);
    let grid = Grid::new(dim, half_width, n)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        input.read_exact(&mut b8)?;
        values.push(f64::from_le_bytes(b8));
    }
    GridFunction::new(grid, values)
}

/// Reads a grid function, choosing the format from the file contents.
pub fn load(path: impl AsRef<Path>) -> Result<GridFunction> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        read_binary(bytes.as_slice())
    } else {
        read_csv(bytes.as_slice())
    }
}

/// Writes CSV unless the extension is `.bin`.
pub fn save(u: &GridFunction, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path)?;
    if path.extension().is_some_and(|e| e == "bin") {
        write_binary(u, file)
    } else {
        write_csv(u, file)
    }
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} from `{s}`")))
}
