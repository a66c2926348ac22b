//! Field dump formats.
//!
//! Binary layout: `CHFLD001`, then little-endian `u64` Nx, Ny, `f64` L1,
//! then `u1` (Nx*Ny values, x2 fastest), then `u2`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::CoreError;
use crate::field::{BcTag, ScalarField, VectorField};
use crate::grid::ChannelGrid;

pub const MAGIC: &[u8; 8] = b"CHFLD001";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldFormat {
    Csv,
    Binary,
}

impl std::str::FromStr for FieldFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "bin" => Ok(Self::Binary),
            other => Err(format!("unknown field format '{other}', expected csv or bin")),
        }
    }
}

pub fn write_binary<W: Write>(mut w: W, grid: &ChannelGrid, v: &VectorField) -> Result<(), CoreError> {
    v.u1.check_grid(grid)?;
    w.write_all(MAGIC)?;
    w.write_all(&(grid.nx() as u64).to_le_bytes())?;
    w.write_all(&(grid.ny() as u64).to_le_bytes())?;
    w.write_all(&grid.l1().to_le_bytes())?;
    for c in [&v.u1, &v.u2] {
        for x in c.values() {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R, grid: &ChannelGrid) -> Result<VectorField, CoreError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::Format("bad magic".into()));
    }
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let nx = u64::from_le_bytes(b) as usize;
    r.read_exact(&mut b)?;
    let ny = u64::from_le_bytes(b) as usize;
    r.read_exact(&mut b)?;
    let l1 = f64::from_le_bytes(b);
    if (nx, ny) != (grid.nx(), grid.ny()) {
        return Err(CoreError::Shape {
            expected: (grid.nx(), grid.ny()),
            got: (nx, ny),
        });
    }
    if l1 != grid.l1() {
        return Err(CoreError::Format(format!("L1 {l1} does not match grid {}", grid.l1())));
    }
    let mut read = || -> Result<ScalarField, CoreError> {
        let mut data = vec![0.0; nx * ny];
        for x in data.iter_mut() {
            r.read_exact(&mut b)?;
            *x = f64::from_le_bytes(b);
        }
        ScalarField::from_vec(nx, ny, data)
    };
    let u1 = read()?;
    let u2 = read()?;
    Ok(VectorField::new(u1, u2, BcTag::None))
}

pub fn write_csv<W: Write>(mut w: W, grid: &ChannelGrid, v: &VectorField) -> Result<(), CoreError> {
    v.u1.check_grid(grid)?;
    writeln!(w, "x1,x2,u1,u2")?;
    for i in 0..grid.nx() {
        let x1 = grid.x1(i);
        for (j, x2) in grid.x2().iter().enumerate() {
            // {:e} on f64 is shortest round-trip
            writeln!(w, "{:e},{:e},{:e},{:e}", x1, x2, v.u1.at(i, j), v.u2.at(i, j))?;
        }
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(r: R, grid: &ChannelGrid) -> Result<VectorField, CoreError> {
    let mut lines = r.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != "x1,x2,u1,u2" {
        return Err(CoreError::Format(format!("unexpected header '{header}'")));
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut u1 = Vec::with_capacity(nx * ny);
    let mut u2 = Vec::with_capacity(nx * ny);
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CoreError::Format(format!("row {}: {e}", n + 2)))?;
        if cols.len() != 4 {
            return Err(CoreError::Format(format!("row {} has {} columns", n + 2, cols.len())));
        }
        u1.push(cols[2]);
        u2.push(cols[3]);
    }
    if u1.len() != nx * ny {
        return Err(CoreError::Shape {
            expected: (nx, ny),
            got: (u1.len(), 1),
        });
    }
    Ok(VectorField::new(
        ScalarField::from_vec(nx, ny, u1)?,
        ScalarField::from_vec(nx, ny, u2)?,
        BcTag::None,
    ))
}

pub fn dump_field(path: &Path, grid: &ChannelGrid, v: &VectorField, fmt: FieldFormat) -> Result<(), CoreError> {
    let w = BufWriter::new(File::create(path)?);
    match fmt {
        FieldFormat::Csv => write_csv(w, grid, v),
        FieldFormat::Binary => write_binary(w, grid, v),
    }
}

/// Loads a dump; the format is detected from the leading bytes.
pub fn load_field(path: &Path, grid: &ChannelGrid) -> Result<VectorField, CoreError> {
    let mut f = BufReader::new(File::open(path)?);
    let head = f.fill_buf()?;
    if head.starts_with(b"x1,") {
        read_csv(f, grid)
    } else {
        read_binary(f, grid)
    }
}
