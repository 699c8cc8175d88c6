//! Channel and scatterer dump formats.
//!
//! Channel CSV: header `model,pol,row,col,re,im`, one line per entry in
//! row-major order, row/col in port indices.
//!
//! Channel binary: a 32-byte header (`HMIMOCH1`, rows, cols and a
//! polarization flag, each a little-endian `u64`; flag 1 = tensor,
//! 0 = scalar) followed by `rows·cols` little-endian `f64` pairs `(re, im)`
//! in row-major order.
//!
//! Scatterer CSV: a `# seed=<n>` comment line, then header
//! `index,x,y,z,gain_re,gain_im`.

use std::io::{BufRead, Read, Write};

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::los::{ChannelMatrix, ModelKind, Polarization};
use crate::nlos::ScattererSet;

pub const CHANNEL_CSV_HEADER: &str = "model,pol,row,col,re,im";
pub const SCATTERER_CSV_HEADER: &str = "index,x,y,z,gain_re,gain_im";
pub const BINARY_MAGIC: &[u8; 8] = b"HMIMOCH1";

/// Contents recovered from a channel dump.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDump {
    /// Absent for binary dumps, which do not record the model.
    pub kind: Option<ModelKind>,
    pub polarization: Polarization,
    pub entries: DMatrix<Complex64>,
}

pub fn write_channel_csv<W: Write>(h: &ChannelMatrix, mut out: W) -> Result<()> {
    writeln!(out, "{CHANNEL_CSV_HEADER}")?;
    let e = h.entries();
    for i in 0..e.nrows() {
        for j in 0..e.ncols() {
            let z = e[(i, j)];
            writeln!(out, "{},{},{},{},{:e},{:e}", h.kind(), h.polarization(), i, j, z.re, z.im)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str, line: usize) -> Result<T> {
    field
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: bad {what}")))
}

pub fn read_channel_csv<R: BufRead>(input: R) -> Result<ChannelDump> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim_end() == CHANNEL_CSV_HEADER => {}
        _ => return Err(Error::Parse("missing channel CSV header".into())),
    }
    let mut records = Vec::new();
    let mut meta: Option<(ModelKind, Polarization)> = None;
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = idx + 2;
        let mut f = line.split(',');
        let kind: ModelKind = parse_field(f.next(), "model", n)?;
        let pol: Polarization = parse_field(f.next(), "pol", n)?;
        let row: usize = parse_field(f.next(), "row", n)?;
        let col: usize = parse_field(f.next(), "col", n)?;
        let re: f64 = parse_field(f.next(), "re", n)?;
        let im: f64 = parse_field(f.next(), "im", n)?;
        match meta {
            None => meta = Some((kind, pol)),
            Some(m) if m != (kind, pol) => {
                return Err(Error::Parse(format!("line {n}: mixed model/polarization")))
            }
            _ => {}
        }
        records.push((row, col, Complex64::new(re, im)));
    }
    let (kind, polarization) = meta.ok_or_else(|| Error::Parse("channel CSV has no entries".into()))?;
    let rows = records.iter().map(|r| r.0).max().unwrap_or(0) + 1;
    let cols = records.iter().map(|r| r.1).max().unwrap_or(0) + 1;
    if records.len() != rows * cols {
        return Err(Error::Parse(format!("{} entries for a {rows}x{cols} channel", records.len())));
    }
    let mut entries = DMatrix::zeros(rows, cols);
    for (r, c, z) in records {
        entries[(r, c)] = z;
    }
    Ok(ChannelDump {
        kind: Some(kind),
        polarization,
        entries,
    })
}

pub fn write_channel_binary<W: Write>(h: &ChannelMatrix, mut out: W) -> Result<()> {
    let e = h.entries();
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&(e.nrows() as u64).to_le_bytes())?;
    out.write_all(&(e.ncols() as u64).to_le_bytes())?;
    let flag: u64 = match h.polarization() {
        Polarization::Tensor => 1,
        Polarization::Scalar => 0,
    };
    out.write_all(&flag.to_le_bytes())?;
    for i in 0..e.nrows() {
        for j in 0..e.ncols() {
            out.write_all(&e[(i, j)].re.to_le_bytes())?;
            out.write_all(&e[(i, j)].im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_channel_binary<R: Read>(mut input: R) -> Result<ChannelDump> {
    let mut header = [0u8; 32];
    input.read_exact(&mut header)?;
    if &header[..8] != BINARY_MAGIC {
        return Err(Error::Parse("bad channel dump magic".into()));
    }
    let word = |i: usize| u64::from_le_bytes(header[8 * i..8 * i + 8].try_into().expect("8 bytes"));
    let (rows, cols) = (word(1) as usize, word(2) as usize);
    let polarization = match word(3) {
        0 => Polarization::Scalar,
        1 => Polarization::Tensor,
        other => return Err(Error::Parse(format!("bad polarization flag {other}"))),
    };
    let mut buf = [0u8; 16];
    let mut entries = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            input.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(buf[8..].try_into().expect("8 bytes"));
            entries[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(ChannelDump {
        kind: None,
        polarization,
        entries,
    })
}

pub fn write_scatterers_csv<W: Write>(set: &ScattererSet, mut out: W) -> Result<()> {
    writeln!(out, "# seed={}", set.seed())?;
    writeln!(out, "{SCATTERER_CSV_HEADER}")?;
    for (i, (p, g)) in set.positions().iter().zip(set.gains()).enumerate() {
        writeln!(out, "{},{:e},{:e},{:e},{:e},{:e}", i, p.x, p.y, p.z, g.re, g.im)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_scatterers_csv<R: BufRead>(input: R) -> Result<ScattererSet> {
    let mut lines = input.lines();
    let seed = match lines.next() {
        Some(Ok(l)) => l
            .trim()
            .strip_prefix("# seed=")
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse("missing seed comment".into()))?,
        _ => return Err(Error::Parse("empty scatterer file".into())),
    };
    match lines.next() {
        Some(Ok(h)) if h.trim_end() == SCATTERER_CSV_HEADER => {}
        _ => return Err(Error::Parse("missing scatterer CSV header".into())),
    }
    let mut positions = Vec::new();
    let mut gains = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = idx + 3;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Parse(format!("line {n}: expected 6 fields")));
        }
        let index: usize = parse_field(Some(f[0]), "index", n)?;
        if index != positions.len() {
            return Err(Error::Parse(format!("line {n}: index {index} out of order")));
        }
        let v: Vec<f64> = f[1..]
            .iter()
            .map(|s| parse_field(Some(s), "number", n))
            .collect::<Result<_>>()?;
        positions.push(Vector3::new(v[0], v[1], v[2]));
        gains.push(Complex64::new(v[3], v[4]));
    }
    ScattererSet::new(positions, gains, seed)
}
