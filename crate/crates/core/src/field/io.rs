//! Binary field container and radial-profile CSV.
//!
//! Container layout, all integers and floats little-endian:
//!
//! ```text
//! magic      8 bytes  "SPHMAXF\0"
//! version    u32      1
//! dim        u32
//! dims       dim × u32 (equal; points per axis)
//! box_length f64
//! repr       u8       0 = space, 1 = frequency
//! precision  u8       8 = complex64 (f32 pairs), 16 = complex128
//! reserved   2 bytes  zero
//! samples    row-major, last axis fastest, (re, im) pairs
//! ```

use std::io::{self, Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FieldError, GridField, GridSpec, Representation};

pub const MAGIC: &[u8; 8] = b"SPHMAXF\0";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Complex64,
    Complex128,
}

impl Precision {
    fn code(self) -> u8 {
        match self {
            Precision::Complex64 => 8,
            Precision::Complex128 => 16,
        }
    }
}

fn io_err(e: io::Error) -> FieldError {
    FieldError::Format(e.to_string())
}

pub fn write_field<W: Write>(
    mut out: W,
    field: &GridField,
    precision: Precision,
) -> Result<(), FieldError> {
    let spec = field.spec();
    let mut header = Vec::with_capacity(40);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    header.extend_from_slice(&(spec.dim as u32).to_le_bytes());
    for _ in 0..spec.dim {
        header.extend_from_slice(&(spec.points_per_axis as u32).to_le_bytes());
    }
    header.extend_from_slice(&spec.box_length.to_le_bytes());
    header.push(match field.representation() {
        Representation::Space => 0,
        Representation::Frequency => 1,
    });
    header.push(precision.code());
    header.extend_from_slice(&[0, 0]);
    out.write_all(&header).map_err(io_err)?;

    let width = precision.code() as usize;
    let mut buf = Vec::with_capacity(field.samples().len().min(1 << 16) * width);
    for chunk in field.samples().chunks(1 << 16) {
        buf.clear();
        for v in chunk {
            match precision {
                Precision::Complex64 => {
                    buf.extend_from_slice(&(v.re as f32).to_le_bytes());
                    buf.extend_from_slice(&(v.im as f32).to_le_bytes());
                }
                Precision::Complex128 => {
                    buf.extend_from_slice(&v.re.to_le_bytes());
                    buf.extend_from_slice(&v.im.to_le_bytes());
                }
            }
        }
        out.write_all(&buf).map_err(io_err)?;
    }
    Ok(())
}

fn read_array<const K: usize, R: Read>(input: &mut R) -> Result<[u8; K], FieldError> {
    let mut b = [0u8; K];
    input.read_exact(&mut b).map_err(io_err)?;
    Ok(b)
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32, FieldError> {
    Ok(u32::from_le_bytes(read_array::<4, R>(input)?))
}

/// Reads a container; returns the field and the stored precision.
pub fn read_field<R: Read>(mut input: R) -> Result<(GridField, Precision), FieldError> {
    let magic = read_array::<8, R>(&mut input)?;
    if &magic != MAGIC {
        return Err(FieldError::Format("bad magic".into()));
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(FieldError::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(&mut input)? as usize;
    if dim == 0 || dim > super::MAX_DIM {
        return Err(FieldError::Dimension(dim));
    }
    let dims = (0..dim)
        .map(|_| read_u32(&mut input).map(|d| d as usize))
        .collect::<Result<Vec<_>, _>>()?;
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(FieldError::Format("axes must have equal length".into()));
    }
    let box_length = f64::from_le_bytes(read_array::<8, R>(&mut input)?);
    let spec = GridSpec::new(dim, dims[0], box_length)?;
    let [repr, prec, _, _] = read_array::<4, R>(&mut input)?;
    let representation = match repr {
        0 => Representation::Space,
        1 => Representation::Frequency,
        r => return Err(FieldError::Format(format!("unknown representation {r}"))),
    };
    let precision = match prec {
        8 => Precision::Complex64,
        16 => Precision::Complex128,
        p => return Err(FieldError::Format(format!("unknown precision {p}"))),
    };
    let mut bytes = vec![0u8; spec.len() * prec as usize];
    input.read_exact(&mut bytes).map_err(io_err)?;
    let samples = match precision {
        Precision::Complex64 => bytes
            .chunks_exact(8)
            .map(|c| {
                Complex64::new(
                    f32::from_le_bytes(c[0..4].try_into().unwrap()) as f64,
                    f32::from_le_bytes(c[4..8].try_into().unwrap()) as f64,
                )
            })
            .collect(),
        Precision::Complex128 => bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[0..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..16].try_into().unwrap()),
                )
            })
            .collect(),
    };
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing).map_err(io_err)? != 0 {
        return Err(FieldError::Format("trailing bytes".into()));
    }
    Ok((GridField::new(spec, samples, representation)?, precision))
}

/// Fixed-format float text used in every emitted file, so that identical
/// runs give byte-identical output.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.15e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Writes `r,re,im` rows.
pub fn write_radial_csv<W: Write>(mut out: W, rows: &[(f64, Complex64)]) -> io::Result<()> {
    writeln!(out, "r,re,im")?;
    for (r, v) in rows {
        writeln!(
            out,
            "{},{},{}",
            fmt_float(*r),
            fmt_float(v.re),
            fmt_float(v.im)
        )?;
    }
    Ok(())
}

/// Averages a space field over spherical shells of width `bin_width`
/// centered at the origin; empty shells are skipped.
pub fn radial_profile(field: &GridField, bin_width: f64) -> Vec<(f64, Complex64)> {
    let radii = field.spec().radii();
    let bins = (radii.iter().cloned().fold(0.0, f64::max) / bin_width) as usize + 1;
    let mut sums = vec![Complex64::new(0.0, 0.0); bins];
    let mut counts = vec![0usize; bins];
    for (r, v) in radii.iter().zip(field.samples()) {
        let b = (r / bin_width) as usize;
        sums[b] += v;
        counts[b] += 1;
    }
    sums.into_iter()
        .zip(counts)
        .enumerate()
        .filter(|(_, (_, c))| *c > 0)
        .map(|(b, (s, c))| ((b as f64 + 0.5) * bin_width, s / c as f64))
        .collect()
}
