//! File formats for grid fields, flows and trajectories.
//!
//! The binary container for a [`WeberGrid`] is, in order and little-endian:
//!
//! | bytes | content                                   |
//! |-------|-------------------------------------------|
//! | 5     | magic `PHWF1`                             |
//! | 8     | `n` per axis, `u64`                       |
//! | 8     | box length `L`, `f64`                     |
//! | 8     | `c`, `f64`                                |
//! | 8     | `ħ`, `f64`                                |
//! | 1     | representation: 0 position, 1 momentum   |
//! | 8     | time, `f64`                               |
//! | 48 n³ | per node (x fastest), per component x, y, z: Re then Im as `f64` |
//!
//! CSV exports carry a header row naming every column.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::bohm::Trajectory;
use crate::error::{Error, Result};
use crate::fields::{zero_components, WeberGrid};
use crate::grid::{GridSpec, Representation, Units};
use crate::photon::ProbabilityFlow;

pub const MAGIC: &[u8; 5] = b"PHWF1";

/// Refuses headers describing more nodes than this per axis.
const MAX_AXIS: u64 = 1 << 12;

pub fn write_weber<W: Write>(grid: &WeberGrid, mut out: W) -> Result<()> {
    let spec = &grid.spec;
    out.write_all(MAGIC)?;
    out.write_all(&(spec.n_per_axis() as u64).to_le_bytes())?;
    for v in [spec.box_length(), spec.c(), spec.hbar()] {
        out.write_all(&v.to_le_bytes())?;
    }
    out.write_all(&[grid.representation.tag()])?;
    out.write_all(&grid.time.to_le_bytes())?;
    let mut buf = Vec::with_capacity(48 * grid.len());
    for i in 0..grid.len() {
        for z in grid.at(i).iter() {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

fn read_f64<R: Read>(input: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_weber<R: Read>(mut input: R) -> Result<WeberGrid> {
    let mut magic = [0u8; 5];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {magic:?}, expected PHWF1"
        )));
    }
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b);
    if n == 0 || n > MAX_AXIS {
        return Err(Error::Format(format!(
            "grid size {n} per axis out of range"
        )));
    }
    let box_length = read_f64(&mut input)?;
    let c = read_f64(&mut input)?;
    let hbar = read_f64(&mut input)?;
    let spec = GridSpec::new(n as usize, box_length, Units::new(c, hbar)?)?;
    let mut tag = [0u8; 1];
    input.read_exact(&mut tag)?;
    let representation = Representation::from_tag(tag[0])
        .ok_or_else(|| Error::Format(format!("unknown representation tag {}", tag[0])))?;
    let time = read_f64(&mut input)?;
    let mut raw = Vec::new();
    input.read_to_end(&mut raw)?;
    let expected = 48 * spec.len();
    if raw.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            found: raw.len(),
        });
    }
    let mut data = zero_components(spec.len());
    for (chunk_index, chunk) in raw.chunks_exact(16).enumerate() {
        let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
        data[chunk_index % 3][chunk_index / 3] = Complex64::new(re, im);
    }
    WeberGrid::new(spec, representation, time, data)
}

/// Columns `x,y,z,re_fx,im_fx,re_fy,im_fy,re_fz,im_fz`. In momentum
/// representation the first three columns are `kx,ky,kz`.
pub fn write_weber_csv<W: Write>(grid: &WeberGrid, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let coords: [&str; 3] = match grid.representation {
        Representation::Position => ["x", "y", "z"],
        Representation::Momentum => ["kx", "ky", "kz"],
    };
    w.write_record(
        coords
            .iter()
            .chain(["re_fx", "im_fx", "re_fy", "im_fy", "re_fz", "im_fz"].iter()),
    )?;
    for i in 0..grid.len() {
        let r = match grid.representation {
            Representation::Position => grid.spec.position(i),
            Representation::Momentum => grid.spec.wave_vector(i),
        };
        let f = grid.at(i);
        let row = [
            r.x, r.y, r.z, f.x.re, f.x.im, f.y.re, f.y.im, f.z.re, f.z.im,
        ];
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `x,y,z,rho,jx,jy,jz`.
pub fn write_flow_csv<W: Write>(flow: &ProbabilityFlow, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "z", "rho", "jx", "jy", "jz"])?;
    for (i, (rho, j)) in flow.rho.iter().zip(flow.current.iter()).enumerate() {
        let r = flow.spec.position(i);
        let row = [r.x, r.y, r.z, *rho, j.x, j.y, j.z];
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `id,t,x,y,z,vx,vy,vz,flag`, one block per trajectory. `flag` is
/// `node` on the last sample of a run stopped by a node and `ok` otherwise.
pub fn write_trajectories_csv<W: Write>(trajectories: &[Trajectory], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "t", "x", "y", "z", "vx", "vy", "vz", "flag"])?;
    for (id, tr) in trajectories.iter().enumerate() {
        let last = tr.samples.len().saturating_sub(1);
        for (k, s) in tr.samples.iter().enumerate() {
            let flag = if tr.halted_at_node && k == last {
                "node"
            } else {
                "ok"
            };
            let mut row = vec![id.to_string(), s.t.to_string()];
            row.extend(s.x.iter().chain(s.v.iter()).map(|v| v.to_string()));
            row.push(flag.to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
