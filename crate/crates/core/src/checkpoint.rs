//! Trajectory checkpoints.
//!
//! Layout (all integers and floats little-endian):
//!
//! | bytes        | content                                              |
//! |--------------|------------------------------------------------------|
//! | 8            | magic `RADNLSCK`                                     |
//! | 4            | format version, u32 (currently 1)                    |
//! | 8            | header length H, u64                                 |
//! | H            | UTF-8 JSON header: `grid`, `times`, `provenance`     |
//! | 8·M          | recorded times, f64                                  |
//! | 16·M·J       | states in time order, each J × (re, im) f64          |
//!
//! M is the header's `times` count and J the grid's `node_count`. The grid
//! is rebuilt from its spec on load.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::grid::{GridSpec, RadialGrid};
use crate::solver::{Provenance, Trajectory};

pub const MAGIC: &[u8; 8] = b"RADNLSCK";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    grid: GridSpec,
    times: usize,
    provenance: Provenance,
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, mut w: W) -> Result<()> {
    let header = Header { grid: traj.grid().spec(), times: traj.len(), provenance: traj.provenance().clone() };
    let json = serde_json::to_vec(&header)?;
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(json.len() as u64).to_le_bytes())?;
    w.write_all(&json)?;
    for t in traj.times() {
        w.write_all(&t.to_le_bytes())?;
    }
    for state in traj.states() {
        for v in state.values() {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_trajectory<R: Read>(mut r: R) -> Result<Trajectory> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint("not a trajectory checkpoint (bad magic)".into()));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!("unsupported checkpoint version {version} (expected {FORMAT_VERSION})")));
    }
    let mut len = [0u8; 8];
    r.read_exact(&mut len)?;
    let len = u64::from_le_bytes(len) as usize;
    let mut json = vec![0u8; len];
    r.read_exact(&mut json)?;
    let header: Header = serde_json::from_slice(&json)?;
    let grid = Arc::new(RadialGrid::new(header.grid)?);
    let times = (0..header.times).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
    let mut states = Vec::with_capacity(header.times);
    for _ in 0..header.times {
        let vals = (0..grid.len())
            .map(|_| Ok(Complex64::new(read_f64(&mut r)?, read_f64(&mut r)?)))
            .collect::<Result<Vec<_>>>()?;
        states.push(RadialField::new(grid.clone(), vals)?);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Checkpoint("trailing bytes after the last state".into()));
    }
    Trajectory::new(times, states, header.provenance)
}

pub fn save(traj: &Trajectory, path: &Path) -> Result<()> {
    write_trajectory(traj, BufWriter::new(File::create(path)?))
}

pub fn load(path: &Path) -> Result<Trajectory> {
    read_trajectory(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridScheme};
    use crate::solver::{evolve, SolverConfig};

    #[test]
    fn round_trip_is_bit_exact() {
        let g = build_grid(3, 10.0, 64, GridScheme::BesselZeros).unwrap();
        let u0 = RadialField::from_real_fn(g, |r| (-r * r).exp());
        let cfg = SolverConfig { t_end: 0.01, record_stride: 5, ..SolverConfig::default() };
        let traj = evolve(&u0, &cfg).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&traj, &mut buf).unwrap();
        let back = read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(back.times(), traj.times());
        assert_eq!(back.provenance(), traj.provenance());
        for (a, b) in back.states().iter().zip(traj.states()) {
            assert_eq!(a.values(), b.values());
        }
    }

    #[test]
    fn rejects_damaged_files() {
        assert!(read_trajectory(&b"NOTACKPT\x01\0\0\0"[..]).unwrap_err().to_string().contains("magic"));
        let mut v = MAGIC.to_vec();
        v.extend_from_slice(&7u32.to_le_bytes());
        assert!(read_trajectory(v.as_slice()).unwrap_err().to_string().contains("version 7"));
    }
}
