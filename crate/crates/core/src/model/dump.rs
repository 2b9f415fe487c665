//! Binary grid dump: `"H2PG"`, `u32` sites, `f64` time, then `n²` complex
//! amplitudes as interleaved little-endian `f64` pairs, row-major in `x`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::TwoParticleState;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"H2PG";

pub fn write_grid<W: Write>(state: &TwoParticleState, mut out: W) -> Result<()> {
    let n =
        u32::try_from(state.n_sites()).map_err(|_| Error::Format("lattice too large".into()))?;
    out.write_all(MAGIC)?;
    out.write_all(&n.to_le_bytes())?;
    out.write_all(&state.time().to_le_bytes())?;
    for a in state.amplitudes().iter() {
        out.write_all(&a.re.to_le_bytes())?;
        out.write_all(&a.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_grid<R: Read>(mut input: R) -> Result<TwoParticleState> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let n = u32::from_le_bytes(word) as usize;
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    let time = f64::from_le_bytes(buf);

    let mut values = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        input.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf);
        input.read_exact(&mut buf)?;
        let im = f64::from_le_bytes(buf);
        values.push(C64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after amplitudes".into()));
    }
    let grid = Array2::from_shape_vec((n, n), values).map_err(|e| Error::Format(e.to_string()))?;
    TwoParticleState::new(grid, time)
}

pub fn save_grid(state: &TwoParticleState, path: impl AsRef<Path>) -> Result<()> {
    write_grid(state, BufWriter::new(File::create(path)?))
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<TwoParticleState> {
    read_grid(BufReader::new(File::open(path)?))
}
