//! Binary path dump.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! header
//!   magic     8 bytes   "ITOPATH1"
//!   model     32 bytes  SHA-256 of the canonical TOML model document
//!   seed      u64
//!   step      f64
//!   horizon   f64
//!   dim       u32       state dimension
//!   count     u64       number of path blocks
//! path block (repeated `count` times)
//!   stream    u64
//!   tau       f64
//!   sup       f64
//!   n         u64       grid points
//!   times     n × f64
//!   states    n × dim × f64, row per grid point
//!   m         u64       jumps
//!   jumps     m × (time f64, before dim × f64, size dim × f64)
//!   e         u32       exit records
//!   exits     e × (radius f64, time f64; NaN when no exit)
//! ```

use std::io::{Read, Write};

use sha2::{Digest, Sha256};

use super::{ExitRecord, JumpMark, PathSample, SimConfig};
use crate::error::{Error, Result};
use crate::model::{to_toml, ProcessModel};

pub const MAGIC: &[u8; 8] = b"ITOPATH1";

#[derive(Debug, Clone, PartialEq)]
pub struct DumpHeader {
    pub model_digest: [u8; 32],
    pub seed: u64,
    pub step: f64,
    pub horizon: f64,
    pub dim: u32,
    pub count: u64,
}

impl DumpHeader {
    pub fn new(model: &ProcessModel, cfg: &SimConfig, count: u64) -> Self {
        DumpHeader {
            model_digest: Sha256::digest(to_toml(model).as_bytes()).into(),
            seed: cfg.seed,
            step: cfg.step,
            horizon: cfg.horizon,
            dim: model.state_dim() as u32,
            count,
        }
    }
}

fn put_f64s<W: Write>(w: &mut W, v: &[f64]) -> Result<()> {
    for x in v {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_header<W: Write>(w: &mut W, h: &DumpHeader) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&h.model_digest)?;
    w.write_all(&h.seed.to_le_bytes())?;
    put_f64s(w, &[h.step, h.horizon])?;
    w.write_all(&h.dim.to_le_bytes())?;
    w.write_all(&h.count.to_le_bytes())?;
    Ok(())
}

pub fn write_path<W: Write>(w: &mut W, stream: u64, p: &PathSample) -> Result<()> {
    w.write_all(&stream.to_le_bytes())?;
    put_f64s(w, &[p.tau, p.sup])?;
    w.write_all(&(p.times.len() as u64).to_le_bytes())?;
    put_f64s(w, &p.times)?;
    for s in &p.states {
        put_f64s(w, s)?;
    }
    w.write_all(&(p.jumps.len() as u64).to_le_bytes())?;
    for j in &p.jumps {
        put_f64s(w, &[j.time])?;
        put_f64s(w, &j.before)?;
        put_f64s(w, &j.size)?;
    }
    w.write_all(&(p.exits.len() as u32).to_le_bytes())?;
    for e in &p.exits {
        put_f64s(w, &[e.radius, e.time.unwrap_or(f64::NAN)])?;
    }
    Ok(())
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        self.inner.read_exact(&mut b)?;
        Ok(b)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }
    fn len(&mut self) -> Result<usize> {
        let n = self.u64()?;
        usize::try_from(n)
            .ok()
            .filter(|n| *n < 1 << 40)
            .ok_or_else(|| Error::parse("dump", format!("implausible length {n}")))
    }
}

/// Reads a whole dump back. The start state of each path is its first
/// recorded state.
pub fn read_dump<R: Read>(r: R) -> Result<(DumpHeader, Vec<(u64, PathSample)>)> {
    let mut r = Reader { inner: r };
    if &r.bytes::<8>()? != MAGIC {
        return Err(Error::parse("dump", "bad magic"));
    }
    let header = DumpHeader {
        model_digest: r.bytes()?,
        seed: r.u64()?,
        step: r.f64()?,
        horizon: r.f64()?,
        dim: r.u32()?,
        count: r.u64()?,
    };
    let dim = header.dim as usize;
    let mut paths = Vec::new();
    for _ in 0..header.count {
        let stream = r.u64()?;
        let tau = r.f64()?;
        let sup = r.f64()?;
        let n = r.len()?;
        let times = r.f64s(n)?;
        let states = (0..n).map(|_| r.f64s(dim)).collect::<Result<Vec<_>>>()?;
        let m = r.len()?;
        let mut jumps = Vec::with_capacity(m);
        for _ in 0..m {
            jumps.push(JumpMark {
                time: r.f64()?,
                before: r.f64s(dim)?,
                size: r.f64s(dim)?,
            });
        }
        let e = r.u32()?;
        let mut exits = Vec::with_capacity(e as usize);
        for _ in 0..e {
            let radius = r.f64()?;
            let t = r.f64()?;
            exits.push(ExitRecord {
                radius,
                time: (!t.is_nan()).then_some(t),
            });
        }
        let start = states.first().cloned().unwrap_or_else(|| vec![0.0; dim]);
        paths.push((
            stream,
            PathSample {
                tau,
                start,
                times,
                states,
                jumps,
                exits,
                sup,
            },
        ));
    }
    Ok((header, paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, JumpLaw};
    use crate::simulate::simulate_path;

    #[test]
    fn round_trip() {
        let m = catalog::jump_diffusion(vec![0.0], 0.5, 3.0, JumpLaw::TwoPoint { size: 0.5 });
        let mut cfg = SimConfig::new(0.05, 1.0, 17);
        cfg.exit_radii = vec![0.25, 100.0];
        let mut buf = Vec::new();
        write_header(&mut buf, &DumpHeader::new(&m, &cfg, 3)).unwrap();
        let mut paths = Vec::new();
        for s in 0..3 {
            cfg.stream = s;
            let p = simulate_path(&m, 0.0, &[0.0], &cfg).unwrap();
            write_path(&mut buf, s, &p).unwrap();
            paths.push((s, p));
        }
        let (h, back) = read_dump(buf.as_slice()).unwrap();
        assert_eq!(h.count, 3);
        assert_eq!(back, paths);
    }
}
