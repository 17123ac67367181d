//! Little-endian binary snapshots.
//!
//! ```text
//! magic        4 bytes  "WKGS"
//! version      u32      1
//! dim          u32
//! n            u32
//! L            f64
//! t            f64
//! flags        u32      bit 0: a phase field follows the profiles
//! param_count  u32      40
//! params       f64 x 40 A (16, row-major), B (16), D,
//!                       N0, N1, d, kappa, delta, beta, p
//! V_wa         (re, im) f64 pairs, one per mode, storage order
//! V_kg         same
//! theta        f64 per mode (only if flag bit 0)
//! ```

use super::coefficients::CouplingCoefficients;
use super::state::ProfileState;
use crate::error::{Result, WkgError};
use crate::grid::SpectralGrid;
use crate::params::DyadicParams;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"WKGS";
pub const VERSION: u32 = 1;
const PARAM_COUNT: u32 = 40;
const FLAG_THETA: u32 = 1;

/// Everything stored in one snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dim: usize,
    pub n: usize,
    pub box_length: f64,
    pub coefficients: CouplingCoefficients,
    pub params: DyadicParams,
    pub state: ProfileState,
    pub theta: Option<Vec<f64>>,
}

impl Snapshot {
    pub fn new(
        grid: &SpectralGrid,
        coefficients: CouplingCoefficients,
        params: DyadicParams,
        state: ProfileState,
        theta: Option<Vec<f64>>,
    ) -> Self {
        Snapshot {
            dim: grid.dim(),
            n: grid.n(),
            box_length: grid.box_length(),
            coefficients,
            params,
            state,
            theta,
        }
    }

    pub fn grid(&self) -> Result<SpectralGrid> {
        SpectralGrid::new(self.dim, self.n, self.box_length)
    }

    fn param_block(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(PARAM_COUNT as usize);
        out.extend(self.coefficients.a.iter().flatten());
        out.extend(self.coefficients.b.iter().flatten());
        let p = &self.params;
        out.extend([
            self.coefficients.d,
            p.n0,
            p.n1 as f64,
            p.d,
            p.kappa,
            p.delta,
            p.beta,
            p.p,
        ]);
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let modes = self.n.pow(self.dim as u32);
        if self.state.v_wa.len() != modes || self.state.v_kg.len() != modes {
            return Err(WkgError::Snapshot("profile length does not match the grid".into()));
        }
        w.write_all(MAGIC)?;
        for x in [VERSION, self.dim as u32, self.n as u32] {
            w.write_all(&x.to_le_bytes())?;
        }
        w.write_all(&self.box_length.to_le_bytes())?;
        w.write_all(&self.state.t.to_le_bytes())?;
        let flags = if self.theta.is_some() { FLAG_THETA } else { 0 };
        w.write_all(&flags.to_le_bytes())?;
        let params = self.param_block();
        w.write_all(&(params.len() as u32).to_le_bytes())?;
        let mut buf = Vec::with_capacity(8 * (params.len() + 4 * modes));
        for x in params {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        for z in self.state.v_wa.iter().chain(&self.state.v_kg) {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        if let Some(theta) = &self.theta {
            if theta.len() != modes {
                return Err(WkgError::Snapshot("phase field length does not match the grid".into()));
            }
            for x in theta {
                buf.extend_from_slice(&x.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(WkgError::Snapshot("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(WkgError::Snapshot(format!("unsupported version {version}")));
        }
        let dim = read_u32(&mut r)? as usize;
        let n = read_u32(&mut r)? as usize;
        let box_length = read_f64(&mut r)?;
        let t = read_f64(&mut r)?;
        let flags = read_u32(&mut r)?;
        let count = read_u32(&mut r)?;
        if count != PARAM_COUNT {
            return Err(WkgError::Snapshot(format!("expected {PARAM_COUNT} parameters, found {count}")));
        }
        // validates dim and n before any large allocation
        let grid = SpectralGrid::new(dim, n, box_length).map_err(|e| WkgError::Snapshot(e.to_string()))?;
        let p: Vec<f64> = (0..count).map(|_| read_f64(&mut r)).collect::<Result<_>>()?;
        let mut a = [[0.0; 4]; 4];
        let mut b = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] = p[4 * i + j];
                b[i][j] = p[16 + 4 * i + j];
            }
        }
        let coefficients = CouplingCoefficients { a, b, d: p[32] };
        let params = DyadicParams {
            n0: p[33],
            n1: p[34] as u32,
            d: p[35],
            kappa: p[36],
            delta: p[37],
            beta: p[38],
            p: p[39],
        };
        let modes = grid.len();
        let mut bytes = vec![0u8; 16 * 2 * modes];
        r.read_exact(&mut bytes)?;
        let complex: Vec<Complex64> = bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        let (v_wa, v_kg) = complex.split_at(modes);
        let theta = if flags & FLAG_THETA != 0 {
            let mut bytes = vec![0u8; 8 * modes];
            r.read_exact(&mut bytes)?;
            Some(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        } else {
            None
        };
        Ok(Snapshot {
            dim,
            n,
            box_length,
            coefficients,
            params,
            state: ProfileState {
                v_wa: v_wa.to_vec(),
                v_kg: v_kg.to_vec(),
                t,
            },
            theta,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let g = SpectralGrid::new(3, 8, 12.5).unwrap();
        let mut st = ProfileState::zeros(&g);
        for (i, z) in st.v_wa.iter_mut().enumerate() {
            *z = Complex64::new((i as f64).sin(), 1.0 / (1.0 + i as f64));
        }
        st.v_kg[3] = Complex64::new(-1e-300, 7.0);
        st.t = 0.1 + 0.2;
        let theta: Vec<f64> = (0..g.len()).map(|i| i as f64 * 1e-3).collect();
        let snap = Snapshot::new(&g, CouplingCoefficients::model(), DyadicParams::default(), st, Some(theta));
        let mut buf = Vec::new();
        snap.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"WKGS");
        assert_eq!(buf.len(), 4 + 12 + 16 + 8 + 320 + 32 * g.len() + 8 * g.len());
        let back = Snapshot::read_from(&buf[..]).unwrap();
        assert_eq!(back, snap);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Snapshot::read_from(&b"NOPE0000"[..]).is_err());
    }
}
