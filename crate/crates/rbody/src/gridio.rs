//! Binary occupancy-grid dumps.
//!
//! Layout, all little-endian:
//! magic "RBGR", version u16, dim u8, extents u32 per axis, origin f64 per
//! axis, spacing f64, then the occupancy bits packed 8 cells per byte in
//! scan order (lowest axis fastest, least significant bit first).

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::grid::Grid;

pub const MAGIC: &[u8; 4] = b"RBGR";
pub const VERSION: u16 = 1;

pub fn write_grid<W: Write>(w: &mut W, g: &Grid) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[g.dim() as u8])?;
    for &e in g.extents() {
        let e = u32::try_from(e).map_err(|_| Error::Format("extent exceeds u32".into()))?;
        w.write_all(&e.to_le_bytes())?;
    }
    for &o in g.origin() {
        w.write_all(&o.to_le_bytes())?;
    }
    w.write_all(&g.spacing().to_le_bytes())?;
    let nbytes = (g.len() + 7) / 8;
    let mut payload = Vec::with_capacity(nbytes);
    for word in g.raw_bits() {
        payload.extend_from_slice(&word.to_le_bytes());
    }
    payload.truncate(nbytes);
    w.write_all(&payload)?;
    Ok(())
}

pub fn read_grid<R: Read>(r: &mut R) -> Result<Grid> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut buf2 = [0u8; 2];
    r.read_exact(&mut buf2)?;
    let version = u16::from_le_bytes(buf2);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut buf1 = [0u8; 1];
    r.read_exact(&mut buf1)?;
    let dim = buf1[0] as usize;
    if !(2..=4).contains(&dim) {
        return Err(Error::Format(format!("dimension {dim} outside 2..4")));
    }
    let mut extents = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        extents.push(u32::from_le_bytes(b) as usize);
    }
    let mut origin = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        origin.push(f64::from_le_bytes(b));
    }
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let spacing = f64::from_le_bytes(b);

    let n: usize = extents.iter().product();
    let nbytes = (n + 7) / 8;
    let mut payload = vec![0u8; nbytes];
    r.read_exact(&mut payload)?;
    if n % 8 != 0 {
        let tail = payload[nbytes - 1] >> (n % 8);
        if tail != 0 {
            return Err(Error::Format("nonzero padding bits".into()));
        }
    }
    payload.resize(((n + 63) / 64) * 8, 0);
    let words: Vec<u64> = payload
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Grid::from_raw(origin, spacing, extents, words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_random_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 2..=4 {
            let extents: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..9)).collect();
            let origin: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let mut g = Grid::new(origin, 0.125, extents).unwrap();
            for lin in 0..g.len() {
                if rng.gen_bool(0.4) {
                    g.set(lin, true);
                }
            }
            let mut buf = Vec::new();
            write_grid(&mut buf, &g).unwrap();
            let back = read_grid(&mut buf.as_slice()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn header_size_is_deterministic() {
        let g = Grid::new(vec![0.0, 0.0], 1.0, vec![3, 3]).unwrap();
        let mut buf = Vec::new();
        write_grid(&mut buf, &g).unwrap();
        // 4 magic + 2 version + 1 dim + 2*4 extents + 2*8 origin + 8 spacing + 2 payload
        assert_eq!(buf.len(), 4 + 2 + 1 + 8 + 16 + 8 + 2);
    }

    #[test]
    fn rejects_bad_magic() {
        let buf = b"XXXX\x01\x00\x02".to_vec();
        assert!(read_grid(&mut buf.as_slice()).is_err());
    }
}
