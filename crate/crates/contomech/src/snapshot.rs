//! Binary field snapshots.
//!
//! Layout, all little-endian: the magic bytes `CWOM`, a `u16` version, the
//! point count as `u64`, the spacing `dx` in metres as `f64`, then `(Re, Im)`
//! `f64` pairs for the photon field `a` followed by the phonon field `b`.

use std::io::{self, Read, Write};

use contomech_core::C64;

pub const MAGIC: &[u8; 4] = b"CWOM";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dx: f64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

impl Snapshot {
    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        if self.a.len() != self.b.len() {
            return Err(io::Error::new(io::ErrorKind::InvalidInput, "a and b differ in length"));
        }
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.a.len() as u64).to_le_bytes())?;
        w.write_all(&self.dx.to_le_bytes())?;
        for v in self.a.iter().chain(&self.b) {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(22 + 32 * self.a.len());
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_from(r: &mut impl Read) -> io::Result<Self> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("not a CWOM snapshot"));
        }
        let mut u16b = [0u8; 2];
        r.read_exact(&mut u16b)?;
        if u16::from_le_bytes(u16b) != VERSION {
            return Err(bad("unsupported snapshot version"));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        r.read_exact(&mut b8)?;
        let dx = f64::from_le_bytes(b8);
        let mut read_field = |r: &mut dyn Read| -> io::Result<Vec<C64>> {
            (0..n)
                .map(|_| {
                    r.read_exact(&mut b8)?;
                    let re = f64::from_le_bytes(b8);
                    r.read_exact(&mut b8)?;
                    Ok(C64::new(re, f64::from_le_bytes(b8)))
                })
                .collect()
        };
        let a = read_field(r)?;
        let b = read_field(r)?;
        Ok(Snapshot { dx, a, b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_fixed() {
        let s = Snapshot { dx: 0.5, a: vec![C64::new(1.0, -2.0)], b: vec![C64::new(3.0, 4.0)] };
        let bytes = s.to_bytes();
        assert_eq!(bytes.len(), 4 + 2 + 8 + 8 + 32);
        assert_eq!(&bytes[..4], b"CWOM");
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(&bytes[6..14], &1u64.to_le_bytes());
        assert_eq!(&bytes[14..22], &0.5f64.to_le_bytes());
        assert_eq!(&bytes[22..30], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[30..38], &(-2.0f64).to_le_bytes());
        assert_eq!(&bytes[38..46], &3.0f64.to_le_bytes());
    }

    #[test]
    fn round_trip() {
        let a: Vec<C64> = (0..16).map(|i| C64::new(i as f64, 1.0 / (i as f64 + 1.0))).collect();
        let s = Snapshot { dx: 1e-4, b: a.iter().map(|v| v.conj()).collect(), a };
        let back = Snapshot::read_from(&mut s.to_bytes().as_slice()).unwrap();
        assert_eq!(back, s);
        let mut junk = s.to_bytes();
        junk[0] = b'X';
        assert!(Snapshot::read_from(&mut junk.as_slice()).is_err());
    }
}
