//! Binary container for fixtures.
//!
//! Layout: 4-byte tag (`SWDM` density matrix, `SWPV` purified vector),
//! `u64` little-endian dimension, then the complex entries as little-endian
//! `f64` (re, im) pairs. Matrices are `dim × dim` row-major; vectors hold
//! `dim` entries.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::exact::density::DensityMatrix;
use crate::exact::purify::PurifiedVector;
use crate::linalg::{ComplexMatrix, C64};

const DENSITY_TAG: &[u8; 4] = b"SWDM";
const VECTOR_TAG: &[u8; 4] = b"SWPV";

fn write_entries<W: Write>(w: &mut W, tag: &[u8; 4], dim: usize, entries: &[C64]) -> Result<()> {
    w.write_all(tag)?;
    w.write_all(&(dim as u64).to_le_bytes())?;
    for v in entries {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_header<R: Read>(r: &mut R, tag: &[u8; 4]) -> Result<usize> {
    let mut got = [0u8; 4];
    r.read_exact(&mut got)?;
    if &got != tag {
        return Err(Error::Io(format!(
            "expected tag {:?}, found {:?}",
            String::from_utf8_lossy(tag),
            String::from_utf8_lossy(&got)
        )));
    }
    let mut dim = [0u8; 8];
    r.read_exact(&mut dim)?;
    Ok(u64::from_le_bytes(dim) as usize)
}

fn read_entries<R: Read>(r: &mut R, count: usize) -> Result<Vec<C64>> {
    let mut buf = [0u8; 8];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        out.push(C64::new(re, f64::from_le_bytes(buf)));
    }
    Ok(out)
}

fn qubits_for(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::Io(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub fn write_density<W: Write>(w: &mut W, rho: &DensityMatrix) -> Result<()> {
    let m = rho.matrix();
    let d = rho.dim();
    let entries: Vec<C64> = (0..d * d).map(|i| m[(i / d, i % d)]).collect();
    write_entries(w, DENSITY_TAG, d, &entries)
}

pub fn read_density<R: Read>(r: &mut R) -> Result<DensityMatrix> {
    let d = read_header(r, DENSITY_TAG)?;
    let n = qubits_for(d)?;
    crate::exact::density::check_dense_size(n)?;
    let entries = read_entries(r, d * d)?;
    DensityMatrix::new(n, ComplexMatrix::from_row_slice(d, d, &entries))
}

pub fn write_purified<W: Write>(w: &mut W, v: &PurifiedVector) -> Result<()> {
    write_entries(w, VECTOR_TAG, v.amplitudes().len(), v.amplitudes())
}

pub fn read_purified<R: Read>(r: &mut R) -> Result<PurifiedVector> {
    let d = read_header(r, VECTOR_TAG)?;
    let two_n = qubits_for(d)?;
    if two_n % 2 == 1 {
        return Err(Error::Io(format!("{d} amplitudes do not form a doubled register")));
    }
    if two_n > 2 * crate::exact::purify::MAX_CP_QUBITS {
        return Err(Error::SizeLimit {
            what: "purification qubits per side",
            requested: two_n / 2,
            limit: crate::exact::purify::MAX_CP_QUBITS,
        });
    }
    PurifiedVector::new(two_n / 2, read_entries(r, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{canonical_purification, random_density_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let rho = random_density_matrix(2, &mut rng).unwrap();
        let mut buf = Vec::new();
        write_density(&mut buf, &rho).unwrap();
        assert_eq!(buf.len(), 4 + 8 + 16 * 16);
        let back = read_density(&mut buf.as_slice()).unwrap();
        assert_eq!(back.matrix(), rho.matrix());

        let cp = canonical_purification(&rho).unwrap();
        let mut buf = Vec::new();
        write_purified(&mut buf, &cp).unwrap();
        assert_eq!(read_purified(&mut buf.as_slice()).unwrap(), cp);
        assert!(read_density(&mut buf.as_slice()).is_err());
    }
}
