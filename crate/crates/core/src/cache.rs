//! On-disk digit cache.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `SQDG`                            |
//! | 4      | 1    | version, `0x01`                         |
//! | 5      | 8    | radicand `d`                            |
//! | 13     | 1    | integer bits `ℓ`                        |
//! | 14     | 8    | fractional bits `N`                     |
//! | 22     | ⌈(ℓ+N)/8⌉ | bits, MSB-first, last byte zero-padded |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::digits::DigitSequence;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SQDG";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 22;

pub fn encode(seq: &DigitSequence) -> Vec<u8> {
    let bits = seq.bits();
    let mut out = Vec::with_capacity(HEADER_LEN + bits.len().div_ceil(8));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&seq.radicand().to_le_bytes());
    out.push(seq.int_bits());
    out.extend_from_slice(&seq.frac_bits().to_le_bytes());
    for chunk in bits.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)));
        out.push(byte);
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<DigitSequence> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Cache(format!(
            "truncated header ({} bytes)",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Cache(format!(
            "unsupported version {:#04x}",
            bytes[4]
        )));
    }
    let radicand = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let int_bits = bytes[13];
    let frac_bits = u64::from_le_bytes(bytes[14..22].try_into().unwrap());

    let total = int_bits as u64 + frac_bits;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() as u64 != total.div_ceil(8) {
        return Err(Error::Cache(format!(
            "payload is {} bytes, expected {} for {total} bits",
            payload.len(),
            total.div_ceil(8)
        )));
    }

    let total = total as usize;
    let mut bits = Vec::with_capacity(total);
    for (i, &byte) in payload.iter().enumerate() {
        for j in 0..8 {
            let b = (byte >> (7 - j)) & 1;
            if i * 8 + j < total {
                bits.push(b);
            } else if b != 0 {
                return Err(Error::Cache("nonzero padding bits".into()));
            }
        }
    }
    DigitSequence::from_parts(radicand, int_bits, frac_bits, bits)
}

/// File name used for radicand `d` inside a cache directory.
pub fn cache_path(dir: &Path, radicand: u64) -> PathBuf {
    dir.join(format!("sqrt{radicand}.sqdg"))
}

pub fn read(path: &Path) -> Result<DigitSequence> {
    decode(&fs::read(path)?)
}

/// Write through a temporary file in the same directory followed by a rename,
/// so readers never see a partially written cache.
pub fn write_atomic(path: &Path, seq: &DigitSequence) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("cache"),
        std::process::id()
    ));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&encode(seq))?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::expand_sqrt;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let seq = expand_sqrt(2, 5).unwrap();
        let bytes = encode(&seq);
        assert_eq!(&bytes[..4], b"SQDG");
        assert_eq!(bytes[4], 0x01);
        assert_eq!(&bytes[5..13], &2u64.to_le_bytes());
        assert_eq!(bytes[13], 1);
        assert_eq!(&bytes[14..22], &5u64.to_le_bytes());
        // 1.01101 -> 101101 + two padding zeros
        assert_eq!(&bytes[22..], &[0b1011_0100]);
    }

    #[test]
    fn exact_multiple_of_eight_has_no_padding_byte() {
        let seq = expand_sqrt(2, 15).unwrap();
        assert_eq!(encode(&seq).len(), HEADER_LEN + 2);
    }

    #[test]
    fn rejects_corruption() {
        let seq = expand_sqrt(18, 40).unwrap();
        let good = encode(&seq);

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(decode(&bad_magic).is_err());

        let mut bad_version = good.clone();
        bad_version[4] = 2;
        assert!(decode(&bad_version).is_err());

        assert!(decode(&good[..good.len() - 1]).is_err());

        // 3 + 40 = 43 bits; the last 5 bits of the final byte are padding.
        let mut bad_pad = good.clone();
        *bad_pad.last_mut().unwrap() |= 1;
        assert!(decode(&bad_pad).is_err());

        let mut bad_digit = good.clone();
        bad_digit[HEADER_LEN + 2] ^= 0x10;
        assert!(decode(&bad_digit).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let seq = expand_sqrt(3, 1000).unwrap();
        let path = cache_path(dir.path(), 3);
        write_atomic(&path, &seq).unwrap();
        assert_eq!(read(&path).unwrap(), seq);
        // Overwrite in place with a longer expansion.
        let longer = expand_sqrt(3, 2000).unwrap();
        write_atomic(&path, &longer).unwrap();
        assert_eq!(read(&path).unwrap(), longer);
        let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }

    proptest! {
        #[test]
        fn round_trip(d in 1u64..1000, n in 0u64..300) {
            let seq = expand_sqrt(d, n).unwrap();
            prop_assert_eq!(decode(&encode(&seq)).unwrap(), seq);
        }
    }
}
