//! Codewords: the `i`-th string of `∅, 0, 1, 00, 01, 10, 11, 000, …`.
//!
//! String `i` is the binary expansion of `i + 1` with its leading one
//! removed, so it has length `⌊log₂(i + 1)⌋`.

use std::fmt;

use num_bigint::BigUint;

use crate::{Error, Result};

/// Text form of the empty codeword in line-oriented records.
pub const EMPTY_SENTINEL: &str = "(empty)";

/// A binary string, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    bits: Vec<bool>,
}

impl Codeword {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Codeword { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Parses a string of `0`/`1` characters; the empty string is `∅`.
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .enumerate()
            .map(|(offset, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Codeword {
                    offset,
                    message: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Codeword::from_bits)
    }

    /// Line record form: the bit string, or [`EMPTY_SENTINEL`] for `∅`.
    pub fn to_record(&self) -> String {
        if self.is_empty() {
            EMPTY_SENTINEL.to_string()
        } else {
            self.to_string()
        }
    }

    pub fn from_record(line: &str) -> Result<Self> {
        let line = line.trim();
        if line == EMPTY_SENTINEL {
            Ok(Codeword::default())
        } else if line.is_empty() {
            Err(Error::Codeword {
                offset: 0,
                message: format!("empty record (use {EMPTY_SENTINEL} for the empty codeword)"),
            })
        } else {
            Codeword::parse(line)
        }
    }

    /// Appends the binary record: LEB128 bit length, then the bits packed
    /// MSB-first and zero-padded to a whole byte.
    pub fn write_packed(&self, out: &mut Vec<u8>) {
        let mut len = self.bits.len() as u64;
        loop {
            let byte = (len & 0x7f) as u8;
            len >>= 7;
            if len == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
        for chunk in self.bits.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &b)| acc | (b as u8) << (7 - k));
            out.push(byte);
        }
    }

    /// Reads one binary record, returning the codeword and bytes consumed.
    pub fn read_packed(input: &[u8]) -> Result<(Self, usize)> {
        let mut len: u64 = 0;
        let mut pos = 0;
        loop {
            let Some(&byte) = input.get(pos) else {
                return Err(Error::Codeword {
                    offset: pos,
                    message: "truncated length prefix".into(),
                });
            };
            if pos >= 9 {
                return Err(Error::Codeword {
                    offset: pos,
                    message: "length prefix too long".into(),
                });
            }
            len |= u64::from(byte & 0x7f) << (7 * pos);
            pos += 1;
            if byte & 0x80 == 0 {
                break;
            }
        }
        let len = len as usize;
        let bytes = len.div_ceil(8);
        let Some(data) = input.get(pos..pos + bytes) else {
            return Err(Error::Codeword {
                offset: input.len(),
                message: format!("expected {bytes} data bytes"),
            });
        };
        let bits: Vec<bool> = (0..len).map(|k| data[k / 8] >> (7 - k % 8) & 1 == 1).collect();
        if !len.is_multiple_of(8) && data[bytes - 1] & (0xff >> (len % 8)) != 0 {
            return Err(Error::Codeword {
                offset: pos + bytes - 1,
                message: "non-zero padding bits".into(),
            });
        }
        Ok((Codeword { bits }, pos + bytes))
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The `i`-th binary string in length-then-lexicographic order.
pub fn index_to_codeword(i: u64) -> Codeword {
    let x = u128::from(i) + 1;
    let len = 127 - x.leading_zeros() as usize;
    Codeword {
        bits: (0..len).rev().map(|k| x >> k & 1 == 1).collect(),
    }
}

/// Inverse of [`index_to_codeword`]. Codewords longer than 63 bits do not
/// fit a `u64` index.
pub fn codeword_to_index(c: &Codeword) -> Result<u64> {
    if c.len() > 63 {
        return Err(Error::Codeword {
            offset: 63,
            message: "codeword too long for a 64-bit index".into(),
        });
    }
    let x = c.bits.iter().fold(1u64, |acc, &b| acc << 1 | b as u64);
    Ok(x - 1)
}

/// Length of codeword `i`, `⌊log₂(i + 1)⌋`, for arbitrarily large `i`.
pub fn codeword_length(i: &BigUint) -> u64 {
    (i + 1u32).bits() - 1
}
