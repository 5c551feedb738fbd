//! Fixed-length bit patterns indexing external nodes and tensor slots.
//!
//! The leftmost bit always corresponds to the node labeled 1, so a pattern
//! of length n reads as the binary expansion of its index with the most
//! significant bit first.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("bit position {pos} out of range for length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
}

/// A bit string of length up to 32, leftmost bit first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    len: u8,
    bits: u32,
}

impl Pattern {
    pub const MAX_LEN: usize = 32;

    /// The pattern whose bits spell the binary expansion of `index`
    /// (leftmost bit most significant).
    pub fn from_index(len: usize, index: usize) -> Self {
        assert!(len <= Self::MAX_LEN);
        assert!(len == 32 || index < (1usize << len), "index out of range");
        Pattern { len: len as u8, bits: index as u32 }
    }

    pub fn zeros(len: usize) -> Self {
        Pattern::from_index(len, 0)
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut p = Pattern::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                p.bits |= 1 << (p.len as usize - 1 - i);
            }
        }
        p
    }

    /// Single-bit vector `e_pos` with `pos` 1-based from the left.
    pub fn unit(len: usize, pos: usize) -> Self {
        assert!(pos >= 1 && pos <= len, "unit position out of range");
        Pattern { len: len as u8, bits: 1 << (len - pos) }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The pattern read as an integer index, leftmost bit most significant.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Bit at 1-based position `pos` counted from the left.
    pub fn bit(&self, pos: usize) -> u8 {
        assert!(pos >= 1 && pos <= self.len());
        ((self.bits >> (self.len() - pos)) & 1) as u8
    }

    pub fn wt(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn parity(&self) -> u8 {
        (self.wt() % 2) as u8
    }

    pub fn xor(&self, other: &Pattern) -> Result<Pattern, PatternError> {
        if self.len != other.len {
            return Err(PatternError::LengthMismatch(self.len(), other.len()));
        }
        Ok(Pattern { len: self.len, bits: self.bits ^ other.bits })
    }

    /// 1-based positions (left to right) of the set bits.
    pub fn positions(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&p| self.bit(p) == 1).collect()
    }

    pub fn concat(&self, other: &Pattern) -> Pattern {
        let len = self.len() + other.len();
        assert!(len <= Self::MAX_LEN);
        Pattern {
            len: len as u8,
            bits: (self.bits << other.len()) | other.bits,
        }
    }

    pub fn reversed(&self) -> Pattern {
        let mut p = Pattern::zeros(self.len());
        for pos in 1..=self.len() {
            if self.bit(pos) == 1 {
                p.bits |= 1 << (pos - 1);
            }
        }
        p
    }

    /// Block `t` (1-based) of width `block_len` bits.
    pub fn block(&self, t: usize, block_len: usize) -> Pattern {
        assert!(block_len * t <= self.len());
        let start = (t - 1) * block_len;
        let mut p = Pattern::zeros(block_len);
        for k in 0..block_len {
            if self.bit(start + k + 1) == 1 {
                p.bits |= 1 << (block_len - 1 - k);
            }
        }
        p
    }

    /// The splice: `alpha` inserted as block `t`, with the blocks of `beta`
    /// filling the remaining positions in order. `alpha` has `block_len`
    /// bits and `beta` has `(n-1)*block_len` bits.
    pub fn splice(
        beta: &Pattern,
        alpha: &Pattern,
        t: usize,
        block_len: usize,
    ) -> Result<Pattern, PatternError> {
        if alpha.len() != block_len {
            return Err(PatternError::LengthMismatch(alpha.len(), block_len));
        }
        if block_len == 0 || beta.len() % block_len != 0 {
            return Err(PatternError::LengthMismatch(beta.len(), block_len));
        }
        let n = beta.len() / block_len + 1;
        if t < 1 || t > n {
            return Err(PatternError::PositionOutOfRange { pos: t, len: n });
        }
        let mut out = Pattern::zeros(0);
        let mut beta_block = 0;
        for b in 1..=n {
            if b == t {
                out = out.concat(alpha);
            } else {
                beta_block += 1;
                out = out.concat(&beta.block(beta_block, block_len));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 1..=self.len() {
            write!(f, "{}", self.bit(pos))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
