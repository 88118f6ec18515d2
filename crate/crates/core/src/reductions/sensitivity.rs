use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest ground set accepted by [`monotone_sensitivity`].
pub const MAX_GROUND_SET: usize = 20;

/// `f: 2^[n] → {0,1}`, tabulated by bitmask: bit `i` of the index is set
/// iff element `i` belongs to `S`, so `table[0] = f(∅)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanSetFunction {
    n: usize,
    table: Vec<bool>,
}

impl BooleanSetFunction {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::Infeasible(format!("ground set of size {n} exceeds {MAX_GROUND_SET}")));
        }
        if table.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "truth table of length {} for n = {n}",
                table.len()
            )));
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::Infeasible(format!("ground set of size {n} exceeds {MAX_GROUND_SET}")));
        }
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// `[S = ∅]`.
    pub fn empty_indicator(n: usize) -> Result<Self> {
        Self::from_fn(n, |s| s == 0)
    }

    /// `[|S| ≥ k]`.
    pub fn threshold(n: usize, k: u32) -> Result<Self> {
        Self::from_fn(n, |s| s.count_ones() >= k)
    }

    /// Parse a hex truth table, most significant bit first: the leading bit
    /// of the first digit is `f(∅)`. Without `n` the size is inferred from
    /// the digit count; with `n < 2` the unused low bits must be zero.
    pub fn from_hex(text: &str, n: Option<usize>) -> Result<Self> {
        let digits = text
            .trim()
            .strip_prefix("0x")
            .or_else(|| text.trim().strip_prefix("0X"))
            .unwrap_or(text.trim());
        if digits.is_empty() {
            return Err(Error::Parse("empty truth table".into()));
        }
        let mut bits = Vec::with_capacity(4 * digits.len());
        for (pos, ch) in digits.chars().enumerate() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit `{ch}` at position {pos}")))?;
            for k in (0..4).rev() {
                bits.push((v >> k) & 1 == 1);
            }
        }
        let n = match n {
            Some(n) => n,
            None => {
                if !bits.len().is_power_of_two() {
                    return Err(Error::Parse(format!(
                        "{} digits do not encode a table of length 2^n",
                        digits.len()
                    )));
                }
                bits.len().trailing_zeros() as usize
            }
        };
        if n > MAX_GROUND_SET {
            return Err(Error::Infeasible(format!("ground set of size {n} exceeds {MAX_GROUND_SET}")));
        }
        let len = 1usize << n;
        if bits.len() != len.max(4) {
            return Err(Error::Parse(format!(
                "{} digits for a table of length {len}",
                digits.len()
            )));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::Parse("padding bits must be zero".into()));
        }
        bits.truncate(len);
        Self::new(n, bits)
    }

    pub fn to_hex(&self) -> String {
        let mut bits = self.table.clone();
        bits.resize(bits.len().max(4), false);
        let digits: String = bits
            .chunks(4)
            .map(|c| {
                let v = c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).expect("nibble")
            })
            .collect();
        format!("0x{digits}")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, set: u32) -> bool {
        self.table[set as usize]
    }

    /// Number of elements outside `set` whose addition flips `f`.
    pub fn flips_at(&self, set: u32) -> usize {
        let v = self.eval(set);
        (0..self.n)
            .filter(|&i| set & (1 << i) == 0 && self.eval(set | (1 << i)) != v)
            .count()
    }
}

/// `max_S |{i ∉ S : f(S ∪ {i}) ≠ f(S)}|`, by enumeration.
pub fn monotone_sensitivity(f: &BooleanSetFunction) -> usize {
    (0..1u32 << f.n).map(|s| f.flips_at(s)).max().unwrap_or(0)
}
