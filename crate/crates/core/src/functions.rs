//! Three-bit boolean functions and the phase oracle `U_f |x> = (-1)^f(x) |x>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{equal_up_to_global_phase, pseudo_hadamard, ComplexOperator};

pub const N_BITS: usize = 3;
pub const N_INPUTS: usize = 1 << N_BITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionClass {
    Constant,
    Balanced,
    Neither,
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionClass::Constant => "constant",
            FunctionClass::Balanced => "balanced",
            FunctionClass::Neither => "neither",
        })
    }
}

/// A function `{0,1}^3 -> {0,1}` indexed by its output string `f(0)...f(7)`
/// read as a byte with `f(0)` the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryFunction {
    hex: u8,
}

impl BinaryFunction {
    pub fn from_hex(idx: i64) -> Result<Self> {
        u8::try_from(idx)
            .map(|hex| Self { hex })
            .map_err(|_| Error::FunctionIndex(idx))
    }

    pub const fn from_byte(hex: u8) -> Self {
        Self { hex }
    }

    pub fn from_outputs(outputs: [u8; N_INPUTS]) -> Result<Self> {
        let mut hex = 0u8;
        for &b in &outputs {
            if b > 1 {
                return Err(Error::Parse(format!("output bit {b} is not 0 or 1")));
            }
            hex = (hex << 1) | b;
        }
        Ok(Self { hex })
    }

    pub fn hex_index(self) -> u8 {
        self.hex
    }

    /// `f(x)` for `x` in 0..8.
    pub fn output(self, x: usize) -> u8 {
        (self.hex >> (N_INPUTS - 1 - x)) & 1
    }

    pub fn outputs(self) -> [u8; N_INPUTS] {
        std::array::from_fn(|x| self.output(x))
    }

    pub fn ones(self) -> u32 {
        self.hex.count_ones()
    }

    pub fn complement(self) -> Self {
        Self { hex: !self.hex }
    }

    /// The member of `{f, complement}` with `f(0) = 0`; both give the same
    /// `U_f` up to a sign.
    pub fn representative(self) -> Self {
        if self.output(0) == 0 {
            self
        } else {
            self.complement()
        }
    }

    pub fn classify(self) -> FunctionClass {
        match self.ones() {
            0 | 8 => FunctionClass::Constant,
            4 => FunctionClass::Balanced,
            _ => FunctionClass::Neither,
        }
    }

    /// `(-1)^f(x)` as a vector over `x`.
    pub fn signs(self) -> [f64; N_INPUTS] {
        std::array::from_fn(|x| if self.output(x) == 0 { 1.0 } else { -1.0 })
    }

    pub fn u_f(self) -> ComplexOperator {
        ComplexOperator::from_real_diagonal(&self.signs()).expect("dimension 8")
    }

    /// `|<000| H^-1 U_f H |000>|` with `H` the hard y pulse; 1 for constant
    /// functions and 0 for balanced ones.
    pub fn ideal_dj_overlap(self) -> f64 {
        let h = pseudo_hadamard(N_BITS).expect("three spins");
        let v = &h.adjoint() * &(&self.u_f() * &h);
        v.get(0, 0).norm()
    }
}

impl fmt::Display for BinaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:02X}", self.hex)
    }
}

impl FromStr for BinaryFunction {
    type Err = Error;

    /// Accepts `0xNN` (any case) or a decimal integer.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let value = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            i64::from_str_radix(h, 16)
        } else {
            t.parse::<i64>()
        }
        .map_err(|_| Error::Parse(format!("invalid function index '{s}'")))?;
        Self::from_hex(value)
    }
}

pub fn all_functions() -> impl Iterator<Item = BinaryFunction> {
    (0..=255u8).map(BinaryFunction::from_byte)
}

/// The 70 balanced functions, ascending by index.
pub fn enumerate_balanced() -> Vec<BinaryFunction> {
    all_functions()
        .filter(|f| f.classify() == FunctionClass::Balanced)
        .collect()
}

/// The 72 functions satisfying the constant-or-balanced promise.
pub fn enumerate_promise() -> Vec<BinaryFunction> {
    all_functions()
        .filter(|f| f.classify() != FunctionClass::Neither)
        .collect()
}

/// Distinct oracles up to sign: the 35 balanced representatives plus `0x00`.
pub fn distinct_oracles() -> Vec<BinaryFunction> {
    enumerate_promise()
        .into_iter()
        .filter(|f| f.output(0) == 0)
        .collect()
}

/// Number of classes of `U_f` under equality up to global phase.
pub fn distinct_up_to_phase(fs: &[BinaryFunction]) -> usize {
    let mut reps: Vec<ComplexOperator> = Vec::new();
    for f in fs {
        let u = f.u_f();
        let seen = reps.iter().any(|r| {
            equal_up_to_global_phase(&u, r, 1e-10)
                .map(|m| m.equal)
                .unwrap_or(false)
        });
        if !seen {
            reps.push(u);
        }
    }
    reps.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_hex_examples() {
        let f = BinaryFunction::from_hex(0x1E).unwrap();
        assert_eq!(f.outputs(), [0, 0, 0, 1, 1, 1, 1, 0]);
        assert_eq!(BinaryFunction::from_hex(0).unwrap().outputs(), [0; 8]);
        assert_eq!(
            BinaryFunction::from_hex(0x4D).unwrap().outputs(),
            [0, 1, 0, 0, 1, 1, 0, 1]
        );
        assert!(matches!(BinaryFunction::from_hex(256), Err(Error::FunctionIndex(256))));
        assert!(BinaryFunction::from_hex(-1).is_err());
    }

    #[test]
    fn outputs_round_trip_all() {
        for f in all_functions() {
            assert_eq!(BinaryFunction::from_outputs(f.outputs()).unwrap(), f);
        }
    }

    #[test]
    fn parse_hex_and_decimal() {
        assert_eq!("0x4D".parse::<BinaryFunction>().unwrap().hex_index(), 0x4D);
        assert_eq!("0x4d".parse::<BinaryFunction>().unwrap().hex_index(), 0x4D);
        assert_eq!("77".parse::<BinaryFunction>().unwrap().hex_index(), 77);
        assert!("0x100".parse::<BinaryFunction>().is_err());
        assert!("abc".parse::<BinaryFunction>().is_err());
        assert_eq!(BinaryFunction::from_byte(0x0F).to_string(), "0x0F");
    }

    #[test]
    fn classify_examples() {
        assert_eq!(BinaryFunction::from_byte(0x00).classify(), FunctionClass::Constant);
        assert_eq!(BinaryFunction::from_byte(0xFF).classify(), FunctionClass::Constant);
        assert_eq!(BinaryFunction::from_byte(0x0F).classify(), FunctionClass::Balanced);
        assert_eq!(BinaryFunction::from_byte(0x01).classify(), FunctionClass::Neither);
    }

    #[test]
    fn u_f_examples() {
        let id = ComplexOperator::identity(8).unwrap();
        assert_eq!(BinaryFunction::from_byte(0).u_f(), id);
        let u = BinaryFunction::from_byte(0x0F).u_f();
        let expected = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
        assert_eq!(u, ComplexOperator::from_real_diagonal(&expected).unwrap());
        let a = BinaryFunction::from_byte(0x1E).u_f();
        let b = BinaryFunction::from_byte(0xFF - 0x1E).u_f();
        assert_eq!(a, -&b);
    }

    #[test]
    fn u_f_is_real_diagonal_involution() {
        let id = ComplexOperator::identity(8).unwrap();
        for f in all_functions() {
            let u = f.u_f();
            assert!(u.is_diagonal(0.0));
            assert!(u.diagonal().iter().all(|z| z.im == 0.0));
            assert_eq!(&u * &u, id);
        }
    }

    #[test]
    fn balanced_enumeration() {
        let b = enumerate_balanced();
        assert_eq!(b.len(), 70);
        assert!(b.iter().all(|f| f.ones() == 4));
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b[0].hex_index(), 0x0F);
        assert_eq!(distinct_up_to_phase(&b), 35);
        assert_eq!(enumerate_promise().len(), 72);
        assert_eq!(distinct_oracles().len(), 36);
    }

    #[test]
    fn overlap_examples() {
        assert!((BinaryFunction::from_byte(0x00).ideal_dj_overlap() - 1.0).abs() < 1e-12);
        assert!((BinaryFunction::from_byte(0x01).ideal_dj_overlap() - 0.75).abs() < 1e-12);
        for f in enumerate_balanced() {
            assert!(f.ideal_dj_overlap() < 1e-12, "{f}");
        }
    }

    #[test]
    fn overlap_matches_sign_sum_for_all() {
        for f in all_functions() {
            let sum: f64 = f.signs().iter().sum();
            assert!((f.ideal_dj_overlap() - sum.abs() / 8.0).abs() < 1e-12, "{f}");
            match f.classify() {
                FunctionClass::Constant => assert!((f.ideal_dj_overlap() - 1.0).abs() < 1e-12),
                FunctionClass::Balanced => assert!(f.ideal_dj_overlap() < 1e-12),
                FunctionClass::Neither => {
                    let o = f.ideal_dj_overlap();
                    assert!(o > 1e-12 && o < 1.0 - 1e-12)
                }
            }
        }
    }
}
