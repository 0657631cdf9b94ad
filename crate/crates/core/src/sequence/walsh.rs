//! Multilinear expansion of `pi f(x)` in the spin variables `s_i = 1 - 2 x_i`.
//!
//! Coefficients are exact integers in units of pi/8:
//! `8 f(x) = c0 + sum c_i s_i + sum c_ij s_i s_j + c_123 s_1 s_2 s_3`.

use serde::Serialize;

use crate::functions::{BinaryFunction, N_BITS, N_INPUTS};
use crate::sequence::Pair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WalshCoefficients {
    pub constant: i32,
    /// Spins 1, 2, 3.
    pub linear: [i32; 3],
    /// Pairs 12, 23, 13.
    pub bilinear: [i32; 3],
    pub trilinear: i32,
}

/// `s_i` of basis state `x` for 1-based `spin`.
fn s(x: usize, spin: usize) -> i32 {
    1 - 2 * ((x >> (N_BITS - spin)) & 1) as i32
}

fn character(x: usize, spins: &[usize]) -> i32 {
    spins.iter().map(|&k| s(x, k)).product()
}

pub fn walsh(f: BinaryFunction) -> WalshCoefficients {
    let coeff = |spins: &[usize]| -> i32 {
        (0..N_INPUTS)
            .map(|x| f.output(x) as i32 * character(x, spins))
            .sum()
    };
    WalshCoefficients {
        constant: coeff(&[]),
        linear: [coeff(&[1]), coeff(&[2]), coeff(&[3])],
        bilinear: Pair::ALL.map(|p| {
            let (i, j) = p.spins();
            coeff(&[i, j])
        }),
        trilinear: coeff(&[1, 2, 3]),
    }
}

impl WalshCoefficients {
    pub const UNIT: f64 = std::f64::consts::PI / 8.0;

    /// The expansion evaluated at `x`, in units of pi/8.
    pub fn evaluate(&self, x: usize) -> i32 {
        let mut v = self.constant;
        for k in 0..3 {
            v += self.linear[k] * s(x, k + 1);
        }
        for (c, p) in self.bilinear.iter().zip(Pair::ALL) {
            let (i, j) = p.spins();
            v += c * s(x, i) * s(x, j);
        }
        v + self.trilinear * character(x, &[1, 2, 3])
    }

    pub fn constant_rad(&self) -> f64 {
        self.constant as f64 * Self::UNIT
    }

    pub fn linear_rad(&self) -> [f64; 3] {
        self.linear.map(|c| c as f64 * Self::UNIT)
    }

    pub fn bilinear_rad(&self) -> [f64; 3] {
        self.bilinear.map(|c| c as f64 * Self::UNIT)
    }

    pub fn trilinear_rad(&self) -> f64 {
        self.trilinear as f64 * Self::UNIT
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::all_functions;
    use std::f64::consts::PI;

    #[test]
    fn zero_function() {
        let w = walsh(BinaryFunction::from_byte(0));
        assert_eq!(w.constant, 0);
        assert_eq!(w.linear, [0; 3]);
        assert_eq!(w.bilinear, [0; 3]);
        assert_eq!(w.trilinear, 0);
    }

    #[test]
    fn first_spin_function() {
        let w = walsh(BinaryFunction::from_byte(0x0F));
        assert!((w.constant_rad() - PI / 2.0).abs() < 1e-15);
        assert!((w.linear_rad()[0] + PI / 2.0).abs() < 1e-15);
        assert_eq!(&w.linear[1..], &[0, 0]);
        assert_eq!(w.bilinear, [0; 3]);
        assert_eq!(w.trilinear, 0);
    }

    #[test]
    fn three_body_component_of_4d() {
        let w = walsh(BinaryFunction::from_byte(0x4D));
        assert!((w.trilinear_rad() + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_exact_for_all_functions() {
        for f in all_functions() {
            let w = walsh(f);
            for x in 0..8 {
                assert_eq!(w.evaluate(x), 8 * f.output(x) as i32, "{f} x={x}");
            }
        }
    }
}
