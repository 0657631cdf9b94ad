//! Molecule parameters and the weak-coupling rotating-frame Hamiltonian.
//!
//! Shifts and couplings are stored in Hz; the factor of 2 pi is applied only
//! when the Hamiltonian is built (rad/s, hbar = 1).

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{unitary_exp_diagonal, ComplexOperator};

pub const DEFAULT_LINEWIDTH_HZ: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpinSystemRecord", into = "SpinSystemRecord")]
pub struct SpinSystem {
    shift_hz: Vec<f64>,
    coupling_hz: Vec<Vec<f64>>,
    linewidth_hz: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpinSystemRecord {
    shift_hz: Vec<f64>,
    coupling_hz: Vec<Vec<f64>>,
    #[serde(default = "default_linewidth")]
    linewidth_hz: f64,
}

fn default_linewidth() -> f64 {
    DEFAULT_LINEWIDTH_HZ
}

impl TryFrom<SpinSystemRecord> for SpinSystem {
    type Error = Error;

    fn try_from(r: SpinSystemRecord) -> Result<Self> {
        SpinSystem::new(r.shift_hz, r.coupling_hz, r.linewidth_hz)
    }
}

impl From<SpinSystem> for SpinSystemRecord {
    fn from(s: SpinSystem) -> Self {
        SpinSystemRecord {
            shift_hz: s.shift_hz,
            coupling_hz: s.coupling_hz,
            linewidth_hz: s.linewidth_hz,
        }
    }
}

impl SpinSystem {
    pub fn new(shift_hz: Vec<f64>, coupling_hz: Vec<Vec<f64>>, linewidth_hz: f64) -> Result<Self> {
        let n = shift_hz.len();
        if !(1..=3).contains(&n) {
            return Err(Error::SpinCount(n));
        }
        if coupling_hz.len() != n || coupling_hz.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSystem(format!(
                "coupling_hz must be a {n}x{n} matrix"
            )));
        }
        if shift_hz.iter().chain(coupling_hz.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSystem("non-finite parameter".into()));
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            if coupling_hz[i][i] != 0.0 {
                return Err(Error::InvalidSystem(format!(
                    "coupling_hz[{i}][{i}] must be zero"
                )));
            }
            for j in 0..i {
                if coupling_hz[i][j] != coupling_hz[j][i] {
                    return Err(Error::InvalidSystem(format!(
                        "coupling_hz is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if !(linewidth_hz >= 0.0 && linewidth_hz.is_finite()) {
            return Err(Error::InvalidSystem(format!(
                "linewidth_hz must be a finite non-negative number, got {linewidth_hz}"
            )));
        }
        Ok(Self {
            shift_hz,
            coupling_hz,
            linewidth_hz,
        })
    }

    /// 13C-labelled alanine: three carbons, protons decoupled.
    pub fn alanine() -> Self {
        let (j12, j23, j13) = (54.06, 34.86, 1.03);
        Self::new(
            vec![5670.0, -3780.0, -6380.0],
            vec![
                vec![0.0, j12, j13],
                vec![j12, 0.0, j23],
                vec![j13, j23, 0.0],
            ],
            DEFAULT_LINEWIDTH_HZ,
        )
        .expect("preset is valid")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn with_linewidth(mut self, linewidth_hz: f64) -> Result<Self> {
        self.linewidth_hz = linewidth_hz;
        Self::new(self.shift_hz, self.coupling_hz, self.linewidth_hz)
    }

    pub fn n_spins(&self) -> usize {
        self.shift_hz.len()
    }

    pub fn shifts_hz(&self) -> &[f64] {
        &self.shift_hz
    }

    pub fn couplings_hz(&self) -> &[Vec<f64>] {
        &self.coupling_hz
    }

    pub fn linewidth_hz(&self) -> f64 {
        self.linewidth_hz
    }

    /// Chemical shift of `spin` (1-based) in Hz.
    pub fn shift(&self, spin: usize) -> f64 {
        self.shift_hz[spin - 1]
    }

    /// Coupling `J_ij` (1-based) in Hz.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.coupling_hz[i - 1][j - 1]
    }

    /// Diagonal of the Hamiltonian in rad/s, indexed by basis state.
    pub fn energies(&self) -> Vec<f64> {
        let n = self.n_spins();
        (0..1usize << n)
            .map(|x| {
                let m: Vec<f64> = (1..=n).map(|i| magnetic(x, i, n)).collect();
                let mut e = 0.0;
                for i in 0..n {
                    e += 2.0 * PI * self.shift_hz[i] * m[i];
                    for j in i + 1..n {
                        e += 2.0 * PI * self.coupling_hz[i][j] * m[i] * m[j];
                    }
                }
                e
            })
            .collect()
    }

    pub fn hamiltonian(&self) -> ComplexOperator {
        ComplexOperator::from_real_diagonal(&self.energies()).expect("dimension 2, 4 or 8")
    }

    /// `exp(-i H t)`.
    pub fn free_propagator(&self, t: f64) -> Result<ComplexOperator> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        unitary_exp_diagonal(&self.hamiltonian(), t)
    }
}

/// `m_i` of basis state `x` for spin `i` (1-based, spin 1 most significant).
pub fn magnetic(x: usize, spin: usize, n_spins: usize) -> f64 {
    if bit(x, spin, n_spins) == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Bit of basis state `x` belonging to `spin` (1-based, spin 1 most significant).
pub fn bit(x: usize, spin: usize, n_spins: usize) -> usize {
    (x >> (n_spins - spin)) & 1
}
