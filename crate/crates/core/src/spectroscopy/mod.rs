//! The simulated experiment: initial deviation state, pseudo-Hadamard, oracle,
//! and acquisition of the free induction decay.

mod acquisition;
mod lines;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{BinaryFunction, N_BITS};
use crate::quantum::{magnetic_number, pseudo_hadamard, spin_operator, Axis, ComplexOperator};
use crate::refocusing::{compile_sequence, simulate_compiled};
use crate::sequence::sequence_for;
use crate::spin_system::SpinSystem;

pub use acquisition::{fid, spectrum, transitions, Acquisition, Spectrum, Transition};
pub use lines::{
    analytic_line_amplitudes, classify_from_spectrum, extract_lines, round9, Line, LineList, Verdict,
};

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Thermal,
    Pure,
    Derived,
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Thermal => "thermal",
            StateKind::Pure => "pure",
            StateKind::Derived => "derived",
        })
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "thermal" => Ok(StateKind::Thermal),
            "pure" => Ok(StateKind::Pure),
            other => Err(Error::Parse(format!("unknown initial state '{other}'"))),
        }
    }
}

/// Traceless deviation density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationState {
    rho: ComplexOperator,
    kind: StateKind,
}

impl DeviationState {
    pub fn new(rho: ComplexOperator, kind: StateKind) -> Result<Self> {
        if !rho.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::NotHermitian);
        }
        Ok(Self { rho, kind })
    }

    pub fn rho(&self) -> &ComplexOperator {
        &self.rho
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn initial(kind: StateKind) -> Result<Self> {
        match kind {
            StateKind::Thermal => Ok(rho_thermal()),
            StateKind::Pure => Ok(rho_pure()),
            StateKind::Derived => Err(Error::Parse("a derived state has no preset".into())),
        }
    }
}

fn iz(spin: usize) -> ComplexOperator {
    spin_operator(Axis::Z, spin, N_BITS).expect("three spins")
}

/// `I1z + I2z + I3z`.
pub fn rho_thermal() -> DeviationState {
    let rho = &(&iz(1) + &iz(2)) + &iz(3);
    DeviationState::new(rho, StateKind::Thermal).expect("hermitian")
}

/// Bilinear and trilinear terms added to the thermal state for the
/// effective pure state `|000><000|`.
pub fn delta_rho() -> ComplexOperator {
    let (a, b, c) = (iz(1), iz(2), iz(3));
    let two = |x: &ComplexOperator, y: &ComplexOperator| &(x * y) * 2.0;
    let tri = &(&(&a * &b) * &c) * 4.0;
    &(&(&two(&a, &b) + &two(&b, &c)) + &two(&a, &c)) + &tri
}

pub fn rho_pure() -> DeviationState {
    let rho = rho_thermal().rho + delta_rho();
    DeviationState::new(rho, StateKind::Pure).expect("hermitian")
}

/// How `U_f` is produced inside the protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    /// Product of the ideal generators of the function's sequence.
    Ideal,
    /// Piecewise simulation of the refocusing schedules under the Hamiltonian.
    Compiled,
    /// The diagonal `(-1)^f(x)` itself; defined for every function.
    Exact,
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realization::Ideal => "ideal",
            Realization::Compiled => "compiled",
            Realization::Exact => "exact",
        })
    }
}

impl FromStr for Realization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ideal" => Ok(Realization::Ideal),
            "compiled" => Ok(Realization::Compiled),
            "exact" => Ok(Realization::Exact),
            other => Err(Error::Parse(format!("unknown realization '{other}'"))),
        }
    }
}

pub fn oracle_unitary(f: BinaryFunction, sys: &SpinSystem, realization: Realization) -> Result<ComplexOperator> {
    match realization {
        Realization::Exact => Ok(f.u_f()),
        Realization::Ideal => Ok(sequence_for(f)?.to_unitary()),
        Realization::Compiled => {
            let schedules = compile_sequence(&sequence_for(f)?, sys)?;
            simulate_compiled(&schedules, sys)
        }
    }
}

/// `rho -> V rho V^dagger` with `V = U_f exp(-i pi/2 sum I_y)`. The second
/// Hadamard and the read pulse cancel, so acquisition follows directly.
pub fn run_protocol(
    f: BinaryFunction,
    state: &DeviationState,
    sys: &SpinSystem,
    realization: Realization,
) -> Result<DeviationState> {
    if state.rho.dim() != 1 << N_BITS {
        return Err(Error::DimensionMismatch {
            left: state.rho.dim(),
            right: 1 << N_BITS,
        });
    }
    let h = pseudo_hadamard(N_BITS)?;
    let v = &oracle_unitary(f, sys, realization)? * &h;
    let rho = state.rho.conjugate_by(&v);
    // Round-off from the products can leave ~1e-16 anti-hermitian parts.
    let rho = &(&rho + &rho.adjoint()) * 0.5;
    DeviationState::new(rho, StateKind::Derived)
}

/// Sum of `|rho_ab|^2` grouped by coherence order `p = M_a - M_b`, for every
/// `p` from `-n` to `n`.
pub fn coherence_order_decomposition(state: &DeviationState) -> BTreeMap<i32, f64> {
    let n = state.rho.n_spins();
    let mut out: BTreeMap<i32, f64> = (-(n as i32)..=n as i32).map(|p| (p, 0.0)).collect();
    let dim = state.rho.dim();
    for a in 0..dim {
        for b in 0..dim {
            let p = (magnetic_number(a, n) - magnetic_number(b, n)).round() as i32;
            *out.get_mut(&p).expect("order in range") += state.rho.get(a, b).norm_sqr();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{all_functions, distinct_oracles};
    use crate::quantum::total_spin;

    #[test]
    fn thermal_and_pure_states() {
        let th = rho_thermal();
        assert_eq!(th.rho().trace().norm(), 0.0);
        assert_eq!(*th.rho(), total_spin(Axis::Z, 3).unwrap());
        let p = rho_pure();
        assert_eq!(p.rho() - th.rho(), delta_rho());
        // m = (1/2, 1/2, 1/2): 3/2 + 3 * 2/4 + 4/8.
        assert!((p.rho().get(0, 0).re - 3.5).abs() < 1e-15);
        // The effective pure state is proportional to |000><000| plus identity.
        for x in 1..8 {
            assert!((p.rho().get(x, x).re + 0.5).abs() < 1e-15, "{x}");
        }
    }

    #[test]
    fn state_kind_parsing() {
        assert_eq!("Pure".parse::<StateKind>().unwrap(), StateKind::Pure);
        assert!("derived".parse::<StateKind>().is_err());
        assert_eq!("compiled".parse::<Realization>().unwrap(), Realization::Compiled);
        assert!("other".parse::<Realization>().is_err());
    }

    #[test]
    fn constant_function_gives_transverse_magnetization() {
        let sys = SpinSystem::alanine();
        let out = run_protocol(BinaryFunction::from_byte(0), &rho_thermal(), &sys, Realization::Ideal).unwrap();
        let ix = total_spin(Axis::X, 3).unwrap();
        assert!(out.rho().max_abs_diff(&ix) < 1e-12);
        let w = coherence_order_decomposition(&out);
        assert!(w[&0] < 1e-24);
        assert!((w[&1] + w[&-1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_and_compiled_agree_for_69() {
        let sys = SpinSystem::alanine();
        let f = BinaryFunction::from_byte(0x69);
        let a = run_protocol(f, &rho_thermal(), &sys, Realization::Ideal).unwrap();
        let b = run_protocol(f, &rho_thermal(), &sys, Realization::Compiled).unwrap();
        assert!(a.rho().max_abs_diff(b.rho()) < 1e-8);
    }

    #[test]
    fn non_promise_needs_exact_realization() {
        let sys = SpinSystem::alanine();
        let f = BinaryFunction::from_byte(0x01);
        assert!(run_protocol(f, &rho_thermal(), &sys, Realization::Ideal).is_err());
        assert!(run_protocol(f, &rho_thermal(), &sys, Realization::Exact).is_ok());
    }

    #[test]
    fn thermal_decomposition_is_zero_quantum() {
        let w = coherence_order_decomposition(&rho_thermal());
        // Diagonal M values: +-3/2 once, +-1/2 three times each.
        assert!((w[&0] - 6.0).abs() < 1e-12);
        assert!(w.iter().filter(|(p, _)| **p != 0).all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn hadamard_moves_thermal_to_single_quantum() {
        let h = pseudo_hadamard(3).unwrap();
        let rotated = DeviationState::new(rho_thermal().rho().conjugate_by(&h), StateKind::Derived).unwrap();
        let w = coherence_order_decomposition(&rotated);
        for (p, v) in &w {
            if p.abs() != 1 {
                assert!(*v < 1e-24, "p={p}: {v}");
            }
        }
    }

    #[test]
    fn hadamard_delta_rho_is_invisible() {
        // The bilinear terms land in orders 0 and +-2 only; the trilinear term
        // also reaches +-1, but through three-spin flips that I+ cannot read.
        let h = pseudo_hadamard(3).unwrap();
        let d = delta_rho().conjugate_by(&h);
        let d = DeviationState::new(&(&d + &d.adjoint()) * 0.5, StateKind::Derived).unwrap();
        let w = coherence_order_decomposition(&d);
        assert!(w[&2] > 0.1 && w[&3] > 0.1);
        let raising = crate::quantum::total_raising(3).unwrap();
        assert!((d.rho() * &raising).trace().norm() < 1e-12);
        let bilinear = &delta_rho() - &(&(&(&iz(1) * &iz(2)) * &iz(3)) * 4.0);
        let b = DeviationState::new(bilinear.conjugate_by(&h), StateKind::Derived).unwrap();
        let wb = coherence_order_decomposition(&b);
        assert!(wb[&1] < 1e-24 && wb[&-1] < 1e-24);
    }

    #[test]
    fn oracles_preserve_coherence_order() {
        let sys = SpinSystem::alanine();
        let h = pseudo_hadamard(3).unwrap();
        for kind in [StateKind::Thermal, StateKind::Pure] {
            let init = DeviationState::initial(kind).unwrap();
            let before = DeviationState::new(init.rho().conjugate_by(&h), StateKind::Derived).unwrap();
            let wb = coherence_order_decomposition(&before);
            for f in distinct_oracles() {
                let after = run_protocol(f, &init, &sys, Realization::Ideal).unwrap();
                let wa = coherence_order_decomposition(&after);
                for p in -3..=3 {
                    assert!((wa[&p] - wb[&p]).abs() < 1e-12, "{f} p={p}");
                }
            }
        }
    }

    #[test]
    fn protocol_conserves_hermiticity_and_trace() {
        let sys = SpinSystem::alanine();
        for f in all_functions().step_by(7) {
            for init in [rho_thermal(), rho_pure()] {
                let out = run_protocol(f, &init, &sys, Realization::Exact).unwrap();
                assert!(out.rho().is_hermitian(1e-12));
                assert!((out.rho().trace() - init.rho().trace()).norm() < 1e-12);
            }
        }
    }
}
