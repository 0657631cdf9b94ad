//! Exhaustive search for a shortest generator sequence realizing `U_f`.
//!
//! Every balanced oracle is reachable with angles in multiples of pi/2, so
//! the search runs over 4^6 assignments of `{0, pi/2, pi, 3pi/2}` to the six
//! generators. Phases are tracked exactly in units of pi/4.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{enumerate_balanced, BinaryFunction, FunctionClass, N_BITS, N_INPUTS};
use crate::sequence::{Angle, Generator, GeneratorKind, OperatorSequence, Pair};

const KINDS: [GeneratorKind; 6] = [
    GeneratorKind::ZRot(1),
    GeneratorKind::ZRot(2),
    GeneratorKind::ZRot(3),
    GeneratorKind::Coupling(Pair::P12),
    GeneratorKind::Coupling(Pair::P23),
    GeneratorKind::Coupling(Pair::P13),
];

fn s(x: usize, spin: usize) -> i32 {
    1 - 2 * ((x >> (N_BITS - spin)) & 1) as i32
}

/// Phase of `exp(-i (k pi/2) G)` on `|x>` in units of pi/4.
fn quarter_phase(kind: GeneratorKind, k: i32, x: usize) -> i32 {
    match kind {
        GeneratorKind::ZRot(i) => -k * s(x, i),
        GeneratorKind::Coupling(p) => {
            let (i, j) = p.spins();
            -k * s(x, i) * s(x, j)
        }
    }
}

fn realizes(codes: &[i32; 6], f: BinaryFunction) -> bool {
    let residue = |x: usize| -> i32 {
        let phase: i32 = KINDS
            .iter()
            .zip(codes)
            .map(|(&kind, &k)| quarter_phase(kind, k, x))
            .sum();
        (phase - 4 * f.output(x) as i32).rem_euclid(8)
    };
    let r0 = residue(0);
    (1..N_INPUTS).all(|x| residue(x) == r0)
}

/// Shortest sequence for a balanced `f`, ordered by (couplings used,
/// generators used, angle codes). Generators come out as z-rotations of
/// spins 1..3 followed by couplings 12, 23, 13.
pub fn synthesize(f: BinaryFunction) -> Result<OperatorSequence> {
    if f.classify() != FunctionClass::Balanced {
        return Err(Error::NotBalanced(f.to_string()));
    }
    type Key = (usize, usize, [i32; 6]);
    let mut best: Option<(Key, [i32; 6])> = None;
    for n in 0..4usize.pow(6) {
        let codes: [i32; 6] = std::array::from_fn(|k| ((n >> (2 * (5 - k))) & 3) as i32);
        if !realizes(&codes, f) {
            continue;
        }
        let couplings = codes[3..].iter().filter(|&&k| k != 0).count();
        let count = codes.iter().filter(|&&k| k != 0).count();
        let key = (couplings, count, codes);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, codes));
        }
    }
    let (_, codes) = best.ok_or_else(|| Error::SynthesisFailed(f.to_string()))?;
    let generators = KINDS
        .iter()
        .zip(codes)
        .filter_map(|(&kind, k)| Generator::new(kind, Angle::quarter_turns(k as i64)))
        .collect();
    Ok(OperatorSequence::new(generators).with_label(f))
}

/// Sequences for all 70 balanced functions, ascending by index.
pub fn synthesize_all_balanced() -> Result<Vec<OperatorSequence>> {
    enumerate_balanced().into_par_iter().map(synthesize).collect()
}
