//! Timed realizations of the z-diagonal generators under the full
//! weak-coupling Hamiltonian.
//!
//! Each schedule is four equal free-evolution segments separated by
//! instantaneous pi pulses. A pi pulse on spin `i` flips the sign with which
//! its shift and couplings act in later segments, so choosing which spins are
//! flipped in which quarter keeps exactly one Hamiltonian term alive. Soft
//! pulses always address a single spin; anything wider is a hard pulse.

use std::fmt;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functions::N_BITS;
use crate::quantum::{rotation, Axis, ComplexOperator};
use crate::sequence::{Angle, Generator, GeneratorKind, OperatorSequence, Pair};
use crate::spin_system::SpinSystem;

pub const MAX_PULSES: usize = 4;
pub const MAX_SEGMENTS: usize = 4;

/// Axis order used by the generated schedules, in time order.
pub const CANCELLING_AXES: [PulseAxis; 4] =
    [PulseAxis::X, PulseAxis::MinusX, PulseAxis::MinusX, PulseAxis::X];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PulseTarget {
    /// Soft pulse on one spin (1-based).
    Spin(usize),
    /// Hard pulse on every spin.
    All,
}

impl PulseTarget {
    pub fn is_soft(self) -> bool {
        matches!(self, PulseTarget::Spin(_))
    }

    pub fn flips(self, spin: usize) -> bool {
        match self {
            PulseTarget::Spin(s) => s == spin,
            PulseTarget::All => true,
        }
    }

    fn spins(self) -> Vec<usize> {
        match self {
            PulseTarget::Spin(s) => vec![s],
            PulseTarget::All => (1..=N_BITS).collect(),
        }
    }
}

impl fmt::Display for PulseTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseTarget::Spin(s) => write!(f, "{s}"),
            PulseTarget::All => f.write_str("all"),
        }
    }
}

impl Serialize for PulseTarget {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PulseAxis {
    X,
    MinusX,
    Y,
    MinusY,
}

impl PulseAxis {
    fn axis_and_sign(self) -> (Axis, f64) {
        match self {
            PulseAxis::X => (Axis::X, 1.0),
            PulseAxis::MinusX => (Axis::X, -1.0),
            PulseAxis::Y => (Axis::Y, 1.0),
            PulseAxis::MinusY => (Axis::Y, -1.0),
        }
    }
}

impl fmt::Display for PulseAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseAxis::X => "+x",
            PulseAxis::MinusX => "-x",
            PulseAxis::Y => "+y",
            PulseAxis::MinusY => "-y",
        })
    }
}

impl Serialize for PulseAxis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PiPulse {
    /// Seconds from the start of the schedule.
    pub time: f64,
    /// Number of segments elapsed when the pulse fires.
    pub boundary: usize,
    pub target: PulseTarget,
    pub axis: PulseAxis,
    /// Relative flip-angle error; the pulse rotates by `pi (1 + flip_error)`.
    pub flip_error: f64,
}

impl PiPulse {
    pub fn unitary(&self) -> ComplexOperator {
        let (axis, sign) = self.axis.axis_and_sign();
        let angle = sign * std::f64::consts::PI * (1.0 + self.flip_error);
        rotation(axis, &self.target.spins(), angle, N_BITS).expect("three spins")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PulseSchedule {
    realizes: Generator,
    /// The angle actually evolved, `realizes.angle()` shifted by a multiple
    /// of 2 pi so the duration is positive. Stored in units of pi.
    #[serde(serialize_with = "ratio_string")]
    evolved_over_pi: Ratio<i64>,
    duration_s: f64,
    segments: Vec<f64>,
    pulses: Vec<PiPulse>,
}

fn ratio_string<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl PulseSchedule {
    /// Checks the structural limits: at most four segments and pulses, pulses
    /// at segment boundaries and in time order.
    pub fn new(realizes: Generator, evolved_over_pi: Ratio<i64>, segments: Vec<f64>, pulses: Vec<PiPulse>) -> Result<Self> {
        if segments.len() > MAX_SEGMENTS || pulses.len() > MAX_PULSES {
            return Err(Error::InvalidSystem(format!(
                "schedule has {} segments and {} pulses (limit {MAX_SEGMENTS}/{MAX_PULSES})",
                segments.len(),
                pulses.len()
            )));
        }
        if segments.iter().any(|&dt| !(dt >= 0.0 && dt.is_finite())) {
            return Err(Error::InvalidSystem("segment durations must be finite and >= 0".into()));
        }
        if pulses.windows(2).any(|w| w[0].boundary > w[1].boundary)
            || pulses.iter().any(|p| p.boundary > segments.len())
        {
            return Err(Error::InvalidSystem("pulses must sit at ordered segment boundaries".into()));
        }
        if let Some(p) = pulses
            .iter()
            .find(|p| matches!(p.target, PulseTarget::Spin(s) if !(1..=N_BITS).contains(&s)))
        {
            return Err(Error::SpinIndex {
                index: match p.target {
                    PulseTarget::Spin(s) => s,
                    PulseTarget::All => 0,
                },
                n_spins: N_BITS,
            });
        }
        let duration_s = segments.iter().sum();
        Ok(Self {
            realizes,
            evolved_over_pi,
            duration_s,
            segments,
            pulses,
        })
    }

    pub fn realizes(&self) -> Generator {
        self.realizes
    }

    pub fn evolved_angle_over_pi(&self) -> Ratio<i64> {
        self.evolved_over_pi
    }

    pub fn duration(&self) -> f64 {
        self.duration_s
    }

    pub fn segments(&self) -> &[f64] {
        &self.segments
    }

    pub fn pulses(&self) -> &[PiPulse] {
        &self.pulses
    }

    /// Reassigns pulse axes in time order.
    pub fn with_axes(mut self, axes: &[PulseAxis]) -> Self {
        for (p, &a) in self.pulses.iter_mut().zip(axes) {
            p.axis = a;
        }
        self
    }

    pub fn with_flip_error(mut self, eps: f64) -> Self {
        for p in &mut self.pulses {
            p.flip_error = eps;
        }
        self
    }

    pub fn sign_matrix(&self) -> SignMatrix {
        let mut current = [1i8; N_BITS];
        let mut signs = Vec::with_capacity(self.segments.len());
        let mut pulses = self.pulses.iter().peekable();
        for seg in 0..self.segments.len() {
            while let Some(p) = pulses.next_if(|p| p.boundary == seg) {
                flip(&mut current, p.target);
            }
            signs.push(current);
        }
        for p in pulses {
            flip(&mut current, p.target);
        }
        SignMatrix {
            signs,
            final_orientation: current,
        }
    }

    /// One event per line: `segment dt=<s>` and
    /// `t=<s> pulse soft|hard spin=<i|all> axis=<+x|-x|+y|-y>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} duration={}", self.realizes, self.duration_s);
        let mut pulses = self.pulses.iter().peekable();
        let emit = |out: &mut String, p: &PiPulse| {
            let kind = if p.target.is_soft() { "soft" } else { "hard" };
            let _ = write!(out, "t={} pulse {kind} spin={} axis={}", p.time, p.target, p.axis);
            if p.flip_error != 0.0 {
                let _ = write!(out, " flip_error={}", p.flip_error);
            }
            out.push('\n');
        };
        for (seg, dt) in self.segments.iter().enumerate() {
            while let Some(p) = pulses.next_if(|p| p.boundary == seg) {
                emit(&mut out, p);
            }
            let _ = writeln!(out, "segment dt={dt}");
        }
        for p in pulses {
            emit(&mut out, p);
        }
        out
    }
}

fn flip(orientation: &mut [i8; N_BITS], target: PulseTarget) {
    for (k, o) in orientation.iter_mut().enumerate() {
        if target.flips(k + 1) {
            *o = -*o;
        }
    }
}

/// Orientation `a_i = +-1` of each spin during each segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    signs: Vec<[i8; N_BITS]>,
    final_orientation: [i8; N_BITS],
}

impl SignMatrix {
    pub fn segment(&self, seg: usize) -> [i8; N_BITS] {
        self.signs[seg]
    }

    /// Orientation of `spin` (1-based) over all segments.
    pub fn spin(&self, spin: usize) -> Vec<i8> {
        self.signs.iter().map(|s| s[spin - 1]).collect()
    }

    /// Every spin has been flipped an even number of times by the end.
    pub fn restored(&self) -> bool {
        self.final_orientation.iter().all(|&o| o == 1)
    }

    /// Exact integrals in units of one segment, for equal-length segments:
    /// (per spin, per pair in order 12, 23, 13).
    pub fn segment_integrals(&self) -> ([i32; N_BITS], [i32; 3]) {
        let spin = std::array::from_fn(|k| self.signs.iter().map(|s| s[k] as i32).sum());
        let pair = Pair::ALL.map(|p| {
            let (i, j) = p.spins();
            self.signs.iter().map(|s| (s[i - 1] * s[j - 1]) as i32).sum()
        });
        (spin, pair)
    }
}

/// Toggling-frame integrals in seconds: `sum a_i dt` per spin and
/// `sum a_i a_j dt` per pair (order 12, 23, 13).
pub fn sign_accumulation(sched: &PulseSchedule) -> ([f64; N_BITS], [f64; 3]) {
    let m = sched.sign_matrix();
    let spin = std::array::from_fn(|k| {
        sched
            .segments
            .iter()
            .enumerate()
            .map(|(seg, dt)| m.signs[seg][k] as f64 * dt)
            .sum()
    });
    let pair = Pair::ALL.map(|p| {
        let (i, j) = p.spins();
        sched
            .segments
            .iter()
            .enumerate()
            .map(|(seg, dt)| (m.signs[seg][i - 1] * m.signs[seg][j - 1]) as f64 * dt)
            .sum()
    });
    (spin, pair)
}

fn require_three_spins(sys: &SpinSystem) -> Result<()> {
    if sys.n_spins() != N_BITS {
        return Err(Error::InvalidSystem(format!(
            "refocusing needs a {N_BITS}-spin system, got {}",
            sys.n_spins()
        )));
    }
    Ok(())
}

/// Shifts `theta` (units of pi, in (-1, 1]) by a multiple of 2 so that it
/// has the sign of `rate`, giving the smallest positive duration.
fn normalize(theta: Ratio<i64>, rate: f64) -> Ratio<i64> {
    let two = Ratio::from_integer(2);
    let zero = Ratio::from_integer(0);
    if rate > 0.0 && theta < zero {
        theta + two
    } else if rate < 0.0 && theta > zero {
        theta - two
    } else {
        theta
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn four_quarter_schedule(
    realizes: Generator,
    evolved: Ratio<i64>,
    duration: f64,
    targets: [PulseTarget; 4],
) -> PulseSchedule {
    let dt = duration / 4.0;
    let pulses = targets
        .iter()
        .zip(CANCELLING_AXES)
        .enumerate()
        .map(|(k, (&target, axis))| PiPulse {
            time: duration * (k + 1) as f64 / 4.0,
            boundary: k + 1,
            target,
            axis,
            flip_error: 0.0,
        })
        .collect();
    PulseSchedule::new(realizes, evolved, vec![dt; 4], pulses).expect("fixed layout is valid")
}

/// `exp(-i theta I_iz)` by chemical-shift evolution. The lower-numbered
/// spectator is flipped at T/4 and 3T/4, the other at T/2 and T.
pub fn schedule_z(spin: usize, theta: Angle, sys: &SpinSystem) -> Result<PulseSchedule> {
    require_three_spins(sys)?;
    let realizes = Generator::z(spin, theta).ok_or_else(|| {
        if theta.is_zero() {
            Error::Parse("zero rotation angle".into())
        } else {
            Error::SpinIndex {
                index: spin,
                n_spins: N_BITS,
            }
        }
    })?;
    let shift = sys.shift(spin);
    if shift == 0.0 {
        return Err(Error::ZeroShift(spin));
    }
    let evolved = normalize(theta.over_pi(), shift);
    // theta pi / (2 pi shift)
    let duration = ratio_f64(evolved) / (2.0 * shift);
    let others: Vec<usize> = (1..=N_BITS).filter(|&s| s != spin).collect();
    let (a, b) = (PulseTarget::Spin(others[0]), PulseTarget::Spin(others[1]));
    Ok(four_quarter_schedule(realizes, evolved, duration, [a, b, a, b]))
}

/// `exp(-i theta 2 I_iz I_jz)` by coupling evolution: the spectator is
/// flipped at T/4 and 3T/4, hard pulses at T/2 and T remove the shifts.
pub fn schedule_j(pair: Pair, theta: Angle, sys: &SpinSystem) -> Result<PulseSchedule> {
    require_three_spins(sys)?;
    let realizes =
        Generator::coupling(pair, theta).ok_or_else(|| Error::Parse("zero coupling angle".into()))?;
    let (i, j) = pair.spins();
    let coupling = sys.coupling(i, j);
    if coupling == 0.0 {
        return Err(Error::ZeroCoupling(i, j));
    }
    let evolved = normalize(theta.over_pi(), coupling);
    // theta pi / (pi J)
    let duration = ratio_f64(evolved) / coupling;
    let spectator = PulseTarget::Spin(pair.spectator());
    Ok(four_quarter_schedule(
        realizes,
        evolved,
        duration,
        [spectator, PulseTarget::All, spectator, PulseTarget::All],
    ))
}

pub fn schedule_generator(g: Generator, sys: &SpinSystem) -> Result<PulseSchedule> {
    match g.kind() {
        GeneratorKind::ZRot(s) => schedule_z(s, g.angle(), sys),
        GeneratorKind::Coupling(p) => schedule_j(p, g.angle(), sys),
    }
}

/// Piecewise propagator: free evolution over each segment with the pulses
/// applied at the segment boundaries.
pub fn simulate_schedule(sched: &PulseSchedule, sys: &SpinSystem) -> Result<ComplexOperator> {
    require_three_spins(sys)?;
    let mut u = ComplexOperator::identity(1 << N_BITS)?;
    let mut pulses = sched.pulses.iter().peekable();
    for (seg, &dt) in sched.segments.iter().enumerate() {
        while let Some(p) = pulses.next_if(|p| p.boundary == seg) {
            u = &p.unitary() * &u;
        }
        u = &sys.free_propagator(dt)? * &u;
    }
    for p in pulses {
        u = &p.unitary() * &u;
    }
    Ok(u)
}

/// Rewrites the sequence into an equivalent one (up to global phase) with
/// the shortest coupling evolutions, then orders it z-rotations first and
/// couplings last.
///
/// `J_ij(theta)` and `J_ij(theta - pi) I_iz(pi) I_jz(pi)` agree up to a
/// global phase, so each coupling angle is moved into the half-turn window
/// on the same side as `J_ij`; the compensating pi rotations are merged into
/// the z-rotations.
pub fn rewrite_for_duration(seq: &OperatorSequence, sys: &SpinSystem) -> Result<OperatorSequence> {
    require_three_spins(sys)?;
    let mut z: Vec<Generator> = Vec::new();
    let mut extra = [Ratio::from_integer(0i64); N_BITS];
    let mut couplings: Vec<Generator> = Vec::new();
    for g in seq.generators() {
        match g.kind() {
            GeneratorKind::ZRot(_) => z.push(*g),
            GeneratorKind::Coupling(p) => {
                let (i, j) = p.spins();
                let jij = sys.coupling(i, j);
                let theta = g.angle().over_pi();
                let zero = Ratio::from_integer(0);
                let one = Ratio::from_integer(1);
                let shifted = if jij > 0.0 && theta < zero {
                    Some(theta + one)
                } else if jij < 0.0 && theta > zero {
                    Some(theta - one)
                } else {
                    None
                };
                match shifted {
                    Some(t) => {
                        extra[i - 1] += one;
                        extra[j - 1] += one;
                        if let Some(g) = Generator::coupling(p, Angle::from_over_pi(t)) {
                            couplings.push(g);
                        }
                    }
                    None => couplings.push(*g),
                }
            }
        }
    }
    for (k, e) in extra.iter().enumerate() {
        if *e.numer() == 0 {
            continue;
        }
        let spin = k + 1;
        let add = Angle::from_over_pi(*e);
        match z.iter().position(|g| g.kind() == GeneratorKind::ZRot(spin)) {
            Some(pos) => {
                let merged = z[pos].angle() + add;
                match Generator::z(spin, merged) {
                    Some(g) => z[pos] = g,
                    None => {
                        z.remove(pos);
                    }
                }
            }
            None => z.extend(Generator::z(spin, add)),
        }
    }
    z.extend(couplings);
    let out = OperatorSequence::new(z);
    Ok(match seq.label() {
        Some(f) => out.with_label(f),
        None => out,
    })
}

/// One schedule per generator of the rewritten sequence; z-rotation
/// schedules first, the last schedule is a coupling whenever one exists.
pub fn compile_sequence(seq: &OperatorSequence, sys: &SpinSystem) -> Result<Vec<PulseSchedule>> {
    rewrite_for_duration(seq, sys)?
        .generators()
        .iter()
        .map(|&g| schedule_generator(g, sys))
        .collect()
}

pub fn total_duration(schedules: &[PulseSchedule]) -> f64 {
    schedules.iter().map(|s| s.duration()).sum()
}

/// Product of the simulated schedules, first schedule applied first.
pub fn simulate_compiled(schedules: &[PulseSchedule], sys: &SpinSystem) -> Result<ComplexOperator> {
    let mut u = ComplexOperator::identity(1 << N_BITS)?;
    for s in schedules {
        u = &simulate_schedule(s, sys)? * &u;
    }
    Ok(u)
}
