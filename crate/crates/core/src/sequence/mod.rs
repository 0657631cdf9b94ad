//! Sequences of the z-diagonal generators the weak-coupling Hamiltonian can
//! realize: single-spin z-rotations `I_iz(theta) = exp(-i theta I_iz)` and
//! couplings `J_ij(theta) = exp(-i theta 2 I_iz I_jz)`.
//!
//! Text form uses the I/S/R spin names: `Sz(pi) J12(pi/2) J23(pi/2) J13(pi/2)`.

mod synth;
mod table;
mod walsh;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{BinaryFunction, N_BITS, N_INPUTS};
use crate::quantum::{ComplexOperator, C64};
use crate::spin_system::magnetic;

pub use synth::{synthesize, synthesize_all_balanced};
pub use table::{
    canonical_listing, sequence_for, table_one, verify_entries, verify_table, EntryCheck, Erratum,
    TableReport, TableRow, ERRATA,
};
pub use walsh::{walsh, WalshCoefficients};

const SPIN_NAMES: [char; 3] = ['I', 'S', 'R'];

/// An angle stored exactly as a rational multiple of pi, canonical in (-pi, pi].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Angle(Ratio<i64>);

impl Angle {
    pub fn from_over_pi(r: Ratio<i64>) -> Self {
        let two = Ratio::from_integer(2);
        let mut r = r % two;
        if r <= -Ratio::from_integer(1) {
            r += two;
        } else if r > Ratio::from_integer(1) {
            r -= two;
        }
        Angle(r)
    }

    /// `num/den` half-turns, i.e. `num pi / den` radians.
    pub fn pi_fraction(num: i64, den: i64) -> Self {
        Self::from_over_pi(Ratio::new(num, den))
    }

    pub fn quarter_turns(k: i64) -> Self {
        Self::pi_fraction(k, 2)
    }

    pub fn over_pi(self) -> Ratio<i64> {
        self.0
    }

    pub fn radians(self) -> f64 {
        *self.0.numer() as f64 * std::f64::consts::PI / *self.0.denom() as f64
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// The angle as `"p/q"` (or `"p"`) in units of pi.
    pub fn over_pi_string(self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    /// Parses `"1/2"`, `"-1"`, `"0.25"` as a multiple of pi.
    pub fn parse_over_pi(s: &str) -> Result<Self> {
        parse_ratio(s).map(Self::from_over_pi)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::from_over_pi(-self.0)
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, other: Angle) -> Angle {
        Angle::from_over_pi(self.0 + other.0)
    }
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid multiple of pi '{s}'"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(Ratio::from_integer(n));
    }
    // Finite decimal such as 0.25 or -1.5.
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').ok_or_else(bad)?;
    if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let den = 10i64.pow(frac.len() as u32);
    let num = int * den + frac.parse::<i64>().map_err(|_| bad())?;
    Ok(Ratio::new(sign * num, den))
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        if n == 0 {
            return f.write_str("0");
        }
        let sign = if n < 0 { "-" } else { "" };
        let coeff = if n.abs() == 1 { String::new() } else { n.abs().to_string() };
        if d == 1 {
            write!(f, "{sign}{coeff}pi")
        } else {
            write!(f, "{sign}{coeff}pi/{d}")
        }
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts `pi`, `-pi/2`, `3pi/4`, `0`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            return Ok(Angle(Ratio::zero()));
        }
        let bad = || Error::Parse(format!("invalid angle '{s}'"));
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t),
        };
        let (coeff, rest) = body.split_once("pi").ok_or_else(bad)?;
        let num: i64 = if coeff.is_empty() { 1 } else { coeff.parse().map_err(|_| bad())? };
        let den: i64 = match rest.strip_prefix('/') {
            Some(d) => d.parse().map_err(|_| bad())?,
            None if rest.is_empty() => 1,
            None => return Err(bad()),
        };
        if den == 0 {
            return Err(bad());
        }
        Ok(Self::pi_fraction(sign * num, den))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pair {
    #[serde(rename = "12")]
    P12,
    #[serde(rename = "23")]
    P23,
    #[serde(rename = "13")]
    P13,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P23, Pair::P13];

    pub fn spins(self) -> (usize, usize) {
        match self {
            Pair::P12 => (1, 2),
            Pair::P23 => (2, 3),
            Pair::P13 => (1, 3),
        }
    }

    pub fn from_spins(i: usize, j: usize) -> Result<Self> {
        match (i.min(j), i.max(j)) {
            (1, 2) => Ok(Pair::P12),
            (2, 3) => Ok(Pair::P23),
            (1, 3) => Ok(Pair::P13),
            _ => Err(Error::Parse(format!("invalid spin pair ({i}, {j})"))),
        }
    }

    /// The spin not in the pair.
    pub fn spectator(self) -> usize {
        let (i, j) = self.spins();
        6 - i - j
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.spins();
        write!(f, "{i}{j}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// z-rotation of one spin (1-based).
    ZRot(usize),
    Coupling(Pair),
}

impl GeneratorKind {
    /// Eigenvalue of the generator (`I_iz` or `2 I_iz I_jz`) on basis state `x`.
    pub fn eigenvalue(self, x: usize) -> f64 {
        match self {
            GeneratorKind::ZRot(s) => magnetic(x, s, N_BITS),
            GeneratorKind::Coupling(p) => {
                let (i, j) = p.spins();
                2.0 * magnetic(x, i, N_BITS) * magnetic(x, j, N_BITS)
            }
        }
    }

    pub fn is_coupling(self) -> bool {
        matches!(self, GeneratorKind::Coupling(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GeneratorRecord", into = "GeneratorRecord")]
pub struct Generator {
    kind: GeneratorKind,
    angle: Angle,
}

impl Generator {
    /// `None` for a zero angle or an invalid spin index.
    pub fn new(kind: GeneratorKind, angle: Angle) -> Option<Self> {
        if angle.is_zero() {
            return None;
        }
        if let GeneratorKind::ZRot(s) = kind {
            if !(1..=N_BITS).contains(&s) {
                return None;
            }
        }
        Some(Self { kind, angle })
    }

    pub fn z(spin: usize, angle: Angle) -> Option<Self> {
        Self::new(GeneratorKind::ZRot(spin), angle)
    }

    pub fn coupling(pair: Pair, angle: Angle) -> Option<Self> {
        Self::new(GeneratorKind::Coupling(pair), angle)
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    /// Phase `-theta * g(x)` acquired by basis state `x`.
    pub fn phase(&self, x: usize) -> f64 {
        -self.angle.radians() * self.kind.eigenvalue(x)
    }

    pub fn unitary(&self) -> ComplexOperator {
        let d: Vec<C64> = (0..N_INPUTS).map(|x| C64::from_polar(1.0, self.phase(x))).collect();
        ComplexOperator::from_diagonal(&d).expect("dimension 8")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::ZRot(s) => write!(f, "{}z({})", SPIN_NAMES[s - 1], self.angle),
            GeneratorKind::Coupling(p) => write!(f, "J{}({})", p, self.angle),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("invalid generator '{s}'"));
        let (head, rest) = t.split_once('(').ok_or_else(bad)?;
        let arg = rest.strip_suffix(')').ok_or_else(bad)?;
        let angle: Angle = arg.parse()?;
        let kind = match head {
            "Iz" => GeneratorKind::ZRot(1),
            "Sz" => GeneratorKind::ZRot(2),
            "Rz" => GeneratorKind::ZRot(3),
            "J12" => GeneratorKind::Coupling(Pair::P12),
            "J23" => GeneratorKind::Coupling(Pair::P23),
            "J13" => GeneratorKind::Coupling(Pair::P13),
            _ => return Err(bad()),
        };
        Generator::new(kind, angle)
            .ok_or_else(|| Error::Parse(format!("zero-angle generator '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum GeneratorRecord {
    Zrot { spin: usize, angle_over_pi: String },
    Coupling { pair: Pair, angle_over_pi: String },
}

impl From<Generator> for GeneratorRecord {
    fn from(g: Generator) -> Self {
        let angle_over_pi = g.angle.over_pi_string();
        match g.kind {
            GeneratorKind::ZRot(spin) => GeneratorRecord::Zrot { spin, angle_over_pi },
            GeneratorKind::Coupling(pair) => GeneratorRecord::Coupling { pair, angle_over_pi },
        }
    }
}

impl TryFrom<GeneratorRecord> for Generator {
    type Error = Error;

    fn try_from(r: GeneratorRecord) -> Result<Self> {
        let (kind, a) = match r {
            GeneratorRecord::Zrot { spin, angle_over_pi } => (GeneratorKind::ZRot(spin), angle_over_pi),
            GeneratorRecord::Coupling { pair, angle_over_pi } => (GeneratorKind::Coupling(pair), angle_over_pi),
        };
        let angle = Angle::parse_over_pi(&a)?;
        Generator::new(kind, angle)
            .ok_or_else(|| Error::Parse("zero angle or invalid spin in generator".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionType {
    I,
    II,
    III,
    IV,
}

impl FunctionType {
    pub fn from_coupling_count(n: usize) -> Option<Self> {
        match n {
            0 => Some(FunctionType::I),
            1 => Some(FunctionType::II),
            2 => Some(FunctionType::III),
            3 => Some(FunctionType::IV),
            _ => None,
        }
    }

    pub fn coupling_count(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FunctionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionType::I => "I",
            FunctionType::II => "II",
            FunctionType::III => "III",
            FunctionType::IV => "IV",
        })
    }
}

/// Ordered list of commuting z-diagonal generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSequence {
    #[serde(default, with = "label_serde")]
    label: Option<BinaryFunction>,
    generators: Vec<Generator>,
}

mod label_serde {
    use super::BinaryFunction;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BinaryFunction>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(f) => s.serialize_some(&f.hex_index()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BinaryFunction>, D::Error> {
        Ok(Option::<u8>::deserialize(d)?.map(BinaryFunction::from_byte))
    }
}

impl OperatorSequence {
    pub fn new(generators: Vec<Generator>) -> Self {
        Self {
            label: None,
            generators,
        }
    }

    pub fn with_label(mut self, f: BinaryFunction) -> Self {
        self.label = Some(f);
        self
    }

    pub fn label(&self) -> Option<BinaryFunction> {
        self.label
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of distinct coupling pairs present.
    pub fn coupling_count(&self) -> usize {
        Pair::ALL
            .iter()
            .filter(|&&p| self.generators.iter().any(|g| g.kind == GeneratorKind::Coupling(p)))
            .count()
    }

    /// Diagonal phases `sum_g -theta_g g(x)` for each basis state.
    pub fn phases(&self) -> [f64; N_INPUTS] {
        std::array::from_fn(|x| self.generators.iter().map(|g| g.phase(x)).sum())
    }

    pub fn to_unitary(&self) -> ComplexOperator {
        let mut u = ComplexOperator::identity(N_INPUTS).expect("dimension 8");
        for g in &self.generators {
            u = &g.unitary() * &u;
        }
        u
    }
}

/// Product of `exp(-i theta G)` over the sequence.
pub fn sequence_to_unitary(seq: &OperatorSequence) -> ComplexOperator {
    seq.to_unitary()
}

/// Type I..IV by number of distinct couplings.
pub fn classify_type(seq: &OperatorSequence) -> FunctionType {
    FunctionType::from_coupling_count(seq.coupling_count()).expect("at most three pairs")
}

impl fmt::Display for OperatorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for OperatorSequence {
    type Err = Error;

    /// Whitespace-separated generators; `1` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Self::default());
        }
        let generators = t
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Generator>>>()?;
        Ok(Self::new(generators))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::equal_up_to_global_phase;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn angle_canonical_range() {
        assert_eq!(Angle::pi_fraction(3, 2), Angle::pi_fraction(-1, 2));
        assert_eq!(Angle::pi_fraction(-1, 1), Angle::pi_fraction(1, 1));
        assert_eq!(Angle::pi_fraction(5, 2), Angle::pi_fraction(1, 2));
        assert!(Angle::pi_fraction(4, 1).is_zero());
        assert_eq!(Angle::pi_fraction(-1, 1).to_string(), "pi");
        assert_eq!(Angle::pi_fraction(3, 2).to_string(), "-pi/2");
        assert_eq!(Angle::pi_fraction(3, 4).to_string(), "3pi/4");
        assert!((Angle::pi_fraction(-1, 2).radians() + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn angle_parsing() {
        assert_eq!("pi".parse::<Angle>().unwrap(), Angle::pi_fraction(1, 1));
        assert_eq!("-pi/2".parse::<Angle>().unwrap(), Angle::pi_fraction(-1, 2));
        assert_eq!("3pi/4".parse::<Angle>().unwrap(), Angle::pi_fraction(3, 4));
        assert!("pi/0".parse::<Angle>().is_err());
        assert!("x".parse::<Angle>().is_err());
        assert_eq!(Angle::parse_over_pi("1/2").unwrap(), Angle::pi_fraction(1, 2));
        assert_eq!(Angle::parse_over_pi("0.5").unwrap(), Angle::pi_fraction(1, 2));
        assert_eq!(Angle::parse_over_pi("-1.5").unwrap(), Angle::pi_fraction(1, 2));
        assert_eq!(Angle::parse_over_pi("1").unwrap(), Angle::pi_fraction(1, 1));
        assert!(Angle::parse_over_pi("1/0").is_err());
        assert!(Angle::parse_over_pi("half").is_err());
    }

    #[test]
    fn zero_angle_generators_are_dropped() {
        assert!(Generator::z(1, Angle::pi_fraction(0, 1)).is_none());
        assert!(Generator::z(1, Angle::pi_fraction(2, 1)).is_none());
        assert!(Generator::z(4, Angle::pi_fraction(1, 1)).is_none());
        assert!("Iz(0)".parse::<Generator>().is_err());
    }

    #[test]
    fn text_form_round_trip() {
        let text = "Sz(pi) J12(pi/2) J23(pi/2) J13(pi/2)";
        let seq: OperatorSequence = text.parse().unwrap();
        assert_eq!(seq.len(), 4);
        assert_eq!(seq.to_string(), text);
        assert_eq!(OperatorSequence::default().to_string(), "1");
        assert!("Xz(pi)".parse::<OperatorSequence>().is_err());
        assert!("J12(pi/2".parse::<OperatorSequence>().is_err());
    }

    #[test]
    fn json_form() {
        let seq: OperatorSequence = "Sz(pi) J13(-pi/2)".parse().unwrap();
        let seq = seq.with_label(BinaryFunction::from_byte(0x17));
        let v = serde_json::to_value(&seq).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "label": 23,
                "generators": [
                    {"kind": "zrot", "spin": 2, "angle_over_pi": "1"},
                    {"kind": "coupling", "pair": "13", "angle_over_pi": "-1/2"}
                ]
            })
        );
        let back: OperatorSequence = serde_json::from_value(v).unwrap();
        assert_eq!(back, seq);
        let bad = serde_json::json!({"generators": [{"kind": "zrot", "spin": 2, "angle_over_pi": "0"}]});
        assert!(serde_json::from_value::<OperatorSequence>(bad).is_err());
    }

    #[test]
    fn empty_sequence_is_identity() {
        let u = OperatorSequence::default().to_unitary();
        assert_eq!(u, ComplexOperator::identity(8).unwrap());
    }

    #[test]
    fn single_z_matches_0f() {
        let seq: OperatorSequence = "Iz(pi)".parse().unwrap();
        let uf = BinaryFunction::from_byte(0x0F).u_f();
        assert!(equal_up_to_global_phase(&seq.to_unitary(), &uf, 1e-10).unwrap().equal);
    }

    #[test]
    fn four_generator_sequence_matches_4d_by_phase_accumulation() {
        let seq: OperatorSequence = "Sz(pi) J12(pi/2) J23(pi/2) J13(pi/2)".parse().unwrap();
        // Brute-force phase accumulation per basis state, independent of the
        // generator eigenvalue helper.
        let mut phases = [0.0f64; 8];
        for (x, ph) in phases.iter_mut().enumerate() {
            let s: Vec<f64> = (0..3).map(|k| if (x >> (2 - k)) & 1 == 0 { 1.0 } else { -1.0 }).collect();
            *ph -= PI * s[1] / 2.0;
            *ph -= (PI / 2.0) * s[0] * s[1] / 2.0;
            *ph -= (PI / 2.0) * s[1] * s[2] / 2.0;
            *ph -= (PI / 2.0) * s[0] * s[2] / 2.0;
        }
        let f = BinaryFunction::from_byte(0x4D);
        for x in 0..8 {
            let rel = C64::from_polar(1.0, phases[x] - phases[0]);
            let expected = if f.output(x) == 0 { 1.0 } else { -1.0 };
            assert!((rel - C64::new(expected, 0.0)).norm() < 1e-12, "x={x}");
        }
        let u = seq.to_unitary();
        assert!(equal_up_to_global_phase(&u, &f.u_f(), 1e-10).unwrap().equal);
    }

    #[test]
    fn classify_type_by_couplings() {
        let t = |s: &str| classify_type(&s.parse().unwrap());
        assert_eq!(t("Iz(pi)"), FunctionType::I);
        assert_eq!(t("Iz(pi) Sz(-pi/2) Rz(-pi/2) J23(pi/2)"), FunctionType::II);
        assert_eq!(t("Iz(pi/2) Rz(pi/2) J12(-pi/2) J23(pi/2)"), FunctionType::III);
        assert_eq!(t("Sz(pi) J12(pi/2) J23(pi/2) J13(-pi/2)"), FunctionType::IV);
        // Repeated pair counts once.
        assert_eq!(t("J12(pi/2) J12(pi/2)"), FunctionType::II);
    }

    fn generator_strategy() -> impl Strategy<Value = Generator> {
        (0usize..6, 1i64..8).prop_map(|(k, q)| {
            let kind = match k {
                0..=2 => GeneratorKind::ZRot(k + 1),
                3 => GeneratorKind::Coupling(Pair::P12),
                4 => GeneratorKind::Coupling(Pair::P23),
                _ => GeneratorKind::Coupling(Pair::P13),
            };
            Generator::new(kind, Angle::pi_fraction(q, 4)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn permutation_invariance(gens in proptest::collection::vec(generator_strategy(), 0..8),
                                  seed in any::<u64>()) {
            let mut shuffled = gens.clone();
            // Deterministic Fisher-Yates from the seed.
            let mut state = seed;
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            let a = OperatorSequence::new(gens).to_unitary();
            let b = OperatorSequence::new(shuffled).to_unitary();
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }

        #[test]
        fn text_round_trip(gens in proptest::collection::vec(generator_strategy(), 0..8)) {
            let seq = OperatorSequence::new(gens);
            let back: OperatorSequence = seq.to_string().parse().unwrap();
            prop_assert_eq!(back, seq);
        }
    }
}
