//! Dense complex operators on up to three spin-1/2 particles.
//!
//! Basis states are `|x1 x2 x3>` with spin 1 the most significant bit and
//! bit value 0 the `m = +1/2` eigenstate of `I_z`. Every evolution uses the
//! `exp(-i theta G)` sign convention.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used for the unitary/hermitian flags.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Dense `dim x dim` complex matrix with `dim` in {2, 4, 8}.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator {
    m: DMatrix<C64>,
}

impl ComplexOperator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        check_dim(m.nrows())?;
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            m: DMatrix::identity(dim, dim),
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            m: DMatrix::zeros(dim, dim),
        })
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = DMatrix::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        Ok(Self { m })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = diag.iter().map(|&d| C64::new(d, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_spins(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.m[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { m: &self.m * factor }
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::from_matrix(self.m.kronecker(&other.m))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn nonzero_count(&self, tol: f64) -> usize {
        self.m.iter().filter(|z| z.norm() > tol).count()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|r| (0..n).all(|c| r == c || self.m[(r, c)].norm() <= tol))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = Self {
            m: self.m.adjoint() * &self.m,
        };
        let eye = Self {
            m: DMatrix::identity(self.dim(), self.dim()),
        };
        prod.max_abs_diff(&eye) <= tol
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self {
            m: &u.m * &self.m * u.m.adjoint(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self {
            m: &self.m * &other.m - &other.m * &self.m,
        }
    }
}

impl fmt::Display for ComplexOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.m[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        d => Err(Error::Dimension(d)),
    }
}

fn assert_same_dim(a: &ComplexOperator, b: &ComplexOperator) {
    assert_eq!(a.dim(), b.dim(), "operator dimension mismatch");
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        assert_same_dim(self, rhs);
        ComplexOperator { m: &self.m + &rhs.m }
    }
}

impl Add for ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        &self + &rhs
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        assert_same_dim(self, rhs);
        ComplexOperator { m: &self.m - &rhs.m }
    }
}

impl Sub for ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        &self - &rhs
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        assert_same_dim(self, rhs);
        ComplexOperator { m: &self.m * &rhs.m }
    }
}

impl Mul for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        &self * &rhs
    }
}

impl Mul<f64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: f64) -> ComplexOperator {
        ComplexOperator { m: &self.m * C64::new(rhs, 0.0) }
    }
}

impl Neg for &ComplexOperator {
    type Output = ComplexOperator;
    fn neg(self) -> ComplexOperator {
        ComplexOperator { m: -&self.m }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn half_pauli(axis: Axis) -> DMatrix<C64> {
    let z = C64::new(0.0, 0.0);
    let h = C64::new(0.5, 0.0);
    let ih = C64::new(0.0, 0.5);
    match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[z, h, h, z]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[z, -ih, ih, z]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[h, z, z, -h]),
    }
}

fn embed(single: &DMatrix<C64>, spin_index: usize, n_spins: usize) -> Result<ComplexOperator> {
    if !(1..=3).contains(&n_spins) {
        return Err(Error::SpinCount(n_spins));
    }
    if spin_index == 0 || spin_index > n_spins {
        return Err(Error::SpinIndex {
            index: spin_index,
            n_spins,
        });
    }
    let eye = DMatrix::<C64>::identity(2, 2);
    let mut acc: Option<DMatrix<C64>> = None;
    for k in 1..=n_spins {
        let factor = if k == spin_index { single } else { &eye };
        acc = Some(match acc {
            None => factor.clone(),
            Some(a) => a.kronecker(factor),
        });
    }
    ComplexOperator::from_matrix(acc.expect("n_spins >= 1"))
}

/// Single-spin angular momentum component `I_{i,axis}` on `n_spins` spins.
pub fn spin_operator(axis: Axis, spin_index: usize, n_spins: usize) -> Result<ComplexOperator> {
    embed(&half_pauli(axis), spin_index, n_spins)
}

/// `sum_i I_{i,axis}`.
pub fn total_spin(axis: Axis, n_spins: usize) -> Result<ComplexOperator> {
    if !(1..=3).contains(&n_spins) {
        return Err(Error::SpinCount(n_spins));
    }
    let mut acc = ComplexOperator::zeros(1 << n_spins)?;
    for i in 1..=n_spins {
        acc = &acc + &spin_operator(axis, i, n_spins)?;
    }
    Ok(acc)
}

/// `I_+ = sum_i (I_ix + i I_iy)`.
pub fn total_raising(n_spins: usize) -> Result<ComplexOperator> {
    let x = total_spin(Axis::X, n_spins)?;
    let y = total_spin(Axis::Y, n_spins)?;
    Ok(&x + &y.scale(C64::new(0.0, 1.0)))
}

/// Bilinear product operator `2 I_iz I_jz`.
pub fn zz_coupling(i: usize, j: usize, n_spins: usize) -> Result<ComplexOperator> {
    let a = spin_operator(Axis::Z, i, n_spins)?;
    let b = spin_operator(Axis::Z, j, n_spins)?;
    Ok(&(&a * &b) * 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseMatch {
    pub equal: bool,
    /// Phase `phi` in (-pi, pi] such that `A ~ e^{i phi} B`.
    pub phase: f64,
    /// `max |A - e^{i phi} B|`.
    pub deviation: f64,
}

/// Tests `A = e^{i phi} B` with `phi` taken from the largest-modulus entry of `B`.
pub fn equal_up_to_global_phase(
    a: &ComplexOperator,
    b: &ComplexOperator,
    tol: f64,
) -> Result<PhaseMatch> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (k, bk) = b
        .m
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty operator");
    if bk.norm() <= tol {
        return Err(Error::ZeroReference);
    }
    let ak = a.m.iter().nth(k).copied().expect("same shape");
    let phase = canonical_phase(ak.arg() - bk.arg());
    let rotated = b.scale(C64::from_polar(1.0, phase));
    let deviation = a.max_abs_diff(&rotated);
    Ok(PhaseMatch {
        equal: deviation <= tol,
        phase,
        deviation,
    })
}

/// Maps an angle into (-pi, pi].
pub fn canonical_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI + 1e-15 {
        p += 2.0 * PI;
    }
    p
}

/// `exp(-i t D)` for diagonal hermitian `D`.
pub fn unitary_exp_diagonal(d: &ComplexOperator, t: f64) -> Result<ComplexOperator> {
    if !d.is_diagonal(0.0) {
        return Err(Error::NotDiagonal);
    }
    if !d.is_hermitian(STRUCTURE_TOL) {
        return Err(Error::NotHermitian);
    }
    let diag: Vec<C64> = d
        .diagonal()
        .iter()
        .map(|e| C64::from_polar(1.0, -t * e.re))
        .collect();
    ComplexOperator::from_diagonal(&diag)
}

/// `exp(-i t H)` for hermitian `H`, by eigendecomposition.
pub fn general_unitary_exp(h: &ComplexOperator, t: f64) -> Result<ComplexOperator> {
    if !h.is_hermitian(STRUCTURE_TOL) {
        return Err(Error::NotHermitian);
    }
    // Symmetrize so round-off in the input cannot leak into the eigensolver.
    let herm = (&h.m + h.m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let n = h.dim();
    let mut phases = DMatrix::<C64>::zeros(n, n);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        phases[(i, i)] = C64::from_polar(1.0, -t * lambda);
    }
    let q = &eig.eigenvectors;
    ComplexOperator::from_matrix(q * phases * q.adjoint())
}

/// Rotation `exp(-i angle sum_{i in spins} I_{i,axis})`.
pub fn rotation(axis: Axis, spins: &[usize], angle: f64, n_spins: usize) -> Result<ComplexOperator> {
    if !(1..=3).contains(&n_spins) {
        return Err(Error::SpinCount(n_spins));
    }
    let mut gen = ComplexOperator::zeros(1 << n_spins)?;
    for &s in spins {
        gen = &gen + &spin_operator(axis, s, n_spins)?;
    }
    general_unitary_exp(&gen, angle)
}

/// Hard pi/2 pulse about y on every spin, standing in for the Hadamard.
pub fn pseudo_hadamard(n_spins: usize) -> Result<ComplexOperator> {
    let spins: Vec<usize> = (1..=n_spins).collect();
    rotation(Axis::Y, &spins, PI / 2.0, n_spins)
}

/// Total z quantum number of basis state `x` (sum of +-1/2).
pub fn magnetic_number(x: usize, n_spins: usize) -> f64 {
    (0..n_spins)
        .map(|k| if (x >> k) & 1 == 0 { 0.5 } else { -0.5 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn spin_operator_single_spin_z() {
        let iz = spin_operator(Axis::Z, 1, 1).unwrap();
        assert_eq!(iz.diagonal(), vec![c(0.5), c(-0.5)]);
        assert!(iz.is_diagonal(0.0));
    }

    #[test]
    fn spin_operator_second_of_two() {
        let iz = spin_operator(Axis::Z, 2, 2).unwrap();
        assert_eq!(iz.diagonal(), vec![c(0.5), c(-0.5), c(0.5), c(-0.5)]);
    }

    #[test]
    fn spin_operator_x_squared_trace() {
        let ix = spin_operator(Axis::X, 1, 3).unwrap();
        let t = (&ix * &ix).trace();
        assert!((t - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_operator_rejects_bad_index() {
        assert!(matches!(
            spin_operator(Axis::Z, 4, 3),
            Err(Error::SpinIndex { index: 4, n_spins: 3 })
        ));
        assert!(spin_operator(Axis::Z, 0, 2).is_err());
        assert!(matches!(spin_operator(Axis::Z, 1, 4), Err(Error::SpinCount(4))));
    }

    #[test]
    fn spin_operators_have_half_integer_spectrum() {
        for n in 1..=3 {
            for i in 1..=n {
                for axis in [Axis::X, Axis::Y, Axis::Z] {
                    let op = spin_operator(axis, i, n).unwrap();
                    assert!(op.is_hermitian(1e-15));
                    assert!(op.trace().norm() < 1e-15);
                    let eig = op.matrix().clone().symmetric_eigen();
                    let plus = eig.eigenvalues.iter().filter(|&&v| (v - 0.5).abs() < 1e-12).count();
                    let minus = eig.eigenvalues.iter().filter(|&&v| (v + 0.5).abs() < 1e-12).count();
                    assert_eq!((plus, minus), (1 << (n - 1), 1 << (n - 1)));
                }
            }
        }
    }

    #[test]
    fn angular_momentum_commutation() {
        let i = C64::new(0.0, 1.0);
        for s in 1..=3 {
            let x = spin_operator(Axis::X, s, 3).unwrap();
            let y = spin_operator(Axis::Y, s, 3).unwrap();
            let z = spin_operator(Axis::Z, s, 3).unwrap();
            assert!(x.commutator(&y).max_abs_diff(&z.scale(i)) < 1e-12);
            for t in 1..=3 {
                if t == s {
                    continue;
                }
                for axis in [Axis::X, Axis::Y, Axis::Z] {
                    let other = spin_operator(axis, t, 3).unwrap();
                    assert_eq!(x.commutator(&other).max_abs(), 0.0);
                    assert_eq!(y.commutator(&other).max_abs(), 0.0);
                }
            }
        }
    }

    #[test]
    fn raising_single_spin() {
        let ip = total_raising(1).unwrap();
        let expected = ComplexOperator::from_matrix(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0), c(1.0), c(0.0), c(0.0)],
        ))
        .unwrap();
        assert!(ip.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn raising_three_spins() {
        let ip = total_raising(3).unwrap();
        assert!(ip.trace().norm() < 1e-15);
        assert_eq!(ip.nonzero_count(1e-12), 12);
        // Only elements raising the total z quantum number by one.
        for r in 0..8 {
            for col in 0..8 {
                if ip.get(r, col).norm() > 1e-12 {
                    let dm = magnetic_number(r, 3) - magnetic_number(col, 3);
                    assert!((dm - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    fn sample_unitary() -> ComplexOperator {
        let h = &total_spin(Axis::Y, 3).unwrap() + &zz_coupling(1, 2, 3).unwrap();
        general_unitary_exp(&h, 0.7).unwrap()
    }

    #[test]
    fn global_phase_minus_one() {
        let u = sample_unitary();
        let m = equal_up_to_global_phase(&u, &-&u, 1e-10).unwrap();
        assert!(m.equal);
        assert!((m.phase - PI).abs() < 1e-12);
    }

    #[test]
    fn relative_phase_is_not_global() {
        let u = ComplexOperator::identity(8).unwrap();
        let mut d = vec![1.0; 8];
        d[7] = -1.0;
        let v = ComplexOperator::from_real_diagonal(&d).unwrap();
        let m = equal_up_to_global_phase(&u, &(&u * &v), 1e-10).unwrap();
        assert!(!m.equal);
    }

    #[test]
    fn global_phase_errors() {
        let a = ComplexOperator::identity(4).unwrap();
        let b = ComplexOperator::identity(8).unwrap();
        assert!(matches!(
            equal_up_to_global_phase(&a, &b, 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
        let z = ComplexOperator::zeros(8).unwrap();
        assert!(matches!(
            equal_up_to_global_phase(&b, &z, 1e-10),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn diagonal_exponential_examples() {
        let iz = spin_operator(Axis::Z, 1, 1).unwrap();
        let u0 = unitary_exp_diagonal(&iz, 0.0).unwrap();
        assert!(u0.max_abs_diff(&ComplexOperator::identity(2).unwrap()) < 1e-15);

        let u = unitary_exp_diagonal(&iz, 2.0 * PI).unwrap();
        assert!(u.max_abs_diff(&(&ComplexOperator::identity(2).unwrap() * -1.0)) < 1e-12);

        let zz = zz_coupling(1, 2, 2).unwrap();
        let u = unitary_exp_diagonal(&zz, PI / 2.0).unwrap();
        let m = C64::from_polar(1.0, -PI / 4.0);
        let p = C64::from_polar(1.0, PI / 4.0);
        let expected = ComplexOperator::from_diagonal(&[m, p, p, m]).unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn diagonal_exponential_rejects_offdiagonal() {
        let ix = spin_operator(Axis::X, 1, 2).unwrap();
        assert!(matches!(unitary_exp_diagonal(&ix, 1.0), Err(Error::NotDiagonal)));
    }

    #[test]
    fn general_exponential_examples() {
        let y = total_spin(Axis::Y, 3).unwrap();
        let u0 = general_unitary_exp(&y, 0.0).unwrap();
        assert!(u0.max_abs_diff(&ComplexOperator::identity(8).unwrap()) < 1e-14);

        let half = general_unitary_exp(&y, PI / 2.0).unwrap();
        let full = general_unitary_exp(&y, PI).unwrap();
        assert!((&half * &half).max_abs_diff(&full) < 1e-12);

        let flip = rotation(Axis::Y, &[1], PI, 1).unwrap();
        // |0> -> |1> up to phase: column 0 has all weight in row 1.
        assert!(flip.get(0, 0).norm() < 1e-12);
        assert!((flip.get(1, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_exponential_rejects_nonhermitian() {
        let ip = total_raising(2).unwrap();
        assert!(matches!(general_unitary_exp(&ip, 1.0), Err(Error::NotHermitian)));
    }

    #[test]
    fn pseudo_hadamard_maps_z_to_x() {
        let h = pseudo_hadamard(3).unwrap();
        let z = total_spin(Axis::Z, 3).unwrap();
        let x = total_spin(Axis::X, 3).unwrap();
        assert!(z.conjugate_by(&h).max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn canonical_phase_range() {
        assert!((canonical_phase(-PI) - PI).abs() < 1e-15);
        assert!((canonical_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((canonical_phase(-PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    fn hermitian_strategy() -> impl Strategy<Value = ComplexOperator> {
        proptest::collection::vec(-2.0f64..2.0, 7).prop_map(|w| {
            let terms = [
                spin_operator(Axis::X, 1, 3).unwrap(),
                spin_operator(Axis::Y, 2, 3).unwrap(),
                spin_operator(Axis::Z, 3, 3).unwrap(),
                spin_operator(Axis::X, 3, 3).unwrap(),
                zz_coupling(1, 2, 3).unwrap(),
                zz_coupling(2, 3, 3).unwrap(),
                &spin_operator(Axis::Y, 1, 3).unwrap() * &spin_operator(Axis::X, 2, 3).unwrap(),
            ];
            let mut acc = ComplexOperator::zeros(8).unwrap();
            for (t, wi) in terms.iter().zip(w) {
                acc = &acc + &(t * wi);
            }
            // The last product is not hermitian on its own; symmetrize.
            let adj = acc.adjoint();
            &(&acc + &adj) * 0.5
        })
    }

    proptest! {
        #[test]
        fn exponentials_are_unitary(h in hermitian_strategy(), t in -20.0f64..20.0) {
            let u = general_unitary_exp(&h, t).unwrap();
            prop_assert!(u.is_unitary(1e-12));
        }

        #[test]
        fn diagonal_group_law(d in proptest::collection::vec(-50.0f64..50.0, 8),
                              a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let dop = ComplexOperator::from_real_diagonal(&d).unwrap();
            let ua = unitary_exp_diagonal(&dop, a).unwrap();
            let ub = unitary_exp_diagonal(&dop, b).unwrap();
            let uab = unitary_exp_diagonal(&dop, a + b).unwrap();
            prop_assert!(uab.is_unitary(1e-12));
            prop_assert!((&ua * &ub).max_abs_diff(&uab) < 1e-12);
        }

        #[test]
        fn global_phase_equivalence(h in hermitian_strategy(),
                                    p1 in -3.0f64..3.0, p2 in -3.0f64..3.0,
                                    eps in proptest::collection::vec(-1e-13f64..1e-13, 2)) {
            let u = general_unitary_exp(&h, 1.0).unwrap();
            let perturb = |op: &ComplexOperator, e: f64| {
                let mut m = op.matrix().clone();
                m[(0, 0)] += C64::new(e, 0.0);
                ComplexOperator::from_matrix(m).unwrap()
            };
            let v = perturb(&u.scale(C64::from_polar(1.0, p1)), eps[0]);
            let w = perturb(&v.scale(C64::from_polar(1.0, p2)), eps[1]);
            let tol = 1e-10;
            prop_assert!(equal_up_to_global_phase(&u, &u, tol).unwrap().equal);
            prop_assert!(equal_up_to_global_phase(&u, &v, tol).unwrap().equal);
            prop_assert!(equal_up_to_global_phase(&v, &u, tol).unwrap().equal);
            prop_assert!(equal_up_to_global_phase(&v, &w, tol).unwrap().equal);
            prop_assert!(equal_up_to_global_phase(&u, &w, tol).unwrap().equal);
        }
    }
}
