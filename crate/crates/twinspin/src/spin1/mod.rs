//! Spin-1 observables, frames and the correlated-pair statistics.
//!
//! A frame is an ordered orthonormal triple of spatial axes (a proper
//! rotation of the standard axes). Measuring the squared spin components
//! along a frame is equivalent to measuring the single operator
//! K = Jx² − Jy², whose eigenbasis κ₁, κ₂, κ₃ consists of the frame axes
//! read as real state vectors in the Cartesian basis |x⟩, |y⟩, |z⟩.

mod dirset;
mod ks;
mod possibility;

pub use ks::{ks_satisfiable, KsOutcome, TriplesSet, DIRECTION_TOLERANCE};
pub use possibility::{possibility_relation, PossibilityAnalysis, PossibilityRelation};

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{projector, DensityOperator, Operator, StateVector};
use crate::measure::{joint_probability, JointDistribution};
use crate::tol;

/// A spatial direction: a real unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    v: [f64; 3],
}

impl Direction {
    /// Wrap a unit vector (‖v‖ = 1 within the spectral tolerance).
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::SPECTRAL {
            return Err(Error::InvalidDirection { norm });
        }
        Ok(Self { v })
    }

    /// Rescale an arbitrary nonzero vector to unit length.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm <= tol::NEGLIGIBLE {
            return Err(Error::InvalidDirection { norm });
        }
        Ok(Self {
            v: [v[0] / norm, v[1] / norm, v[2] / norm],
        })
    }

    pub fn components(&self) -> [f64; 3] {
        self.v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// The direction read as a real state vector in the Cartesian basis.
    pub fn as_state(&self) -> StateVector {
        StateVector::new(vec![3], self.v.iter().map(|&x| C64::new(x, 0.0)).collect())
            .expect("unit 3-vector is a valid state")
    }
}

/// An ordered orthonormal triple of axes with determinant +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    rows: [[f64; 3]; 3],
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl Frame {
    /// Validate an orthonormal right-handed triple of rows.
    pub fn new(rows: [[f64; 3]; 3]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidFrame(format!("row {i} has non-finite entries")));
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > tol::SPECTRAL {
                return Err(Error::InvalidFrame(format!(
                    "row {i} has norm {norm}, expected 1"
                )));
            }
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                if dot.abs() > tol::SPECTRAL {
                    return Err(Error::InvalidFrame(format!(
                        "rows {i} and {j} are not orthogonal (dot = {dot:.3e})"
                    )));
                }
            }
        }
        let det = det3(&rows);
        if (det - 1.0).abs() > tol::SPECTRAL {
            return Err(Error::InvalidFrame(format!(
                "determinant {det} instead of +1 (left-handed or degenerate axes)"
            )));
        }
        Ok(Self { rows })
    }

    /// Normalize each row to unit length, then validate.
    pub fn from_unnormalized(rows: [[f64; 3]; 3]) -> Result<Self> {
        let mut normalized = rows;
        for (i, row) in normalized.iter_mut().enumerate() {
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidFrame(format!("row {i} has non-finite entries")));
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= tol::NEGLIGIBLE {
                return Err(Error::InvalidFrame(format!("row {i} is (numerically) zero")));
            }
            for x in row.iter_mut() {
                *x /= norm;
            }
        }
        Self::new(normalized)
    }

    /// The standard axes.
    pub fn identity() -> Self {
        Self {
            rows: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Parse a row-major frame specification: nine decimal numbers, rows
    /// separated by `;`, components separated by `,` or whitespace.
    /// Rows are normalized on load, so `0.7071`-style approximations of
    /// 1/√2 are accepted.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let groups: Vec<&str> = spec.split(';').collect();
        let numbers: Vec<Vec<f64>> = groups
            .iter()
            .map(|group| {
                group
                    .split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|tok| !tok.is_empty())
                    .map(|tok| {
                        tok.parse::<f64>().map_err(|e| Error::Parse {
                            line: 1,
                            message: format!("bad number {tok:?}: {e}"),
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let flat: Vec<f64> = numbers.iter().flatten().copied().collect();
        if groups.len() != 3 || numbers.iter().any(|row| row.len() != 3) {
            if flat.len() == 9 && groups.len() == 1 {
                // allow a flat 9-number list without semicolons
                return Self::from_unnormalized([
                    [flat[0], flat[1], flat[2]],
                    [flat[3], flat[4], flat[5]],
                    [flat[6], flat[7], flat[8]],
                ]);
            }
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "expected three rows of three numbers, found {} rows with {:?} numbers",
                    groups.len(),
                    numbers.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            });
        }
        Self::from_unnormalized([
            [numbers[0][0], numbers[0][1], numbers[0][2]],
            [numbers[1][0], numbers[1][1], numbers[1][2]],
            [numbers[2][0], numbers[2][1], numbers[2][2]],
        ])
    }

    /// A rotation drawn uniformly from SO(3).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // uniform unit quaternion (Shoemake's method)
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let tau = std::f64::consts::TAU;
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let (qx, qy) = (a * (tau * u2).sin(), a * (tau * u2).cos());
        let (qz, qw) = (b * (tau * u3).sin(), b * (tau * u3).cos());
        let rows = [
            [
                1.0 - 2.0 * (qy * qy + qz * qz),
                2.0 * (qx * qy - qz * qw),
                2.0 * (qx * qz + qy * qw),
            ],
            [
                2.0 * (qx * qy + qz * qw),
                1.0 - 2.0 * (qx * qx + qz * qz),
                2.0 * (qy * qz - qx * qw),
            ],
            [
                2.0 * (qx * qz - qy * qw),
                2.0 * (qy * qz + qx * qw),
                1.0 - 2.0 * (qx * qx + qy * qy),
            ],
        ];
        Self::new(rows).expect("quaternion rotation is orthonormal")
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.rows
    }

    pub fn axis(&self, index: usize) -> Direction {
        Direction::new(self.rows[index]).expect("frame rows are unit vectors")
    }

    /// Which axis of the frame the direction coincides with (up to sign),
    /// or `None` when it is not an axis. Squared-spin measurements do not
    /// distinguish w from −w.
    pub fn axis_index(&self, w: &Direction) -> Option<usize> {
        (0..3).find(|&i| (self.axis(i).dot(w).abs() - 1.0).abs() <= tol::SPECTRAL)
    }
}

/// The spin-1 matrices in the Cartesian basis: (J_a)_bc = −i ε_abc.
///
/// They satisfy [J_a, J_b] = i ε_abc J_c and Jx² + Jy² + Jz² = 2·I, and each
/// J_a² = I − |a⟩⟨a| has spectrum {0, 1, 1}.
pub fn spin_operators() -> [Operator; 3] {
    let mut ops = Vec::with_capacity(3);
    for a in 0..3usize {
        let op = Operator::from_fn(vec![3], |row, col| {
            // Levi-Civita ε_{a,row,col}
            let eps = match (a, row, col) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            };
            C64::new(0.0, -eps)
        })
        .expect("3×3 matrix");
        ops.push(op);
    }
    [ops[0].clone(), ops[1].clone(), ops[2].clone()]
}

/// Spin component along a direction: J_w = w·(Jx, Jy, Jz).
pub fn spin_along(w: &Direction) -> Operator {
    let [jx, jy, jz] = spin_operators();
    let [wx, wy, wz] = w.components();
    jx.scale(C64::new(wx, 0.0))
        .add(&jy.scale(C64::new(wy, 0.0)))
        .expect("same register")
        .add(&jz.scale(C64::new(wz, 0.0)))
        .expect("same register")
}

/// The frame observable K = Jx² − Jy² built from the frame's first two
/// axes. Its eigenvalues are {−1, +1, 0} with eigenvectors κ₁, κ₂, κ₃
/// equal to [`frame_basis`].
pub fn k_operator(frame: &Frame) -> Operator {
    let jx = spin_along(&frame.axis(0));
    let jy = spin_along(&frame.axis(1));
    let jx2 = jx.matmul(&jx).expect("same register");
    let jy2 = jy.matmul(&jy).expect("same register");
    jx2.sub(&jy2).expect("same register")
}

/// Recover the three squared spin components from K:
/// Jx² = I − (K²−K)/2, Jy² = I − (K²+K)/2, Jz² = K².
pub fn squares_from_k(k: &Operator) -> Result<[Operator; 3]> {
    k.ensure_hermitian()?;
    let eye = Operator::identity(k.dims().to_vec());
    let k2 = k.matmul(k)?;
    let half = C64::new(0.5, 0.0);
    let jx2 = eye.sub(&k2.sub(k)?.scale(half))?;
    let jy2 = eye.sub(&k2.add(k)?.scale(half))?;
    Ok([jx2, jy2, k2])
}

/// Squared spin values (Jx², Jy², Jz²) determined by a K eigenvalue.
pub fn squares_from_k_value(k: i8) -> [u8; 3] {
    let k = k as f64;
    let k2 = k * k;
    [
        (1.0 - (k2 - k) / 2.0) as u8,
        (1.0 - (k2 + k) / 2.0) as u8,
        k2 as u8,
    ]
}

/// K eigenvalue associated with the κ index of the frame basis.
pub fn k_value_of_index(index: usize) -> i8 {
    match index {
        0 => -1,
        1 => 1,
        _ => 0,
    }
}

/// The κ basis of a frame: κ_i = Σ_j R_ij |j⟩ with real coefficients.
pub fn frame_basis(frame: &Frame) -> [StateVector; 3] {
    [
        frame.axis(0).as_state(),
        frame.axis(1).as_state(),
        frame.axis(2).as_state(),
    ]
}

/// The maximally correlated two-qutrit state (|11⟩+|22⟩+|33⟩)/√3 in the
/// standard basis. Its amplitude vector is the same in every rotated
/// product basis κ⊗κ.
pub fn upsilon() -> StateVector {
    let inv = C64::new(1.0 / 3.0_f64.sqrt(), 0.0);
    let mut amps = vec![C64::ZERO; 9];
    for k in 0..3 {
        amps[k * 3 + k] = inv;
    }
    StateVector::new(vec![3, 3], amps).expect("nine amplitudes")
}

/// Joint outcome table for K-measurements of the correlated pair:
/// entry (j, k) is (1/3)|⟨κ_j^A|κ_k^B⟩|². Rows and columns each sum to 1/3.
pub fn ck_table(frame_a: &Frame, frame_b: &Frame) -> JointDistribution {
    let a = frame_a.rows();
    let b = frame_b.rows();
    let mut probs = vec![0.0; 9];
    for (j, row_a) in a.iter().enumerate() {
        for (k, row_b) in b.iter().enumerate() {
            let dot: f64 = row_a.iter().zip(row_b).map(|(x, y)| x * y).sum();
            probs[j * 3 + k] = dot * dot / 3.0;
        }
    }
    JointDistribution::new(3, 3, probs).expect("overlap table is a distribution")
}

/// Joint table of squared-spin outcomes (J_v², J_w²) ∈ {0,1}² for the
/// correlated pair; the J² = 0 eigenprojector of a direction is |v⟩⟨v|.
pub fn spin_squared_table(v: &Direction, w: &Direction) -> Result<JointDistribution> {
    let psi = upsilon();
    let pv0 = projector(&v.as_state())?;
    let pw0 = projector(&w.as_state())?;
    let eye = Operator::identity(vec![3]);
    let pv1 = eye.sub(&pv0)?;
    let pw1 = eye.sub(&pw0)?;
    let probs = vec![
        joint_probability(&psi, &pv0, &pw0)?,
        joint_probability(&psi, &pv0, &pw1)?,
        joint_probability(&psi, &pv1, &pw0)?,
        joint_probability(&psi, &pv1, &pw1)?,
    ];
    JointDistribution::new(2, 2, probs)
}

/// Outcome statistics of repeated equal-frame K-measurements on the
/// correlated pair, sampled from the exact joint distribution.
#[derive(Debug, Clone)]
pub struct TwinReport {
    pub trials: u64,
    /// Counts over joint κ-index outcomes (party A row, party B column).
    pub outcome_counts: [[u64; 3]; 3],
    /// Joint outcomes with different κ indices for the two parties.
    pub discordant: u64,
    /// Drawn outcomes whose induced (Jx², Jy², Jz²) triple is not a
    /// permutation of (1, 0, 1).
    pub spin_violations: u64,
    /// Empirical frequency of each K eigenvalue (indexed by κ).
    pub value_frequencies: [f64; 3],
}

/// Sample `trials` joint outcomes of K^F ⊗ K^F on the correlated pair from
/// the exact distribution and report concordance and squared-spin
/// statistics.
pub fn twin_check(frame: &Frame, trials: u64, seed: u64) -> Result<TwinReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let table = ck_table(frame, frame);
    let mut cumulative = Vec::with_capacity(9);
    let mut acc = 0.0;
    for &p in table.entries() {
        acc += p;
        cumulative.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome_counts = [[0u64; 3]; 3];
    let mut discordant = 0;
    let mut spin_violations = 0;
    for _ in 0..trials {
        let u: f64 = rng.random();
        let cell = cumulative.partition_point(|&c| c <= u).min(8);
        let (j, k) = (cell / 3, cell % 3);
        outcome_counts[j][k] += 1;
        if j != k {
            discordant += 1;
        }
        for index in [j, k] {
            let triple = squares_from_k_value(k_value_of_index(index));
            let mut sorted = triple;
            sorted.sort_unstable();
            if sorted != [0, 1, 1] {
                spin_violations += 1;
            }
        }
    }
    let mut value_frequencies = [0.0; 3];
    for (j, row) in outcome_counts.iter().enumerate() {
        value_frequencies[j] = row.iter().sum::<u64>() as f64 / trials as f64;
    }
    Ok(TwinReport {
        trials,
        outcome_counts,
        discordant,
        spin_violations,
        value_frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primed_frame() -> Frame {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        Frame::new([[0.0, 1.0, 0.0], [inv, 0.0, inv], [inv, 0.0, -inv]]).unwrap()
    }

    #[test]
    fn spin_operators_satisfy_su2_algebra() {
        let [jx, jy, jz] = spin_operators();
        // Casimir: Jx² + Jy² + Jz² = 2·I
        let casimir = jx
            .matmul(&jx)
            .unwrap()
            .add(&jy.matmul(&jy).unwrap())
            .unwrap()
            .add(&jz.matmul(&jz).unwrap())
            .unwrap();
        let two_eye = Operator::identity(vec![3]).scale(C64::new(2.0, 0.0));
        assert!(casimir.frobenius_distance(&two_eye) < 1e-12);

        // [Jx, Jy] = i Jz and cyclic
        let pairs = [(&jx, &jy, &jz), (&jy, &jz, &jx), (&jz, &jx, &jy)];
        for (a, b, c) in pairs {
            let commutator = a.matmul(b).unwrap().sub(&b.matmul(a).unwrap()).unwrap();
            let expected = c.scale(C64::new(0.0, 1.0));
            assert!(commutator.frobenius_distance(&expected) < 1e-12);
        }

        // each J_w² has spectrum {0, 1, 1}
        for j in [&jx, &jy, &jz] {
            let sq = j.matmul(j).unwrap();
            let vals = sq.hermitian_eigenvalues().unwrap();
            assert!(vals[0].abs() < 1e-12);
            assert!((vals[1] - 1.0).abs() < 1e-12);
            assert!((vals[2] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k_operator_in_standard_frame_is_diagonal() {
        let k = k_operator(&Frame::identity());
        let expected = [-1.0, 1.0, 0.0];
        for row in 0..3 {
            for col in 0..3 {
                let want = if row == col { expected[row] } else { 0.0 };
                assert!((k.entry(row, col) - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn k_operator_eigenvectors_match_frame_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let frame = Frame::random(&mut rng);
            let k = k_operator(&frame);
            let vals = k.hermitian_eigenvalues().unwrap();
            assert!((vals[0] + 1.0).abs() < 1e-9);
            assert!(vals[1].abs() < 1e-9);
            assert!((vals[2] - 1.0).abs() < 1e-9);

            let basis = frame_basis(&frame);
            for (index, kappa) in basis.iter().enumerate() {
                let expected = k_value_of_index(index) as f64;
                let image = k.apply(kappa).unwrap();
                let scaled: Vec<C64> =
                    kappa.amps().iter().map(|a| a * C64::new(expected, 0.0)).collect();
                let diff: f64 = image
                    .amps()
                    .iter()
                    .zip(&scaled)
                    .map(|(a, b)| (a - b).norm())
                    .sum();
                assert!(diff < 1e-9, "K κ_{index} ≠ {expected} κ_{index}");
            }
        }
    }

    #[test]
    fn squares_from_k_reproduce_axis_projector_complements() {
        let k = k_operator(&Frame::identity());
        let [jx2, jy2, jz2] = squares_from_k(&k).unwrap();
        let diag = |v: [f64; 3]| {
            Operator::from_fn(vec![3], |r, c| {
                if r == c {
                    C64::new(v[r], 0.0)
                } else {
                    C64::ZERO
                }
            })
            .unwrap()
        };
        assert!(jx2.frobenius_distance(&diag([0.0, 1.0, 1.0])) < 1e-12);
        assert!(jy2.frobenius_distance(&diag([1.0, 0.0, 1.0])) < 1e-12);
        assert!(jz2.frobenius_distance(&diag([1.0, 1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn squares_from_k_match_rotated_spin_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let frame = Frame::random(&mut rng);
            let k = k_operator(&frame);
            let squares = squares_from_k(&k).unwrap();
            for (i, sq) in squares.iter().enumerate() {
                let j = spin_along(&frame.axis(i));
                let direct = j.matmul(&j).unwrap();
                assert!(sq.frobenius_distance(&direct) < 1e-9);

                let vals = sq.hermitian_eigenvalues().unwrap();
                assert!(vals[0].abs() < 1e-9);
                assert!((vals[2] - 1.0).abs() < 1e-9);
            }
            // the three squares commute
            for a in 0..3 {
                for b in (a + 1)..3 {
                    let ab = squares[a].matmul(&squares[b]).unwrap();
                    let ba = squares[b].matmul(&squares[a]).unwrap();
                    assert!(ab.frobenius_distance(&ba) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn frame_basis_of_identity_is_standard() {
        let basis = frame_basis(&Frame::identity());
        for (i, v) in basis.iter().enumerate() {
            let expected = StateVector::basis(vec![3], &[i]).unwrap();
            assert!((v.inner(&expected).unwrap().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correlated_state_is_frame_invariant() {
        let psi = upsilon();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let frame = Frame::random(&mut rng);
            let basis = frame_basis(&frame);
            // amplitudes of Υ in the rotated product basis κ_j ⊗ κ_k
            let inv = 1.0 / 3.0_f64.sqrt();
            let mut max_dev = 0.0_f64;
            for j in 0..3 {
                for k in 0..3 {
                    let amp = basis[j].tensor(&basis[k]).inner(&psi).unwrap();
                    let expected = if j == k { inv } else { 0.0 };
                    // global sign is not observable
                    let dev = (amp.re.abs() - expected).abs().max(amp.im.abs());
                    max_dev = max_dev.max(dev);
                }
            }
            assert!(max_dev < 1e-9);
        }
    }

    #[test]
    fn upsilon_reduces_to_maximally_mixed() {
        let rho = DensityOperator::from_pure(&upsilon()).unwrap();
        let reduced = rho.partial_trace(&[0]).unwrap();
        let mixed = DensityOperator::maximally_mixed(vec![3]);
        assert!(reduced.operator().frobenius_distance(mixed.operator()) < 1e-12);
    }

    #[test]
    fn ck_table_reproduces_reference_values() {
        let table = ck_table(&Frame::identity(), &primed_frame());
        let third = 1.0 / 3.0;
        let expected = [
            [0.0, 0.5 * third, 0.5 * third],
            [third, 0.0, 0.0],
            [0.0, 0.5 * third, 0.5 * third],
        ];
        for j in 0..3 {
            for k in 0..3 {
                assert!((table.get(j, k) - expected[j][k]).abs() < 1e-15);
            }
        }

        let same = ck_table(&Frame::identity(), &Frame::identity());
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { third } else { 0.0 };
                assert!((same.get(j, k) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ck_table_rows_and_columns_sum_to_third() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let fa = Frame::random(&mut rng);
            let fb = Frame::random(&mut rng);
            let table = ck_table(&fa, &fb);
            for sum in table.row_sums().into_iter().chain(table.col_sums()) {
                assert!((sum - 1.0 / 3.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ck_table_agrees_with_q_matrix_of_frame_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let fa = Frame::random(&mut rng);
            let fb = Frame::random(&mut rng);
            let table = ck_table(&fa, &fb);
            let q = crate::measure::q_matrix(
                &upsilon(),
                &frame_basis(&fa),
                &frame_basis(&fb),
            )
            .unwrap();
            for j in 0..3 {
                for k in 0..3 {
                    assert!((table.get(j, k) - q.get(j, k)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn twin_check_sees_no_discordance_and_uniform_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let frame = Frame::random(&mut rng);
        let trials = 10_000;
        let report = twin_check(&frame, trials, 4242).unwrap();
        assert_eq!(report.discordant, 0);
        assert_eq!(report.spin_violations, 0);
        // each K value has frequency 1/3 ± 5σ, σ = √(p(1−p)/n)
        let sigma = (2.0 / 9.0 / trials as f64).sqrt();
        for f in report.value_frequencies {
            assert!((f - 1.0 / 3.0).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn squared_spin_triples_are_spin_axiom_compatible() {
        for (index, expected) in [(0, [0, 1, 1]), (1, [1, 0, 1]), (2, [1, 1, 0])] {
            assert_eq!(squares_from_k_value(k_value_of_index(index)), expected);
        }
    }

    #[test]
    fn frame_validation_rejects_bad_triples() {
        // left-handed
        assert!(matches!(
            Frame::new([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
            Err(Error::InvalidFrame(_))
        ));
        // non-orthogonal
        assert!(Frame::from_unnormalized([
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 0.0, 1.0]
        ])
        .is_err());
        // zero row
        assert!(Frame::from_unnormalized([
            [0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0]
        ])
        .is_err());
    }

    #[test]
    fn frame_spec_parsing_accepts_decimal_approximations() {
        let frame = Frame::parse_spec("0,1,0; .7071,0,.7071; .7071,0,-.7071").unwrap();
        let expected = primed_frame();
        for i in 0..3 {
            for j in 0..3 {
                assert!((frame.rows()[i][j] - expected.rows()[i][j]).abs() < 1e-4);
            }
        }
        // whitespace-separated and flat forms
        assert!(Frame::parse_spec("1 0 0; 0 1 0; 0 0 1").is_ok());
        assert!(Frame::parse_spec("1,0,0,0,1,0,0,0,1").is_ok());
        // malformed
        assert!(Frame::parse_spec("").is_err());
        assert!(Frame::parse_spec("1,0,0; 0,1,0").is_err());
        assert!(Frame::parse_spec("a,b,c; d,e,f; g,h,i").is_err());
        assert!(Frame::parse_spec("1,0,0; 0,1,0; 0,1,0").is_err());
    }

    #[test]
    fn axis_index_matches_up_to_sign() {
        let frame = primed_frame();
        for i in 0..3 {
            let w = frame.axis(i);
            assert_eq!(frame.axis_index(&w), Some(i));
            let [x, y, z] = w.components();
            let flipped = Direction::new([-x, -y, -z]).unwrap();
            assert_eq!(frame.axis_index(&flipped), Some(i));
        }
        let diag = Direction::normalized([1.0, 1.0, 1.0]).unwrap();
        assert_eq!(frame.axis_index(&diag), None);
    }
}
