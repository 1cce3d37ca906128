//! Measurement probabilities and the two-clock four-zone evolution.
//!
//! A bipartite state lives on a register with exactly two subsystems.
//! Party A is subsystem 0 and party B is subsystem 1. Measurements are
//! von Neumann superoperators ρ ↦ Σ_m P̂_m ρ P̂_m over a validated family
//! of orthogonal projectors; party measurements act as P̂_m ⊗ 1 or 1 ⊗ P̂_m.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{flatten, projector, DensityOperator, Operator, StateVector};
use crate::tol;

/// The two parties of a bipartite experiment; A is subsystem 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// Region of the two-local-clock plane relative to the measurement time τ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    I,
    II,
    III,
    IV,
}

/// Classify a point of the two-clock plane. Ties at t = τ fall on the
/// measured side: zone I needs both clocks strictly before τ.
pub fn zone_of(t1: f64, t2: f64, tau: f64) -> Zone {
    match (t1 < tau, t2 < tau) {
        (true, true) => Zone::I,
        (true, false) => Zone::II,
        (false, true) => Zone::III,
        (false, false) => Zone::IV,
    }
}

/// An ordered family of mutually orthogonal projectors summing to the
/// identity. Projectors of rank > 1 are allowed (incomplete measurement).
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    projectors: Vec<Operator>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<Operator>) -> Result<Self> {
        let first = projectors
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("no projectors".into()))?;
        let dims = first.dims().to_vec();
        let mut sum = Operator::zeros(dims.clone());
        for (m, p) in projectors.iter().enumerate() {
            if p.dims() != dims {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {m} lives on {:?}, expected {:?}",
                    p.dims(),
                    dims
                )));
            }
            p.ensure_hermitian()?;
            let idem = p.matmul(p)?.frobenius_distance(p);
            if idem > tol::ALGEBRAIC {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {m} is not idempotent (residual {idem:.3e})"
                )));
            }
            sum = sum.add(p)?;
        }
        for a in 0..projectors.len() {
            for b in (a + 1)..projectors.len() {
                let cross = projectors[a].matmul(&projectors[b])?;
                let overlap = cross.matrix().norm();
                if overlap > tol::ALGEBRAIC {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {a} and {b} overlap (‖P_a P_b‖ = {overlap:.3e})"
                    )));
                }
            }
        }
        let completeness = sum.frobenius_distance(&Operator::identity(dims));
        if completeness > tol::ALGEBRAIC {
            return Err(Error::InvalidMeasurement(format!(
                "projectors do not sum to the identity (residual {completeness:.3e})"
            )));
        }
        Ok(Self { projectors })
    }

    /// Rank-1 measurement from an orthonormal basis.
    pub fn from_basis(basis: &[StateVector]) -> Result<Self> {
        validate_orthonormal_basis(basis)?;
        let projectors = basis.iter().map(projector).collect::<Result<Vec<_>>>()?;
        Self::new(projectors)
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.projectors[0].dims()
    }
}

/// Check that `basis` is a complete orthonormal basis of its register.
pub fn validate_orthonormal_basis(basis: &[StateVector]) -> Result<()> {
    let first = basis
        .first()
        .ok_or_else(|| Error::InvalidMeasurement("empty basis".into()))?;
    let dim = first.total_dim();
    if basis.len() != dim {
        return Err(Error::InvalidMeasurement(format!(
            "{} vectors cannot span a dimension-{dim} space",
            basis.len()
        )));
    }
    for (i, v) in basis.iter().enumerate() {
        if v.dims() != first.dims() {
            return Err(Error::InvalidMeasurement(format!(
                "basis vector {i} lives on {:?}, expected {:?}",
                v.dims(),
                first.dims()
            )));
        }
        for (j, w) in basis.iter().enumerate() {
            let overlap = v.inner(w)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            if (overlap.re - expected).abs() > tol::ALGEBRAIC || overlap.im.abs() > tol::ALGEBRAIC
            {
                return Err(Error::InvalidMeasurement(format!(
                    "⟨{i}|{j}⟩ = {overlap} violates orthonormality"
                )));
            }
        }
    }
    Ok(())
}

/// A probability table over joint outcomes (rows: party A, columns: party B).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Validate a row-major table: entries ≥ −1e−12 (tiny negatives are
    /// clamped to zero) and total equal to 1 within the algebraic tolerance.
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != rows * cols {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a {rows}×{cols} table",
                probs.len()
            )));
        }
        let mut clamped = probs;
        for p in &mut clamped {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution("non-finite entry".into()));
            }
            if *p < -tol::NEGLIGIBLE {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {p:.3e}"
                )));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > tol::ALGEBRAIC {
            return Err(Error::InvalidDistribution(format!(
                "total probability {total} instead of 1"
            )));
        }
        Ok(Self {
            rows,
            cols,
            probs: clamped,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[row * self.cols + col]
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[f64] {
        &self.probs
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
            .collect()
    }
}

fn two_party_dims(psi: &StateVector) -> Result<(usize, usize)> {
    match psi.dims() {
        [a, b] => Ok((*a, *b)),
        other => Err(Error::DimensionMismatch(format!(
            "expected a two-party register, found dims {other:?}"
        ))),
    }
}

fn ensure_projector_on(p: &Operator, dim: usize, label: &str) -> Result<()> {
    if p.dims() != [dim] {
        return Err(Error::DimensionMismatch(format!(
            "projector for party {label} lives on {:?}, expected [{dim}]",
            p.dims()
        )));
    }
    p.ensure_hermitian()?;
    let idem = p.matmul(p)?.frobenius_distance(p);
    if idem > tol::ALGEBRAIC {
        return Err(Error::InvalidMeasurement(format!(
            "party {label} operator is not a projector (residual {idem:.3e})"
        )));
    }
    Ok(())
}

/// Joint outcome probability ⟨Ψ| P̂_a ⊗ P̂_b |Ψ⟩.
pub fn joint_probability(psi: &StateVector, pa: &Operator, pb: &Operator) -> Result<f64> {
    let (da, db) = two_party_dims(psi)?;
    ensure_projector_on(pa, da, "A")?;
    ensure_projector_on(pb, db, "B")?;
    let lifted = pa.tensor(pb);
    let value = psi.inner(&lifted.apply(psi)?)?;
    Ok(value.re.clamp(0.0, 1.0))
}

/// Marginal probability ⟨Ψ| P̂ ⊗ 1 |Ψ⟩ (party A) or ⟨Ψ| 1 ⊗ P̂ |Ψ⟩ (party B).
pub fn marginal_probability(psi: &StateVector, party: Party, p: &Operator) -> Result<f64> {
    let (da, db) = two_party_dims(psi)?;
    let lifted = match party {
        Party::A => {
            ensure_projector_on(p, da, "A")?;
            p.tensor(&Operator::identity(vec![db]))
        }
        Party::B => {
            ensure_projector_on(p, db, "B")?;
            Operator::identity(vec![da]).tensor(p)
        }
    };
    let value = psi.inner(&lifted.apply(psi)?)?;
    Ok(value.re.clamp(0.0, 1.0))
}

/// Conditional probability P_ab / P_a (given = A) or P_ab / P_b (given = B).
pub fn conditional_probability(
    psi: &StateVector,
    pa: &Operator,
    pb: &Operator,
    given: Party,
) -> Result<f64> {
    let joint = joint_probability(psi, pa, pb)?;
    let conditioning = marginal_probability(
        psi,
        given,
        match given {
            Party::A => pa,
            Party::B => pb,
        },
    )?;
    if conditioning <= tol::NEGLIGIBLE {
        return Err(Error::ZeroProbabilityCondition {
            probability: conditioning,
        });
    }
    Ok(joint / conditioning)
}

/// Von Neumann measurement map ρ ↦ Σ_m P̂_m ρ P̂_m.
pub fn vn_measure(rho: &DensityOperator, m: &ProjectiveMeasurement) -> Result<DensityOperator> {
    if rho.dims() != m.dims() {
        return Err(Error::DimensionMismatch(format!(
            "measurement on {:?} applied to state on {:?}",
            m.dims(),
            rho.dims()
        )));
    }
    let mut acc = Operator::zeros(rho.dims().to_vec());
    for p in m.projectors() {
        acc = acc.add(&p.matmul(rho.operator())?.matmul(p)?)?;
    }
    DensityOperator::new(acc)
}

/// Apply a single-party measurement to a bipartite state by lifting each
/// projector to P̂_m ⊗ 1 (party A) or 1 ⊗ P̂_m (party B).
pub fn party_measure(
    rho: &DensityOperator,
    party: Party,
    m: &ProjectiveMeasurement,
) -> Result<DensityOperator> {
    let (da, db) = match rho.dims() {
        [a, b] => (*a, *b),
        other => {
            return Err(Error::DimensionMismatch(format!(
                "expected a two-party register, found dims {other:?}"
            )))
        }
    };
    let expected = match party {
        Party::A => da,
        Party::B => db,
    };
    if m.dims() != [expected] {
        return Err(Error::DimensionMismatch(format!(
            "party {party:?} measurement lives on {:?}, expected [{expected}]",
            m.dims()
        )));
    }
    let lifted: Vec<Operator> = m
        .projectors()
        .iter()
        .map(|p| match party {
            Party::A => p.tensor(&Operator::identity(vec![db])),
            Party::B => Operator::identity(vec![da]).tensor(p),
        })
        .collect();
    vn_measure(rho, &ProjectiveMeasurement::new(lifted)?)
}

/// Density operator of the given zone: ρ_I = |Ψ⟩⟨Ψ|, ρ_II = M_B ρ,
/// ρ_III = M_A ρ, ρ_IV = M_A M_B ρ.
pub fn zone_state(
    psi: &StateVector,
    measurement_a: &ProjectiveMeasurement,
    measurement_b: &ProjectiveMeasurement,
    zone: Zone,
) -> Result<DensityOperator> {
    let rho = DensityOperator::from_pure(psi)?;
    match zone {
        Zone::I => Ok(rho),
        Zone::II => party_measure(&rho, Party::B, measurement_b),
        Zone::III => party_measure(&rho, Party::A, measurement_a),
        Zone::IV => {
            let after_b = party_measure(&rho, Party::B, measurement_b)?;
            party_measure(&after_b, Party::A, measurement_a)
        }
    }
}

/// Relative-state decomposition |Ψ⟩ = Σ_k α_k |a_k⟩|u_k⟩ with respect to the
/// chosen party's basis. Entry k is `None` when α_k vanishes (the relative
/// state is undefined and the term drops out of every sum). The phase of
/// each relative state is fixed by making its first nonzero amplitude real
/// and positive.
pub fn relative_states(
    psi: &StateVector,
    party: Party,
    basis: &[StateVector],
) -> Result<Vec<Option<(f64, StateVector)>>> {
    let (da, db) = two_party_dims(psi)?;
    let (own_dim, other_dim) = match party {
        Party::A => (da, db),
        Party::B => (db, da),
    };
    validate_orthonormal_basis(basis)?;
    if basis[0].dims() != [own_dim] {
        return Err(Error::DimensionMismatch(format!(
            "basis on {:?} for party factor of dimension {own_dim}",
            basis[0].dims()
        )));
    }

    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let mut contracted = vec![C64::ZERO; other_dim];
        for (other_index, slot) in contracted.iter_mut().enumerate() {
            let mut acc = C64::ZERO;
            for own_index in 0..own_dim {
                let digits = match party {
                    Party::A => [own_index, other_index],
                    Party::B => [other_index, own_index],
                };
                acc += b.amp(own_index).conj() * psi.amp(flatten(&digits, psi.dims()));
            }
            *slot = acc;
        }
        let weight = contracted.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if weight <= tol::NEGLIGIBLE {
            out.push(None);
            continue;
        }
        let mut amps: Vec<C64> = contracted.iter().map(|c| c / weight).collect();
        if let Some(first) = amps.iter().find(|c| c.norm() > tol::NEGLIGIBLE) {
            let phase = first.conj() / first.norm();
            for a in &mut amps {
                *a *= phase;
            }
        }
        out.push(Some((weight, StateVector::new(vec![other_dim], amps)?)));
    }
    Ok(out)
}

/// The joint outcome table q_kj = |⟨a_k ⊗ b_j|Ψ⟩|².
///
/// Besides the direct overlap, the table is recomputed from both
/// relative-state decompositions of |Ψ⟩ — q_kj = |α_k|²|⟨u_k|b_j⟩|² and
/// q_kj = |β_j|²|⟨a_k|v_j⟩|² — and the three routes must agree within the
/// algebraic tolerance.
pub fn q_matrix(
    psi: &StateVector,
    basis_a: &[StateVector],
    basis_b: &[StateVector],
) -> Result<JointDistribution> {
    let (da, db) = two_party_dims(psi)?;
    validate_orthonormal_basis(basis_a)?;
    validate_orthonormal_basis(basis_b)?;
    if basis_a[0].dims() != [da] || basis_b[0].dims() != [db] {
        return Err(Error::DimensionMismatch(
            "measurement bases do not match the party factors".into(),
        ));
    }

    let mut direct = vec![0.0; da * db];
    for (k, a) in basis_a.iter().enumerate() {
        for (j, b) in basis_b.iter().enumerate() {
            let overlap = a.tensor(b).inner(psi)?;
            direct[k * db + j] = overlap.norm_sqr();
        }
    }

    // Route via A's relative states: q_kj = α_k² |⟨u_k|b_j⟩|².
    let rel_a = relative_states(psi, Party::A, basis_a)?;
    // Route via B's relative states: q_kj = β_j² |⟨a_k|v_j⟩|².
    let rel_b = relative_states(psi, Party::B, basis_b)?;
    for k in 0..da {
        for j in 0..db {
            let via_a = match &rel_a[k] {
                Some((alpha, u)) => alpha * alpha * u.inner(&basis_b[j])?.norm_sqr(),
                None => 0.0,
            };
            let via_b = match &rel_b[j] {
                Some((beta, v)) => beta * beta * basis_a[k].inner(v)?.norm_sqr(),
                None => 0.0,
            };
            let q = direct[k * db + j];
            if (via_a - q).abs() > tol::ALGEBRAIC || (via_b - q).abs() > tol::ALGEBRAIC {
                return Err(Error::Internal(format!(
                    "joint table routes disagree at ({k},{j}): direct {q}, via A {via_a}, via B {via_b}"
                )));
            }
        }
    }

    JointDistribution::new(da, db, direct)
}
