//! Capacity formulas, lower bounds, optimal input states and the
//! superdense-coding classification.

use serde::Serialize;

use crate::decompose::{is_abelian_rep, is_irreducible, Decomposition};
use crate::error::{Error, Result};
use crate::linalg::{CVector, ONE};
use crate::states::{
    block_probabilities, entropy, reduced_left_from_rotated, shannon, DensityMatrix, ENTROPY_CUTOFF,
};

/// Capacity of every symmetric state: `log Σ_q d_R` bits.
pub fn capacity_symmetric(dec: &Decomposition) -> f64 {
    (dec.total_multiplicity() as f64).log2()
}

/// Largest capacity over all states: `log d_S` bits.
pub fn capacity_max(dec: &Decomposition) -> f64 {
    (dec.dim() as f64).log2()
}

/// `H({p_q}) + Σ_q p_q log(d_L d_R) − H(ρ)`. May be negative.
pub fn lower_bound_general(dec: &Decomposition, rho: &DensityMatrix) -> f64 {
    let p = block_probabilities(dec, rho);
    let weighted: f64 = p
        .iter()
        .zip(dec.blocks())
        .map(|(&pq, b)| pq * (b.extent() as f64).log2())
        .sum();
    shannon(&p) + weighted - entropy(rho)
}

/// `H({p_q}) + Σ_q p_q [H(ρ_q^{s_L}) + log d_R] − H(ρ)`. May be negative.
pub fn lower_bound_covariant(dec: &Decomposition, rho: &DensityMatrix) -> f64 {
    let rotated = dec.to_rotated(rho.matrix());
    let p = block_probabilities(dec, rho);
    let mut weighted = 0.0;
    for (q, (&pq, b)) in p.iter().zip(dec.blocks()).enumerate() {
        if pq < ENTROPY_CUTOFF {
            continue;
        }
        let left = reduced_left_from_rotated(dec, &rotated, q).expect("block has mass");
        weighted += pq * (entropy(&left) + (b.d_right as f64).log2());
    }
    shannon(&p) + weighted - entropy(rho)
}

/// Block-local vector `Σ_{i<rank} |i⟩_L |i⟩_R / √rank` embedded in the rotated space.
fn add_embedded_max_entangled(dec: &Decomposition, q: usize, rank: usize, weight: f64, out: &mut CVector) {
    let amp = weight / (rank as f64).sqrt();
    for i in 0..rank {
        out[dec.index(q, i, i)] += ONE * amp;
    }
}

/// `ψ = Σ_q √(d_L d_R / d_S) |q⟩|ψ_q⟩` with `ψ_q` maximally entangled of
/// rank `min(d_L, d_R)` in the layout basis.
pub fn optimal_state(dec: &Decomposition) -> DensityMatrix {
    let d = dec.dim() as f64;
    let mut rotated = CVector::zeros(dec.dim());
    for (q, b) in dec.blocks().iter().enumerate() {
        let weight = (b.extent() as f64 / d).sqrt();
        add_embedded_max_entangled(dec, q, b.d_left.min(b.d_right), weight, &mut rotated);
    }
    DensityMatrix::pure(&(dec.basis_change().adjoint() * rotated)).expect("nonzero")
}

/// `d_S' = Σ_q min(d_L, d_R)·d_R`.
pub fn covariant_dimension(dec: &Decomposition) -> usize {
    dec.blocks().iter().map(|b| b.d_left.min(b.d_right) * b.d_right).sum()
}

/// `ψ* = Σ_q √(d_q^* d_R / d_S') |q⟩|ψ_q^*⟩` with `ψ_q^*` maximally entangled
/// of Schmidt rank `d_q^* = min(d_L, d_R)`.
pub fn optimal_covariant_state(dec: &Decomposition) -> DensityMatrix {
    let total = covariant_dimension(dec) as f64;
    let mut rotated = CVector::zeros(dec.dim());
    for (q, b) in dec.blocks().iter().enumerate() {
        let rank = b.d_left.min(b.d_right);
        let weight = ((rank * b.d_right) as f64 / total).sqrt();
        add_embedded_max_entangled(dec, q, rank, weight, &mut rotated);
    }
    DensityMatrix::pure(&(dec.basis_change().adjoint() * rotated)).expect("nonzero")
}

/// Bits; `*_clamped` fields are the raw bounds floored at zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub c_sym: f64,
    pub c_max: f64,
    pub lower_bound: f64,
    pub lower_bound_clamped: f64,
    pub covariant_lower_bound: f64,
    pub covariant_lower_bound_clamped: f64,
    pub p: Vec<f64>,
}

pub fn capacity_report(dec: &Decomposition, rho: &DensityMatrix) -> CapacityReport {
    let lower_bound = lower_bound_general(dec, rho);
    let covariant_lower_bound = lower_bound_covariant(dec, rho);
    CapacityReport {
        c_sym: capacity_symmetric(dec),
        c_max: capacity_max(dec),
        lower_bound,
        lower_bound_clamped: lower_bound.max(0.0),
        covariant_lower_bound,
        covariant_lower_bound_clamped: covariant_lower_bound.max(0.0),
        p: block_probabilities(dec, rho),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub abelian: bool,
    pub irreducible: bool,
    pub superdense_possible: bool,
    /// `max_q min(d_L, d_R) ≥ 2`: covariant encoders already beat `c_sym`.
    pub covariant_sufficient: bool,
    /// Blocks with `d_L ≥ 2`.
    pub witnesses: Vec<usize>,
    /// Blocks with `min(d_L, d_R) ≥ 2`.
    pub covariant_witnesses: Vec<usize>,
}

/// Exact classification from the integer block data.
pub fn classify(dec: &Decomposition) -> Classification {
    let abelian = is_abelian_rep(dec);
    let irreducible = is_irreducible(dec);
    let witnesses = dec.blocks().iter().filter(|b| b.d_left >= 2).map(|b| b.label).collect();
    let covariant_witnesses: Vec<usize> = dec
        .blocks()
        .iter()
        .filter(|b| b.d_left.min(b.d_right) >= 2)
        .map(|b| b.label)
        .collect();
    Classification {
        abelian,
        irreducible,
        superdense_possible: !abelian && !irreducible,
        covariant_sufficient: !covariant_witnesses.is_empty(),
        witnesses,
        covariant_witnesses,
    }
}

/// `χ = H(Σ_x p_x ρ_x) − Σ_x p_x H(ρ_x)` in bits.
pub fn holevo_quantity(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    let first = ensemble.first().ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?;
    let dim = first.1.dim();
    if let Some((_, rho)) = ensemble.iter().find(|(_, r)| r.dim() != dim) {
        return Err(Error::ShapeMismatch(format!("ensemble mixes dims {dim} and {}", rho.dim())));
    }
    let probs: Vec<f64> = ensemble.iter().map(|(p, _)| *p).collect();
    crate::states::validate_distribution(&probs)?;
    let mut avg = crate::linalg::CMatrix::zeros(dim, dim);
    let mut conditional = 0.0;
    for (p, rho) in ensemble {
        avg += rho.matrix() * num_complex::Complex64::from(*p);
        conditional += p * entropy(rho);
    }
    Ok((entropy(&DensityMatrix::from_trusted(avg)) - conditional).max(0.0))
}
