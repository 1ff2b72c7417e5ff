//! Finite-size coding: orthogonal symmetric codebooks, Bell-type superdense
//! codes built from covariant unitaries, decoders, and Monte Carlo random
//! coding with pretty-good-measurement decoding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::linalg::{
    c, frobenius, frobenius_distance, haar_unitary, hermitian_function, identity, min_eigenvalue,
    support_projector, trace_product, CMatrix, CVector, ONE,
};
use crate::states::{symmetry_residual, trace_left, DensityMatrix};

/// Residual allowed when checking the block structure of encoders.
pub const ENCODER_TOL: f64 = 1e-7;
/// Tolerance for POVM positivity and completeness.
pub const POVM_TOL: f64 = 1e-9;
/// Eigenvalues of `S = Σ p_x ρ_x` below this are dropped from `S^{-1/2}`.
pub const PGM_CUTOFF: f64 = 1e-10;
/// Largest `⌈nR⌉` accepted by the Monte Carlo driver.
pub const MAX_MESSAGE_BITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderKind {
    PreparedSymmetric,
    SymmetricUnitary,
    CovariantUnitary,
}

impl EncoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PreparedSymmetric => "prepared_symmetric",
            Self::SymmetricUnitary => "symmetric_unitary",
            Self::CovariantUnitary => "covariant_unitary",
        }
    }
}

/// Encoded states `E_x(ρ)` together with the encoders that produced them.
#[derive(Debug, Clone)]
pub struct Codebook<'a> {
    pub dec: &'a Decomposition,
    pub states: Vec<DensityMatrix>,
    pub encoder_kind: EncoderKind,
    pub encoders: Option<Vec<CMatrix>>,
    /// The common input state for unitary encoders.
    pub input: Option<DensityMatrix>,
}

impl Codebook<'_> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `log |codebook|` bits.
    pub fn rate_bits(&self) -> f64 {
        (self.len() as f64).log2()
    }

    /// Checks the encoder-kind invariant and returns the largest residual.
    pub fn verify(&self) -> Result<f64> {
        let residual = match (self.encoder_kind, &self.encoders) {
            (EncoderKind::PreparedSymmetric, _) => self
                .states
                .iter()
                .map(|s| symmetry_residual(self.dec.rep(), s))
                .fold(0.0, f64::max),
            (EncoderKind::SymmetricUnitary, Some(ws)) => ws
                .iter()
                .map(|w| symmetric_unitary_residual(self.dec, w))
                .fold(0.0, f64::max),
            (EncoderKind::CovariantUnitary, Some(ws)) => ws
                .iter()
                .map(|w| covariant_unitary_residual(self.dec, w))
                .fold(0.0, f64::max),
            (_, None) => return Err(Error::InvalidState("unitary codebook without encoders".into())),
        };
        if residual > ENCODER_TOL {
            return Err(Error::ResidualTooLarge { actual: residual, tol: ENCODER_TOL });
        }
        Ok(residual)
    }
}

/// Decoding measurement `{M_x}` plus the remainder `I − Σ_x M_x`.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
    remainder: CMatrix,
}

impl Povm {
    /// Validates positivity of each element and `Σ_x M_x ≤ I`.
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let dim = elements
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let mut sum = CMatrix::zeros(dim, dim);
        for (x, m) in elements.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidPovm(format!("element {x} has the wrong shape")));
            }
            let min = min_eigenvalue(m);
            if min < -POVM_TOL {
                return Err(Error::InvalidPovm(format!("element {x} has eigenvalue {min:.3e}")));
            }
            sum += m;
        }
        let remainder = identity(dim) - sum;
        let min = min_eigenvalue(&remainder);
        if min < -POVM_TOL {
            return Err(Error::InvalidPovm(format!("Σ M_x exceeds I by {:.3e}", -min)));
        }
        Ok(Self { elements, remainder })
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn remainder(&self) -> &CMatrix {
        &self.remainder
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `U M_x U†` for every element.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        let f = |m: &CMatrix| u * m * u.adjoint();
        Self { elements: self.elements.iter().map(f).collect(), remainder: f(&self.remainder) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorStats {
    pub max_error: f64,
    pub avg_error: f64,
}

fn error_stats(errors: impl ExactSizeIterator<Item = f64>) -> ErrorStats {
    let n = errors.len() as f64;
    let (max, sum) = errors.fold((0.0f64, 0.0), |(m, s), e| (m.max(e), s + e));
    ErrorStats { max_error: max, avg_error: sum / n }
}

fn decoding_error(m: &CMatrix, rho: &CMatrix) -> f64 {
    (1.0 - trace_product(m, rho).re).clamp(0.0, 1.0)
}

/// Maximum and average of `1 − Tr[M_x ρ_x]`.
pub fn simulate_error(codebook: &Codebook<'_>, povm: &Povm) -> Result<ErrorStats> {
    if codebook.len() != povm.len() || codebook.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "{} codewords but {} POVM elements",
            codebook.len(),
            povm.len()
        )));
    }
    Ok(error_stats(
        codebook
            .states
            .iter()
            .zip(&povm.elements)
            .map(|(rho, m)| decoding_error(m, rho.matrix())),
    ))
}

/// Off-block part of a rotated operator, squared.
fn off_block_norm_sqr(dec: &Decomposition, rotated: &CMatrix) -> f64 {
    let total: f64 = rotated.iter().map(|z| z.norm_sqr()).sum();
    let on: f64 = (0..dec.blocks().len())
        .map(|q| dec.diagonal_block(rotated, q).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    (total - on).max(0.0)
}

/// Distance of `W` from the family `⊕_q u_q ⊗ v_q`: the off-block weight
/// plus, per block, the distance from the nearest Kronecker product (via
/// the rank-one truncation of the rearranged block).
pub fn symmetric_unitary_residual(dec: &Decomposition, w: &CMatrix) -> f64 {
    let rotated = dec.to_rotated(w);
    let mut sq = off_block_norm_sqr(dec, &rotated);
    for (q, b) in dec.blocks().iter().enumerate() {
        let m = dec.diagonal_block(&rotated, q);
        let (dl, dr) = (b.d_left, b.d_right);
        let rearranged = CMatrix::from_fn(dl * dl, dr * dr, |row, col| {
            let (a, a2) = (row / dl, row % dl);
            let (r, r2) = (col / dr, col % dr);
            m[(a * dr + r, a2 * dr + r2)]
        });
        let sv = rearranged.singular_values();
        let mut values: Vec<f64> = sv.iter().copied().collect();
        values.sort_by(|x, y| y.total_cmp(x));
        sq += values.iter().skip(1).map(|s| s * s).sum::<f64>();
    }
    sq.sqrt()
}

/// Distance of `W` from the covariant family `⊕_q I ⊗ v_q`.
pub fn covariant_unitary_residual(dec: &Decomposition, w: &CMatrix) -> f64 {
    let rotated = dec.to_rotated(w);
    let mut sq = off_block_norm_sqr(dec, &rotated);
    for (q, b) in dec.blocks().iter().enumerate() {
        let m = dec.diagonal_block(&rotated, q);
        let v = trace_left(&m, b.d_left, b.d_right) / c(b.d_left as f64, 0.0);
        let model = identity(b.d_left).kronecker(&v);
        sq += frobenius_distance(&m, &model).powi(2);
    }
    sq.sqrt()
}

/// Hermitian operators spanning the symmetric operators: per block,
/// `|q⟩⟨q| ⊗ I ⊗ h` for `h` running over a Hermitian basis of `d_R × d_R`.
fn symmetric_spanning_set(dec: &Decomposition) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for (q, b) in dec.blocks().iter().enumerate() {
        let dr = b.d_right;
        for r in 0..dr {
            for s in r..dr {
                let mut hs = Vec::new();
                let mut e = CMatrix::zeros(dr, dr);
                if r == s {
                    e[(r, r)] = ONE;
                    hs.push(e);
                } else {
                    e[(r, s)] = ONE;
                    e[(s, r)] = ONE;
                    hs.push(e);
                    let mut f = CMatrix::zeros(dr, dr);
                    f[(r, s)] = c(0.0, 1.0);
                    f[(s, r)] = c(0.0, -1.0);
                    hs.push(f);
                }
                for h in hs {
                    let local = identity(b.d_left).kronecker(&h);
                    out.push(dec.from_rotated(&dec.embed_block(q, &local)));
                }
            }
        }
    }
    out
}

fn maps_symmetric_to_symmetric(dec: &Decomposition, w: &CMatrix, tol: f64) -> bool {
    symmetric_spanning_set(dec).iter().all(|x| {
        let y = w * x * w.adjoint();
        dec.rep()
            .generator_matrices()
            .all(|u| frobenius_distance(&(u * &y), &(&y * u)) <= tol)
    })
}

/// A unitary channel is asymmetry-nongenerating (equivalently, strongly so)
/// iff it maps a spanning set of symmetric operators to symmetric operators.
pub fn is_asymmetry_nongenerating(dec: &Decomposition, w: &CMatrix, tol: f64) -> bool {
    maps_symmetric_to_symmetric(dec, w, tol)
}

/// Symmetry-preserving (equivalently, strongly so) for a unitary: both `W`
/// and `W†` are asymmetry-nongenerating.
pub fn is_symmetry_preserving(dec: &Decomposition, w: &CMatrix, tol: f64) -> bool {
    maps_symmetric_to_symmetric(dec, w, tol) && maps_symmetric_to_symmetric(dec, &w.adjoint(), tol)
}

/// `W U_g ρ U_g† W† = U_g W ρ W† U_g†` for all ρ, i.e. `U_g† W U_g ∝ W`.
pub fn is_covariant_unitary(dec: &Decomposition, w: &CMatrix, tol: f64) -> bool {
    let d = w.nrows() as f64;
    dec.rep().generator_matrices().all(|u| {
        let conj = u.adjoint() * w * u;
        let phase = crate::linalg::trace(&(w.adjoint() * &conj)) / c(d, 0.0);
        frobenius_distance(&conj, &(w * phase)) <= tol
    })
}

/// States `|q⟩⟨q| ⊗ π_q ⊗ |e_r⟩⟨e_r|`, one per `(q, r)`.
pub fn symmetric_codebook(dec: &Decomposition) -> Codebook<'_> {
    let mut states = Vec::with_capacity(dec.total_multiplicity());
    for (q, b) in dec.blocks().iter().enumerate() {
        for r in 0..b.d_right {
            let mut local = CMatrix::zeros(dec.dim(), dec.dim());
            for a in 0..b.d_left {
                let i = dec.index(q, a, r);
                local[(i, i)] = c(1.0 / b.d_left as f64, 0.0);
            }
            states.push(DensityMatrix::from_trusted(dec.from_rotated(&local)));
        }
    }
    Codebook { dec, states, encoder_kind: EncoderKind::PreparedSymmetric, encoders: None, input: None }
}

/// Support projectors of pairwise orthogonal codewords.
pub fn projective_decoder(codebook: &Codebook<'_>) -> Result<Povm> {
    const OVERLAP_TOL: f64 = 1e-12;
    for i in 0..codebook.len() {
        for j in i + 1..codebook.len() {
            let overlap = trace_product(codebook.states[i].matrix(), codebook.states[j].matrix()).re;
            if overlap > OVERLAP_TOL {
                return Err(Error::SupportsOverlap { first: i, second: j, overlap });
            }
        }
    }
    let elements = codebook
        .states
        .iter()
        .map(|s| support_projector(s.matrix(), PGM_CUTOFF))
        .collect();
    Povm::new(elements)
}

/// Generalized Pauli `X^a Z^b` on dimension `d`.
fn weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        let theta = 2.0 * std::f64::consts::PI * (b * j) as f64 / d as f64;
        m[((j + a) % d, j)] = c(theta.cos(), theta.sin());
    }
    m
}

/// `d²` generalized Bell states in block `q` (which needs `d_L = d_R = d`),
/// obtained from the maximally entangled input by the covariant unitaries
/// `|q⟩⟨q| ⊗ I ⊗ X^a Z^b` (identity on the other blocks).
pub fn bell_codebook(dec: &Decomposition, q: usize) -> Result<Codebook<'_>> {
    let b = dec.block(q);
    if b.d_left != b.d_right {
        return Err(Error::BlockNotSquare { block: q, d_left: b.d_left, d_right: b.d_right });
    }
    let d = b.d_left;
    let mut phi = CVector::zeros(dec.dim());
    for i in 0..d {
        phi[dec.index(q, i, i)] = c(1.0 / (d as f64).sqrt(), 0.0);
    }
    let input = DensityMatrix::pure(&(dec.basis_change().adjoint() * phi))?;
    let l = dec.layout()[q];
    let mut encoders = Vec::with_capacity(d * d);
    let mut states = Vec::with_capacity(d * d);
    for x in 0..d {
        for z in 0..d {
            let mut rotated = identity(dec.dim());
            rotated
                .view_mut((l.offset, l.offset), (l.extent, l.extent))
                .copy_from(&identity(d).kronecker(&weyl(d, x, z)));
            let w = dec.from_rotated(&rotated);
            states.push(input.conjugate_by(&w));
            encoders.push(w);
        }
    }
    Ok(Codebook {
        dec,
        states,
        encoder_kind: EncoderKind::CovariantUnitary,
        encoders: Some(encoders),
        input: Some(input),
    })
}

fn random_block_unitary<R: Rng + ?Sized>(dec: &Decomposition, covariant: bool, rng: &mut R) -> CMatrix {
    let mut rotated = CMatrix::zeros(dec.dim(), dec.dim());
    for (q, b) in dec.blocks().iter().enumerate() {
        let u = if covariant { identity(b.d_left) } else { haar_unitary(b.d_left, rng) };
        let v = haar_unitary(b.d_right, rng);
        let l = dec.layout()[q];
        rotated.view_mut((l.offset, l.offset), (l.extent, l.extent)).copy_from(&u.kronecker(&v));
    }
    dec.from_rotated(&rotated)
}

/// `⊕_q u_q ⊗ v_q` with independent Haar `u_q`, `v_q`.
pub fn random_symmetric_unitary(dec: &Decomposition, seed: u64) -> CMatrix {
    random_symmetric_unitary_with(dec, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_symmetric_unitary_with<R: Rng + ?Sized>(dec: &Decomposition, rng: &mut R) -> CMatrix {
    random_block_unitary(dec, false, rng)
}

/// `⊕_q I ⊗ v_q` with independent Haar `v_q`.
pub fn random_covariant_unitary(dec: &Decomposition, seed: u64) -> CMatrix {
    random_covariant_unitary_with(dec, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_covariant_unitary_with<R: Rng + ?Sized>(dec: &Decomposition, rng: &mut R) -> CMatrix {
    random_block_unitary(dec, true, rng)
}

/// Pretty-good measurement `M_x = S^{-1/2} p_x ρ_x S^{-1/2}` without validation.
fn pgm_elements(states: &[DensityMatrix], priors: &[f64]) -> Vec<CMatrix> {
    let dim = states[0].dim();
    let mut s = CMatrix::zeros(dim, dim);
    for (rho, &p) in states.iter().zip(priors) {
        s += rho.matrix() * c(p, 0.0);
    }
    let inv_sqrt = hermitian_function(&s, |x| if x > PGM_CUTOFF { 1.0 / x.sqrt() } else { 0.0 });
    states
        .iter()
        .zip(priors)
        .map(|(rho, &p)| crate::linalg::hermitize(&(&inv_sqrt * rho.matrix() * &inv_sqrt * c(p, 0.0))))
        .collect()
}

pub fn pgm_decoder(codebook: &Codebook<'_>, priors: &[f64]) -> Result<Povm> {
    if priors.len() != codebook.len() || codebook.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "{} priors for {} codewords",
            priors.len(),
            codebook.len()
        )));
    }
    crate::states::validate_distribution(priors)?;
    Povm::new(pgm_elements(&codebook.states, priors))
}

/// Uniform-prior PGM.
pub fn pgm_decoder_uniform(codebook: &Codebook<'_>) -> Result<Povm> {
    let m = codebook.len().max(1);
    pgm_decoder(codebook, &vec![1.0 / m as f64; codebook.len()])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: usize,
    pub rate: f64,
    pub trials: usize,
    pub seed: u64,
    pub messages: usize,
    pub mean_error: f64,
    pub min_error: f64,
    pub max_error: f64,
    pub encoder_kind: EncoderKind,
    pub per_trial: Vec<f64>,
}

/// Number of message bits `⌈nR⌉`, robust to rounding in `n·R`.
pub fn message_bits(n: usize, rate: f64) -> u32 {
    let x = n as f64 * rate;
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 { rounded.max(0.0) as u32 } else { x.ceil().max(0.0) as u32 }
}

/// Draws `2^{⌈nR⌉}` random block unitaries per trial, encodes `ρ^{⊗n}`,
/// decodes with the uniform-prior PGM and records the average error.
/// Trial `t` uses stream `t` of a ChaCha generator seeded with `seed`.
pub fn monte_carlo_rate_test(
    dec: &Decomposition,
    rho: &DensityMatrix,
    n: usize,
    rate: f64,
    trials: usize,
    seed: u64,
    kind: EncoderKind,
) -> Result<MonteCarloReport> {
    if n == 0 {
        return Err(Error::ShapeMismatch("blocklength must be at least 1".into()));
    }
    if rho.dim() != dec.dim() {
        return Err(Error::ShapeMismatch(format!("state dim {} vs system dim {}", rho.dim(), dec.dim())));
    }
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::ShapeMismatch(format!("rate {rate} must be finite and nonnegative")));
    }
    if trials == 0 {
        return Err(Error::ShapeMismatch("need at least one trial".into()));
    }
    let bits = message_bits(n, rate);
    if bits > MAX_MESSAGE_BITS {
        return Err(Error::DimensionCapExceeded {
            what: "message bits",
            value: bits as usize,
            cap: MAX_MESSAGE_BITS as usize,
        });
    }
    let messages = 1usize << bits;
    let dec_n = dec.tensor_power(n)?;
    let input = rho.tensor_power(n);
    let covariant = match kind {
        EncoderKind::SymmetricUnitary => false,
        EncoderKind::CovariantUnitary => true,
        EncoderKind::PreparedSymmetric => {
            return Err(Error::ShapeMismatch("Monte Carlo needs unitary encoders".into()))
        }
    };

    let per_trial: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let states: Vec<DensityMatrix> = (0..messages)
                .map(|_| input.conjugate_by(&random_block_unitary(&dec_n, covariant, &mut rng)))
                .collect();
            let priors = vec![1.0 / messages as f64; messages];
            let elements = pgm_elements(&states, &priors);
            error_stats(elements.iter().zip(&states).map(|(m, s)| decoding_error(m, s.matrix()))).avg_error
        })
        .collect();

    let mean_error = per_trial.iter().sum::<f64>() / trials as f64;
    let min_error = per_trial.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_error = per_trial.iter().cloned().fold(0.0, f64::max);
    Ok(MonteCarloReport {
        n,
        rate,
        trials,
        seed,
        messages,
        mean_error,
        min_error,
        max_error,
        encoder_kind: kind,
        per_trial,
    })
}

/// `‖Σ_x M_x‖` deviation helper for tests and reports.
pub fn completeness_defect(povm: &Povm) -> f64 {
    frobenius(povm.remainder())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{capacity_symmetric, holevo_quantity};
    use crate::decompose::{decompose, DEFAULT_DECOMP_TOL};
    use crate::linalg::{unitarity_residual, ZERO};
    use crate::repcore::catalog;
    use crate::states::{is_symmetric, random_state, twirl};

    fn dec(id: &str) -> Decomposition {
        decompose(&catalog::representation(id).unwrap(), DEFAULT_DECOMP_TOL, 42).unwrap()
    }

    fn pure(v: &[f64]) -> DensityMatrix {
        DensityMatrix::pure(&CVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))).unwrap()
    }

    #[test]
    fn sign_rep_codebook() {
        let d = dec("z2/sign");
        let cb = symmetric_codebook(&d);
        assert_eq!(cb.len(), 2);
        let povm = projective_decoder(&cb).unwrap();
        let stats = simulate_error(&cb, &povm).unwrap();
        assert!(stats.max_error < 1e-12 && stats.avg_error < 1e-12);
        // states are the computational basis projectors
        for s in &cb.states {
            let diag: Vec<f64> = (0..2).map(|i| s.matrix()[(i, i)].re).collect();
            assert!(diag.iter().any(|&x| (x - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn s3_regular_codebook() {
        let d = dec("s3/regular");
        let cb = symmetric_codebook(&d);
        assert_eq!(cb.len(), 4);
        cb.verify().unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(trace_product(cb.states[i].matrix(), cb.states[j].matrix()).re <= 1e-12);
            }
        }
        let ens: Vec<_> = cb.states.iter().cloned().map(|s| (0.25, s)).collect();
        assert!((holevo_quantity(&ens).unwrap() - 2.0).abs() < 1e-10);
        let povm = projective_decoder(&cb).unwrap();
        assert!(simulate_error(&cb, &povm).unwrap().max_error <= 1e-9);
    }

    #[test]
    fn irreducible_codebook_has_one_state() {
        let d = dec("q8/u");
        let cb = symmetric_codebook(&d);
        assert_eq!(cb.len(), 1);
        assert_eq!(cb.rate_bits(), 0.0);
        assert_eq!(capacity_symmetric(&d), 0.0);
    }

    #[test]
    fn bell_codebook_on_q8() {
        let d = dec("q8/u_tensor_I");
        let cb = bell_codebook(&d, 0).unwrap();
        assert_eq!(cb.len(), 4);
        cb.verify().unwrap();
        for w in cb.encoders.as_ref().unwrap() {
            assert!(is_covariant_unitary(&d, w, 1e-9));
            assert!(is_symmetry_preserving(&d, w, 1e-9));
            assert!(symmetric_unitary_residual(&d, w) < 1e-9);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(trace_product(cb.states[i].matrix(), cb.states[j].matrix()).re.abs() <= 1e-12);
            }
        }
        let proj = projective_decoder(&cb).unwrap();
        assert_eq!(proj.len(), 4);
        assert!(simulate_error(&cb, &proj).unwrap().max_error <= 1e-9);
        let pgm = pgm_decoder_uniform(&cb).unwrap();
        let stats = simulate_error(&cb, &pgm).unwrap();
        assert!(stats.max_error <= 1e-9 && stats.avg_error <= 1e-9);
        assert_eq!(cb.rate_bits(), 2.0);
        assert!(cb.rate_bits() > capacity_symmetric(&d));
    }

    #[test]
    fn bell_codebook_errors_and_small_blocks() {
        let nat = dec("s3/natural");
        let bad = nat.blocks().iter().position(|b| b.d_left != b.d_right).unwrap();
        assert!(matches!(bell_codebook(&nat, bad), Err(Error::BlockNotSquare { .. })));
        let z = dec("z2/sign");
        let cb = bell_codebook(&z, 0).unwrap();
        assert_eq!(cb.len(), 1);
        assert_eq!(cb.rate_bits(), 0.0);
    }

    #[test]
    fn bell_codebook_on_d4() {
        let d = dec("d4/regular");
        let q = d.blocks().iter().position(|b| (b.d_left, b.d_right) == (2, 2)).unwrap();
        let cb = bell_codebook(&d, q).unwrap();
        assert_eq!(cb.len(), 4);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(trace_product(cb.states[i].matrix(), cb.states[j].matrix()).re.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn random_unitaries_have_block_structure() {
        let ab = dec("z4/regular");
        let w = random_symmetric_unitary(&ab, 1);
        let rot = ab.to_rotated(&w);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(rot[(i, j)].norm() < 1e-12);
                }
            }
            assert!((rot[(i, i)].norm() - 1.0).abs() < 1e-12);
        }

        let q8 = dec("q8/u_tensor_I");
        let w = random_symmetric_unitary(&q8, 2);
        assert!(unitarity_residual(&w) < 1e-12);
        assert!(symmetric_unitary_residual(&q8, &w) < 1e-9);
        assert!(covariant_unitary_residual(&q8, &w) > 1e-3);
        assert!(is_symmetry_preserving(&q8, &w, 1e-9));
        assert!(!is_covariant_unitary(&q8, &w, 1e-6));
        let v = random_covariant_unitary(&q8, 3);
        assert!(covariant_unitary_residual(&q8, &v) < 1e-9);
        assert!(is_covariant_unitary(&q8, &v, 1e-9));
    }

    #[test]
    fn generic_unitary_is_not_symmetric() {
        let q8 = dec("q8/u_tensor_I");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = haar_unitary(4, &mut rng);
        assert!(symmetric_unitary_residual(&q8, &w) > 1e-3);
        assert!(!is_asymmetry_nongenerating(&q8, &w, 1e-6));
    }

    #[test]
    fn symmetric_encoders_keep_symmetric_inputs_symmetric() {
        let d = dec("s3/regular");
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sigma = twirl(d.rep(), &random_state(6, &mut rng));
        for seed in 0..10 {
            let w = random_symmetric_unitary(&d, seed);
            assert!(is_symmetric(d.rep(), &sigma.conjugate_by(&w), 1e-9));
        }
    }

    #[test]
    fn identical_states_cannot_be_distinguished() {
        let d = dec("z2/sign");
        let s = DensityMatrix::maximally_mixed(2);
        for m in 2..6 {
            let cb = Codebook {
                dec: &d,
                states: vec![s.clone(); m],
                encoder_kind: EncoderKind::PreparedSymmetric,
                encoders: None,
                input: None,
            };
            let povm = pgm_decoder_uniform(&cb).unwrap();
            let stats = simulate_error(&cb, &povm).unwrap();
            assert!(stats.avg_error >= 1.0 - 1.0 / m as f64 - 1e-12);
            assert!(matches!(projective_decoder(&cb), Err(Error::SupportsOverlap { first: 0, second: 1, .. })));
        }
    }

    #[test]
    fn pgm_simple_cases() {
        let d = dec("z2/sign");
        let single = Codebook {
            dec: &d,
            states: vec![pure(&[1.0, 0.0])],
            encoder_kind: EncoderKind::PreparedSymmetric,
            encoders: None,
            input: None,
        };
        let povm = pgm_decoder(&single, &[1.0]).unwrap();
        assert!(frobenius_distance(&povm.elements()[0], single.states[0].matrix()) < 1e-12);

        let two = Codebook { states: vec![pure(&[1.0, 0.0]), pure(&[0.0, 1.0])], ..single.clone() };
        let povm = pgm_decoder(&two, &[0.5, 0.5]).unwrap();
        for (m, s) in povm.elements().iter().zip(&two.states) {
            assert!(frobenius_distance(m, s.matrix()) < 1e-12);
        }
        assert!(completeness_defect(&povm) < 1e-12);
        assert!(pgm_decoder(&two, &[1.0]).is_err());
        assert!(pgm_decoder(&two, &[0.7, 0.7]).is_err());
    }

    /// Grid-search oracle: best two-outcome projective decoder over Bloch
    /// angles at 1° resolution for {|0⟩, |+⟩} with uniform priors.
    #[test]
    fn pgm_close_to_best_projective_decoder() {
        let d = dec("z2/sign");
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cb = Codebook {
            dec: &d,
            states: vec![pure(&[1.0, 0.0]), pure(&[s, s])],
            encoder_kind: EncoderKind::PreparedSymmetric,
            encoders: None,
            input: None,
        };
        let pgm = simulate_error(&cb, &pgm_decoder(&cb, &[0.5, 0.5]).unwrap()).unwrap().avg_error;

        let mut best = f64::INFINITY;
        for theta_deg in 0..=180 {
            for phi_deg in 0..360 {
                let (t, p) = ((theta_deg as f64).to_radians() / 2.0, (phi_deg as f64).to_radians());
                let v0 = CVector::from_vec(vec![c(t.cos(), 0.0), c(p.cos() * t.sin(), p.sin() * t.sin())]);
                let v1 = CVector::from_vec(vec![c(-t.sin(), 0.0), c(p.cos() * t.cos(), p.sin() * t.cos())]);
                let povm = Povm::new(vec![&v0 * v0.adjoint(), &v1 * v1.adjoint()]).unwrap();
                best = best.min(simulate_error(&cb, &povm).unwrap().avg_error);
            }
        }
        assert!((pgm - best).abs() <= 0.005, "pgm {pgm} best {best}");
        // Both sit at the Helstrom value (1 − 1/√2)/2.
        assert!((pgm - (1.0 - s) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::new(vec![]).is_err());
        assert!(Povm::new(vec![identity(2), identity(2)]).is_err());
        let neg = CMatrix::from_diagonal(&CVector::from_vec(vec![c(-0.1, 0.0), ZERO]));
        assert!(Povm::new(vec![neg]).is_err());
    }

    #[test]
    fn simulate_error_basis_invariance() {
        let d = dec("q8/u_tensor_I");
        let cb = bell_codebook(&d, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mixed: Vec<DensityMatrix> = cb
            .states
            .iter()
            .map(|s| DensityMatrix::from_trusted(s.matrix() * c(0.7, 0.0) + random_state(4, &mut rng).matrix() * c(0.3, 0.0)))
            .collect();
        let noisy = Codebook { states: mixed, ..cb.clone() };
        let povm = pgm_decoder_uniform(&noisy).unwrap();
        let before = simulate_error(&noisy, &povm).unwrap();
        let u = haar_unitary(4, &mut rng);
        let rotated = Codebook { states: noisy.states.iter().map(|s| s.conjugate_by(&u)).collect(), ..noisy.clone() };
        let after = simulate_error(&rotated, &povm.conjugate_by(&u)).unwrap();
        assert!((before.avg_error - after.avg_error).abs() < 1e-10);
        assert!((before.max_error - after.max_error).abs() < 1e-10);
    }

    #[test]
    fn message_bit_rounding() {
        assert_eq!(message_bits(2, 1.5), 3);
        assert_eq!(message_bits(3, 1.0 / 3.0 * 3.0), 3);
        assert_eq!(message_bits(1, 0.0), 0);
        assert_eq!(message_bits(3, 0.7), 3);
    }

    #[test]
    fn monte_carlo_zero_rate() {
        let d = dec("q8/u_tensor_I");
        let rho = crate::capacity::optimal_state(&d);
        let r = monte_carlo_rate_test(&d, &rho, 1, 0.0, 4, 1, EncoderKind::SymmetricUnitary).unwrap();
        assert_eq!(r.messages, 1);
        assert!(r.max_error < 1e-12);
    }

    #[test]
    fn monte_carlo_random_codes_are_not_exact_at_n1() {
        let d = dec("q8/u_tensor_I");
        let cb = bell_codebook(&d, 0).unwrap();
        let phi = cb.input.clone().unwrap();
        let r = monte_carlo_rate_test(&d, &phi, 1, 2.0, 20, 5, EncoderKind::SymmetricUnitary).unwrap();
        assert_eq!(r.messages, 4);
        assert!(r.min_error > 0.0);
        let again = monte_carlo_rate_test(&d, &phi, 1, 2.0, 20, 5, EncoderKind::SymmetricUnitary).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn monte_carlo_errors() {
        let d = dec("z2/sign");
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            monte_carlo_rate_test(&d, &rho, 2, 7.0, 1, 0, EncoderKind::SymmetricUnitary),
            Err(Error::DimensionCapExceeded { what: "message bits", .. })
        ));
        assert!(monte_carlo_rate_test(&d, &rho, 13, 0.5, 1, 0, EncoderKind::SymmetricUnitary).is_err());
        assert!(monte_carlo_rate_test(&d, &DensityMatrix::maximally_mixed(3), 1, 1.0, 1, 0, EncoderKind::SymmetricUnitary).is_err());
        assert!(monte_carlo_rate_test(&d, &rho, 1, 1.0, 1, 0, EncoderKind::PreparedSymmetric).is_err());
    }
}
