//! Density matrices, entropies, twirling and the Schur form of symmetric states.

use rand::Rng;

use crate::decompose::{group_average, Decomposition};
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, frobenius_distance, ginibre, hermitian_eigenvalues, hermitize, identity, trace, CMatrix, CVector,
};
use crate::repcore::Representation;

/// Tolerance used when validating density matrices.
pub const STATE_TOL: f64 = 1e-9;
/// Eigenvalues below this contribute nothing to entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// A positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity at [`STATE_TOL`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(format!("matrix is {}x{}", matrix.nrows(), matrix.ncols())));
        }
        let asym = frobenius_distance(&matrix, &matrix.adjoint());
        if asym > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (residual {asym:.3e})")));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let matrix = hermitize(&matrix);
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Hermitizes and renormalizes a matrix known to be a state up to rounding.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        let m = hermitize(&matrix);
        let tr = trace(&m).re;
        Self { matrix: m / num_complex::Complex64::from(tr) }
    }

    /// `|ψ⟩⟨ψ|` for a nonzero vector, normalized.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self::from_trusted(&v * v.adjoint()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: identity(dim) / num_complex::Complex64::from(dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `ρ ⊗ ρ ⊗ …` (`n` factors).
    pub fn tensor_power(&self, n: usize) -> Self {
        let m = (1..n).fold(self.matrix.clone(), |acc, _| acc.kronecker(&self.matrix));
        Self { matrix: m }
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_trusted(u * &self.matrix * u.adjoint())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Random mixed state `A A† / Tr[A A†]` with `A` Ginibre.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let a = ginibre(dim, dim, rng);
    DensityMatrix::from_trusted(&a * a.adjoint())
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let v = ginibre(dim, 1, rng);
    DensityMatrix::pure(&v.column(0).into_owned()).expect("Gaussian vector is nonzero")
}

/// `(1/|G|) Σ_g U_g ρ U_g†`.
pub fn twirl(rep: &Representation, rho: &DensityMatrix) -> DensityMatrix {
    assert_eq!(rep.dim(), rho.dim(), "twirl: dimension mismatch");
    DensityMatrix::from_trusted(group_average(rep, rho.matrix()))
}

/// `max_s ‖U_s ρ U_s† − ρ‖_F` over generators.
pub fn symmetry_residual(rep: &Representation, rho: &DensityMatrix) -> f64 {
    assert_eq!(rep.dim(), rho.dim(), "symmetry check: dimension mismatch");
    rep.generator_matrices()
        .map(|u| frobenius_distance(&(u * rho.matrix() * u.adjoint()), rho.matrix()))
        .fold(0.0, f64::max)
}

pub fn is_symmetric(rep: &Representation, rho: &DensityMatrix, tol: f64) -> bool {
    symmetry_residual(rep, rho) <= tol
}

/// Schur-structure parameters `σ ≅ Σ_q r_q |q⟩⟨q| ⊗ π_q ⊗ σ_q` of a symmetric state.
#[derive(Debug, Clone)]
pub struct SymmetricForm<'a> {
    pub dec: &'a Decomposition,
    pub r: Vec<f64>,
    pub sigma_blocks: Vec<DensityMatrix>,
    pub reassembly_residual: f64,
}

impl SymmetricForm<'_> {
    /// The rotated-space operator `⊕_q r_q π_q ⊗ σ_q`.
    pub fn rotated(&self) -> CMatrix {
        let dim = self.dec.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for (q, block) in self.dec.blocks().iter().enumerate() {
            let local = block_model(self.r[q], block.d_left, &self.sigma_blocks[q]);
            let l = self.dec.layout()[q];
            out.view_mut((l.offset, l.offset), (l.extent, l.extent)).copy_from(&local);
        }
        out
    }

    /// The state in the original basis.
    pub fn reassemble(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.dec.from_rotated(&self.rotated()))
    }
}

fn block_model(r: f64, d_left: usize, sigma: &DensityMatrix) -> CMatrix {
    let pi = identity(d_left) * num_complex::Complex64::from(r / d_left as f64);
    pi.kronecker(sigma.matrix())
}

/// `Tr_{s_L}` of a block operator indexed `a·d_R + r`.
pub fn trace_left(block: &CMatrix, d_left: usize, d_right: usize) -> CMatrix {
    CMatrix::from_fn(d_right, d_right, |r, s| {
        (0..d_left).map(|a| block[(a * d_right + r, a * d_right + s)]).sum()
    })
}

/// `Tr_{s_R}` of a block operator indexed `a·d_R + r`.
pub fn trace_right(block: &CMatrix, d_left: usize, d_right: usize) -> CMatrix {
    CMatrix::from_fn(d_left, d_left, |a, b| {
        (0..d_right).map(|r| block[(a * d_right + r, b * d_right + r)]).sum()
    })
}

/// Extracts `(r_q, σ_q)` from a symmetric state.
pub fn symmetric_form<'a>(dec: &'a Decomposition, sigma: &DensityMatrix) -> Result<SymmetricForm<'a>> {
    const FORM_TOL: f64 = 1e-7;
    let residual = symmetry_residual(dec.rep(), sigma);
    if residual > FORM_TOL {
        return Err(Error::NotSymmetric { residual });
    }
    let rotated = dec.to_rotated(sigma.matrix());
    let mut r = Vec::with_capacity(dec.blocks().len());
    let mut sigma_blocks = Vec::with_capacity(dec.blocks().len());
    let mut total = 0.0f64;
    for (q, block) in dec.blocks().iter().enumerate() {
        let local = dec.diagonal_block(&rotated, q);
        let mass = trace(&local).re.max(0.0);
        let sigma_q = if mass > ENTROPY_CUTOFF {
            DensityMatrix::from_trusted(trace_left(&local, block.d_left, block.d_right))
        } else {
            DensityMatrix::maximally_mixed(block.d_right)
        };
        // Compare every row of the block (including off-block entries) to the model.
        let l = dec.layout()[q];
        let model = block_model(mass, block.d_left, &sigma_q);
        let mut expected_rows = CMatrix::zeros(l.extent, dec.dim());
        expected_rows.view_mut((0, l.offset), (l.extent, l.extent)).copy_from(&model);
        let actual_rows = rotated.rows(l.offset, l.extent).into_owned();
        let block_residual = frobenius(&(actual_rows - expected_rows));
        if block_residual > FORM_TOL {
            return Err(Error::NotBlockForm { block: q, residual: block_residual });
        }
        total += block_residual * block_residual;
        r.push(mass);
        sigma_blocks.push(sigma_q);
    }
    let norm: f64 = r.iter().sum();
    r.iter_mut().for_each(|x| *x /= norm);
    Ok(SymmetricForm { dec, r, sigma_blocks, reassembly_residual: total.sqrt() })
}

fn log2_terms(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .filter(|&p| p > ENTROPY_CUTOFF)
        .map(|p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    log2_terms(rho.eigenvalues().into_iter().map(|x| x.max(0.0))).max(0.0)
}

/// Shannon entropy in bits; zero entries contribute nothing.
pub fn shannon(p: &[f64]) -> f64 {
    log2_terms(p.iter().copied()).max(0.0)
}

pub fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {x} is negative or not finite")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {s}")));
    }
    Ok(())
}

/// Kullback–Leibler divergence `Σ p log(p/q)` in bits.
pub fn kl(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidDistribution(format!("lengths {} and {}", p.len(), q.len())));
    }
    validate_distribution(p)?;
    validate_distribution(q)?;
    let mut d = 0.0;
    for (index, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::SupportMismatch { index });
        }
        d += pi * (pi / qi).log2();
    }
    Ok(d.max(0.0))
}

/// `p_q = Tr[⟨q|ρ|q⟩]`, read off the rotated diagonal.
pub fn block_probabilities(dec: &Decomposition, rho: &DensityMatrix) -> Vec<f64> {
    let rotated = dec.to_rotated(rho.matrix());
    dec.layout()
        .iter()
        .map(|l| (l.offset..l.offset + l.extent).map(|i| rotated[(i, i)].re).sum::<f64>().max(0.0))
        .collect()
}

/// `ρ_q^{s_L} = p_q^{-1} Tr_{s_R} ⟨q|ρ|q⟩`.
pub fn reduced_left_state(dec: &Decomposition, rho: &DensityMatrix, q: usize) -> Result<DensityMatrix> {
    let rotated = dec.to_rotated(rho.matrix());
    reduced_left_from_rotated(dec, &rotated, q)
}

pub(crate) fn reduced_left_from_rotated(dec: &Decomposition, rotated: &CMatrix, q: usize) -> Result<DensityMatrix> {
    let block = dec.block(q);
    let local = dec.diagonal_block(rotated, q);
    let mass = trace(&local).re;
    if mass < ENTROPY_CUTOFF {
        return Err(Error::ZeroBlockMass { block: q });
    }
    Ok(DensityMatrix::from_trusted(trace_right(&local, block.d_left, block.d_right)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose, DEFAULT_DECOMP_TOL};
    use crate::linalg::{c, ONE, ZERO};
    use crate::repcore::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> DensityMatrix {
        DensityMatrix::pure(&CVector::from_vec(vec![ONE, ONE])).unwrap()
    }

    fn dec(id: &str) -> Decomposition {
        decompose(&catalog::representation(id).unwrap(), DEFAULT_DECOMP_TOL, 42).unwrap()
    }

    fn diag_state(p: &[f64]) -> DensityMatrix {
        DensityMatrix::new(CMatrix::from_diagonal(&CVector::from_iterator(p.len(), p.iter().map(|&x| c(x, 0.0)))))
            .unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(DensityMatrix::new(CMatrix::zeros(2, 3)).is_err());
        assert!(DensityMatrix::new(identity(2)).is_err()); // trace 2
        let neg = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(DensityMatrix::new(neg), Err(Error::InvalidState(_))));
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), ONE, ZERO, c(0.5, 0.0)]);
        assert!(DensityMatrix::new(non_herm).is_err());
    }

    #[test]
    fn twirl_sign_rep_plus() {
        let rep = catalog::representation("z2/sign").unwrap();
        let t = twirl(&rep, &plus());
        assert!(frobenius_distance(t.matrix(), diag_state(&[0.5, 0.5]).matrix()) < 1e-15);
        assert!(is_symmetric(&rep, &t, 1e-9));
    }

    #[test]
    fn sign_rep_plus_residual_is_sqrt2() {
        let rep = catalog::representation("z2/sign").unwrap();
        // Z|+⟩⟨+|Z − |+⟩⟨+| = −X, Frobenius norm √2
        assert!((symmetry_residual(&rep, &plus()) - 2f64.sqrt()).abs() < 1e-12);
        assert!(!is_symmetric(&rep, &plus(), 1e-9));
        assert!(is_symmetric(&rep, &DensityMatrix::maximally_mixed(2), 0.0));
    }

    #[test]
    fn twirl_fixes_symmetric_state() {
        let rep = catalog::representation("s3/regular").unwrap();
        let sigma = DensityMatrix::maximally_mixed(6);
        assert!(frobenius_distance(twirl(&rep, &sigma).matrix(), sigma.matrix()) < 1e-12);
    }

    /// Direct 8-term sum for the maximally entangled state under Q8 u⊗I.
    #[test]
    fn twirl_q8_maximally_entangled() {
        let rep = catalog::representation("q8/u_tensor_I").unwrap();
        let phi = DensityMatrix::pure(&CVector::from_vec(vec![ONE, ZERO, ZERO, ONE])).unwrap();
        let mut oracle = CMatrix::zeros(4, 4);
        for u in rep.matrices() {
            oracle += u * phi.matrix() * u.adjoint();
        }
        oracle /= c(8.0, 0.0);
        let t = twirl(&rep, &phi);
        assert!(frobenius_distance(t.matrix(), &oracle) < 1e-14);
        assert!(frobenius_distance(t.matrix(), &(identity(4) / c(4.0, 0.0))) < 1e-12);
    }

    #[test]
    fn entropy_values() {
        assert!(entropy(&plus()).abs() < 1e-12);
        assert!((entropy(&DensityMatrix::maximally_mixed(4)) - 2.0).abs() < 1e-12);
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((entropy(&diag_state(&[0.75, 0.25])) - expected).abs() < 1e-12);
        assert!((expected - 0.8113).abs() < 1e-4);
    }

    #[test]
    fn shannon_and_kl() {
        assert_eq!(shannon(&[1.0, 0.0]), 0.0);
        assert_eq!(kl(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        let v = kl(&[0.5, 0.5], &[0.75, 0.25]).unwrap();
        assert!((v - (1.0 - 0.5 * 3f64.log2())).abs() < 1e-12);
        assert!((v - 0.2075).abs() < 1e-4);
        assert_eq!(kl(&[0.5, 0.5], &[1.0, 0.0]).unwrap_err(), Error::SupportMismatch { index: 1 });
        assert!(kl(&[0.0, 1.0], &[1.0, 0.0]).is_err());
        assert!(kl(&[1.0, 0.0], &[1.0, 0.0]).unwrap() == 0.0);
        assert!(kl(&[0.5, 0.6], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn symmetric_form_of_maximally_mixed() {
        let d = dec("s3/regular");
        let form = symmetric_form(&d, &DensityMatrix::maximally_mixed(6)).unwrap();
        for (q, b) in d.blocks().iter().enumerate() {
            assert!((form.r[q] - b.extent() as f64 / 6.0).abs() < 1e-12);
            let mm = DensityMatrix::maximally_mixed(b.d_right);
            assert!(frobenius_distance(form.sigma_blocks[q].matrix(), mm.matrix()) < 1e-10);
        }
    }

    #[test]
    fn symmetric_form_reassembles_s3_twirl() {
        let d = dec("s3/regular");
        let mut e0 = CVector::zeros(6);
        e0[0] = ONE;
        let sigma = twirl(d.rep(), &DensityMatrix::pure(&e0).unwrap());
        // direct 6-term twirl
        let mut direct = CMatrix::zeros(6, 6);
        for u in d.rep().matrices() {
            direct += u * sigma_source(&e0) * u.adjoint();
        }
        direct /= c(6.0, 0.0);
        assert!(frobenius_distance(&direct, sigma.matrix()) < 1e-14);
        let form = symmetric_form(&d, &sigma).unwrap();
        assert!((form.r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(form.reassembly_residual <= 1e-7);
        assert!(frobenius_distance(form.reassemble().matrix(), sigma.matrix()) <= 1e-7);
    }

    fn sigma_source(v: &CVector) -> CMatrix {
        v * v.adjoint()
    }

    #[test]
    fn symmetric_form_q8_canonical() {
        let d = dec("q8/u_tensor_I");
        // π ⊗ |e0⟩⟨e0| in the rotated frame, mapped back to the original basis.
        let mut local = CMatrix::zeros(4, 4);
        local[(0, 0)] = c(0.5, 0.0);
        local[(2, 2)] = c(0.5, 0.0);
        let sigma = DensityMatrix::new(d.from_rotated(&local)).unwrap();
        let form = symmetric_form(&d, &sigma).unwrap();
        assert_eq!(form.r.len(), 1);
        assert!((form.r[0] - 1.0).abs() < 1e-12);
        assert!((form.sigma_blocks[0].matrix()[(0, 0)].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_form_rejects_asymmetric() {
        let d = dec("z2/sign");
        assert!(matches!(symmetric_form(&d, &plus()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn block_probabilities_cases() {
        let d = dec("s3/regular");
        let p = block_probabilities(&d, &DensityMatrix::maximally_mixed(6));
        let expected: Vec<f64> = d.blocks().iter().map(|b| b.extent() as f64 / 6.0).collect();
        for (a, b) in p.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        // supported on one block
        let mut local = CMatrix::zeros(6, 6);
        let l = d.layout()[2];
        local[(l.offset, l.offset)] = ONE;
        let rho = DensityMatrix::new(d.from_rotated(&local)).unwrap();
        let p = block_probabilities(&d, &rho);
        assert!((p[2] - 1.0).abs() < 1e-12 && p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    /// Character-projector oracle: p_χ = Tr[P_χ ρ] with P_χ = (d_χ/|G|) Σ χ(g)* U_g.
    #[test]
    fn block_probabilities_match_character_projectors() {
        let d = dec("s3/regular");
        let mut e0 = CVector::zeros(6);
        e0[0] = ONE;
        let rho = DensityMatrix::pure(&e0).unwrap();
        let p = block_probabilities(&d, &rho);
        for (q, block) in d.blocks().iter().enumerate() {
            let mut proj = CMatrix::zeros(6, 6);
            for (g, u) in d.rep().matrices().iter().enumerate() {
                proj += u * (block.character[g].conj() * block.d_left as f64 / 6.0);
            }
            let oracle = trace(&(proj * rho.matrix())).re;
            assert!((p[q] - oracle).abs() < 1e-10);
        }
        // Regular rep: p = (1/6, 1/6, 4/6).
        assert!((p[0] - 1.0 / 6.0).abs() < 1e-10);
        assert!((p[2] - 4.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn reduced_left_states() {
        let d = dec("q8/u_tensor_I");
        let phi_rot = {
            let mut v = CVector::zeros(4);
            v[d.index(0, 0, 0)] = ONE;
            v[d.index(0, 1, 1)] = ONE;
            v
        };
        let phi = DensityMatrix::pure(&(d.basis_change().adjoint() * phi_rot)).unwrap();
        let left = reduced_left_state(&d, &phi, 0).unwrap();
        assert!(frobenius_distance(left.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-10);

        let prod_rot = {
            let mut v = CVector::zeros(4);
            v[d.index(0, 0, 0)] = ONE;
            v
        };
        let prod = DensityMatrix::pure(&(d.basis_change().adjoint() * prod_rot)).unwrap();
        let left = reduced_left_state(&d, &prod, 0).unwrap();
        assert!((left.matrix()[(0, 0)].re - 1.0).abs() < 1e-10);

        let s = dec("s3/regular");
        let sigma = DensityMatrix::maximally_mixed(6);
        for q in 0..3 {
            let l = reduced_left_state(&s, &sigma, q).unwrap();
            let mm = DensityMatrix::maximally_mixed(s.block(q).d_left);
            assert!(frobenius_distance(l.matrix(), mm.matrix()) < 1e-7);
        }
    }

    #[test]
    fn reduced_left_state_zero_mass() {
        let d = dec("z2/sign");
        let rho = diag_state(&[1.0, 0.0]);
        let empty = (0..2).find(|&q| block_probabilities(&d, &rho)[q] < 0.5).unwrap();
        assert_eq!(reduced_left_state(&d, &rho, empty).unwrap_err(), Error::ZeroBlockMass { block: empty });
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..6 {
            DensityMatrix::new(random_state(d, &mut rng).into_matrix()).unwrap();
            let p = random_pure_state(d, &mut rng);
            assert!(entropy(&p) < 1e-9);
        }
    }
}
