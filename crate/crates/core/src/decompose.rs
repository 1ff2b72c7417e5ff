//! Isotypic (direct-sum-product) decomposition of a unitary representation.
//!
//! The rotated space is laid out block by block. Inside block `q` the basis
//! vector with irrep index `a < d_L` and multiplicity index `r < d_R` sits at
//! `offset_q + a·d_R + r`, so that `B U_g B† = ⊕_q u_{g,q} ⊗ I_{d_R}`.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, frobenius_distance, hermitian_eigen, identity, mixed_radix_digits, mixed_radix_index,
    random_hermitian, trace, CMatrix, ZERO,
};
use crate::repcore::{product_representation_with_caps, ProductCaps, Representation};

pub const DEFAULT_DECOMP_TOL: f64 = 1e-7;
pub const DEFAULT_GAP_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_RETRIES: usize = 8;
/// Tolerance on character norms and character comparisons.
const CHARACTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeOptions {
    pub tol: f64,
    pub seed: u64,
    pub gap_tol: f64,
    pub max_retries: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_DECOMP_TOL, seed: 42, gap_tol: DEFAULT_GAP_TOL, max_retries: DEFAULT_MAX_RETRIES }
    }
}

/// One isotypic component: irrep `q` of dimension `d_left` appearing with
/// multiplicity `d_right`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotypicBlock {
    pub label: usize,
    pub d_left: usize,
    pub d_right: usize,
    #[serde(skip)]
    pub character: Vec<Complex64>,
}

impl IsotypicBlock {
    pub fn extent(&self) -> usize {
        self.d_left * self.d_right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockLayout {
    pub offset: usize,
    pub extent: usize,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    rep: Representation,
    blocks: Vec<IsotypicBlock>,
    basis_change: CMatrix,
    layout: Vec<BlockLayout>,
    generator_residual: f64,
}

impl Decomposition {
    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn blocks(&self) -> &[IsotypicBlock] {
        &self.blocks
    }

    pub fn block(&self, q: usize) -> &IsotypicBlock {
        &self.blocks[q]
    }

    /// The unitary `B` mapping the original basis to the block layout.
    pub fn basis_change(&self) -> &CMatrix {
        &self.basis_change
    }

    pub fn layout(&self) -> &[BlockLayout] {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// `Σ_q d_R`.
    pub fn total_multiplicity(&self) -> usize {
        self.blocks.iter().map(|b| b.d_right).sum()
    }

    /// Largest generator reconstruction residual, measured at construction.
    pub fn generator_residual(&self) -> f64 {
        self.generator_residual
    }

    /// `B m B†`.
    pub fn to_rotated(&self, m: &CMatrix) -> CMatrix {
        &self.basis_change * m * self.basis_change.adjoint()
    }

    /// `B† m B`.
    pub fn from_rotated(&self, m: &CMatrix) -> CMatrix {
        self.basis_change.adjoint() * m * &self.basis_change
    }

    /// Rotated index of `(q, a, r)`.
    pub fn index(&self, q: usize, a: usize, r: usize) -> usize {
        self.layout[q].offset + a * self.blocks[q].d_right + r
    }

    /// The `(d_L d_R)`-square diagonal block `q` of an already rotated matrix.
    pub fn diagonal_block(&self, rotated: &CMatrix, q: usize) -> CMatrix {
        let l = self.layout[q];
        rotated.view((l.offset, l.offset), (l.extent, l.extent)).into_owned()
    }

    /// Embeds a block-local operator into the full rotated space (zeros elsewhere).
    pub fn embed_block(&self, q: usize, local: &CMatrix) -> CMatrix {
        let l = self.layout[q];
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        out.view_mut((l.offset, l.offset), (l.extent, l.extent)).copy_from(local);
        out
    }

    /// Irrep matrix `u_{g,q}` read from multiplicity slot `slot`.
    pub fn irrep_matrix(&self, g: usize, q: usize, slot: usize) -> CMatrix {
        let rotated = self.to_rotated(self.rep.matrix(g));
        self.irrep_from_rotated(&rotated, q, slot)
    }

    fn irrep_from_rotated(&self, rotated: &CMatrix, q: usize, slot: usize) -> CMatrix {
        let d = self.blocks[q].d_left;
        CMatrix::from_fn(d, d, |a, b| rotated[(self.index(q, a, slot), self.index(q, b, slot))])
    }

    /// `⊕_q u_{g,q} ⊗ I_{d_R}` built from slot 0 of the rotated `U_g`.
    fn block_model(&self, rotated: &CMatrix) -> CMatrix {
        let mut model = CMatrix::zeros(self.dim(), self.dim());
        for (q, block) in self.blocks.iter().enumerate() {
            let u = self.irrep_from_rotated(rotated, q, 0);
            let local = u.kronecker(&identity(block.d_right));
            let l = self.layout[q];
            model.view_mut((l.offset, l.offset), (l.extent, l.extent)).copy_from(&local);
        }
        model
    }

    /// `‖B U_g B† − ⊕_q u_{g,q} ⊗ I‖_F` for one element.
    pub fn reconstruction_residual(&self, g: usize) -> f64 {
        let rotated = self.to_rotated(self.rep.matrix(g));
        frobenius_distance(&rotated, &self.block_model(&rotated))
    }

    /// Largest reconstruction residual over every group element.
    pub fn max_reconstruction_residual(&self) -> f64 {
        (0..self.rep.group().order())
            .map(|g| self.reconstruction_residual(g))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise disagreement between irrep copies in different
    /// multiplicity slots, over all elements.
    pub fn max_alignment_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for g in 0..self.rep.group().order() {
            let rotated = self.to_rotated(self.rep.matrix(g));
            for (q, block) in self.blocks.iter().enumerate() {
                let first = self.irrep_from_rotated(&rotated, q, 0);
                for slot in 1..block.d_right {
                    let other = self.irrep_from_rotated(&rotated, q, slot);
                    let diff = first.iter().zip(other.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                    worst = worst.max(diff);
                }
            }
        }
        worst
    }

    /// `‖B B† − I‖_F`.
    pub fn basis_unitarity_residual(&self) -> f64 {
        crate::linalg::unitarity_residual(&self.basis_change)
    }

    /// Block multiset `(d_L, d_R)` in canonical order.
    pub fn block_dims(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.d_left, b.d_right)).collect()
    }

    /// Decomposition of the product representation on `n` copies, assembled
    /// from this one: blocks are indexed by `(q_1, …, q_n)` with
    /// `d_L = Π d_L(q_i)`, `d_R = Π d_R(q_i)` and basis change a permutation
    /// of `B^{⊗n}`.
    pub fn tensor_power(&self, n: usize) -> Result<Decomposition> {
        self.tensor_power_with_caps(n, ProductCaps::default())
    }

    pub fn tensor_power_with_caps(&self, n: usize, caps: ProductCaps) -> Result<Decomposition> {
        assert!(n >= 1, "tensor power needs n >= 1");
        if n == 1 {
            return Ok(self.clone());
        }
        let rep_n = product_representation_with_caps(&self.rep, n, caps)?;
        let nq = self.blocks.len();
        let order = self.rep.group().order();
        let q_radices = vec![nq; n];
        let g_radices = vec![order; n];
        let group_digits: Vec<Vec<usize>> = (0..rep_n.group().order())
            .map(|g| mixed_radix_digits(g, &g_radices))
            .collect();

        struct Candidate {
            qs: Vec<usize>,
            block: IsotypicBlock,
        }
        let mut candidates: Vec<Candidate> = (0..nq.pow(n as u32))
            .map(|index| {
                let qs = mixed_radix_digits(index, &q_radices);
                let d_left = qs.iter().map(|&q| self.blocks[q].d_left).product();
                let d_right = qs.iter().map(|&q| self.blocks[q].d_right).product();
                let character = group_digits
                    .iter()
                    .map(|gs| {
                        let chi: Complex64 =
                            qs.iter().zip(gs).map(|(&q, &g)| self.blocks[q].character[g]).product();
                        round_character(chi)
                    })
                    .collect();
                Candidate { qs, block: IsotypicBlock { label: 0, d_left, d_right, character } }
            })
            .collect();
        candidates.sort_by(|x, y| block_order(&x.block, &y.block));

        let mut position_of = vec![0usize; candidates.len()];
        let mut layout = Vec::with_capacity(candidates.len());
        let mut offset = 0;
        for (pos, cand) in candidates.iter().enumerate() {
            position_of[mixed_radix_index(&cand.qs, &q_radices)] = pos;
            layout.push(BlockLayout { offset, extent: cand.block.extent() });
            offset += cand.block.extent();
        }

        // Per-copy lookup: rotated index -> (q, a, r).
        let d = self.dim();
        let mut local = vec![(0, 0, 0); d];
        for (q, block) in self.blocks.iter().enumerate() {
            for a in 0..block.d_left {
                for r in 0..block.d_right {
                    local[self.index(q, a, r)] = (q, a, r);
                }
            }
        }

        let big = rep_n.dim();
        let b_pow = (1..n).fold(self.basis_change.clone(), |acc, _| acc.kronecker(&self.basis_change));
        let mut basis_change = CMatrix::zeros(big, big);
        for t in 0..big {
            let parts: Vec<(usize, usize, usize)> =
                mixed_radix_digits(t, &vec![d; n]).into_iter().map(|i| local[i]).collect();
            let qs: Vec<usize> = parts.iter().map(|p| p.0).collect();
            let pos = position_of[mixed_radix_index(&qs, &q_radices)];
            let l_radices: Vec<usize> = qs.iter().map(|&q| self.blocks[q].d_left).collect();
            let r_radices: Vec<usize> = qs.iter().map(|&q| self.blocks[q].d_right).collect();
            let a = mixed_radix_index(&parts.iter().map(|p| p.1).collect::<Vec<_>>(), &l_radices);
            let r = mixed_radix_index(&parts.iter().map(|p| p.2).collect::<Vec<_>>(), &r_radices);
            let d_right = candidates[pos].block.d_right;
            basis_change.set_row(layout[pos].offset + a * d_right + r, &b_pow.row(t));
        }

        let blocks = candidates
            .into_iter()
            .enumerate()
            .map(|(label, c)| IsotypicBlock { label, ..c.block })
            .collect();
        let mut dec = Decomposition { rep: rep_n, blocks, basis_change, layout, generator_residual: 0.0 };
        dec.generator_residual = dec.generator_reconstruction_residual();
        Ok(dec)
    }

    fn generator_reconstruction_residual(&self) -> f64 {
        self.rep
            .group()
            .generators()
            .iter()
            .map(|&g| self.reconstruction_residual(g))
            .fold(0.0, f64::max)
    }
}

/// `(1/|G|) Σ_g U_g X U_g†`, summed in element order.
pub fn group_average(rep: &Representation, x: &CMatrix) -> CMatrix {
    let mut acc = CMatrix::zeros(rep.dim(), rep.dim());
    for u in rep.matrices() {
        acc += u * x * u.adjoint();
    }
    acc / Complex64::from(rep.group().order() as f64)
}

fn round_character(chi: Complex64) -> Complex64 {
    let re = chi.re.round();
    if (chi - Complex64::new(re, 0.0)).norm() <= CHARACTER_TOL {
        Complex64::new(re, 0.0)
    } else {
        chi
    }
}

fn quantize(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn block_order(x: &IsotypicBlock, y: &IsotypicBlock) -> Ordering {
    (x.d_left, x.d_right).cmp(&(y.d_left, y.d_right)).then_with(|| {
        let key = |b: &IsotypicBlock| -> Vec<(i64, i64)> {
            b.character.iter().map(|z| (quantize(z.re), quantize(z.im))).collect()
        };
        key(x).cmp(&key(y))
    })
}

fn characters_match(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= CHARACTER_TOL)
}

/// Decomposes `rep` with default gap tolerance and retry budget.
pub fn decompose(rep: &Representation, tol: f64, seed: u64) -> Result<Decomposition> {
    decompose_with(rep, &DecomposeOptions { tol, seed, ..DecomposeOptions::default() })
}

/// Splits the space with the eigenspaces of a twirled random Hermitian
/// matrix, groups irrep copies by character, and aligns copies with
/// twirled intertwiners.
pub fn decompose_with(rep: &Representation, opts: &DecomposeOptions) -> Result<Decomposition> {
    for attempt in 0..opts.max_retries.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(attempt as u64);
        let h = random_hermitian(rep.dim(), &mut rng);
        let x = group_average(rep, &h);
        if let Some(dec) = split(rep, &x, opts.gap_tol) {
            if dec.generator_residual > opts.tol {
                return Err(Error::ResidualTooLarge { actual: dec.generator_residual, tol: opts.tol });
            }
            return Ok(dec);
        }
    }
    Err(Error::DegenerateSplit { attempts: opts.max_retries.max(1) })
}

/// Returns `None` when some eigenvalue cluster is not a single irrep copy.
fn split(rep: &Representation, commutant_element: &CMatrix, gap_tol: f64) -> Option<Decomposition> {
    let dim = rep.dim();
    let order = rep.group().order();
    let (values, vectors) = hermitian_eigen(commutant_element);
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));

    let mut clusters: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for i in 1..=dim {
        if i == dim || values[i] - values[i - 1] > gap_tol * scale {
            clusters.push(start..i);
            start = i;
        }
    }

    struct Isotypic {
        character: Vec<Complex64>,
        copies: Vec<CMatrix>,
    }
    let mut components: Vec<Isotypic> = Vec::new();
    for range in clusters {
        let k = range.len();
        let v = vectors.columns(range.start, k).into_owned();
        let character: Vec<Complex64> = rep
            .matrices()
            .iter()
            .map(|u| trace(&(v.adjoint() * u * &v)))
            .collect();
        let norm = character.iter().map(|z| z.norm_sqr()).sum::<f64>() / order as f64;
        if (norm - 1.0).abs() > CHARACTER_TOL || (character[rep.group().identity()].re - k as f64).abs() > CHARACTER_TOL {
            return None;
        }
        let character: Vec<Complex64> = character.into_iter().map(round_character).collect();
        match components.iter_mut().find(|c| characters_match(&c.character, &character)) {
            Some(c) => {
                if c.copies[0].ncols() != k {
                    return None;
                }
                c.copies.push(v);
            }
            None => components.push(Isotypic { character, copies: vec![v] }),
        }
    }

    for comp in &mut components {
        let reference = comp.copies[0].clone();
        let reference_irrep: Vec<CMatrix> =
            rep.matrices().iter().map(|u| reference.adjoint() * u * &reference).collect();
        for copy in comp.copies.iter_mut().skip(1) {
            let irrep: Vec<CMatrix> = rep.matrices().iter().map(|u| copy.adjoint() * u * &*copy).collect();
            let t = intertwiner(&irrep, &reference_irrep)?;
            *copy = &*copy * t;
        }
    }

    let mut blocks: Vec<(IsotypicBlock, Vec<CMatrix>)> = components
        .into_iter()
        .map(|c| {
            let block = IsotypicBlock {
                label: 0,
                d_left: c.copies[0].ncols(),
                d_right: c.copies.len(),
                character: c.character,
            };
            (block, c.copies)
        })
        .collect();
    blocks.sort_by(|x, y| block_order(&x.0, &y.0));

    let mut columns = CMatrix::zeros(dim, dim);
    let mut layout = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for (block, copies) in &blocks {
        for (r, copy) in copies.iter().enumerate() {
            for a in 0..block.d_left {
                columns.set_column(offset + a * block.d_right + r, &copy.column(a));
            }
        }
        layout.push(BlockLayout { offset, extent: block.extent() });
        offset += block.extent();
    }
    debug_assert_eq!(offset, dim);

    let blocks = blocks
        .into_iter()
        .enumerate()
        .map(|(label, (b, _))| IsotypicBlock { label, ..b })
        .collect();
    let mut dec = Decomposition {
        rep: rep.clone(),
        blocks,
        basis_change: columns.adjoint(),
        layout,
        generator_residual: 0.0,
    };
    dec.generator_residual = dec.generator_reconstruction_residual();
    Some(dec)
}

/// Unitary `T` with `target_g T = T reference_g` for all `g`, obtained by
/// twirling the matrix unit that gives the largest result.
fn intertwiner(target: &[CMatrix], reference: &[CMatrix]) -> Option<CMatrix> {
    let d = reference[0].nrows();
    let mut best: Option<(f64, CMatrix)> = None;
    for i in 0..d {
        for j in 0..d {
            let mut acc = CMatrix::zeros(d, d);
            for (t, r) in target.iter().zip(reference) {
                acc += t.column(i) * r.column(j).adjoint();
            }
            let norm = frobenius(&acc);
            if best.as_ref().is_none_or(|(n, _)| norm > *n) {
                best = Some((norm, acc));
            }
        }
    }
    let (norm, j) = best?;
    (norm > 1e-9).then(|| j * Complex64::from((d as f64).sqrt() / norm))
}

/// `true` iff every irrep is one-dimensional (`d_S = Σ_q d_R`).
pub fn is_abelian_rep(dec: &Decomposition) -> bool {
    non_abelian_witness(dec).is_none()
}

/// First block with `d_L ≥ 2`, if any.
pub fn non_abelian_witness(dec: &Decomposition) -> Option<&IsotypicBlock> {
    dec.blocks.iter().find(|b| b.d_left >= 2)
}

/// `true` iff `Σ_q d_R = 1`.
pub fn is_irreducible(dec: &Decomposition) -> bool {
    dec.total_multiplicity() == 1
}

/// Orthonormal (Frobenius) basis of `{X : U_s X = X U_s for all generators s}`.
///
/// The eigenspaces of one generator fix a block-diagonal ansatz; the other
/// generators are imposed by a null-space solve inside that ansatz.
pub fn commutant_basis(rep: &Representation) -> Vec<CMatrix> {
    let dim = rep.dim();
    let generators: Vec<&CMatrix> = rep.generator_matrices().collect();

    let spectral = generators
        .iter()
        .map(|u| eigenspaces_of_unitary(u))
        .min_by_key(|spaces| spaces.iter().map(|s| s.ncols().pow(2)).sum::<usize>())
        .unwrap_or_else(|| vec![identity(dim)]);

    let mut basis: Vec<CMatrix> = Vec::new();
    for space in &spectral {
        for i in 0..space.ncols() {
            for j in 0..space.ncols() {
                basis.push(space.column(i) * space.column(j).adjoint());
            }
        }
    }

    for u in &generators {
        if basis.is_empty() {
            break;
        }
        let images: Vec<CMatrix> = basis.iter().map(|x| *u * x - x * *u).collect();
        if images.iter().all(|m| frobenius(m) < 1e-12) {
            continue;
        }
        let k = basis.len();
        let a = CMatrix::from_fn(dim * dim, k, |row, col| images[col][(row / dim, row % dim)]);
        let svd = a.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cutoff = 1e-7 * max.max(1.0);
        let mut next = Vec::new();
        for (idx, &s) in svd.singular_values.iter().enumerate() {
            if s <= cutoff {
                let mut x = CMatrix::zeros(dim, dim);
                for (l, b) in basis.iter().enumerate() {
                    x += b * v_t[(idx, l)].conj();
                }
                next.push(x);
            }
        }
        basis = next;
    }
    basis
}

/// Eigenspaces of a unitary, as isometries grouped by eigenvalue.
fn eigenspaces_of_unitary(u: &CMatrix) -> Vec<CMatrix> {
    let dim = u.nrows();
    let (q, t) = u.clone().schur().unpack();
    let mut groups: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for i in 0..dim {
        let lambda = t[(i, i)];
        match groups.iter_mut().find(|(mu, _)| (lambda - mu).norm() < 1e-8) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((lambda, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, idx)| {
            let mut m = CMatrix::zeros(dim, idx.len());
            for (c, &i) in idx.iter().enumerate() {
                m.set_column(c, &q.column(i));
            }
            m
        })
        .collect()
}

/// Dimension of the span of `{U_g}`, from the rank of their Gram matrix.
pub fn algebra_dimension(rep: &Representation) -> usize {
    let n = rep.group().order();
    let mats = rep.matrices();
    let d = rep.dim() as f64;
    let mut gram = CMatrix::from_element(n, n, ZERO);
    for g in 0..n {
        for h in g..n {
            let z = mats[g].iter().zip(mats[h].iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>() / d;
            gram[(g, h)] = z;
            gram[(h, g)] = z.conj();
        }
    }
    crate::linalg::hermitian_eigenvalues(&gram)
        .into_iter()
        .filter(|&x| x > 1e-7 * n as f64)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcore::{catalog, product_representation};

    fn dec(id: &str) -> Decomposition {
        decompose(&catalog::representation(id).unwrap(), DEFAULT_DECOMP_TOL, 42).unwrap()
    }

    /// Commutant dimension by brute force: null space of the stacked
    /// vectorised constraints `(U_s ⊗ I − I ⊗ U_sᵀ) vec X = 0`.
    fn commutant_dimension_oracle(rep: &Representation) -> usize {
        let d = rep.dim();
        let gens: Vec<&CMatrix> = rep.generator_matrices().collect();
        let mut stacked = CMatrix::zeros(d * d * gens.len(), d * d);
        for (k, u) in gens.iter().enumerate() {
            let c = u.kronecker(&identity(d)) - identity(d).kronecker(&u.transpose());
            stacked.view_mut((k * d * d, 0), (d * d, d * d)).copy_from(&c);
        }
        d * d - crate::linalg::rank(&stacked, 1e-9)
    }

    #[test]
    fn commutant_sizes() {
        let trivial = catalog::representation("trivial/identity3").unwrap();
        assert_eq!(commutant_basis(&trivial).len(), 9);
        let q8 = catalog::representation("q8/u").unwrap();
        let basis = commutant_basis(&q8);
        assert_eq!(basis.len(), 1);
        // proportional to I/√2
        let b = &basis[0];
        let phase = b[(0, 0)] / b[(0, 0)].norm();
        let normalized = b / phase;
        assert!(frobenius_distance(&normalized, &(identity(2) / Complex64::from(2f64.sqrt()))) < 1e-9);
        let s3 = catalog::representation("s3/regular").unwrap();
        assert_eq!(commutant_basis(&s3).len(), 6);
        for id in ["s3/regular", "q8/u_tensor_I", "d4/regular", "s3/natural"] {
            let rep = catalog::representation(id).unwrap();
            assert_eq!(commutant_basis(&rep).len(), commutant_dimension_oracle(&rep), "{id}");
        }
    }

    #[test]
    fn commutant_basis_is_orthonormal_and_commutes() {
        let rep = catalog::representation("s3/regular").unwrap();
        let basis = commutant_basis(&rep);
        for (i, x) in basis.iter().enumerate() {
            for u in rep.matrices() {
                assert!(frobenius_distance(&(u * x), &(x * u)) < 1e-9);
            }
            for (j, y) in basis.iter().enumerate() {
                let ip = crate::linalg::trace(&(x.adjoint() * y));
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::from(expected)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn sign_rep_is_already_split() {
        let d = dec("z2/sign");
        assert_eq!(d.block_dims(), vec![(1, 1), (1, 1)]);
        assert!(is_abelian_rep(&d));
        assert!(!is_irreducible(&d));
        // characters compare lexicographically: (1, -1) before (1, 1)
        assert_eq!(d.block(0).character, vec![Complex64::from(1.0), Complex64::from(-1.0)]);
        assert_eq!(d.block(1).character, vec![Complex64::from(1.0); 2]);
    }

    #[test]
    fn q8_irrep() {
        let d = dec("q8/u");
        assert_eq!(d.block_dims(), vec![(2, 1)]);
        assert!(is_irreducible(&d));
        assert!(!is_abelian_rep(&d));
        let norm: f64 = d.block(0).character.iter().map(|z| z.norm_sqr()).sum::<f64>() / 8.0;
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q8_doubled() {
        let d = dec("q8/u_tensor_I");
        assert_eq!(d.block_dims(), vec![(2, 2)]);
        assert_eq!(non_abelian_witness(&d).map(|b| (b.d_left, b.d_right)), Some((2, 2)));
        assert!(d.max_alignment_residual() < 1e-8);
    }

    /// Character-projector oracle for the S3 regular representation: the
    /// projector `(d_χ/|G|) Σ_g χ(g)* U_g` onto each isotypic component has
    /// rank `d_χ²`, matching the `d_L·d_R` extents.
    #[test]
    fn s3_regular_matches_character_projectors() {
        let rep = catalog::representation("s3/regular").unwrap();
        let d = decompose(&rep, DEFAULT_DECOMP_TOL, 42).unwrap();
        assert_eq!(d.block_dims(), vec![(1, 1), (1, 1), (2, 2)]);
        assert_eq!(d.blocks().iter().map(|b| b.extent()).sum::<usize>(), 6);

        let trivial = catalog::representation("s3/trivial").unwrap().character();
        let sign = catalog::representation("s3/sign").unwrap().character();
        let standard = catalog::representation("s3/standard").unwrap().character();
        for (chi, dchi) in [(&trivial, 1.0), (&sign, 1.0), (&standard, 2.0)] {
            let mut p = CMatrix::zeros(6, 6);
            for (g, u) in rep.matrices().iter().enumerate() {
                p += u * (chi[g].conj() * dchi / 6.0);
            }
            let r = crate::linalg::rank(&p, 1e-9);
            assert_eq!(r, (dchi * dchi) as usize);
            let block = d.blocks().iter().find(|b| characters_match(&b.character, chi)).unwrap();
            assert_eq!(block.extent(), r);
        }
        assert!(!is_abelian_rep(&d));
        assert!(!is_irreducible(&d));
        assert_eq!(non_abelian_witness(&d).map(|b| (b.d_left, b.d_right)), Some((2, 2)));
    }

    #[test]
    fn trivial_group_reducible() {
        let d = dec("trivial/identity2");
        assert_eq!(d.block_dims(), vec![(1, 2)]);
        assert!(!is_irreducible(&d));
        assert!(is_abelian_rep(&d));
    }

    #[test]
    fn reconstruction_over_all_elements() {
        for id in ["s3/regular", "d4/regular", "q8/regular", "s4/natural", "z8/phase"] {
            let d = dec(id);
            assert!(d.max_reconstruction_residual() < 1e-6, "{id}");
            assert!(d.max_alignment_residual() < 1e-6, "{id}");
            assert!(d.basis_unitarity_residual() < 1e-9, "{id}");
        }
    }

    #[test]
    fn block_data_is_seed_independent() {
        let rep = catalog::representation("d4/regular").unwrap();
        let reference = decompose(&rep, DEFAULT_DECOMP_TOL, 0).unwrap().block_dims();
        for seed in 1..5 {
            assert_eq!(decompose(&rep, DEFAULT_DECOMP_TOL, seed).unwrap().block_dims(), reference);
        }
    }

    #[test]
    fn algebra_dimension_counts() {
        assert_eq!(algebra_dimension(&catalog::representation("s3/regular").unwrap()), 6);
        assert_eq!(algebra_dimension(&catalog::representation("q8/u_tensor_I").unwrap()), 4);
        assert_eq!(algebra_dimension(&catalog::representation("s3/natural").unwrap()), 5);
    }

    #[test]
    fn deterministic_per_seed() {
        let rep = catalog::representation("s3/regular").unwrap();
        let a = decompose(&rep, DEFAULT_DECOMP_TOL, 9).unwrap();
        let b = decompose(&rep, DEFAULT_DECOMP_TOL, 9).unwrap();
        assert_eq!(a.basis_change(), b.basis_change());
    }

    #[test]
    fn zero_retries_still_tries_once() {
        let rep = catalog::representation("z2/sign").unwrap();
        let opts = DecomposeOptions { max_retries: 0, ..Default::default() };
        assert!(decompose_with(&rep, &opts).is_ok());
    }

    #[test]
    fn impossible_gap_tolerance_reports_degenerate_split() {
        // A gap tolerance larger than the spectrum merges every copy into one cluster.
        let rep = catalog::representation("s3/regular").unwrap();
        let opts = DecomposeOptions { gap_tol: 1e3, max_retries: 2, ..Default::default() };
        assert_eq!(decompose_with(&rep, &opts).unwrap_err(), Error::DegenerateSplit { attempts: 2 });
    }

    #[test]
    fn tensor_power_matches_direct_decomposition() {
        for id in ["z2/sign", "q8/u", "s3/standard"] {
            let d1 = dec(id);
            let d2 = d1.tensor_power(2).unwrap();
            assert!(d2.generator_residual() < 1e-9, "{id}");
            assert!(d2.max_reconstruction_residual() < 1e-8, "{id}");
            assert!(d2.basis_unitarity_residual() < 1e-9, "{id}");
            let direct = decompose(&product_representation(d1.rep(), 2).unwrap(), DEFAULT_DECOMP_TOL, 1).unwrap();
            assert_eq!(d2.block_dims(), direct.block_dims(), "{id}");
        }
    }
}
