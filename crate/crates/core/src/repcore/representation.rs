use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, identity, unitarity_residual, CMatrix};

use super::group::FiniteGroup;

/// Default tolerance for unitarity and homomorphism residuals.
pub const DEFAULT_REP_TOL: f64 = 1e-9;

/// Size limits for tensor-power constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductCaps {
    /// Maximum Hilbert-space dimension `d_S^n`.
    pub max_dim: usize,
    /// Maximum order of `G^{×n}`.
    pub max_group_order: usize,
    /// Maximum number of stored complex entries, `|G|^n · d_S^{2n}`.
    pub max_entries: usize,
}

impl Default for ProductCaps {
    fn default() -> Self {
        Self { max_dim: 4096, max_group_order: 1024, max_entries: 1 << 22 }
    }
}

/// A unitary representation `g ↦ U_g` of a finite group.
///
/// Cloning is cheap: the group and the matrices are shared.
#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Arc<[CMatrix]>,
    unitarity_residual: f64,
    homomorphism_residual: f64,
}

impl Representation {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// Generator matrices, in the group's generator order.
    pub fn generator_matrices(&self) -> impl Iterator<Item = &CMatrix> {
        self.group.generators().iter().map(move |&g| &self.matrices[g])
    }

    /// Largest `‖U_g U_g† − I‖_F` over all elements.
    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// Largest `‖U_g U_s − U_{gs}‖_F` over all elements `g` and generators `s`.
    pub fn homomorphism_residual(&self) -> f64 {
        self.homomorphism_residual
    }

    /// Character `χ(g) = tr U_g` for every element.
    pub fn character(&self) -> Vec<num_complex::Complex64> {
        self.matrices.iter().map(crate::linalg::trace).collect()
    }
}

/// Validates a candidate representation. The homomorphism property is checked
/// on every pair `(g, s)` with `s` a generator, which implies it for all pairs.
pub fn validate_representation(
    group: Arc<FiniteGroup>,
    matrices: Vec<CMatrix>,
    tol: f64,
) -> Result<Representation> {
    if matrices.len() != group.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} matrices for a group of order {}",
            matrices.len(),
            group.order()
        )));
    }
    let dim = matrices[0].nrows();
    if dim == 0 {
        return Err(Error::ShapeMismatch("zero-dimensional representation".into()));
    }
    if let Some((g, m)) = matrices
        .iter()
        .enumerate()
        .find(|(_, m)| m.nrows() != dim || m.ncols() != dim)
    {
        return Err(Error::ShapeMismatch(format!(
            "matrix {g} is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }

    let mut unitarity = 0.0f64;
    for (element, u) in matrices.iter().enumerate() {
        let residual = unitarity_residual(u);
        if residual > tol {
            return Err(Error::NotUnitary { element, residual });
        }
        unitarity = unitarity.max(residual);
    }
    let e = group.identity();
    let id_residual = frobenius_distance(&matrices[e], &identity(dim));
    if id_residual > tol {
        return Err(Error::NotHomomorphism { g: e, h: e, residual: id_residual });
    }

    let mut homomorphism = id_residual;
    for g in 0..group.order() {
        for &s in group.generators() {
            let residual = frobenius_distance(&(&matrices[g] * &matrices[s]), &matrices[group.mul(g, s)]);
            if residual > tol {
                return Err(Error::NotHomomorphism { g, h: s, residual });
            }
            homomorphism = homomorphism.max(residual);
        }
    }

    Ok(Representation {
        group,
        dim,
        matrices: matrices.into(),
        unitarity_residual: unitarity,
        homomorphism_residual: homomorphism,
    })
}

/// The representation `(g_1, …, g_n) ↦ U_{g_1} ⊗ … ⊗ U_{g_n}` of `G^{×n}`.
pub fn product_representation(rep: &Representation, n: usize) -> Result<Representation> {
    product_representation_with_caps(rep, n, ProductCaps::default())
}

pub fn product_representation_with_caps(
    rep: &Representation,
    n: usize,
    caps: ProductCaps,
) -> Result<Representation> {
    assert!(n >= 1, "product representation needs n >= 1");
    if n == 1 {
        return Ok(rep.clone());
    }
    let too_big = |what, value: Option<usize>, cap| Error::DimensionCapExceeded {
        what,
        value: value.unwrap_or(usize::MAX),
        cap,
    };
    let dim = rep.dim.checked_pow(n as u32);
    if dim.is_none_or(|d| d > caps.max_dim) {
        return Err(too_big("dimension", dim, caps.max_dim));
    }
    let dim = dim.unwrap();
    let order = rep.group.order().checked_pow(n as u32);
    if order.is_none_or(|o| o > caps.max_group_order) {
        return Err(too_big("group order", order, caps.max_group_order));
    }
    let order = order.unwrap();
    let entries = order.checked_mul(dim * dim);
    if entries.is_none_or(|e| e > caps.max_entries) {
        return Err(too_big("stored entries", entries, caps.max_entries));
    }

    let group = Arc::new(rep.group.direct_power(n)?);
    let radices = vec![rep.group.order(); n];
    let matrices = (0..order)
        .map(|i| {
            let digits = crate::linalg::mixed_radix_digits(i, &radices);
            digits[1..]
                .iter()
                .fold(rep.matrices[digits[0]].clone(), |acc, &g| acc.kronecker(&rep.matrices[g]))
        })
        .collect();
    validate_representation(group, matrices, DEFAULT_REP_TOL * n as f64)
}
