//! Builtin groups and representations.
//!
//! Ids have the form `<group>/<rep>`, optionally prefixed by `catalog:`.
//! Groups: `trivial`, `z<n>` (1 ≤ n ≤ 64), `d<n>` (dihedral of order 2n,
//! 1 ≤ n ≤ 32), `s3`, `s4`, `q8`.
//!
//! Representations available for every group: `regular`, `trivial`.
//! Group-specific ones:
//!
//! | group     | reps                                              |
//! |-----------|---------------------------------------------------|
//! | `trivial` | `identity<d>` (1 ≤ d ≤ 16)                        |
//! | `z<n>`    | `phase` (charges 0..n on dim n), `sign` (n even)  |
//! | `d<n>`    | `standard`, `standard_tensor_I`, `natural`        |
//! | `s3`      | `sign`, `standard`, `standard_tensor_I`, `natural`|
//! | `s4`      | `sign`, `standard`, `natural`                     |
//! | `q8`      | `u`, `u_tensor_I`                                 |

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, CMatrix, ONE, ZERO};

use super::group::{validate_group, FiniteGroup};
use super::representation::{validate_representation, Representation, DEFAULT_REP_TOL};

/// Fixtures exercised by the acceptance suite and the golden classification table.
pub const FIXTURES: &[&str] = &[
    "trivial/identity2",
    "z2/sign",
    "z4/regular",
    "z8/phase",
    "s3/standard",
    "s3/natural",
    "s3/regular",
    "s3/standard_tensor_I",
    "q8/u",
    "q8/u_tensor_I",
    "q8/regular",
    "d4/standard_tensor_I",
    "d4/regular",
    "d5/standard",
    "s4/standard",
    "s4/natural",
];

pub fn strip_prefix(id: &str) -> &str {
    id.strip_prefix("catalog:").unwrap_or(id)
}

fn unknown(id: &str) -> Error {
    Error::UnknownCatalogId(id.to_string())
}

fn parse_indexed(name: &str, prefix: char, max: usize) -> Option<usize> {
    let n: usize = name.strip_prefix(prefix)?.parse().ok()?;
    (1..=max).contains(&n).then_some(n)
}

/// Builtin group by name.
pub fn group(name: &str) -> Result<FiniteGroup> {
    match name {
        "trivial" => validate_group(vec![vec![0]], vec![0]),
        "s3" => symmetric_group(3),
        "s4" => symmetric_group(4),
        "q8" => Ok(quaternion().0),
        _ => {
            if let Some(n) = parse_indexed(name, 'z', 64) {
                cyclic_group(n)
            } else if let Some(n) = parse_indexed(name, 'd', 32) {
                dihedral_group(n)
            } else {
                Err(unknown(name))
            }
        }
    }
}

/// Builtin representation by id, e.g. `q8/u_tensor_I` or `catalog:s3/regular`.
pub fn representation(id: &str) -> Result<Representation> {
    let bare = strip_prefix(id);
    let (group_name, rep_name) = bare.split_once('/').ok_or_else(|| unknown(id))?;
    let g = Arc::new(group(group_name).map_err(|_| unknown(id))?);
    let matrices = match (group_name, rep_name) {
        (_, "regular") => regular_matrices(&g),
        (_, "trivial") => vec![identity(1); g.order()],
        ("trivial", r) => {
            let d = parse_name_suffix(r, "identity", 16).ok_or_else(|| unknown(id))?;
            vec![identity(d)]
        }
        (z, "phase") if z.starts_with('z') => {
            let n = g.order();
            (0..n).map(|k| diagonal((0..n).map(|q| root_of_unity(n, q * k)))).collect()
        }
        (z, "sign") if z.starts_with('z') && g.order() % 2 == 0 => (0..g.order())
            .map(|k| diagonal([ONE, if k % 2 == 0 { ONE } else { -ONE }].into_iter()))
            .collect(),
        (d, r) if d.starts_with('d') => {
            let n = g.order() / 2;
            match r {
                "standard" => dihedral_standard(n),
                "standard_tensor_I" => tensor_identity(dihedral_standard(n), 2),
                "natural" => dihedral_natural(n),
                _ => return Err(unknown(id)),
            }
        }
        ("s3" | "s4", r) => {
            let k = if group_name == "s3" { 3 } else { 4 };
            let perms = permutations(k);
            match r {
                "sign" => perms.iter().map(|p| CMatrix::from_element(1, 1, c(sign(p), 0.0))).collect(),
                "natural" => perms.iter().map(|p| permutation_matrix(p)).collect(),
                "standard" => standard_matrices(&perms, k),
                "standard_tensor_I" if k == 3 => tensor_identity(standard_matrices(&perms, k), 2),
                _ => return Err(unknown(id)),
            }
        }
        ("q8", "u") => quaternion().1,
        ("q8", "u_tensor_I") => tensor_identity(quaternion().1, 2),
        _ => return Err(unknown(id)),
    };
    validate_representation(g, matrices, DEFAULT_REP_TOL)
}

fn parse_name_suffix(name: &str, stem: &str, max: usize) -> Option<usize> {
    let n: usize = name.strip_prefix(stem)?.parse().ok()?;
    (1..=max).contains(&n).then_some(n)
}

/// Every builtin representation id with small parameters, used by sweeps.
pub fn list() -> Vec<String> {
    let mut ids = vec!["trivial/identity1".to_string(), "trivial/identity2".into(), "trivial/identity3".into()];
    for n in [2, 3, 4, 8] {
        ids.push(format!("z{n}/regular"));
        ids.push(format!("z{n}/phase"));
    }
    ids.push("z2/sign".into());
    for n in [3, 4, 5] {
        for r in ["regular", "standard", "standard_tensor_I", "natural"] {
            ids.push(format!("d{n}/{r}"));
        }
    }
    for r in ["regular", "sign", "standard", "standard_tensor_I", "natural"] {
        ids.push(format!("s3/{r}"));
    }
    for r in ["regular", "sign", "standard", "natural"] {
        ids.push(format!("s4/{r}"));
    }
    for r in ["regular", "u", "u_tensor_I"] {
        ids.push(format!("q8/{r}"));
    }
    ids
}

fn root_of_unity(n: usize, k: usize) -> num_complex::Complex64 {
    let theta = 2.0 * PI * (k % n) as f64 / n as f64;
    c(theta.cos(), theta.sin())
}

fn diagonal(entries: impl ExactSizeIterator<Item = num_complex::Complex64>) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(entries.len(), entries))
}

fn tensor_identity(ms: Vec<CMatrix>, k: usize) -> Vec<CMatrix> {
    ms.into_iter().map(|m| m.kronecker(&identity(k))).collect()
}

fn regular_matrices(g: &FiniteGroup) -> Vec<CMatrix> {
    let n = g.order();
    (0..n)
        .map(|a| {
            let mut m = CMatrix::zeros(n, n);
            for b in 0..n {
                m[(g.mul(a, b), b)] = ONE;
            }
            m
        })
        .collect()
}

fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    validate_group(table, vec![if n > 1 { 1 } else { 0 }])
}

/// Element `r^k s^f` has index `k + n·f`.
fn dihedral_group(n: usize) -> Result<FiniteGroup> {
    let split = |x: usize| (x % n, x / n);
    let table = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let ((a, f), (b, h)) = (split(x), split(y));
                    let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                    k + n * (f ^ h)
                })
                .collect()
        })
        .collect();
    let generators = if n > 1 { vec![1, n] } else { vec![n] };
    validate_group(table, generators)
}

fn dihedral_standard(n: usize) -> Vec<CMatrix> {
    let w = root_of_unity(n, 1);
    let rot = diagonal([w, w.conj()].into_iter());
    let flip = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    (0..2 * n)
        .map(|x| {
            let (k, f) = (x % n, x / n);
            let r = (0..k).fold(identity(2), |acc, _| acc * &rot);
            if f == 1 { r * &flip } else { r }
        })
        .collect()
}

fn dihedral_natural(n: usize) -> Vec<CMatrix> {
    (0..2 * n)
        .map(|x| {
            let (a, f) = (x % n, x / n);
            let perm: Vec<usize> = (0..n)
                .map(|v| if f == 0 { (a + v) % n } else { (a + n - v) % n })
                .collect();
            permutation_matrix(&perm)
        })
        .collect()
}

/// Permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// `S_k` with product `(g·h)(i) = g(h(i))`; generated by `(0 1)` and the k-cycle.
fn symmetric_group(k: usize) -> Result<FiniteGroup> {
    let perms = permutations(k);
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let table = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| index(&h.iter().map(|&i| g[i]).collect()))
                .collect()
        })
        .collect();
    let mut swap: Vec<usize> = (0..k).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    validate_group(table, vec![index(&swap), index(&cycle)])
}

fn sign(p: &[usize]) -> f64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 { 1.0 } else { -1.0 }
}

fn permutation_matrix(p: &[usize]) -> CMatrix {
    let mut m = CMatrix::zeros(p.len(), p.len());
    for (i, &pi) in p.iter().enumerate() {
        m[(pi, i)] = ONE;
    }
    m
}

/// Natural representation restricted to the orthogonal complement of the
/// all-ones vector, in the Helmert basis.
fn standard_matrices(perms: &[Vec<usize>], k: usize) -> Vec<CMatrix> {
    let mut basis = CMatrix::zeros(k, k - 1);
    for j in 1..k {
        let norm = ((j * (j + 1)) as f64).sqrt();
        for i in 0..j {
            basis[(i, j - 1)] = c(1.0 / norm, 0.0);
        }
        basis[(j, j - 1)] = c(-(j as f64) / norm, 0.0);
    }
    perms
        .iter()
        .map(|p| basis.adjoint() * permutation_matrix(p) * &basis)
        .collect()
}

/// Q8 = {1, −1, i, −i, j, −j, k, −k} with its faithful 2-dim irrep.
fn quaternion() -> (FiniteGroup, Vec<CMatrix>) {
    let i = c(0.0, 1.0);
    let qi = CMatrix::from_row_slice(2, 2, &[i, ZERO, ZERO, -i]);
    let qj = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]);
    let qk = &qi * &qj;
    let one = identity(2);
    let mats = vec![
        one.clone(),
        -one,
        qi.clone(),
        -qi,
        qj.clone(),
        -qj,
        qk.clone(),
        -qk,
    ];
    let find = |m: &CMatrix| {
        mats.iter()
            .position(|x| crate::linalg::frobenius_distance(x, m) < 1e-12)
            .expect("Q8 closed under multiplication")
    };
    let table = (0..8)
        .map(|a| (0..8).map(|b| find(&(&mats[a] * &mats[b]))).collect())
        .collect();
    let group = validate_group(table, vec![2, 4]).expect("Q8 table is a group");
    (group, mats)
}
