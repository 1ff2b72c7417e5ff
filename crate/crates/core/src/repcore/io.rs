//! JSON input format for groups, representations and density matrices.
//!
//! A representation file is a single JSON object
//!
//! ```json
//! { "order": 2, "cayley": [[0,1],[1,0]], "generators": [1],
//!   "dim": 2, "matrices": [ [[[1,0],[0,0]],[[0,0],[1,0]]],
//!                           [[[1,0],[0,0]],[[0,0],[-1,0]]] ] }
//! ```
//!
//! where every complex entry is a `[re, im]` pair. Density matrices use
//! `{ "dim": d, "matrix": [[[re, im], …], …] }`.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

use super::catalog;
use super::group::validate_group;
use super::representation::{validate_representation, Representation};

/// Environment variable naming a directory of extra catalog entries laid out
/// as `<dir>/<group>/<rep>.json`.
pub const CATALOG_DIR_ENV: &str = "ASYMCAP_CATALOG_DIR";

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
    pub dim: usize,
    pub matrices: Vec<JsonMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixFile {
    pub dim: usize,
    pub matrix: JsonMatrix,
}

fn malformed(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::MalformedInput { field: field.into(), message: message.into() }
}

fn json_error(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    let msg = inner.to_string();
    // Unknown and missing keys are named by serde itself; everything else is
    // located by the path to the offending value.
    let named = msg.split('`').nth(1).filter(|_| msg.contains("field")).map(str::to_string);
    let field = match (named, path.as_str()) {
        (Some(name), "." | "") => name,
        (None, "." | "") => format!("line {} column {}", inner.line(), inner.column()),
        (_, p) => p.to_string(),
    };
    malformed(field, msg)
}

pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(json_error)?;
    de.end().map_err(|e| malformed(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    Ok(value)
}

pub fn matrix_from_json(m: &JsonMatrix, dim: usize, field: &str) -> Result<CMatrix> {
    if m.len() != dim {
        return Err(malformed(field, format!("expected {dim} rows, found {}", m.len())));
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (i, row) in m.iter().enumerate() {
        if row.len() != dim {
            return Err(malformed(
                format!("{field}[{i}]"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(malformed(format!("{field}[{i}][{j}]"), "non-finite entry"));
            }
            out[(i, j)] = c(re, im);
        }
    }
    Ok(out)
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Parses and validates a representation document.
pub fn representation_from_json(text: &str, tol: f64) -> Result<Representation> {
    let file: RepresentationFile = parse_json(text)?;
    representation_from_file(&file, tol)
}

pub fn representation_from_file(file: &RepresentationFile, tol: f64) -> Result<Representation> {
    if file.cayley.len() != file.order {
        return Err(malformed(
            "order",
            format!("order {} but cayley has {} rows", file.order, file.cayley.len()),
        ));
    }
    if file.matrices.len() != file.order {
        return Err(malformed(
            "matrices",
            format!("expected {} matrices, found {}", file.order, file.matrices.len()),
        ));
    }
    if file.dim == 0 {
        return Err(malformed("dim", "dimension must be positive"));
    }
    let group = validate_group(file.cayley.clone(), file.generators.clone())?;
    let matrices = file
        .matrices
        .iter()
        .enumerate()
        .map(|(g, m)| matrix_from_json(m, file.dim, &format!("matrices[{g}]")))
        .collect::<Result<Vec<_>>>()?;
    validate_representation(Arc::new(group), matrices, tol)
}

pub fn representation_to_file(rep: &Representation) -> RepresentationFile {
    RepresentationFile {
        order: rep.group().order(),
        cayley: rep.group().cayley().to_vec(),
        generators: rep.group().generators().to_vec(),
        dim: rep.dim(),
        matrices: rep.matrices().iter().map(matrix_to_json).collect(),
    }
}

pub fn density_matrix_from_json(text: &str) -> Result<crate::states::DensityMatrix> {
    let file: DensityMatrixFile = parse_json(text)?;
    let m = matrix_from_json(&file.matrix, file.dim, "matrix")?;
    crate::states::DensityMatrix::new(m)
}

pub fn density_matrix_to_file(rho: &crate::states::DensityMatrix) -> DensityMatrixFile {
    DensityMatrixFile { dim: rho.dim(), matrix: matrix_to_json(rho.matrix()) }
}

/// Where a representation came from, plus the raw bytes used for digests.
#[derive(Debug, Clone)]
pub struct LoadedSource {
    pub representation: Representation,
    pub bytes: Vec<u8>,
}

/// Loads `catalog:<group>/<rep>` (consulting [`CATALOG_DIR_ENV`] first) or a
/// representation file path.
pub fn load_source(source: &str, tol: f64) -> Result<LoadedSource> {
    if let Some(id) = source.strip_prefix("catalog:") {
        if let Ok(dir) = std::env::var(CATALOG_DIR_ENV) {
            let path = Path::new(&dir).join(format!("{id}.json"));
            if path.is_file() {
                return load_file(&path, tol);
            }
        }
        let representation = catalog::representation(id)?;
        return Ok(LoadedSource { representation, bytes: source.as_bytes().to_vec() });
    }
    load_file(Path::new(source), tol)
}

fn load_file(path: &Path, tol: f64) -> Result<LoadedSource> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| malformed("utf-8", e.to_string()))?;
    let representation = representation_from_json(text, tol)?;
    Ok(LoadedSource { representation, bytes })
}

/// Writes a matrix as row-major little-endian `f64` pairs `(re, im)`.
pub fn write_matrix_dump<W: Write>(m: &CMatrix, mut w: W) -> Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].re.to_le_bytes())?;
            w.write_all(&m[(i, j)].im.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads a square matrix written by [`write_matrix_dump`].
pub fn read_matrix_dump(bytes: &[u8]) -> Result<CMatrix> {
    let values = bytes.len() / 16;
    let dim = (values as f64).sqrt().round() as usize;
    if !bytes.len().is_multiple_of(16) || dim * dim != values {
        return Err(malformed("dump", format!("{} bytes is not a square complex matrix", bytes.len())));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        c(f(k), f(k + 1))
    }))
}
