use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(GroupViolation),

    #[error("matrix for element {element} is not unitary (residual {residual:.3e})")]
    NotUnitary { element: usize, residual: f64 },

    #[error("U_{g} U_{h} != U_(gh) (residual {residual:.3e})")]
    NotHomomorphism { g: usize, h: usize, residual: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension cap exceeded: {what} = {value} > {cap}")]
    DimensionCapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("no eigenvalue split into irreducible copies after {attempts} attempts")]
    DegenerateSplit { attempts: usize },

    #[error("decomposition residual {actual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { actual: f64, tol: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("state is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("state is not in Schur block form in block {block} (residual {residual:.3e})")]
    NotBlockForm { block: usize, residual: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("support mismatch: q[{index}] = 0 while p[{index}] > 0")]
    SupportMismatch { index: usize },

    #[error("block {block} carries no probability mass")]
    ZeroBlockMass { block: usize },

    #[error("states {first} and {second} overlap (Tr[ρσ] = {overlap:.3e})")]
    SupportsOverlap { first: usize, second: usize, overlap: f64 },

    #[error("block {block} is not square (d_L = {d_left}, d_R = {d_right})")]
    BlockNotSquare { block: usize, d_left: usize, d_right: usize },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("malformed input at `{field}`: {message}")]
    MalformedInput { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

/// The specific group axiom that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupViolation {
    EmptyTable,
    NotSquare { row: usize, len: usize },
    EntryOutOfRange { row: usize, col: usize, value: usize },
    NoIdentity,
    MissingInverse { element: usize },
    NotAssociative { a: usize, b: usize, c: usize },
    NoGenerators,
    GeneratorOutOfRange { generator: usize },
    GeneratorsDoNotGenerate { reached: usize, order: usize },
}

impl std::fmt::Display for GroupViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::EmptyTable => write!(f, "empty Cayley table"),
            Self::NotSquare { row, len } => write!(f, "row {row} has length {len}"),
            Self::EntryOutOfRange { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} out of range")
            }
            Self::NoIdentity => write!(f, "no identity element"),
            Self::MissingInverse { element } => write!(f, "element {element} has no inverse"),
            Self::NotAssociative { a, b, c } => {
                write!(f, "({a}·{b})·{c} != {a}·({b}·{c})")
            }
            Self::NoGenerators => write!(f, "generator list is empty"),
            Self::GeneratorOutOfRange { generator } => {
                write!(f, "generator {generator} out of range")
            }
            Self::GeneratorsDoNotGenerate { reached, order } => {
                write!(f, "generators reach {reached} of {order} elements")
            }
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
