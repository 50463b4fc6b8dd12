//! Shared error type for all subsystems.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A multiplication table failed validation (not a Latin square, bad
    /// identity, missing inverses, or a broken associativity triple).
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),

    /// A group spec string could not be parsed.
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),

    /// A construction would exceed a configured order/size cap.
    #[error("{what} of size {actual} exceeds cap {limit}")]
    OrderOverflow {
        what: String,
        limit: usize,
        actual: usize,
    },

    /// A claimed-closed family fails one of the closure axioms.
    #[error("set of local representations is not closed: {0}")]
    NotClosed(String),

    /// A subgroup family fails closure, or the induced set of local
    /// representations does (agreement subgroups escape the family).
    #[error("not a family: {0}")]
    NotAFamily(String),

    /// The right action on a claimed bundle total space is not free at the
    /// named point, so no local representation exists there.
    #[error("right action is not free at total point {point}")]
    NotFree { point: usize },

    /// A product-group action point whose isotropy is not the graph of a
    /// homomorphism; the point is named.
    #[error("isotropy at point {point} is not a graph subgroup")]
    BadIsotropy { point: usize },

    /// Structural mismatch between two objects that must agree (carrier
    /// sizes, groups, base sets).
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// Two matrices or representations have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Two cocycles have different coefficient moduli.
    #[error("modulus mismatch: {0}")]
    ModulusMismatch(String),

    /// Matrix input failed a validation tolerance (non-unitary lift, lift of
    /// the wrong shape, non-multiplicative representation...).
    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    /// Polar retraction of a singular (or numerically singular) operator.
    #[error("operator is singular: smallest singular value {sigma_min:.3e}")]
    Singular { sigma_min: f64 },

    /// Conjugator recovery on representations that are provably not
    /// conjugate (characters differ).
    #[error("representations are not conjugate (characters differ)")]
    NotConjugate,

    /// Characters match but every averaged intertwiner degenerated, even
    /// after the configured number of randomized retries.
    #[error("intertwiner is singular after {retries} randomized retries")]
    SingularIntertwiner { retries: usize },

    /// Separation check called on representations that are conjugate.
    #[error("representations are conjugate; separation bound does not apply")]
    Conjugate,

    /// Class-function input is not a character of the given table.
    #[error("not a character: {0}")]
    NotACharacter(String),

    /// A numerical search failed to converge or to produce a consistent
    /// split; signals a bug or a degenerate seed, not expected input.
    #[error("numerical decomposition failed: {0}")]
    ConvergenceFailure(String),

    /// Lift products are not scalar multiples of the identity.
    #[error("lifts are not projective at pair ({g}, {h}): residual {residual:.3e}")]
    NotProjective { g: usize, h: usize, residual: f64 },

    /// A lift-product phase does not snap to the root-of-unity lattice.
    #[error("phase at pair ({g}, {h}) is off the root-of-unity lattice")]
    PhaseOffLattice { g: usize, h: usize },

    /// CLI usage problem (bad flags, bad file contents).
    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag used in CLI error output.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::MalformedTable(_) => "MalformedTable",
            Error::UnsupportedSpec(_) => "UnsupportedSpec",
            Error::OrderOverflow { .. } => "OrderOverflow",
            Error::NotClosed(_) => "NotClosed",
            Error::NotAFamily(_) => "NotAFamily",
            Error::NotFree { .. } => "NotFree",
            Error::BadIsotropy { .. } => "BadIsotropy",
            Error::Mismatch(_) => "Mismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ModulusMismatch(_) => "ModulusMismatch",
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::Singular { .. } => "Singular",
            Error::NotConjugate => "NotConjugate",
            Error::SingularIntertwiner { .. } => "SingularIntertwiner",
            Error::Conjugate => "Conjugate",
            Error::NotACharacter(_) => "NotACharacter",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::NotProjective { .. } => "NotProjective",
            Error::PhaseOffLattice { .. } => "PhaseOffLattice",
            Error::Usage(_) => "Usage",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
