use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular-system: linear system has no unique solution")]
    SingularSystem,

    #[error("undefined-roots: the zero polynomial has no well-defined root set")]
    UndefinedRoots,

    #[error("determinant size {size} exceeds the cofactor-expansion cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("nonpositive-a: a[{index}] must be positive")]
    NonpositiveA { index: usize },

    #[error("nonpositive-gamma: gamma[{index}] must be positive")]
    NonpositiveGamma { index: usize },

    #[error("nonpositive-alpha-const: the pencil constant alpha must be positive")]
    NonpositiveAlphaConst,

    #[error("insufficient-prefix: `{field}` needs {needed} entries, has {have}")]
    InsufficientPrefix {
        field: &'static str,
        needed: usize,
        have: usize,
    },

    #[error("index-out-of-range: index {index} needs sequence entries up to {needed}, have {have}")]
    IndexOutOfRange {
        index: usize,
        needed: usize,
        have: usize,
    },

    #[error("equal-arguments: lambda and y must differ")]
    EqualArguments,

    #[error("hankel-not-positive: Delta_{n} = {value} is not positive")]
    HankelNotPositive { n: usize, value: String },

    #[error("insufficient basis: need p_0..p_{needed}, have {have} polynomials")]
    InsufficientBasis { needed: usize, have: usize },

    #[error("insufficient table: need moments up to degree {needed}, table covers {have}")]
    InsufficientTable { needed: usize, have: usize },

    #[error("zero-wronskian: p_j u_(j+1) - p_(j+1) u_j vanishes identically at j = {j}")]
    ZeroWronskian { j: usize },

    #[error("singular-pencil: D_{j} vanishes identically")]
    SingularPencil { j: usize },

    #[error("eigenpair residual {residual:e} exceeds tolerance at eigenvalue {value}")]
    EigenResidual { value: String, residual: f64 },

    #[error("invalid perturbation parameters: c = {c} must exceed -1")]
    InvalidParams { c: String },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("insufficient moments: need degree {needed}, have {have}")]
    InsufficientMoments { needed: usize, have: usize },

    #[error("lambda-indeterminate: the lambda coefficient of the leading equation is zero")]
    LambdaIndeterminate,

    #[error("degenerate-diagonal: back-substitution pivot vanishes at row {j}")]
    DegenerateDiagonal { j: usize },

    #[error("residue {m} out of range for order {order}")]
    ResidueOutOfRange { m: usize, order: usize },

    #[error("insufficient list: need index {needed}, have {have} entries")]
    InsufficientList { needed: usize, have: usize },

    #[error("order must be at least 1")]
    ZeroOrder,

    #[error("value has no rational square root: {0}")]
    IrrationalSqrt(String),
}
