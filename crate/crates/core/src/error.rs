use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("label {label} out of range for q = {q}")]
    LabelOutOfRange { label: u32, q: u32 },

    #[error("heights sum to {sum}, expected 0")]
    HeightImbalance { sum: i64 },

    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertices belong to different graphs ({left} vs {right} trees)")]
    ParamMismatch { left: usize, right: usize },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("memory cap exceeded at radius {radius} (frontier of {frontier} vertices)")]
    MemoryCapExceeded { radius: u32, frontier: usize },

    #[error("invalid point family: {0}")]
    InvalidFamily(String),

    #[error("index {index} outside 2..={d}")]
    IndexOutOfRange { index: usize, d: usize },

    #[error("sequence did not stabilize by n = {n_max}")]
    NotStabilized { n_max: u32 },

    #[error("operation needs d = {expected}, graph has d = {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("m-profile of tree {tree} is inconclusive by n = {n_max}")]
    Inconclusive { tree: usize, n_max: u32 },

    #[error("f values for {perm}, i = {index} are not affine in n")]
    NonAffine { perm: String, index: usize },

    #[error("vertex is not balanced: h_{tree} = {height}")]
    NotBalanced { tree: usize, height: i64 },

    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
