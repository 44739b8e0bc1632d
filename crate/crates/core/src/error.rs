use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ZeroArgument: Bessel functions are singular at z = 0")]
    ZeroArgument,
    #[error("OrderTooLarge: order {0} exceeds the supported maximum of 64")]
    OrderTooLarge(usize),
    #[error("SingularMatrix: pivot {pivot:e} below threshold {threshold:e}")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("DimensionMismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("LengthMismatch: {radii} radii but {alphas} strengths")]
    LengthMismatch { radii: usize, alphas: usize },
    #[error("NonpositiveRadius: radius {value} at index {index}")]
    NonpositiveRadius { index: usize, value: f64 },
    #[error("NonincreasingRadii: R[{index}] = {next} does not exceed R[{prev_index}] = {prev}", prev_index = index - 1)]
    NonincreasingRadii { index: usize, prev: f64, next: f64 },
    #[error("NonfiniteParameter: {0}")]
    NonfiniteParameter(&'static str),
    #[error("NotDoubleShell: expected 2 shells, got {0}")]
    NotDoubleShell(usize),
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
    #[error("BranchResidual: imaginary residual {residual:e} on the negative energy axis")]
    BranchResidual { residual: f64 },
    #[error("NearSingularBoundary: |det K| = {det_abs:e} below {threshold:e}")]
    NearSingularBoundary { det_abs: f64, threshold: f64 },
    #[error("GridTooCoarse: phase jump {jump:.3} rad between k = {k_lo} and k = {k_hi}")]
    GridTooCoarse { k_lo: f64, k_hi: f64, jump: f64 },
    #[error("ThresholdCritical: C0 = {c0:e} is within tolerance {tol:e} of zero")]
    ThresholdCritical { c0: f64, tol: f64 },
    #[error("DegenerateBasis: Wronskian {0:e} at the matching radius")]
    DegenerateBasis(f64),
    #[error("GridCollision: shells at {r_a} and {r_b} are closer than one step {step:e}")]
    GridCollision { r_a: f64, r_b: f64, step: f64 },
}

impl Error {
    /// Short variant name, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroArgument => "ZeroArgument",
            Error::OrderTooLarge(_) => "OrderTooLarge",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonpositiveRadius { .. } => "NonpositiveRadius",
            Error::NonincreasingRadii { .. } => "NonincreasingRadii",
            Error::NonfiniteParameter(_) => "NonfiniteParameter",
            Error::NotDoubleShell(_) => "NotDoubleShell",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::BranchResidual { .. } => "BranchResidual",
            Error::NearSingularBoundary { .. } => "NearSingularBoundary",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::ThresholdCritical { .. } => "ThresholdCritical",
            Error::DegenerateBasis(_) => "DegenerateBasis",
            Error::GridCollision { .. } => "GridCollision",
        }
    }

    /// Errors caused by bad input rather than by numerical trouble.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::LengthMismatch { .. }
                | Error::NonpositiveRadius { .. }
                | Error::NonincreasingRadii { .. }
                | Error::NonfiniteParameter(_)
                | Error::NotDoubleShell(_)
                | Error::InvalidArgument(_)
                | Error::OrderTooLarge(_)
                | Error::ZeroArgument
        )
    }
}
