use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Array length does not match the grid it is paired with.
    Dimension { expected: usize, found: usize },
    /// Grid construction failed (too few nodes, even count, bad bounds).
    InvalidGrid(&'static str),
    /// A state with zero norm cannot be normalised.
    DegenerateState,
    /// An operation was called outside its documented contract.
    Contract(&'static str),
    /// Argument lies outside the domain of a function.
    Domain(&'static str),
    /// A series or iteration failed to reach its precision target.
    Precision(&'static str),
    /// The tau window leaves too much probability density at its edges.
    WindowTooSmall { boundary_density: f64 },
    /// Too few nodes for a finite-difference stencil.
    GridTooCoarse { n: usize, min: usize },
    /// The root function has no sign change on the bracket.
    Bracket { lo: f64, hi: f64 },
    /// The state is not negligible at the momentum cutoff.
    Cutoff { tail_ratio: f64 },
    /// Backtracking could not find a descent step.
    OptimizationFailure { iterations: usize, grad_norm: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected} values, found {found}")
            }
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::DegenerateState => f.write_str("degenerate state: amplitude has zero norm"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Precision(msg) => write!(f, "precision failure: {msg}"),
            Error::WindowTooSmall { boundary_density } => write!(
                f,
                "tau window too small: boundary density {boundary_density:e} exceeds 1e-8"
            ),
            Error::GridTooCoarse { n, min } => {
                write!(f, "grid too coarse: {n} nodes, at least {min} required")
            }
            Error::Bracket { lo, hi } => write!(f, "no sign change on bracket [{lo}, {hi}]"),
            Error::Cutoff { tail_ratio } => write!(
                f,
                "state truncated by momentum cutoff: |f(k_max)|/max|f| = {tail_ratio:e}"
            ),
            Error::OptimizationFailure { iterations, grad_norm } => write!(
                f,
                "optimization failed after {iterations} iterations (gradient norm {grad_norm:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::DegenerateState => "degenerate_state",
            Error::Contract(_) => "contract",
            Error::Domain(_) => "domain",
            Error::Precision(_) => "precision",
            Error::WindowTooSmall { .. } => "window_too_small",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::Bracket { .. } => "bracket",
            Error::Cutoff { .. } => "cutoff",
            Error::OptimizationFailure { .. } => "optimization_failure",
        }
    }
}
