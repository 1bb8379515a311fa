use thiserror::Error;

/// Failures reported by the solvers.
///
/// Values are carried as `f64` regardless of the scalar type the caller used.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error(
        "attractive coupling g = {coupling} in D = {dim}: the Hamiltonian is unbounded below \
         for D >= 2 (collapse regime), no ground state exists"
    )]
    Collapse { coupling: f64, dim: f64 },

    #[error("energy shift {shift} sits on an unperturbed level (pole of the secular sum)")]
    Pole { shift: f64 },

    #[error("no bracket for the requested root: {0}")]
    Bracket(String),

    #[error("interior solution is on the wrong branch: {0}")]
    Branch(String),

    #[error("matrix is not symmetric: a[{row}][{col}] != a[{col}][{row}]")]
    NotSymmetric { row: usize, col: usize },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("Monte Carlo rejected {rejected} of {samples} samples (rate must stay below 1e-3)")]
    Rejection { rejected: u64, samples: u64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { what, detail: detail.into() }
    }

    /// True for inputs outside the modelled regime, as opposed to numerical failures.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Collapse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
