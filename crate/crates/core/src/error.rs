use alloc::string::String;

/// Errors produced by the planning, sampling, and numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request cannot be met by any admissible plan.
    #[error("infeasible request: {reason} (attainable lower bound is {bound:.6})")]
    Infeasible { reason: String, bound: f64 },

    /// No admissible plan at all exists for the requested shapes.
    #[error("infeasible request: {0}")]
    NoAdmissiblePlan(String),

    /// Exact mode: the target correlation does not correspond to an integer `r`.
    #[error(
        "target correlation {rho_target} is not representable exactly: \
         r* = {r_star:.6} is not an integer (nearest attainable correlation {nearest_rho:.6})"
    )]
    NotRepresentable {
        rho_target: f64,
        r_star: f64,
        nearest_rho: f64,
    },

    /// Adaptive quadrature hit its subdivision budget before meeting the tolerance.
    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tol:e}")]
    NoConvergence { estimate: f64, tol: f64 },

    /// A statistic was requested over zero samples.
    #[error("empty input")]
    EmptyInput,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the errors that signal an unattainable parameter request
    /// (as opposed to a numerical failure).
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Infeasible { .. }
                | Error::NoAdmissiblePlan(_)
                | Error::NotRepresentable { .. }
                | Error::Domain(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
