use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the domain of the operation")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} overflows double precision (log magnitude {log_magnitude})")]
    Overflow { what: &'static str, log_magnitude: f64 },

    #[error("{what} is singular at this argument")]
    Singular { what: &'static str },

    #[error("ln({n}!) requested beyond the factorial table limit {max}")]
    FactorialRange { n: usize, max: usize },

    #[error("series `{series}` did not converge within {terms} terms (last term {last_term:e})")]
    TruncationNotConverged {
        series: &'static str,
        terms: usize,
        last_term: f64,
    },

    #[error("detectors are coincident; `{what}` diverges as 1/rho")]
    Coincident { what: &'static str },

    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),

    #[error("|L_AB|^2 exceeds L_AA L_BB by {excess:e}")]
    CauchySchwarz { excess: f64 },

    #[error("quadrature `{what}` changed by {change:e} under refinement")]
    NonConvergence { what: &'static str, change: f64 },
}
