use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IrsaError {
    #[error("coefficients sum to {sum}, expected 1 (tolerance 1e-9)")]
    Normalization { sum: f64 },

    #[error("negative coefficient {value} at degree {degree}")]
    NegativeCoefficient { degree: u32, value: f64 },

    #[error("non-finite coefficient at degree {degree}")]
    NonFiniteCoefficient { degree: u32 },

    #[error("degree 0 is not a valid replica count")]
    ZeroDegree,

    #[error("degree {degree} listed more than once")]
    DuplicateDegree { degree: u32 },

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no sources transmit, edge fractions are undefined")]
    EmptySystem,

    #[error(
        "exact slot distribution lost precision (imaginary residue {residue:e} at degree {degree})"
    )]
    NumericInstability { degree: usize, residue: f64 },

    #[error("threshold bracket is degenerate: {0}")]
    Bracket(String),

    #[error("class {class} distribution does not dominate class {next} distribution")]
    PriorityViolation { class: usize, next: usize },

    #[error("no candidate assignment satisfies the priority constraint")]
    Infeasible,
}

pub type Result<T, E = IrsaError> = std::result::Result<T, E>;

pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(IrsaError::Domain {
            what,
            value,
            domain: "[0, 1]",
        })
    }
}
