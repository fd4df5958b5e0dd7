use core::fmt;

/// Error conditions shared by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Energy argument sits on (or within tolerance of) a singular point of
    /// the expression being evaluated: the real spectrum for resolvents, or
    /// a vanishing matching denominator for characteristic equations.
    SingularEnergy { value: f64 },
    /// Density of states requested exactly at a band threshold `E = ±m`.
    Threshold { energy: f64 },
    /// Argument outside the validity region of a closed form, e.g. an
    /// energy with `k^2 <= 0` for an oscillatory interior ansatz.
    Domain(&'static str),
    /// A delta potential of zero strength has no bound state to return.
    ZeroStrength,
    /// Invalid model or solver configuration.
    Config(&'static str),
    /// A bracketed root refinement failed to converge.
    NoConvergence { a: f64, b: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularEnergy { value } => {
                write!(f, "energy {value} is singular for this expression")
            }
            Error::Threshold { energy } => {
                write!(f, "density of states undefined at band threshold E = {energy}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::ZeroStrength => write!(f, "zero potential strength: no bound state"),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NoConvergence { a, b } => {
                write!(f, "root refinement did not converge in [{a}, {b}]")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
