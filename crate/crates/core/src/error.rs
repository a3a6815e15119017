use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two series with different expansion points or truncation caps were combined.
    Mismatch { what: &'static str },
    /// A coefficient, scalar or parameter was NaN or infinite.
    NonFinite { what: &'static str },
    /// A monomial degree above the truncation cap.
    DegreeOutOfRange { degree: usize, cap: usize },
    /// An argument outside the operation's precondition.
    InvalidArgument(&'static str),
    /// `beta * sigma == 1`: the factor `1 - beta*sigma` vanishes.
    SingularModel { beta_sigma: f64 },
    /// A series coefficient became non-finite or exceeded the magnitude limit.
    Overflow { index: usize },
    /// The closed-form solution has no real value at `t` (finite-time blow-up).
    Domain { t: f64 },
    /// The RK4 state became non-finite at `t`.
    BlowUp { t: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Overflow { .. } | Error::Domain { .. } | Error::BlowUp { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Mismatch { what } => write!(f, "mismatched {what}"),
            Error::NonFinite { what } => write!(f, "non-finite {what}"),
            Error::DegreeOutOfRange { degree, cap } => {
                write!(f, "degree {degree} exceeds truncation cap {cap}")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
            Error::SingularModel { beta_sigma } => {
                write!(
                    f,
                    "singular model: beta*sigma = {beta_sigma} (must differ from 1)"
                )
            }
            Error::Overflow { index } => {
                write!(f, "series coefficient overflow at index {index}")
            }
            Error::Domain { t } => write!(f, "exact solution undefined at t = {t}"),
            Error::BlowUp { t } => write!(f, "integrator blow-up at t = {t}"),
        }
    }
}

impl core::error::Error for Error {}
