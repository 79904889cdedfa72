use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} is not rational")]
    NotRational(String),
    #[error("classes belong to different ring presentations")]
    MismatchedPresentation,
    #[error("class has nonzero constant term {0}; expected a nilpotent class")]
    NotNilpotent(String),
    #[error("invalid monomial {0}")]
    InvalidMonomial(String),
    #[error("invalid ring presentation: {0}")]
    InvalidPresentation(String),
    #[error("series truncated at exponent {available}; coefficient of exponent {needed} is unknown")]
    InsufficientTruncation { needed: i64, available: i64 },
    #[error("series are expanded in different charts")]
    ChartMismatch,
    #[error("leading coefficient of series is not invertible")]
    NotInvertible,
    #[error("normal weight must be nonzero")]
    ZeroWeight,
    #[error("component `{0}` is not an isolated fixed point")]
    NotIsolated(String),
    #[error("result {0} is not an integer")]
    NonInteger(String),
    #[error("character expansion did not stabilize: coefficient of t^{exponent} is {value} (inconsistent fixed-point data)")]
    Stabilization { exponent: i64, value: String },
    #[error("character is not Weyl symmetric: c_{m} = {a} but c_-{m} = {b}")]
    SymmetryViolation { m: i64, a: i64, b: i64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("in component `{component}` at pole {pole}: {source}")]
    AtPole {
        component: String,
        pole: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Input-side errors map to a different CLI exit status than computation errors.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UnknownCatalog(_) | Error::Invalid(_) | Error::InvalidPresentation(_) | Error::InvalidMonomial(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
