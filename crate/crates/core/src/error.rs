use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the non-monomial scalar {0} is not supported")]
    NonMonomialDivision(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("contraction of a 0-form")]
    DegreeZeroContraction,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("divisor polynomial {0} is constant")]
    ConstantDivisor(String),
    #[error("declared components are not pairwise coprime: {0}")]
    NotCoprime(String),
    #[error("first-order pole violated: order {order} along {component} in chart {chart}")]
    HigherOrderPole { chart: String, component: String, order: i64 },
    #[error("first-order pole violated: undeclared pole component {residual} in chart {chart}")]
    UndeclaredPole { chart: String, residual: String },
    #[error("normal crossing violated: {0}")]
    NormalCrossing(String),
    #[error("irrational intersection or pole location: {0}")]
    Irrational(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("zero-divisor on the curve: {0}")]
    ZeroDivisor(String),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("no admissible residue direction for {0}")]
    NoDirection(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no boundary witness: total weight {0} is nonzero")]
    NonzeroWeight(String),
    #[error("subvariety not inside ambient: {0}")]
    NotInAmbient(String),
    #[error("no admissible basepoint among {0} probes")]
    NoBasepoint(usize),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("session error: {0}")]
    Session(String),
}

impl Error {
    /// The rule of the calculus that the error refers to, for reports.
    pub fn rule(&self) -> &'static str {
        match self {
            Error::HigherOrderPole { .. } | Error::UndeclaredPole { .. } => "first-order pole",
            Error::NormalCrossing(_) | Error::NotCoprime(_) => "normal crossing",
            Error::NonzeroWeight(_) => "boundary witness",
            Error::NoBasepoint(_) => "cylinder homotopy",
            Error::Parse { .. } => "syntax",
            Error::Session(_) => "session",
            Error::NotInAmbient(_) => "relative chains",
            Error::Unsupported(_) => "R1/R2/R3 supported family",
            _ => "arithmetic",
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
