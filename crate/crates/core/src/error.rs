use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants fall in two families: malformed or inconsistent input data
/// (validation), and well-formed input on which a formula or algorithm is not
/// applicable (violated hypothesis). [`Error::is_precondition`] tells them
/// apart; the CLI maps them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // validation
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("mixed-field arithmetic: {0}")]
    FieldMismatch(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid cover data: {0}")]
    InvalidCover(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Riemann-Hurwitz gives an odd value 2g_X - 2 = {0}")]
    NonIntegralGenus(i64),
    #[error("K_Y has degree {found}, expected 2g_Y - 2 = {expected}")]
    BadCanonicalDegree { expected: i64, found: i64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("successive approximation did not converge: {0}")]
    NoConvergence(String),
    #[error("Riemann-Roch basis has {found} elements, expected {expected}")]
    DimensionMismatch { expected: i64, found: i64 },
    #[error("basis not stable under the group action: {0}")]
    BasisNotStable(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    // violated hypotheses
    #[error("jumps do not follow the Hasse-Arf pattern: {0}")]
    NotHasseArf(String),
    #[error("group is not cyclic: {0}")]
    NotCyclic(String),
    #[error("group is not cyclic of order p: {0}")]
    NotCyclicOrderP(String),
    #[error("deg(D) = {degree} is not greater than 2g_X - 2 = {bound}")]
    DegreeTooSmall { degree: i64, bound: i64 },
    #[error("g_X = {0} but the statement needs g_X >= 2")]
    GenusTooSmall(i64),
    #[error("not weakly ramified: G_2 nontrivial at {0}")]
    NotWeaklyRamified(String),
    #[error("characteristic {0} is not greater than 3")]
    SmallCharacteristic(u64),
    #[error("the cover is unramified")]
    Unramified,
    #[error("divisor of phi: {0}")]
    MissingPhi(String),
    #[error("computed divisor is not effective: {0}")]
    NotEffective(String),
    #[error("alpha is not injective: {0}")]
    AlphaNotInjective(String),
    #[error("valuation is not negative: {0}")]
    NonNegativeValuation(String),
    #[error("action is not weakly ramified: {0}")]
    NotWeaklyRamifiedAction(String),
    #[error("no odd pole number up to {0}")]
    NoOddPoleNumber(u64),
    #[error("point is not ramified: {0}")]
    NotRamifiedHere(String),
}

impl Error {
    /// True when the input was well formed but a hypothesis of the requested
    /// statement fails.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotHasseArf(_)
                | Error::NotCyclic(_)
                | Error::NotCyclicOrderP(_)
                | Error::DegreeTooSmall { .. }
                | Error::GenusTooSmall(_)
                | Error::NotWeaklyRamified(_)
                | Error::SmallCharacteristic(_)
                | Error::Unramified
                | Error::MissingPhi(_)
                | Error::NotEffective(_)
                | Error::AlphaNotInjective(_)
                | Error::NonNegativeValuation(_)
                | Error::NotWeaklyRamifiedAction(_)
                | Error::NoOddPoleNumber(_)
                | Error::NotRamifiedHere(_)
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::InvalidFiltration(_) => "InvalidFiltration",
            Error::InvalidCover(_) => "InvalidCover",
            Error::InvalidDivisor(_) => "InvalidDivisor",
            Error::InvalidSeries(_) => "InvalidSeries",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonIntegralGenus(_) => "NonIntegralGenus",
            Error::BadCanonicalDegree { .. } => "BadCanonicalDegree",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NoConvergence(_) => "NoConvergence",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BasisNotStable(_) => "BasisNotStable",
            Error::Consistency(_) => "Consistency",
            Error::NotHasseArf(_) => "NotHasseArf",
            Error::NotCyclic(_) => "NotCyclic",
            Error::NotCyclicOrderP(_) => "NotCyclicOrderP",
            Error::DegreeTooSmall { .. } => "DegreeTooSmall",
            Error::GenusTooSmall(_) => "GenusTooSmall",
            Error::NotWeaklyRamified(_) => "NotWeaklyRamified",
            Error::SmallCharacteristic(_) => "SmallCharacteristic",
            Error::Unramified => "Unramified",
            Error::MissingPhi(_) => "MissingPhi",
            Error::NotEffective(_) => "NotEffective",
            Error::AlphaNotInjective(_) => "AlphaNotInjective",
            Error::NonNegativeValuation(_) => "NonNegativeValuation",
            Error::NotWeaklyRamifiedAction(_) => "NotWeaklyRamifiedAction",
            Error::NoOddPoleNumber(_) => "NoOddPoleNumber",
            Error::NotRamifiedHere(_) => "NotRamifiedHere",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
