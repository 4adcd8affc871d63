use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclic substitution: `{0}` appears in a replacement form")]
    CyclicBinding(String),
    #[error("symbol `{0}` has no numeric value")]
    UnboundSymbol(String),
    #[error("bracket <{0}> depends on parameters only")]
    ParameterOnlyBracket(String),
    #[error("variable `{0}` does not appear in the series")]
    VariableAbsent(String),
    #[error("a multinomial needs at least one term")]
    EmptyMultinomial,
    #[error("`{symbol}` has zero coefficient in <{bracket}>")]
    ZeroCoefficient { symbol: String, bracket: String },
    #[error("index `{0}` occurs in both factors of a product")]
    IndexCollision(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("no assignment: {0}")]
    NoAssignment(String),
    #[error("unknown representation: {0}")]
    UnknownRepresentation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
