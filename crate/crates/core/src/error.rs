use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Task/domain pair outside the configured registry cells.
    UnknownCell { task: String, d: u32 },
    InvalidDomain(u32),
    /// A family came out empty after pruning.
    EmptyFamily(&'static str),
    ExampleOutOfDomain { example: u32, d: u32 },
    DuplicateExample(u32),
    NoExamples,
    /// No hypothesis in the space contains every example.
    EmptySupport,
    /// A curve or weight vector has no positive mass.
    Degenerate(&'static str),
    InvalidParameter(&'static str),
    LengthMismatch { expected: usize, found: usize },
    OutOfRange { index: usize, value: f64 },
    MissingTargets(Vec<u32>),
    InvalidCounts { target: u32, yes: u32, valid: u32 },
    EmptyReadout,
    LabelNotInCandidates(String),
    NoMatchedLabels,
    EmptyPool,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownCell { task, d } => {
                write!(f, "no configured hypothesis space for task {task} with d={d}")
            }
            Error::InvalidDomain(d) => write!(f, "invalid domain size {d} (need d >= 2)"),
            Error::EmptyFamily(which) => write!(f, "{which} family is empty after pruning"),
            Error::ExampleOutOfDomain { example, d } => {
                write!(f, "example {example} is outside the domain 1..{d}")
            }
            Error::DuplicateExample(x) => write!(f, "duplicate example {x}"),
            Error::NoExamples => f.write_str("example set is empty"),
            Error::EmptySupport => f.write_str("no hypothesis is compatible with the examples"),
            Error::Degenerate(what) => write!(f, "degenerate input: {what} has no positive mass"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::OutOfRange { index, value } => {
                write!(f, "value {value} at index {index} is outside [0, 1]")
            }
            Error::MissingTargets(targets) => write!(f, "no valid answers for targets {targets:?}"),
            Error::InvalidCounts { target, yes, valid } => {
                write!(f, "target {target}: yes count {yes} exceeds valid count {valid}")
            }
            Error::EmptyReadout => f.write_str("readout has no positive weight"),
            Error::LabelNotInCandidates(label) => {
                write!(f, "evaluation label {label:?} is not in the candidate list")
            }
            Error::NoMatchedLabels => f.write_str("readout has no label with executable support"),
            Error::EmptyPool => f.write_str("no presentation in the fit pool"),
        }
    }
}

impl core::error::Error for Error {}
