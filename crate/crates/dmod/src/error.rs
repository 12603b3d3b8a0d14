use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    ContextMismatch,
    OutOfRange(String),
    ShapeMismatch(String),
    NotInImage,
    NotHolonomic,
    LocalizationRequired,
    LiftCapExceeded(u32),
    NotChainMap,
    NotStrict,
    NotSpecializable,
    ContainmentViolated,
    NotAProduct,
    Parse { line: usize, col: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContextMismatch => write!(f, "operands live in different algebras"),
            Error::OutOfRange(s) => write!(f, "out of range: {s}"),
            Error::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            Error::NotInImage => write!(f, "vector is not in the image"),
            Error::NotHolonomic => write!(f, "module is not holonomic"),
            Error::LocalizationRequired => {
                write!(f, "singular locus is nontrivial; localization data required")
            }
            Error::LiftCapExceeded(c) => write!(f, "no lift found with denominator power <= {c}"),
            Error::NotChainMap => write!(f, "top component does not commute with the differentials"),
            Error::NotStrict => write!(f, "complex is not strict for the filtration"),
            Error::NotSpecializable => write!(f, "b-function does not exist"),
            Error::ContainmentViolated => write!(f, "image is not contained in the kernel"),
            Error::NotAProduct => write!(f, "polynomial is not a product of (1+q^(2j-1)) factors"),
            Error::Parse { line, col, msg } => write!(f, "{line}:{col}: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
