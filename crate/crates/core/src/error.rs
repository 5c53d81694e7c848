use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the algebra kernel and the foliation checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different number fields")]
    MixedFields,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor (minimal polynomial is reducible)")]
    ZeroDivisor,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("expected a non-constant polynomial")]
    ConstantPolynomial,
    #[error("expected polynomial coefficients, found a proper rational function")]
    NotPolynomial,
    #[error("interior product of a 0-form")]
    DegreeZero,
    #[error("expected a form of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("zero form")]
    ZeroForm,
    #[error("zero vector field")]
    ZeroField,
    #[error("ambient dimension {found} not supported here (requires {required})")]
    Dimension { required: &'static str, found: usize },
    #[error("bad blow-up chart: {0}")]
    BadChart(String),
    #[error("zero eigenvalue")]
    ZeroEigenvalue,
    #[error("form is not tangent to the vector field")]
    NotTangent,
    #[error("form is not integrable")]
    NotIntegrable,
    #[error("eigenvalues admit a strong resonance")]
    NotStronglyDiagonalizable,
    #[error("degree must be at least 2, found {0}")]
    BadDegree(usize),
    #[error("pencil parameters (a, b) are both zero")]
    ZeroParameters,
    #[error("form is not a combination of the two generators")]
    NotCoplanar,
    #[error("generators are dependent (w1 ^ w2 = 0)")]
    DegenerateGenerators,
    #[error("form {0} is not tangent to the 2-form eta")]
    NotTangentToEta(usize),
    #[error("constructed generators are dependent")]
    DegeneratePencil,
    #[error("pencil condition fails: w1 ^ dw2 + w2 ^ dw1 != 0")]
    NotPencil,
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    Certificate,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::CertificateFailure(_) => ErrorClass::Certificate,
            _ => ErrorClass::Precondition,
        }
    }
}
