//! Exit-code contract.

use koopman_rational::Error;

pub const OK: u8 = 0;
/// I/O and other failures outside the contract below.
pub const FAILURE: u8 = 1;
pub const PARSE: u8 = 2;
pub const NOT_IN_FAMILY: u8 = 3;
pub const DEGENERATE: u8 = 4;
pub const VERIFICATION: u8 = 5;

pub fn code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) => code_for_core(e),
        None => FAILURE,
    }
}

pub fn code_for_core(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::InvalidConfig(_) => PARSE,
        Error::NotInFamily(_) => NOT_IN_FAMILY,
        Error::DegenerateParameter(_)
        | Error::DependentEigenfunctions
        | Error::NotNormalForm { .. }
        | Error::Pole { .. }
        | Error::PoleAtTime(_)
        | Error::InversionSingularity
        | Error::DivisionByZero => DEGENERATE,
        Error::IntegrationFailed(_)
        | Error::NotQuadratic(_)
        | Error::NonRationalCoefficient(_)
        | Error::IncompatibleRadicands { .. }
        | Error::InternalConsistency(_) => VERIFICATION,
    }
}
