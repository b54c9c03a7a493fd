use thiserror::Error;

/// Errors raised while validating measures or evaluating the semigroup.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("total mass is {0}, expected 1")]
    MassNotOne(f64),
    #[error("density segments overlap near x = {0}")]
    OverlappingSegments(f64),
    #[error("measure is a single Dirac mass at {0}")]
    DiracMass(f64),
    #[error("support is unbounded or contains non-finite values")]
    UnboundedSupport,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("time parameter must satisfy t > 1, got {0}")]
    InvalidTime(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Cauchy transform has a pole on the real axis at x = {0}")]
    PoleOnAxis(f64),
    #[error("Cauchy transform vanishes at {re} + {im}i")]
    ZeroCauchy { re: f64, im: f64 },
    #[error("psi_t({x}) has imaginary residue {residue}")]
    PsiNotReal { x: f64, residue: f64 },
    #[error("F vanishes at x = {0}; density is singular there")]
    ZeroF(f64),
    #[error("x = {0} is outside V_t+")]
    OutsideVPlus(f64),
    #[error("Hausdorff distance of an empty set")]
    EmptySet,
    #[error("unknown law: {0}")]
    UnknownLaw(String),
}

impl Error {
    /// Variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MassNotOne(_) => "MassNotOne",
            Error::OverlappingSegments(_) => "OverlappingSegments",
            Error::DiracMass(_) => "DiracMass",
            Error::UnboundedSupport => "UnboundedSupport",
            Error::InvalidMeasure(_) => "InvalidMeasure",
            Error::InvalidTime(_) => "InvalidTime",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::PoleOnAxis(_) => "PoleOnAxis",
            Error::ZeroCauchy { .. } => "ZeroCauchy",
            Error::PsiNotReal { .. } => "PsiNotReal",
            Error::ZeroF(_) => "ZeroF",
            Error::OutsideVPlus(_) => "OutsideVPlus",
            Error::EmptySet => "EmptySet",
            Error::UnknownLaw(_) => "UnknownLaw",
        }
    }

    /// True for input problems (bad measure, bad parameters) as opposed to
    /// failures of the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::MassNotOne(_)
                | Error::OverlappingSegments(_)
                | Error::DiracMass(_)
                | Error::UnboundedSupport
                | Error::InvalidMeasure(_)
                | Error::InvalidTime(_)
                | Error::InvalidArgument(_)
                | Error::EmptySet
                | Error::UnknownLaw(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
