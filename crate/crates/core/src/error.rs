use thiserror::Error;

use crate::quaternion::Quaternion;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion is not unit: norm {norm}")]
    NotUnit { norm: f64 },

    #[error("matrix is not in SO(4): {reason}")]
    NotSpecialOrthogonal { reason: String },

    #[error("isoclinic factorization residual {residual:e} exceeds tolerance")]
    FactorizationResidual { residual: f64 },

    #[error("map produced an invalid matrix at q = {at}: {reason}")]
    InvalidMapValue { at: Quaternion, reason: String },

    #[error("grid too coarse: adjacent lift values {distance:.3} apart (threshold {threshold})")]
    GridTooCoarse { distance: f64, threshold: f64 },

    #[error("resolution insufficient: raw degree estimate {estimate:.4} is {residual:.4} from the nearest integer")]
    ResolutionInsufficient { estimate: f64, residual: f64 },

    #[error("y not regular, reseed: Jacobian determinant {det:e} at a preimage")]
    NotRegular { det: f64 },

    #[error("degree methods disagree on component {component}: integral {integral}, preimage {preimage}")]
    MethodDisagreement {
        component: u8,
        integral: i64,
        preimage: i64,
    },

    #[error("exact degree requires a symbolic map")]
    NotSymbolic,

    #[error("invalid grid resolution {0:?}")]
    InvalidResolution([usize; 3]),

    #[error("cannot parse word {input:?}: {reason}")]
    WordParse { input: String, reason: String },

    #[error("cannot parse map spec {input:?}: {reason}")]
    MapSpecParse { input: String, reason: String },

    #[error("intersection form is not symmetric")]
    AsymmetricForm,

    #[error("intersection form is not square")]
    NonSquareForm,

    #[error("signature cross-check failed: eigenvalues give {float}, congruence diagonalization gives {exact}")]
    SignatureMismatch { float: i64, exact: i64 },

    #[error("w₂ not derivable from form alone (b1 = {b1}); supply w2_zero explicitly")]
    W2NotDerivable { b1: u32 },

    #[error("w2_zero = {given} contradicts the parity of the form (even: {even})")]
    W2OverrideConflict { given: bool, even: bool },

    #[error("framing over 2-skeleton unavailable: w₂ does not vanish")]
    W2Nonzero,

    #[error("no integral solution (p₁ parity): p₁ = {p1} is odd")]
    P1Parity { p1: i64 },

    #[error("no integral solution (parity mismatch): χ + p₁/2 = {value} is odd")]
    ParityMismatch { value: i64 },

    #[error("manifold record {name:?}: {reason}")]
    Record { name: String, reason: String },

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::GridTooCoarse { .. }
                | Error::ResolutionInsufficient { .. }
                | Error::NotRegular { .. }
                | Error::MethodDisagreement { .. }
                | Error::FactorizationResidual { .. }
                | Error::InvalidMapValue { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
