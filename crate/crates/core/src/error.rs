use thiserror::Error;

use crate::expr::ParseError;
use crate::lorentz::CausalCharacter;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

/// Every failure the geometry pipeline can report.
///
/// Each variant maps to a stable machine-readable code via [`GeomError::code`],
/// which the CLI embeds in its JSON error objects.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("null degeneracy: orthogonalized vector {index} is lightlike")]
    NullDegeneracy { index: usize },

    #[error("rank deficiency: input vector {index} is dependent on its predecessors")]
    RankDeficient { index: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("evaluation failed for component {component} at t = {t}: {message}")]
    Eval {
        component: usize,
        t: f64,
        message: String,
    },

    #[error("invalid curve definition: {0}")]
    InvalidCurve(String),

    #[error("parameter {t} outside the curve domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("causal character violation at t = {t}: expected {expected:?}, found {found:?}")]
    CausalViolation {
        t: f64,
        expected: CausalCharacter,
        found: CausalCharacter,
    },

    #[error("null acceleration at t = {t}: <γ'',γ''> = {value}")]
    NullAcceleration { t: f64, value: f64 },

    #[error("quadrature failure: non-finite integrand at t = {t}")]
    Quadrature { t: f64 },

    #[error("point at t = {t} is off de Sitter space: |<γ,γ> - 1| = {residual}")]
    OffDeSitter { t: f64, residual: f64 },

    #[error("curve is not unit speed at s = {s}: <γ',γ'> = {value}")]
    NotUnitSpeed { s: f64, value: f64 },

    #[error("geodesic degeneracy at s = {s}: frame undefined (κ_g = {kappa_g})")]
    GeodesicDegeneracy { s: f64, kappa_g: f64 },

    #[error("standing assumption <t',t'> != 1 violated at s = {s}")]
    StandingAssumption { s: f64 },

    #[error("frame normalization drift at s = {s}: wedge factor {factor}")]
    FrameNormalization { s: f64, factor: f64 },

    #[error("not a Cartan curve at t = {t}: γ', γ'', γ''' are dependent")]
    CartanIndependence { t: f64 },

    #[error("pseudo-arc precondition failed at t = {t}: <γ',γ'> = {null_residual}, <γ'',γ''> = {accel}")]
    PseudoArc {
        t: f64,
        null_residual: f64,
        accel: f64,
    },

    #[error("frame Gram residual {residual} exceeds tolerance at t = {t}")]
    GramResidual { t: f64, residual: f64 },

    #[error("{name} is not constant along the source curve (relative deviation {deviation})")]
    NonConstantCurvature { name: &'static str, deviation: f64 },

    #[error("Bertrand relation underdetermined: κ₁ = {kappa1} at t = {t} is below tolerance")]
    BertrandUnderdetermined { t: f64, kappa1: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl GeomError {
    pub fn code(&self) -> &'static str {
        match self {
            GeomError::Degenerate(_) => "degenerate_input",
            GeomError::NullDegeneracy { .. } => "null_degeneracy",
            GeomError::RankDeficient { .. } => "rank_deficient",
            GeomError::Parse(_) => "parse_error",
            GeomError::Eval { .. } => "evaluation_domain",
            GeomError::InvalidCurve(_) => "invalid_curve",
            GeomError::OutOfDomain { .. } => "out_of_domain",
            GeomError::OrderTooHigh { .. } => "order_too_high",
            GeomError::CausalViolation { .. } => "causal_violation",
            GeomError::NullAcceleration { .. } => "null_acceleration",
            GeomError::Quadrature { .. } => "quadrature_failure",
            GeomError::OffDeSitter { .. } => "off_de_sitter",
            GeomError::NotUnitSpeed { .. } => "not_unit_speed",
            GeomError::GeodesicDegeneracy { .. } => "geodesic_degeneracy",
            GeomError::StandingAssumption { .. } => "standing_assumption",
            GeomError::FrameNormalization { .. } => "frame_normalization",
            GeomError::CartanIndependence { .. } => "cartan_independence",
            GeomError::PseudoArc { .. } => "pseudo_arc_precondition",
            GeomError::GramResidual { .. } => "gram_residual",
            GeomError::NonConstantCurvature { .. } => "non_constant_curvature",
            GeomError::BertrandUnderdetermined { .. } => "bertrand_underdetermined",
            GeomError::InvalidParams(_) => "invalid_params",
        }
    }
}
