//! Spacelike and null curves on de Sitter 3-space inside Minkowski space R⁴₁,
//! and Bertrand curves built from them.
//!
//! Curves are given symbolically ([`CurveDef`]) or as samples
//! ([`NumericCurve`]) and expose derivative jets through the [`Curve`] trait.
//! On top of that sit the moving frames of unit-speed spacelike curves
//! ([`spacelike_apparatus`]), Cartan frames of null curves
//! ([`cartan_apparatus`]), arclength and pseudo-arc reparametrization, and the
//! two Bertrand constructions with their verification.

pub mod bertrand;
pub mod cartan;
pub mod curve;
pub mod error;
pub mod expr;
pub mod families;
pub mod frenet;
pub mod interp;
pub mod lorentz;
pub mod numeric;
pub mod parallel;
pub mod quadrature;
pub mod reparam;
pub mod spacelike;

pub use bertrand::{
    construct_from_null_helix, construct_from_spacelike, fit_bertrand, verify_bertrand, verify_construction,
    BertrandParams, BertrandReport, ClosedForms, Construction, SourceInvariants,
};
pub use cartan::{
    cartan_apparatus, cartan_curvatures_eq3, cartan_curvatures_invariant, pseudo_spherical_test, CartanApparatus,
    CartanCurvatures, CartanResiduals, SphereReport, SphereTolerances,
};
pub use curve::{eval_jet, validate_declared, Curve, CurveDef, CurveFile, Jet, Surface, Transformed, ValidationReport};
pub use error::{GeomError, Result};
pub use expr::{differentiate, parse_expr, parse_expr_with, Expr, ParseError};
pub use frenet::{frenet_curvatures_r41, FrenetCurvatures};
pub use lorentz::{
    causal_character, det4, hyperplane_classify, minkowski_dot, on_de_sitter, pseudo_norm, signed_gram_schmidt,
    wedge3, CausalCharacter, Hyperplane, LorentzTransform, SignedFrame, Vec4,
};
pub use numeric::NumericCurve;
pub use reparam::{arclength_reparam, pseudo_arc_reparam, ReparamKind, ReparamMap};
pub use spacelike::{frenet_residuals, spacelike_apparatus, FrameTolerances, FrenetResiduals, SpacelikeApparatus};
