//! Curve definitions, jets, and the [`Curve`] abstraction shared by every
//! geometric computation.

use std::collections::BTreeMap;
use std::ops::Index;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::expr::{differentiate, parse_expr_with, Expr};
use crate::lorentz::{causal_character_scaled, minkowski_dot, CausalCharacter, LorentzTransform, Vec4};
use crate::parallel::uniform_grid;

/// Highest derivative order a jet can carry.
///
/// Order 4 is what the curvature formulas consume; one more order is needed
/// when a null curve is carried to its pseudo-arc parameter by the chain rule.
pub const MAX_JET_ORDER: usize = 5;

/// Position and derivatives of a curve at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    derivs: [Vec4; MAX_JET_ORDER + 1],
}

impl Jet {
    pub fn new(derivs: &[Vec4]) -> Self {
        assert!(
            !derivs.is_empty() && derivs.len() <= MAX_JET_ORDER + 1,
            "jet needs between 1 and {} entries",
            MAX_JET_ORDER + 1
        );
        let mut d = [Vec4::ZERO; MAX_JET_ORDER + 1];
        d[..derivs.len()].copy_from_slice(derivs);
        Jet {
            order: derivs.len() - 1,
            derivs: d,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, k: usize) -> Option<&Vec4> {
        (k <= self.order).then(|| &self.derivs[k])
    }

    pub fn as_slice(&self) -> &[Vec4] {
        &self.derivs[..=self.order]
    }

    pub fn map(&self, f: impl Fn(&Vec4) -> Vec4) -> Jet {
        let mut out = *self;
        for d in out.derivs[..=self.order].iter_mut() {
            *d = f(d);
        }
        out
    }
}

impl Index<usize> for Jet {
    type Output = Vec4;
    fn index(&self, k: usize) -> &Vec4 {
        assert!(k <= self.order, "derivative {k} not present in jet of order {}", self.order);
        &self.derivs[k]
    }
}

/// A parametrized curve in R⁴₁ that can report jets.
pub trait Curve: Send + Sync {
    fn domain(&self) -> (f64, f64);

    fn max_order(&self) -> usize;

    fn jet(&self, t: f64, order: usize) -> Result<Jet>;

    fn position(&self, t: f64) -> Result<Vec4> {
        Ok(self.jet(t, 0)?[0])
    }
}

/// Rejects parameters outside the domain; values within rounding of an
/// endpoint are clamped onto it.
pub fn check_domain(domain: (f64, f64), t: f64) -> Result<f64> {
    let (lo, hi) = domain;
    let slack = 1e-12 * (hi - lo).abs().max(1.0);
    if !t.is_finite() || t < lo - slack || t > hi + slack {
        return Err(GeomError::OutOfDomain { t, lo, hi });
    }
    Ok(t.clamp(lo, hi))
}

pub fn check_order(order: usize, max: usize) -> Result<()> {
    if order > max {
        Err(GeomError::OrderTooHigh { requested: order, max })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    DeSitter,
}

impl Surface {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "de_sitter" | "de-sitter" | "S13" => Some(Surface::DeSitter),
            _ => None,
        }
    }
}

/// On-disk curve definition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub name: String,
    pub components: [String; 4],
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
}

impl CurveFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve file serializes")
    }
}

/// A symbolic curve: four component expressions of `t` on a closed interval,
/// with its derivative expressions precomputed up to [`MAX_JET_ORDER`].
#[derive(Clone, Debug)]
pub struct CurveDef {
    name: String,
    domain: (f64, f64),
    declared_character: Option<CausalCharacter>,
    declared_surface: Option<Surface>,
    derivs: Vec<[Expr; 4]>,
}

impl CurveDef {
    pub fn new(name: impl Into<String>, components: [Expr; 4], domain: (f64, f64)) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GeomError::InvalidCurve(format!(
                "domain [{lo}, {hi}] must be finite with lo < hi"
            )));
        }
        let mut derivs = vec![components];
        for k in 0..MAX_JET_ORDER {
            let next = std::array::from_fn(|i| differentiate(&derivs[k][i]));
            derivs.push(next);
        }
        Ok(CurveDef {
            name: name.into(),
            domain,
            declared_character: None,
            declared_surface: None,
            derivs,
        })
    }

    pub fn from_file(file: &CurveFile) -> Result<Self> {
        let parse = |i: usize| parse_expr_with(&file.components[i], &file.constants);
        let components = [parse(0)?, parse(1)?, parse(2)?, parse(3)?];
        let mut def = CurveDef::new(file.name.clone(), components, (file.domain[0], file.domain[1]))?;
        if let Some(c) = &file.character {
            let c = CausalCharacter::parse(c)
                .ok_or_else(|| GeomError::InvalidCurve(format!("unknown character '{c}'")))?;
            def.declared_character = Some(c);
        }
        if let Some(s) = &file.surface {
            let s = Surface::parse(s).ok_or_else(|| GeomError::InvalidCurve(format!("unknown surface '{s}'")))?;
            def.declared_surface = Some(s);
        }
        Ok(def)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file = CurveFile::from_json(text).map_err(|e| GeomError::InvalidCurve(e.to_string()))?;
        CurveDef::from_file(&file)
    }

    pub fn with_declared(mut self, character: Option<CausalCharacter>, surface: Option<Surface>) -> Self {
        self.declared_character = character;
        self.declared_surface = surface;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[Expr; 4] {
        &self.derivs[0]
    }

    pub fn declared_character(&self) -> Option<CausalCharacter> {
        self.declared_character
    }

    pub fn declared_surface(&self) -> Option<Surface> {
        self.declared_surface
    }

    /// The symbolic k-th derivative of each component.
    pub fn derivative_exprs(&self, k: usize) -> Option<&[Expr; 4]> {
        self.derivs.get(k)
    }
}

impl Curve for CurveDef {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn max_order(&self) -> usize {
        MAX_JET_ORDER
    }

    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        eval_jet(self, t, order)
    }
}

/// Evaluates the curve's position and symbolic derivatives at `t`.
pub fn eval_jet(c: &CurveDef, t: f64, order: usize) -> Result<Jet> {
    check_order(order, MAX_JET_ORDER)?;
    let t = check_domain(c.domain, t)?;
    let mut out = [Vec4::ZERO; MAX_JET_ORDER + 1];
    for (k, slot) in out.iter_mut().enumerate().take(order + 1) {
        let mut v = [0.0; 4];
        for (component, e) in c.derivs[k].iter().enumerate() {
            v[component] = e.eval(t).map_err(|err| GeomError::Eval {
                component,
                t,
                message: err.to_string(),
            })?;
        }
        *slot = Vec4(v);
    }
    Ok(Jet::new(&out[..=order]))
}

/// Image of a curve under a fixed Lorentz transformation.
pub struct Transformed {
    inner: Arc<dyn Curve>,
    map: LorentzTransform,
}

impl Transformed {
    pub fn new(inner: Arc<dyn Curve>, map: LorentzTransform) -> Self {
        Transformed { inner, map }
    }
}

impl Curve for Transformed {
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }

    fn max_order(&self) -> usize {
        self.inner.max_order()
    }

    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        Ok(self.inner.jet(t, order)?.map(|v| self.map.apply(v)))
    }
}

/// Outcome of checking a curve's declared character and surface on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub declared_character: Option<CausalCharacter>,
    pub declared_surface: Option<Surface>,
    /// Extremes of `<γ',γ'>` over the grid.
    pub min_speed_sq: f64,
    pub max_speed_sq: f64,
    /// Worst `|<γ,γ> − 1|` over the grid.
    pub max_de_sitter_residual: f64,
    pub first_failure: Option<ValidationFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationFailure {
    pub t: f64,
    pub reason: String,
}

/// Samples the domain uniformly and checks the declared causal character of
/// `γ'` and, when declared, membership of de Sitter space.
pub fn validate_declared(c: &CurveDef, samples: usize, tol: f64) -> Result<ValidationReport> {
    if samples < 2 {
        return Err(GeomError::InvalidParams("validation needs at least 2 samples".into()));
    }
    let (lo, hi) = c.domain;
    let mut report = ValidationReport {
        name: c.name.clone(),
        passed: true,
        samples,
        declared_character: c.declared_character,
        declared_surface: c.declared_surface,
        min_speed_sq: f64::INFINITY,
        max_speed_sq: f64::NEG_INFINITY,
        max_de_sitter_residual: 0.0,
        first_failure: None,
    };
    for t in uniform_grid(lo, hi, samples) {
        let jet = eval_jet(c, t, 1)?;
        let speed_sq = minkowski_dot(&jet[1], &jet[1]);
        report.min_speed_sq = report.min_speed_sq.min(speed_sq);
        report.max_speed_sq = report.max_speed_sq.max(speed_sq);
        let ds = (minkowski_dot(&jet[0], &jet[0]) - 1.0).abs();
        report.max_de_sitter_residual = report.max_de_sitter_residual.max(ds);

        let mut failure = None;
        if let Some(expected) = c.declared_character {
            match causal_character_scaled(&jet[1], tol) {
                Ok(found) if found == expected => {}
                Ok(found) => {
                    failure = Some(format!("tangent is {found:?}, declared {expected:?} (<γ',γ'> = {speed_sq})"));
                }
                Err(e) => failure = Some(format!("tangent unclassifiable: {e}")),
            }
        }
        if failure.is_none() && c.declared_surface == Some(Surface::DeSitter) && ds > tol {
            failure = Some(format!("off de Sitter space: |<γ,γ> - 1| = {ds}"));
        }
        if let Some(reason) = failure {
            report.passed = false;
            report.first_failure.get_or_insert(ValidationFailure { t, reason });
        }
    }
    Ok(report)
}
