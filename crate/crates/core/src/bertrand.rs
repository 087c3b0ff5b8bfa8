//! Bertrand curves built from constant-curvature curves on de Sitter space.
//!
//! Two constructions, with `c_θ = coth θ`:
//!
//! * from a unit-speed spacelike helix on S¹₃ with frame `{γ, t, n, e}`:
//!   `γ̃(s) = a∫γ + a c_θ ∫e + c`;
//! * from a null helix parametrized by pseudo-arc with Cartan frame
//!   `{L, N, W₁, W₂}`: `γ̃(s) = a∫L + a c_θ ∫W₂ + c`.
//!
//! Integrals run from the left end of the source domain. Positions come from
//! cumulative Gauss–Legendre quadrature; derivatives of γ̃ are evaluated
//! exactly from the source jets, never by differentiating the quadrature.

use std::sync::Arc;

use serde::Serialize;

use crate::cartan::{cartan_apparatus, DEFAULT_CARTAN_TOL};
use crate::curve::{check_domain, check_order, Curve, Jet, MAX_JET_ORDER};
use crate::error::{GeomError, Result};
use crate::frenet::frenet_curvatures_r41;
use crate::lorentz::{causal_character_scaled, pseudo_norm, wedge3, CausalCharacter, Vec4, DEFAULT_CAUSAL_TOL};
use crate::numeric::NumericCurve;
use crate::parallel::{map_grid, uniform_grid};
use crate::quadrature::{cumulative, integrate_panel};
use crate::spacelike::{spacelike_apparatus, FrameTolerances};

/// Minimum number of construction knots.
pub const MIN_CONSTRUCTION_SAMPLES: usize = 64;
/// Allowed relative variation of the source curvatures.
pub const SOURCE_CONSTANCY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BertrandParams {
    pub scale_a: f64,
    pub theta: f64,
    pub c: Vec4,
}

impl BertrandParams {
    pub fn new(scale_a: f64, theta: f64, c: Vec4) -> Result<Self> {
        let p = BertrandParams { scale_a, theta, c };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if !(self.scale_a.is_finite() && self.scale_a != 0.0) {
            return Err(GeomError::InvalidParams("scale a must be finite and nonzero".into()));
        }
        let s = self.theta.sinh();
        if !(self.theta.is_finite() && s != 0.0 && s.is_finite() && self.coth().is_finite()) {
            return Err(GeomError::InvalidParams("θ must give finite nonzero sinh θ and coth θ".into()));
        }
        if !self.c.is_finite() {
            return Err(GeomError::InvalidParams("constant vector c must be finite".into()));
        }
        Ok(())
    }

    pub fn coth(&self) -> f64 {
        1.0 / self.theta.tanh()
    }
}

/// Which construction produced a curve, with the constant source invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "theorem", rename_all = "snake_case")]
pub enum SourceInvariants {
    /// Spacelike helix on S¹₃; `e_sign = <e,e>`.
    Spacelike { kappa_g: f64, tau_g: f64, e_sign: f64 },
    /// Null helix at pseudo-arc.
    NullHelix { k1: f64, k2: f64 },
}

/// Constant-curvature closed forms of κ, τ, α, β stated for the two
/// constructions. Entries are `None` when a radicand is negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ClosedForms {
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl ClosedForms {
    /// `ακ + βτ` with the stated constants.
    pub fn identity_value(&self) -> Option<f64> {
        Some(self.alpha? * self.kappa? + self.beta? * self.tau?)
    }
}

fn real_sqrt(x: f64) -> Option<f64> {
    (x >= 0.0).then(|| x.sqrt())
}

impl SourceInvariants {
    /// `<γ̃',γ̃'>` implied by the frame relations.
    pub fn predicted_speed_sq(&self, p: &BertrandParams) -> f64 {
        let (a, ct) = (p.scale_a, p.coth());
        match *self {
            SourceInvariants::Spacelike { e_sign, .. } => a * a * (1.0 + ct * ct * e_sign),
            SourceInvariants::NullHelix { .. } => a * a * ct * ct,
        }
    }

    pub fn closed_forms(&self, p: &BertrandParams) -> ClosedForms {
        let (a, th) = (p.scale_a, p.theta);
        let (sh, ch, ct) = (th.sinh(), th.cosh(), p.coth());
        match *self {
            SourceInvariants::Spacelike { kappa_g, tau_g, .. } => {
                let s = (1.0 + ct * ct * tau_g * tau_g).sqrt();
                let big_a = real_sqrt((ch * (tau_g * tau_g + 1.0)).powi(2) - kappa_g * kappa_g * s * s)
                    .filter(|v| *v > 0.0);
                ClosedForms {
                    kappa: Some(sh * sh * s / a),
                    tau: big_a.map(|r| r * sh / (a * s)),
                    alpha: Some(a * ct * ct / s),
                    beta: big_a.map(|r| -a * sh * s / r),
                }
            }
            SourceInvariants::NullHelix { k1, k2 } => {
                let r = real_sqrt(k1 * k1 * ch * ch - 1.0).filter(|v| *v > 0.0);
                let m = 1.0 - ct * k2;
                ClosedForms {
                    kappa: Some(m / (a * ct * ct)),
                    tau: r.map(|r| r / ch),
                    alpha: (m != 0.0).then(|| a * ch * ch / m),
                    beta: r.map(|r| -ch.powi(3) / r),
                }
            }
        }
    }
}

/// Exact-derivative view of a constructed curve.
pub struct BertrandCurve {
    source: Arc<dyn Curve>,
    params: BertrandParams,
    invariants: SourceInvariants,
    knots: Vec<f64>,
    positions: Vec<Vec4>,
}

/// `Dᵐ (γ ∧ γ' ∧ γ'')` by the Leibniz rule over the three slots.
fn wedge_derivative(j: &Jet, m: usize) -> Vec4 {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    let mut acc = Vec4::ZERO;
    for i in 0..=m {
        for k in 0..=(m - i) {
            let l = m - i - k;
            let coeff = fact(m) / (fact(i) * fact(k) * fact(l));
            acc += coeff * wedge3(&j[i], &j[1 + k], &j[2 + l]);
        }
    }
    acc
}

impl BertrandCurve {
    /// `γ̃', γ̃'', …` up to `order` at `t`.
    fn derivatives(&self, t: f64, order: usize) -> Result<Vec<Vec4>> {
        let a = self.params.scale_a;
        let ct = self.params.coth();
        match self.invariants {
            SourceInvariants::Spacelike { .. } => {
                let j = self.source.jet(t, order + 1)?;
                // e = γ ∧ γ' ∧ γ'' / (κ_g · ‖γ ∧ t ∧ n‖) with both factors constant
                let app = spacelike_apparatus(self.source.as_ref(), t, &FrameTolerances::default())?;
                let w = wedge3(&j[0], &j[1], &j[2]);
                let scale = 1.0 / (app.kappa_g * pseudo_norm(&((1.0 / app.kappa_g) * w)));
                Ok((1..=order)
                    .map(|k| a * (j[k - 1] + (ct * scale) * wedge_derivative(&j, k - 1)))
                    .collect())
            }
            SourceInvariants::NullHelix { k2, .. } => {
                let j = self.source.jet(t, order)?;
                let frame = cartan_apparatus(self.source.as_ref(), t, DEFAULT_CARTAN_TOL)?;
                // W₂' = −k₂L, so W₂⁽ᵐ⁾ = −k₂γ⁽ᵐ⁾ for m ≥ 1
                Ok((1..=order)
                    .map(|k| {
                        if k == 1 {
                            a * (j[1] + ct * frame.W2)
                        } else {
                            a * (j[k] - (ct * k2) * j[k - 1])
                        }
                    })
                    .collect())
            }
        }
    }

    pub fn params(&self) -> &BertrandParams {
        &self.params
    }

    pub fn invariants(&self) -> &SourceInvariants {
        &self.invariants
    }
}

impl Curve for BertrandCurve {
    fn domain(&self) -> (f64, f64) {
        self.source.domain()
    }

    fn max_order(&self) -> usize {
        let src = self.source.max_order();
        match self.invariants {
            SourceInvariants::Spacelike { .. } => src.saturating_sub(1).min(MAX_JET_ORDER),
            SourceInvariants::NullHelix { .. } => src.min(MAX_JET_ORDER),
        }
    }

    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        check_order(order, self.max_order())?;
        let t = check_domain(self.domain(), t)?;
        let k = self.knots.partition_point(|&x| x <= t).saturating_sub(1).min(self.knots.len() - 2);
        let partial = integrate_panel(&|x| Ok::<_, GeomError>(self.derivatives(x, 1)?[0]), self.knots[k], t)?;
        let mut out = vec![self.positions[k] + partial];
        if order > 0 {
            out.extend(self.derivatives(t, order)?);
        }
        Ok(Jet::new(&out))
    }
}

/// A constructed Bertrand curve: samples at the construction knots with exact
/// jets attached, plus the source data it was built from.
#[derive(Clone)]
pub struct Construction {
    pub curve: NumericCurve,
    pub params: BertrandParams,
    pub invariants: SourceInvariants,
}

impl Construction {
    pub fn predicted_speed_sq(&self) -> f64 {
        self.invariants.predicted_speed_sq(&self.params)
    }

    pub fn closed_forms(&self) -> ClosedForms {
        self.invariants.closed_forms(&self.params)
    }
}

fn relative_spread(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let dev = values.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    dev / mean.abs().max(1.0)
}

fn check_constant(name: &'static str, values: &[f64]) -> Result<f64> {
    let deviation = relative_spread(values);
    if deviation > SOURCE_CONSTANCY_TOL {
        return Err(GeomError::NonConstantCurvature { name, deviation });
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

fn build(source: Arc<dyn Curve>, p: BertrandParams, invariants: SourceInvariants, n: usize) -> Result<Construction> {
    let (lo, hi) = source.domain();
    let knots = uniform_grid(lo, hi, n);
    let mut bc = BertrandCurve {
        source,
        params: p,
        invariants,
        knots: Vec::new(),
        positions: Vec::new(),
    };
    let integrals = cumulative(&|x| Ok::<_, GeomError>(bc.derivatives(x, 1)?[0]), &knots)?;
    if let Some(i) = integrals.iter().position(|v| !v.is_finite()) {
        return Err(GeomError::Quadrature { t: knots[i] });
    }
    bc.positions = integrals.into_iter().map(|v| v + p.c).collect();
    bc.knots = knots.clone();
    let points = bc.positions.clone();
    let curve = NumericCurve::with_exact(knots, points, Arc::new(bc))?;
    Ok(Construction {
        curve,
        params: p,
        invariants,
    })
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_CONSTRUCTION_SAMPLES {
        return Err(GeomError::InvalidParams(format!(
            "construction needs at least {MIN_CONSTRUCTION_SAMPLES} samples, got {n}"
        )));
    }
    Ok(())
}

/// `γ̃ = a∫γ + a coth θ ∫e + c` from a unit-speed spacelike curve on S¹₃ with
/// constant κ_g ≠ 0 and τ_g, sampled at `n` knots.
pub fn construct_from_spacelike(src: Arc<dyn Curve>, p: BertrandParams, n: usize) -> Result<Construction> {
    p.check()?;
    check_samples(n)?;
    if src.max_order() < 5 {
        return Err(GeomError::OrderTooHigh {
            requested: 5,
            max: src.max_order(),
        });
    }
    let (lo, hi) = src.domain();
    let tol = FrameTolerances::default();
    let apps = map_grid(&uniform_grid(lo, hi, n), |s| spacelike_apparatus(src.as_ref(), s, &tol))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let kappa_g = check_constant("κ_g", &apps.iter().map(|a| a.kappa_g).collect::<Vec<_>>())?;
    let tau_g = check_constant("τ_g", &apps.iter().map(|a| a.tau_g).collect::<Vec<_>>())?;
    let e_sign = apps[0].e_sign;
    if apps.iter().any(|a| a.e_sign != e_sign) {
        return Err(GeomError::InvalidCurve("causal character of e changes along the curve".into()));
    }
    build(src, p, SourceInvariants::Spacelike { kappa_g, tau_g, e_sign }, n)
}

/// `γ̃ = a∫L + a coth θ ∫W₂ + c` from a null helix parametrized by pseudo-arc,
/// sampled at `n` knots.
pub fn construct_from_null_helix(src: Arc<dyn Curve>, p: BertrandParams, n: usize) -> Result<Construction> {
    p.check()?;
    check_samples(n)?;
    let (lo, hi) = src.domain();
    let frames = map_grid(&uniform_grid(lo, hi, n), |t| cartan_apparatus(src.as_ref(), t, DEFAULT_CARTAN_TOL))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let k1 = check_constant("k₁", &frames.iter().map(|f| f.k1).collect::<Vec<_>>())?;
    let k2 = check_constant("k₂", &frames.iter().map(|f| f.k2).collect::<Vec<_>>())?;
    build(src, p, SourceInvariants::NullHelix { k1, k2 }, n)
}

/// Relative standard deviation `stdev / |mean|` (plain stdev for a zero mean).
pub fn relative_stdev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if mean == 0.0 {
        sd
    } else {
        sd / mean.abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BertrandReport {
    /// Mean `<γ̃',γ̃'>` over the samples.
    pub speed_sq: f64,
    pub speed_sq_predicted: Option<f64>,
    /// `max |<γ̃',γ̃'> − predicted|`, or the spread about the mean without a prediction.
    pub speed_sq_max_deviation: f64,
    pub character: CausalCharacter,
    pub kappa_samples: Vec<f64>,
    pub tau_samples: Vec<f64>,
    pub kappa_rel_stdev: f64,
    pub tau_rel_stdev: f64,
    pub kappa_closed: Option<f64>,
    pub tau_closed: Option<f64>,
    pub alpha_fit: f64,
    pub beta_fit: f64,
    pub fit_residual: f64,
    /// The samples did not determine a unique line (constant curvatures).
    pub degenerate_fit: bool,
    pub alpha_paper: Option<f64>,
    pub beta_paper: Option<f64>,
    /// `ακ + βτ` with the closed-form constants.
    pub paper_identity_value: Option<f64>,
    /// The same with `α, β` negated.
    pub paper_identity_value_negated: Option<f64>,
}

/// Relative spread below which curvature samples count as one point.
pub const DISTINCT_PAIR_TOL: f64 = 1e-8;

/// Least squares `ακᵢ + βτᵢ ≈ 1`; returns `(α, β, degenerate)`.
///
/// When all `(κᵢ, τᵢ)` coincide within [`DISTINCT_PAIR_TOL`] any line through
/// the mean point fits; the minimum-norm choice `(κ, τ)/(κ² + τ²)` is returned
/// and the flag set. Otherwise the 2×2 normal equations are solved in centred form.
pub fn fit_bertrand(kappa: &[f64], tau: &[f64]) -> Result<(f64, f64, bool)> {
    let n = kappa.len() as f64;
    let km = kappa.iter().sum::<f64>() / n;
    let tm = tau.iter().sum::<f64>() / n;
    let norm_sq = km * km + tm * tm;
    if !(norm_sq > 0.0) {
        return Err(GeomError::InvalidParams("Bertrand fit needs nonzero curvature samples".into()));
    }
    let spread = kappa
        .iter()
        .zip(tau)
        .fold(0.0f64, |m, (k, t)| m.max((k - km).hypot(t - tm)));
    if spread <= DISTINCT_PAIR_TOL * norm_sq.sqrt() {
        return Ok((km / norm_sq, tm / norm_sq, true));
    }

    // With centred scatter C and mean m the normal matrix is C + n m mᵀ; its
    // determinant det C + n·m⊥ᵀ C m⊥ has no cancelling terms.
    let (mut c11, mut c12, mut c22) = (0.0, 0.0, 0.0);
    for (k, t) in kappa.iter().zip(tau) {
        let (dk, dt) = (k - km, t - tm);
        c11 += dk * dk;
        c12 += dk * dt;
        c22 += dt * dt;
    }
    let det = (c11 * c22 - c12 * c12).max(0.0) + n * (c11 * tm * tm + c22 * km * km - 2.0 * c12 * km * tm);
    if !(det > f64::EPSILON * n * norm_sq * (c11 + c22)) {
        // distinct samples on a line through the origin: no affine fit
        return Ok((km / norm_sq, tm / norm_sq, true));
    }
    Ok((n * (c22 * km - c12 * tm) / det, n * (c11 * tm - c12 * km) / det, false))
}

/// Samples generalized Frenet curvatures of `c` on `samples` uniform points,
/// fits the Bertrand relation and, when `source` is given, attaches the
/// closed-form constants of the matching construction.
pub fn verify_bertrand(
    c: &dyn Curve,
    samples: usize,
    tol: f64,
    source: Option<(&SourceInvariants, &BertrandParams)>,
) -> Result<BertrandReport> {
    if samples < 8 {
        return Err(GeomError::InvalidParams("Bertrand verification needs at least 8 samples".into()));
    }
    let (lo, hi) = c.domain();
    let grid = uniform_grid(lo, hi, samples);
    let rows = map_grid(&grid, |t| frenet_curvatures_r41(c, t, DEFAULT_CAUSAL_TOL).map(|k| (t, k)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    if let Some((t, k)) = rows.iter().find(|(_, k)| k.kappa1 <= tol) {
        return Err(GeomError::BertrandUnderdetermined {
            t: *t,
            kappa1: k.kappa1,
        });
    }

    let kappa: Vec<f64> = rows.iter().map(|(_, k)| k.kappa1).collect();
    let tau: Vec<f64> = rows.iter().map(|(_, k)| k.kappa2).collect();
    let speeds: Vec<f64> = rows.iter().map(|(_, k)| k.speed_sq).collect();
    let speed_sq = speeds.iter().sum::<f64>() / speeds.len() as f64;
    let speed_sq_predicted = source.map(|(inv, p)| inv.predicted_speed_sq(p));
    let centre = speed_sq_predicted.unwrap_or(speed_sq);
    let speed_sq_max_deviation = speeds.iter().fold(0.0f64, |m, v| m.max((v - centre).abs()));
    let j0 = c.jet(grid[0], 1)?;
    let character = causal_character_scaled(&j0[1], DEFAULT_CAUSAL_TOL)?;

    let (alpha_fit, beta_fit, degenerate_fit) = fit_bertrand(&kappa, &tau)?;
    let fit_residual = kappa
        .iter()
        .zip(&tau)
        .fold(0.0f64, |m, (k, t)| m.max((alpha_fit * k + beta_fit * t - 1.0).abs()));

    let closed = source.map(|(inv, p)| inv.closed_forms(p)).unwrap_or_default();
    let negated = ClosedForms {
        alpha: closed.alpha.map(|a| -a),
        beta: closed.beta.map(|b| -b),
        ..closed
    };
    Ok(BertrandReport {
        speed_sq,
        speed_sq_predicted,
        speed_sq_max_deviation,
        character,
        kappa_rel_stdev: relative_stdev(&kappa),
        tau_rel_stdev: relative_stdev(&tau),
        kappa_samples: kappa,
        tau_samples: tau,
        kappa_closed: closed.kappa,
        tau_closed: closed.tau,
        alpha_fit,
        beta_fit,
        fit_residual,
        degenerate_fit,
        alpha_paper: closed.alpha,
        beta_paper: closed.beta,
        paper_identity_value: closed.identity_value(),
        paper_identity_value_negated: negated.identity_value(),
    })
}

/// [`verify_bertrand`] on a construction, with its closed forms attached.
pub fn verify_construction(con: &Construction, samples: usize, tol: f64) -> Result<BertrandReport> {
    verify_bertrand(&con.curve, samples, tol, Some((&con.invariants, &con.params)))
}
