//! Arclength and pseudo-arc reparametrization.
//!
//! The new parameter is `s(t) = ∫ φ(τ) dτ` from the left end of the domain,
//! with `φ = <γ',γ'>^{1/2}` (arclength, spacelike curves) or
//! `φ = <γ'',γ''>^{1/4}` (pseudo-arc, null curves). The map is tabulated by
//! composite Gauss–Legendre quadrature; its inverse starts from a monotone
//! cubic fit of the table and is polished by Newton steps against the
//! quadrature. Jets of the reparametrized curve are obtained by the chain
//! rule from the source jets, so no interpolant is ever differentiated.

use std::sync::Arc;

use serde::Serialize;

use crate::curve::{check_domain, check_order, Curve, Jet};
use crate::error::{GeomError, Result};
use crate::interp::MonotoneCubic;
use crate::lorentz::{causal_character_scaled, minkowski_dot, CausalCharacter, Vec4};
use crate::numeric::{NumericCurve, MIN_SAMPLES};
use crate::parallel::uniform_grid;
use crate::quadrature::{composite, cumulative, integrate_panel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReparamKind {
    Arclength,
    PseudoArc,
}

impl ReparamKind {
    /// Which derivative's square defines the speed.
    fn speed_derivative(self) -> usize {
        match self {
            ReparamKind::Arclength => 1,
            ReparamKind::PseudoArc => 2,
        }
    }

    fn exponent(self) -> f64 {
        match self {
            ReparamKind::Arclength => 0.5,
            ReparamKind::PseudoArc => 0.25,
        }
    }

    /// Extra source orders needed beyond the requested output order.
    fn order_shift(self) -> usize {
        self.speed_derivative() - 1
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `φ, φ', …` up to `count` entries for `φ = q^p`, `q = <γ⁽ᵐ⁾,γ⁽ᵐ⁾>`.
/// Requires a source jet of order at least `m + count − 1`.
pub(crate) fn speed_derivatives(kind: ReparamKind, jet: &Jet, count: usize, t: f64, tol: f64) -> Result<[f64; 4]> {
    let m = kind.speed_derivative();
    debug_assert!(count >= 1 && count <= 4 && jet.order() + 1 >= m + count);
    let mut q = [0.0; 4];
    for (k, qk) in q.iter_mut().enumerate().take(count) {
        *qk = (0..=k)
            .map(|i| binomial(k, i) * minkowski_dot(&jet[m + i], &jet[m + k - i]))
            .sum();
    }
    match kind {
        ReparamKind::Arclength => {
            let found = causal_character_scaled(&jet[1], tol).unwrap_or(CausalCharacter::Lightlike);
            if found != CausalCharacter::Spacelike {
                return Err(GeomError::CausalViolation {
                    t,
                    expected: CausalCharacter::Spacelike,
                    found,
                });
            }
        }
        ReparamKind::PseudoArc => {
            let found = causal_character_scaled(&jet[1], tol).unwrap_or(CausalCharacter::Lightlike);
            if found != CausalCharacter::Lightlike {
                return Err(GeomError::CausalViolation {
                    t,
                    expected: CausalCharacter::Lightlike,
                    found,
                });
            }
            if !(q[0] > tol) {
                return Err(GeomError::NullAcceleration { t, value: q[0] });
            }
        }
    }
    if !q[0].is_finite() {
        return Err(GeomError::Quadrature { t });
    }
    let p = kind.exponent();
    let phi = q[0].powf(p);
    let d1 = p * phi / q[0]; // p q^{p−1}
    let d2 = p * (p - 1.0) * phi / (q[0] * q[0]);
    let d3 = p * (p - 1.0) * (p - 2.0) * phi / (q[0] * q[0] * q[0]);
    Ok([
        phi,
        d1 * q[1],
        d2 * q[1] * q[1] + d1 * q[2],
        d3 * q[1].powi(3) + 3.0 * d2 * q[1] * q[2] + d1 * q[3],
    ])
}

/// Derivatives `t'(s), …, t''''(s)` of the inverse map from `φ = ds/dt` and
/// its t-derivatives. Index 0 is unused.
pub(crate) fn inverse_derivatives(phi: &[f64; 4]) -> [f64; 5] {
    let [f, f1, f2, f3] = *phi;
    let inv = 1.0 / f;
    [
        0.0,
        inv,
        -f1 * inv.powi(3),
        -f2 * inv.powi(4) + 3.0 * f1 * f1 * inv.powi(5),
        -f3 * inv.powi(5) + 10.0 * f1 * f2 * inv.powi(6) - 15.0 * f1.powi(3) * inv.powi(7),
    ]
}

/// Faà di Bruno to fourth order: jet of `γ(t(s))` from the jet of γ at `t(s)`
/// and the derivatives of `t(s)`.
pub fn compose_jet(src: &Jet, td: &[f64; 5], order: usize) -> Jet {
    assert!(order <= 4 && src.order() >= order);
    let (t1, t2, t3, t4) = (td[1], td[2], td[3], td[4]);
    let g = |k: usize| src[k];
    let mut out = vec![g(0)];
    if order >= 1 {
        out.push(t1 * g(1));
    }
    if order >= 2 {
        out.push((t1 * t1) * g(2) + t2 * g(1));
    }
    if order >= 3 {
        out.push(t1.powi(3) * g(3) + (3.0 * t1 * t2) * g(2) + t3 * g(1));
    }
    if order >= 4 {
        out.push(
            t1.powi(4) * g(4)
                + (6.0 * t1 * t1 * t2) * g(3)
                + (3.0 * t2 * t2 + 4.0 * t1 * t3) * g(2)
                + t4 * g(1),
        );
    }
    Jet::new(&out)
}

/// Tabulated monotone map between the source parameter and the new one.
pub struct ReparamMap {
    kind: ReparamKind,
    source: Arc<dyn Curve>,
    knots_t: Vec<f64>,
    knots_s: Vec<f64>,
    inverse_guess: MonotoneCubic,
    quadrature_error_estimate: f64,
    tol: f64,
}

impl std::fmt::Debug for ReparamMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReparamMap")
            .field("kind", &self.kind)
            .field("panels", &(self.knots_t.len() - 1))
            .field("total", &self.total())
            .field("quadrature_error_estimate", &self.quadrature_error_estimate)
            .finish()
    }
}

impl ReparamMap {
    pub fn build(source: Arc<dyn Curve>, kind: ReparamKind, panels: usize, tol: f64) -> Result<Self> {
        if panels < MIN_SAMPLES {
            return Err(GeomError::InvalidParams(format!("need at least {MIN_SAMPLES} panels")));
        }
        if source.max_order() < kind.speed_derivative() {
            return Err(GeomError::OrderTooHigh {
                requested: kind.speed_derivative(),
                max: source.max_order(),
            });
        }
        let (lo, hi) = source.domain();
        let speed = |t: f64| -> Result<f64> {
            let jet = source.jet(t, kind.speed_derivative())?;
            Ok(speed_derivatives(kind, &jet, 1, t, tol)?[0])
        };
        // every knot is checked too, not only the quadrature nodes
        let knots_t = uniform_grid(lo, hi, panels + 1);
        for &t in &knots_t {
            speed(t)?;
        }
        let knots_s = cumulative(&speed, &knots_t)?;
        let total = *knots_s.last().expect("knots");
        let refined = composite(&speed, lo, hi, 2 * panels)?;
        if knots_s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GeomError::Quadrature { t: lo });
        }
        let inverse_guess = MonotoneCubic::new(knots_s.clone(), knots_t.clone());
        Ok(ReparamMap {
            kind,
            source,
            knots_t,
            knots_s,
            inverse_guess,
            quadrature_error_estimate: (total - refined).abs(),
            tol,
        })
    }

    pub fn kind(&self) -> ReparamKind {
        self.kind
    }

    pub fn source(&self) -> &Arc<dyn Curve> {
        &self.source
    }

    /// Difference between the n-panel and 2n-panel totals.
    pub fn quadrature_error_estimate(&self) -> f64 {
        self.quadrature_error_estimate
    }

    pub fn total(&self) -> f64 {
        *self.knots_s.last().expect("knots")
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.knots_t, &self.knots_s)
    }

    /// `ds/dt` at `t`.
    pub fn speed(&self, t: f64) -> Result<f64> {
        let jet = self.source.jet(t, self.kind.speed_derivative())?;
        Ok(speed_derivatives(self.kind, &jet, 1, t, self.tol)?[0])
    }

    /// `s(t)`.
    pub fn forward(&self, t: f64) -> Result<f64> {
        let t = check_domain(self.source.domain(), t)?;
        let k = self.knots_t.partition_point(|&x| x <= t).saturating_sub(1).min(self.knots_t.len() - 2);
        let partial = integrate_panel(&|x| self.speed(x), self.knots_t[k], t)?;
        Ok(self.knots_s[k] + partial)
    }

    /// `t(s)`.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        let s = check_domain((0.0, self.total()), s)?;
        let (lo, hi) = self.source.domain();
        let mut t = self.inverse_guess.eval(s).clamp(lo, hi);
        for _ in 0..30 {
            let residual = self.forward(t)? - s;
            let step = residual / self.speed(t)?;
            let next = (t - step).clamp(lo, hi);
            let done = (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0);
            t = next;
            if done {
                break;
            }
        }
        Ok(t)
    }
}

/// The reparametrized curve `γ(t(s))`, with chain-rule jets.
pub struct ReparamCurve {
    map: Arc<ReparamMap>,
}

impl ReparamCurve {
    pub fn new(map: Arc<ReparamMap>) -> Self {
        ReparamCurve { map }
    }

    pub fn map(&self) -> &Arc<ReparamMap> {
        &self.map
    }
}

impl Curve for ReparamCurve {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.map.total())
    }

    fn max_order(&self) -> usize {
        self.map.source.max_order().saturating_sub(self.map.kind.order_shift()).min(4)
    }

    fn jet(&self, s: f64, order: usize) -> Result<Jet> {
        check_order(order, self.max_order())?;
        let t = self.map.inverse(s)?;
        if order == 0 {
            return self.map.source.jet(t, 0);
        }
        let src = self.map.source.jet(t, order + self.map.kind.order_shift())?;
        let phi = speed_derivatives(self.map.kind, &src, order, t, self.map.tol)?;
        Ok(compose_jet(&src, &inverse_derivatives(&phi), order))
    }
}

fn reparam(source: Arc<dyn Curve>, kind: ReparamKind, panels: usize, tol: f64) -> Result<(NumericCurve, Arc<ReparamMap>)> {
    let map = Arc::new(ReparamMap::build(source.clone(), kind, panels, tol)?);
    let (knots_t, knots_s) = map.knots();
    let points = knots_t
        .iter()
        .map(|&t| source.position(t))
        .collect::<Result<Vec<Vec4>>>()?;
    let curve = NumericCurve::with_exact(knots_s.to_vec(), points, Arc::new(ReparamCurve::new(map.clone())))?;
    Ok((curve, map))
}

/// Reparametrizes a spacelike curve by arclength on `panels` quadrature panels.
pub fn arclength_reparam(source: Arc<dyn Curve>, panels: usize, tol: f64) -> Result<(NumericCurve, Arc<ReparamMap>)> {
    reparam(source, ReparamKind::Arclength, panels, tol)
}

/// Reparametrizes a null curve with non-null acceleration by its pseudo-arc.
pub fn pseudo_arc_reparam(source: Arc<dyn Curve>, panels: usize, tol: f64) -> Result<(NumericCurve, Arc<ReparamMap>)> {
    reparam(source, ReparamKind::PseudoArc, panels, tol)
}
