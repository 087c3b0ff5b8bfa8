//! Generalized Frenet curvatures of non-null curves in R⁴₁.
//!
//! Successive derivatives `γ', γ'', γ''', γ⁗` are orthogonalized with the
//! indefinite metric. With `u₁..u₄` the orthogonalized vectors,
//! `hᵢ = sqrt|<uᵢ,uᵢ>|` and `v = h₁` the speed:
//!
//! ```text
//! κ₁ = h₂ / v²
//! κ₂ = h₃ / (h₂ v)
//! κ₃ = ± h₄ / (h₃ v)
//! ```
//!
//! These reduce to the classical curvature and torsion in any spacelike
//! 3-plane and are invariant under reparametrization. κ₃ carries the sign of
//! `det(γ', γ'', γ''', γ⁗)`.

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{GeomError, Result};
use crate::lorentz::{det4, minkowski_dot, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetCurvatures {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    /// `<γ',γ'>`
    pub speed_sq: f64,
    /// First derivative order (2..=4) found dependent on its predecessors;
    /// curvatures from there on are reported as zero.
    pub collapsed_at: Option<usize>,
}

/// Curvatures from the derivative vectors `d[0] = γ'` … `d[3] = γ⁗`.
pub fn frenet_from_derivatives(d: &[Vec4; 4], tol: f64) -> Result<FrenetCurvatures> {
    let speed_sq = d[0].norm_sq();
    if speed_sq.abs() <= tol * d[0].euclid_norm().powi(2).max(tol) {
        return Err(GeomError::NullDegeneracy { index: 0 });
    }

    let mut us: Vec<(Vec4, f64)> = vec![(d[0], speed_sq)];
    let mut h = [speed_sq.abs().sqrt(), 0.0, 0.0, 0.0];
    let mut collapsed_at = None;
    for k in 1..4 {
        let mut u = d[k];
        for (ui, qi) in &us {
            u -= (minkowski_dot(&d[k], ui) / qi) * *ui;
        }
        if u.euclid_norm() <= tol * d[k].euclid_norm().max(1.0) {
            collapsed_at = Some(k + 1);
            break;
        }
        let q = u.norm_sq();
        if q.abs() <= tol * u.euclid_norm().powi(2) {
            return Err(GeomError::NullDegeneracy { index: k });
        }
        h[k] = q.abs().sqrt();
        us.push((u, q));
    }

    let v = h[0];
    let kappa1 = if h[1] > 0.0 { h[1] / (v * v) } else { 0.0 };
    let kappa2 = if h[2] > 0.0 { h[2] / (h[1] * v) } else { 0.0 };
    let kappa3 = if h[3] > 0.0 {
        det4(&d[0], &d[1], &d[2], &d[3]).signum() * h[3] / (h[2] * v)
    } else {
        0.0
    };
    Ok(FrenetCurvatures {
        kappa1,
        kappa2,
        kappa3,
        speed_sq,
        collapsed_at,
    })
}

/// Generalized Frenet curvatures of `c` at `t`.
pub fn frenet_curvatures_r41(c: &dyn Curve, t: f64, tol: f64) -> Result<FrenetCurvatures> {
    let j = c.jet(t, 4)?;
    frenet_from_derivatives(&[j[1], j[2], j[3], j[4]], tol)
}
