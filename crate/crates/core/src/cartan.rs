//! Cartan frame `{L, N, W₁, W₂}` and Cartan curvatures of null curves.
//!
//! For a null Cartan curve parametrized by pseudo-arc the frame obeys
//!
//! ```text
//! L'  = W₁
//! N'  = k₁W₁ + k₂W₂
//! W₁' = −k₁L − N
//! W₂' = −k₂L
//! ```
//!
//! with `<L,N> = 1`, `<W₁,W₁> = <W₂,W₂> = 1` and all other products zero.
//! [`CartanResiduals::n_position_term`] additionally measures the variant
//! `N' = −γ + k₁W₁ + k₂W₂`; on de Sitter space `W₂ = ±γ`, so that variant is
//! off by exactly one unit vector and is reported, not enforced.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::curve::Curve;
use crate::error::{GeomError, Result};
use crate::lorentz::{det4, minkowski_dot, pseudo_norm, wedge3, Vec4};
use crate::parallel::{map_grid, uniform_grid};
use crate::reparam::{speed_derivatives, ReparamKind};

pub const DEFAULT_CARTAN_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct CartanApparatus {
    pub t: f64,
    pub L: Vec4,
    pub N: Vec4,
    pub W1: Vec4,
    pub W2: Vec4,
    pub k1: f64,
    pub k2: f64,
    pub gram_residual: f64,
    pub residuals: CartanResiduals,
}

/// Euclidean norms of the frame-equation residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartanResiduals {
    /// `‖L' − W₁‖`
    pub l: f64,
    /// `‖W₁' + k₁L + N‖`
    pub w1: f64,
    /// `‖W₂' + k₂L‖`
    pub w2: f64,
    /// `‖N' − k₁W₁ − k₂W₂‖`
    pub n: f64,
    /// `‖N' + γ − k₁W₁ − k₂W₂‖`
    pub n_position_term: f64,
}

impl CartanResiduals {
    /// Worst residual of the enforced equations.
    pub fn max(&self) -> f64 {
        self.l.max(self.w1).max(self.w2).max(self.n)
    }
}

#[allow(non_snake_case)]
fn gram_residual(L: &Vec4, N: &Vec4, W1: &Vec4, W2: &Vec4) -> f64 {
    let f = [L, N, W1, W2];
    let expected = |i: usize, j: usize| match (i.min(j), i.max(j)) {
        (0, 1) | (2, 2) | (3, 3) => 1.0,
        _ => 0.0,
    };
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((minkowski_dot(f[i], f[j]) - expected(i, j)).abs());
        }
    }
    worst
}

/// Cartan frame at `t` of a null curve parametrized by pseudo-arc.
///
/// `L = γ'`, `W₁ = γ''`, `k₁ = <γ''',γ'''>/2`, `N = −γ''' − k₁L`;
/// `W₂` is `L ∧ N ∧ W₁` normalized and oriented so that
/// `det(L, N, W₁, W₂) = +1`; `k₂ = <N', W₂>`.
#[allow(non_snake_case)]
pub fn cartan_apparatus(c: &dyn Curve, t: f64, tol: f64) -> Result<CartanApparatus> {
    let j = c.jet(t, 4)?;
    let (gamma, d1, d2, d3, d4) = (j[0], j[1], j[2], j[3], j[4]);

    let null_residual = d1.norm_sq();
    let accel = d2.norm_sq();
    if null_residual.abs() > tol * d1.euclid_norm().powi(2).max(1.0) || (accel - 1.0).abs() > tol {
        return Err(GeomError::PseudoArc {
            t,
            null_residual,
            accel,
        });
    }
    let span = wedge3(&d1, &d2, &d3);
    let scale = (d1.euclid_norm() * d2.euclid_norm() * d3.euclid_norm()).max(1.0);
    if span.euclid_norm() <= tol * scale {
        return Err(GeomError::CartanIndependence { t });
    }

    let L = d1;
    let W1 = d2;
    let k1 = 0.5 * d3.norm_sq();
    let N = -d3 - k1 * L;

    let w = wedge3(&L, &N, &W1);
    let mut w2_scale = 1.0 / pseudo_norm(&w);
    let mut W2 = w2_scale * w;
    if det4(&L, &N, &W1, &W2) < 0.0 {
        w2_scale = -w2_scale;
        W2 = -W2;
    }
    let gram = gram_residual(&L, &N, &W1, &W2);
    if gram > tol {
        return Err(GeomError::GramResidual { t, residual: gram });
    }

    let k1_prime = minkowski_dot(&d3, &d4);
    let L_prime = d2;
    let W1_prime = d3;
    let N_prime = -d4 - k1_prime * L - k1 * W1;
    let W2_prime =
        w2_scale * (wedge3(&L_prime, &N, &W1) + wedge3(&L, &N_prime, &W1) + wedge3(&L, &N, &W1_prime));
    let k2 = minkowski_dot(&N_prime, &W2);

    let residuals = CartanResiduals {
        l: (L_prime - W1).euclid_norm(),
        w1: (W1_prime + k1 * L + N).euclid_norm(),
        w2: (W2_prime + k2 * L).euclid_norm(),
        n: (N_prime - k1 * W1 - k2 * W2).euclid_norm(),
        n_position_term: (N_prime + gamma - k1 * W1 - k2 * W2).euclid_norm(),
    };
    Ok(CartanApparatus {
        t,
        L,
        N,
        W1,
        W2,
        k1,
        k2,
        gram_residual: gram,
        residuals,
    })
}

/// `a = <γ'',γ''>^{1/4}` and its first two parameter derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PseudoArcSpeed {
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartanCurvatures {
    pub k1: f64,
    pub k2: f64,
    pub speed: PseudoArcSpeed,
}

struct NullJetData {
    speed: PseudoArcSpeed,
    jerk_sq: f64,
    det: f64,
}

fn null_jet_data(c: &dyn Curve, t: f64, tol: f64) -> Result<NullJetData> {
    let j = c.jet(t, 4)?;
    let [a, a1, a2, _] = speed_derivatives(ReparamKind::PseudoArc, &j, 3, t, tol)?;
    Ok(NullJetData {
        speed: PseudoArcSpeed { a, a1, a2 },
        jerk_sq: j[3].norm_sq(),
        // det(γ',γ'',γ''',γ⁗) = <γ', γ'' ∧ γ''' ∧ γ⁗>
        det: minkowski_dot(&j[1], &wedge3(&j[2], &j[3], &j[4])),
    })
}

/// Cartan curvatures by the closed forms
/// `k₁ = (<γ''',γ'''> + 2aa'' − 4a'²)/(2a²)` and
/// `k₂ = −det(γ',γ'',γ''',γ⁗)/a⁴`.
///
/// These agree with the frame values at a pseudo-arc parameter (`a ≡ 1`) but
/// are not invariant under other parametrizations; see
/// [`cartan_curvatures_invariant`].
pub fn cartan_curvatures_eq3(c: &dyn Curve, t: f64, tol: f64) -> Result<CartanCurvatures> {
    let d = null_jet_data(c, t, tol)?;
    let PseudoArcSpeed { a, a1, a2 } = d.speed;
    Ok(CartanCurvatures {
        k1: (d.jerk_sq + 2.0 * a * a2 - 4.0 * a1 * a1) / (2.0 * a * a),
        k2: -d.det / a.powi(4),
        speed: d.speed,
    })
}

/// Parametrization-independent Cartan curvatures, obtained by carrying the
/// pseudo-arc values through the chain rule:
/// `k₁ = (<γ''',γ'''> + 2a³a'' − 9a²a'²)/(2a⁶)`, `k₂ = −det(γ',γ'',γ''',γ⁗)/a¹⁰`.
pub fn cartan_curvatures_invariant(c: &dyn Curve, t: f64, tol: f64) -> Result<CartanCurvatures> {
    let d = null_jet_data(c, t, tol)?;
    let PseudoArcSpeed { a, a1, a2 } = d.speed;
    Ok(CartanCurvatures {
        k1: (d.jerk_sq + 2.0 * a.powi(3) * a2 - 9.0 * a * a * a1 * a1) / (2.0 * a.powi(6)),
        k2: -d.det / a.powi(10),
        speed: d.speed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereTolerances {
    /// Allowed `max |k₂ − mean k₂|`.
    pub k2_constancy: f64,
    /// `min |k₂|` must exceed this.
    pub k2_nonzero: f64,
    /// Allowed `max |<A − γ, γ'>|` for the fitted fixed point.
    pub fixed_point: f64,
    /// Null-curve precondition tolerance.
    pub null: f64,
}

impl Default for SphereTolerances {
    fn default() -> Self {
        SphereTolerances {
            k2_constancy: 1e-6,
            k2_nonzero: 1e-6,
            fixed_point: 1e-8,
            null: 1e-9,
        }
    }
}

/// Result of the pseudo-sphericity tests on a sample grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereReport {
    pub samples: usize,
    pub k2_mean: f64,
    /// `max_t |k₂(t) − mean k₂|`
    pub k2_max_deviation: f64,
    pub k2_min_abs: f64,
    /// k₂ is a nonzero constant within tolerance.
    pub k2_criterion: bool,
    /// Least-squares fixed point A of `<A − γ, γ'> = 0`; `None` when the
    /// system is singular.
    pub fixed_point: Option<[f64; 4]>,
    pub fixed_point_residual: Option<f64>,
    /// Mean `<γ − A, γ − A>` when A exists.
    pub pseudo_radius_sq: Option<f64>,
    pub fixed_point_criterion: bool,
    pub indeterminate: bool,
    pub verdict: bool,
}

/// Tests whether a null Cartan curve lies on a pseudo-sphere, by constancy of
/// k₂ and by fitting a fixed point A with `<A − γ(t), γ'(t)> = 0`.
pub fn pseudo_spherical_test(c: &dyn Curve, samples: usize, tol: &SphereTolerances) -> Result<SphereReport> {
    if samples < 5 {
        return Err(GeomError::InvalidParams("sphere test needs at least 5 samples".into()));
    }
    let (lo, hi) = c.domain();
    let grid = uniform_grid(lo, hi, samples);
    let rows = map_grid(&grid, |t| -> Result<(f64, Vec4, Vec4)> {
        let k = cartan_curvatures_invariant(c, t, tol.null)?;
        let j = c.jet(t, 1)?;
        Ok((k.k2, j[0], j[1]))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let k2: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let k2_mean = k2.iter().sum::<f64>() / k2.len() as f64;
    let k2_max_deviation = k2.iter().fold(0.0f64, |m, k| m.max((k - k2_mean).abs()));
    let k2_min_abs = k2.iter().fold(f64::INFINITY, |m, k| m.min(k.abs()));
    let k2_criterion = k2_max_deviation <= tol.k2_constancy && k2_min_abs > tol.k2_nonzero;

    // <A, γ'_i> = <γ_i, γ'_i>, written against the lowered tangent ηγ'
    let m = DMatrix::from_fn(rows.len(), 4, |i, j| {
        let v = rows[i].2;
        if j == 0 {
            -v[0]
        } else {
            v[j]
        }
    });
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|(_, g, v)| minkowski_dot(g, v)));
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let indeterminate = !(smax > 0.0) || smin <= 1e-10 * smax;

    let (fixed_point, fixed_point_residual, pseudo_radius_sq) = if indeterminate {
        (None, None, None)
    } else {
        let x = svd
            .solve(&b, 1e-10 * smax)
            .map_err(|e| GeomError::InvalidParams(e.to_string()))?;
        let a = Vec4::new(x[0], x[1], x[2], x[3]);
        let residual = rows
            .iter()
            .fold(0.0f64, |m, (_, g, v)| m.max(minkowski_dot(&(a - *g), v).abs()));
        let radius = rows.iter().map(|(_, g, _)| (*g - a).norm_sq()).sum::<f64>() / rows.len() as f64;
        (Some(a.0), Some(residual), Some(radius))
    };
    let fixed_point_criterion = fixed_point_residual.is_some_and(|r| r <= tol.fixed_point);

    Ok(SphereReport {
        samples,
        k2_mean,
        k2_max_deviation,
        k2_min_abs,
        k2_criterion,
        fixed_point,
        fixed_point_residual,
        pseudo_radius_sq,
        fixed_point_criterion,
        indeterminate,
        verdict: k2_criterion && fixed_point_criterion,
    })
}
