//! Moving frame `{γ, t, n, e}` of a unit-speed spacelike curve on de Sitter
//! 3-space, with geodesic curvature κ_g and geodesic torsion τ_g.
//!
//! Frame equations checked by [`frenet_residuals`]:
//!
//! ```text
//! γ' = t
//! t' = −γ + κ_g n
//! n' = κ_g δ t + τ_g e
//! e' = τ_g n
//! ```
//!
//! with `δ = −sign<n,n>` and `κ_g = ‖t' + γ‖`. With `e = γ ∧ t ∧ n` these
//! equations force `τ_g = (δ/κ_g²)·<γ''', γ ∧ γ' ∧ γ''>`, which is
//! `−(δ/κ_g²)·det(γ, γ', γ'', γ''')`. The determinant form is reported
//! separately as [`SpacelikeApparatus::tau_g_det`].

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{GeomError, Result};
use crate::lorentz::{det4, minkowski_dot, on_de_sitter, pseudo_norm, wedge3, Vec4};

pub const DEFAULT_FRAME_TOL: f64 = 1e-7;
pub const DEFAULT_KAPPA_TOL: f64 = 1e-9;
/// Allowed drift of `‖γ ∧ t ∧ n‖` from 1 before `e` is rejected.
pub const WEDGE_UNIT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameTolerances {
    /// Unit speed, de Sitter membership and frame checks.
    pub frame: f64,
    /// Threshold under which κ_g counts as zero.
    pub kappa: f64,
}

impl Default for FrameTolerances {
    fn default() -> Self {
        FrameTolerances {
            frame: DEFAULT_FRAME_TOL,
            kappa: DEFAULT_KAPPA_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpacelikeApparatus {
    pub s: f64,
    pub gamma: Vec4,
    pub t: Vec4,
    pub n: Vec4,
    pub e: Vec4,
    pub delta: f64,
    pub kappa_g: f64,
    pub tau_g: f64,
    /// `(δ/κ_g²)·det(γ, γ', γ'', γ''')`; equals `−τ_g`.
    pub tau_g_det: f64,
    /// `<e,e>`; −1 when e is timelike.
    pub e_sign: f64,
}

impl SpacelikeApparatus {
    pub fn frame(&self) -> [Vec4; 4] {
        [self.gamma, self.t, self.n, self.e]
    }

    /// Largest deviation of the pseudo-Gram matrix of `(γ,t,n,e)` from
    /// `diag(1, 1, <n,n>, <e,e>)` with unit diagonal magnitudes.
    pub fn gram_residual(&self) -> f64 {
        let f = self.frame();
        let expected = [1.0, 1.0, -self.delta, self.e_sign];
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expected[i] } else { 0.0 };
                worst = worst.max((minkowski_dot(&f[i], &f[j]) - want).abs());
            }
        }
        worst
    }
}

/// Frame quantities together with their first derivatives.
struct FrameWithDerivatives {
    app: SpacelikeApparatus,
    t_prime: Vec4,
    n_prime: Vec4,
    e_prime: Vec4,
}

fn apparatus_with_derivatives(c: &dyn Curve, s: f64, tol: &FrameTolerances) -> Result<FrameWithDerivatives> {
    let j = c.jet(s, 3)?;
    let (gamma, t, acc, jerk) = (j[0], j[1], j[2], j[3]);

    let ds = (gamma.norm_sq() - 1.0).abs();
    if !on_de_sitter(&gamma, tol.frame) {
        return Err(GeomError::OffDeSitter { t: s, residual: ds });
    }
    let speed_sq = t.norm_sq();
    if (speed_sq - 1.0).abs() > tol.frame {
        return Err(GeomError::NotUnitSpeed { s, value: speed_sq });
    }

    let v = acc + gamma; // t' + γ
    let kappa_g = pseudo_norm(&v);
    if v.euclid_norm() <= tol.kappa {
        return Err(GeomError::GeodesicDegeneracy { s, kappa_g });
    }
    if (acc.norm_sq() - 1.0).abs() <= tol.kappa || kappa_g <= tol.kappa {
        return Err(GeomError::StandingAssumption { s });
    }
    let q = v.norm_sq();
    let n = (1.0 / kappa_g) * v;
    let delta = -q.signum();

    let w = wedge3(&gamma, &t, &n);
    let factor = pseudo_norm(&w);
    if (factor - 1.0).abs() > WEDGE_UNIT_TOL {
        return Err(GeomError::FrameNormalization { s, factor });
    }
    let e = (1.0 / factor) * w;

    let tau_g = delta / (kappa_g * kappa_g) * minkowski_dot(&jerk, &wedge3(&gamma, &t, &acc));
    let tau_g_det = delta / (kappa_g * kappa_g) * det4(&gamma, &t, &acc, &jerk);

    // n' = v'/κ − κ' v/κ², κ' = sign(q) <v,v'>/κ
    let v_prime = jerk + t;
    let kappa_prime = q.signum() * minkowski_dot(&v, &v_prime) / kappa_g;
    let n_prime = (1.0 / kappa_g) * v_prime - (kappa_prime / (kappa_g * kappa_g)) * v;
    // γ' ∧ t ∧ n vanishes since γ' = t
    let e_prime = (1.0 / factor) * (wedge3(&gamma, &acc, &n) + wedge3(&gamma, &t, &n_prime));

    Ok(FrameWithDerivatives {
        app: SpacelikeApparatus {
            s,
            gamma,
            t,
            n,
            e,
            delta,
            kappa_g,
            tau_g,
            tau_g_det,
            e_sign: e.norm_sq().signum(),
        },
        t_prime: acc,
        n_prime,
        e_prime,
    })
}

/// The frame `{γ, t, n, e}` and invariants κ_g, τ_g at arclength `s`.
///
/// `n = (t' + γ)/‖t' + γ‖` and `e = γ ∧ t ∧ n`.
pub fn spacelike_apparatus(c: &dyn Curve, s: f64, tol: &FrameTolerances) -> Result<SpacelikeApparatus> {
    Ok(apparatus_with_derivatives(c, s, tol)?.app)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetResiduals {
    /// `‖t' + γ − κ_g n‖`
    pub r1: f64,
    /// `‖n' − κ_g δ t − τ_g e‖`
    pub r2: f64,
    /// `‖e' − τ_g n‖`
    pub r3: f64,
}

impl FrenetResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

/// Euclidean norms of the three nontrivial frame-equation residuals.
pub fn frenet_residuals(c: &dyn Curve, s: f64, tol: &FrameTolerances) -> Result<(SpacelikeApparatus, FrenetResiduals)> {
    let f = apparatus_with_derivatives(c, s, tol)?;
    let a = &f.app;
    let r1 = (f.t_prime + a.gamma - a.kappa_g * a.n).euclid_norm();
    let r2 = (f.n_prime - (a.kappa_g * a.delta) * a.t - a.tau_g * a.e).euclid_norm();
    let r3 = (f.e_prime - a.tau_g * a.n).euclid_norm();
    Ok((f.app, FrenetResiduals { r1, r2, r3 }))
}
