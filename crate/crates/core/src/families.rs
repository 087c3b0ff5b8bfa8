//! Bundled curve definitions with known invariants.
//!
//! | name | curve | known values |
//! |------|-------|--------------|
//! | `spacelike_helix` | `(a₀ sinh s, a₀ cosh s, b₀ cos ds, b₀ sin ds)`, `a₀ = 3/5`, `b₀ = 4/5`, `d² = 17/8` | unit speed on S¹₃, κ_g = 3/2, τ_g = √(17/8), e timelike |
//! | `small_circle` | `(0, 0.6 cos(s/0.6), 0.6 sin(s/0.6), 0.8)` | κ_g = 4/3, τ_g = 0 |
//! | `null_helix` | same shape, `a₀ = 7/25`, `b₀ = 24/25`, `c² = 24/7`, `d² = 7/24` | null, pseudo-arc, k₁ = −527/336, k₂ = ±1 |
//! | `null_helix_unscaled` | `a₀ = 3/5`, `b₀ = 4/5`, `c = 2`, `d = 3/2` | null, `<γ'',γ''> = 9` |
//! | `null_nonspherical` | `(t, sin t, sin²t/2, t/2 − sin 2t/4)` | null Cartan curve off every pseudo-sphere |

use crate::curve::CurveDef;

pub const SPACELIKE_HELIX: &str = include_str!("../curves/spacelike_helix.json");
pub const SMALL_CIRCLE: &str = include_str!("../curves/small_circle.json");
pub const NULL_HELIX: &str = include_str!("../curves/null_helix.json");
pub const NULL_HELIX_UNSCALED: &str = include_str!("../curves/null_helix_unscaled.json");
pub const NULL_NONSPHERICAL: &str = include_str!("../curves/null_nonspherical.json");

/// All bundled definitions as `(name, json)`.
pub const ALL: [(&str, &str); 5] = [
    ("spacelike_helix", SPACELIKE_HELIX),
    ("small_circle", SMALL_CIRCLE),
    ("null_helix", NULL_HELIX),
    ("null_helix_unscaled", NULL_HELIX_UNSCALED),
    ("null_nonspherical", NULL_NONSPHERICAL),
];

pub const SPACELIKE_KAPPA_G: f64 = 1.5;
pub const SMALL_CIRCLE_KAPPA_G: f64 = 4.0 / 3.0;
pub const NULL_HELIX_K1: f64 = -527.0 / 336.0;

fn load(json: &str) -> CurveDef {
    CurveDef::from_json(json).expect("bundled curve definition is valid")
}

pub fn spacelike_helix() -> CurveDef {
    load(SPACELIKE_HELIX)
}

pub fn small_circle() -> CurveDef {
    load(SMALL_CIRCLE)
}

pub fn null_helix() -> CurveDef {
    load(NULL_HELIX)
}

pub fn null_helix_unscaled() -> CurveDef {
    load(NULL_HELIX_UNSCALED)
}

pub fn null_nonspherical() -> CurveDef {
    load(NULL_NONSPHERICAL)
}

/// Looks up a bundled definition by name.
pub fn by_name(name: &str) -> Option<CurveDef> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, json)| load(json))
}

/// τ_g of [`spacelike_helix`], `√(17/8)`.
pub fn spacelike_tau_g() -> f64 {
    (17.0f64 / 8.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::validate_declared;

    #[test]
    fn bundled_curves_load_and_validate() {
        for (name, _) in ALL {
            let c = by_name(name).unwrap();
            let report = validate_declared(&c, 50, 1e-9).unwrap();
            assert!(report.passed, "{name}: {:?}", report.first_failure);
        }
    }
}
