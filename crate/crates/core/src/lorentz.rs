//! Linear algebra of Minkowski space R⁴₁ with signature (−,+,+,+).

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Default causal classification tolerance.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-9;

/// A point or vector of R⁴₁; component 0 is the timelike coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    /// The canonical basis vector e_{i+1}.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        minkowski_dot(self, other)
    }

    /// The pseudo-norm `sqrt(|<x,x>|)`.
    pub fn norm(&self) -> f64 {
        pseudo_norm(self)
    }

    /// `<x,x>`, signed.
    pub fn norm_sq(&self) -> f64 {
        minkowski_dot(self, self)
    }

    /// Plain Euclidean length, used for scale and residual reporting.
    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl SubAssign for Vec4 {
    fn sub_assign(&mut self, o: Vec4) {
        *self = *self - o;
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|c| -c))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        Vec4(v.0.map(|c| self * c))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        s * self
    }
}

/// Causal character of a vector (or of a curve through its tangent).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    #[serde(alias = "null")]
    Lightlike,
}

impl CausalCharacter {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spacelike" => Some(Self::Spacelike),
            "timelike" => Some(Self::Timelike),
            "null" | "lightlike" => Some(Self::Lightlike),
            _ => None,
        }
    }
}

/// `<x,y> = −x1·y1 + x2·y2 + x3·y3 + x4·y4`.
pub fn minkowski_dot(x: &Vec4, y: &Vec4) -> f64 {
    -x.0[0] * y.0[0] + x.0[1] * y.0[1] + x.0[2] * y.0[2] + x.0[3] * y.0[3]
}

pub fn pseudo_norm(x: &Vec4) -> f64 {
    minkowski_dot(x, x).abs().sqrt()
}

/// Classifies a nonzero vector by the sign of `<x,x>` with a symmetric band
/// of width `tol` around zero counted as lightlike.
pub fn causal_character(x: &Vec4, tol: f64) -> Result<CausalCharacter> {
    if x.0.iter().all(|&c| c == 0.0) {
        return Err(GeomError::Degenerate("zero vector has no causal character"));
    }
    Ok(classify_value(minkowski_dot(x, x), tol))
}

/// Same as [`causal_character`] but with the band scaled by `max(1, |x|²)`
/// (Euclidean), so large vectors are not misclassified by rounding.
pub fn causal_character_scaled(x: &Vec4, tol: f64) -> Result<CausalCharacter> {
    let scale = x.euclid_norm().powi(2).max(1.0);
    causal_character(x, tol * scale)
}

fn classify_value(q: f64, tol: f64) -> CausalCharacter {
    if q > tol {
        CausalCharacter::Spacelike
    } else if q < -tol {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Lightlike
    }
}

/// Product and sum with operands in a fixed order, so the result depends only
/// on the multiset of inputs.
fn ordered_product(mut f: [f64; 3]) -> f64 {
    f.sort_by(f64::total_cmp);
    f[0] * f[1] * f[2]
}

fn ordered_sum(mut f: [f64; 3]) -> f64 {
    f.sort_by(f64::total_cmp);
    f[0] + f[1] + f[2]
}

/// 3×3 determinant as (even permutations) − (odd permutations). Swapping two
/// rows exchanges the two groups, so the result negates exactly.
fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let even = ordered_sum([
        ordered_product([a[0], b[1], c[2]]),
        ordered_product([a[1], b[2], c[0]]),
        ordered_product([a[2], b[0], c[1]]),
    ]);
    let odd = ordered_sum([
        ordered_product([a[0], b[2], c[1]]),
        ordered_product([a[1], b[0], c[2]]),
        ordered_product([a[2], b[1], c[0]]),
    ]);
    even - odd
}

fn drop_col(v: &Vec4, col: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    let mut k = 0;
    for (i, &c) in v.0.iter().enumerate() {
        if i != col {
            out[k] = c;
            k += 1;
        }
    }
    out
}

/// Triple wedge product: the formal determinant with first row
/// `(−e₁, e₂, e₃, e₄)` and rows x, y, z below it.
///
/// Satisfies `<a, wedge3(x,y,z)> = det(a,x,y,z)` for every `a`.
pub fn wedge3(x: &Vec4, y: &Vec4, z: &Vec4) -> Vec4 {
    let minor = |col| det3(drop_col(x, col), drop_col(y, col), drop_col(z, col));
    // cofactor signs (+,−,+,−) times the first-row entries (−1,1,1,1)
    Vec4([-minor(0), -minor(1), minor(2), -minor(3)])
}

/// Determinant of the 4×4 matrix with rows a, b, c, d, by Laplace expansion
/// along the first row.
pub fn det4(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> f64 {
    (0..4)
        .map(|col| {
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            sign * a.0[col] * det3(drop_col(b, col), drop_col(c, col), drop_col(d, col))
        })
        .sum()
}

/// The hyperplane `HP(v, c) = { x : <x, v> = c }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub pseudo_normal: Vec4,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(pseudo_normal: Vec4, offset: f64) -> Result<Self> {
        if pseudo_normal.0.iter().all(|&c| c == 0.0) {
            return Err(GeomError::Degenerate("hyperplane pseudo normal is zero"));
        }
        Ok(Hyperplane {
            pseudo_normal,
            offset,
        })
    }

    pub fn contains(&self, x: &Vec4, tol: f64) -> bool {
        (minkowski_dot(x, &self.pseudo_normal) - self.offset).abs() <= tol
    }
}

/// A hyperplane is spacelike, timelike or lightlike when its pseudo normal is
/// timelike, spacelike or lightlike respectively.
pub fn hyperplane_classify(h: &Hyperplane, tol: f64) -> Result<CausalCharacter> {
    Ok(match causal_character(&h.pseudo_normal, tol)? {
        CausalCharacter::Timelike => CausalCharacter::Spacelike,
        CausalCharacter::Spacelike => CausalCharacter::Timelike,
        CausalCharacter::Lightlike => CausalCharacter::Lightlike,
    })
}

pub fn on_de_sitter(x: &Vec4, tol: f64) -> bool {
    (minkowski_dot(x, x) - 1.0).abs() <= tol
}

/// Output of [`signed_gram_schmidt`]: unit vectors plus the sign of each
/// vector's square.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedFrame {
    pub vectors: Vec<Vec4>,
    pub signs: Vec<f64>,
}

/// Gram–Schmidt with respect to the Lorentzian product. Each output vector is
/// normalized by its pseudo-norm and the sign of its square is recorded
/// separately.
///
/// A vector whose orthogonalized remainder is (numerically) zero is a rank
/// error; one whose remainder is nonzero but lightlike is a null degeneracy.
/// Both thresholds are relative to the Euclidean size of the input vector.
pub fn signed_gram_schmidt(vs: &[Vec4], tol: f64) -> Result<SignedFrame> {
    let mut vectors: Vec<Vec4> = Vec::with_capacity(vs.len());
    let mut signs: Vec<f64> = Vec::with_capacity(vs.len());
    for (index, v) in vs.iter().enumerate() {
        if !v.is_finite() {
            return Err(GeomError::Degenerate("non-finite vector"));
        }
        let mut u = *v;
        for (f, s) in vectors.iter().zip(&signs) {
            u -= (s * minkowski_dot(&u, f)) * *f;
        }
        let scale = v.euclid_norm().max(f64::MIN_POSITIVE);
        let size = u.euclid_norm();
        if size <= tol * scale {
            return Err(GeomError::RankDeficient { index });
        }
        let q = minkowski_dot(&u, &u);
        if q.abs() <= tol * size * size {
            return Err(GeomError::NullDegeneracy { index });
        }
        vectors.push((1.0 / q.abs().sqrt()) * u);
        signs.push(q.signum());
    }
    Ok(SignedFrame { vectors, signs })
}

/// A linear isometry of R⁴₁, stored as the images of the canonical basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzTransform {
    columns: [Vec4; 4],
}

impl LorentzTransform {
    pub fn identity() -> Self {
        LorentzTransform {
            columns: std::array::from_fn(Vec4::basis),
        }
    }

    /// Builds a proper Lorentz transformation from four independent seed
    /// vectors, the first of which must be timelike. The seeds are
    /// orthonormalized and the last column flipped if needed so that the
    /// determinant is +1.
    pub fn from_seed(seed: [Vec4; 4], tol: f64) -> Result<Self> {
        let frame = signed_gram_schmidt(&seed, tol)?;
        if frame.signs != [-1.0, 1.0, 1.0, 1.0] {
            return Err(GeomError::InvalidParams(
                "Lorentz seed must start with a timelike vector".into(),
            ));
        }
        let mut columns = [frame.vectors[0], frame.vectors[1], frame.vectors[2], frame.vectors[3]];
        if det4(&columns[0], &columns[1], &columns[2], &columns[3]) < 0.0 {
            columns[3] = -columns[3];
        }
        Ok(LorentzTransform { columns })
    }

    pub fn apply(&self, x: &Vec4) -> Vec4 {
        let mut out = Vec4::ZERO;
        for (c, col) in x.0.iter().zip(&self.columns) {
            out += *c * *col;
        }
        out
    }

    pub fn determinant(&self) -> f64 {
        let c = &self.columns;
        det4(&c[0], &c[1], &c[2], &c[3])
    }
}
