//! Interpolants over tabulated samples.

use crate::lorentz::Vec4;

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing and `ys` monotone.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2, "need at least two knots");
        let n = xs.len();
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (a, b) = (secants[i - 1], secants[i]);
            slopes[i] = if a * b <= 0.0 {
                0.0
            } else {
                // weighted harmonic mean keeps each segment monotone
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                (w1 + w2) / (w1 / a + w2 / b)
            };
        }
        MonotoneCubic { xs, ys, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

/// Weights `w[m][j]` such that `Σ_j w[m][j]·f(xs[j])` is the m-th derivative
/// at `z` of the polynomial interpolating f on `xs` (Fornberg's recurrence).
pub fn fornberg_weights(z: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Piecewise polynomial interpolant of configurable degree: each evaluation
/// uses the `degree + 1` knots nearest the query point.
#[derive(Clone, Debug)]
pub struct LocalPolynomial {
    xs: Vec<f64>,
    ys: Vec<Vec4>,
    degree: usize,
}

impl LocalPolynomial {
    pub fn new(xs: Vec<f64>, ys: Vec<Vec4>, degree: usize) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() > degree, "need more knots than the degree");
        LocalPolynomial { xs, ys, degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn stencil(&self, x: f64) -> usize {
        let n = self.xs.len();
        let m = self.degree + 1;
        let p = self.xs.partition_point(|&k| k < x);
        // centre the window on the interval containing x
        let start = p.saturating_sub(m / 2);
        start.min(n - m)
    }

    /// Value and derivatives up to `order` of the local interpolant at `x`.
    pub fn eval(&self, x: f64, order: usize) -> Vec<Vec4> {
        if let Ok(i) = self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            if order == 0 {
                return vec![self.ys[i]];
            }
        }
        let start = self.stencil(x);
        let end = start + self.degree + 1;
        let w = fornberg_weights(x, &self.xs[start..end], order);
        let mut out: Vec<Vec4> = w
            .iter()
            .map(|row| {
                let mut acc = Vec4::ZERO;
                for (wj, y) in row.iter().zip(&self.ys[start..end]) {
                    acc += *wj * *y;
                }
                acc
            })
            .collect();
        if let Ok(i) = self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            out[0] = self.ys[i];
        }
        out
    }
}
