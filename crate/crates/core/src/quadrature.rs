//! Composite 5-point Gauss–Legendre quadrature.

use std::ops::{AddAssign, Mul};

/// Nodes and weights of the 5-point rule on [−1, 1].
pub fn gauss_legendre5() -> ([f64; 5], [f64; 5]) {
    let r = 2.0 * (10.0f64 / 7.0).sqrt();
    let inner = (5.0 - r).sqrt() / 3.0;
    let outer = (5.0 + r).sqrt() / 3.0;
    let s70 = 70.0f64.sqrt();
    let w_inner = (322.0 + 13.0 * s70) / 900.0;
    let w_outer = (322.0 - 13.0 * s70) / 900.0;
    (
        [-outer, -inner, 0.0, inner, outer],
        [w_outer, w_inner, 128.0 / 225.0, w_inner, w_outer],
    )
}

/// ∫ₐᵇ f by one application of the 5-point rule.
pub fn integrate_panel<T, E, F>(f: &F, a: f64, b: f64) -> Result<T, E>
where
    T: Copy + Default + AddAssign + Mul<f64, Output = T>,
    F: Fn(f64) -> Result<T, E>,
{
    let (nodes, weights) = gauss_legendre5();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = T::default();
    for (x, w) in nodes.iter().zip(weights) {
        acc += f(mid + half * x)? * (w * half);
    }
    Ok(acc)
}

/// Running integral of `f` at every knot, starting from zero at `knots[0]`.
pub fn cumulative<T, E, F>(f: &F, knots: &[f64]) -> Result<Vec<T>, E>
where
    T: Copy + Default + AddAssign + Mul<f64, Output = T>,
    F: Fn(f64) -> Result<T, E>,
{
    let mut out = Vec::with_capacity(knots.len());
    let mut acc = T::default();
    out.push(acc);
    for w in knots.windows(2) {
        acc += integrate_panel(f, w[0], w[1])?;
        out.push(acc);
    }
    Ok(out)
}

/// ∫ₐᵇ f on `panels` equal panels.
pub fn composite<T, E, F>(f: &F, a: f64, b: f64, panels: usize) -> Result<T, E>
where
    T: Copy + Default + AddAssign + Mul<f64, Output = T>,
    F: Fn(f64) -> Result<T, E>,
{
    let knots = crate::parallel::uniform_grid(a, b, panels + 1);
    Ok(*cumulative(f, &knots)?.last().expect("at least one knot"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn rule_is_exact_for_degree_nine() {
        let f = |x: f64| -> Result<f64, Infallible> { Ok(x.powi(9) + 3.0 * x.powi(8) - x) };
        let got = integrate_panel(&f, -1.0, 2.0).unwrap();
        let antider = |x: f64| x.powi(10) / 10.0 + x.powi(9) / 3.0 - x * x / 2.0;
        assert!((got - (antider(2.0) - antider(-1.0))).abs() < 1e-12);
    }

    #[test]
    fn weights_sum_to_two() {
        let (_, w) = gauss_legendre5();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn composite_converges() {
        let f = |x: f64| -> Result<f64, Infallible> { Ok(x.cos()) };
        let got = composite(&f, 0.0, 3.0, 8).unwrap();
        assert!((got - 3f64.sin()).abs() < 1e-14);
    }
}
