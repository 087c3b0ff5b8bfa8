use std::sync::Arc;

use crate::curve::{check_domain, check_order, Curve, Jet, MAX_JET_ORDER};
use crate::error::{GeomError, Result};
use crate::interp::LocalPolynomial;
use crate::lorentz::Vec4;

pub const MIN_SAMPLES: usize = 16;
pub const DEFAULT_DEGREE: usize = 3;

/// A densely sampled curve.
///
/// Jets come from an exact derivative source when one is attached (the
/// reparametrized or constructed curve the samples were taken from) and from
/// a local polynomial interpolant of the samples otherwise.
#[derive(Clone)]
pub struct NumericCurve {
    params: Vec<f64>,
    points: Vec<Vec4>,
    interp: LocalPolynomial,
    exact: Option<Arc<dyn Curve>>,
}

impl std::fmt::Debug for NumericCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumericCurve")
            .field("samples", &self.params.len())
            .field("degree", &self.interp.degree())
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl NumericCurve {
    pub fn from_samples(params: Vec<f64>, points: Vec<Vec4>, degree: usize) -> Result<Self> {
        if params.len() != points.len() {
            return Err(GeomError::InvalidCurve("parameter and point counts differ".into()));
        }
        if params.len() < MIN_SAMPLES {
            return Err(GeomError::InvalidCurve(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                params.len()
            )));
        }
        if degree == 0 || degree >= params.len() {
            return Err(GeomError::InvalidParams(format!("interpolant degree {degree} out of range")));
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) || params.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::InvalidCurve("sample grid must be finite and strictly increasing".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::InvalidCurve("non-finite sample point".into()));
        }
        let interp = LocalPolynomial::new(params.clone(), points.clone(), degree);
        Ok(NumericCurve {
            params,
            points,
            interp,
            exact: None,
        })
    }

    /// Tabulation of `source` whose jets are delegated to the source.
    pub fn with_exact(params: Vec<f64>, points: Vec<Vec4>, source: Arc<dyn Curve>) -> Result<Self> {
        let mut c = NumericCurve::from_samples(params, points, DEFAULT_DEGREE)?;
        c.exact = Some(source);
        Ok(c)
    }

    /// Tabulates `source` on the given grid.
    pub fn tabulate(source: Arc<dyn Curve>, params: Vec<f64>) -> Result<Self> {
        let points = params
            .iter()
            .map(|&t| source.position(t))
            .collect::<Result<Vec<_>>>()?;
        NumericCurve::with_exact(params, points, source)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec4] {
        &self.points
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_source(&self) -> Option<&Arc<dyn Curve>> {
        self.exact.as_ref()
    }

    /// Jet of the sample interpolant, regardless of any exact source.
    pub fn interpolant_jet(&self, t: f64, order: usize) -> Result<Jet> {
        check_order(order, self.interp.degree().min(MAX_JET_ORDER))?;
        let t = check_domain(Curve::domain(self), t)?;
        Ok(Jet::new(&self.interp.eval(t, order)))
    }
}

impl Curve for NumericCurve {
    fn domain(&self) -> (f64, f64) {
        (self.params[0], *self.params.last().expect("non-empty grid"))
    }

    fn max_order(&self) -> usize {
        match &self.exact {
            Some(src) => src.max_order(),
            None => self.interp.degree().min(MAX_JET_ORDER),
        }
    }

    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        match &self.exact {
            Some(src) => src.jet(t, order),
            None => self.interpolant_jet(t, order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        let pts = vec![Vec4::ZERO; 20];
        let grid: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(NumericCurve::from_samples(grid.clone(), pts.clone(), 3).is_ok());
        assert!(NumericCurve::from_samples(grid[..10].to_vec(), pts[..10].to_vec(), 3).is_err());
        let mut bad = grid.clone();
        bad[5] = bad[4];
        assert!(NumericCurve::from_samples(bad, pts.clone(), 3).is_err());
        assert!(NumericCurve::from_samples(grid, pts, 0).is_err());
    }

    #[test]
    fn reproduces_samples_at_knots() {
        let grid: Vec<f64> = (0..32).map(|i| i as f64 * 0.1).collect();
        let pts: Vec<Vec4> = grid.iter().map(|&t| Vec4::new(t.sinh(), t.cosh(), t.sin(), 0.0)).collect();
        let c = NumericCurve::from_samples(grid.clone(), pts.clone(), 5).unwrap();
        for (t, p) in grid.iter().zip(&pts) {
            assert_eq!(c.jet(*t, 0).unwrap()[0], *p);
        }
    }
}
