//! Bounded random variables as expectation operators.

use crate::error::{Error, Result};
use crate::fuzzy::Interval;
use crate::quadrature::Quadrature;

#[derive(Debug, Clone, PartialEq)]
pub enum RandomVariable {
    /// Uniform on `[c, d]`, `c < d`.
    Uniform { c: f64, d: f64 },
    /// Finite support with probabilities summing to one.
    Discrete { points: Vec<f64>, probs: Vec<f64> },
    Degenerate(f64),
}

impl RandomVariable {
    const PROB_SUM_TOLERANCE: f64 = 1e-12;

    pub fn uniform(c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && d.is_finite() && c < d) {
            return Err(Error::config(format!(
                "uniform distribution needs finite c < d, got [{c}, {d}]"
            )));
        }
        Ok(RandomVariable::Uniform { c, d })
    }

    pub fn discrete(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(Error::config(
                "discrete distribution needs equal-length, non-empty points and probabilities",
            ));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::config("discrete support points must be finite"));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::config("probabilities must be finite and non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::PROB_SUM_TOLERANCE {
            return Err(Error::config(format!(
                "probabilities must sum to 1, sum to {total}"
            )));
        }
        Ok(RandomVariable::Discrete { points, probs })
    }

    pub fn degenerate(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::config("degenerate value must be finite"));
        }
        Ok(RandomVariable::Degenerate(value))
    }

    pub fn mean(&self) -> f64 {
        match self {
            RandomVariable::Uniform { c, d } => 0.5 * (c + d),
            RandomVariable::Discrete { points, probs } => {
                points.iter().zip(probs).map(|(x, p)| x * p).sum()
            }
            RandomVariable::Degenerate(v) => *v,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            RandomVariable::Uniform { c, d } => (d - c) * (d - c) / 12.0,
            RandomVariable::Discrete { points, probs } => {
                let m = self.mean();
                points
                    .iter()
                    .zip(probs)
                    .map(|(x, p)| p * (x - m) * (x - m))
                    .sum::<f64>()
                    .max(0.0)
            }
            RandomVariable::Degenerate(_) => 0.0,
        }
    }

    pub fn support(&self) -> Interval {
        match self {
            RandomVariable::Uniform { c, d } => Interval::new(*c, *d),
            RandomVariable::Discrete { points, .. } => Interval::new(
                points.iter().copied().fold(f64::INFINITY, f64::min),
                points.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
            RandomVariable::Degenerate(v) => Interval::new(*v, *v),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, RandomVariable::Degenerate(_))
    }

    pub fn shifted(&self, shift: f64) -> RandomVariable {
        match self {
            RandomVariable::Uniform { c, d } => RandomVariable::Uniform {
                c: c + shift,
                d: d + shift,
            },
            RandomVariable::Discrete { points, probs } => RandomVariable::Discrete {
                points: points.iter().map(|x| x + shift).collect(),
                probs: probs.clone(),
            },
            RandomVariable::Degenerate(v) => RandomVariable::Degenerate(v + shift),
        }
    }

    /// `center + ε (X - center)` with ε ≥ 0. ε = 0 collapses to a point.
    pub fn spread_scaled(&self, center: f64, eps: f64) -> RandomVariable {
        let map = |x: f64| center + eps * (x - center);
        match self {
            RandomVariable::Uniform { c, d } if eps > 0.0 => RandomVariable::Uniform {
                c: map(*c),
                d: map(*d),
            },
            RandomVariable::Uniform { .. } => RandomVariable::Degenerate(map(self.mean())),
            RandomVariable::Discrete { points, probs } => RandomVariable::Discrete {
                points: points.iter().map(|x| map(*x)).collect(),
                probs: probs.clone(),
            },
            RandomVariable::Degenerate(v) => RandomVariable::Degenerate(map(*v)),
        }
    }

    /// `M(g(X))` for a fallible integrand.
    pub fn expect_with<G>(&self, quad: &Quadrature, mut g: G) -> Result<f64>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        match self {
            RandomVariable::Uniform { c, d } => {
                let width = d - c;
                let est = quad.estimate(*c, *d, &mut g)?;
                let est = crate::quadrature::Estimate {
                    value: est.value / width,
                    error: est.error / width,
                };
                quad.check(est, "probabilistic expectation")
            }
            RandomVariable::Discrete { points, probs } => {
                let mut acc = 0.0;
                for (x, p) in points.iter().zip(probs) {
                    if *p != 0.0 {
                        acc += p * g(*x)?;
                    }
                }
                Ok(acc)
            }
            RandomVariable::Degenerate(v) => g(*v),
        }
    }
}

/// `M(X)`.
pub fn prob_mean(x: &RandomVariable) -> f64 {
    x.mean()
}

/// `Var(X)`.
pub fn prob_variance(x: &RandomVariable) -> f64 {
    x.variance()
}

/// `M(g(X))`.
pub fn prob_expect<G>(g: G, x: &RandomVariable, quad: &Quadrature) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    x.expect_with(quad, |v| Ok(g(v)))
}
