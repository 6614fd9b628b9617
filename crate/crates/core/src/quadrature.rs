//! Gauss–Legendre quadrature with a node-halving error estimate.
//!
//! Every γ-integral and every expectation over a uniform risk goes through
//! [`Quadrature`]. The primary value uses the configured node count; the
//! error estimate is the distance to the same integral computed with half
//! as many nodes, which overestimates the error of the primary rule for the
//! smooth integrands handled here.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Fixed-order Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// # Panics
    /// If `n == 0`.
    pub fn new(n: usize) -> Self {
        let n = NonZeroUsize::new(n).expect("Gauss-Legendre rule needs at least one node");
        let (nodes, weights) = gauss_quad::GaussLegendre::new(n).into_node_weight_pairs().iter().copied().unzip();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn try_integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}


/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Configured quadrature: node count, convergence tolerance and cached rules.
#[derive(Debug, Clone)]
pub struct Quadrature {
    fine: Arc<GaussLegendre>,
    coarse: Arc<GaussLegendre>,
    tolerance: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(Self::DEFAULT_NODES).expect("default node count is valid")
    }
}

impl PartialEq for Quadrature {
    fn eq(&self, other: &Self) -> bool {
        self.nodes() == other.nodes() && self.tolerance == other.tolerance
    }
}

impl Quadrature {
    pub const DEFAULT_NODES: usize = 64;
    /// Relative tolerance on the error estimate (absolute below magnitude 1).
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::config(format!(
                "quadrature needs at least 2 nodes, got {nodes}"
            )));
        }
        Ok(Self {
            fine: Arc::new(GaussLegendre::new(nodes)),
            coarse: Arc::new(GaussLegendre::new(nodes / 2)),
            tolerance: Self::DEFAULT_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::config(format!(
                "quadrature tolerance must be positive, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn nodes(&self) -> usize {
        self.fine.len()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Integrates over [a, b] with both rules, without the convergence check.
    pub fn estimate<F>(&self, a: f64, b: f64, mut f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let value = self.fine.try_integrate(a, b, &mut f)?;
        let coarse = self.coarse.try_integrate(a, b, &mut f)?;
        Ok(Estimate {
            value,
            error: (value - coarse).abs(),
        })
    }

    /// Composite estimate over consecutive panels `[breaks[i], breaks[i+1]]`.
    ///
    /// The configured node budget is split across panels, with at least
    /// four nodes per panel.
    pub fn estimate_panels<F>(&self, breaks: &[f64], f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let panels = breaks.len().saturating_sub(1);
        if panels <= 1 {
            let (a, b) = match breaks {
                [a, b] => (*a, *b),
                _ => return Err(Error::config("composite quadrature needs two breakpoints")),
            };
            return self.estimate(a, b, f);
        }
        self.estimate_panels_with_order(breaks, self.nodes().div_ceil(panels).max(4), f)
    }

    /// Composite estimate with an `order`-point rule on every panel, checked
    /// against the `order / 2`-point rule.
    pub fn estimate_panels_with_order<F>(&self, breaks: &[f64], order: usize, mut f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if breaks.len() < 2 || order < 2 {
            return Err(Error::config("composite quadrature needs two breakpoints and two nodes"));
        }
        let fine = GaussLegendre::new(order);
        let coarse = GaussLegendre::new(order / 2);
        let mut value = 0.0;
        let mut coarse_value = 0.0;
        for w in breaks.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            value += fine.try_integrate(w[0], w[1], &mut f)?;
            coarse_value += coarse.try_integrate(w[0], w[1], &mut f)?;
        }
        Ok(Estimate {
            value,
            error: (value - coarse_value).abs(),
        })
    }

    /// `∫₀^b γⁿ h(γ) dγ` with Gauss–Jacobi rules that carry the `γⁿ` factor
    /// exactly, so only `h` needs to be smooth at 0.
    pub fn estimate_power_weighted<F>(&self, b: f64, exponent: f64, mut h: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let fine_order = self.nodes().next_multiple_of(2);
        let coarse_order = (fine_order / 2).next_multiple_of(2);
        let scale = b.powf(exponent + 1.0);
        let mut run = |order| -> Result<f64> {
            let mut acc = 0.0;
            for &(g, w) in jacobi_unit_rule(exponent, order)?.iter() {
                acc += w * h(b * g)?;
            }
            Ok(acc * scale)
        };
        let value = run(fine_order)?;
        let coarse = run(coarse_order)?;
        Ok(Estimate {
            value,
            error: (value - coarse).abs(),
        })
    }

    /// Rejects an estimate whose error exceeds the tolerance.
    pub fn check(&self, est: Estimate, context: &str) -> Result<f64> {
        let allowed = self.tolerance * est.value.abs().max(1.0);
        if est.error.is_finite() && est.error <= allowed {
            Ok(est.value)
        } else {
            Err(Error::Quadrature {
                context: context.to_string(),
                estimate: est.error,
                tolerance: allowed,
            })
        }
    }

    pub fn integrate<F>(&self, a: f64, b: f64, context: &str, f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let est = self.estimate(a, b, f)?;
        self.check(est, context)
    }
}

type UnitRule = Arc<[(f64, f64)]>;

/// Nodes and weights on [0, 1] for the weight `γⁿ`, cached per exponent and
/// order. Orders are even: the generator pins the middle node of odd rules
/// to the centre, which is only right for symmetric weights.
fn jacobi_unit_rule(exponent: f64, order: usize) -> Result<UnitRule> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), UnitRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (exponent.to_bits(), order);
    if let Some(rule) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(rule.clone());
    }
    let beta = gauss_quad::FiniteAboveNegOneF64::new(exponent)
        .ok_or_else(|| Error::config(format!("Jacobi exponent must be finite and > -1, got {exponent}")))?;
    let alpha = gauss_quad::FiniteAboveNegOneF64::new(0.0).expect("0 is above -1");
    let order = NonZeroUsize::new(order).ok_or_else(|| Error::config("Jacobi rule needs at least one node"))?;
    let norm = 2f64.powf(exponent + 1.0);
    let rule: UnitRule = gauss_quad::GaussJacobi::new(order, alpha, beta)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (1.0 + x), w / norm))
        .collect();
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, rule.clone());
    Ok(rule)
}
