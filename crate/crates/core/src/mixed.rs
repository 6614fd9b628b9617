//! Mixed expected utility of a (fuzzy, random) pair.
//!
//! For a mixed vector `(A, X)`:
//!
//! ```text
//! E(f, u(A, X)) = ½ ∫₀¹ [M(u(a1(γ), X)) + M(u(a2(γ), X))] f(γ) dγ
//! ```
//!
//! The outer γ-integral and the inner probabilistic expectation use
//! independent quadrature settings. A `(Y, B)` vector is evaluated by
//! transposing the utility arguments and reusing the `(A, X)` path.

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, WeightingFunction};
use crate::quadrature::Quadrature;
use crate::stochastic::RandomVariable;

/// Which utility argument carries the fuzzy component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `(A, X)`: fuzzy first argument, random second.
    FuzzyRandom,
    /// `(Y, B)`: random first argument, fuzzy second.
    RandomFuzzy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedVector {
    pub orientation: Orientation,
    pub fuzzy: FuzzyNumber,
    pub random: RandomVariable,
}

/// Quadrature settings for the outer γ-integral and the inner expectation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NestedQuadrature {
    pub gamma: Quadrature,
    pub inner: Quadrature,
}

impl NestedQuadrature {
    pub fn uniform(nodes: usize) -> Result<Self> {
        Ok(Self {
            gamma: Quadrature::new(nodes)?,
            inner: Quadrature::new(nodes)?,
        })
    }
}

impl MixedVector {
    /// `(A, X)`.
    pub fn fuzzy_random(fuzzy: FuzzyNumber, random: RandomVariable) -> Self {
        Self {
            orientation: Orientation::FuzzyRandom,
            fuzzy,
            random,
        }
    }

    /// `(Y, B)`.
    pub fn random_fuzzy(random: RandomVariable, fuzzy: FuzzyNumber) -> Self {
        Self {
            orientation: Orientation::RandomFuzzy,
            fuzzy,
            random,
        }
    }

    /// The same pair seen from the other orientation.
    pub fn transposed(&self) -> Self {
        Self {
            orientation: match self.orientation {
                Orientation::FuzzyRandom => Orientation::RandomFuzzy,
                Orientation::RandomFuzzy => Orientation::FuzzyRandom,
            },
            fuzzy: self.fuzzy.clone(),
            random: self.random.clone(),
        }
    }

    /// Mixed expectation of `g(first, second)`, where the argument order
    /// follows the orientation.
    pub fn expect_with<G>(&self, f: &WeightingFunction, quad: &NestedQuadrature, g: G) -> Result<f64>
    where
        G: FnMut(f64, f64) -> Result<f64>,
    {
        expect_pair(self.orientation, f, &self.fuzzy, &self.random, quad, g)
    }
}

/// Mixed expectation over borrowed components; `g` takes its arguments in
/// the order given by `orientation`.
pub fn expect_pair<G>(
    orientation: Orientation,
    f: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    random: &RandomVariable,
    quad: &NestedQuadrature,
    mut g: G,
) -> Result<f64>
where
    G: FnMut(f64, f64) -> Result<f64>,
{
    match orientation {
        Orientation::FuzzyRandom => fuzzy_random_core(f, fuzzy, random, quad, g),
        Orientation::RandomFuzzy => fuzzy_random_core(f, fuzzy, random, quad, |b, y| g(y, b)),
    }
}

fn fuzzy_random_core<G>(
    f: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    random: &RandomVariable,
    quad: &NestedQuadrature,
    mut g: G,
) -> Result<f64>
where
    G: FnMut(f64, f64) -> Result<f64>,
{
    fuzzy.expect_with(f, &quad.gamma, |a| {
        random.expect_with(&quad.inner, |x| g(a, x))
    })
}

/// `E(f, u(A, X))` for a mixed vector in `(A, X)` orientation.
pub fn mixed_expected_utility<U>(
    f: &WeightingFunction,
    u: U,
    v: &MixedVector,
    quad: &NestedQuadrature,
) -> Result<f64>
where
    U: Fn(f64, f64) -> f64,
{
    if v.orientation != Orientation::FuzzyRandom {
        return Err(Error::config(
            "mixed_expected_utility expects an (A, X) vector; use mixed_expected_utility_dual",
        ));
    }
    v.expect_with(f, quad, |a, x| Ok(u(a, x)))
}

/// `E(f, u(Y, B))` for a mixed vector in `(Y, B)` orientation, computed as
/// `E(f, ũ(B, Y))` with `ũ(b, y) = u(y, b)`.
pub fn mixed_expected_utility_dual<U>(
    f: &WeightingFunction,
    u: U,
    v: &MixedVector,
    quad: &NestedQuadrature,
) -> Result<f64>
where
    U: Fn(f64, f64) -> f64,
{
    if v.orientation != Orientation::RandomFuzzy {
        return Err(Error::config(
            "mixed_expected_utility_dual expects a (Y, B) vector",
        ));
    }
    mixed_expected_utility(f, |b, y| u(y, b), &v.transposed(), quad)
}
