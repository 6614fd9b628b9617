//! Fuzzy numbers described by their γ-level sets, weighting functions, and
//! the f-weighted possibilistic indicators built on them.
//!
//! A fuzzy number is stored through its level-set endpoint functions
//! `a1(γ) ≤ a2(γ)`; the possibilistic expected utility of a scalar `u` is
//!
//! ```text
//! E(f, u(A)) = ½ ∫₀¹ [u(a1(γ)) + u(a2(γ))] f(γ) dγ
//! ```
//!
//! with mean and variance as the identity and centred-square special cases.

use crate::error::{Error, Result};
use crate::quadrature::{Estimate, Quadrature};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Monotone density on [0, 1] with unit mass.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightingFunction {
    /// `f(γ) = (n + 1) γⁿ`, `n ≥ 0`.
    Power { exponent: f64 },
    /// Piecewise-linear density through `(gammas[i], densities[i])`.
    Tabulated {
        gammas: Vec<f64>,
        densities: Vec<f64>,
    },
}

impl Default for WeightingFunction {
    /// `f(γ) = 2γ`.
    fn default() -> Self {
        WeightingFunction::Power { exponent: 1.0 }
    }
}

impl WeightingFunction {
    const MASS_TOLERANCE: f64 = 1e-10;

    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(Error::config(format!(
                "weighting exponent must be finite and >= 0, got {exponent}"
            )));
        }
        Ok(WeightingFunction::Power { exponent })
    }

    pub fn tabulated(gammas: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if gammas.len() < 2 || gammas.len() != densities.len() {
            return Err(Error::config(
                "tabulated weighting needs matching gamma/density arrays of length >= 2",
            ));
        }
        validate_gamma_grid(&gammas)?;
        if densities.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::config("weighting density must be finite and non-negative"));
        }
        if densities.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::config("weighting density must be non-decreasing"));
        }
        let w = WeightingFunction::Tabulated { gammas, densities };
        let mass = w.total_mass();
        if (mass - 1.0).abs() > Self::MASS_TOLERANCE {
            return Err(Error::config(format!(
                "weighting density must integrate to 1, integrates to {mass}"
            )));
        }
        Ok(w)
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        match self {
            WeightingFunction::Power { exponent } => {
                if *exponent == 0.0 {
                    1.0
                } else {
                    (exponent + 1.0) * gamma.powf(*exponent)
                }
            }
            WeightingFunction::Tabulated { gammas, densities } => {
                interpolate(gammas, densities, gamma)
            }
        }
    }

    /// ∫₀¹ f. Exactly 1 for power weights; trapezoid-exact for tables.
    pub fn total_mass(&self) -> f64 {
        match self {
            WeightingFunction::Power { .. } => 1.0,
            WeightingFunction::Tabulated { gammas, densities } => gammas
                .windows(2)
                .zip(densities.windows(2))
                .map(|(g, d)| 0.5 * (g[1] - g[0]) * (d[0] + d[1]))
                .sum(),
        }
    }

    /// The exponent of a power weight that is not smooth at γ = 0.
    fn singular_exponent(&self) -> Option<f64> {
        match *self {
            WeightingFunction::Power { exponent } if exponent.fract() != 0.0 => Some(exponent),
            _ => None,
        }
    }

    fn breakpoints(&self) -> &[f64] {
        match self {
            WeightingFunction::Power { .. } => &[],
            WeightingFunction::Tabulated { gammas, .. } => gammas,
        }
    }

    /// (∫ (1-γ) f, ∫ (1-γ)² f) for power weights.
    fn power_moments(&self) -> Option<(f64, f64)> {
        match self {
            WeightingFunction::Power { exponent: n } => {
                Some((1.0 / (n + 2.0), 2.0 / ((n + 2.0) * (n + 3.0))))
            }
            WeightingFunction::Tabulated { .. } => None,
        }
    }
}

fn validate_gamma_grid(gammas: &[f64]) -> Result<()> {
    let first = gammas.first().copied().unwrap_or(f64::NAN);
    let last = gammas.last().copied().unwrap_or(f64::NAN);
    if first != 0.0 || last != 1.0 {
        return Err(Error::config("gamma grid must start at 0 and end at 1"));
    }
    if gammas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config("gamma grid must be strictly increasing"));
    }
    Ok(())
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let idx = xs.partition_point(|&g| g <= x);
    if idx == 0 {
        return ys[0];
    }
    if idx >= xs.len() {
        return ys[ys.len() - 1];
    }
    let (x0, x1) = (xs[idx - 1], xs[idx]);
    let t = (x - x0) / (x1 - x0);
    ys[idx - 1] + t * (ys[idx] - ys[idx - 1])
}

/// A fuzzy number with bounded support, stored via its level-set endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum FuzzyNumber {
    /// Level sets equal to `[c, d]` at every γ.
    Rectangular { c: f64, d: f64 },
    /// Peak at `center`, support `[center - left, center + right]`.
    Triangular { center: f64, left: f64, right: f64 },
    /// Core `[core_lo, core_hi]`, support widened by `left` and `right`.
    Trapezoidal {
        core_lo: f64,
        core_hi: f64,
        left: f64,
        right: f64,
    },
    Constant(f64),
    /// Endpoint functions tabulated on a γ-grid, linear in between.
    Sampled {
        gammas: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
}

impl FuzzyNumber {
    pub fn rectangular(c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && d.is_finite() && c <= d) {
            return Err(Error::config(format!(
                "rectangular fuzzy number needs finite c <= d, got [{c}, {d}]"
            )));
        }
        Ok(FuzzyNumber::Rectangular { c, d })
    }

    pub fn triangular(center: f64, left: f64, right: f64) -> Result<Self> {
        check_widths(center, left, right)?;
        Ok(FuzzyNumber::Triangular {
            center,
            left,
            right,
        })
    }

    pub fn trapezoidal(core_lo: f64, core_hi: f64, left: f64, right: f64) -> Result<Self> {
        check_widths(core_lo, left, right)?;
        if !(core_hi.is_finite() && core_lo <= core_hi) {
            return Err(Error::config(format!(
                "trapezoidal core must satisfy core_lo <= core_hi, got [{core_lo}, {core_hi}]"
            )));
        }
        Ok(FuzzyNumber::Trapezoidal {
            core_lo,
            core_hi,
            left,
            right,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::config("constant fuzzy number must be finite"));
        }
        Ok(FuzzyNumber::Constant(value))
    }

    /// Tabulated endpoints; the samples must nest (`lower` non-decreasing,
    /// `upper` non-increasing, `lower <= upper`).
    pub fn sampled(gammas: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if gammas.len() < 2 || lower.len() != gammas.len() || upper.len() != gammas.len() {
            return Err(Error::config(
                "sampled fuzzy number needs gamma/lower/upper arrays of equal length >= 2",
            ));
        }
        validate_gamma_grid(&gammas)?;
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(Error::config("sampled endpoints must be finite"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::config("sampled level sets must satisfy lower <= upper"));
        }
        if lower.windows(2).any(|w| w[1] < w[0]) || upper.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::config(
                "sampled level sets must nest: lower non-decreasing, upper non-increasing",
            ));
        }
        Ok(FuzzyNumber::Sampled {
            gammas,
            lower,
            upper,
        })
    }

    /// `[a1(γ), a2(γ)]`; at γ = 0 this is the closure of the support.
    pub fn level_set(&self, gamma: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(format!("gamma {gamma} outside [0, 1]")));
        }
        Ok(self.level_set_unchecked(gamma))
    }

    fn level_set_unchecked(&self, gamma: f64) -> Interval {
        match self {
            FuzzyNumber::Rectangular { c, d } => Interval::new(*c, *d),
            FuzzyNumber::Triangular {
                center,
                left,
                right,
            } => {
                let m = 1.0 - gamma;
                Interval::new(center - m * left, center + m * right)
            }
            FuzzyNumber::Trapezoidal {
                core_lo,
                core_hi,
                left,
                right,
            } => {
                let m = 1.0 - gamma;
                Interval::new(core_lo - m * left, core_hi + m * right)
            }
            FuzzyNumber::Constant(v) => Interval::new(*v, *v),
            FuzzyNumber::Sampled {
                gammas,
                lower,
                upper,
            } => Interval::new(
                interpolate(gammas, lower, gamma),
                interpolate(gammas, upper, gamma),
            ),
        }
    }

    pub fn support(&self) -> Interval {
        self.level_set_unchecked(0.0)
    }

    /// True when every level set is the same interval.
    pub fn has_constant_level_sets(&self) -> bool {
        matches!(
            self,
            FuzzyNumber::Rectangular { .. } | FuzzyNumber::Constant(_)
        )
    }

    /// `A + shift`, applied to every level-set endpoint.
    pub fn shifted(&self, shift: f64) -> FuzzyNumber {
        match self {
            FuzzyNumber::Rectangular { c, d } => FuzzyNumber::Rectangular {
                c: c + shift,
                d: d + shift,
            },
            FuzzyNumber::Triangular {
                center,
                left,
                right,
            } => FuzzyNumber::Triangular {
                center: center + shift,
                left: *left,
                right: *right,
            },
            FuzzyNumber::Trapezoidal {
                core_lo,
                core_hi,
                left,
                right,
            } => FuzzyNumber::Trapezoidal {
                core_lo: core_lo + shift,
                core_hi: core_hi + shift,
                left: *left,
                right: *right,
            },
            FuzzyNumber::Constant(v) => FuzzyNumber::Constant(v + shift),
            FuzzyNumber::Sampled {
                gammas,
                lower,
                upper,
            } => FuzzyNumber::Sampled {
                gammas: gammas.clone(),
                lower: lower.iter().map(|v| v + shift).collect(),
                upper: upper.iter().map(|v| v + shift).collect(),
            },
        }
    }

    /// `λA`; endpoints swap roles when λ < 0.
    pub fn scaled(&self, lambda: f64) -> FuzzyNumber {
        let flip = lambda < 0.0;
        match self {
            FuzzyNumber::Rectangular { c, d } => {
                let (lo, hi) = if flip { (d, c) } else { (c, d) };
                FuzzyNumber::Rectangular {
                    c: lambda * lo,
                    d: lambda * hi,
                }
            }
            FuzzyNumber::Triangular {
                center,
                left,
                right,
            } => {
                let (l, r) = if flip { (right, left) } else { (left, right) };
                FuzzyNumber::Triangular {
                    center: lambda * center,
                    left: lambda.abs() * l,
                    right: lambda.abs() * r,
                }
            }
            FuzzyNumber::Trapezoidal {
                core_lo,
                core_hi,
                left,
                right,
            } => {
                let (lo, hi, l, r) = if flip {
                    (core_hi, core_lo, right, left)
                } else {
                    (core_lo, core_hi, left, right)
                };
                FuzzyNumber::Trapezoidal {
                    core_lo: lambda * lo,
                    core_hi: lambda * hi,
                    left: lambda.abs() * l,
                    right: lambda.abs() * r,
                }
            }
            FuzzyNumber::Constant(v) => FuzzyNumber::Constant(lambda * v),
            FuzzyNumber::Sampled {
                gammas,
                lower,
                upper,
            } => {
                let (lo, hi) = if flip { (upper, lower) } else { (lower, upper) };
                FuzzyNumber::Sampled {
                    gammas: gammas.clone(),
                    lower: lo.iter().map(|v| lambda * v).collect(),
                    upper: hi.iter().map(|v| lambda * v).collect(),
                }
            }
        }
    }

    /// `center + ε (A - center)`: shrinks or stretches the spread around
    /// `center` while keeping the shape.
    pub fn spread_scaled(&self, center: f64, eps: f64) -> FuzzyNumber {
        self.shifted(-center).scaled(eps).shifted(center)
    }

    fn breakpoints(&self) -> &[f64] {
        match self {
            FuzzyNumber::Sampled { gammas, .. } => gammas,
            _ => &[],
        }
    }

    /// `½ ∫₀¹ [g(a1(γ)) + g(a2(γ))] f(γ) dγ` for any fallible `g`.
    ///
    /// Constant level sets reduce exactly to `½ (g(c) + g(d)) ∫f`; all other
    /// shapes are integrated with `quad`, split at any tabulation breakpoints.
    pub fn expect_with<G>(&self, f: &WeightingFunction, quad: &Quadrature, mut g: G) -> Result<f64>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        if self.has_constant_level_sets() {
            let ls = self.level_set_unchecked(1.0);
            let sum = if ls.lo == ls.hi {
                2.0 * g(ls.lo)?
            } else {
                g(ls.lo)? + g(ls.hi)?
            };
            return Ok(0.5 * sum * f.total_mass());
        }
        let mut breaks: Vec<f64> = vec![0.0, 1.0];
        breaks.extend_from_slice(self.breakpoints());
        breaks.extend_from_slice(f.breakpoints());
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut h = |gamma: f64| {
            let ls = self.level_set_unchecked(gamma);
            Ok(0.5 * (g(ls.lo)? + g(ls.hi)?))
        };
        let est = match f.singular_exponent() {
            None => quad.estimate_panels(&breaks, |gamma| Ok(h(gamma)? * f.eval(gamma)))?,
            Some(n) => {
                // The first panel carries γⁿ in a Jacobi rule; later panels
                // see a smooth weight.
                let first = quad.estimate_power_weighted(breaks[1], n, |gamma| Ok((n + 1.0) * h(gamma)?))?;
                if breaks.len() > 2 {
                    let rest = quad.estimate_panels(&breaks[1..], |gamma| Ok(h(gamma)? * f.eval(gamma)))?;
                    Estimate {
                        value: first.value + rest.value,
                        error: first.error + rest.error,
                    }
                } else {
                    first
                }
            }
        };
        quad.check(est, "possibilistic expectation")
    }
}

fn check_widths(anchor: f64, left: f64, right: f64) -> Result<()> {
    if !anchor.is_finite() {
        return Err(Error::config("fuzzy number location must be finite"));
    }
    if !(left >= 0.0 && right >= 0.0 && left.is_finite() && right.is_finite()) {
        return Err(Error::config(format!(
            "fuzzy number widths must be finite and >= 0, got left {left}, right {right}"
        )));
    }
    Ok(())
}

/// Level set `[a1(γ), a2(γ)]` of `a`.
pub fn level_set(a: &FuzzyNumber, gamma: f64) -> Result<Interval> {
    a.level_set(gamma)
}

/// `E(f, u(A))` for a scalar utility.
pub fn possibilistic_expected_utility<U>(
    f: &WeightingFunction,
    u: U,
    a: &FuzzyNumber,
    quad: &Quadrature,
) -> Result<f64>
where
    U: Fn(f64) -> f64,
{
    a.expect_with(f, quad, |x| Ok(u(x)))
}

/// `E(f, A)`; closed form for the parametric shapes under power weights.
pub fn possibilistic_mean(f: &WeightingFunction, a: &FuzzyNumber, quad: &Quadrature) -> Result<f64> {
    if let Some(m) = closed_form_moments(f, a) {
        return Ok(m.0);
    }
    possibilistic_expected_utility(f, |x| x, a, quad)
}

/// `Var(f, A)`; closed form for the parametric shapes under power weights.
pub fn possibilistic_variance(
    f: &WeightingFunction,
    a: &FuzzyNumber,
    quad: &Quadrature,
) -> Result<f64> {
    if let Some(m) = closed_form_moments(f, a) {
        return Ok(m.1);
    }
    let mean = possibilistic_expected_utility(f, |x| x, a, quad)?;
    let var = possibilistic_expected_utility(f, |x| (x - mean) * (x - mean), a, quad)?;
    Ok(var.max(0.0))
}

/// Mean and variance of a trapezoid-family number under a power weight.
///
/// With `m = 1 - γ`, `a1 = lo - m·l`, `a2 = hi + m·r`, and the weight
/// moments `M1 = ∫ m f`, `M2 = ∫ m² f`:
/// `E = (lo + hi)/2 + (r - l) M1 / 2` and
/// `Var = (p² + q²)/2 + (q r - p l) M1 + (l² + r²) M2 / 2`, `p = lo - E`,
/// `q = hi - E`.
pub(crate) fn closed_form_moments(f: &WeightingFunction, a: &FuzzyNumber) -> Option<(f64, f64)> {
    let (m1, m2) = f.power_moments()?;
    let (lo, hi, l, r) = match *a {
        FuzzyNumber::Rectangular { c, d } => (c, d, 0.0, 0.0),
        FuzzyNumber::Triangular {
            center,
            left,
            right,
        } => (center, center, left, right),
        FuzzyNumber::Trapezoidal {
            core_lo,
            core_hi,
            left,
            right,
        } => (core_lo, core_hi, left, right),
        FuzzyNumber::Constant(v) => return Some((v, 0.0)),
        FuzzyNumber::Sampled { .. } => return None,
    };
    let mean = 0.5 * (lo + hi) + 0.5 * (r - l) * m1;
    let p = lo - mean;
    let q = hi - mean;
    let var = 0.5 * (p * p + q * q) + (q * r - p * l) * m1 + 0.5 * (l * l + r * r) * m2;
    Some((mean, var.max(0.0)))
}
