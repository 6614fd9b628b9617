//! Bivariate utilities `v(y, x)` with partial derivatives through third order.
//!
//! `y` is the income argument and `x` the background argument. Closed-form
//! families evaluate their partials analytically; user-supplied callables
//! fall back to central finite differences.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Closed box `[y_min, y_max] × [x_min, x_max]` on which a utility may be
/// evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainBox {
    pub y_min: f64,
    pub y_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl DomainBox {
    pub fn new(y_min: f64, y_max: f64, x_min: f64, x_max: f64) -> Result<Self> {
        let all_finite = [y_min, y_max, x_min, x_max].iter().all(|v| v.is_finite());
        if !all_finite || y_min >= y_max || x_min >= x_max {
            return Err(Error::config(format!(
                "domain box must be finite with min < max, got y [{y_min}, {y_max}], x [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            y_min,
            y_max,
            x_min,
            x_max,
        })
    }

    pub fn contains(&self, y: f64, x: f64) -> bool {
        (self.y_min..=self.y_max).contains(&y) && (self.x_min..=self.x_max).contains(&x)
    }
}

/// A user-supplied utility evaluated through finite differences.
#[derive(Clone)]
pub struct CustomUtility {
    pub name: String,
    func: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl CustomUtility {
    pub fn new<F>(name: impl Into<String>, func: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            func: Arc::new(func),
        }
    }
}

impl fmt::Debug for CustomUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomUtility").field("name", &self.name).finish()
    }
}

impl PartialEq for CustomUtility {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.func, &other.func)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityFamily {
    /// `-(1/α) e^{-αy} x^{1-γ} / (1-γ)`, `α > 0`, `γ > 0`, `γ ≠ 1`, `x > 0`.
    CaraCrraProduct { alpha: f64, gamma: f64 },
    /// `ln y + ln x`.
    LogAdditive,
    /// `-e^{-αy} - e^{-βx}`.
    CaraAdditive { alpha: f64, beta: f64 },
    /// `y - q_y y² + x - q_x x²`.
    Quadratic { q_y: f64, q_x: f64 },
    Custom(CustomUtility),
}

impl UtilityFamily {
    pub fn name(&self) -> &str {
        match self {
            UtilityFamily::CaraCrraProduct { .. } => "cara_crra_product",
            UtilityFamily::LogAdditive => "log_additive",
            UtilityFamily::CaraAdditive { .. } => "cara_additive",
            UtilityFamily::Quadratic { .. } => "quadratic",
            UtilityFamily::Custom(c) => &c.name,
        }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, UtilityFamily::Custom(_))
    }

    fn check_parameters(&self) -> Result<()> {
        let ok = match *self {
            UtilityFamily::CaraCrraProduct { alpha, gamma } => {
                alpha > 0.0 && alpha.is_finite() && gamma > 0.0 && gamma.is_finite() && gamma != 1.0
            }
            UtilityFamily::CaraAdditive { alpha, beta } => {
                alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()
            }
            UtilityFamily::Quadratic { q_y, q_x } => {
                q_y >= 0.0 && q_x >= 0.0 && q_y.is_finite() && q_x.is_finite()
            }
            UtilityFamily::LogAdditive | UtilityFamily::Custom(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid parameters for {}: {self:?}", self.name())))
        }
    }

    /// Natural domain restrictions: strict positivity where logs or powers
    /// of the argument appear.
    fn needs_positive(&self) -> (bool, bool) {
        match self {
            UtilityFamily::CaraCrraProduct { .. } => (false, true),
            UtilityFamily::LogAdditive => (true, true),
            _ => (false, false),
        }
    }
}

/// Number of derivatives taken in each argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Derivative {
    pub dy: u8,
    pub dx: u8,
}

impl Derivative {
    pub const fn new(dy: u8, dx: u8) -> Self {
        Self { dy, dx }
    }

    /// From a multi-index over `{1, 2}` (1 = income, 2 = background).
    pub fn from_index(index: &[u8]) -> Result<Self> {
        if index.is_empty() || index.len() > 3 {
            return Err(Error::Unsupported(format!(
                "derivative multi-index must have length 1 to 3, got {}",
                index.len()
            )));
        }
        let mut d = Derivative::new(0, 0);
        for &i in index {
            match i {
                1 => d.dy += 1,
                2 => d.dx += 1,
                other => {
                    return Err(Error::Unsupported(format!(
                        "derivative index entries must be 1 or 2, got {other}"
                    )))
                }
            }
        }
        Ok(d)
    }

    pub fn order(&self) -> u8 {
        self.dy + self.dx
    }

    /// All partials of order 1 through 3.
    pub fn all_up_to_third() -> impl Iterator<Item = Derivative> {
        (1u8..=3).flat_map(|k| (0..=k).map(move |dx| Derivative::new(k - dx, dx)))
    }
}

/// A bivariate utility: family, positive scale factor, and domain box.
#[derive(Debug, Clone, PartialEq)]
pub struct BiUtility {
    family: UtilityFamily,
    scale: f64,
    domain: DomainBox,
    monotonicity_override: bool,
}

pub(crate) const V1: Derivative = Derivative::new(1, 0);
pub(crate) const V11: Derivative = Derivative::new(2, 0);
pub(crate) const V111: Derivative = Derivative::new(3, 0);
pub(crate) const V122: Derivative = Derivative::new(1, 2);

impl BiUtility {
    pub fn new(family: UtilityFamily, domain: DomainBox) -> Result<Self> {
        family.check_parameters()?;
        let (pos_y, pos_x) = family.needs_positive();
        if (pos_y && domain.y_min <= 0.0) || (pos_x && domain.x_min <= 0.0) {
            return Err(Error::config(format!(
                "{} needs a domain box with strictly positive {}",
                family.name(),
                if pos_y && domain.y_min <= 0.0 { "y" } else { "x" }
            )));
        }
        Ok(Self {
            family,
            scale: 1.0,
            domain,
            monotonicity_override: false,
        })
    }

    /// Multiplies the utility (and every partial) by `factor > 0`.
    pub fn scaled(mut self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::config(format!("utility scale must be positive, got {factor}")));
        }
        self.scale *= factor;
        Ok(self)
    }

    /// Lets the solver accept this utility even if grid validation fails.
    pub fn with_override(mut self, allow: bool) -> Self {
        self.monotonicity_override = allow;
        self
    }

    pub fn family(&self) -> &UtilityFamily {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn monotonicity_override(&self) -> bool {
        self.monotonicity_override
    }

    fn check_point(&self, y: f64, x: f64) -> Result<()> {
        if self.domain.contains(y, x) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{} evaluated at (y, x) = ({y}, {x}) outside domain box y [{}, {}], x [{}, {}]",
                self.family.name(),
                self.domain.y_min,
                self.domain.y_max,
                self.domain.x_min,
                self.domain.x_max
            )))
        }
    }

    /// Evaluation without the box check; natural-domain violations still fail.
    fn raw(&self, y: f64, x: f64) -> Result<f64> {
        let (pos_y, pos_x) = self.family.needs_positive();
        if (pos_y && y <= 0.0) || (pos_x && x <= 0.0) {
            return Err(Error::domain(format!(
                "{} undefined at (y, x) = ({y}, {x})",
                self.family.name()
            )));
        }
        let v = match &self.family {
            UtilityFamily::Custom(c) => (c.func)(y, x),
            _ => analytic(&self.family, Derivative::new(0, 0), y, x),
        };
        if v.is_finite() {
            Ok(self.scale * v)
        } else {
            Err(Error::domain(format!(
                "{} is not finite at (y, x) = ({y}, {x})",
                self.family.name()
            )))
        }
    }

    pub fn value(&self, y: f64, x: f64) -> Result<f64> {
        self.check_point(y, x)?;
        self.raw(y, x)
    }

    /// Partial derivative; analytic for closed-form families, central
    /// differences otherwise. Order 0 returns the value.
    pub fn derivative(&self, d: Derivative, y: f64, x: f64) -> Result<f64> {
        if d.order() > 3 {
            return Err(Error::Unsupported(format!(
                "partial derivatives above third order ({} requested)",
                d.order()
            )));
        }
        self.check_point(y, x)?;
        match &self.family {
            UtilityFamily::Custom(_) => self.finite_difference(d, y, x),
            family => {
                self.raw(y, x)?;
                Ok(self.scale * analytic(family, d, y, x))
            }
        }
    }

    /// Partial for a multi-index over `{1, 2}`, e.g. `[1, 2, 2]` is `v_122`.
    pub fn partial(&self, index: &[u8], y: f64, x: f64) -> Result<f64> {
        self.derivative(Derivative::from_index(index)?, y, x)
    }

    /// Tensor-product fourth-order central differences of the (unboxed)
    /// value.
    ///
    /// The step grows with the derivative order `k` as `ε^{1/(k+4)}`
    /// (times `max(1, |coordinate|)`) to balance truncation against roundoff.
    pub fn finite_difference(&self, d: Derivative, y: f64, x: f64) -> Result<f64> {
        if d.order() > 3 {
            return Err(Error::Unsupported("finite differences above third order".into()));
        }
        if d.order() == 0 {
            return self.raw(y, x);
        }
        let base = f64::EPSILON.powf(1.0 / (f64::from(d.order()) + 4.0));
        let hy = base * y.abs().max(1.0);
        let hx = base * x.abs().max(1.0);
        let sy = stencil(d.dy);
        let sx = stencil(d.dx);
        let mut acc = 0.0;
        for &(oy, cy) in sy {
            for &(ox, cx) in sx {
                acc += cy * cx * self.raw(y + oy * hy, x + ox * hx)?;
            }
        }
        Ok(acc / (hy.powi(i32::from(d.dy)) * hx.powi(i32::from(d.dx))))
    }
}

fn stencil(order: u8) -> &'static [(f64, f64)] {
    match order {
        0 => &[(0.0, 1.0)],
        1 => &[
            (-2.0, 1.0 / 12.0),
            (-1.0, -8.0 / 12.0),
            (1.0, 8.0 / 12.0),
            (2.0, -1.0 / 12.0),
        ],
        2 => &[
            (-2.0, -1.0 / 12.0),
            (-1.0, 16.0 / 12.0),
            (0.0, -30.0 / 12.0),
            (1.0, 16.0 / 12.0),
            (2.0, -1.0 / 12.0),
        ],
        _ => &[
            (-3.0, 0.125),
            (-2.0, -1.0),
            (-1.0, 1.625),
            (1.0, -1.625),
            (2.0, 1.0),
            (3.0, -0.125),
        ],
    }
}

/// p (p - 1) ... (p - j + 1)
fn falling(p: f64, j: u8) -> f64 {
    (0..j).map(|i| p - f64::from(i)).product()
}

fn factorial(n: u8) -> f64 {
    (1..=n).map(f64::from).product()
}

fn analytic(family: &UtilityFamily, d: Derivative, y: f64, x: f64) -> f64 {
    let Derivative { dy, dx } = d;
    match *family {
        UtilityFamily::CaraCrraProduct { alpha, gamma } => {
            let p = 1.0 - gamma;
            let k = -1.0 / (alpha * p);
            k * (-alpha).powi(i32::from(dy))
                * (-alpha * y).exp()
                * falling(p, dx)
                * x.powf(p - f64::from(dx))
        }
        UtilityFamily::LogAdditive => match (dy, dx) {
            (0, 0) => y.ln() + x.ln(),
            (k, 0) => log_derivative(k, y),
            (0, k) => log_derivative(k, x),
            _ => 0.0,
        },
        UtilityFamily::CaraAdditive { alpha, beta } => match (dy, dx) {
            (0, 0) => -(-alpha * y).exp() - (-beta * x).exp(),
            (k, 0) => -(-alpha).powi(i32::from(k)) * (-alpha * y).exp(),
            (0, k) => -(-beta).powi(i32::from(k)) * (-beta * x).exp(),
            _ => 0.0,
        },
        UtilityFamily::Quadratic { q_y, q_x } => match (dy, dx) {
            (0, 0) => y - q_y * y * y + x - q_x * x * x,
            (1, 0) => 1.0 - 2.0 * q_y * y,
            (2, 0) => -2.0 * q_y,
            (0, 1) => 1.0 - 2.0 * q_x * x,
            (0, 2) => -2.0 * q_x,
            _ => 0.0,
        },
        UtilityFamily::Custom(_) => unreachable!("custom utilities have no analytic partials"),
    }
}

/// k-th derivative of ln t.
fn log_derivative(k: u8, t: f64) -> f64 {
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * factorial(k - 1) / t.powi(i32::from(k))
}

/// Outcome of the grid checks on a utility.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub family: String,
    pub points_checked: usize,
    /// `v_1 > 0` at every grid point.
    pub increasing_in_income: bool,
    /// `v_2 > 0` at every grid point.
    pub increasing_in_background: bool,
    /// `v_11 < 0` and `v_11 v_22 - v_12² > 0` at every grid point.
    pub strictly_concave: bool,
    /// Largest `|analytic - fd| / max(1e-6, 1e-4 |analytic|)`; ≤ 1 passes.
    pub max_derivative_discrepancy: f64,
    pub monotonicity_override: bool,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn derivatives_agree(&self) -> bool {
        self.max_derivative_discrepancy <= 1.0
    }

    pub fn assumptions_hold(&self) -> bool {
        self.increasing_in_income && self.increasing_in_background && self.strictly_concave
    }

    /// Whether the solver may use the utility.
    pub fn accepted_for_solver(&self) -> bool {
        self.assumptions_hold() || self.monotonicity_override
    }

    pub fn ensure_accepted(&self, role: &str) -> Result<()> {
        if self.accepted_for_solver() {
            Ok(())
        } else {
            Err(Error::ModelAssumption(format!(
                "utility {role} ({}) fails validation: {}; set monotonicity_override to accept it",
                self.family,
                self.warnings.join("; ")
            )))
        }
    }
}

/// Checks monotonicity, concavity and analytic-vs-numeric partials on an
/// `n × n` grid of cell midpoints inside the domain box.
pub fn validate_utility(v: &BiUtility, n: usize) -> Result<ValidationReport> {
    if n == 0 {
        return Err(Error::config("validation grid must have at least one point per axis"));
    }
    let b = v.domain();
    let coord = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
    let mut inc_y = true;
    let mut inc_x = true;
    let mut concave = true;
    let mut discrepancy: f64 = 0.0;
    let mut warnings = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let y = coord(b.y_min, b.y_max, i);
            let x = coord(b.x_min, b.x_max, j);
            let v1 = v.derivative(V1, y, x)?;
            let v2 = v.derivative(Derivative::new(0, 1), y, x)?;
            let v11 = v.derivative(V11, y, x)?;
            let v22 = v.derivative(Derivative::new(0, 2), y, x)?;
            let v12 = v.derivative(Derivative::new(1, 1), y, x)?;
            if !(v1 > 0.0) && inc_y {
                inc_y = false;
                warnings.push(format!("v_1 = {v1:.6e} <= 0 at ({y}, {x})"));
            }
            if !(v2 > 0.0) && inc_x {
                inc_x = false;
                warnings.push(format!("v_2 = {v2:.6e} <= 0 at ({y}, {x})"));
            }
            let det = v11 * v22 - v12 * v12;
            if !(v11 < 0.0 && det > 0.0) && concave {
                concave = false;
                warnings.push(format!(
                    "Hessian not negative definite at ({y}, {x}): v_11 = {v11:.6e}, det = {det:.6e}"
                ));
            }
            if v.family().is_analytic() {
                for d in Derivative::all_up_to_third() {
                    let exact = v.derivative(d, y, x)?;
                    let fd = v.finite_difference(d, y, x)?;
                    let tol = (1e-4 * exact.abs()).max(1e-6);
                    discrepancy = discrepancy.max((exact - fd).abs() / tol);
                }
            }
        }
    }
    if discrepancy > 1.0 {
        warnings.push(format!(
            "analytic partials disagree with finite differences (ratio {discrepancy:.3})"
        ));
    }
    Ok(ValidationReport {
        family: v.family().name().to_string(),
        points_checked: n * n,
        increasing_in_income: inc_y,
        increasing_in_background: inc_x,
        strictly_concave: concave,
        max_derivative_discrepancy: discrepancy,
        monotonicity_override: v.monotonicity_override(),
        warnings,
    })
}
