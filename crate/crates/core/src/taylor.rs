//! Second-order Taylor predictions of expected marginal utility, checked
//! against quadrature.
//!
//! For small independent risks around `(ȳ + s, x̄)`:
//!
//! ```text
//! E[v_1(Y + s, X)] ≈ v_1 + ½ v_111 Var_income + ½ v_122 Var_background
//! ```
//!
//! Dropping a risk drops its curvature term, so the derivative of a less
//! risky objective at the full-risk optimum is predicted by the negative of
//! the dropped terms.

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, WeightingFunction};
use crate::saving::{
    precautionary_report, IndicatorKind, ModelKind, PrecautionaryReport, Risk, RiskVariances,
    SavingScenario, ScenarioConfig, Sign, Situation, SolverSettings,
};
use crate::stochastic::RandomVariable;
use crate::utility::{BiUtility, DomainBox, UtilityFamily, V1, V111, V122};

/// Which curvature terms enter the approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaylorTerms {
    /// Both risks.
    Full,
    /// Background risk only.
    BackgroundOnly,
    /// Income risk only.
    IncomeOnly,
    /// No risk: `v_1` at the point.
    Certainty,
}

impl TaylorTerms {
    pub fn for_situation(s: Situation) -> Self {
        match s {
            Situation::FullRisk => TaylorTerms::Full,
            Situation::IncomeOnly => TaylorTerms::IncomeOnly,
            Situation::BackgroundOnly => TaylorTerms::BackgroundOnly,
            Situation::Certainty => TaylorTerms::Certainty,
        }
    }
}

/// `v_1(ȳ + s, x̄)` plus the selected half-variance curvature terms.
pub fn taylor_marginal_approx(
    v: &BiUtility,
    s: f64,
    means: (f64, f64),
    var_income: f64,
    var_background: f64,
    which: TaylorTerms,
) -> Result<f64> {
    let (y, x) = (means.0 + s, means.1);
    let mut value = v.derivative(V1, y, x)?;
    if matches!(which, TaylorTerms::Full | TaylorTerms::IncomeOnly) {
        value += 0.5 * v.derivative(V111, y, x)? * var_income;
    }
    if matches!(which, TaylorTerms::Full | TaylorTerms::BackgroundOnly) {
        value += 0.5 * v.derivative(V122, y, x)? * var_background;
    }
    Ok(value)
}

/// Predicted derivative of the alternative objective at the full-risk
/// optimum `s_star`.
///
/// The two-source gap is the sum of the other two.
pub fn derivative_gap(
    indicator: IndicatorKind,
    v: &BiUtility,
    s_star: f64,
    means: (f64, f64),
    variances: RiskVariances,
) -> Result<f64> {
    let (y, x) = (means.0 + s_star, means.1);
    let income = || Ok::<f64, Error>(-0.5 * v.derivative(V111, y, x)? * variances.income);
    let background = || Ok::<f64, Error>(-0.5 * v.derivative(V122, y, x)? * variances.background);
    match indicator {
        IndicatorKind::AddIncome => income(),
        IndicatorKind::AddBackground => background(),
        IndicatorKind::TwoSource => Ok(income()? + background()?),
    }
}

/// Quadrature vs Taylor value of `E[v_1]` at one risk scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorGapResult {
    pub eps: f64,
    pub exact: f64,
    pub approx: f64,
    pub abs_error: f64,
    /// `None` when `|exact| <= 1e-12`.
    pub rel_error: Option<f64>,
}

impl TaylorGapResult {
    fn new(eps: f64, exact: f64, approx: f64) -> Self {
        let abs_error = (exact - approx).abs();
        Self {
            eps,
            exact,
            approx,
            abs_error,
            rel_error: (exact.abs() > 1e-12).then(|| abs_error / exact.abs()),
        }
    }
}

/// Compares `E[v_1(Y + s, X)]` with its Taylor value in `situation`, after
/// scaling both risks by `eps`.
pub fn marginal_check(scenario: &SavingScenario, situation: Situation, s: f64, eps: f64) -> Result<TaylorGapResult> {
    let sc = scenario.with_risk_scale(eps)?;
    let exact = sc.expected_marginal(situation, s)?;
    let var = sc.variances();
    let approx = taylor_marginal_approx(
        sc.v(),
        s,
        sc.means(),
        var.income,
        var.background,
        TaylorTerms::for_situation(situation),
    )?;
    Ok(TaylorGapResult::new(eps, exact, approx))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub eps: f64,
    pub indicator: IndicatorKind,
    pub s_star: f64,
    /// `E_alt[v_1](s*) - E_full[v_1](s*)` by quadrature.
    pub exact_gap: f64,
    pub predicted_gap: f64,
    pub error: f64,
    /// Errors at or below this are rounding noise.
    pub noise_floor: f64,
}

impl StudyRow {
    pub fn resolved(&self) -> bool {
        self.error > self.noise_floor
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEstimate {
    pub indicator: IndicatorKind,
    pub eps_from: f64,
    pub eps_to: f64,
    /// `ln(e1/e2) / ln(ε1/ε2)`; `None` when either error is noise.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub kind: ModelKind,
    pub eps: Vec<f64>,
    /// Grouped by ε, then by indicator.
    pub rows: Vec<StudyRow>,
    pub orders: Vec<OrderEstimate>,
}

impl ConvergenceTable {
    pub fn rows_for(&self, indicator: IndicatorKind) -> impl Iterator<Item = &StudyRow> {
        self.rows.iter().filter(move |r| r.indicator == indicator)
    }

    /// Smallest defined order over all indicators and ε pairs.
    pub fn min_order(&self) -> Option<f64> {
        self.orders.iter().filter_map(|o| o.order).reduce(f64::min)
    }

    /// Whether each resolved error sequence strictly decreases.
    pub fn errors_decrease(&self) -> bool {
        IndicatorKind::ALL.iter().all(|&k| {
            let errs: Vec<&StudyRow> = self.rows_for(k).collect();
            errs.windows(2)
                .all(|w| !(w[0].resolved() && w[1].resolved()) || w[1].error < w[0].error)
        })
    }

    /// Errors at every ε are noise: the expansion is exact.
    pub fn all_at_noise(&self) -> bool {
        self.rows.iter().all(|r| !r.resolved())
    }
}

/// Scales both risks by each ε, solves the full-risk problem, and compares
/// the exact alternative-objective derivative gaps with their predictions.
pub fn epsilon_scaling_study(scenario: &SavingScenario, eps: &[f64]) -> Result<ConvergenceTable> {
    if eps.is_empty() {
        return Err(Error::config("epsilon list is empty"));
    }
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::config("epsilon values must be positive and finite"));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::config("epsilon values must be strictly decreasing"));
    }
    let kind = scenario.kind();
    let mut rows = Vec::new();
    for &e in eps {
        let sc = scenario.with_risk_scale(e)?;
        let s_star = sc.solve(Situation::FullRisk)?.s_opt;
        let full = sc.expected_marginal(Situation::FullRisk, s_star)?;
        let noise_floor = 1e4 * f64::EPSILON * full.abs().max(1.0);
        for &ik in kind.indicators() {
            let alt = ik.alternative();
            let exact_gap = sc
                .expected_marginal(alt, s_star)
                .map_err(|err| err.in_situation(alt.label()))?
                - full;
            let predicted_gap = derivative_gap(ik, sc.v(), s_star, sc.means(), sc.variances())?;
            rows.push(StudyRow {
                eps: e,
                indicator: ik,
                s_star,
                exact_gap,
                predicted_gap,
                error: (exact_gap - predicted_gap).abs(),
                noise_floor,
            });
        }
    }
    let per = kind.indicators().len();
    let mut orders = Vec::new();
    for (i, w) in eps.windows(2).enumerate() {
        for j in 0..per {
            let a = &rows[i * per + j];
            let b = &rows[(i + 1) * per + j];
            let order = (a.resolved() && b.resolved()).then(|| (a.error / b.error).ln() / (w[0] / w[1]).ln());
            orders.push(OrderEstimate {
                indicator: a.indicator,
                eps_from: w[0],
                eps_to: w[1],
                order,
            });
        }
    }
    Ok(ConvergenceTable {
        kind,
        eps: eps.to_vec(),
        rows,
        orders,
    })
}

/// The threshold for `v = -(1/α) e^{-αy} x^{1-γ} / (1-γ)` with a
/// rectangular fuzzy income and a uniform background on the same `[c, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub alpha: f64,
    pub gamma: f64,
    pub c: f64,
    pub d: f64,
    /// `(c - d)² / 4`.
    pub var_fuzzy: f64,
    /// `(c - d)² / 12`.
    pub var_random: f64,
    /// `α² / (γ (1 - γ))`.
    pub lhs: f64,
    /// `4 / (3 (c + d)²)`.
    pub rhs: f64,
    /// `1 / (3 x̄²)` at `x̄ = (c + d) / 2`; equals `rhs`.
    pub rhs_at_mean: f64,
    /// `lhs - rhs`.
    pub predicate: f64,
    /// Value of `c + d` where the predicate vanishes.
    pub threshold_sum: f64,
    /// Full report of a solved scenario, if one was supplied.
    pub solved: Option<PrecautionaryReport>,
}

impl ThresholdReport {
    /// Predicate sign, with a few ulps around zero counted as zero.
    pub fn predicate_sign(&self) -> Sign {
        Sign::of(self.predicate, 16.0 * f64::EPSILON * self.lhs)
    }

    /// `(c - d)²/4 · [v_111 + v_122 / 3]` at `point`.
    pub fn combination(&self, v: &BiUtility, point: (f64, f64)) -> Result<f64> {
        let (y, x) = point;
        Ok(self.var_fuzzy * (v.derivative(V111, y, x)? + v.derivative(V122, y, x)? / 3.0))
    }

    /// The two-source indicator of the solved scenario.
    pub fn solved_two_source(&self) -> Option<f64> {
        self.solved
            .as_ref()
            .and_then(|r| r.indicator(IndicatorKind::TwoSource))
            .map(|i| i.value)
    }

    /// Closed-form quantities when `config` has the threshold shape: mixed-I,
    /// cara-crra `v`, rectangular income and uniform background on the same
    /// interval. `None` for any other shape.
    pub fn matching(config: &ScenarioConfig) -> Option<Result<ThresholdReport>> {
        if config.kind != ModelKind::MixedI {
            return None;
        }
        let (alpha, gamma) = match config.v.family() {
            UtilityFamily::CaraCrraProduct { alpha, gamma } => (*alpha, *gamma),
            _ => return None,
        };
        match (&config.income, &config.background) {
            (
                Risk::Fuzzy(FuzzyNumber::Rectangular { c: a1, d: a2 }),
                Risk::Random(RandomVariable::Uniform { c: x1, d: x2 }),
            ) if a1 == x1 && a2 == x2 => Some(cara_crra_threshold(alpha, gamma, *a1, *a2)),
            _ => None,
        }
    }

    /// [`ThresholdReport::matching`] plus the solved report of `scenario`.
    pub fn for_scenario(scenario: &SavingScenario) -> Option<Result<ThresholdReport>> {
        Self::matching(scenario.config()).map(|t| {
            let mut t = t?;
            t.solved = Some(precautionary_report(scenario)?);
            Ok(t)
        })
    }
}

/// Everything besides `v` and the risks needed to solve a threshold case.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSetup {
    pub u: BiUtility,
    pub y0: f64,
    pub x0: f64,
    pub v_domain: DomainBox,
    pub weighting: WeightingFunction,
    pub solver: SolverSettings,
}

/// Closed-form threshold quantities for `α > 0`, `0 < γ < 1`, `0 < c < d`.
pub fn cara_crra_threshold(alpha: f64, gamma: f64, c: f64, d: f64) -> Result<ThresholdReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::config(format!("alpha must be positive, got {alpha}")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::config(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if !(c > 0.0 && c < d && d.is_finite()) {
        return Err(Error::config(format!("need 0 < c < d, got c = {c}, d = {d}")));
    }
    let spread = (c - d) * (c - d);
    let sum = c + d;
    let xbar = 0.5 * sum;
    let lhs = alpha * alpha / (gamma * (1.0 - gamma));
    let rhs = 4.0 / (3.0 * sum * sum);
    Ok(ThresholdReport {
        alpha,
        gamma,
        c,
        d,
        var_fuzzy: spread / 4.0,
        var_random: spread / 12.0,
        lhs,
        rhs,
        rhs_at_mean: 1.0 / (3.0 * xbar * xbar),
        predicate: lhs - rhs,
        threshold_sum: (4.0 * gamma * (1.0 - gamma) / 3.0).sqrt() / alpha,
        solved: None,
    })
}

/// Threshold report plus the solved mixed-I scenario built from `setup`.
pub fn cara_crra_threshold_solved(
    alpha: f64,
    gamma: f64,
    c: f64,
    d: f64,
    setup: &ThresholdSetup,
) -> Result<ThresholdReport> {
    let mut report = cara_crra_threshold(alpha, gamma, c, d)?;
    let v = BiUtility::new(UtilityFamily::CaraCrraProduct { alpha, gamma }, setup.v_domain)?.with_override(true);
    let scenario = ScenarioConfig {
        kind: ModelKind::MixedI,
        y0: setup.y0,
        x0: setup.x0,
        u: setup.u.clone(),
        v,
        income: Risk::Fuzzy(FuzzyNumber::rectangular(c, d)?),
        background: Risk::Random(RandomVariable::uniform(c, d)?),
        weighting: setup.weighting.clone(),
        solver: setup.solver.clone(),
    }
    .build()?;
    report.solved = Some(precautionary_report(&scenario)?);
    Ok(report)
}
