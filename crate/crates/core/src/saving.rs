//! Two-period optimal saving under income and background risk.
//!
//! The consumer holds `y0` and `x0` today and `y + s`, `x` tomorrow, and
//! maximises `u(y0 - s, x0) + E[v(y + s, x)]`. The second-period expectation
//! depends on the model (which side is fuzzy) and on the situation (which
//! risks are present). Precautionary saving compares the full-risk optimum
//! with the optimum when one or both risks are replaced by their means.

use std::fmt;

use crate::error::{Error, Result};
use crate::fuzzy::{possibilistic_mean, possibilistic_variance, FuzzyNumber, Interval, WeightingFunction};
use crate::mixed::{expect_pair, NestedQuadrature, Orientation};
use crate::quadrature::Quadrature;
use crate::roots;
use crate::stochastic::RandomVariable;
use crate::taylor;
use crate::utility::{validate_utility, BiUtility, ValidationReport, V1, V11, V111, V122};

/// Grid size per axis used to validate utilities before solving.
pub const VALIDATION_GRID: usize = 9;
/// Distance kept from the domain-box edges when deriving saving bounds.
pub const DOMAIN_MARGIN: f64 = 1e-6;

/// Which side carries the fuzzy risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Random income `Y`, random background `X`.
    Probabilistic,
    /// Fuzzy income `A`, random background `X`.
    MixedI,
    /// Random income `Y`, fuzzy background `B`.
    MixedII,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Probabilistic => "probabilistic",
            ModelKind::MixedI => "mixed-I",
            ModelKind::MixedII => "mixed-II",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "probabilistic" => Some(ModelKind::Probabilistic),
            "mixed-I" => Some(ModelKind::MixedI),
            "mixed-II" => Some(ModelKind::MixedII),
            _ => None,
        }
    }

    pub fn income_is_fuzzy(self) -> bool {
        self == ModelKind::MixedI
    }

    pub fn background_is_fuzzy(self) -> bool {
        self == ModelKind::MixedII
    }

    /// Situations solved by [`precautionary_report`].
    pub fn situations(self) -> &'static [Situation] {
        match self {
            ModelKind::Probabilistic => &[Situation::FullRisk, Situation::BackgroundOnly, Situation::Certainty],
            _ => &Situation::ALL,
        }
    }

    /// Indicators reported for this model.
    pub fn indicators(self) -> &'static [IndicatorKind] {
        match self {
            ModelKind::Probabilistic => &[IndicatorKind::AddIncome, IndicatorKind::TwoSource],
            _ => &IndicatorKind::ALL,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which risks are present in the second period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Situation {
    /// (a) both risks.
    FullRisk,
    /// (b) income risk, background at its mean.
    IncomeOnly,
    /// (c) income at its mean, background risk.
    BackgroundOnly,
    /// (d) both at their means.
    Certainty,
}

impl Situation {
    pub const ALL: [Situation; 4] = [
        Situation::FullRisk,
        Situation::IncomeOnly,
        Situation::BackgroundOnly,
        Situation::Certainty,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Situation::FullRisk => "full_risk",
            Situation::IncomeOnly => "income_only",
            Situation::BackgroundOnly => "background_only",
            Situation::Certainty => "certainty",
        }
    }

    pub fn letter(self) -> char {
        match self {
            Situation::FullRisk => 'a',
            Situation::IncomeOnly => 'b',
            Situation::BackgroundOnly => 'c',
            Situation::Certainty => 'd',
        }
    }

    pub fn income_risky(self) -> bool {
        matches!(self, Situation::FullRisk | Situation::IncomeOnly)
    }

    pub fn background_risky(self) -> bool {
        matches!(self, Situation::FullRisk | Situation::BackgroundOnly)
    }
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Precautionary-saving notions: full-risk optimum minus the optimum of a
/// less risky situation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndicatorKind {
    /// `s(a) - s(c)`: effect of the income risk.
    AddIncome,
    /// `s(a) - s(d)`: effect of both risks.
    TwoSource,
    /// `s(a) - s(b)`: effect of the background risk.
    AddBackground,
}

impl IndicatorKind {
    pub const ALL: [IndicatorKind; 3] = [
        IndicatorKind::AddIncome,
        IndicatorKind::TwoSource,
        IndicatorKind::AddBackground,
    ];

    pub fn label(self) -> &'static str {
        match self {
            IndicatorKind::AddIncome => "add_income",
            IndicatorKind::TwoSource => "two_source",
            IndicatorKind::AddBackground => "add_background",
        }
    }

    /// The less risky situation subtracted from the full-risk optimum.
    pub fn alternative(self) -> Situation {
        match self {
            IndicatorKind::AddIncome => Situation::BackgroundOnly,
            IndicatorKind::TwoSource => Situation::Certainty,
            IndicatorKind::AddBackground => Situation::IncomeOnly,
        }
    }
}

impl fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One risk component.
#[derive(Debug, Clone, PartialEq)]
pub enum Risk {
    Fuzzy(FuzzyNumber),
    Random(RandomVariable),
}

impl Risk {
    pub fn is_fuzzy(&self) -> bool {
        matches!(self, Risk::Fuzzy(_))
    }

    pub fn support(&self) -> Interval {
        match self {
            Risk::Fuzzy(a) => a.support(),
            Risk::Random(x) => x.support(),
        }
    }

    /// Possibilistic or probabilistic mean and variance.
    pub fn moments(&self, f: &WeightingFunction, quad: &Quadrature) -> Result<(f64, f64)> {
        match self {
            Risk::Fuzzy(a) => Ok((possibilistic_mean(f, a, quad)?, possibilistic_variance(f, a, quad)?)),
            Risk::Random(x) => Ok((x.mean(), x.variance())),
        }
    }

    /// `center + ε (R - center)`.
    pub fn spread_scaled(&self, center: f64, eps: f64) -> Risk {
        match self {
            Risk::Fuzzy(a) => Risk::Fuzzy(a.spread_scaled(center, eps)),
            Risk::Random(x) => Risk::Random(x.spread_scaled(center, eps)),
        }
    }
}

/// Income-side and background-side variances, already paired by model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskVariances {
    pub income: f64,
    pub background: f64,
}

impl RiskVariances {
    pub fn new(income: f64, background: f64) -> Result<Self> {
        if !(income >= 0.0 && background >= 0.0 && income.is_finite() && background.is_finite()) {
            return Err(Error::config(format!(
                "variances must be finite and >= 0, got income {income}, background {background}"
            )));
        }
        Ok(Self { income, background })
    }

    /// Pairs a fuzzy and a random variance according to the model:
    /// mixed-I puts `Var(f, A)` on income, mixed-II puts `Var(f, B)` on
    /// background.
    pub fn for_mixed(kind: ModelKind, var_fuzzy: f64, var_random: f64) -> Result<Self> {
        match kind {
            ModelKind::MixedI => Self::new(var_fuzzy, var_random),
            ModelKind::MixedII => Self::new(var_random, var_fuzzy),
            ModelKind::Probabilistic => Err(Error::config(
                "the probabilistic model has no fuzzy variance; use RiskVariances::new",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    /// Relative first-order-condition tolerance.
    pub tolerance: f64,
    /// Initial bracket; defaults to the full feasible interval.
    pub bounds: Option<(f64, f64)>,
    pub quadrature_nodes: usize,
    pub max_iterations: usize,
}

impl SolverSettings {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;
    pub const DEFAULT_MAX_ITERATIONS: usize = 200;

    /// Band below which indicators and Taylor gaps count as zero.
    pub fn zero_band(&self) -> f64 {
        10.0 * self.tolerance
    }
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: Self::DEFAULT_TOLERANCE,
            bounds: None,
            quadrature_nodes: Quadrature::DEFAULT_NODES,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Everything needed to build a [`SavingScenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ModelKind,
    pub y0: f64,
    pub x0: f64,
    pub u: BiUtility,
    pub v: BiUtility,
    pub income: Risk,
    pub background: Risk,
    pub weighting: WeightingFunction,
    pub solver: SolverSettings,
}

impl ScenarioConfig {
    pub fn build(self) -> Result<SavingScenario> {
        SavingScenario::new(self)
    }
}

/// A validated saving problem: all four situations share the data.
#[derive(Debug, Clone)]
pub struct SavingScenario {
    config: ScenarioConfig,
    quad: NestedQuadrature,
    income_mean: f64,
    background_mean: f64,
    variances: RiskVariances,
    feasible: (f64, f64),
    bounds: (f64, f64),
    u_report: ValidationReport,
    v_report: ValidationReport,
}

impl SavingScenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        let u_report = validate_utility(&config.u, VALIDATION_GRID)?;
        u_report.ensure_accepted("u")?;
        let v_report = validate_utility(&config.v, VALIDATION_GRID)?;
        v_report.ensure_accepted("v")?;
        Self::with_reports(config, u_report, v_report)
    }

    fn with_reports(config: ScenarioConfig, u_report: ValidationReport, v_report: ValidationReport) -> Result<Self> {
        let kind = config.kind;
        if config.income.is_fuzzy() != kind.income_is_fuzzy() {
            return Err(Error::config(format!(
                "{kind} needs a {} income risk",
                if kind.income_is_fuzzy() { "fuzzy" } else { "random" }
            )));
        }
        if config.background.is_fuzzy() != kind.background_is_fuzzy() {
            return Err(Error::config(format!(
                "{kind} needs a {} background risk",
                if kind.background_is_fuzzy() { "fuzzy" } else { "random" }
            )));
        }
        if !(config.y0.is_finite() && config.x0.is_finite()) {
            return Err(Error::config("endowments must be finite"));
        }
        let s = &config.solver;
        if !(s.tolerance > 0.0 && s.tolerance.is_finite()) {
            return Err(Error::config(format!("solver tolerance must be positive, got {}", s.tolerance)));
        }
        if s.max_iterations == 0 {
            return Err(Error::config("solver needs at least one iteration"));
        }
        let quad = NestedQuadrature::uniform(s.quadrature_nodes)?;
        let (income_mean, var_i) = config.income.moments(&config.weighting, &quad.gamma)?;
        let (background_mean, var_b) = config.background.moments(&config.weighting, &quad.gamma)?;
        let variances = RiskVariances::new(var_i, var_b)?;

        let feasible = feasible_interval(&config)?;
        let bounds = match s.bounds {
            None => feasible,
            Some((lo, hi)) => {
                if !(lo < hi) {
                    return Err(Error::config(format!("saving bounds need s_lo < s_hi, got [{lo}, {hi}]")));
                }
                if lo < feasible.0 || hi > feasible.1 {
                    return Err(Error::config(format!(
                        "saving bounds [{lo}, {hi}] leave the feasible interval [{}, {}] implied by the domain boxes",
                        feasible.0, feasible.1
                    )));
                }
                (lo, hi)
            }
        };
        Ok(Self {
            config,
            quad,
            income_mean,
            background_mean,
            variances,
            feasible,
            bounds,
            u_report,
            v_report,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn kind(&self) -> ModelKind {
        self.config.kind
    }

    pub fn u(&self) -> &BiUtility {
        &self.config.u
    }

    pub fn v(&self) -> &BiUtility {
        &self.config.v
    }

    pub fn quadrature(&self) -> &NestedQuadrature {
        &self.quad
    }

    /// `(income mean, background mean)`.
    pub fn means(&self) -> (f64, f64) {
        (self.income_mean, self.background_mean)
    }

    pub fn variances(&self) -> RiskVariances {
        self.variances
    }

    /// Savings for which every utility argument stays inside its box.
    pub fn feasible_interval(&self) -> (f64, f64) {
        self.feasible
    }

    /// Initial bracket for the root search.
    pub fn bounds(&self) -> (f64, f64) {
        self.bounds
    }

    pub fn validation(&self) -> (&ValidationReport, &ValidationReport) {
        (&self.u_report, &self.v_report)
    }

    /// Same scenario with both risks spread-scaled by `eps` about their
    /// means. Means are unchanged, variances scale by `eps²`.
    pub fn with_risk_scale(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::config(format!("risk scale must be positive, got {eps}")));
        }
        let mut config = self.config.clone();
        config.income = config.income.spread_scaled(self.income_mean, eps);
        config.background = config.background.spread_scaled(self.background_mean, eps);
        Self::with_reports(config, self.u_report.clone(), self.v_report.clone())
    }

    fn check_saving(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.feasible;
        if s >= lo && s <= hi {
            Ok(())
        } else {
            Err(Error::domain(format!("saving {s} outside feasible interval [{lo}, {hi}]")))
        }
    }

    /// Second-period expectation of `g(y + s, x)` in `situation`; absent
    /// risks sit at their means.
    pub fn second_period_expectation<G>(&self, situation: Situation, s: f64, mut g: G) -> Result<f64>
    where
        G: FnMut(f64, f64) -> Result<f64>,
    {
        let f = &self.config.weighting;
        let q = &self.quad;
        let inc = if situation.income_risky() { Some(&self.config.income) } else { None };
        let bg = if situation.background_risky() { Some(&self.config.background) } else { None };
        let (ym, xm) = (self.income_mean, self.background_mean);
        match (inc, bg) {
            (None, None) => g(ym + s, xm),
            (None, Some(Risk::Random(x))) => x.expect_with(&q.inner, |x| g(ym + s, x)),
            (None, Some(Risk::Fuzzy(b))) => b.expect_with(f, &q.gamma, |x| g(ym + s, x)),
            (Some(Risk::Random(y)), None) => y.expect_with(&q.inner, |y| g(y + s, xm)),
            (Some(Risk::Fuzzy(a)), None) => a.expect_with(f, &q.gamma, |y| g(y + s, xm)),
            (Some(Risk::Fuzzy(a)), Some(Risk::Random(x))) => {
                expect_pair(Orientation::FuzzyRandom, f, a, x, q, |y, x| g(y + s, x))
            }
            (Some(Risk::Random(y)), Some(Risk::Fuzzy(b))) => {
                expect_pair(Orientation::RandomFuzzy, f, b, y, q, |y, x| g(y + s, x))
            }
            (Some(Risk::Random(y)), Some(Risk::Random(x))) => {
                y.expect_with(&q.inner, |yv| x.expect_with(&q.inner, |xv| g(yv + s, xv)))
            }
            (Some(Risk::Fuzzy(_)), Some(Risk::Fuzzy(_))) => {
                Err(Error::Unsupported("two fuzzy risks".into()))
            }
        }
    }

    /// `E[v_1(y + s, x)]` in `situation`.
    pub fn expected_marginal(&self, situation: Situation, s: f64) -> Result<f64> {
        self.check_saving(s)?;
        let v = &self.config.v;
        self.second_period_expectation(situation, s, |y, x| v.derivative(V1, y, x))
    }

    /// `u(y0 - s, x0) + E[v(y + s, x)]`.
    pub fn lifetime_utility(&self, situation: Situation, s: f64) -> Result<f64> {
        self.check_saving(s)?;
        let c = &self.config;
        let first = c.u.value(c.y0 - s, c.x0)?;
        let v = &c.v;
        Ok(first + self.second_period_expectation(situation, s, |y, x| v.value(y, x))?)
    }

    /// `-u_1(y0 - s, x0) + E[v_1(y + s, x)]`, with the analytic partial under
    /// the integral.
    pub fn lifetime_utility_derivative(&self, situation: Situation, s: f64) -> Result<f64> {
        self.check_saving(s)?;
        let c = &self.config;
        Ok(-c.u.derivative(V1, c.y0 - s, c.x0)? + self.expected_marginal(situation, s)?)
    }

    /// `u_11(y0 - s, x0) + E[v_11(y + s, x)]`.
    pub fn lifetime_utility_second_derivative(&self, situation: Situation, s: f64) -> Result<f64> {
        self.check_saving(s)?;
        let c = &self.config;
        let v = &c.v;
        Ok(c.u.derivative(V11, c.y0 - s, c.x0)?
            + self.second_period_expectation(situation, s, |y, x| v.derivative(V11, y, x))?)
    }

    /// Optimal saving in one situation.
    pub fn solve(&self, situation: Situation) -> Result<SavingSolution> {
        self.solve_inner(situation).map_err(|e| e.in_situation(situation.label()))
    }

    fn solve_inner(&self, situation: Situation) -> Result<SavingSolution> {
        let c = &self.config;
        let tol = c.solver.tolerance;
        let d = |s: f64| self.lifetime_utility_derivative(situation, s);
        let scale = |s: f64| {
            c.u.derivative(V1, c.y0 - s, c.x0)
                .map(|u1| u1.abs().max(1.0))
                .unwrap_or(1.0)
        };

        let (mut lo, mut hi) = self.bounds;
        let (mut d_lo, mut d_hi) = (d(lo)?, d(hi)?);
        // The derivative is decreasing: expand towards the side holding the root.
        while !(d_lo >= 0.0 && d_hi <= 0.0) {
            let width = hi - lo;
            if d_lo < 0.0 {
                if lo <= self.feasible.0 {
                    break;
                }
                hi = lo;
                d_hi = d_lo;
                lo = (lo - width).max(self.feasible.0);
                d_lo = d(lo)?;
            } else {
                if hi >= self.feasible.1 {
                    break;
                }
                lo = hi;
                d_lo = d_hi;
                hi = (hi + width).min(self.feasible.1);
                d_hi = d(hi)?;
            }
        }
        if !(d_lo >= 0.0 && d_hi <= 0.0) {
            return Err(Error::NoInteriorOptimum { lo, hi, d_lo, d_hi });
        }

        let root = roots::brent(d, lo, hi, d_lo, d_hi, c.solver.max_iterations, |s, ds| {
            ds.abs() <= 1e-3 * tol * scale(s)
        })?;
        let s_opt = root.x;
        let residual = root.fx;
        if residual.abs() > tol * scale(s_opt) {
            return Err(Error::RootNotConverged {
                iterations: root.iterations,
                residual: residual.abs(),
            });
        }
        let second = self.lifetime_utility_second_derivative(situation, s_opt)?;
        if !(second < 0.0) {
            return Err(Error::ModelAssumption(format!(
                "lifetime utility is not strictly concave at s = {s_opt} (second derivative {second:.6e})"
            )));
        }
        Ok(SavingSolution {
            situation,
            s_opt,
            objective: self.lifetime_utility(situation, s_opt)?,
            foc_residual: residual,
            second_derivative: second,
            iterations: root.iterations,
            bracket: (lo, hi),
        })
    }

    /// Point where the sign conditions are evaluated: full-risk optimum
    /// added to the income mean, background at its mean.
    pub fn evaluation_point(&self, s_full: f64) -> (f64, f64) {
        (self.income_mean + s_full, self.background_mean)
    }
}

fn feasible_interval(c: &ScenarioConfig) -> Result<(f64, f64)> {
    let ub = c.u.domain();
    let vb = c.v.domain();
    if !(c.x0 >= ub.x_min && c.x0 <= ub.x_max) {
        return Err(Error::config(format!(
            "x0 = {} outside u's background range [{}, {}]",
            c.x0, ub.x_min, ub.x_max
        )));
    }
    let bg = c.background.support();
    if !(bg.lo >= vb.x_min && bg.hi <= vb.x_max) {
        return Err(Error::config(format!(
            "background support [{}, {}] outside v's background range [{}, {}]",
            bg.lo, bg.hi, vb.x_min, vb.x_max
        )));
    }
    let inc = c.income.support();
    let lo = (c.y0 - ub.y_max).max(vb.y_min - inc.lo) + DOMAIN_MARGIN;
    let hi = (c.y0 - ub.y_min).min(vb.y_max - inc.hi) - DOMAIN_MARGIN;
    if !(lo < hi) {
        return Err(Error::config(format!(
            "no saving level keeps both periods inside the domain boxes (interval [{lo}, {hi}])"
        )));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavingSolution {
    pub situation: Situation,
    pub s_opt: f64,
    pub objective: f64,
    pub foc_residual: f64,
    pub second_derivative: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// Solves a single situation of `scenario`.
pub fn solve_optimal_saving(scenario: &SavingScenario, situation: Situation) -> Result<SavingSolution> {
    scenario.solve(situation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// Sign of `value` with `|value| <= band` reported as zero.
    pub fn of(value: f64, band: f64) -> Sign {
        if value.abs() <= band {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agreement {
    Agree,
    Disagree,
    /// Exactly one of indicator and predicate is zero at tolerance.
    Inconclusive,
}

impl Agreement {
    pub fn label(self) -> &'static str {
        match self {
            Agreement::Agree => "agree",
            Agreement::Disagree => "disagree",
            Agreement::Inconclusive => "inconclusive",
        }
    }

    pub fn between(indicator: Sign, predicate: Sign) -> Agreement {
        match (indicator, predicate) {
            (a, b) if a == b => Agreement::Agree,
            (Sign::Zero, _) | (_, Sign::Zero) => Agreement::Inconclusive,
            _ => Agreement::Disagree,
        }
    }
}

/// Quantity whose sign predicts the indicator: `v_111`, `v_111 Var_inc +
/// v_122 Var_bg`, or `v_122`, evaluated at `point`.
pub fn sign_condition(
    indicator: IndicatorKind,
    v: &BiUtility,
    point: (f64, f64),
    variances: RiskVariances,
) -> Result<f64> {
    let (y, x) = point;
    match indicator {
        IndicatorKind::AddIncome => v.derivative(V111, y, x),
        IndicatorKind::AddBackground => v.derivative(V122, y, x),
        IndicatorKind::TwoSource => Ok(v.derivative(V111, y, x)? * variances.income
            + v.derivative(V122, y, x)? * variances.background),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub kind: IndicatorKind,
    /// `s(a) - s(alternative)`.
    pub value: f64,
    pub sign: Sign,
    pub predicate: f64,
    /// Predicate sign; zero whenever the Taylor gap is inside the zero band.
    pub predicate_sign: Sign,
    /// Predicted derivative of the alternative objective at `s(a)`.
    pub taylor_gap: f64,
    /// Same derivative by quadrature.
    pub exact_gap: f64,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecautionaryReport {
    pub kind: ModelKind,
    /// In [`ModelKind::situations`] order.
    pub solutions: Vec<SavingSolution>,
    pub indicators: Vec<IndicatorReport>,
    pub point: (f64, f64),
    pub variances: RiskVariances,
    pub zero_band: f64,
}

impl PrecautionaryReport {
    pub fn solution(&self, situation: Situation) -> Option<&SavingSolution> {
        self.solutions.iter().find(|s| s.situation == situation)
    }

    pub fn indicator(&self, kind: IndicatorKind) -> Option<&IndicatorReport> {
        self.indicators.iter().find(|i| i.kind == kind)
    }
}

/// Solves every situation of the model and compares the optima.
pub fn precautionary_report(scenario: &SavingScenario) -> Result<PrecautionaryReport> {
    let kind = scenario.kind();
    let band = scenario.config().solver.zero_band();
    let solutions = kind
        .situations()
        .iter()
        .map(|&s| scenario.solve(s))
        .collect::<Result<Vec<_>>>()?;
    let s_of = |sit: Situation| {
        solutions
            .iter()
            .find(|s| s.situation == sit)
            .map(|s| s.s_opt)
            .expect("situation solved for this model")
    };
    let s_full = s_of(Situation::FullRisk);
    let point = scenario.evaluation_point(s_full);
    let variances = scenario.variances();
    let v = scenario.v();
    let full_marginal = scenario
        .expected_marginal(Situation::FullRisk, s_full)
        .map_err(|e| e.in_situation(Situation::FullRisk.label()))?;

    let mut indicators = Vec::new();
    for &ik in kind.indicators() {
        let alt = ik.alternative();
        let value = s_full - s_of(alt);
        let sign = Sign::of(value, band);
        let predicate = sign_condition(ik, v, point, variances)?;
        let taylor_gap = taylor::derivative_gap(ik, v, s_full, scenario.means(), variances)?;
        let predicate_sign = if taylor_gap.abs() <= band {
            Sign::Zero
        } else {
            Sign::of(predicate, 0.0)
        };
        let exact_gap = scenario
            .expected_marginal(alt, s_full)
            .map_err(|e| e.in_situation(alt.label()))?
            - full_marginal;
        indicators.push(IndicatorReport {
            kind: ik,
            value,
            sign,
            predicate,
            predicate_sign,
            taylor_gap,
            exact_gap,
            agreement: Agreement::between(sign, predicate_sign),
        });
    }
    Ok(PrecautionaryReport {
        kind,
        solutions,
        indicators,
        point,
        variances,
        zero_band: band,
    })
}

/// Outcome of the corollary implication on predicate signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryCheck {
    /// Both hypotheses hold and the two-source predicate is non-negative.
    Holds,
    /// A hypothesis fails, so nothing is asserted.
    Vacuous,
    /// Both hypotheses hold but the conclusion fails.
    Violated,
}

/// If the add-income and add-background predicates are both `>= 0`, the
/// two-source predicate must be `>= 0`.
pub fn corollary_from_predicates(add_income: f64, add_background: f64, two_source: f64) -> CorollaryCheck {
    if add_income >= 0.0 && add_background >= 0.0 {
        if two_source >= 0.0 {
            CorollaryCheck::Holds
        } else {
            CorollaryCheck::Violated
        }
    } else {
        CorollaryCheck::Vacuous
    }
}

/// Corollary check on a report; the probabilistic model lacks the
/// add-background indicator and is always vacuous.
pub fn corollary_consistency(report: &PrecautionaryReport) -> CorollaryCheck {
    let p = |k| report.indicator(k).map(|i| i.predicate);
    match (
        p(IndicatorKind::AddIncome),
        p(IndicatorKind::AddBackground),
        p(IndicatorKind::TwoSource),
    ) {
        (Some(a), Some(b), Some(t)) => corollary_from_predicates(a, b, t),
        _ => CorollaryCheck::Vacuous,
    }
}

/// Predicates at `point` without solving anything.
pub fn predicates_at(v: &BiUtility, point: (f64, f64), variances: RiskVariances) -> Result<[f64; 3]> {
    Ok([
        sign_condition(IndicatorKind::AddIncome, v, point, variances)?,
        sign_condition(IndicatorKind::TwoSource, v, point, variances)?,
        sign_condition(IndicatorKind::AddBackground, v, point, variances)?,
    ])
}
