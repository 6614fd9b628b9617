//! Seeded random draws of risks, utilities and scenarios.

use rand::Rng;

use mixrisk::fuzzy::{FuzzyNumber, WeightingFunction};
use mixrisk::saving::{ModelKind, Risk, ScenarioConfig, SolverSettings};
use mixrisk::stochastic::RandomVariable;
use mixrisk::utility::{BiUtility, CustomUtility, DomainBox, UtilityFamily};

/// Bivariate cubic `Σ c_ij y^i x^j`, `i + j <= 3`.
#[derive(Debug, Clone)]
pub struct Poly {
    pub coef: Vec<(i32, i32, f64)>,
}

impl Poly {
    pub fn draw(rng: &mut impl Rng) -> Self {
        let mut coef = Vec::new();
        for i in 0..=3 {
            for j in 0..=(3 - i) {
                coef.push((i, j, rng.random_range(-1.0..1.0)));
            }
        }
        Poly { coef }
    }

    pub fn eval(&self, y: f64, x: f64) -> f64 {
        self.coef.iter().map(|&(i, j, c)| c * y.powi(i) * x.powi(j)).sum()
    }
}

/// A smooth test integrand: a cubic or one of the analytic families on a
/// box covering `(0.05, 4)²`.
pub fn draw_integrand(rng: &mut impl Rng) -> Box<dyn Fn(f64, f64) -> f64> {
    match rng.random_range(0..4) {
        0 | 1 => {
            let p = Poly::draw(rng);
            Box::new(move |y, x| p.eval(y, x))
        }
        2 => {
            let (a, b) = (rng.random_range(0.2..3.0), rng.random_range(0.2..3.0));
            Box::new(move |y: f64, x: f64| -(-a * y).exp() - (-b * x).exp())
        }
        _ => {
            let (a, g) = (rng.random_range(0.2..2.0), rng.random_range(0.1..0.9));
            Box::new(move |y: f64, x: f64| -(-a * y).exp() * x.powf(1.0 - g) / (a * (1.0 - g)))
        }
    }
}

pub fn draw_weighting(rng: &mut impl Rng) -> WeightingFunction {
    WeightingFunction::power(rng.random_range(0.0..4.0)).unwrap()
}

/// Fuzzy number with support inside `[lo, hi]`.
pub fn draw_fuzzy(rng: &mut impl Rng, lo: f64, hi: f64) -> FuzzyNumber {
    let w = hi - lo;
    let core_lo = rng.random_range(lo + 0.3 * w..lo + 0.5 * w);
    let core_hi = rng.random_range(core_lo..lo + 0.7 * w);
    let left = rng.random_range(0.0..core_lo - lo);
    let right = rng.random_range(0.0..hi - core_hi);
    match rng.random_range(0..4) {
        0 => FuzzyNumber::rectangular(core_lo, core_hi.max(core_lo + 1e-3)).unwrap(),
        1 => FuzzyNumber::triangular(core_lo, left, right).unwrap(),
        2 => FuzzyNumber::trapezoidal(core_lo, core_hi, left, right).unwrap(),
        _ => {
            let gammas = vec![0.0, 0.3, 0.7, 1.0];
            let lower = gammas.iter().map(|g| core_lo - left * (1.0 - g) * (1.0 - g)).collect();
            let upper = gammas.iter().map(|g| core_hi + right * (1.0 - g)).collect();
            FuzzyNumber::sampled(gammas, lower, upper).unwrap()
        }
    }
}

/// Random variable with support inside `[lo, hi]`.
pub fn draw_random(rng: &mut impl Rng, lo: f64, hi: f64) -> RandomVariable {
    let w = hi - lo;
    match rng.random_range(0..3) {
        0 => {
            let c = rng.random_range(lo..lo + 0.5 * w);
            RandomVariable::uniform(c, rng.random_range(c + 1e-3..hi)).unwrap()
        }
        1 => {
            let n = rng.random_range(2..5);
            let points = (0..n).map(|_| rng.random_range(lo..hi)).collect();
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            RandomVariable::discrete(points, raw.iter().map(|p| p / total).collect()).unwrap()
        }
        _ => RandomVariable::degenerate(rng.random_range(lo..hi)).unwrap(),
    }
}

/// `-e^{-αy} - e^{-βx} - κ e^{-αy-βx}` on the positive quadrant: increasing
/// and strictly concave for `κ > -1/2`, with `v_122 = κ α β² e^{-αy-βx}`
/// taking the sign of `κ`.
pub fn coupled_exponential(alpha: f64, beta: f64, kappa: f64) -> BiUtility {
    let f = move |y: f64, x: f64| -(-alpha * y).exp() - (-beta * x).exp() - kappa * (-alpha * y - beta * x).exp();
    BiUtility::new(
        UtilityFamily::Custom(CustomUtility::new("coupled_exponential", f)),
        DomainBox::new(0.05, 10.0, 0.05, 10.0).unwrap(),
    )
    .unwrap()
}

fn draw_v(rng: &mut impl Rng) -> BiUtility {
    let boxed = |family| BiUtility::new(family, DomainBox::new(-5.0, 10.0, 0.05, 10.0).unwrap()).unwrap();
    match rng.random_range(0..5) {
        0 => boxed(UtilityFamily::CaraCrraProduct {
            alpha: rng.random_range(0.3..2.0),
            gamma: rng.random_range(0.2..0.9),
        })
        .with_override(true),
        1 => boxed(UtilityFamily::CaraAdditive {
            alpha: rng.random_range(0.3..2.0),
            beta: rng.random_range(0.3..2.0),
        }),
        2 => BiUtility::new(UtilityFamily::LogAdditive, DomainBox::new(0.05, 10.0, 0.05, 10.0).unwrap()).unwrap(),
        _ => coupled_exponential(
            rng.random_range(0.3..2.0),
            rng.random_range(0.3..2.0),
            rng.random_range(-0.4..0.8),
        ),
    }
}

/// A solvable mixed scenario of the given kind: log first-period utility,
/// risks on `[0.2, 2]`, random second-period utility.
pub fn draw_scenario(rng: &mut impl Rng, kind: ModelKind) -> ScenarioConfig {
    let (income, background) = match kind {
        ModelKind::MixedI => (Risk::Fuzzy(draw_fuzzy(rng, 0.2, 2.0)), Risk::Random(draw_random(rng, 0.2, 2.0))),
        ModelKind::MixedII => (Risk::Random(draw_random(rng, 0.2, 2.0)), Risk::Fuzzy(draw_fuzzy(rng, 0.2, 2.0))),
        ModelKind::Probabilistic => (Risk::Random(draw_random(rng, 0.2, 2.0)), Risk::Random(draw_random(rng, 0.2, 2.0))),
    };
    ScenarioConfig {
        kind,
        y0: rng.random_range(1.0..4.0),
        x0: rng.random_range(0.5..2.0),
        u: BiUtility::new(UtilityFamily::LogAdditive, DomainBox::new(0.05, 20.0, 0.05, 20.0).unwrap()).unwrap(),
        v: draw_v(rng),
        income,
        background,
        weighting: draw_weighting(rng),
        solver: SolverSettings::default(),
    }
}

/// Redraws until the full-risk problem has an interior optimum; corner
/// solutions fall outside the first-order-condition framework.
pub fn draw_solvable(rng: &mut impl Rng, kind: ModelKind) -> mixrisk::saving::SavingScenario {
    loop {
        let sc = draw_scenario(rng, kind).build().unwrap();
        match sc.solve(mixrisk::saving::Situation::FullRisk) {
            Ok(_) => return sc,
            Err(e) if e.category() == mixrisk::ErrorCategory::Solver => continue,
            Err(e) => panic!("unexpected failure on {:?}: {e}", sc.config()),
        }
    }
}
