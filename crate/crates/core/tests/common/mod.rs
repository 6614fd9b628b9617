//! Fixture builders shared by the integration tests.
#![allow(dead_code)]

pub mod draws;

use mixrisk::fuzzy::{FuzzyNumber, WeightingFunction};
use mixrisk::saving::{ModelKind, Risk, SavingScenario, ScenarioConfig, SolverSettings};
use mixrisk::stochastic::RandomVariable;
use mixrisk::utility::{BiUtility, DomainBox, UtilityFamily};

pub fn util(family: UtilityFamily, b: (f64, f64, f64, f64)) -> BiUtility {
    BiUtility::new(family, DomainBox::new(b.0, b.1, b.2, b.3).unwrap()).unwrap()
}

pub fn log_u() -> BiUtility {
    util(UtilityFamily::LogAdditive, (0.05, 20.0, 0.05, 20.0))
}

pub fn cara_crra(alpha: f64, gamma: f64) -> BiUtility {
    util(UtilityFamily::CaraCrraProduct { alpha, gamma }, (-5.0, 10.0, 0.05, 5.0)).with_override(true)
}

pub fn cara_additive(alpha: f64, beta: f64) -> BiUtility {
    util(UtilityFamily::CaraAdditive { alpha, beta }, (-10.0, 20.0, -10.0, 20.0))
}

pub fn quadratic(q: f64) -> BiUtility {
    util(UtilityFamily::Quadratic { q_y: q, q_x: q }, (-2.0, 4.0, -2.0, 4.0))
}

pub fn config(kind: ModelKind, y0: f64, x0: f64, u: BiUtility, v: BiUtility, income: Risk, background: Risk) -> ScenarioConfig {
    ScenarioConfig {
        kind,
        y0,
        x0,
        u,
        v,
        income,
        background,
        weighting: WeightingFunction::default(),
        solver: SolverSettings::default(),
    }
}

pub fn fuzzy(a: FuzzyNumber) -> Risk {
    Risk::Fuzzy(a)
}

pub fn random(x: RandomVariable) -> Risk {
    Risk::Random(x)
}

/// Mixed-I threshold case: log u, cara-crra v, A = [c, d], X ~ U[c, d].
pub fn threshold_scenario(alpha: f64, gamma: f64, c: f64, d: f64) -> SavingScenario {
    config(
        ModelKind::MixedI,
        2.0,
        1.0,
        log_u(),
        cara_crra(alpha, gamma),
        fuzzy(FuzzyNumber::rectangular(c, d).unwrap()),
        random(RandomVariable::uniform(c, d).unwrap()),
    )
    .build()
    .unwrap()
}

/// Certainty-shaped scenario with degenerate risks at `a` and `xbar`.
pub fn certainty_scenario(y0: f64, a: f64, x0: f64, xbar: f64, u: BiUtility, v: BiUtility) -> SavingScenario {
    config(
        ModelKind::MixedI,
        y0,
        x0,
        u,
        v,
        fuzzy(FuzzyNumber::constant(a).unwrap()),
        random(RandomVariable::degenerate(xbar).unwrap()),
    )
    .build()
    .unwrap()
}
