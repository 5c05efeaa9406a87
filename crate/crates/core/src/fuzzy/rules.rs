use serde::{Deserialize, Serialize};

use super::membership::{It2Set, Shoulder, TriangularSet};
use super::reduce::{defuzzify, km_type_reduce, FiringInterval};
use crate::{Error, Result};

pub const SETS_PER_INPUT: usize = 5;
pub const RULE_COUNT: usize = SETS_PER_INPUT * SETS_PER_INPUT;

/// Parameters of the 5×5 PD rule base, loadable from the `[controller]`
/// table of the harness config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    /// Inputs are clamped to `±universe` degrees.
    pub universe: f64,
    pub error_apexes: [f64; SETS_PER_INPUT],
    pub derror_apexes: [f64; SETS_PER_INPUT],
    /// Distance from apex to each foot of every triangle.
    pub half_width: f64,
    pub singletons: [f64; SETS_PER_INPUT],
    /// Singleton index per `(error set, delta-error set)`. When absent the
    /// anti-diagonal grid `clamp(i + j - 4, -2, 2) + 2` is used.
    pub consequents: Option<[[usize; SETS_PER_INPUT]; SETS_PER_INPUT]>,
    pub rudder_limit: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            universe: 60.0,
            error_apexes: [-60.0, -30.0, 0.0, 30.0, 60.0],
            derror_apexes: [-60.0, -30.0, 0.0, 30.0, 60.0],
            half_width: 30.0,
            singletons: [-45.0, -22.5, 0.0, 22.5, 45.0],
            consequents: None,
            rudder_limit: 45.0,
        }
    }
}

/// Anti-diagonal PD grid: error and delta-error indices add.
pub fn default_consequents() -> [[usize; SETS_PER_INPUT]; SETS_PER_INPUT] {
    let mut grid = [[0; SETS_PER_INPUT]; SETS_PER_INPUT];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (((i + j) as i64 - 4).clamp(-2, 2) + 2) as usize;
        }
    }
    grid
}

fn input_sets(apexes: &[f64; SETS_PER_INPUT], half_width: f64, fou: f64) -> Result<[It2Set; SETS_PER_INPUT]> {
    if apexes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRuleBase(format!("apexes {apexes:?} must be strictly increasing")));
    }
    let mut sets = Vec::with_capacity(SETS_PER_INPUT);
    for (i, &apex) in apexes.iter().enumerate() {
        let shoulder = match i {
            0 => Shoulder::Left,
            i if i == SETS_PER_INPUT - 1 => Shoulder::Right,
            _ => Shoulder::None,
        };
        let base = TriangularSet::with_shoulder(apex - half_width, apex, apex + half_width, shoulder)?;
        sets.push(It2Set::from_fou(base, fou)?);
    }
    Ok(sets.try_into().expect("exactly five sets"))
}

impl ControllerConfig {
    /// Builds the rule base for one FOU size (0 gives the type-1 controller).
    pub fn build(&self, fou: f64) -> Result<RuleBase> {
        let error_sets = input_sets(&self.error_apexes, self.half_width, fou)?;
        let derror_sets = input_sets(&self.derror_apexes, self.half_width, fou)?;
        RuleBase::new(
            error_sets,
            derror_sets,
            self.consequents.unwrap_or_else(default_consequents),
            self.singletons,
            self.universe,
            self.rudder_limit,
        )
    }
}

/// Two-input, 25-rule interval type-2 rule base with singleton outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    error_sets: [It2Set; SETS_PER_INPUT],
    derror_sets: [It2Set; SETS_PER_INPUT],
    consequents: [[usize; SETS_PER_INPUT]; SETS_PER_INPUT],
    singletons: [f64; SETS_PER_INPUT],
    universe: f64,
    rudder_limit: f64,
}

impl RuleBase {
    pub fn new(
        error_sets: [It2Set; SETS_PER_INPUT],
        derror_sets: [It2Set; SETS_PER_INPUT],
        consequents: [[usize; SETS_PER_INPUT]; SETS_PER_INPUT],
        singletons: [f64; SETS_PER_INPUT],
        universe: f64,
        rudder_limit: f64,
    ) -> Result<Self> {
        if singletons.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidRuleBase(format!(
                "singletons {singletons:?} must be strictly increasing"
            )));
        }
        if consequents.iter().flatten().any(|&c| c >= SETS_PER_INPUT) {
            return Err(Error::InvalidRuleBase("consequent index out of range 0..4".into()));
        }
        if !(universe > 0.0) || !(rudder_limit > 0.0) {
            return Err(Error::InvalidRuleBase(format!(
                "universe {universe} and rudder limit {rudder_limit} must be positive"
            )));
        }
        Ok(Self { error_sets, derror_sets, consequents, singletons, universe, rudder_limit })
    }

    /// Default rule base for a FOU size.
    pub fn with_fou(fou: f64) -> Result<Self> {
        ControllerConfig::default().build(fou)
    }

    pub fn error_sets(&self) -> &[It2Set; SETS_PER_INPUT] {
        &self.error_sets
    }

    pub fn derror_sets(&self) -> &[It2Set; SETS_PER_INPUT] {
        &self.derror_sets
    }

    pub fn consequents(&self) -> &[[usize; SETS_PER_INPUT]; SETS_PER_INPUT] {
        &self.consequents
    }

    pub fn singletons(&self) -> &[f64; SETS_PER_INPUT] {
        &self.singletons
    }

    pub fn universe(&self) -> f64 {
        self.universe
    }

    pub fn rudder_limit(&self) -> f64 {
        self.rudder_limit
    }

    /// Firing intervals of all 25 rules under the minimum t-norm, in
    /// row-major `(error set, delta-error set)` order.
    pub fn fire_rules(&self, error: f64, derror: f64) -> [FiringInterval; RULE_COUNT] {
        let e = self.error_sets.map(|s| s.membership(error));
        let d = self.derror_sets.map(|s| s.membership(derror));
        std::array::from_fn(|k| {
            let (i, j) = (k / SETS_PER_INPUT, k % SETS_PER_INPUT);
            FiringInterval {
                lower: e[i].lower.min(d[j].lower),
                upper: e[i].upper.min(d[j].upper),
                consequent: self.singletons[self.consequents[i][j]],
            }
        })
    }

    /// Rudder command in degrees for a bearing error and its change.
    /// Inputs are clamped to the universe; an all-silent firing gives 0.
    pub fn step(&self, error: f64, derror: f64) -> f64 {
        let clamp = |v: f64| {
            if v.is_nan() {
                0.0
            } else {
                v.clamp(-self.universe, self.universe)
            }
        };
        let firings = self.fire_rules(clamp(error), clamp(derror));
        match km_type_reduce(&firings) {
            Ok(interval) => defuzzify(interval, self.rudder_limit),
            Err(_) => 0.0,
        }
    }
}
