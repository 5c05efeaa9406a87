use crate::{Error, Result};

/// Firing strength interval of one rule together with its singleton
/// consequent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiringInterval {
    pub lower: f64,
    pub upper: f64,
    pub consequent: f64,
}

/// Type-reduced output interval `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputInterval {
    pub left: f64,
    pub right: f64,
}

impl OutputInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Karnik-Mendel type reduction over singleton consequents.
///
/// Finds the minimum and maximum of `sum(f_i * y_i) / sum(f_i)` over
/// `f_i` in `[lower_i, upper_i]` by iterating the switch point.
pub fn km_type_reduce(firings: &[FiringInterval]) -> Result<OutputInterval> {
    let mut rules: Vec<FiringInterval> = firings.iter().copied().filter(|f| f.upper > 0.0).collect();
    if rules.is_empty() {
        return Err(Error::AllRulesSilent);
    }
    rules.sort_by(|a, b| a.consequent.total_cmp(&b.consequent));
    Ok(OutputInterval {
        left: switch_point_extremum(&rules, Side::Left),
        right: switch_point_extremum(&rules, Side::Right),
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

fn weighted_average(rules: &[FiringInterval], weight: impl Fn(usize, &FiringInterval) -> f64) -> f64 {
    let (num, den) = rules.iter().enumerate().fold((0.0, 0.0), |(n, d), (i, r)| {
        let w = weight(i, r);
        (n + w * r.consequent, d + w)
    });
    num / den
}

fn switch_point_extremum(rules: &[FiringInterval], side: Side) -> f64 {
    if rules.len() == 1 {
        return rules[0].consequent;
    }
    let last_switch = rules.len() - 2;
    let mut y = weighted_average(rules, |_, r| 0.5 * (r.lower + r.upper));
    let mut prev_switch = None;
    // KM terminates in at most n switch-point updates; the bound guards
    // against floating-point cycling between two adjacent switch points.
    for _ in 0..=rules.len() + 1 {
        // switch point k satisfies y_k <= y <= y_{k+1}
        let k = rules.partition_point(|r| r.consequent <= y).saturating_sub(1).min(last_switch);
        if prev_switch == Some(k) {
            break;
        }
        prev_switch = Some(k);
        y = weighted_average(rules, |i, r| match (side, i <= k) {
            (Side::Left, true) | (Side::Right, false) => r.upper,
            _ => r.lower,
        });
    }
    y
}

/// Midpoint defuzzification clamped to `±limit`.
pub fn defuzzify(interval: OutputInterval, limit: f64) -> f64 {
    interval.midpoint().clamp(-limit, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fi(lower: f64, upper: f64, consequent: f64) -> FiringInterval {
        FiringInterval { lower, upper, consequent }
    }

    #[test]
    fn crisp_firings_reduce_to_weighted_average() {
        let out = km_type_reduce(&[fi(0.5, 0.5, 0.0), fi(0.5, 0.5, 100.0)]).unwrap();
        assert!((out.left - 50.0).abs() < 1e-12);
        assert!((out.right - 50.0).abs() < 1e-12);
    }

    #[test]
    fn two_rule_interval() {
        // endpoint enumeration: min at (0.6, 0.4) = 40, max at (0.2, 0.8) = 80
        let out = km_type_reduce(&[fi(0.2, 0.6, 0.0), fi(0.4, 0.8, 100.0)]).unwrap();
        assert!((out.left - 40.0).abs() < 1e-12);
        assert!((out.right - 80.0).abs() < 1e-12);
    }

    #[test]
    fn constant_consequents() {
        let rules: Vec<_> = (0..7).map(|i| fi(0.1 * i as f64, 0.1 * i as f64 + 0.2, 12.5)).collect();
        let out = km_type_reduce(&rules).unwrap();
        assert!((out.left - 12.5).abs() < 1e-12);
        assert!((out.right - 12.5).abs() < 1e-12);
    }

    #[test]
    fn unsorted_input_is_handled() {
        let out = km_type_reduce(&[fi(0.4, 0.8, 100.0), fi(0.2, 0.6, 0.0)]).unwrap();
        assert!((out.left - 40.0).abs() < 1e-12);
        assert!((out.right - 80.0).abs() < 1e-12);
    }

    #[test]
    fn silent_rules_error() {
        assert!(matches!(
            km_type_reduce(&[fi(0.0, 0.0, 1.0), fi(0.0, 0.0, 2.0)]),
            Err(Error::AllRulesSilent)
        ));
        assert!(matches!(km_type_reduce(&[]), Err(Error::AllRulesSilent)));
    }

    #[test]
    fn zero_lower_bounds() {
        // only upper grades: left extreme puts all weight on the lowest rule
        let out = km_type_reduce(&[fi(0.0, 1.0, -10.0), fi(0.0, 1.0, 10.0)]).unwrap();
        assert_eq!(out.left, -10.0);
        assert_eq!(out.right, 10.0);
    }

    #[test]
    fn defuzzify_examples() {
        assert_eq!(defuzzify(OutputInterval { left: 40.0, right: 80.0 }, 45.0), 45.0);
        assert_eq!(defuzzify(OutputInterval { left: 40.0, right: 80.0 }, 90.0), 60.0);
        assert_eq!(defuzzify(OutputInterval { left: -45.0, right: -45.0 }, 45.0), -45.0);
        assert_eq!(defuzzify(OutputInterval { left: -200.0, right: 200.0 }, 45.0), 0.0);
        assert_eq!(defuzzify(OutputInterval { left: 100.0, right: 200.0 }, 45.0), 45.0);
        assert_eq!(defuzzify(OutputInterval { left: -300.0, right: -200.0 }, 45.0), -45.0);
    }
}
