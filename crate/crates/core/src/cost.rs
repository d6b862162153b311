//! Hardware cost and modeled run time for transpose-heavy iterative
//! algorithms.
//!
//! Cost is measured in wires: `γ = P·(ρ + d)` where `ρ` is the price of a
//! processor in wire units. Quantities stay exact rationals wherever the
//! formulas allow.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(x: i128) -> Rational {
    Rational::from_integer(x)
}

/// `α(N) = β·N^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    #[serde(with = "rational_serde")]
    pub beta: Rational,
    pub power: u32,
}

impl Monomial {
    pub fn eval(&self, n: i128) -> Rational {
        self.beta * int(n.pow(self.power))
    }
}

/// One machine design and the workload it runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostParams {
    pub processors: i64,
    pub degree: i64,
    /// Average diameter, not rounded.
    #[serde(with = "rational_serde")]
    pub diameter: Rational,
    /// Processor price over wire price.
    #[serde(with = "rational_serde")]
    pub rho: Rational,
    /// Matrix dimension.
    pub n: i64,
    /// Iterations.
    pub m: i64,
    pub alpha: Monomial,
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        let positive = self.processors > 0
            && self.degree > 0
            && self.n > 0
            && self.m > 0
            && self.diameter > Rational::zero()
            && self.rho >= Rational::zero()
            && self.alpha.beta > Rational::zero();
        if positive {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "cost parameters must be positive: {self:?}"
            )))
        }
    }

    pub fn wires(&self) -> i128 {
        i128::from(self.processors) * i128::from(self.degree)
    }
}

/// `γ = P·(ρ + d)`.
pub fn network_cost(processors: i64, degree: i64, rho: Rational) -> Rational {
    int(i128::from(processors)) * (rho + int(i128::from(degree)))
}

/// Where the transpose time comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMode {
    /// A simulated or scheduled `τ`.
    Measured(u64),
    /// The optimistic estimate `τ ≈ D·P/d`.
    Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelTimes {
    #[serde(with = "rational_serde")]
    pub tau: Rational,
    #[serde(with = "rational_serde")]
    pub compute: Rational,
    #[serde(with = "rational_serde")]
    pub communicate: Rational,
    #[serde(with = "rational_serde")]
    pub total: Rational,
    /// Set when `tau` is the ideal estimate rather than a measurement.
    pub optimistic: bool,
}

/// `T_p = N·M·α(N)/P`, `T_c = M·(N/P)²·τ` and their sum.
pub fn model_times(params: &CostParams, tau: TauMode) -> Result<ModelTimes> {
    params.validate()?;
    let p = int(i128::from(params.processors));
    let (tau, optimistic) = match tau {
        TauMode::Measured(t) => (int(i128::from(t)), false),
        TauMode::Ideal => (params.diameter * p / int(i128::from(params.degree)), true),
    };
    let compute = int(i128::from(params.n) * i128::from(params.m))
        * params.alpha.eval(i128::from(params.n))
        / p;
    let block = int(i128::from(params.n)) / p;
    let communicate = int(i128::from(params.m)) * block * block * tau;
    Ok(ModelTimes {
        tau,
        compute,
        communicate,
        total: compute + communicate,
        optimistic,
    })
}

/// `x^(1/k)` when it is rational.
fn exact_root(x: Rational, k: u32) -> Option<Rational> {
    fn int_root(v: i128, k: u32) -> Option<i128> {
        if v < 0 {
            return None;
        }
        let guess = (v as f64).powf(1.0 / f64::from(k)).round() as i128;
        (guess.saturating_sub(1)..=guess + 1).find(|r| *r >= 0 && r.checked_pow(k) == Some(v))
    }
    Some(Rational::new(
        int_root(*x.numer(), k)?,
        int_root(*x.denom(), k)?,
    ))
}

fn to_f64(x: Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regime {
    pub lambda: f64,
    pub total: f64,
    /// `total` as a rational when `γ^(1/(D+1))` is rational.
    #[serde(with = "opt_rational_serde")]
    pub total_exact: Option<Rational>,
    /// `β·γ^(1/(D+1)) + D`, reported for linear `α` only.
    pub reduced_objective: Option<f64>,
    #[serde(with = "opt_rational_serde")]
    pub reduced_objective_exact: Option<Rational>,
    /// Whether `d > ρ`, the premise of the approximation.
    pub assumption_holds: bool,
}

/// `T = N·M·α(N)·λ^(D/(D+1)) + D·N²·λ` with `λ = 1/γ`.
pub fn regime_time(params: &CostParams, gamma: Rational) -> Result<Regime> {
    params.validate()?;
    if gamma <= Rational::one() {
        return Err(Error::Domain(format!("gamma must exceed 1, got {gamma}")));
    }
    let d = params.diameter;
    let work =
        int(i128::from(params.n) * i128::from(params.m)) * params.alpha.eval(i128::from(params.n));
    let dn2 = d * int(i128::from(params.n) * i128::from(params.n));
    let lambda = gamma.recip();

    let exponent = to_f64(d) / (to_f64(d) + 1.0);
    let total = to_f64(work) * to_f64(lambda).powf(exponent) + to_f64(dn2 * lambda);

    // γ^(1/(D+1)) exactly, available when D is an integer and the root is
    // rational; λ^(D/(D+1)) = root / γ.
    let root = d
        .is_integer()
        .then(|| u32::try_from(d.to_integer() + 1).ok())
        .flatten()
        .and_then(|k| exact_root(gamma, k));
    let total_exact = root.map(|r| work * r / gamma + dn2 * lambda);

    let linear = params.alpha.power == 1;
    let reduced_objective = linear.then(|| {
        to_f64(params.alpha.beta) * to_f64(gamma).powf(1.0 / (to_f64(d) + 1.0)) + to_f64(d)
    });
    let reduced_objective_exact = if linear {
        root.map(|r| params.alpha.beta * r + d)
    } else {
        None
    };
    Ok(Regime {
        lambda: to_f64(lambda),
        total: total_exact.map(to_f64).unwrap_or(total),
        total_exact,
        reduced_objective: reduced_objective_exact.map(to_f64).or(reduced_objective),
        reduced_objective_exact,
        assumption_holds: int(i128::from(params.degree)) > params.rho,
    })
}

/// A named design in a comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub name: String,
    #[serde(flatten)]
    pub params: CostParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ranked {
    pub name: String,
    pub processors: i64,
    pub degree: i64,
    pub wires: i128,
    pub within_budget: bool,
    #[serde(with = "rational_serde")]
    pub gamma: Rational,
    pub times: ModelTimes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    /// Candidates within budget first (most processors, then smaller
    /// modeled time), then the rest in input order.
    pub ranking: Vec<Ranked>,
    pub winner: Option<String>,
    pub explanation: String,
}

/// Keeps designs with `P·d < wire_budget` and prefers the one with the
/// most processors; equal processor counts fall back to modeled time.
pub fn compare_networks(
    candidates: &[Candidate],
    wire_budget: i128,
    tau: TauMode,
) -> Result<Comparison> {
    let mut fits = Vec::new();
    let mut over = Vec::new();
    for c in candidates {
        let times = model_times(&c.params, tau)?;
        let wires = c.params.wires();
        let ranked = Ranked {
            name: c.name.clone(),
            processors: c.params.processors,
            degree: c.params.degree,
            wires,
            within_budget: wires < wire_budget,
            gamma: network_cost(c.params.processors, c.params.degree, c.params.rho),
            times,
        };
        if ranked.within_budget {
            fits.push(ranked);
        } else {
            over.push(ranked);
        }
    }
    fits.sort_by(|a, b| {
        b.processors
            .cmp(&a.processors)
            .then_with(|| a.times.total.cmp(&b.times.total))
    });
    let winner = fits.first().map(|r| r.name.clone());
    let explanation = match &winner {
        Some(name) => format!(
            "{name} has the most processors among {} design(s) under {wire_budget} wires",
            fits.len()
        ),
        None => format!("every design needs at least {wire_budget} wires"),
    };
    fits.extend(over);
    Ok(Comparison {
        ranking: fits,
        winner,
        explanation,
    })
}

/// Rationals serialize as `"p/q"` strings, or plain integers when whole.
mod rational_serde {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        if let Some(i) = x
            .is_integer()
            .then(|| i64::try_from(x.to_integer()).ok())
            .flatten()
        {
            s.serialize_i64(i)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Float(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Rational::from_integer(i128::from(i))),
            Raw::Float(f) => {
                let r = num_rational::Ratio::<i64>::approximate_float(f)
                    .ok_or_else(|| D::Error::custom(format!("{f} is not representable")))?;
                Ok(Rational::new(
                    i128::from(*r.numer()),
                    i128::from(*r.denom()),
                ))
            }
            Raw::Text(t) => t
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad rational {t:?}"))),
        }
    }
}

mod opt_rational_serde {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(r) => super::rational_serde::serialize(r, s),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(processors: i64, degree: i64) -> CostParams {
        CostParams {
            processors,
            degree,
            diameter: int(2),
            rho: int(10),
            n: 1024,
            m: 1,
            alpha: Monomial {
                beta: int(1),
                power: 1,
            },
        }
    }

    #[test]
    fn cost_arithmetic() {
        assert_eq!(network_cost(1024, 10, int(100)), int(112_640));
        assert_eq!(network_cost(1, 1, int(0)), int(1));
        assert_eq!(
            network_cost(512, 210, int(10)),
            network_cost(1024, 100, int(10))
        );
    }

    #[test]
    fn one_column_per_processor() {
        let p = CostParams {
            processors: 8,
            n: 8,
            ..params(8, 3)
        };
        let t = model_times(&p, TauMode::Measured(4)).unwrap();
        assert_eq!(t.compute, int(8));
        assert_eq!(t.communicate, int(4));
        assert_eq!(t.total, int(12));
        assert!(!t.optimistic);
    }

    #[test]
    fn ideal_tau_on_a_perfect_power() {
        // P = d^D = 4^3
        let p = CostParams {
            diameter: int(3),
            n: 256,
            m: 2,
            ..params(64, 4)
        };
        let t = model_times(&p, TauMode::Ideal).unwrap();
        assert!(t.optimistic);
        assert_eq!(t.tau, int(48));
        assert_eq!(t.communicate, int(2 * 256 * 256 * 3) / int(64 * 4));
    }

    #[test]
    fn doubling_processors_scales_both_terms() {
        let small = model_times(&params(64, 4), TauMode::Measured(5)).unwrap();
        let large = model_times(&params(128, 4), TauMode::Measured(5)).unwrap();
        assert_eq!(small.compute, large.compute * int(2));
        assert_eq!(small.communicate, large.communicate * int(4));
    }

    #[test]
    fn reduced_objective_prefers_larger_diameter() {
        let at = |d: i128| {
            let p = CostParams {
                diameter: int(d),
                n: 1,
                ..params(64, 4)
            };
            regime_time(&p, int(4096)).unwrap()
        };
        assert_eq!(at(1).reduced_objective_exact, Some(int(65)));
        assert_eq!(at(3).reduced_objective_exact, Some(int(11)));
        assert_eq!(at(3).reduced_objective, Some(11.0));
        // N = M = β = 1: T = γ^(-D/(D+1)) + D/γ
        assert_eq!(
            at(1).total_exact,
            Some(int(1) / int(64) + int(1) / int(4096))
        );
        // 4096 = 16³, so D = 2 still has a rational root; D = 4 does not.
        assert_eq!(at(2).reduced_objective_exact, Some(int(18)));
        assert!(at(4).total_exact.is_none());
        assert!((at(4).total - (4096f64.powf(-4.0 / 5.0) + 4.0 / 4096.0)).abs() < 1e-15);
    }

    #[test]
    fn regime_domain_and_flags() {
        let p = params(64, 4);
        assert!(matches!(regime_time(&p, int(1)), Err(Error::Domain(_))));
        let r = regime_time(&p, int(2)).unwrap();
        assert!(r.lambda < 1.0);
        assert!(!r.assumption_holds);
        let wide = CostParams { rho: int(2), ..p };
        assert!(regime_time(&wide, int(2)).unwrap().assumption_holds);
        let quadratic = CostParams {
            alpha: Monomial {
                beta: int(1),
                power: 2,
            },
            ..params(64, 4)
        };
        assert!(regime_time(&quadratic, int(9))
            .unwrap()
            .reduced_objective
            .is_none());
    }

    #[test]
    fn larger_machine_wins_under_budget() {
        let a = Candidate {
            name: "a".into(),
            params: params(4096, 8),
        };
        let b = Candidate {
            name: "b".into(),
            params: params(1024, 16),
        };
        let verdict = compare_networks(&[b.clone(), a.clone()], 40_000, TauMode::Ideal).unwrap();
        assert_eq!(verdict.winner.as_deref(), Some("a"));

        let verdict = compare_networks(&[a.clone(), b.clone()], 20_000, TauMode::Ideal).unwrap();
        assert_eq!(verdict.winner.as_deref(), Some("b"));
        assert!(!verdict.ranking[1].within_budget);

        let verdict = compare_networks(&[a, b], 100, TauMode::Ideal).unwrap();
        assert!(verdict.winner.is_none());
    }

    #[test]
    fn equal_processor_counts_fall_back_to_time() {
        let slow = Candidate {
            name: "slow".into(),
            params: CostParams {
                diameter: int(5),
                ..params(256, 4)
            },
        };
        let fast = Candidate {
            name: "fast".into(),
            params: CostParams {
                diameter: int(4),
                ..params(256, 4)
            },
        };
        let verdict = compare_networks(&[slow, fast], 10_000, TauMode::Ideal).unwrap();
        assert_eq!(verdict.winner.as_deref(), Some("fast"));
    }

    #[test]
    fn rationals_round_trip_through_json() {
        let p = CostParams {
            rho: Rational::new(5, 2),
            ..params(8, 3)
        };
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"5/2\""));
        let back: CostParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let from_float: CostParams = serde_json::from_str(&text.replace("\"5/2\"", "2.5")).unwrap();
        assert_eq!(from_float.rho, Rational::new(5, 2));
    }

    proptest! {
        #[test]
        fn cost_is_strictly_increasing(p in 1i64..5000, d in 1i64..64, rho in 0i128..1000) {
            let base = network_cost(p, d, int(rho));
            prop_assert!(network_cost(p + 1, d, int(rho)) > base);
            prop_assert!(network_cost(p, d + 1, int(rho)) > base);
            prop_assert!(network_cost(p, d, int(rho + 1)) > base);
        }

        #[test]
        fn communication_is_linear_in_tau(tau in 1u64..1000, p in 1i64..512) {
            let one = model_times(&params(p, 3), TauMode::Measured(tau)).unwrap();
            let two = model_times(&params(p, 3), TauMode::Measured(2 * tau)).unwrap();
            prop_assert_eq!(two.communicate, one.communicate * int(2));
        }

        #[test]
        fn verdict_depends_only_on_the_price_ratio(scale in 1i128..100, pa in 1i64..200, pb in 1i64..200) {
            // Scaling both prices leaves ρ, and with it every quantity, unchanged.
            let rho = Rational::new(30 * scale, 3 * scale);
            let mk = |name: &str, p| Candidate { name: name.into(), params: CostParams { rho, ..params(p, 4) } };
            let reference = Candidate { name: "a".into(), params: CostParams { rho: int(10), ..params(pa, 4) } };
            let scaled = compare_networks(&[mk("a", pa), mk("b", pb)], 1000, TauMode::Ideal).unwrap();
            let plain = compare_networks(
                &[reference, Candidate { name: "b".into(), params: CostParams { rho: int(10), ..params(pb, 4) } }],
                1000,
                TauMode::Ideal,
            )
            .unwrap();
            prop_assert_eq!(scaled, plain);
        }
    }
}
