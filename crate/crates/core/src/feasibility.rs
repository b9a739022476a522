//! Necessary existence conditions for splitting designs, in exact arithmetic.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{binomial, int, pow, ratio};
use crate::design::DesignParams;
use crate::error::{input, Result};

/// Three-valued outcome for conditions that only apply to some parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    /// `Fails` is the only non-passing verdict.
    pub fn passes(self) -> bool {
        self != Verdict::Fails
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotApplicable => "n/a",
        })
    }
}

/// `lambda * C(v-s, t-s)` and `c^(t-s) * C(u-s, t-s)`.
fn lambda_s_parts(p: &DesignParams, s: u64) -> (BigUint, BigUint) {
    let num = BigUint::from(p.lambda) * binomial(p.v - s, p.t - s);
    let den = pow(p.c, p.t - s) * binomial(p.u - s, p.t - s);
    (num, den)
}

fn lambda_s(p: &DesignParams, s: u64) -> BigRational {
    let (num, den) = lambda_s_parts(p, s);
    ratio(num, den)
}

/// Number of blocks qualifying for any fixed s-subset,
/// `lambda * C(v-s, t-s) / (c^(t-s) * C(u-s, t-s))`. Not necessarily integral.
pub fn replication_number(params: &DesignParams, s: u64) -> Result<BigRational> {
    if s == 0 || s > params.t {
        return Err(input(format!("s = {s} outside 1..={}", params.t)));
    }
    Ok(lambda_s(params, s))
}

/// Block count implied by the other parameters (`lambda_0`).
pub fn implied_blocks(params: &DesignParams) -> BigRational {
    lambda_s(params, 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterRelations {
    /// `b * l = v * r`
    pub a: bool,
    /// `C(v,t) * lambda = b * c^t * C(u,t)`
    pub b: bool,
    /// `r * c^(t-1) * (u-1) = lambda_2 * (v-1)`, as printed in the literature
    /// for general `t >= 2`. Only trustworthy at `t = 2`.
    pub c: Verdict,
    /// `r * c * (u-1) = lambda_2 * (v-1)`: the pair-counting identity that
    /// brute-force counts confirm for every `t >= 2`.
    pub pair_identity: Verdict,
}

fn relations_for(p: &DesignParams, b: &BigRational) -> ParameterRelations {
    let r = lambda_s(p, 1);
    let a = b * int(p.l()) == &r * int(p.v);
    let lhs_b = int(binomial(p.v, p.t) * BigUint::from(p.lambda));
    let rhs_b = b * int(pow(p.c, p.t) * binomial(p.u, p.t));
    let (c, pair_identity) = if p.t >= 2 {
        let lambda2 = lambda_s(p, 2);
        let rhs = &lambda2 * int(p.v - 1);
        let printed = &r * int(pow(p.c, p.t - 1)) * int(p.u - 1);
        let pair = &r * int(p.c) * int(p.u - 1);
        (
            Verdict::from_bool(printed == rhs),
            Verdict::from_bool(pair == rhs),
        )
    } else {
        (Verdict::NotApplicable, Verdict::NotApplicable)
    };
    ParameterRelations {
        a,
        b: lhs_b == rhs_b,
        c,
        pair_identity,
    }
}

/// Evaluates the counting relations between `b`, `r` and `lambda_2`.
/// Requires `params.b`.
pub fn check_parameter_relations(params: &DesignParams) -> Result<ParameterRelations> {
    let b = params
        .b
        .ok_or_else(|| input("relations need a block count b"))?;
    Ok(relations_for(params, &int(b)))
}

/// Every `1 <= s <= t` for which `lambda * C(v-s, t-s)` is not divisible by
/// `c^(t-s) * C(u-s, t-s)`.
pub fn check_divisibility(params: &DesignParams) -> Vec<u64> {
    (1..=params.t)
        .filter(|&s| {
            let (num, den) = lambda_s_parts(params, s);
            !num.is_multiple_of(&den)
        })
        .collect()
}

fn fisher_for(p: &DesignParams, b: &BigRational) -> Verdict {
    if p.t < 2 {
        return Verdict::NotApplicable;
    }
    Verdict::from_bool(*b >= ratio(BigUint::from(p.v), BigUint::from(p.u)))
}

/// `b >= v / u`, meaningful for `t >= 2`. Requires `params.b`.
pub fn check_fisher(params: &DesignParams) -> Result<Verdict> {
    let b = params
        .b
        .ok_or_else(|| input("Fisher check needs a block count b"))?;
    Ok(fisher_for(params, &int(b)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub params: DesignParams,
    /// The declared `b`, or `lambda_0` when none was given.
    pub blocks: BigRational,
    pub relation_a_holds: bool,
    pub relation_b_holds: bool,
    pub relation_c: Verdict,
    pub pair_identity: Verdict,
    pub divisibility_failures: Vec<u64>,
    pub fisher: Verdict,
    /// `lambda_s` for `s = 0..=t`; index 0 is the implied block count.
    pub lambda_s_values: Vec<BigRational>,
}

impl FeasibilityReport {
    /// All necessary conditions pass. Relation (c) as printed only counts
    /// when `t = 2`, where it coincides with the pair identity.
    pub fn admissible(&self) -> bool {
        let c_ok = self.params.t > 2 || self.relation_c.passes();
        self.relation_a_holds
            && self.relation_b_holds
            && c_ok
            && self.pair_identity.passes()
            && self.divisibility_failures.is_empty()
            && self.fisher.passes()
            && self.lambda_s_values.iter().all(|x| x.is_integer())
    }
}

pub fn feasibility(params: &DesignParams) -> FeasibilityReport {
    let blocks = params.b.map_or_else(|| implied_blocks(params), int);
    let rel = relations_for(params, &blocks);
    FeasibilityReport {
        params: *params,
        relation_a_holds: rel.a,
        relation_b_holds: rel.b,
        relation_c: rel.c,
        pair_identity: rel.pair_identity,
        divisibility_failures: check_divisibility(params),
        fisher: fisher_for(params, &blocks),
        lambda_s_values: (0..=params.t).map(|s| lambda_s(params, s)).collect(),
        blocks,
    }
}

/// `lambda_0` as an integer, when integral.
pub fn integral_blocks(params: &DesignParams) -> Option<u64> {
    let b = implied_blocks(params);
    if !b.is_integer() || b.is_zero() {
        return None;
    }
    u64::try_from(b.to_integer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: u64, v: u64, c: u64, u: u64) -> DesignParams {
        DesignParams::new(t, v, c, u, 1).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn replication_numbers() {
        assert_eq!(replication_number(&p(2, 9, 2, 2), 1).unwrap(), q(4, 1));
        assert_eq!(replication_number(&p(3, 10, 2, 3), 2).unwrap(), q(4, 1));
        assert_eq!(replication_number(&p(3, 10, 2, 3), 1).unwrap(), q(9, 1));
        assert_eq!(replication_number(&p(3, 10, 2, 3), 3).unwrap(), q(1, 1));
        assert_eq!(replication_number(&p(2, 10, 2, 2), 1).unwrap(), q(9, 2));
        assert!(replication_number(&p(2, 9, 2, 2), 0).is_err());
        assert!(replication_number(&p(2, 9, 2, 2), 3).is_err());
    }

    #[test]
    fn relations() {
        let r = check_parameter_relations(&p(2, 9, 2, 2).with_blocks(9).unwrap()).unwrap();
        assert!(r.a && r.b);
        assert_eq!(r.c, Verdict::Holds);
        let r = check_parameter_relations(&p(3, 10, 2, 3).with_blocks(15).unwrap()).unwrap();
        assert!(r.a && r.b);
        // printed form: 9*4*2 = 72 against 4*9 = 36
        assert_eq!(r.c, Verdict::Fails);
        assert_eq!(r.pair_identity, Verdict::Holds);
        let r = check_parameter_relations(&p(2, 10, 2, 2).with_blocks(9).unwrap()).unwrap();
        assert!(!r.a && !r.b);
        let r = check_parameter_relations(&p(1, 5, 1, 2).with_blocks(5).unwrap()).unwrap();
        assert_eq!(r.c, Verdict::NotApplicable);
        assert!(check_parameter_relations(&p(2, 9, 2, 2)).is_err());
    }

    #[test]
    fn divisibility() {
        assert!(check_divisibility(&p(2, 9, 2, 2)).is_empty());
        assert_eq!(check_divisibility(&p(2, 10, 2, 2)), vec![1]);
        assert!(check_divisibility(&p(3, 10, 2, 3)).is_empty());
    }

    #[test]
    fn fisher() {
        let f = |v, u, b, t| {
            let params = DesignParams {
                t,
                v,
                b: Some(b),
                c: 1,
                u,
                lambda: 1,
            };
            check_fisher(&params).unwrap()
        };
        assert_eq!(f(9, 2, 9, 2), Verdict::Holds);
        assert_eq!(f(10, 3, 15, 3), Verdict::Holds);
        assert_eq!(f(12, 3, 3, 2), Verdict::Fails);
        assert_eq!(f(12, 3, 3, 1), Verdict::NotApplicable);
    }

    #[test]
    fn admissibility() {
        assert!(feasibility(&p(2, 9, 2, 2)).admissible());
        assert!(feasibility(&p(3, 10, 2, 3)).admissible());
        let bad = feasibility(&p(2, 10, 2, 2));
        assert!(!bad.admissible());
        assert_eq!(bad.divisibility_failures, vec![1]);
        assert_eq!(bad.blocks, q(45, 4));
        assert_eq!(integral_blocks(&p(3, 10, 2, 3)), Some(15));
        assert_eq!(integral_blocks(&p(2, 10, 2, 2)), None);
    }
}
