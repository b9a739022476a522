//! Exact spoofing-attack evaluation.
//!
//! Order-`i` spoofing: a rule `e` is drawn uniformly, then an `i`-subset of
//! source states uniformly, then each chosen source emits a uniform member of
//! its cell. The opponent sees the resulting message set `M'` and inserts one
//! fresh message `m'`. The insertion succeeds when `m'` is valid under `e` and
//! encodes a source state not already in `f_e(M')`.
//!
//! For a fixed observation the joint weight of rule `e` is
//! `prod_{m in M'} 1/|e(owner(m))|`; scaling every cell size to the lcm `L`
//! turns these into integers. For c-splitting codes all qualifying rules get
//! the same weight, so the posterior over rules given `M'` is uniform on the
//! rules under which `M'` is valid with `i` distinct sources. The optimal
//! opponent picks, per observation, the insertion with the largest success
//! weight, and
//!
//! `P_d(i) = sum_{M'} max_{m'} W(M', m') / (b * C(u, i) * L^i)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{binomial, int, pow, ratio};
use crate::code::AuthCode;
use crate::error::{input, Error, Result};
use crate::subsets::next_combination;

/// Largest message space evaluated without an explicit override.
pub const MAX_MESSAGES: usize = 64;

/// Distributions used by transmitter, receiver and source.
///
/// Only the all-uniform model is provided: uniform `i`-subsets of source
/// states, uniform encoding rules and a uniform splitting strategy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SecurityModel {
    #[default]
    Uniform,
}

/// What counts as a successful insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuccessRule {
    /// Accepted and decoding to a source state not yet observed.
    FreshSource,
    /// Accepted at all. Kept as a diagnostic only.
    AcceptanceOnly,
}

/// Best opponent response on the most favourable observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub observed: Vec<u32>,
    pub inserted: u32,
    /// Success probability conditioned on `observed`.
    pub conditional: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deception {
    pub probability: BigRational,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderProfile {
    pub order: usize,
    pub probability: BigRational,
    pub bound: BigRational,
    pub equal: bool,
    pub witness: Option<Witness>,
    pub acceptance_only: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeceptionProfile {
    pub orders: Vec<OrderProfile>,
}

impl DeceptionProfile {
    /// Largest `k` with equality at every order `0..=k`; `-1` if order 0
    /// already misses its bound.
    pub fn security_order(&self) -> i64 {
        self.orders.iter().take_while(|o| o.equal).count() as i64 - 1
    }
}

/// `min_e (|M(e)| - i * max_s |e(s)|) / (|M| - i)`.
pub fn deception_bound(code: &AuthCode, i: usize) -> Result<BigRational> {
    let v = code.message_count();
    if i >= v {
        return Err(input(format!(
            "order {i} must be below the message count {v}"
        )));
    }
    let numer = code
        .rules()
        .iter()
        .map(|r| r.valid_count() as i64 - (i * r.max_cell()) as i64)
        .min()
        .ok_or_else(|| input("code has no encoding rules"))?;
    Ok(BigRational::new(numer.into(), ((v - i) as i64).into()))
}

/// `prod_{i<t} (|M| - i) / min_e(|M(e)| - i * max_s |e(s)|)`.
pub fn encoding_rule_bound(code: &AuthCode, t: usize) -> Result<BigRational> {
    if t == 0 {
        return Err(input("t must be at least 1"));
    }
    let mut acc = BigRational::one();
    for i in 0..t {
        let bound = deception_bound(code, i)?;
        if bound <= BigRational::zero() {
            return Err(input(format!(
                "factor for i = {i} is undefined (non-positive denominator)"
            )));
        }
        acc /= bound;
    }
    Ok(acc)
}

/// Rule count meets [`encoding_rule_bound`] exactly.
pub fn is_optimal(code: &AuthCode, t: usize) -> Result<bool> {
    Ok(encoding_rule_bound(code, t)? == int(code.rule_count()))
}

/// Precomputed integer weights for exhaustive evaluation of one code.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    code: &'a AuthCode,
    lcm: u64,
    // per rule, per message: scaled weight L/|e(s)| of the owning cell, 0 if invalid
    scaled: Vec<Vec<u64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(code: &'a AuthCode, model: SecurityModel) -> Result<Self> {
        if code.message_count() > MAX_MESSAGES {
            return Err(Error::Refused(format!(
                "{} messages exceeds the exhaustive limit of {MAX_MESSAGES}; use an override",
                code.message_count()
            )));
        }
        Self::unguarded(code, model)
    }

    /// Skips the message-count guard.
    pub fn unguarded(code: &'a AuthCode, model: SecurityModel) -> Result<Self> {
        let SecurityModel::Uniform = model;
        if code.rule_count() == 0 {
            return Err(input("code has no encoding rules"));
        }
        let lcm = code
            .rules()
            .iter()
            .flat_map(|r| r.cells().iter().map(|c| c.len() as u64))
            .fold(1u64, |a, b| a.lcm(&b));
        let v = code.message_count();
        let scaled = code
            .rules()
            .iter()
            .map(|r| {
                (0..v as u32)
                    .map(|m| r.source_of(m).map_or(0, |s| lcm / r.cell(s).len() as u64))
                    .collect()
            })
            .collect();
        Ok(Evaluator { code, lcm, scaled })
    }

    fn check_order(&self, i: usize) -> Result<()> {
        let u = self.code.source_count();
        if i >= u || i >= self.code.message_count() {
            return Err(input(format!(
                "order {i} needs i < u = {u} distinct source states"
            )));
        }
        Ok(())
    }

    /// Best insertion for one observation: (max success weight, its message,
    /// total observation weight). `None` when the observation has zero
    /// probability.
    fn best_response(
        &self,
        observed: &[u32],
        rule: SuccessRule,
        scratch: &mut Scratch,
    ) -> Option<(u128, u32, u128)> {
        scratch.qualifying.clear();
        let mut total: u128 = 0;
        for (e, r) in self.code.rules().iter().enumerate() {
            let mut w: u128 = 1;
            let mut ok = true;
            scratch.sources.clear();
            for &m in observed {
                match r.source_of(m) {
                    Some(s) if !scratch.sources.contains(&s) => {
                        scratch.sources.push(s);
                        w = w
                            .checked_mul(self.scaled[e][m as usize] as u128)
                            .expect("weight overflow");
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                total += w;
                scratch.qualifying.push((e, w, scratch.sources.clone()));
            }
        }
        if total == 0 {
            return None;
        }
        let mut best: Option<(u128, u32)> = None;
        for m in 0..self.code.message_count() as u32 {
            if observed.contains(&m) {
                continue;
            }
            let mut s: u128 = 0;
            for (e, w, srcs) in &scratch.qualifying {
                if let Some(src) = self.code.rules()[*e].source_of(m) {
                    if rule == SuccessRule::AcceptanceOnly || !srcs.contains(&src) {
                        s += w;
                    }
                }
            }
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, m));
            }
        }
        best.map(|(s, m)| (s, m, total))
    }

    /// Exact optimal-opponent success probability for order `i`.
    pub fn evaluate(&self, i: usize, rule: SuccessRule) -> Result<Deception> {
        self.check_order(i)?;
        let v = self.code.message_count() as u32;
        let scan = |first: Option<u32>| -> Partial {
            let mut part = Partial::default();
            let mut scratch = Scratch::default();
            let mut observed: Vec<u32>;
            let mut rest: Vec<u32>;
            let span;
            match first {
                None => {
                    observed = Vec::new();
                    rest = Vec::new();
                    span = 0;
                }
                Some(f) => {
                    if v - f - 1 < (i - 1) as u32 {
                        return part;
                    }
                    span = v - f - 1;
                    rest = (0..(i - 1) as u32).collect();
                    observed = vec![f; i];
                }
            }
            loop {
                if let Some(f) = first {
                    for (k, &r) in rest.iter().enumerate() {
                        observed[k + 1] = f + 1 + r;
                    }
                }
                if let Some((best, m, total)) = self.best_response(&observed, rule, &mut scratch) {
                    part.sum += BigUint::from(best);
                    part.offer(&observed, m, best, total);
                }
                if first.is_none() || !next_combination(&mut rest, span) {
                    break;
                }
            }
            part
        };
        let parts: Vec<Partial> = if i == 0 {
            vec![scan(None)]
        } else {
            (0..v).into_par_iter().map(|f| scan(Some(f))).collect()
        };
        let mut sum = BigUint::zero();
        let mut top: Option<Best> = None;
        for p in parts {
            sum += p.sum;
            if let Some(b) = p.best {
                if top.as_ref().is_none_or(|t| b.beats(t)) {
                    top = Some(b);
                }
            }
        }
        let b = self.code.rule_count() as u64;
        let denom = BigUint::from(b)
            * binomial(self.code.source_count() as u64, i as u64)
            * pow(self.lcm, i as u64);
        Ok(Deception {
            probability: ratio(sum, denom),
            witness: top.map(|t| Witness {
                conditional: ratio(BigUint::from(t.weight), BigUint::from(t.total)),
                observed: t.observed,
                inserted: t.inserted,
            }),
        })
    }

    pub fn profile(&self, max_order: Option<usize>) -> Result<DeceptionProfile> {
        let top = self.code.source_count().min(self.code.message_count()) - 1;
        let last = max_order.map_or(top, |k| k.min(top));
        let orders = (0..=last)
            .map(|i| {
                let d = self.evaluate(i, SuccessRule::FreshSource)?;
                let acc = self.evaluate(i, SuccessRule::AcceptanceOnly)?;
                let bound = deception_bound(self.code, i)?;
                Ok(OrderProfile {
                    order: i,
                    equal: d.probability == bound,
                    probability: d.probability,
                    bound,
                    witness: d.witness,
                    acceptance_only: acc.probability,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DeceptionProfile { orders })
    }
}

#[derive(Default)]
struct Scratch {
    qualifying: Vec<(usize, u128, Vec<usize>)>,
    sources: Vec<usize>,
}

struct Best {
    observed: Vec<u32>,
    inserted: u32,
    weight: u128,
    total: u128,
}

impl Best {
    /// Strictly larger conditional success; ties keep the earlier witness.
    fn beats(&self, other: &Best) -> bool {
        let lhs = BigUint::from(self.weight) * BigUint::from(other.total);
        let rhs = BigUint::from(other.weight) * BigUint::from(self.total);
        lhs > rhs
    }
}

#[derive(Default)]
struct Partial {
    sum: BigUint,
    best: Option<Best>,
}

impl Partial {
    fn offer(&mut self, observed: &[u32], inserted: u32, weight: u128, total: u128) {
        let cand = Best {
            observed: observed.to_vec(),
            inserted,
            weight,
            total,
        };
        if self.best.as_ref().is_none_or(|b| cand.beats(b)) {
            self.best = Some(cand);
        }
    }
}

pub fn deception_probability(code: &AuthCode, model: SecurityModel, i: usize) -> Result<Deception> {
    Evaluator::new(code, model)?.evaluate(i, SuccessRule::FreshSource)
}

/// Diagnostic variant counting any accepted insertion as a success.
pub fn acceptance_probability(
    code: &AuthCode,
    model: SecurityModel,
    i: usize,
) -> Result<Deception> {
    Evaluator::new(code, model)?.evaluate(i, SuccessRule::AcceptanceOnly)
}

pub fn deception_profile(
    code: &AuthCode,
    model: SecurityModel,
    max_order: Option<usize>,
) -> Result<DeceptionProfile> {
    Evaluator::new(code, model)?.profile(max_order)
}

/// Largest `k` such that `P_d(i)` meets its bound for every `0 <= i <= k`,
/// or `-1` when order 0 already misses.
pub fn security_order(code: &AuthCode, model: SecurityModel) -> Result<i64> {
    let ev = Evaluator::new(code, model)?;
    let top = code.source_count().min(code.message_count()) - 1;
    for i in 0..=top {
        if ev.evaluate(i, SuccessRule::FreshSource)?.probability != deception_bound(code, i)? {
            return Ok(i as i64 - 1);
        }
    }
    Ok(top as i64)
}

impl fmt::Display for DeceptionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::arith::format_ratio;
        let rows: Vec<[String; 5]> = self
            .orders
            .iter()
            .map(|o| {
                [
                    o.order.to_string(),
                    format_ratio(&o.probability),
                    format_ratio(&o.bound),
                    if o.equal { "yes" } else { "no" }.to_string(),
                    format_ratio(&o.acceptance_only),
                ]
            })
            .collect();
        let head = ["i", "P_d", "bound", "equal?", "accept-only"];
        let widths: Vec<usize> = (0..5)
            .map(|j| {
                rows.iter()
                    .map(|r| r[j].len())
                    .chain([head[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: [&str; 5]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(f, "{}", line(head))?;
        for r in &rows {
            writeln!(f, "{}", line([&r[0], &r[1], &r[2], &r[3], &r[4]]))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Labels;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // one rule, two sources, messages {0},{1}; any insertion under the only
    // rule is certain
    #[test]
    fn single_rule_code_is_always_deceived() {
        let code = AuthCode::new(Labels::numeric(3), vec![vec![vec![0], vec![1]]]).unwrap();
        let p0 = deception_probability(&code, SecurityModel::Uniform, 0).unwrap();
        assert_eq!(p0.probability, q(1, 1));
        let p1 = deception_probability(&code, SecurityModel::Uniform, 1).unwrap();
        assert_eq!(p1.probability, q(1, 1));
        assert_eq!(deception_bound(&code, 0).unwrap(), q(2, 3));
        assert!(deception_probability(&code, SecurityModel::Uniform, 2).is_err());
        assert_eq!(security_order(&code, SecurityModel::Uniform).unwrap(), -1);
    }

    #[test]
    fn bound_rejects_orders_beyond_messages() {
        let code = AuthCode::new(Labels::numeric(2), vec![vec![vec![0], vec![1]]]).unwrap();
        assert!(deception_bound(&code, 2).is_err());
        assert!(encoding_rule_bound(&code, 0).is_err());
        // i = 1: numerator 2 - 1 = 1, fine; t = 3 would need i = 2
        assert!(encoding_rule_bound(&code, 3).is_err());
    }
}
