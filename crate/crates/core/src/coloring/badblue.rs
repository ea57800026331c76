use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ApproxSubgroup, Coloring, ColoringError};
use crate::perm::Perm;
use crate::permgrp::{LevelQuotient, PermGroup};
use crate::selfsim::{RecursionTable, Word};
use crate::treecore::Vertex;

/// Outcome of testing conjugates `g^γ` against `H △ K_i(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadBlueReport {
    pub i: usize,
    /// Conjugates examined (class size when exhaustive, trials otherwise).
    pub total: u64,
    /// How many of them landed in `H △ K_i(H)`.
    pub symdiff: u64,
    /// Conjugates in `K_i(H) ∖ H`; zero when `H` contains `K_i(H)`.
    pub in_k_not_h: u64,
    /// Bad blue vertices found, sorted.
    pub witnesses: Vec<Vertex>,
    pub level_size: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

impl BadBlueReport {
    pub fn symdiff_prob(&self) -> BigRational {
        if self.total == 0 {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(self.symdiff), BigInt::from(self.total))
    }

    /// `|BB_i| / |L_i|`.
    pub fn q_bb(&self) -> BigRational {
        BigRational::new(BigInt::from(self.witnesses.len()), BigInt::from(self.level_size))
    }
}

struct Probe<'a> {
    q: &'a LevelQuotient,
    h: &'a PermGroup,
    k: &'a ApproxSubgroup,
}

impl Probe<'_> {
    /// `(in H △ K, in K ∖ H, bad blue vertices)` for one conjugate.
    fn test(&self, c: &Perm) -> (bool, bool, Vec<Vertex>) {
        let in_h = self.h.contains(c);
        let in_k = self.k.group.contains(c);
        if in_h == in_k {
            return (false, false, Vec::new());
        }
        let bad = self
            .k
            .blue
            .iter()
            .filter(|v| self.q.section_is_nontrivial(c, v))
            .cloned()
            .collect();
        (true, in_k, bad)
    }
}

fn summarize(i: usize, level_size: usize, rows: impl Iterator<Item = (bool, bool, Vec<Vertex>)>) -> BadBlueReport {
    let mut total = 0;
    let mut symdiff = 0;
    let mut in_k_not_h = 0;
    let mut witnesses = BTreeSet::new();
    for (sd, k_only, bad) in rows {
        total += 1;
        symdiff += u64::from(sd);
        in_k_not_h += u64::from(k_only);
        witnesses.extend(bad);
    }
    BadBlueReport {
        i,
        total,
        symdiff,
        in_k_not_h,
        witnesses: witnesses.into_iter().collect(),
        level_size,
        exhaustive: false,
        seed: None,
    }
}

/// The conjugacy class of `g` in `group`, if it has at most `limit`
/// elements.
pub fn conjugacy_class(group: &PermGroup, g: &Perm, limit: usize) -> Result<Vec<Perm>, ColoringError> {
    let mut seen: HashSet<Perm> = HashSet::from([g.clone()]);
    let mut out = vec![g.clone()];
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(x) = queue.pop_front() {
        for s in group.generators() {
            let y = x.conjugate_by(s);
            if seen.insert(y.clone()) {
                if out.len() >= limit {
                    return Err(ColoringError::Precondition(format!(
                        "conjugacy class exceeds {limit} elements"
                    )));
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Exact bad-blue accounting over every conjugate of `g` in `Γ_m`. Each
/// conjugate is hit equally often by a uniform `γ`, so class frequencies
/// are the probabilities over `γ ∈ Γ_m`.
pub fn bad_blue_exhaustive(
    q: &LevelQuotient,
    h: &PermGroup,
    k: &ApproxSubgroup,
    g: &Perm,
    limit: usize,
) -> Result<BadBlueReport, ColoringError> {
    let class = conjugacy_class(q.group(), g, limit)?;
    let probe = Probe { q, h, k };
    let rows: Vec<_> = class.par_iter().map(|c| probe.test(c)).collect();
    let mut report = summarize(k.i, q.level().size_at(k.i), rows.into_iter());
    report.exhaustive = true;
    Ok(report)
}

/// Monte-Carlo bad-blue estimate with `γ` uniform in `Γ_m`. Trial `t` draws
/// from its own stream of the seeded generator, so the result does not
/// depend on scheduling.
pub fn bad_blue_estimate(
    q: &LevelQuotient,
    h: &PermGroup,
    k: &ApproxSubgroup,
    g: &Perm,
    trials: u64,
    seed: u64,
) -> BadBlueReport {
    if trials == 0 {
        log::warn!("bad blue estimate with zero trials");
    }
    let probe = Probe { q, h, k };
    let rows: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let gamma = q.group().random_element(&mut trial_rng(seed, t));
            probe.test(&g.conjugate_by(&gamma))
        })
        .collect();
    let mut report = summarize(k.i, q.level().size_at(k.i), rows.into_iter());
    report.seed = Some(seed);
    report
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Both sides of `P(g ∈ H △ K_i) ≤ |A_g(i)| · |BB_i| / |L_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bb2Report {
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// Allowance for sampling error; zero for exhaustive reports.
    pub slack: f64,
    pub holds: bool,
}

pub fn bb2_bound_check(report: &BadBlueReport, activity: u64) -> Bb2Report {
    let lhs = report.symdiff_prob();
    let rhs = report.q_bb() * BigRational::from_integer(BigInt::from(activity));
    let (slack, holds) = if report.exhaustive {
        (0.0, lhs <= rhs)
    } else {
        let p = lhs.to_f64().unwrap_or(0.0);
        let n = report.total.max(1) as f64;
        let slack = 2.0 * (p * (1.0 - p) / n).sqrt();
        (slack, p <= rhs.to_f64().unwrap_or(0.0) + slack)
    };
    Bb2Report { lhs, rhs, slack, holds }
}

/// One level of the proportion recursion check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProportionRow {
    pub i: usize,
    pub q_b: BigRational,
    pub q_b_later: BigRational,
    pub q_bb: BigRational,
    /// `q_b(i) − (2/d^{c0}) q_bb(i)`.
    pub bound: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProportionReport {
    pub rows: Vec<ProportionRow>,
    /// `q_b` is non-increasing up to the horizon.
    pub monotone: bool,
    pub holds: bool,
}

/// Checks `q_b(i + c0) ≤ q_b(i) − (2/d^{c0}) q_bb(i)` at every supplied
/// level, `d` being the maximal valency.
pub fn proportion_recursion_check(coloring: &Coloring, q_bb: &[(usize, BigRational)], c0: usize) -> Result<ProportionReport, ColoringError> {
    let d = coloring.valency().max_degree();
    let factor = BigRational::new(BigInt::from(2), BigInt::from(d).pow(c0 as u32));
    let mut rows = Vec::new();
    for (i, qbb) in q_bb {
        let later = i + c0;
        if later > coloring.horizon() {
            return Err(ColoringError::Precondition(format!(
                "level {later} is beyond the coloring horizon {}",
                coloring.horizon()
            )));
        }
        let q_b = coloring.q_b(*i);
        let q_b_later = coloring.q_b(later);
        let bound = &q_b - &factor * qbb;
        rows.push(ProportionRow {
            i: *i,
            holds: q_b_later <= bound,
            q_b,
            q_b_later,
            q_bb: qbb.clone(),
            bound,
        });
    }
    let monotone = (1..=coloring.horizon()).all(|i| coloring.q_b(i) <= coloring.q_b(i - 1));
    let holds = monotone && rows.iter().all(|r| r.holds);
    Ok(ProportionReport { rows, monotone, holds })
}

/// The distinct level images of words of length at most `radius`, with a
/// shortest word for each, in order of first appearance.
pub fn word_ball(table: &RecursionTable, q: &LevelQuotient, radius: usize) -> Vec<(Word, Perm)> {
    let letters: Vec<Word> = (0..table.num_generators())
        .flat_map(|g| [Word::gen(g), Word::gen(g).inverse()])
        .collect();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![Word::empty()];
    for r in 0..=radius {
        let mut next = Vec::new();
        for w in &frontier {
            let p = q.word_image(w);
            if seen.insert(p.clone()) {
                out.push((w.clone(), p));
            }
            if r < radius {
                next.extend(letters.iter().map(|l| w.then(l)).filter(|x| x.len() == r + 1));
            }
        }
        frontier = next;
    }
    out
}

/// `max_E |P_A(H ∩ F = E) − P_B(K ∩ F = E)|` over the observed traces,
/// each sample being the bitmask of ball elements it contains.
pub fn empirical_weakstar_distance(samples_a: &[u64], samples_b: &[u64], ball_size: usize) -> Result<f64, ColoringError> {
    if ball_size == 0 {
        return Err(ColoringError::EmptyBall);
    }
    if ball_size > 64 {
        return Err(ColoringError::Precondition(format!("ball of {ball_size} elements exceeds 64")));
    }
    let freq = |s: &[u64]| {
        let mut m = std::collections::BTreeMap::<u64, usize>::new();
        for &x in s {
            *m.entry(x).or_default() += 1;
        }
        m
    };
    let (fa, fb) = (freq(samples_a), freq(samples_b));
    let (na, nb) = (samples_a.len().max(1) as f64, samples_b.len().max(1) as f64);
    let keys: BTreeSet<u64> = fa.keys().chain(fb.keys()).copied().collect();
    Ok(keys
        .into_iter()
        .map(|e| {
            let a = *fa.get(&e).unwrap_or(&0) as f64 / na;
            let b = *fb.get(&e).unwrap_or(&0) as f64 / nb;
            (a - b).abs()
        })
        .fold(0.0, f64::max))
}

/// Trace of a subgroup on a finite ball, as a bitmask.
pub fn trace(group: &PermGroup, ball: &[Perm]) -> u64 {
    ball.iter()
        .enumerate()
        .filter(|(_, p)| group.contains(p))
        .fold(0u64, |acc, (k, _)| acc | (1 << k))
}

/// Samples `(trace(γ⁻¹Hγ), trace(γ⁻¹Kγ))` for `trials` uniform `γ ∈ Γ_m`;
/// both sides use the same `γ`.
pub fn conjugate_traces(q: &LevelQuotient, h: &PermGroup, k: &PermGroup, ball: &[Perm], trials: u64, seed: u64) -> (Vec<u64>, Vec<u64>) {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let gamma = q.group().random_element(&mut trial_rng(seed, t));
            let inv = gamma.inverse();
            // p ∈ γ⁻¹Hγ iff γ p γ⁻¹ ∈ H
            let pulled: Vec<Perm> = ball.iter().map(|p| p.conjugate_by(&inv)).collect();
            (trace(h, &pulled), trace(k, &pulled))
        })
        .unzip()
}
