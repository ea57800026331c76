use std::collections::{HashSet, VecDeque};
use std::path::Path;

use arbor::bratteli::{self, gamma_group, inclusion_probability, ClopenSet, FinitePath, LevelPaths};
use arbor::coloring::{
    bad_blue_estimate, bad_blue_exhaustive, bb2_bound_check, k_i_subgroup, ClosedSetSpec, Coloring, SubgroupSpec,
};
use arbor::permgrp::LevelQuotient;
use arbor::selfsim::{activity_bound, activity_by_expansion, builtin, expand, Nucleus, WordSolver};
use arbor::{BoundaryRay, Perm, Portrait, Vertex};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{write_csv, Meta, Table};
use crate::CheckFailed;

const LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Module {
    Group,
    Coloring,
    Cosofic,
    Bratteli,
}

impl Module {
    fn name(self) -> &'static str {
        match self {
            Module::Group => "group",
            Module::Coloring => "coloring",
            Module::Cosofic => "cosofic-sim",
            Module::Bratteli => "bratteli",
        }
    }

    fn checks(self) -> Vec<(&'static str, fn() -> anyhow::Result<bool>)> {
        match self {
            Module::Group => vec![
                ("grigorchuk nucleus is {id,a,b,c,d}", grigorchuk_nucleus),
                ("quotient orders match BFS closure", orders_match_closure),
                ("relations agree between nucleus solver and expansion", relations_agree),
                ("exact activity lies between expansion bounds", activity_brackets),
            ],
            Module::Coloring => vec![
                ("index set of the ray 1^∞", index_set_of_ray),
                ("empty set gives K_i(H) = H", empty_set_degenerates),
                ("K_i(H) is conjugation equivariant", equivariance),
            ],
            Module::Cosofic => vec![
                ("sampling agrees with exhaustive enumeration", sampling_agrees),
                ("bad-blue inequality holds exhaustively", bb2_exhaustive),
            ],
            Module::Bratteli => vec![
                ("DFS enumeration matches transfer counts", dfs_matches_transfer),
                ("telescoping preserves path counts", telescoping_counts),
                ("inclusion formula matches enumeration of Γ_n", inclusion_matches_enumeration),
            ],
        }
    }
}

pub fn run(module: Option<Module>, out: Option<&Path>) -> anyhow::Result<()> {
    let modules = match module {
        Some(m) => vec![m],
        None => vec![Module::Group, Module::Coloring, Module::Cosofic, Module::Bratteli],
    };
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for m in &modules {
        for (name, check) in m.checks() {
            let (pass, detail) = match check() {
                Ok(p) => (p, String::new()),
                Err(e) => (false, format!("{e:#}")),
            };
            log::info!("{} {}: {name}", if pass { "PASS" } else { "FAIL" }, m.name());
            if !pass {
                failed.push(format!("{}: {name}", m.name()));
            }
            rows.push(vec![m.name().to_string(), name.to_string(), pass.to_string(), detail]);
        }
    }
    let names: Vec<&str> = modules.iter().map(|m| m.name()).collect();
    let meta = Meta::new("selftest", json!({ "modules": names }), None);
    write_csv(out, &meta, &Table { columns: vec!["module", "check", "pass", "detail"], rows })?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CheckFailed(failed.join("; ")).into())
    }
}

fn closure_order(gens: &[Perm]) -> usize {
    let id = Perm::identity(gens.first().map_or(0, Perm::degree));
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

fn grigorchuk_nucleus() -> anyhow::Result<bool> {
    let mut names = Nucleus::compute(&builtin::grigorchuk(), LIMIT)?.state_names();
    names.sort();
    Ok(names == ["a", "b", "c", "d", "id"])
}

fn orders_match_closure() -> anyhow::Result<bool> {
    for (t, max) in [(builtin::grigorchuk(), 3), (builtin::gupta_sidki(3)?, 2)] {
        for n in 1..=max {
            let q = LevelQuotient::new(&t, n)?;
            let gens: Vec<Perm> = (0..t.num_generators()).map(|g| q.generator_image(g).clone()).collect();
            if *q.group().order() != BigUint::from(closure_order(&gens)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn relations_agree() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    let n = Nucleus::compute(&g, LIMIT)?;
    let solver = WordSolver::with_nucleus(&g, &n, LIMIT)?;
    for rel in ["aa", "bcd", "(ad)^4", "(ad)^2", "abab"] {
        let w = g.parse_word(rel)?;
        if solver.is_identity(&w, LIMIT).is_identity() != expand(&g, &w, 10).is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn activity_brackets() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    for word in ["b", "ad", "abacd"] {
        let w = g.parse_word(word)?;
        let exact = activity_bound(&g, &w, 6, LIMIT)?;
        for i in 0..=6 {
            let r = activity_by_expansion(&g, &w, i, 6)?;
            let c = exact.counts[i] as usize;
            if c < r.active.len() || c > r.active.len() + r.undecided.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ray_one() -> ClosedSetSpec {
    ClosedSetSpec::ray(BoundaryRay::constant(1))
}

fn index_set_of_ray() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    let col = Coloring::new(&ray_one(), g.valency(), 10)?;
    let expected: Vec<Vertex> = (0..10).map(|k| Vertex::new([vec![1; k], vec![0]].concat())).collect();
    let halving = (0..=10u32).all(|i| col.q_b(i as usize) == BigRational::new(1.into(), BigUint::from(2u32).pow(i).into()));
    Ok(col.index_set() == expected && halving)
}

fn empty_set_degenerates() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 4)?;
    let h = SubgroupSpec::spine(1, 4).realize(&g, &q)?;
    let col = Coloring::new(&ClosedSetSpec::empty(), g.valency(), 4)?;
    Ok(k_i_subgroup(&q, &h, &col, 1, 3)?.group.same_group(&h))
}

fn equivariance() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 4)?;
    let h = SubgroupSpec::spine(1, 4).realize(&g, &q)?;
    let set = ray_one();
    let k = k_i_subgroup(&q, &h, &Coloring::new(&set, g.valency(), 4)?, 1, 3)?;
    for seed in 0..10 {
        let gamma = q.group().uniform_sample(seed);
        let moved = set.translate_finitary(&Portrait::from_level_perm(g.valency(), 4, &gamma)?)?;
        let kg = k_i_subgroup(&q, &h.conjugate(&gamma), &Coloring::new(&moved, g.valency(), 4)?, 1, 3)?;
        if !k.group.conjugate(&gamma).same_group(&kg.group) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sampling_agrees() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 5)?;
    let h = SubgroupSpec::spine(1, 5).realize(&g, &q)?;
    let k = k_i_subgroup(&q, &h, &Coloring::new(&ray_one(), g.valency(), 5)?, 2, 3)?;
    let p = q.word_image(&g.parse_word("b")?);
    let exact = bad_blue_exhaustive(&q, &h, &k, &p, 1_000_000)?.symdiff_prob();
    let est = bad_blue_estimate(&q, &h, &k, &p, 4000, 1).symdiff_prob();
    let (a, b) = (to_f64(&exact), to_f64(&est));
    Ok((a - b).abs() <= 4.0 * (a * (1.0 - a) / 4000.0).sqrt() + 1e-9)
}

fn to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn bb2_exhaustive() -> anyhow::Result<bool> {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 5)?;
    let h = SubgroupSpec::spine(1, 5).realize(&g, &q)?;
    let k = k_i_subgroup(&q, &h, &Coloring::new(&ray_one(), g.valency(), 5)?, 2, 3)?;
    for w in ["a", "b", "c", "d", "ad"] {
        let word = g.parse_word(w)?;
        let r = bad_blue_exhaustive(&q, &h, &k, &q.word_image(&word), 1_000_000)?;
        if !bb2_bound_check(&r, activity_bound(&g, &word, 2, LIMIT)?.counts[2]).holds {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dfs_matches_transfer() -> anyhow::Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let b = bratteli::random_simple(&mut rng, 3);
        for n in 0..=3 {
            let lp = LevelPaths::new(&b, n)?;
            let counts = b.path_count(n)?;
            if (0..counts.len()).any(|v| BigUint::from(lp.degree(v)) != counts[v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn telescoping_counts() -> anyhow::Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let b = bratteli::random_simple(&mut rng, 4);
        let t = b.telescope(&[2, 4])?;
        if t.path_count(1)? != b.path_count(2)? || t.path_count(2)? != b.path_count(4)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn inclusion_matches_enumeration() -> anyhow::Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 5 {
        let b = bratteli::random_simple(&mut rng, 2);
        let three = BigUint::from(3u32);
        let counts = b.path_count(2)?;
        let lp = LevelPaths::new(&b, 2)?;
        if counts.iter().any(|c| *c < three) || lp.len() > 9 {
            continue;
        }
        let picks: Vec<FinitePath> = lp.paths().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let u = ClopenSet::from_paths(&b, &picks);
        let c: Vec<FinitePath> = lp.paths().iter().take(2).cloned().collect();
        let formula = inclusion_probability(&b, &c, &u, 2)?;
        let elements = gamma_group(&lp, true).elements(1_000_000)?;
        let inside: Vec<bool> = lp.paths().iter().map(|p| u.contains(p)).collect::<Result<_, _>>()?;
        let hits = elements.iter().filter(|g| (0..c.len()).all(|i| inside[g.image(i)])).count();
        if formula != BigRational::new(hits.into(), elements.len().into()) {
            return Ok(false);
        }
        done += 1;
    }
    Ok(true)
}
