//! Acceptance criteria. Each test writes one `criterion N: PASS|FAIL` line
//! to stderr (bypassing the test harness capture) and then asserts.

use std::collections::{HashSet, VecDeque};
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arbor::bratteli::{
    self, gamma_group, inclusion_probability, kset_decay_bound, product_ratio_bound, rigid_stabilizer_check, BratteliDiagram,
    ClopenSet, FinitePath, LevelPaths,
};
use arbor::coloring::{
    bad_blue_exhaustive, bb2_bound_check, conjugate_traces, empirical_weakstar_distance, k_i_subgroup, proportion_recursion_check,
    word_ball, ClosedSetSpec, Coloring, SubgroupSpec,
};
use arbor::permgrp::{alt_generation_check, double_commutator_check, LevelQuotient};
use arbor::selfsim::{activity_bound, builtin, check_assumption_c, expand, IdentityVerdict, Nucleus, WordSolver};
use arbor::{BoundaryRay, Perm, PermGroup, Portrait, Vertex};

const STATE_LIMIT: usize = 100_000;

fn report(n: usize, pass: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "criterion {n:>2}: {} ({:.2?}) {detail}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn finish(n: usize, start: Instant, limit: Option<Duration>, ok: bool, detail: String) {
    let elapsed = start.elapsed();
    let in_time = limit.map_or(true, |l| elapsed < l);
    let pass = ok && in_time;
    let detail = if in_time { detail } else { format!("{detail}; over the time limit {limit:?}") };
    report(n, pass, elapsed, &detail);
    assert!(pass, "criterion {n}: {detail}");
}

fn word_set(table: &arbor::selfsim::RecursionTable, n: &Nucleus, words: &[&str]) -> Option<HashSet<usize>> {
    let mut ids = HashSet::new();
    for w in words {
        let word = table.parse_word(w).ok()?;
        ids.insert(n.find(table, 0, &word, STATE_LIMIT).ok()??);
    }
    Some(ids)
}

#[test]
fn criterion_01_nuclei() {
    let start = Instant::now();
    let g = builtin::grigorchuk();
    let t = Instant::now();
    let ng = Nucleus::compute(&g, STATE_LIMIT).unwrap();
    let tg = t.elapsed();
    let mut names = ng.state_names();
    names.sort();
    let grig_ok = names == ["a", "b", "c", "d", "id"];
    let gs = builtin::gupta_sidki(3).unwrap();
    let t = Instant::now();
    let ns = Nucleus::compute(&gs, STATE_LIMIT).unwrap();
    let ts = t.elapsed();
    let expected = word_set(&gs, &ns, &["1", "a", "a^2", "t", "t^2"]);
    let gs_ok = ns.len() == 5 && expected.map_or(false, |ids| ids.len() == 5);
    let fast = tg < Duration::from_secs(5) && ts < Duration::from_secs(5);
    finish(
        1,
        start,
        None,
        grig_ok && gs_ok && fast,
        format!("grigorchuk {names:?} in {tg:.2?}; gupta_sidki(3) {} states {:?} in {ts:.2?}", ns.len(), ns.state_names()),
    );
}

#[test]
fn criterion_02_activity() {
    let start = Instant::now();
    let g = builtin::grigorchuk();
    let act = |t: &arbor::selfsim::RecursionTable, w: &str| activity_bound(t, &t.parse_word(w).unwrap(), 12, STATE_LIMIT).unwrap();
    let a = act(&g, "a");
    let a_ok = a.exact && a.counts[1..].iter().all(|&c| c == 0);
    let sups: Vec<u64> = ["b", "c", "d"].iter().map(|w| act(&g, w).counts[1..].iter().copied().max().unwrap()).collect();
    let gs = builtin::gupta_sidki(3).unwrap();
    let t = act(&gs, "t");
    let ga = act(&gs, "a");
    let t_ok = t.exact && t.counts[1..].iter().all(|&c| c == 3) && ga.counts[1..].iter().all(|&c| c == 0);
    finish(
        2,
        start,
        None,
        a_ok && sups == [2, 2, 2] && t_ok,
        format!("grigorchuk |A_i(a)| = {:?}, sup b,c,d = {sups:?}; gupta_sidki |A_i(t)| = {:?}", &a.counts[1..], &t.counts[1..]),
    );
}

#[test]
fn criterion_03_assumption_c() {
    let start = Instant::now();
    let g = builtin::grigorchuk();
    let n = Nucleus::compute(&g, STATE_LIMIT).unwrap();
    let pass3 = check_assumption_c(&g, &n, 1, 3, 12);
    let fail2 = check_assumption_c(&g, &n, 1, 2, 12);
    let witness_d = !fail2.witnesses.is_empty() && fail2.witnesses.iter().all(|w| w.state == "d");
    let omega = builtin::by_name("grigorchuk_omega:(012)").unwrap();
    let no = Nucleus::compute(&omega, STATE_LIMIT).unwrap();
    let k = arbor::selfsim::minimal_block_length(omega.omega().unwrap(), 12);
    let pass6 = check_assumption_c(&omega, &no, 1, 6, 12);
    finish(
        3,
        start,
        Some(Duration::from_secs(30)),
        pass3.pass && !fail2.pass && witness_d && k == Some(3) && pass6.pass,
        format!(
            "grigorchuk c0=3 pass={} c0=2 pass={} witnesses {:?}; (012) k={k:?} c0=6 pass={} minimal c0={}",
            pass3.pass,
            fail2.pass,
            fail2.witnesses.iter().map(|w| w.state.as_str()).collect::<HashSet<_>>(),
            pass6.pass,
            pass6.minimal_c0
        ),
    );
}

#[test]
fn criterion_04_word_problem() {
    let start = Instant::now();
    let g = builtin::grigorchuk();
    let n = Nucleus::compute(&g, STATE_LIMIT).unwrap();
    let solver = WordSolver::with_nucleus(&g, &n, STATE_LIMIT).unwrap();
    let mut rows = Vec::new();
    let mut ok = true;
    for rel in ["aa", "bb", "cc", "dd", "bcd", "(ad)^4"] {
        let w = g.parse_word(rel).unwrap();
        let by_nucleus = solver.is_identity(&w, STATE_LIMIT) == IdentityVerdict::Identity;
        let by_expansion = expand(&g, &w, 10).is_identity();
        ok &= by_nucleus && by_expansion;
        rows.push(format!("{rel}:{by_nucleus}/{by_expansion}"));
    }
    let ad2 = g.parse_word("(ad)^2").unwrap();
    let control = !expand(&g, &ad2, 10).is_identity() && !solver.is_identity(&ad2, STATE_LIMIT).is_identity();
    finish(4, start, None, ok && control, format!("nucleus/expansion {}; (ad)^2 rejected by both: {control}", rows.join(" ")));
}

fn closure_order(gens: &[Perm]) -> usize {
    let n = gens.first().map_or(0, Perm::degree);
    let start = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
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

#[test]
fn criterion_05_orders_vs_closure() {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    let cases = [(builtin::grigorchuk(), 4usize), (builtin::gupta_sidki(3).unwrap(), 2)];
    for (t, max_n) in &cases {
        for n in 1..=*max_n {
            let q = LevelQuotient::new(t, n).unwrap();
            let gens: Vec<Perm> = (0..t.num_generators()).map(|g| q.generator_image(g).clone()).collect();
            let bfs = BigUint::from(closure_order(&gens));
            ok &= *q.group().order() == bfs;
            rows.push(format!("{}:{n}={}/{}", t.label(), q.group().order(), bfs));
        }
    }
    finish(5, start, Some(Duration::from_secs(120)), ok, rows.join(" "));
}

fn grigorchuk_spine(m: usize) -> (arbor::selfsim::RecursionTable, LevelQuotient, PermGroup) {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, m).unwrap();
    let h = SubgroupSpec::spine(1, m).realize(&g, &q).unwrap();
    (g, q, h)
}

fn ray_one() -> ClosedSetSpec {
    ClosedSetSpec::ray(BoundaryRay::constant(1))
}

#[test]
fn criterion_06_coloring_and_proportion() {
    let start = Instant::now();
    let g = builtin::grigorchuk();
    let col = Coloring::new(&ray_one(), g.valency(), 12).unwrap();
    let expected: Vec<Vertex> = (0..12).map(|k| Vertex::new([vec![1; k], vec![0]].concat())).collect();
    let index_ok = col.index_set() == expected;
    let qb_ok = (0..=12).all(|i| col.q_b(i) == BigRational::new(1.into(), BigUint::from(2u32).pow(i as u32).into()));
    let c0 = 3;
    let mut rows = Vec::new();
    for i in 0..=2 {
        let (g, q, h) = grigorchuk_spine(i + c0);
        let k = k_i_subgroup(&q, &h, &col, i, c0).unwrap();
        let mut worst = BigRational::zero();
        for w in ["a", "b", "c", "d", "ad"] {
            let p = q.word_image(&g.parse_word(w).unwrap());
            let r = bad_blue_exhaustive(&q, &h, &k, &p, 5_000_000).unwrap();
            worst = worst.max(r.q_bb());
        }
        rows.push((i, worst));
    }
    let prop = proportion_recursion_check(&col, &rows, c0).unwrap();
    finish(
        6,
        start,
        None,
        index_ok && qb_ok && prop.holds,
        format!(
            "I_K = {{0, 10, …, 1^11 0}}: {index_ok}; q_b = 2^-i: {qb_ok}; recursion rows {:?}",
            prop.rows.iter().map(|r| format!("i={} q_bb={} {}≤{}", r.i, r.q_bb, r.q_b_later, r.bound)).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_07_degenerations_and_index() {
    let start = Instant::now();
    let g = builtin::grigorchuk();
    let empty = Coloring::new(&ClosedSetSpec::empty(), g.valency(), 12).unwrap();
    let mut ok = true;
    let mut rows = Vec::new();
    for m in 3..=5 {
        let (g, q, spine) = grigorchuk_spine(m);
        let words = SubgroupSpec::WordGenerated(vec!["b".into(), "aca".into()]).realize(&g, &q).unwrap();
        for h in [&spine, &words] {
            for i in 0..=m - 3 {
                let k = k_i_subgroup(&q, h, &empty, i, 3).unwrap();
                ok &= k.group.same_group(h);
            }
        }
    }
    rows.push(format!("K=∅ gives K_i(H)=H: {ok}"));
    let col = Coloring::new(&ray_one(), g.valency(), 12).unwrap();
    let (_, q, h) = grigorchuk_spine(7);
    let mut indices = Vec::new();
    for i in 0..=4 {
        let k = k_i_subgroup(&q, &h, &col, i, 3).unwrap();
        let finite = *q.group().order() == &k.index * k.group.order();
        ok &= finite && !k.index.is_zero();
        indices.push(k.index.to_string());
    }
    rows.push(format!("[Γ_7 : K_i] for i=0..4 = {indices:?}"));
    finish(7, start, None, ok, rows.join("; "));
}

#[test]
fn criterion_08_equivariance() {
    let start = Instant::now();
    let mut ok = true;
    let mut rows = Vec::new();
    for (i, m) in [(1usize, 4usize), (2, 5)] {
        let (g, q, h) = grigorchuk_spine(m);
        let set = ray_one();
        let col = Coloring::new(&set, g.valency(), m).unwrap();
        let k = k_i_subgroup(&q, &h, &col, i, 3).unwrap();
        let mut agree = 0;
        for t in 0..100u64 {
            let gamma = q.group().uniform_sample(1000 + t);
            let portrait = Portrait::from_level_perm(g.valency(), m, &gamma).unwrap();
            let moved = set.translate_finitary(&portrait).unwrap();
            let col_g = Coloring::new(&moved, g.valency(), m).unwrap();
            let h_g = h.conjugate(&gamma);
            let k_g = k_i_subgroup(&q, &h_g, &col_g, i, 3).unwrap();
            if k.group.conjugate(&gamma).same_group(&k_g.group) {
                agree += 1;
            }
        }
        ok &= agree == 100;
        rows.push(format!("(i={i}, m={m}) {agree}/100"));
    }
    finish(8, start, None, ok, rows.join(" "));
}

#[test]
fn criterion_09_bb2() {
    let start = Instant::now();
    let (g, q, h) = grigorchuk_spine(5);
    let col = Coloring::new(&ray_one(), g.valency(), 12).unwrap();
    let i = 2;
    let k = k_i_subgroup(&q, &h, &col, i, 3).unwrap();
    let mut ok = true;
    let mut rows = Vec::new();
    for w in ["a", "b", "c", "d", "ad"] {
        let word = g.parse_word(w).unwrap();
        let p = q.word_image(&word);
        let r = bad_blue_exhaustive(&q, &h, &k, &p, 5_000_000).unwrap();
        let act = activity_bound(&g, &word, i, STATE_LIMIT).unwrap();
        let bb = bb2_bound_check(&r, act.counts[i]);
        ok &= bb.holds && r.exhaustive && act.exact;
        rows.push(format!("{w}: {} ≤ {}", bb.lhs, bb.rhs));
    }
    finish(9, start, None, ok, rows.join(", "));
}

#[test]
fn criterion_10_weak_star_trend() {
    let start = Instant::now();
    let trials = 10_000u64;
    let seed = 0x5eed;
    let (g, q, h) = grigorchuk_spine(7);
    let col = Coloring::new(&ray_one(), g.valency(), 12).unwrap();
    let ball: Vec<Perm> = word_ball(&g, &q, 2).into_iter().map(|(_, p)| p).collect();
    let mut dists = Vec::new();
    for i in 0..=4 {
        let k = k_i_subgroup(&q, &h, &col, i, 3).unwrap();
        let (a, b) = conjugate_traces(&q, &h, &k.group, &ball, trials, seed);
        dists.push(empirical_weakstar_distance(&a, &b, ball.len()).unwrap());
    }
    let se = |d: f64| (d * (1.0 - d) / trials as f64).sqrt();
    let ok = dists.windows(2).all(|w| w[1] <= w[0] + 2.0 * (se(w[0]).powi(2) + se(w[1]).powi(2)).sqrt());
    finish(
        10,
        start,
        Some(Duration::from_secs(300)),
        ok,
        format!("ball {} elements, distances {:?}", ball.len(), dists.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>()),
    );
}

/// A random simple diagram with a level `n` whose vertices all carry at
/// least three paths and whose `Γ_n` has at most `max_order` elements.
fn small_instance(rng: &mut ChaCha8Rng, max_order: u64) -> (BratteliDiagram, usize) {
    loop {
        let horizon = rng.gen_range(2..=3);
        let b = bratteli::random_simple(rng, horizon);
        let n = horizon;
        let degrees = b.path_count(n).unwrap();
        if degrees.iter().any(|d| *d < BigUint::from(3u32)) {
            continue;
        }
        let total: BigUint = degrees.iter().sum();
        if total > BigUint::from(64u32) {
            continue;
        }
        let lp = LevelPaths::new(&b, n).unwrap();
        if *gamma_group(&lp, true).order() <= BigUint::from(max_order) {
            return (b, n);
        }
    }
}

fn random_clopen(rng: &mut ChaCha8Rng, b: &BratteliDiagram, max_depth: usize) -> ClopenSet {
    let depth = rng.gen_range(1..=max_depth);
    let lp = LevelPaths::new(b, depth).unwrap();
    let picks: Vec<FinitePath> = lp.paths().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    ClopenSet::from_paths(b, &picks)
}

fn random_paths(rng: &mut ChaCha8Rng, lp: &LevelPaths, k: usize) -> Vec<FinitePath> {
    let mut all = lp.paths().to_vec();
    all.shuffle(rng);
    all.truncate(k);
    all
}

#[test]
fn criterion_11_inclusion_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ok = true;
    let mut largest = BigUint::zero();
    for _ in 0..50 {
        let (b, n) = small_instance(&mut rng, 100_000);
        let lp = LevelPaths::new(&b, n).unwrap();
        let u = random_clopen(&mut rng, &b, n);
        let k = rng.gen_range(0..=4.min(lp.len()));
        let c = random_paths(&mut rng, &lp, k);
        let formula = inclusion_probability(&b, &c, &u, n).unwrap();
        let gamma = gamma_group(&lp, true);
        let elements = gamma.elements(100_000).unwrap();
        let idx: Vec<usize> = c.iter().map(|p| lp.index_of(p).unwrap()).collect();
        let inside: Vec<bool> = lp.paths().iter().map(|p| u.contains(p).unwrap()).collect();
        let hits = elements.iter().filter(|g| idx.iter().all(|&i| inside[g.image(i)])).count();
        let oracle = BigRational::new(hits.into(), elements.len().into());
        ok &= formula == oracle;
        largest = largest.max(gamma.order().clone());
    }
    finish(
        11,
        start,
        Some(Duration::from_secs(300)),
        ok,
        format!("50 diagrams, exact agreement: {ok}, largest |Γ_n| = {largest}"),
    );
}

#[test]
fn criterion_12_appendix_bounds() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut decay_ok = 0;
    let mut decay_total = 0;
    while decay_total < 100 {
        let horizon = rng.gen_range(3..=4);
        let b = bratteli::random_simple(&mut rng, horizon);
        let n = horizon;
        let u = random_clopen(&mut rng, &b, 2);
        if u.is_full() {
            continue;
        }
        let Ok(lp) = LevelPaths::new(&b, n) else { continue };
        let k = rng.gen_range(0..=5.min(lp.len()));
        let c = random_paths(&mut rng, &lp, k);
        match kset_decay_bound(&b, &c, &u, n, None) {
            Ok(r) => {
                decay_total += 1;
                if r.holds {
                    decay_ok += 1;
                }
            }
            Err(_) => continue,
        }
    }
    let mut ratio_ok = 0;
    let mut ratio_total = 0;
    let mut undefined = 0;
    while ratio_total < 100 {
        let horizon = rng.gen_range(2..=4);
        let b = bratteli::random_simple(&mut rng, horizon);
        let n = horizon;
        let Ok(lp) = LevelPaths::new(&b, n) else { continue };
        let u = random_clopen(&mut rng, &b, n.min(2));
        let k = rng.gen_range(1..=4.min(lp.len()));
        let z = random_paths(&mut rng, &lp, k);
        match product_ratio_bound(&b, &z, &u, n) {
            Ok(r) => match (r.ratio, r.holds) {
                (Some(ratio), Some(holds)) => {
                    ratio_total += 1;
                    if holds && ratio <= BigRational::one() {
                        ratio_ok += 1;
                    }
                }
                _ => undefined += 1,
            },
            Err(_) => continue,
        }
    }
    finish(
        12,
        start,
        None,
        decay_ok == 100 && ratio_ok == 100,
        format!("decay bound {decay_ok}/{decay_total}; ratio bound {ratio_ok}/{ratio_total} ({undefined} draws with vanishing product skipped)"),
    );
}

fn random_perm_on(rng: &mut ChaCha8Rng, n: usize, support: &[usize]) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    let mut shuffled = support.to_vec();
    shuffled.shuffle(rng);
    for (&from, &to) in support.iter().zip(&shuffled) {
        images[from] = to;
    }
    Perm::from_images(images).unwrap()
}

#[test]
fn criterion_13_finite_facts() {
    let start = Instant::now();
    let mut shapes = 0;
    let mut alt_ok = true;
    for only_x in 0..=10 {
        for both in 1..=10 {
            for only_y in 0..=10 {
                if only_x + both + only_y > 10 || only_x + both < 3 || only_y + both < 3 {
                    continue;
                }
                let x: Vec<usize> = (0..only_x + both).collect();
                let y: Vec<usize> = (only_x..only_x + both + only_y).collect();
                alt_ok &= alt_generation_check(&x, &y).unwrap();
                shapes += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut dc_ok = 0;
    let mut dc_total = 0;
    while dc_total < 1000 {
        let n = rng.gen_range(4..=14);
        let size = rng.gen_range(1..=n / 2);
        let mut points: Vec<usize> = (0..n).collect();
        points.shuffle(&mut rng);
        let u = points[..size].to_vec();
        let gamma = Perm::from_images({
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(&mut rng);
            v
        })
        .unwrap();
        if u.iter().any(|x| u.contains(&gamma.image(*x))) {
            continue;
        }
        let alpha = random_perm_on(&mut rng, n, &u);
        let beta = random_perm_on(&mut rng, n, &u);
        dc_total += 1;
        if double_commutator_check(&gamma, &alpha, &beta, &u).unwrap() {
            dc_ok += 1;
        }
    }
    let mut rs_ok = 0;
    let mut rs_total = 0;
    let mut orders = Vec::new();
    while rs_total < 50 {
        let horizon = rng.gen_range(2..=3);
        let b = bratteli::random_simple(&mut rng, horizon);
        let Ok(lp) = LevelPaths::new(&b, horizon) else { continue };
        if lp.len() > 40 {
            continue;
        }
        let u = random_clopen(&mut rng, &b, horizon);
        let r = rigid_stabilizer_check(&lp, &u).unwrap();
        rs_total += 1;
        if r.equal {
            rs_ok += 1;
        }
        if orders.len() < 5 {
            orders.push(r.stabilizer_order.to_string());
        }
    }
    finish(
        13,
        start,
        None,
        alt_ok && dc_ok == 1000 && rs_ok == 50,
        format!(
            "alt generation over {shapes} shapes: {alt_ok}; double commutator {dc_ok}/{dc_total}; rigid stabilizer {rs_ok}/{rs_total} (first orders {orders:?})"
        ),
    );
}
