use arbor::bratteli::{
    self, count_meeting, element_from_multisection, ergodic_average_point, gamma_group, inclusion_probability, lda_act, lda_compose,
    lda_uniform, meeting_counts, odometer, product_ratio_bound, BratteliDiagram, BratteliError, ClopenSet, FinitePath, LevelGroupElement,
    LevelPaths, Multisection,
};
use arbor::Perm;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn diagram(seed: u64, horizon: usize) -> BratteliDiagram {
    bratteli::random_simple(&mut ChaCha8Rng::seed_from_u64(seed), horizon)
}

/// All root paths of length `n`, by brute force over edge index tuples.
fn brute_paths(b: &BratteliDiagram, n: usize) -> Vec<FinitePath> {
    let mut out = vec![Vec::new()];
    for i in 1..=n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| (0..b.edges(i).len()).map(move |e| [p.clone(), vec![e]].concat()))
            .collect();
    }
    out.into_iter().filter_map(|p| FinitePath::new(b, p).ok()).collect()
}

fn random_clopen(b: &BratteliDiagram, depth: usize, seed: u64) -> ClopenSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lp = LevelPaths::new(b, depth).unwrap();
    let picks: Vec<FinitePath> = lp.paths().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    ClopenSet::from_paths(b, &picks)
}

fn ratio(a: &BigUint, b: &BigUint) -> BigRational {
    BigRational::new(a.clone().into(), b.clone().into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_transfer_counts(seed in any::<u64>(), n in 0usize..4) {
        let b = diagram(seed, 3);
        let lp = LevelPaths::new(&b, n).unwrap();
        let brute = brute_paths(&b, n);
        prop_assert_eq!(lp.paths(), &brute[..]);
        let counts = b.path_count(n).unwrap();
        for (v, c) in counts.iter().enumerate() {
            prop_assert_eq!(&BigUint::from(lp.degree(v)), c);
        }
        for (i, p) in lp.paths().iter().enumerate() {
            prop_assert_eq!(lp.index_of(p).unwrap(), i);
        }
    }

    #[test]
    fn telescoping_preserves_counts(seed in any::<u64>(), mask in 1u8..16) {
        let b = diagram(seed, 4);
        let cuts: Vec<usize> = (1..=4).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let t = b.telescope(&cuts).unwrap();
        for (j, &c) in cuts.iter().enumerate() {
            prop_assert_eq!(t.path_count(j + 1).unwrap(), b.path_count(c).unwrap());
        }
        if t.horizon() >= 2 && cuts.last() == Some(&4) {
            prop_assert!(t.is_simple(t.horizon()).unwrap().simple);
        }
    }

    #[test]
    fn transfer_matrices_compose(seed in any::<u64>(), a in 0usize..2, mid in 0usize..3) {
        let b = diagram(seed, 4);
        let m = a + mid;
        let (t1, t2, t) = (b.transfer(a, m).unwrap(), b.transfer(m, 4).unwrap(), b.transfer(a, 4).unwrap());
        for (v, row) in t.iter().enumerate() {
            for (w, x) in row.iter().enumerate() {
                let via: BigUint = (0..b.level_size(m)).map(|u| &t1[v][u] * &t2[u][w]).sum();
                prop_assert_eq!(&via, x);
            }
        }
    }

    #[test]
    fn prefix_counts_and_markov_bound(seed in any::<u64>(), k in 0usize..2) {
        let b = diagram(seed, 4);
        let p = LevelPaths::new(&b, k).unwrap().path(0).clone();
        let top = LevelPaths::new(&b, 4).unwrap();
        for v in 0..b.level_size(4) {
            let brute = top.ending_at(v).iter().filter(|&&i| top.path(i).starts_with(&p)).count();
            prop_assert_eq!(b.count_with_prefix(&p, 4, v).unwrap(), BigUint::from(brute));
        }
        prop_assert_eq!(b.count_with_prefix(&FinitePath::root(), 3, 0).unwrap(), b.path_count(3).unwrap()[0].clone());
        let full = LevelPaths::new(&b, 3).unwrap();
        let q = full.path(0);
        for v in 0..b.level_size(3) {
            let expect = if v == q.end() { BigUint::one() } else { BigUint::zero() };
            prop_assert_eq!(b.count_with_prefix(q, 3, v).unwrap(), expect);
        }
        if let Some(m) = b.connecting_level(k, 4) {
            prop_assert!(b.markov_check(&p, m, 4).unwrap().holds);
        }
    }

    #[test]
    fn meeting_counts_are_additive_and_monotone(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let b = diagram(seed, 4);
        let u = random_clopen(&b, 2, s1);
        let w = random_clopen(&b, 3, s2);
        let n = 4;
        let cu = meeting_counts(&b, n, &u).unwrap();
        let cc = meeting_counts(&b, n, &u.complement(&b).unwrap()).unwrap();
        let total = b.path_count(n).unwrap();
        let lp = LevelPaths::new(&b, n).unwrap();
        for v in 0..total.len() {
            prop_assert_eq!(&(&cu[v] + &cc[v]), &total[v]);
            let brute = lp.ending_at(v).iter().filter(|&&i| u.contains(lp.path(i)).unwrap()).count();
            prop_assert_eq!(&cu[v], &BigUint::from(brute));
            prop_assert_eq!(count_meeting(&b, n, v, &u).unwrap(), cu[v].clone());
        }
        let uw = u.union(&b, &w);
        prop_assert!(u.is_subset(&b, &uw).unwrap() && w.is_subset(&b, &uw).unwrap());
        let cuw = meeting_counts(&b, n, &uw).unwrap();
        let cw = meeting_counts(&b, n, &w).unwrap();
        for v in 0..total.len() {
            prop_assert!(cuw[v] >= cu[v] && cuw[v] >= cw[v] && cuw[v] <= &cu[v] + &cw[v]);
        }
        prop_assert_eq!(u.complement(&b).unwrap().complement(&b).unwrap(), u.clone());
    }

    #[test]
    fn inclusion_probability_is_monotone(s1 in any::<u64>(), s2 in any::<u64>(), k in 0usize..4) {
        let b = odometer(3, 4);
        let u = random_clopen(&b, 2, s1);
        let w = u.union(&b, &random_clopen(&b, 2, s2));
        let lp = LevelPaths::new(&b, 3).unwrap();
        let c: Vec<FinitePath> = lp.paths().iter().step_by(5).take(k).cloned().collect();
        let pu = inclusion_probability(&b, &c, &u, 3).unwrap();
        let pw = inclusion_probability(&b, &c, &w, 3).unwrap();
        prop_assert!(pu <= pw);
        prop_assert!(pu >= BigRational::zero() && pw <= BigRational::one());
    }

    #[test]
    fn lda_composition_is_an_action(seed in any::<u64>(), s in any::<u64>()) {
        let b = diagram(seed, 3);
        let lp = LevelPaths::new(&b, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let g = lda_uniform(&lp, true, &mut rng);
        let h = lda_uniform(&lp, true, &mut rng);
        prop_assert!(g.is_even() && h.is_even());
        let gh = lda_compose(&g, &h).unwrap();
        prop_assert!(gh.is_even() && gh.parity_restricted());
        prop_assert_eq!(gh.to_perm(&lp), g.to_perm(&lp).then(&h.to_perm(&lp)));
        for x in LevelPaths::new(&b, 3).unwrap().paths() {
            let y = lda_act(&lp, &gh, x).unwrap();
            prop_assert_eq!(&y, &lda_act(&lp, &h, &lda_act(&lp, &g, x).unwrap()).unwrap());
            prop_assert_eq!(y.end(), x.end());
            prop_assert_eq!(&y.edges()[2..], &x.edges()[2..]);
        }
        prop_assert!(gamma_group(&lp, true).contains(&gh.to_perm(&lp)));
    }
}

#[test]
fn ergodic_average_vanishes_off_the_cylinder_vertex() {
    let b = bratteli::two_chains(4);
    let lp = LevelPaths::new(&b, 2).unwrap();
    let x = lp.path(lp.ending_at(0)[0]);
    let y = lp.path(lp.ending_at(1)[0]);
    let u = ClopenSet::cylinder(&b, y);
    assert!(matches!(ergodic_average_point(&b, x, &u, 2), Err(BratteliError::Degree { .. })));
    let merged = BratteliDiagram::new(
        vec![1, 2, 2],
        vec![vec![(0, 0), (0, 0), (0, 0), (0, 1), (0, 1), (0, 1)], vec![(0, 0), (1, 1), (0, 0), (1, 1), (1, 0), (0, 1)]],
    )
    .unwrap();
    let lp = LevelPaths::new(&merged, 1).unwrap();
    let x = FinitePath::new(&merged, vec![0, 0]).unwrap();
    let y = lp.path(lp.ending_at(1)[0]);
    assert_eq!(x.prefix(&merged, 1).unwrap().end(), 0);
    let u = ClopenSet::cylinder(&merged, y);
    assert!(ergodic_average_point(&merged, &x, &u, 1).unwrap().is_zero());
    let v = ClopenSet::cylinder(&merged, lp.path(0));
    assert_eq!(ergodic_average_point(&merged, &x, &v, 1).unwrap(), ratio(&BigUint::one(), &BigUint::from(3u32)));
}

#[test]
fn ratio_tends_to_one_along_the_odometer() {
    let b = odometer(2, 12);
    let u = ClopenSet::new(&b, &[vec![0]]).unwrap();
    let mut last = BigRational::zero();
    for n in 3..=12 {
        let lp = LevelPaths::new(&b, n).unwrap();
        let k: Vec<FinitePath> = [0, 1, lp.len() / 2].iter().map(|&i| lp.path(i).clone()).collect();
        let r = product_ratio_bound(&b, &k, &u, n).unwrap();
        let value = r.ratio.clone().unwrap();
        assert_eq!(r.holds, Some(true));
        assert!(value >= last, "level {n}");
        last = value;
    }
    let gap = BigRational::one() - last;
    assert!(gap < ratio(&BigUint::one(), &BigUint::from(100u32)));
}

#[test]
fn multisection_elements_compose_like_permutations() {
    let b = odometer(2, 3);
    let lp = LevelPaths::new(&b, 3).unwrap();
    let comps: Vec<Vec<FinitePath>> = (0..3).map(|i| vec![lp.path(2 * i).clone(), lp.path(2 * i + 1).clone()]).collect();
    let f = Multisection::aligned(&lp, comps.clone()).unwrap();
    let pi = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
    let sigma = Perm::from_cycles(3, &[&[0, 2, 1]]).unwrap();
    let a = element_from_multisection(&lp, &f, &pi, true).unwrap();
    let c = element_from_multisection(&lp, &f, &sigma, true).unwrap();
    let ac = lda_compose(&a, &c).unwrap();
    assert_eq!(ac.to_perm(&lp), element_from_multisection(&lp, &f, &pi.then(&sigma), true).unwrap().to_perm(&lp));
    assert!(ac.is_identity());
    assert_eq!(a.support_size(), 6);
    let odd = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
    assert!(matches!(element_from_multisection(&lp, &f, &odd, true), Err(BratteliError::Parity(_))));
    assert!(element_from_multisection(&lp, &f, &odd, false).unwrap().to_perm(&lp).fixes(6));
    let overlapping = vec![comps[0].clone(), comps[0].clone()];
    assert!(Multisection::aligned(&lp, overlapping).is_err());
    let bad_cocycle = vec![vec![vec![0, 1], vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 1], vec![0, 1]], vec![vec![0, 1], vec![0, 1], vec![0, 1]]];
    assert!(Multisection::new(&lp, comps, bad_cocycle).is_err());
    assert!(LevelGroupElement::identity(&lp, true).is_identity());
}
