use arbor::treecore::Level;
use arbor::{BoundaryRay, Perm, Portrait, ValencySequence, Vertex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn valencies() -> impl Strategy<Value = ValencySequence> {
    prop_oneof![
        Just(ValencySequence::binary()),
        Just(ValencySequence::regular(3)),
        Just(ValencySequence::new(vec![3], vec![2]).unwrap()),
        Just(ValencySequence::new(vec![], vec![2, 3]).unwrap()),
    ]
}

fn portrait(v: &ValencySequence, depth: usize, seed: u64) -> Portrait {
    Portrait::random(v, depth, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn level_indexing_roundtrips(v in valencies(), depth in 0usize..5) {
        let level = Level::new(&v, depth).unwrap();
        let all: Vec<Vertex> = level.vertices().collect();
        prop_assert_eq!(all.len(), level.size());
        for (i, x) in all.iter().enumerate() {
            prop_assert_eq!(level.index_of(x), i);
            prop_assert_eq!(&level.vertex_at(i), x);
        }
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn action_is_a_right_action(v in valencies(), depth in 1usize..5, s in any::<u64>()) {
        let p = portrait(&v, depth, s);
        let q = portrait(&v, depth, s ^ 0x9e37);
        let pq = p.compose(&q).unwrap();
        for x in Level::new(&v, depth).unwrap().vertices() {
            prop_assert_eq!(pq.act(&x).unwrap(), q.act(&p.act(&x).unwrap()).unwrap());
        }
        let pp = p.perm_on_level(depth).unwrap();
        prop_assert_eq!(pq.perm_on_level(depth).unwrap(), pp.then(&q.perm_on_level(depth).unwrap()));
    }

    #[test]
    fn inverse_and_associativity(v in valencies(), depth in 0usize..5, s in any::<u64>()) {
        let p = portrait(&v, depth, s);
        let q = portrait(&v, depth, s.wrapping_add(1));
        let r = portrait(&v, depth, s.wrapping_add(2));
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left.perm_on_level(depth).unwrap(), right.perm_on_level(depth).unwrap());
    }

    #[test]
    fn level_perm_roundtrip(v in valencies(), depth in 0usize..5, s in any::<u64>()) {
        let p = portrait(&v, depth, s);
        let perm = p.perm_on_level(depth).unwrap();
        let back = Portrait::from_level_perm(&v, depth, &perm).unwrap();
        prop_assert_eq!(back.perm_on_level(depth).unwrap(), perm);
    }

    #[test]
    fn sections_act_on_subtrees(v in valencies(), depth in 2usize..5, s in any::<u64>()) {
        let p = portrait(&v, depth, s);
        for u in Level::new(&v, 1).unwrap().vertices() {
            let sec = p.section(&u).unwrap();
            let image = p.act(&u).unwrap();
            for tail in Level::new(&v.shift(1), depth - 1).unwrap().vertices() {
                let full = u.concat(tail.digits());
                prop_assert_eq!(p.act(&full).unwrap(), image.concat(sec.act(&tail).unwrap().digits()));
            }
        }
    }

    #[test]
    fn ray_prefixes_agree(pre in proptest::collection::vec(0usize..2, 0..4), period in proptest::collection::vec(0usize..2, 1..4), n in 0usize..20) {
        let r = BoundaryRay::new(pre, period).unwrap();
        let p = r.prefix(n);
        prop_assert_eq!(p.depth(), n);
        prop_assert!(r.passes_through(&p));
        for j in 0..n {
            prop_assert_eq!(p.digits()[j], r.digit(j + 1));
        }
        prop_assert_eq!(r.shift(n).digit(1), r.digit(n + 1));
    }
}

#[test]
fn rooted_portrait_swaps_halves() {
    let bin = ValencySequence::binary();
    let a = Portrait::rooted(&bin, 3, Perm::from_cycles(2, &[&[0, 1]]).unwrap()).unwrap();
    assert_eq!(a.act(&Vertex::new(vec![0, 1, 1])).unwrap(), Vertex::new(vec![1, 1, 1]));
    assert_eq!(a.activity(0).unwrap(), vec![Vertex::root()]);
    assert!(a.activity(1).unwrap().is_empty());
    assert!(a.compose(&a).unwrap().is_identity());
}

#[test]
fn mismatched_trees_are_rejected() {
    let a = Portrait::identity(&ValencySequence::binary(), 2);
    let b = Portrait::identity(&ValencySequence::regular(3), 2);
    assert!(a.compose(&b).is_err());
    assert!(a.act(&Vertex::new(vec![2])).is_err());
    assert!(a.act(&Vertex::new(vec![0, 0, 0])).is_err());
}
