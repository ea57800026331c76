use arbor::coloring::{
    bad_blue_estimate, bad_blue_exhaustive, conjugacy_class, fix_levels, k_i_subgroup, Color, ClosedSetSpec, Coloring, SubgroupSpec,
};
use arbor::permgrp::LevelQuotient;
use arbor::selfsim::builtin;
use arbor::treecore::Level;
use arbor::{BoundaryRay, Portrait, ValencySequence, Vertex};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const D: usize = 3;

/// Color of `v` computed from the raw cylinders and rays.
fn oracle(cyls: &[Vertex], rays: &[BoundaryRay], v: &Vertex) -> Color {
    let bin = ValencySequence::binary();
    let inside = |w: &Vertex| cyls.iter().any(|c| c.is_prefix_of(w));
    let (covered, hit) = if v.depth() >= D {
        let w = v.prefix(D);
        (inside(&w), inside(&w))
    } else {
        let below = v.descendants(&bin, D - v.depth());
        (below.iter().all(inside), below.iter().any(inside))
    };
    if covered {
        Color::Green
    } else if hit || rays.iter().any(|r| r.passes_through(v)) {
        Color::Blue
    } else {
        Color::Red
    }
}

fn closed_sets() -> impl Strategy<Value = (Vec<Vertex>, Vec<BoundaryRay>)> {
    let cyl = proptest::collection::vec(0usize..2, 1..=D).prop_map(Vertex::new);
    let ray = (proptest::collection::vec(0usize..2, 0..3), proptest::collection::vec(0usize..2, 1..3))
        .prop_map(|(p, q)| BoundaryRay::new(p, q).unwrap());
    (proptest::collection::vec(cyl, 0..4), proptest::collection::vec(ray, 0..3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colors_match_oracle((cyls, rays) in closed_sets()) {
        let bin = ValencySequence::binary();
        let set = ClosedSetSpec::new(cyls.clone(), rays.clone());
        let col = Coloring::new(&set, &bin, 6).unwrap();
        for i in 0..=6 {
            for v in Level::new(&bin, i).unwrap().vertices() {
                prop_assert_eq!(col.color(&v), oracle(&cyls, &rays, &v), "vertex {}", v);
            }
        }
    }

    #[test]
    fn coloring_is_hereditary((cyls, rays) in closed_sets()) {
        let bin = ValencySequence::binary();
        let col = Coloring::new(&ClosedSetSpec::new(cyls, rays), &bin, 6).unwrap();
        for i in 0..6 {
            for v in Level::new(&bin, i).unwrap().vertices() {
                let kids: Vec<Color> = (0..2).map(|x| col.color(&v.child(x))).collect();
                match col.color(&v) {
                    Color::Red => prop_assert!(kids.iter().all(|&c| c == Color::Red)),
                    Color::Green => prop_assert!(kids.iter().all(|&c| c == Color::Green)),
                    Color::Blue => prop_assert!(kids.iter().any(|&c| c == Color::Blue) || kids.contains(&Color::Red) && kids.contains(&Color::Green)),
                }
            }
            prop_assert!(col.q_b(i + 1) <= col.q_b(i));
        }
        let index = col.index_set();
        for i in 0..=6 {
            for v in col.red(i) {
                prop_assert_eq!(index.iter().filter(|u| u.is_prefix_of(&v)).count(), 1);
            }
        }
    }

    #[test]
    fn translation_moves_colors((cyls, rays) in closed_sets(), seed in any::<u64>()) {
        let bin = ValencySequence::binary();
        let set = ClosedSetSpec::new(cyls, rays);
        let g = Portrait::random(&bin, 5, &mut ChaCha8Rng::seed_from_u64(seed));
        let moved = set.translate_finitary(&g).unwrap();
        let (a, b) = (Coloring::new(&set, &bin, 5).unwrap(), Coloring::new(&moved, &bin, 5).unwrap());
        for i in 0..=5 {
            for v in Level::new(&bin, i).unwrap().vertices() {
                prop_assert_eq!(b.color(&g.act(&v).unwrap()), a.color(&v));
            }
        }
    }
}

#[test]
fn approximating_subgroup_structure() {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 5).unwrap();
    let h = SubgroupSpec::spine(1, 5).realize(&g, &q).unwrap();
    let col = Coloring::new(&ClosedSetSpec::ray(BoundaryRay::constant(1)), g.valency(), 8).unwrap();
    for i in 0..=2 {
        let k = k_i_subgroup(&q, &h, &col, i, 3).unwrap();
        assert!(k.group.is_subgroup_of(q.group()));
        assert!(k.h_part.is_subgroup_of(&h));
        assert!(k.h_part.is_subgroup_of(&k.group));
        assert!(k.rist_part.is_subgroup_of(&k.group));
        assert_eq!(&k.index * k.group.order(), q.group().order().clone());
        assert_eq!(k.blue, col.blue(i));
    }
    assert!(k_i_subgroup(&q, &h, &col, 3, 3).is_err());
}

#[test]
fn sampling_tracks_exhaustive_counts() {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 5).unwrap();
    let h = SubgroupSpec::spine(1, 5).realize(&g, &q).unwrap();
    let col = Coloring::new(&ClosedSetSpec::ray(BoundaryRay::constant(1)), g.valency(), 8).unwrap();
    let k = k_i_subgroup(&q, &h, &col, 2, 3).unwrap();
    for w in ["b", "d", "ab"] {
        let p = q.word_image(&g.parse_word(w).unwrap());
        let exact = bad_blue_exhaustive(&q, &h, &k, &p, 1_000_000).unwrap();
        let est = bad_blue_estimate(&q, &h, &k, &p, 4000, 7);
        let (pe, ps) = (exact.symdiff_prob().to_f64().unwrap(), est.symdiff_prob().to_f64().unwrap());
        let se = (pe * (1.0 - pe) / 4000.0).sqrt();
        assert!((pe - ps).abs() <= 4.0 * se + 1e-9, "{w}: exact {pe}, sampled {ps}");
        assert_eq!(bad_blue_estimate(&q, &h, &k, &p, 500, 7), bad_blue_estimate(&q, &h, &k, &p, 500, 7));
        let class = conjugacy_class(q.group(), &p, 1_000_000).unwrap();
        assert_eq!(q.group().order() % BigUint::from(class.len()), BigUint::from(0u32));
        assert!(class.iter().all(|c| c.order() == p.order()));
    }
}

#[test]
fn spine_fixes_its_ray() {
    let g = builtin::grigorchuk();
    let q = LevelQuotient::new(&g, 4).unwrap();
    let h = SubgroupSpec::spine(1, 4).realize(&g, &q).unwrap();
    let fix = fix_levels(&q, &h);
    for (i, level) in fix.levels.iter().enumerate() {
        assert!(level.contains(&Vertex::new(vec![1; i])));
    }
    let spec = SubgroupSpec::WordGenerated(vec!["b".into(), "aca".into()]);
    let json = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<SubgroupSpec>(&json).unwrap(), spec);
}
