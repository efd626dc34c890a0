//! Randomized invariants of coordinates, the metric, horofunctions and stars.


use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dl_horo::dlgraph::{DLVertex, DiestelLeader, PointFamily};
use dl_horo::horofn::{beta_value, horofunction};
use dl_horo::metric::bounds::lower_bounds;
use dl_horo::metric::distance;
use dl_horo::stars::{in_halfspace, HalfspaceQuery};
use dl_horo::treecoord::{Move, TreeParams, TreeVertex};
use dl_horo::verify::random_vertex;

fn vertex(g: &DiestelLeader, seed: u64, max: u32) -> DLVertex {
    random_vertex(g, &mut ChaCha8Rng::seed_from_u64(seed), max).unwrap()
}

fn tree_vertex() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..8, prop::collection::vec(0u32..3, 0..8))
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent((m, path) in tree_vertex()) {
        let tree = TreeParams::new(3).unwrap();
        let v = tree.canonicalize(m, &path).unwrap();
        let labels: Vec<u32> = v.path().iter().map(|l| l.value()).collect();
        let (again, rewritten) = tree.canonicalize_checked(v.m(), &labels).unwrap();
        prop_assert_eq!(&again, &v);
        prop_assert!(!rewritten);
        prop_assert_eq!(v.h(), path.len() as i64 - m as i64);
    }

    #[test]
    fn up_then_down_is_identity((m, path) in tree_vertex(), a in 0u32..3) {
        let tree = TreeParams::new(3).unwrap();
        let v = tree.canonicalize(m, &path).unwrap();
        let up = tree.step(&v, Move::Up(tree.label(a).unwrap())).unwrap();
        prop_assert_eq!(up.h(), v.h() + 1);
        let back = tree.step(&up, Move::Down).unwrap();
        prop_assert_eq!(back, v.clone());
        prop_assert_eq!(tree.step(&v, Move::Down).unwrap().h(), v.h() - 1);
    }

    #[test]
    fn metric_is_symmetric_and_triangular(s1: u64, s2: u64, s3: u64) {
        let g = DiestelLeader::new(3, 2).unwrap();
        let (x, y, z) = (vertex(&g, s1, 7), vertex(&g, s2, 7), vertex(&g, s3, 7));
        let (xy, yz, xz) = (distance(&x, &y).unwrap(), distance(&y, &z).unwrap(), distance(&x, &z).unwrap());
        prop_assert_eq!(xy, distance(&y, &x).unwrap());
        prop_assert!(xz <= xy + yz);
        prop_assert_eq!(xy == 0, x == y);
    }

    #[test]
    fn symmetric_in_other_dimensions(d in 2usize..6, q in 1u32..4, s1: u64, s2: u64) {
        let g = DiestelLeader::new(d, q).unwrap();
        let (x, y) = (vertex(&g, s1, 5), vertex(&g, s2, 5));
        prop_assert_eq!(distance(&x, &y).unwrap(), distance(&y, &x).unwrap());
        prop_assert_eq!(distance(&x, &x).unwrap(), 0);
    }

    #[test]
    fn lower_bounds_hold(s1: u64, s2: u64) {
        let g = DiestelLeader::new(3, 3).unwrap();
        let (x, y) = (vertex(&g, s1, 6), vertex(&g, s2, 6));
        let (tree, index) = lower_bounds(&x, &y).unwrap();
        prop_assert!(tree.verified());
        prop_assert!(index.verified());
    }

    #[test]
    fn halfspace_is_monotone_in_c(s1: u64, s2: u64, s3: u64, c in 0u64..6) {
        let g = DiestelLeader::new(3, 2).unwrap();
        let z = vertex(&g, s1, 5);
        let w = vec![vertex(&g, s2, 5), vertex(&g, s3, 5)];
        let inside = in_halfspace(&z, &HalfspaceQuery::new(w.clone(), c).unwrap()).unwrap();
        let wider = in_halfspace(&z, &HalfspaceQuery::new(w, c + 1).unwrap()).unwrap();
        prop_assert!(!inside || wider);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // The limit only depends on the m-data of β_n, not on which branch it climbs.
    #[test]
    fn beta_limit_ignores_labels(seed: u64, zs: u64) {
        let g = DiestelLeader::new(3, 2).unwrap();
        let params = g.params();
        let family = PointFamily::custom(params, "beta with random labels", move |n| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let mut path = vec![1u32];
            path.extend((1..n).map(|_| rng.gen_range(0..2)));
            let tree = params.tree();
            let t3 = if n == 0 { TreeVertex::basepoint() } else { tree.canonicalize(n, &path)? };
            DiestelLeader::from_params(params).make_vertex(vec![TreeVertex::basepoint(), TreeVertex::basepoint(), t3])
        });
        let z = vertex(&g, zs, 4);
        prop_assert_eq!(horofunction(&family, &z).unwrap(), beta_value(&z).unwrap());
    }
}

#[test]
fn finite_star_formulations_agree() {
    let g = DiestelLeader::new(3, 2).unwrap();
    for n in 1..=20 {
        let b = g.beta(n).unwrap();
        let tail: Vec<DLVertex> = (n..n + 10).map(|m| g.alpha(m).unwrap()).collect();
        assert!(in_halfspace(&b, &HalfspaceQuery::new(tail, 0).unwrap()).unwrap());
    }
}
