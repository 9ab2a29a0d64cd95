use bdst::constants::R_STAR;
use bdst::generate::{generate_instances, random_suite, InstanceKind};
use bdst::geometry::PointSet;
use bdst::lower_bound::{alpha_star, build_instance, sigma3_lower_bound};
use bdst::mst;
use bdst::tree3::{degree3_tree, degree3_tree_with, rewire, root_choice, verify, RootedTree, Tree3Options};
use rayon::prelude::*;

const KINDS: [InstanceKind; 5] = [
    InstanceKind::UniformBall,
    InstanceKind::Gaussian,
    InstanceKind::Clustered,
    InstanceKind::NearTie,
    InstanceKind::HeavyTailed,
];

#[test]
fn random_point_sets_get_degree_three_trees_within_ratio() {
    let cases = random_suite(31, 400, &KINDS, 1, 200, 8).unwrap();
    let worst = cases
        .par_iter()
        .map(|c| {
            let ps = c.points().unwrap();
            let r = degree3_tree(&ps).unwrap();
            verify(&ps, &r, 1e-9).unwrap_or_else(|e| panic!("{c:?}: {e}"));
            assert_eq!(r.tree.edges().len(), ps.len() - 1);
            r.ratio()
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= R_STAR * (1.0 + 1e-9));
}

#[test]
fn dense_grid_with_massive_ties() {
    // 5x5x5 lattice: every interior MST vertex could take six neighbours
    let mut rows = Vec::new();
    for x in 0..5 {
        for y in 0..5 {
            for z in 0..5 {
                rows.push(vec![x as f64, y as f64, z as f64]);
            }
        }
    }
    let ps = PointSet::from_rows(rows).unwrap();
    let r = degree3_tree(&ps).unwrap();
    verify(&ps, &r, 1e-9).unwrap();
}

#[test]
fn keep_if_feasible_only_when_the_mst_qualifies() {
    let line = generate_instances(InstanceKind::Gaussian, 50, 1, 4).unwrap();
    let kept = degree3_tree_with(&line, Tree3Options { keep_if_feasible: true }).unwrap();
    assert_eq!(kept.tree, kept.mst);

    let lb = build_instance(1, alpha_star()).unwrap();
    let opts = Tree3Options { keep_if_feasible: true };
    let r = degree3_tree_with(&lb.points, opts).unwrap();
    assert!(r.mst.max_degree() > 3);
    assert!(r.tree.max_degree() <= 3);
}

#[test]
fn lower_bound_instance_binds_the_construction() {
    for copies in 1..=3 {
        let inst = build_instance(copies, alpha_star()).unwrap();
        let r = degree3_tree(&inst.points).unwrap();
        verify(&inst.points, &r, 1e-9).unwrap();
        assert!(r.tree.total_weight() >= sigma3_lower_bound(copies, alpha_star()) * (1.0 - 1e-12));
    }
}

#[test]
fn rooting_and_rewiring_are_consistent() {
    let ps = generate_instances(InstanceKind::Clustered, 120, 3, 8).unwrap();
    let t = mst(&ps);
    let root = root_choice(&t);
    assert_eq!(t.degrees()[root], *t.degrees().iter().min().unwrap());
    let rooted = RootedTree::new(&t, root).unwrap();
    assert!(rooted.parent[root].is_none());
    assert_eq!(rooted.children.iter().map(Vec::len).sum::<usize>(), ps.len() - 1);
    let a = rewire(&ps, &t).unwrap();
    let b = rewire(&ps, &t).unwrap();
    assert_eq!(a, b);
}
