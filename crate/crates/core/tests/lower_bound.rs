use bdst::lower_bound::{
    alpha_identity_residual, alpha_star, build_instance, build_simplex, finite_ratio, limit_ratio, sigma,
    sigma3_lower_bound, Role, MAX_VERIFIED_N,
};
use bdst::mst;
use bdst::oracles::exact_bounded_degree_mst;

#[test]
fn alpha_star_solves_its_identity() {
    let a = alpha_star();
    assert!((a - 0.173019).abs() < 1e-6);
    assert!(alpha_identity_residual(a).abs() < 1e-12);
    assert!(a > 0.0 && a < 1.0);
}

#[test]
fn simplex_layer_is_regular() {
    let s = build_simplex();
    assert_eq!(s.vertices.len(), 7);
    let mut centroid = [0.0; 6];
    for (i, v) in s.vertices.iter().enumerate() {
        let sq: f64 = v.iter().map(|x| x * x).sum();
        assert!((sq - 6.0).abs() < 1e-12);
        for (c, x) in centroid.iter_mut().zip(v) {
            *c += x;
        }
        for w in &s.vertices[i + 1..] {
            let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            assert!((dot + 1.0).abs() < 1e-12);
            let d2: f64 = v.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum();
            assert!((d2.sqrt() - 14f64.sqrt()).abs() < 1e-12 * 14f64.sqrt());
        }
    }
    assert!(centroid.iter().all(|c| c.abs() < 1e-12));
}

#[test]
fn built_instances_satisfy_every_identity_and_mst_equals_sigma() {
    let a = alpha_star();
    for copies in 1..=MAX_VERIFIED_N {
        let inst = build_instance(copies, a).unwrap();
        assert_eq!(inst.points.len(), 8 * copies + 1);
        assert_eq!(inst.points.dim(), 7 * copies);
        assert_eq!(inst.roles[0], Role::Origin);
        for (name, err) in inst.identity_errors() {
            assert!(err <= 1e-9, "{name}: {err}");
        }
        let s = sigma(copies, a);
        assert!((mst(&inst.points).total_weight() - s).abs() <= 1e-9 * s);
        assert!((inst.tree.total_weight() - s).abs() <= 1e-9 * s);
        assert!(inst.min_charge_slack() >= -1e-9);
    }
}

#[test]
fn exact_degree_three_optimum_respects_the_bound() {
    let a = alpha_star();
    let inst = build_instance(1, a).unwrap();
    let best = exact_bounded_degree_mst(&inst.points, 3).unwrap();
    assert!(best.max_degree() <= 3);
    assert!(best.total_weight() >= sigma3_lower_bound(1, a) * (1.0 - 1e-12));
}

#[test]
fn ratio_increases_to_the_limit() {
    let a = alpha_star();
    let limit = limit_ratio(a);
    assert!((limit - 1.4473).abs() < 1e-4);
    let mut prev = 0.0;
    for copies in [1, 2, 3, 5, 10, 100, 1000, 100_000] {
        let r = finite_ratio(copies, a);
        assert!(r > prev && r < limit);
        prev = r;
    }
    assert!(limit - finite_ratio(1000, a) < 1e-3);
}

#[test]
fn alpha_star_is_the_best_valid_choice_on_a_grid() {
    // the charge premise d(p, q) >= c(p) + c(q) holds exactly for alpha >= alpha*;
    // below it the formula grows but no longer bounds anything
    let a = alpha_star();
    for k in 1..20 {
        let x = k as f64 / 20.0;
        let slack = build_instance(1, x).unwrap().min_charge_slack();
        assert_eq!(slack >= -1e-12, x >= a, "alpha = {x}, slack = {slack}");
        assert_eq!(alpha_identity_residual(x) <= 0.0, x >= a);
    }
    let step = 1e-4;
    let (arg, best) = (1..10_000)
        .map(|k| k as f64 * step)
        .filter(|&x| alpha_identity_residual(x) <= 0.0)
        .map(|x| (x, limit_ratio(x)))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    assert!((arg - a).abs() <= step, "argmax {arg} vs {a}");
    assert!(best <= limit_ratio(a));
    assert!(limit_ratio(0.01) > limit_ratio(a));
}

#[test]
fn invalid_arguments() {
    assert!(build_instance(0, 0.2).is_err());
    assert!(build_instance(1, 0.0).is_err());
    assert!(build_instance(1, 1.0).is_err());
}
