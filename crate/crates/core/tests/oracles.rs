use bdst::generate::{generate_instances, random_suite, rng, InstanceKind};
use bdst::geometry::{Point, PointSet};
use bdst::mst;
use bdst::oracles::{
    average_path_coefficients, closed_form_path_coefficients, exact_bounded_degree_mst, shortest_path_through,
    EndpointReading, PathQuery, PathStart,
};
use num_rational::Rational64;
use rand::Rng;

fn d(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Tries every ordering of `interior`.
fn factorial_path(start: &[f64], ps: &PointSet, interior: &[usize], ends: Option<&[usize]>) -> f64 {
    fn go(
        at: &[f64],
        ps: &PointSet,
        left: &mut Vec<usize>,
        ends: Option<&[usize]>,
        acc: f64,
        last: Option<usize>,
        best: &mut f64,
    ) {
        if left.is_empty() {
            if ends.is_none_or(|e| last.is_some_and(|l| e.contains(&l))) && acc < *best {
                *best = acc;
            }
            return;
        }
        for k in 0..left.len() {
            let v = left.swap_remove(k);
            let p = ps.get(v).unwrap().coords();
            go(p, ps, left, ends, acc + d(at, p), Some(v), best);
            left.push(v);
            let n = left.len();
            left.swap(k, n - 1);
        }
    }
    let mut best = f64::INFINITY;
    go(start, ps, &mut interior.to_vec(), ends, 0.0, None, &mut best);
    best
}

#[test]
fn held_karp_matches_factorial_enumeration() {
    let mut r = rng(17);
    let mut checked = 0;
    for case in 0..120u64 {
        let m = 1 + (case as usize % 7);
        let dim = 1 + (case as usize % 4);
        let kind = [InstanceKind::Gaussian, InstanceKind::NearTie, InstanceKind::UniformBall][case as usize % 3];
        let ps = generate_instances(kind, m + 1, dim, 1000 + case).unwrap();
        let interior: Vec<usize> = (1..=m).collect();
        let ends: Option<Vec<usize>> = (case % 2 == 1).then(|| {
            let k = r.random_range(1..=m);
            interior.iter().copied().filter(|v| v % k == 0 || *v == k).collect()
        });

        let from_vertex = shortest_path_through(&PathQuery {
            points: &ps,
            start: PathStart::Vertex(0),
            interior: interior.clone(),
            ends: ends.clone(),
        })
        .unwrap();
        let brute = factorial_path(ps.get(0).unwrap().coords(), &ps, &interior, ends.as_deref());
        assert!((from_vertex.length - brute).abs() <= 1e-12 * brute.max(1.0), "case {case}");
        assert_eq!(from_vertex.order[0], 0);
        let walked: f64 = from_vertex
            .order
            .windows(2)
            .map(|w| d(ps.get(w[0]).unwrap().coords(), ps.get(w[1]).unwrap().coords()))
            .sum();
        assert!((walked - from_vertex.length).abs() <= 1e-12 * brute.max(1.0));

        // an external start point
        let origin = Point::new(vec![0.25; dim]).unwrap();
        let from_point = shortest_path_through(&PathQuery {
            points: &ps,
            start: PathStart::Point(origin.clone()),
            interior: interior.clone(),
            ends: None,
        })
        .unwrap();
        let brute = factorial_path(origin.coords(), &ps, &interior, None);
        assert!((from_point.length - brute).abs() <= 1e-12 * brute.max(1.0), "case {case}");
        assert_eq!(from_point.order.len(), m);
        checked += 1;
    }
    assert_eq!(checked, 120);
}

#[test]
fn mst_matches_prufer_enumeration_up_to_eight_points() {
    let kinds = [InstanceKind::UniformBall, InstanceKind::Gaussian, InstanceKind::Clustered, InstanceKind::NearTie];
    let suite = random_suite(8, 160, &kinds, 1, 8, 5).unwrap();
    for case in &suite {
        let ps = case.points().unwrap();
        let fast = mst(&ps);
        let exact = exact_bounded_degree_mst(&ps, ps.len().max(2) - 1).unwrap();
        let w = fast.total_weight();
        assert!((w - exact.total_weight()).abs() <= 1e-9 * w.max(1.0), "{case:?}");
    }
}

#[test]
fn degree_cap_costs_weight_and_is_respected() {
    let suite = random_suite(3, 30, &[InstanceKind::Gaussian, InstanceKind::UniformBall], 4, 8, 3).unwrap();
    for case in &suite {
        let ps = case.points().unwrap();
        let free = exact_bounded_degree_mst(&ps, ps.len() - 1).unwrap();
        let mut prev = free.total_weight();
        for cap in (2..=3).rev() {
            let t = exact_bounded_degree_mst(&ps, cap).unwrap();
            assert!(t.max_degree() <= cap);
            assert!(t.total_weight() >= prev - 1e-12 * prev);
            prev = t.total_weight();
        }
    }
}

#[test]
fn path_coefficients_match_closed_form_for_three_to_eight() {
    for n in 3..=8 {
        let averaged = average_path_coefficients(n, EndpointReading::EndsAtOneOrTwo).unwrap();
        let closed = closed_form_path_coefficients(n);
        assert_eq!(averaged, closed, "n = {n}");
        let m = (n - 1) as i64;
        assert_eq!(closed[&(1, 2)], Rational64::new(1, m));
        assert_eq!(closed[&(1, n + 1)], Rational64::new(1, 2 * m));
        assert_eq!(closed[&(1, 3)], Rational64::new(3, 2 * m));
        if n >= 4 {
            assert_eq!(closed[&(3, 4)], Rational64::new(2, m));
        }
        assert_eq!(closed[&(3, n + 1)], Rational64::new(1, m));
    }
}

#[test]
fn literal_endpoint_reading_disagrees() {
    for n in 3..=8 {
        let literal = average_path_coefficients(n, EndpointReading::LastTwoAreOneAndTwo).unwrap();
        let closed = closed_form_path_coefficients(n);
        // the apex is never adjacent to 1 or 2 when both close the path
        assert_eq!(literal.get(&(1, n + 1)).copied().unwrap_or_default(), Rational64::from_integer(0));
        assert_ne!(literal, closed);
    }
}
