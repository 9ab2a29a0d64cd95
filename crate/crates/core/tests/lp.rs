use bdst::constants::R_STAR;
use bdst::lp::{
    analyze, block_id, build_block_system, check_infeasible, parse_decimal, satisfies, FarkasCertificate,
    LpOutcome, Rational, Relation, N3_ID, NORMALIZATION_ID,
};
use bdst::Error;
use num_traits::{One, Signed, Zero};

#[test]
fn block_system_has_a_valid_certificate() {
    let lp = build_block_system();
    let cert = check_infeasible(&lp).unwrap();
    let contradiction = cert.verify(&lp).unwrap();
    assert!(contradiction.constant.is_positive() || contradiction.strict);
    for c in &lp.constraints {
        if c.relation != Relation::Eq {
            if let Some(y) = cert.multipliers.get(&c.id) {
                assert!(!y.is_negative(), "{}", c.id);
            }
        }
    }
    // every multiplier is rendered as an exact fraction
    for v in cert.to_json().values() {
        let (p, q) = v.split_once('/').unwrap_or((v, "1"));
        assert!(p.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()));
        assert!(q.chars().all(|c| c.is_ascii_digit()));
    }
}

#[test]
fn certificate_survives_scaling_and_not_tampering() {
    let lp = build_block_system();
    let cert = check_infeasible(&lp).unwrap();
    let scaled = FarkasCertificate {
        multipliers: cert.multipliers.iter().map(|(k, v)| (k.clone(), v * Rational::from_integer(7.into()))).collect(),
    };
    scaled.verify(&lp).unwrap();

    let (id, _) = cert.multipliers.iter().find(|(_, v)| v.is_positive()).unwrap();
    let mut nudged = cert.clone();
    *nudged.multipliers.get_mut(id).unwrap() += Rational::new(1.into(), 1000.into());
    assert!(matches!(nudged.verify(&lp), Err(Error::Verification(_))));

    let empty = FarkasCertificate { multipliers: Default::default() };
    assert!(empty.verify(&lp).is_err());
}

#[test]
fn homogeneous_system_is_refuted_by_the_same_certificate() {
    let lp = build_block_system();
    let cert = check_infeasible(&lp).unwrap();
    let homogeneous = lp.homogeneous();
    assert!(homogeneous.constraint(NORMALIZATION_ID).is_none());
    // the certificate never leans on the normalization row
    assert!(cert.multipliers.get(NORMALIZATION_ID).is_none_or(|y| y.is_zero()));
    cert.verify(&homogeneous).unwrap();
    check_infeasible(&homogeneous).unwrap();
}

#[test]
fn dropping_the_largest_block_row_makes_the_system_feasible() {
    let lp = build_block_system().without(&block_id(10));
    match analyze(&lp).unwrap() {
        LpOutcome::Feasible(x) => {
            assert!(satisfies(&lp, &x));
            assert!(!satisfies(&build_block_system(), &x));
            assert_eq!(x[0], Rational::one());
        }
        LpOutcome::Infeasible(_) => panic!("block_10 should be necessary"),
    }
    assert!(matches!(check_infeasible(&lp), Err(Error::Feasible { .. })));
}

#[test]
fn closing_the_strict_row_admits_the_zero_tail() {
    let mut lp = build_block_system();
    for c in lp.constraints.iter_mut().filter(|c| c.id == N3_ID) {
        c.relation = Relation::Ge;
    }
    let mut x = vec![Rational::zero(); lp.num_vars];
    x[0] = Rational::one();
    x[1] = Rational::one();
    assert!(satisfies(&lp, &x));
    assert!(matches!(analyze(&lp).unwrap(), LpOutcome::Feasible(_)));
}

#[test]
fn folding_the_top_two_distances_never_helps_the_adversary() {
    // 1.5(d1 - d2) + 3(d2 - d3) - r*(d1 + d2 - 2 d3) <= 0 for d1 >= d2 >= d3 >= 0
    let steps = 40;
    for a in 0..=steps {
        for b in 0..=a {
            for c in 0..=b {
                let (d1, d2, d3) = (a as f64 / 10.0, b as f64 / 10.0, c as f64 / 10.0);
                let excess = 1.5 * (d1 - d2) + 3.0 * (d2 - d3) - R_STAR * (d1 + d2 - 2.0 * d3);
                assert!(excess <= 1e-12, "({d1}, {d2}, {d3}) -> {excess}");
            }
        }
    }
}

#[test]
fn exact_constants_round_trip() {
    assert_eq!(parse_decimal("1.559").unwrap(), Rational::new(1559.into(), 1000.into()));
    let lp = build_block_system();
    let n3 = lp.constraint(N3_ID).unwrap();
    assert_eq!(n3.relation, Relation::Gt);
    assert_eq!(n3.coeffs[2], -parse_decimal("0.541").unwrap());
    assert_eq!(n3.coeffs[3], Rational::one());
}
