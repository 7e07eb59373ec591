use num_bigint::BigInt;
use staircase_core::perfclass::*;
use staircase_core::QuadNum;

fn beta() -> QuadNum {
    QuadNum::quad((1, 2), (5, 12), 30)
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[test]
fn literal_tuples() {
    assert_eq!(outer_family(0).to_string(), "(3,1,7,1,4)");
    assert_eq!(outer_family(1).to_string(), "(64,23,155,19,82)");
    assert_eq!(outer_family(2).to_string(), "(1405,505,3403,417,1800)");
    assert_eq!(inner_family(2).unwrap().to_string(), "(115193,41404,279005,34189,147578)");
    // t is forced by 4d = p + q + t.
    assert_eq!(inner_family(1).unwrap().to_string(), "(239,86,579,71,306)");
    let printed = qp_check(&tuple(239, 86, 579, 71, 250));
    assert!(!printed.ok);
    assert!(printed.violations.iter().any(|v| v.starts_with("4d = p+q+t")));
}

#[test]
fn families_pass_check_to_depth_20() {
    for c in outer_classes(20).iter().chain(inner_classes(20).unwrap().iter()) {
        assert!(qp_check(&c.tuple()).ok, "{c}");
        assert_eq!(quad_form(&c.tuple(), &c.tuple()), big(8));
    }
}

#[test]
fn recursion_from_seeds() {
    let e = recurse(&outer_family(0), &outer_family(1), &big(22), 1).unwrap();
    assert_eq!(e, vec![outer_family(2)]);
    assert_eq!(quad_form(&outer_family(1).tuple(), &outer_family(0).tuple()), big(88));
}

#[test]
fn adjacency_and_compatibility_along_families() {
    let outer = outer_classes(11);
    let inner = inner_classes(11).unwrap();
    let e = step_class();
    for k in 0..=10 {
        assert!(adjacency(&outer[k], &outer[k + 1]), "k={k}");
        assert!(t_compat(&outer[k], &outer[k + 1], &big(22)), "k={k}");
        assert!(adjacency(&inner[k], &outer[k + 1]), "k={k}");
        assert!(t_compat(&inner[k], &outer[k + 1], outer[k].t()), "k={k}");
        let p = ClassTriple::new(outer[k].clone(), outer[k + 1].clone(), e.clone()).unwrap();
        p.check_identities().unwrap_or_else(|m| panic!("outer triple k={k}: {m}"));
        let q = ClassTriple::new(outer[k].clone(), inner[k].clone(), outer[k + 1].clone()).unwrap();
        q.check_identities().unwrap_or_else(|m| panic!("inner triple k={k}: {m}"));
    }
}

#[test]
fn compatibility_matches_center_gap() {
    // For adjacent classes t''-compatibility is |p'q - pq'| = t''.
    let (a, b) = (outer_family(0), outer_family(1));
    assert_eq!((b.p() * a.q() - a.p() * b.q()), big(22));
}

#[test]
fn ech_indices() {
    assert_eq!(ech_index(&step_class()), big(125));
    assert_eq!(ech_index(&outer_family(0)), big(7));
    assert_eq!(ech_index(&inner_family(1).unwrap()), big(20879));
    for c in outer_classes(15).iter().chain(inner_classes(15).unwrap().iter()) {
        ech_index(c);
    }
}

#[test]
fn mu_examples() {
    let b = beta();
    let e0 = outer_family(0);
    assert_eq!(mu(&e0, &b, &QuadNum::from(7)).unwrap(), &QuadNum::from(7) / &(&QuadNum::from(3) + &b));
    assert_eq!(mu(&e0, &b, &QuadNum::from(6)).unwrap(), &QuadNum::from(6) / &(&QuadNum::from(3) + &b));
}

#[test]
fn mu_at_center_is_peak() {
    let b = beta();
    for c in outer_classes(6).iter().chain(inner_classes(6).unwrap().iter()).chain([step_class()].iter()) {
        assert_eq!(mu(c, &b, &c.center()).unwrap(), c.peak(&b), "{c}");
    }
}

#[test]
fn mu_rises_linearly_to_its_peak() {
    // Sampled on [p/q - 1/q^2, p/q].
    let b = beta();
    let mut classes = outer_classes(3);
    classes.extend(inner_classes(2).unwrap());
    classes.push(step_class());
    for c in &classes {
        let q = QuadNum::from(c.q());
        let span = (&q * &q).recip().unwrap();
        let lo = &c.center() - &span;
        let vals: Vec<QuadNum> = (0..=60)
            .map(|j| mu(c, &b, &(&lo + &(&span * &QuadNum::frac(j, 60)))).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{c}");
        assert!(vals.windows(3).all(|w| &w[1] - &w[0] == &w[2] - &w[1]), "{c}");
        assert_eq!(vals.last().unwrap(), &c.peak(&b));
    }
}

#[test]
fn mu_is_not_monotone_far_from_center() {
    // W(41,5).w(z) drops from 47/40 to 6/5: the obstruction is only
    // meaningful near its center.
    let (b, c) = (beta(), step_class());
    assert!(mu(&c, &b, &QuadNum::frac(6, 5)).unwrap() < mu(&c, &b, &QuadNum::frac(47, 40)).unwrap());
}

#[test]
fn mu_is_linear_left_of_center() {
    // On [8, 41/5] only the leading 1^8 and one small weight meet 5^8.
    let (b, c) = (beta(), step_class());
    for j in 0..=20 {
        let z = &QuadNum::from(8) + &QuadNum::frac(j, 100);
        let expect = &(&QuadNum::from(5) * &z) / &c.degree(&b);
        assert_eq!(mu(&c, &b, &z).unwrap(), expect);
    }
}

#[test]
fn combine_examples() {
    let e = step_class().tuple();
    assert_eq!(combine(&big(82), &outer_family(2).tuple(), &e), inner_family(2).unwrap().tuple());
    assert_eq!(combine(&big(22), &outer_family(1).tuple(), &outer_family(0).tuple()), outer_family(2).tuple());
}

#[test]
fn family_two_is_the_main_case() {
    let f = family_n(2).unwrap();
    assert_eq!(f.beta_n, beta());
    assert_eq!(f.step_class, step_class());
    assert_eq!(f.blocker, outer_family(0));
    assert_eq!(f.seed_centers[0].pre, vec![7]);
    assert_eq!(f.seed_centers[1].pre, vec![8, 6, 3]);
}

#[test]
fn family_three() {
    let f = family_n(3).unwrap();
    assert_eq!(f.step_class.to_string(), "(31,8,71,7,46)");
    assert_eq!(ech_index(&f.step_class), big(287));
    assert_eq!(f.seed_centers[1].pre, vec![10, 8, 5]);
    // Radicand 3 * 44 = 132 = 4 * 33.
    assert_eq!(f.beta_n.radicand(), Some(33));
    // Both shifted seeds are centers of classes.
    for cf in &f.seed_centers {
        let v = cf.value().unwrap();
        let r = v.as_rational().unwrap();
        assert!(from_pq(r.numer(), r.denom()).is_some(), "{cf}");
    }
}

#[test]
fn brahmagupta() {
    assert_eq!(brahmagupta_shift(&QuadNum::from(7)).unwrap(), QuadNum::frac(41, 7));
    assert_eq!(brahmagupta_shift(&QuadNum::frac(41, 5)).unwrap(), QuadNum::frac(241, 41));
    let s = QuadNum::quad((3, 1), (2, 1), 2);
    assert_eq!(brahmagupta_shift(&s).unwrap(), s);
}
