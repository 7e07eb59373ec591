use staircase_core::atf::*;
use staircase_core::staircase::main_beta;
use staircase_core::{Error, QuadNum};

fn start() -> AtfPolygon {
    init_polydisk(&main_beta()).unwrap()
}

#[test]
fn initial_rectangle() {
    let p = start();
    let b = main_beta();
    assert_eq!(p.area(), b);
    let x = &p.nodes[p.index_of(Label::X).unwrap()];
    assert_eq!(x.vertex, [b.clone(), QuadNum::zero()]);
    assert_eq!(x.ray, Some(IVec::new(-1, 1)));
    assert_eq!(x.edge, IVec::new(-1, 0));
    assert_eq!(x.len, b);
    let l = p.side_lengths().unwrap();
    assert_eq!([l.oy, l.yv, l.xv, l.ox], [QuadNum::one(), b.clone(), QuadNum::one(), b.clone()]);
    assert!(p.nodes[0].ray.is_none());
    let e = extract_embedding(&p).unwrap();
    assert_eq!((e.z, e.lambda), (b, QuadNum::one()));
    assert!(init_polydisk(&QuadNum::frac(1, 2)).is_err());
}

#[test]
fn formula_suite_passes() {
    let r = verify_formula_suite(8, &main_beta()).unwrap();
    assert!(r.passed(), "{}", r.render_table());
}

#[test]
fn y_phase_stays_on_side_xv() {
    let mut p = apply_word(&start(), "v2yx").unwrap();
    for _ in 0..12 {
        let hit = intersect(&p, Label::Y).unwrap();
        assert_eq!(hit.edge, p.index_of(Label::V).unwrap());
        p = mutate(&p, Label::Y).unwrap();
    }
    assert_eq!(p.nodes.len(), 4);
}

#[test]
fn embedding_suite_passes() {
    let r = verify_embedding_suite(8, &main_beta()).unwrap();
    assert!(r.passed(), "{}", r.render_table());
}

#[test]
fn rays_at_k1() {
    let p = apply_word(&start(), "v2yxy").unwrap();
    assert_eq!(p.ray_data().unwrap().n_y, Some(IVec::new(19, -155)));
    assert!(verify_rays(&p, 1).unwrap().passed());
    // The same check against the wrong k fails and says so.
    assert!(!verify_rays(&p, 2).unwrap().passed());
}

#[test]
fn word_replay_is_deterministic() {
    let a = apply_word(&start(), "v2yxy3xy").unwrap();
    let mut b = start();
    for c in "vvyxyyyxy".chars() {
        b = mutate(&b, Label::from_letter(c).unwrap()).unwrap();
    }
    assert_eq!(to_json(&a), to_json(&b));
    assert_eq!(a.word_string(), "v2yxy3xy");
}

#[test]
fn json_round_trip() {
    let p = apply_word(&start(), "v2yxy2").unwrap();
    let j = to_json(&p);
    assert_eq!(j["word"], "v2yxy2");
    assert!(j["nodes"][0]["ray"].is_null());
    assert_eq!(from_json(&j).unwrap(), p);
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<AtfPolygon>(&text).unwrap(), p);
}

#[test]
fn json_rejects_broken_polygon() {
    let mut j = to_json(&start());
    j["nodes"][1]["len"] = serde_json::to_value(QuadNum::from(2)).unwrap();
    assert!(from_json(&j).is_err());
}

#[test]
fn svg_output() {
    let svg = to_svg(&start(), 6);
    assert_eq!(svg.matches("<text").count(), 4);
    assert_eq!(svg.matches("stroke-dasharray").count(), 3);
    let p = apply_word(&start(), "v2yx").unwrap();
    let svg = to_svg(&p, 4);
    assert!(svg.contains("Y (0.0000, 5.7822)"), "{svg}");
}

#[test]
fn errors_carry_step_and_code() {
    let err = apply_word(&start(), "v2q").unwrap_err();
    assert_eq!(err.code(), "Parse");
    // The origin has no ray and is never a label.
    assert!(matches!(Label::from_letter('o'), Err(Error::UnknownLabel(_))));
    // Mutating at X first folds the square onto itself: the ray from X
    // runs into the corner Y.
    let sq = init_polydisk(&QuadNum::one()).unwrap();
    let err = mutate(&sq, Label::X).unwrap_err();
    assert_eq!(err, Error::AmbiguousHit);
    let err = apply_word(&sq, "x").unwrap_err();
    assert_eq!(err.code(), "AmbiguousHit");
    assert!(matches!(err, Error::AtStep { step: 0, .. }));
}

#[test]
fn conjecture_sequence_runs() {
    let s = conjecture_samples(2, &main_beta());
    assert_eq!(s.len(), 3);
    for (_, r) in s {
        let e = r.unwrap();
        assert!(e.lambda.is_positive());
    }
}
