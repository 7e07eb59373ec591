//! Named verification suites behind `staircase verify`.

use num_bigint::BigInt;
use num_integer::Integer;
use staircase_core::atf::{verify_embedding_suite, verify_formula_suite};
use staircase_core::cfweights::{cf_of_quadratic, convergents, ContinuedFraction};
use staircase_core::ech::{
    default_sweep_samples, ellipsoid_caps, lower_bound_sweep, polydisk_caps, polydisk_caps_bruteforce,
};
use staircase_core::perfclass::{ech_index, inner_classes, outer_classes, qp_check};
use staircase_core::report::Report;
use staircase_core::staircase::*;
use staircase_core::{Error, QuadNum, Result};

pub const SUITES: [&str; 10] =
    ["families", "accumulation", "cf", "alternation", "closed-forms", "atf", "embeddings", "oracles", "sweep", "all"];

/// Runs `name` with depth `kmax` (each suite has its own default).
pub fn run_suite(name: &str, kmax: Option<usize>, beta: &QuadNum) -> Result<Report> {
    match name {
        "families" => Ok(families(kmax.unwrap_or(20))),
        "accumulation" => accumulation_suite(beta),
        "cf" => cf(kmax.unwrap_or(10)),
        "alternation" => verify_alternation(kmax.unwrap_or(10), beta),
        "closed-forms" => Ok(verify_closed_forms(kmax.unwrap_or(8))),
        "atf" => verify_formula_suite(kmax.unwrap_or(8), beta),
        "embeddings" => verify_embedding_suite(kmax.unwrap_or(8), beta),
        "oracles" => oracles(kmax.unwrap_or(60)),
        "sweep" => sweep(kmax.unwrap_or(2000) as u64, beta),
        "all" => {
            let mut r = Report::new();
            for s in SUITES.iter().filter(|s| !matches!(**s, "all" | "sweep")) {
                r.extend(run_suite(s, None, beta)?);
            }
            Ok(r)
        }
        other => Err(Error::Parse(format!("unknown suite '{other}'; one of {}", SUITES.join(", ")))),
    }
}

fn families(kmax: usize) -> Report {
    let mut r = Report::new();
    for (k, c) in outer_classes(kmax).iter().enumerate() {
        let v = qp_check(&c.tuple());
        r.record("qp_check E_k", Some(k as i64), &c.to_string(), &v.violations, v.ok);
    }
    match inner_classes(kmax) {
        Ok(inner) => {
            for (k, c) in inner.iter().enumerate() {
                let v = qp_check(&c.tuple());
                r.record("qp_check Ê_k", Some(k as i64 + 1), &c.to_string(), &v.violations, v.ok);
            }
        }
        Err(e) => {
            r.record("inner family", None, &e.to_string(), &"", false);
        }
    }
    r
}

fn accumulation_suite(beta: &QuadNum) -> Result<Report> {
    let mut r = Report::new();
    let data = accumulation(beta)?;
    let z = acc_polynomial(beta, &data.acc)?;
    r.check_eq("acc solves its quadratic", None, &z, &QuadNum::zero());
    let want = (&data.acc + &QuadNum::one()).checked_div(&(&(beta * &QuadNum::from(2)) + &QuadNum::from(2)))?;
    r.check_eq("vol = (1+acc)/(2+2beta)", None, &data.vol_at_acc, &want);
    if *beta == main_beta() {
        r.check_eq("acc(main)", None, &data.acc, &QuadNum::quad((27, 7), (11, 14), 30));
        let four = &(beta * &QuadNum::from(4)) - &QuadNum::from(7);
        r.check_eq("1/vol = (4beta-7)/5", None, &data.vol_at_acc.recip()?, &(&four / &QuadNum::from(5)));
    }
    Ok(r)
}

fn cf(kmax: usize) -> Result<Report> {
    let mut r = verify_cf_recursion(kmax)?;
    let acc = acc_point(&main_beta())?;
    let cf = cf_of_quadratic(&acc)?;
    r.check_eq("cf(acc) period", None, &cf, &ContinuedFraction::periodic(vec![], vec![8, 6, 4, 2]));
    let conv = convergents(&cf, 4 * kmax);
    for n in 0..conv.len() - 1 {
        let d = &conv[n + 1].0 * &conv[n].1 - &conv[n].0 * &conv[n + 1].1;
        let want = BigInt::from(if n.is_even() { 1 } else { -1 });
        r.check_eq("convergent determinant", Some(n as i64), &d.to_string(), &want.to_string());
    }
    Ok(r)
}

fn oracles(kmax: usize) -> Result<Report> {
    let mut r = Report::new();
    for b in [QuadNum::from(1), QuadNum::from(2), QuadNum::frac(5, 2), main_beta()] {
        let fast = polydisk_caps(kmax as u64, &b)?;
        let brute = polydisk_caps_bruteforce(kmax as u64, &b)?;
        r.check_eq(&format!("polydisk caps at beta = {b}"), Some(kmax as i64), &fast, &brute);
    }
    for p in 1..=30i64 {
        for q in (1..=30i64).filter(|q| p.gcd(q) == 1) {
            let idx = ((p + 1) * (q + 1) / 2 - 1) as usize;
            let caps = ellipsoid_caps(&QuadNum::one(), &QuadNum::frac(p, q), idx)?;
            r.check_eq(&format!("ellipsoid E(1,{p}/{q}) at its center index"), Some(idx as i64), &caps[idx], &QuadNum::from(p));
        }
    }
    Ok(r)
}

fn sweep(kmax: u64, beta: &QuadNum) -> Result<Report> {
    let mut r = Report::new();
    let mut zs = default_sweep_samples();
    let seven = QuadNum::from(7);
    if !zs.contains(&seven) {
        zs.push(seven.clone());
    }
    let samples = lower_bound_sweep(beta, kmax, &zs)?;
    if let Some(s) = samples.iter().find(|s| s.z == seven) {
        let want = &seven / &(&QuadNum::from(3) + beta);
        r.check_eq("sweep at z = 7", None, &s.lambda, &want);
    }
    let classes: Vec<_> = staircase_classes(20)?
        .into_iter()
        .filter(|c| ech_index(c) <= BigInt::from(kmax))
        .collect();
    let env = envelope(beta, &classes, &zs)?;
    if let Envelope::Samples(env) = env {
        for (e, s) in env.iter().zip(&samples) {
            r.record("envelope <= sweep", None, &e.lambda, &s.lambda, e.lambda <= s.lambda);
        }
    }
    for s in &samples {
        r.record("sweep above volume", None, &s.lambda, &s.z, is_above_volume(&s.lambda, &s.z, beta)?);
    }
    Ok(r)
}
