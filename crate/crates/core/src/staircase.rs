//! Accumulation point, volume comparisons, corner coordinates of the
//! staircase and the verification suites for its ordering, recursion and
//! limit identities.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfweights::{cf_of_rational, ContinuedFraction};
use crate::error::{Error, Result};
use crate::exactnum::{QuadNum, Rounding};
use crate::perfclass::{inner_classes, mu, outer_classes, step_class, QuasiPerfectClass};
use crate::report::Report;

/// `beta = (6 + 5 sqrt 30) / 12`, the target with the four-periodic
/// staircase.
pub fn main_beta() -> QuadNum {
    QuadNum::quad((1, 2), (5, 12), 30)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccumulationData {
    pub beta: QuadNum,
    pub acc: QuadNum,
    pub vol_at_acc: QuadNum,
}

/// Middle coefficient `2(beta+1)^2/beta - 2` of the accumulation quadratic.
fn acc_trace(beta: &QuadNum) -> Result<QuadNum> {
    let b1 = beta + &QuadNum::one();
    Ok(&(&(&b1 * &b1) * &QuadNum::from(2)).checked_div(beta)? - &QuadNum::from(2))
}

fn check_beta(beta: &QuadNum) -> Result<()> {
    if *beta < QuadNum::one() {
        return Err(Error::Precondition("beta must be at least 1".into()));
    }
    Ok(())
}

/// `z^2 - (2(beta+1)^2/beta - 2) z + 1`.
pub fn acc_polynomial(beta: &QuadNum, z: &QuadNum) -> Result<QuadNum> {
    let s = acc_trace(beta)?;
    (&(z * z) + &QuadNum::one()).checked_sub(&s.checked_mul(z)?)
}

/// Larger root of the accumulation quadratic, exactly. Fails with
/// `RadicandExplosion` when the root leaves every quadratic field reachable
/// from `beta`.
pub fn acc_point(beta: &QuadNum) -> Result<QuadNum> {
    check_beta(beta)?;
    let s = acc_trace(beta)?;
    let disc = &(&s * &s) - &QuadNum::from(4);
    let root = disc.sqrt_exact()?;
    let two = QuadNum::from(2);
    (&s + &root).checked_div(&two)
}

/// Decimal bracket `lower <= acc <= upper`, both with `digits` places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalBracket {
    pub lower: String,
    pub upper: String,
    pub exact: bool,
}

/// Certified decimal enclosure of `acc(beta)` by bisection on the exact
/// sign of the quadratic. Works for every `beta >= 1`.
pub fn acc_point_decimal(beta: &QuadNum, digits: u32) -> Result<DecimalBracket> {
    check_beta(beta)?;
    let s = acc_trace(beta)?;
    let scale = BigInt::from(10u32).pow(digits);
    let at = |n: &BigInt| -> Result<Ordering> {
        let z = QuadNum::from_rational(BigRational::new(n.clone(), scale.clone()));
        Ok(acc_polynomial(beta, &z)?.signum())
    };
    // The polynomial is increasing past s/2, negative at s/2 and 1 at s.
    let mut lo = (&s / &QuadNum::from(2)).floor() * &scale;
    let mut hi = s.ceil() * &scale;
    while &hi - &lo > BigInt::from(1) {
        let mid: BigInt = (&lo + &hi) / 2;
        if at(&mid)? == Ordering::Greater {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let exact = at(&lo)? == Ordering::Equal;
    let fmt = |n: &BigInt| QuadNum::from_rational(BigRational::new(n.clone(), scale.clone())).to_decimal(digits as usize, Rounding::Down);
    let upper = if exact { fmt(&lo) } else { fmt(&hi) };
    Ok(DecimalBracket { lower: fmt(&lo), upper, exact })
}

/// `vol(beta) = (1 + acc) / (2 + 2 beta)`.
pub fn vol_at_acc(beta: &QuadNum) -> Result<QuadNum> {
    let acc = acc_point(beta)?;
    (&acc + &QuadNum::one()).checked_div(&(&(beta * &QuadNum::from(2)) + &QuadNum::from(2)))
}

pub fn accumulation(beta: &QuadNum) -> Result<AccumulationData> {
    let acc = acc_point(beta)?;
    let vol_at_acc = (&acc + &QuadNum::one()).checked_div(&(&(beta * &QuadNum::from(2)) + &QuadNum::from(2)))?;
    Ok(AccumulationData { beta: beta.clone(), acc, vol_at_acc })
}

/// `lambda >= sqrt(z / (2 beta))`, decided as `lambda^2 * 2 beta >= z`.
pub fn is_above_volume(lambda: &QuadNum, z: &QuadNum, beta: &QuadNum) -> Result<bool> {
    if !lambda.is_positive() {
        return Err(Error::Precondition("lambda must be positive".into()));
    }
    let lhs = lambda.checked_mul(lambda)?.checked_mul(&(beta * &QuadNum::from(2)))?;
    Ok(lhs.try_cmp(z)? != Ordering::Less)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockStatus {
    /// The class obstruction at `acc` exceeds the volume.
    Blocked,
    /// Obstruction and volume coincide at `acc`.
    Equal,
    Below,
}

/// Compares `mu(c, beta, acc(beta))` with `vol(beta)`.
pub fn is_blocked(c: &QuasiPerfectClass, beta: &QuadNum) -> Result<BlockStatus> {
    let data = accumulation(beta)?;
    let m = mu(c, beta, &data.acc)?;
    Ok(match m.try_cmp(&data.vol_at_acc)? {
        Ordering::Greater => BlockStatus::Blocked,
        Ordering::Equal => BlockStatus::Equal,
        Ordering::Less => BlockStatus::Below,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SampleKind {
    ClassObstruction { class: String },
    EchRatio { k: u64 },
    Embedding { word: String },
    Corner { label: String },
}

/// A point `(z, lambda)` in the plane of the embedding function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSample {
    pub z: QuadNum,
    pub lambda: QuadNum,
    pub kind: SampleKind,
}

fn corner(label: String, z: QuadNum, lambda: QuadNum) -> BoundSample {
    BoundSample { z, lambda, kind: SampleKind::Corner { label } }
}

/// `O_k` and, for `k >= 1`, `Ô_k`: each class's center and peak.
pub fn corner_points(k: usize, beta: &QuadNum) -> Result<(BoundSample, Option<BoundSample>)> {
    let e = outer_classes(k).pop().expect("non-empty");
    beta.common_radicand(&e.center())?;
    let o = corner(format!("O_{k}"), e.center(), e.peak(beta));
    let hat = if k >= 1 {
        let c = inner_classes(k)?.pop().expect("non-empty");
        Some(corner(format!("Ô_{k}"), c.center(), c.peak(beta)))
    } else {
        None
    };
    Ok((o, hat))
}

/// `I_{k+1}` and `Î_{k+1}`: where the horizontal line through one peak
/// meets the ray from the origin through the next.
pub fn inner_corners(k: usize, beta: &QuadNum) -> Result<(BoundSample, BoundSample)> {
    let outer = outer_classes(k + 1);
    let inner = inner_classes(k + 1)?;
    let (ek, ek1, hat) = (&outer[k], &outer[k + 1], &inner[k]);
    let pk = QuadNum::from(ek.p());
    let z_in = (&pk * &hat.degree(beta)).checked_div(&(&QuadNum::from(hat.q()) * &ek.degree(beta)))?;
    let i = corner(format!("I_{}", k + 1), z_in, ek.peak(beta));
    let ph = QuadNum::from(hat.p());
    let z_hat = (&ph * &ek1.degree(beta)).checked_div(&(&QuadNum::from(ek1.q()) * &hat.degree(beta)))?;
    let ih = corner(format!("Î_{}", k + 1), z_hat, hat.peak(beta));
    Ok((i, ih))
}

/// Centers and peaks of `E_k`, `Ê_{k+1}`, `E_{k+1}` interleave, and
/// `I_{k+1}` sits between `p_k/q_k` and `p̂_{k+1}/q̂_{k+1}`.
pub fn verify_alternation(kmax: usize, beta: &QuadNum) -> Result<Report> {
    if kmax == 0 {
        return Err(Error::Precondition("K must be at least 1".into()));
    }
    let outer = outer_classes(kmax);
    let inner = inner_classes(kmax)?;
    let parts: Vec<Result<Report>> = (0..kmax)
        .into_par_iter()
        .map(|k| {
            let mut r = Report::new();
            let (a, h, b) = (&outer[k], &inner[k], &outer[k + 1]);
            let ki = Some(k as i64);
            let lt = |x: &QuadNum, y: &QuadNum| x.try_cmp(y).map(|o| o == Ordering::Less);
            let le = |x: &QuadNum, y: &QuadNum| x.try_cmp(y).map(|o| o != Ordering::Greater);
            r.record("center E_k < center Ê_k+1", ki, &a.center(), &h.center(), lt(&a.center(), &h.center())?);
            r.record("center Ê_k+1 < center E_k+1", ki, &h.center(), &b.center(), lt(&h.center(), &b.center())?);
            let (pa, ph, pb) = (a.peak(beta), h.peak(beta), b.peak(beta));
            r.record("peak E_k < peak Ê_k+1", ki, &pa, &ph, lt(&pa, &ph)?);
            r.record("peak Ê_k+1 < peak E_k+1", ki, &ph, &pb, lt(&ph, &pb)?);
            let (i, _) = inner_corners(k, beta)?;
            r.record("center E_k <= z_in", ki, &a.center(), &i.z, le(&a.center(), &i.z)?);
            r.record("z_in <= center Ê_k+1", ki, &i.z, &h.center(), le(&i.z, &h.center())?);
            Ok(r)
        })
        .collect();
    let mut report = Report::new();
    for p in parts {
        report.extend(p?);
    }
    Ok(report)
}

/// `[[457, 204], [56, 25]]`: the action of the period `[8, 6, 4, 2]`.
pub const PERIOD_MATRIX: [[i64; 2]; 2] = [[457, 204], [56, 25]];

/// Outer centers follow the period matrix, their expansions grow by the
/// block `8, 6, 4, 2`, and they approach `acc(beta)` monotonically.
pub fn verify_cf_recursion(kmax: usize) -> Result<Report> {
    if kmax < 2 {
        return Err(Error::Precondition("K must be at least 2".into()));
    }
    let outer = outer_classes(kmax);
    let acc = acc_point(&main_beta())?;
    let mut r = Report::new();
    let m = PERIOD_MATRIX;
    for k in 2..=kmax {
        let ki = Some(k as i64);
        let (p2, q2) = (outer[k - 2].p(), outer[k - 2].q());
        let u = m[0][0] * p2 + m[0][1] * q2;
        let v = m[1][0] * p2 + m[1][1] * q2;
        let got = [outer[k].p().to_string(), outer[k].q().to_string()];
        r.check_eq("period matrix", ki, &[u.to_string(), v.to_string()], &got);
        let cf = cf_of_rational(outer[k].p(), outer[k].q())?;
        let mut expect = vec![8, 6, 4, 2];
        expect.extend(cf_of_rational(p2, q2)?.pre);
        r.check_eq("expansion prefix", ki, &cf, &ContinuedFraction::finite(expect));
    }
    let gaps: Vec<QuadNum> = outer.iter().map(|c| (&c.center() - &acc).abs()).collect();
    for k in 1..=kmax {
        let ok = gaps[k] < gaps[k - 1];
        r.record("|p_k/q_k - acc| decreasing", Some(k as i64), &gaps[k], &gaps[k - 1], ok);
    }
    Ok(r)
}

/// Constants of `x_k = x r^k + x̄ r^-k` for the outer family, in
/// `Q(sqrt 30)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForms {
    pub r: QuadNum,
    pub d: QuadNum,
    pub e: QuadNum,
    pub q: QuadNum,
    pub p: QuadNum,
}

pub fn closed_forms() -> ClosedForms {
    ClosedForms {
        r: QuadNum::quad((11, 1), (2, 1), 30),
        d: QuadNum::quad((3, 2), (31, 120), 30),
        e: QuadNum::quad((1, 2), (1, 10), 30),
        q: QuadNum::quad((1, 2), (1, 15), 30),
        p: QuadNum::quad((7, 2), (13, 20), 30),
    }
}

/// Checks `x_k r^k = x r^2k + x̄` for `x` in `d, e, q, p` and `k <= K`.
pub fn verify_closed_forms(kmax: usize) -> Report {
    let cf = closed_forms();
    let outer = outer_classes(kmax);
    let mut r = Report::new();
    for (k, c) in outer.iter().enumerate() {
        let rk = cf.r.pow(k as u32);
        let r2k = &rk * &rk;
        for (name, x, xk) in [("d", &cf.d, c.d()), ("e", &cf.e, c.e()), ("q", &cf.q, c.q()), ("p", &cf.p, c.p())] {
            let lhs = &QuadNum::from(xk) * &rk;
            let rhs = &(x * &r2k) + &x.conjugate();
            r.check_eq(&format!("closed form {name}_k"), Some(k as i64), &lhs, &rhs);
        }
    }
    r
}

/// `vol(beta) (d_k + e_k beta) / q_k`, the `z` reached by the full-filling
/// embeddings.
pub fn full_filling_z(k: usize, beta: &QuadNum) -> Result<QuadNum> {
    let c = outer_classes(k).pop().expect("non-empty");
    vol_at_acc(beta)?.checked_mul(&c.degree(beta))?.checked_div(&QuadNum::from(c.q()))
}

/// Result of [`envelope`]; with no classes only the volume bound remains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "samples", rename_all = "kebab-case")]
pub enum Envelope {
    VolumeOnly,
    Samples(Vec<BoundSample>),
}

/// Pointwise maximum of the class obstructions, tagged with the winning
/// class (first one on ties).
pub fn envelope(beta: &QuadNum, classes: &[QuasiPerfectClass], zs: &[QuadNum]) -> Result<Envelope> {
    if classes.is_empty() {
        return Ok(Envelope::VolumeOnly);
    }
    let samples = zs
        .par_iter()
        .map(|z| {
            let mut best: Option<(QuadNum, &QuasiPerfectClass)> = None;
            for c in classes {
                let v = mu(c, beta, z)?;
                let better = match &best {
                    None => true,
                    Some((b, _)) => v.try_cmp(b)? == Ordering::Greater,
                };
                if better {
                    best = Some((v, c));
                }
            }
            let (lambda, c) = best.expect("non-empty class list");
            Ok(BoundSample {
                z: z.clone(),
                lambda,
                kind: SampleKind::ClassObstruction { class: c.to_string() },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Envelope::Samples(samples))
}

/// The classes whose obstructions shape the staircase near `acc`:
/// `E_0..E_n`, `Ê_1..Ê_n` and `E`.
pub fn staircase_classes(n: usize) -> Result<Vec<QuasiPerfectClass>> {
    let mut v = outer_classes(n);
    v.extend(inner_classes(n)?);
    v.push(step_class());
    Ok(v)
}
