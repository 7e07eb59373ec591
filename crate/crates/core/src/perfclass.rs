//! Quasi-perfect classes `(d, e, p, q, t)`, their recursive families and
//! the obstruction functions they define.
//!
//! A class satisfies `2(d+e) = p+q`, `2de = pq-1` and
//! `t^2 = p^2 + q^2 - 6pq + 8`. In `(p, q, t)` coordinates these read
//! `x^T A x = 8` for `A = [[-1,3,0],[3,-1,0],[0,0,1]]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cfweights::{cf_shift_entries, integral_weights, weight_prefix, ContinuedFraction};
use crate::error::{Error, Result};
use crate::exactnum::QuadNum;

/// Unchecked `(d, e, p, q, t)`.
pub type RawTuple = [BigInt; 5];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiPerfectClass {
    d: BigInt,
    e: BigInt,
    p: BigInt,
    q: BigInt,
    t: BigInt,
}

/// Outcome of [`qp_check`]: one message per failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub violations: Vec<String>,
}

pub fn tuple(d: i64, e: i64, p: i64, q: i64, t: i64) -> RawTuple {
    [d.into(), e.into(), p.into(), q.into(), t.into()]
}

/// Checks every defining condition and lists the failures.
pub fn qp_check(x: &RawTuple) -> Verdict {
    let [d, e, p, q, t] = x;
    let mut v = Vec::new();
    let mut eq = |name: &str, lhs: BigInt, rhs: BigInt| {
        if lhs != rhs {
            v.push(format!("{name}: {lhs} != {rhs}"));
        }
    };
    eq("2(d+e) = p+q", 2 * (d + e), p + q);
    eq("2de = pq-1", 2 * d * e, p * q - 1);
    eq("t^2 = p^2+q^2-6pq+8", t * t, p * p + q * q - 6 * p * q + 8);
    eq("4d = p+q+t", 4 * d, p + q + t);
    eq("4e = p+q-t", 4 * e, p + q - t);
    if !p.gcd(q).is_one() {
        v.push(format!("gcd(p,q) = 1: gcd is {}", p.gcd(q)));
    }
    if !(p > q && *q >= BigInt::one()) {
        v.push(format!("p > q >= 1: p = {p}, q = {q}"));
    }
    if !(d > e && *e >= BigInt::one()) {
        v.push(format!("d > e >= 1: d = {d}, e = {e}"));
    }
    Verdict { ok: v.is_empty(), violations: v }
}

impl QuasiPerfectClass {
    pub fn new(x: RawTuple) -> Result<Self> {
        let verdict = qp_check(&x);
        if !verdict.ok {
            return Err(Error::NotQuasiPerfect(verdict.violations.join("; ")));
        }
        let [d, e, p, q, t] = x;
        Ok(QuasiPerfectClass { d, e, p, q, t })
    }

    pub fn from_ints(d: i64, e: i64, p: i64, q: i64, t: i64) -> Result<Self> {
        Self::new(tuple(d, e, p, q, t))
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn e(&self) -> &BigInt {
        &self.e
    }
    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn t(&self) -> &BigInt {
        &self.t
    }

    pub fn tuple(&self) -> RawTuple {
        [self.d.clone(), self.e.clone(), self.p.clone(), self.q.clone(), self.t.clone()]
    }

    /// Center `p/q`.
    pub fn center(&self) -> QuadNum {
        QuadNum::from_rational(BigRational::new(self.p.clone(), self.q.clone()))
    }

    /// `d + e*beta`, the denominator of the obstruction.
    pub fn degree(&self, beta: &QuadNum) -> QuadNum {
        &QuadNum::from(&self.d) + &(&QuadNum::from(&self.e) * beta)
    }

    /// Obstruction value at the center, `p / (d + e beta)`.
    pub fn peak(&self, beta: &QuadNum) -> QuadNum {
        &QuadNum::from(&self.p) / &self.degree(beta)
    }
}

impl fmt::Display for QuasiPerfectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.d, self.e, self.p, self.q, self.t)
    }
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    d: String,
    e: String,
    p: String,
    q: String,
    t: String,
}

impl Serialize for QuasiPerfectClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassJson {
            d: self.d.to_string(),
            e: self.e.to_string(),
            p: self.p.to_string(),
            q: self.q.to_string(),
            t: self.t.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuasiPerfectClass {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ClassJson::deserialize(de)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(|_| D::Error::custom(format!("bad integer '{s}'")));
        let x = [parse(&j.d)?, parse(&j.e)?, parse(&j.p)?, parse(&j.q)?, parse(&j.t)?];
        QuasiPerfectClass::new(x).map_err(D::Error::custom)
    }
}

/// The class with center `p/q`, if `d`, `e`, `t` come out integral.
pub fn from_pq(p: &BigInt, q: &BigInt) -> Option<QuasiPerfectClass> {
    let t2: BigInt = p * p + q * q - 6 * p * q + 8;
    if t2.is_negative() {
        return None;
    }
    let t = t2.sqrt();
    if &t * &t != t2 {
        return None;
    }
    let (d4, e4) = (p + q + &t, p + q - &t);
    let four = BigInt::from(4);
    if !(&d4 % &four).is_zero() || !(&e4 % &four).is_zero() {
        return None;
    }
    QuasiPerfectClass::new([d4 / 4, e4 / 4, p.clone(), q.clone(), t]).ok()
}

/// `x^T A x'` on `(p, q, t)` coordinates.
pub fn quad_form(c: &RawTuple, c2: &RawTuple) -> BigInt {
    let (p, q, t) = (&c[2], &c[3], &c[4]);
    let (p2, q2, t2) = (&c2[2], &c2[3], &c2[4]);
    -(p * p2) + 3 * (p * q2 + q * p2) - q * q2 + t * t2
}

/// `t * c1 - c2`, componentwise, unchecked.
pub fn combine(t: &BigInt, c1: &RawTuple, c2: &RawTuple) -> RawTuple {
    std::array::from_fn(|i| t * &c1[i] - &c2[i])
}

/// Extends `x0, x1` by `x_i = nu x_{i-1} - x_{i-2}`, returning `x2..x_{n+1}`.
pub fn recurse(
    x0: &QuasiPerfectClass,
    x1: &QuasiPerfectClass,
    nu: &BigInt,
    n: usize,
) -> Result<Vec<QuasiPerfectClass>> {
    let (a, b) = (x0.tuple(), x1.tuple());
    let eight = BigInt::from(8);
    for (name, v) in [("x0", quad_form(&a, &a)), ("x1", quad_form(&b, &b))] {
        if v != eight {
            return Err(Error::SeedIncompatible(format!("{name}^T A {name} = {v}, expected 8")));
        }
    }
    let cross = quad_form(&b, &a);
    if cross != 4 * nu {
        return Err(Error::SeedIncompatible(format!("x1^T A x0 = {cross}, expected 4*{nu}")));
    }
    let mut out = Vec::with_capacity(n);
    let (mut prev, mut cur) = (a, b);
    for _ in 0..n {
        let next = combine(nu, &cur, &prev);
        out.push(QuasiPerfectClass::new(next.clone())?);
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// `E = (17, 6, 41, 5, 22)`, the class governing the staircase steps.
pub fn step_class() -> QuasiPerfectClass {
    QuasiPerfectClass::from_ints(17, 6, 41, 5, 22).expect("valid class")
}

/// `E_0 .. E_n` from `E_0 = (3,1,7,1,4)`, `E_1 = (64,23,155,19,82)` and the
/// 22-recursion.
pub fn outer_classes(n: usize) -> Vec<QuasiPerfectClass> {
    let e0 = QuasiPerfectClass::from_ints(3, 1, 7, 1, 4).expect("valid class");
    let e1 = QuasiPerfectClass::from_ints(64, 23, 155, 19, 82).expect("valid class");
    let mut out = vec![e0.clone(), e1.clone()];
    if n > 1 {
        out.extend(recurse(&e0, &e1, &BigInt::from(22), n - 1).expect("seeds are compatible"));
    }
    out.truncate(n + 1);
    out
}

pub fn outer_family(k: usize) -> QuasiPerfectClass {
    outer_classes(k).pop().expect("non-empty")
}

/// `Ê_1 .. Ê_n` with `Ê_k = t_{k-1} E_k - E`.
pub fn inner_classes(n: usize) -> Result<Vec<QuasiPerfectClass>> {
    let outer = outer_classes(n);
    let e = step_class().tuple();
    (1..=n)
        .map(|k| QuasiPerfectClass::new(combine(outer[k - 1].t(), &outer[k].tuple(), &e)))
        .collect()
}

pub fn inner_family(k: usize) -> Result<QuasiPerfectClass> {
    if k == 0 {
        return Err(Error::Precondition("inner family starts at k = 1".into()));
    }
    Ok(inner_classes(k)?.pop().expect("non-empty"))
}

/// `mu_{c,beta}(z) = W(p,q) . w(z) / (d + e beta)`, zero-padding the
/// shorter sequence.
pub fn mu(c: &QuasiPerfectClass, beta: &QuadNum, z: &QuadNum) -> Result<QuadNum> {
    beta.common_radicand(z)?;
    let w_class = integral_weights(&c.p, &c.q)?;
    let w_z = weight_prefix(z, w_class.len())?;
    w_class.dot(&w_z).checked_div(&c.degree(beta))
}

fn ordered<'a>(c: &'a QuasiPerfectClass, c2: &'a QuasiPerfectClass) -> (&'a QuasiPerfectClass, &'a QuasiPerfectClass) {
    if &c.p * &c2.q <= &c2.p * &c.q {
        (c, c2)
    } else {
        (c2, c)
    }
}

/// `(p+q)(p'+q') - t t' = 8 p q'` once the centers are ordered.
pub fn adjacency(c: &QuasiPerfectClass, c2: &QuasiPerfectClass) -> bool {
    let (a, b) = ordered(c, c2);
    (&a.p + &a.q) * (&b.p + &b.q) - &a.t * &b.t == 8 * &a.p * &b.q
}

/// `x^T A x' = 4 t''`.
pub fn t_compat(c: &QuasiPerfectClass, c2: &QuasiPerfectClass, t2: &BigInt) -> bool {
    quad_form(&c.tuple(), &c2.tuple()) == 4 * t2
}

/// ECH index `(d+1)(e+1) - 1`, which equals `(p+1)(q+1)/2 - 1`.
pub fn ech_index(c: &QuasiPerfectClass) -> BigInt {
    let a = (&c.d + 1) * (&c.e + 1) - 1;
    let b = (&c.p + 1) * (&c.q + 1) / 2 - 1;
    assert_eq!(a, b, "index formulas disagree for {c}");
    a
}

/// The `n`-th family: target `beta_n`, blocking class `E(n)`, step class
/// `E_n` and seed centers obtained by shifting `[7]` and `[8,6,3]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyN {
    pub n: u64,
    pub beta_n: QuadNum,
    pub blocker: QuasiPerfectClass,
    pub step_class: QuasiPerfectClass,
    pub seed_centers: Vec<ContinuedFraction>,
}

pub fn family_n(n: u64) -> Result<FamilyN> {
    if n < 2 {
        return Err(Error::Precondition("family index must be at least 2".into()));
    }
    let too_big = || Error::Precondition(format!("n = {n} too large"));
    let radicand = n
        .checked_pow(3)
        .and_then(|c| c.checked_add(2 * n * n))
        .and_then(|s| s.checked_sub(1))
        .and_then(|s| s.checked_mul(n))
        .ok_or_else(too_big)?;
    let ni = n as i64;
    let beta_n = QuadNum::new(
        BigRational::new(1.into(), 2.into()),
        BigRational::new((2 * ni + 1).into(), (2 * ni * (ni + 1)).into()),
        radicand,
    )?;
    let blocker = QuasiPerfectClass::from_ints(ni + 1, 1, 2 * ni + 3, 1, 2 * ni)?;
    let step_class = QuasiPerfectClass::from_ints(
        2 * ni * ni + 4 * ni + 1,
        2 * ni + 2,
        4 * ni * ni + 10 * ni + 5,
        2 * ni + 1,
        2 * (2 * ni * ni + 2 * ni - 1),
    )?;
    let shift = 2 * ni - 4;
    let seed_centers = [vec![7], vec![8, 6, 3]]
        .into_iter()
        .map(|v| cf_shift_entries(&ContinuedFraction::finite(v), shift))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyN { n, beta_n, blocker, step_class, seed_centers })
}

/// `S(z) = 6 - 1/z`.
pub fn brahmagupta_shift(z: &QuadNum) -> Result<QuadNum> {
    Ok(&QuadNum::from(6) - &z.recip()?)
}

/// Three classes `(lambda, mu, rho)` whose pairs `(lambda, mu)` and
/// `(rho, mu)` are adjacent and compatible with the outer `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTriple {
    pub lambda: QuasiPerfectClass,
    pub mu: QuasiPerfectClass,
    pub rho: QuasiPerfectClass,
}

impl ClassTriple {
    pub fn new(lambda: QuasiPerfectClass, mu: QuasiPerfectClass, rho: QuasiPerfectClass) -> Result<Self> {
        if !(adjacency(&lambda, &mu) && t_compat(&lambda, &mu, &rho.t)) {
            return Err(Error::SeedIncompatible("(lambda, mu) not adjacent and t_rho-compatible".into()));
        }
        if !(adjacency(&rho, &mu) && t_compat(&rho, &mu, &lambda.t)) {
            return Err(Error::SeedIncompatible("(rho, mu) not adjacent and t_lambda-compatible".into()));
        }
        Ok(ClassTriple { lambda, mu, rho })
    }

    /// Checks the integer identities tying the triple together and
    /// reports the first that fails.
    pub fn check_identities(&self) -> std::result::Result<(), String> {
        let (pl, ql, tl) = (&self.lambda.p, &self.lambda.q, &self.lambda.t);
        let (pm, qm, tm) = (&self.mu.p, &self.mu.q, &self.mu.t);
        let (pr, qr, tr) = (&self.rho.p, &self.rho.q, &self.rho.t);
        // q of the x- and y-mutated middle class.
        let qx = tl * qm - qr;
        let qy = tr * qm - ql;
        let checks: Vec<(&str, BigInt, BigInt)> = vec![
            ("(i).1", pl + ql, qm * tr - qr * tm),
            ("(i).2", 7 * pl - ql, pm * tr - tm * pr),
            ("(ii).1", pr + qr, pm * tl - pl * tm),
            ("(ii).2", pr - 7 * qr, ql * tm - qm * tl),
            ("(iii).1", pm + qm, qr * tl + pl * tr),
            ("(iii).2", 7 * pm - qm, 6 * pl * tr + pr * tl - ql * tr),
            ("(iii).3", 7 * qm - pm, 6 * qr * tl + ql * tr - pr * tl),
            ("(iv)", pl * (pr - 6 * qr) + ql * qr, tm.clone()),
            ("(v)", ql * tl + qr * tr + qm * tm, qm * tl * tr),
            ("(vi).1", tl * (1 + pm * qm - 6 * qm * qm), &qx * (pm - 6 * qm) + qm * (pr - 6 * qr)),
            ("(vi).2", tl * qm * qm, &qx * qm + qm * qr),
            ("(vii).1", -tr * -(qm * qm), &qy * qm + qm * ql),
            ("(vii).2", -tr * (qm * pm - 1), -(&qy * pm) - qm * pl),
        ];
        for (name, lhs, rhs) in checks {
            if lhs != rhs {
                return Err(format!("identity {name}: {lhs} != {rhs}"));
            }
        }
        Ok(())
    }
}

/// Small integer helper for callers that want a machine value.
pub fn to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_examples() {
        assert!(qp_check(&tuple(17, 6, 41, 5, 22)).ok);
        assert!(qp_check(&tuple(2, 1, 5, 1, 2)).ok);
        let v = qp_check(&tuple(3, 1, 7, 2, 4));
        assert!(!v.ok);
        assert_eq!(v.violations[0], "2(d+e) = p+q: 8 != 9");
    }

    #[test]
    fn from_pq_examples() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(from_pq(&b(41), &b(5)), Some(step_class()));
        assert_eq!(from_pq(&b(7), &b(1)).map(|c| c.to_string()), Some("(3,1,7,1,4)".into()));
        assert_eq!(from_pq(&b(6), &b(1)), None);
    }

    #[test]
    fn combine_to_zero() {
        let e = step_class().tuple();
        let z = combine(&BigInt::one(), &e, &e);
        assert!(z.iter().all(Zero::is_zero));
        assert!(!qp_check(&z).ok);
    }

    #[test]
    fn degenerate_recursion_is_constant() {
        let e0 = outer_family(0);
        let seq = recurse(&e0, &e0, &BigInt::from(2), 3).unwrap();
        assert!(seq.iter().all(|c| *c == e0));
        assert!(matches!(recurse(&e0, &e0, &BigInt::from(3), 1), Err(Error::SeedIncompatible(_))));
    }

    #[test]
    fn class_json() {
        let v = serde_json::to_value(step_class()).unwrap();
        assert_eq!(v, serde_json::json!({"d":"17","e":"6","p":"41","q":"5","t":"22"}));
        let back: QuasiPerfectClass = serde_json::from_value(v).unwrap();
        assert_eq!(back, step_class());
    }
}
