//! Continued fractions and weight expansions.
//!
//! The weight sequence of `z` comes from the subtract/swap recursion on the
//! pair `(z, 1)`: emit the smaller side as many times as it fits, keep the
//! remainder, repeat. Runs of equal weights are stored once with a
//! multiplicity, so `W(p, 1)` for large `p` stays small.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::QuadNum;

/// `[pre; {period}^inf]`. A finite expansion has an empty period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub pre: Vec<u64>,
    pub period: Vec<u64>,
}

impl ContinuedFraction {
    /// Finite expansion, normalized so the last entry is not 1 (unless it
    /// is the only entry).
    pub fn finite(entries: Vec<u64>) -> Self {
        ContinuedFraction { pre: entries, period: Vec::new() }.canonical()
    }

    pub fn periodic(pre: Vec<u64>, period: Vec<u64>) -> Self {
        ContinuedFraction { pre, period }.canonical()
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// The first `n` entries, unrolling the period. Finite expansions stop
    /// early.
    pub fn entries(&self, n: usize) -> Vec<u64> {
        let mut out: Vec<u64> = self.pre.iter().copied().take(n).collect();
        if !self.period.is_empty() {
            out.extend(self.period.iter().copied().cycle().take(n - out.len()));
        }
        out
    }

    fn canonical(mut self) -> Self {
        if self.period.is_empty() {
            while self.pre.len() > 1 && self.pre.last() == Some(&1) {
                self.pre.pop();
                *self.pre.last_mut().unwrap() += 1;
            }
            return self;
        }
        let l = self.period.len();
        if let Some(t) = (1..=l).find(|t| l % t == 0 && (0..l).all(|i| self.period[i] == self.period[i % t])) {
            self.period.truncate(t);
        }
        while !self.pre.is_empty() && self.pre.last() == self.period.last() {
            self.pre.pop();
            self.period.rotate_right(1);
        }
        self
    }

    /// Exact value of a finite expansion.
    pub fn value(&self) -> Result<QuadNum> {
        cf_eval(self, None)
    }
}

impl std::fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        if self.period.is_empty() {
            write!(f, "[{}]", join(&self.pre))
        } else if self.pre.is_empty() {
            write!(f, "[{{{}}}]", join(&self.period))
        } else {
            write!(f, "[{},{{{}}}]", join(&self.pre), join(&self.period))
        }
    }
}

/// Weight sequence stored as runs `(value, multiplicity)`, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSeq {
    runs: Vec<(QuadNum, u64)>,
}

impl WeightSeq {
    pub fn runs(&self) -> &[(QuadNum, u64)] {
        &self.runs
    }

    /// Total number of weights, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Expanded list. Only sensible for short sequences.
    pub fn entries(&self) -> Vec<QuadNum> {
        self.runs
            .iter()
            .flat_map(|(v, m)| std::iter::repeat_n(v.clone(), *m as usize))
            .collect()
    }

    pub fn scale(&self, c: &QuadNum) -> WeightSeq {
        WeightSeq { runs: self.runs.iter().map(|(v, m)| (v * c, *m)).collect() }
    }

    /// Dot product, padding the shorter sequence with zeros.
    pub fn dot(&self, other: &WeightSeq) -> QuadNum {
        let mut acc = QuadNum::zero();
        let (mut i, mut j) = (0, 0);
        let (mut left_i, mut left_j) = (
            self.runs.first().map_or(0, |r| r.1),
            other.runs.first().map_or(0, |r| r.1),
        );
        while i < self.runs.len() && j < other.runs.len() {
            let take = left_i.min(left_j);
            let prod = &self.runs[i].0 * &other.runs[j].0;
            acc = &acc + &prod.scale(&BigRational::from_integer(take.into()));
            left_i -= take;
            left_j -= take;
            if left_i == 0 {
                i += 1;
                left_i = self.runs.get(i).map_or(0, |r| r.1);
            }
            if left_j == 0 {
                j += 1;
                left_j = other.runs.get(j).map_or(0, |r| r.1);
            }
        }
        acc
    }

    pub fn sum(&self) -> QuadNum {
        self.runs.iter().fold(QuadNum::zero(), |acc, (v, m)| {
            &acc + &v.scale(&BigRational::from_integer((*m).into()))
        })
    }
}

fn to_entry(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or(Error::EntryOverflow)
}

/// `W(p, q)`: integral weights of coprime positive `p`, `q`.
pub fn integral_weights(p: &BigInt, q: &BigInt) -> Result<WeightSeq> {
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::Precondition("weights need positive p, q".into()));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::Precondition(format!("{p} and {q} are not coprime")));
    }
    let (mut x, mut y) = if p >= q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
    let mut runs = Vec::new();
    loop {
        let (a, r) = x.div_rem(&y);
        runs.push((QuadNum::from_bigint(y.clone()), to_entry(&a)?));
        if r.is_zero() {
            break;
        }
        x = y;
        y = r;
    }
    Ok(WeightSeq { runs })
}

/// `w(p/q) = W(p, q) / q`.
pub fn weight_expansion(z: &BigRational) -> Result<WeightSeq> {
    let w = integral_weights(z.numer(), z.denom())?;
    Ok(w.scale(&QuadNum::from_rational(BigRational::new(BigInt::one(), z.denom().clone()))))
}

/// First `m` weights of `w(z)` for any positive `z`, rational or not. For
/// rational `z` the sequence may end before `m`.
pub fn weight_prefix(z: &QuadNum, m: u64) -> Result<WeightSeq> {
    if !z.is_positive() {
        return Err(Error::Precondition("weights need z > 0".into()));
    }
    let one = QuadNum::one();
    let (mut x, mut y) = if *z >= one { (z.clone(), one) } else { (one, z.clone()) };
    let mut runs = Vec::new();
    let mut count = 0u64;
    while count < m {
        let a = (&x / &y).floor();
        let take = to_entry(&a)?.min(m - count);
        runs.push((y.clone(), take));
        count += take;
        let r = &x - &(&y * &QuadNum::from_bigint(a));
        if r.is_zero() {
            break;
        }
        x = y;
        y = r;
    }
    Ok(WeightSeq { runs })
}

/// Canonical expansion of `p/q`, `q > 0`, `p >= 0`.
pub fn cf_of_rational(p: &BigInt, q: &BigInt) -> Result<ContinuedFraction> {
    if !q.is_positive() || p.is_negative() {
        return Err(Error::Precondition("need p >= 0 and q > 0".into()));
    }
    let (mut x, mut y) = (p.clone(), q.clone());
    let mut out = Vec::new();
    while !y.is_zero() {
        let (a, r) = x.div_rem(&y);
        out.push(to_entry(&a)?);
        x = y;
        y = r;
    }
    Ok(ContinuedFraction::finite(out))
}

/// Evaluates `[a0; a1, ..., an, tail]`, or the finite expansion itself when
/// `tail` is `None`.
pub fn cf_eval(cf: &ContinuedFraction, tail: Option<&QuadNum>) -> Result<QuadNum> {
    if !cf.is_finite() {
        return Err(Error::Precondition("cannot evaluate a periodic expansion exactly".into()));
    }
    let mut entries = cf.pre.iter().rev();
    let mut x = match tail {
        Some(t) => t.clone(),
        None => QuadNum::from(BigInt::from(
            *entries.next().ok_or_else(|| Error::Precondition("empty expansion".into()))?,
        )),
    };
    for a in entries {
        x = &QuadNum::from(BigInt::from(*a)) + &x.recip()?;
    }
    Ok(x)
}

/// Convergents `p_i / q_i` for `i = 0..=n`, fewer if the expansion is
/// finite and shorter.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    for a in cf.entries(n + 1) {
        let a = BigInt::from(a);
        let p = &a * &p1 + &p0;
        let q = &a * &q1 + &q0;
        out.push((p.clone(), q.clone()));
        (p0, q0, p1, q1) = (p1, q1, p, q);
    }
    out
}

/// Periodic expansion of a positive quadratic irrational.
pub fn cf_of_quadratic(x: &QuadNum) -> Result<ContinuedFraction> {
    let d = x.radicand().ok_or_else(|| Error::Precondition("expected an irrational value".into()))?;
    if !x.is_positive() {
        return Err(Error::Precondition("expected a positive value".into()));
    }
    // Write x = (P + sqrt(disc)) / Q with Q | disc - P^2.
    let l = x.a().denom().lcm(x.b().denom());
    let big_a = (x.a() * BigRational::from_integer(l.clone())).to_integer();
    let big_b = (x.b() * BigRational::from_integer(l.clone())).to_integer();
    let mut disc = &big_b * &big_b * BigInt::from(d);
    let (mut p, mut q) = if big_b.is_positive() { (big_a, l) } else { (-big_a, -l) };
    if !((&disc - &p * &p) % &q).is_zero() {
        let aq = q.abs();
        p *= &aq;
        disc *= &q * &q;
        q *= &aq;
    }
    let s = disc.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut entries = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = entries.split_off(start);
            return Ok(ContinuedFraction::periodic(entries, period));
        }
        seen.insert((p.clone(), q.clone()), entries.len());
        let a = if q.is_positive() {
            (&p + &s).div_floor(&q)
        } else {
            let nq: BigInt = -&q;
            -((&p + &s).div_floor(&nq) + BigInt::one())
        };
        entries.push(to_entry(&a)?);
        p = &a * &q - &p;
        q = (&disc - &p * &p) / &q;
    }
}

/// Adds `delta` to every entry. Fails if an entry would drop below 1.
pub fn cf_shift_entries(cf: &ContinuedFraction, delta: i64) -> Result<ContinuedFraction> {
    let shift = |v: &[u64]| -> Result<Vec<u64>> {
        v.iter()
            .map(|&a| {
                let s = a as i128 + delta as i128;
                if s < 1 {
                    Err(Error::EntryUnderflow)
                } else {
                    u64::try_from(s).map_err(|_| Error::EntryOverflow)
                }
            })
            .collect()
    };
    Ok(ContinuedFraction::periodic(shift(&cf.pre)?, shift(&cf.period)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn integral_weights_of_41_5() {
        let w = integral_weights(&bi(41), &bi(5)).unwrap();
        let e: Vec<_> = w.entries();
        let mut expect = vec![QuadNum::from_int(5); 8];
        expect.extend(vec![QuadNum::from_int(1); 5]);
        assert_eq!(e, expect);
        assert_eq!(w.dot(&w), QuadNum::from_int(41 * 5));
    }

    #[test]
    fn rational_expansions() {
        assert_eq!(cf_of_rational(&bi(155), &bi(19)).unwrap().pre, vec![8, 6, 3]);
        assert_eq!(cf_of_rational(&bi(7), &bi(1)).unwrap().pre, vec![7]);
        let cf = ContinuedFraction::finite(vec![8, 6, 2, 1]);
        assert_eq!(cf.pre, vec![8, 6, 3]);
        assert_eq!(cf.value().unwrap(), QuadNum::frac(155, 19));
    }

    #[test]
    fn quadratic_expansions() {
        let r2 = cf_of_quadratic(&QuadNum::sqrt_of(2)).unwrap();
        assert_eq!((r2.pre.clone(), r2.period.clone()), (vec![1], vec![2]));
        let s = cf_of_quadratic(&QuadNum::quad((3, 1), (2, 1), 2)).unwrap();
        assert_eq!((s.pre, s.period), (vec![5], vec![1, 4]));
        let g = cf_of_quadratic(&QuadNum::quad((1, 2), (1, 2), 5)).unwrap();
        assert_eq!((g.pre, g.period), (vec![], vec![1]));
        // Oracle: repeated floor-and-invert, compared against the unrolled expansion.
        let x0 = QuadNum::quad((-1, 3), (1, 3), 7);
        let cf = cf_of_quadratic(&x0).unwrap();
        let mut x = x0;
        for a in cf.entries(12) {
            let f = x.floor();
            assert_eq!(f, BigInt::from(a));
            x = (&x - &QuadNum::from_bigint(f)).recip().unwrap();
        }
    }

    #[test]
    fn canonical_period() {
        let cf = ContinuedFraction::periodic(vec![3, 1, 2], vec![1, 2, 1, 2]);
        assert_eq!((cf.pre, cf.period), (vec![3], vec![1, 2]));
    }

    #[test]
    fn convergents_follow_recursion() {
        let cf = ContinuedFraction::periodic(vec![], vec![8, 6, 4, 2]);
        let c = convergents(&cf, 3);
        assert_eq!(c, vec![(bi(8), bi(1)), (bi(49), bi(6)), (bi(204), bi(25)), (bi(457), bi(56))]);
    }

    #[test]
    fn shift_entries() {
        let cf = ContinuedFraction::finite(vec![8, 6, 3]);
        assert_eq!(cf_shift_entries(&cf, 2).unwrap().pre, vec![10, 8, 5]);
        assert_eq!(cf_shift_entries(&cf, -3), Err(Error::EntryUnderflow));
    }

    #[test]
    fn prefix_matches_full_expansion_for_rationals() {
        let z = QuadNum::frac(155, 19);
        let full = weight_expansion(&BigRational::new(bi(155), bi(19))).unwrap();
        assert_eq!(weight_prefix(&z, 1000).unwrap(), full);
        assert_eq!(weight_prefix(&z, 9).unwrap().len(), 9);
    }
}
