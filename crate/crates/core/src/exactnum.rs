//! Exact arithmetic in a single real quadratic field Q(sqrt D).
//!
//! A [`QuadNum`] is `a + b*sqrt(D)` with rational `a`, `b` and square-free
//! `D >= 2`. Rationals carry `b = 0` and act as a wildcard that combines with
//! any radicand. Combining two irrational values with different radicands is
//! an error, never a silent approximation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Trial-division bound used when pulling square factors out of radicands.
const TRIAL_LIMIT: u64 = 1 << 20;

/// `a + b*sqrt(d)`. Invariant: `b == 0` exactly when `d == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: u64,
}

/// Direction for decimal rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    /// Nearest, ties toward positive infinity.
    Nearest,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Splits `n = s^2 * f` with `f` square-free. Returns `None` only when `n`
/// has a large cofactor that trial division cannot classify.
pub fn square_free_decompose(n: &BigUint) -> Option<(BigUint, BigUint)> {
    if n.is_zero() {
        return Some((BigUint::zero(), BigUint::one()));
    }
    let mut rem = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rem {
            break;
        }
        let mut e = 0u32;
        while (&rem % &pb).is_zero() {
            rem /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / 2);
            if e % 2 == 1 {
                f *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rem > BigUint::one() {
        let pb = BigUint::from(p);
        if &pb * &pb > rem {
            f *= rem;
        } else {
            let r = rem.sqrt();
            let lim = BigUint::from(TRIAL_LIMIT);
            if &r * &r == rem {
                s *= r;
            } else if rem < &lim * &lim * &lim {
                f *= rem;
            } else {
                return None;
            }
        }
    }
    Some((s, f))
}

pub fn is_square_free(n: u64) -> bool {
    match square_free_decompose(&BigUint::from(n)) {
        Some((s, _)) => s.is_one(),
        None => false,
    }
}

/// Exact square root of a non-negative rational, if it is rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn * &sn == *n && &sd * &sd == *d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl QuadNum {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadNum { a, b: BigRational::zero(), d: 0 }
    }

    /// `a + b*sqrt(n)` for any `n >= 0`. Square factors of `n` are moved
    /// into `b`, so `sqrt(120)` becomes `2*sqrt(30)`.
    pub fn new(a: BigRational, b: BigRational, n: u64) -> Result<Self> {
        if b.is_zero() || n == 0 {
            return Ok(Self::from_rational(a));
        }
        let (s, f) = square_free_decompose(&BigUint::from(n)).ok_or(Error::BadRadicand(n))?;
        let b = b * BigRational::from_integer(BigInt::from(s));
        let f = f.to_u64().ok_or(Error::BadRadicand(n))?;
        if f == 1 {
            return Ok(Self::from_rational(a + b));
        }
        Ok(QuadNum { a, b, d: f })
    }

    /// `a + b*sqrt(n)` from machine integers; panics on a bad radicand.
    pub fn quad(a: (i64, i64), b: (i64, i64), n: u64) -> Self {
        Self::new(rat(a.0, a.1), rat(b.0, b.1), n).expect("valid radicand")
    }

    pub fn sqrt_of(n: u64) -> Self {
        Self::quad((0, 1), (1, 1), n)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Radicand, or `None` for a rational value.
    pub fn radicand(&self) -> Option<u64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.a.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Radicand shared by `self` and `other`, `0` when both are rational.
    pub fn common_radicand(&self, other: &QuadNum) -> Result<u64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(Error::MixedRadicand(x, y)),
        }
    }

    fn build(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            QuadNum { a, b: BigRational::zero(), d: 0 }
        } else {
            QuadNum { a, b, d }
        }
    }

    fn d_rat(d: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(d))
    }

    pub fn conjugate(&self) -> Self {
        Self::build(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a^2 - D b^2`, the product with the conjugate.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * Self::d_rat(self.d)
    }

    pub fn checked_add(&self, o: &QuadNum) -> Result<Self> {
        let d = self.common_radicand(o)?;
        Ok(Self::build(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn checked_sub(&self, o: &QuadNum) -> Result<Self> {
        let d = self.common_radicand(o)?;
        Ok(Self::build(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn checked_mul(&self, o: &QuadNum) -> Result<Self> {
        let d = self.common_radicand(o)?;
        let a = &self.a * &o.a + &self.b * &o.b * Self::d_rat(d);
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::build(a, b, d))
    }

    pub fn checked_div(&self, o: &QuadNum) -> Result<Self> {
        self.common_radicand(o)?;
        let inv = o.recip()?;
        self.checked_mul(&inv)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::build(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::build(&self.a * r, &self.b * r, self.d)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of the value, decided exactly.
    pub fn signum(&self) -> Ordering {
        let z = BigRational::zero();
        let sa = self.a.cmp(&z);
        let sb = self.b.cmp(&z);
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => {
                let a2 = &self.a * &self.a;
                let bd = &self.b * &self.b * Self::d_rat(self.d);
                a2.cmp(&bd)
            }
            (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.a * &self.a;
                let bd = &self.b * &self.b * Self::d_rat(self.d);
                bd.cmp(&a2)
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn try_cmp(&self, o: &QuadNum) -> Result<Ordering> {
        Ok(self.checked_sub(o)?.signum())
    }

    pub fn cmp_int(&self, n: &BigInt) -> Ordering {
        Self::build(&self.a - rat_int(n), self.b.clone(), self.d).signum()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // |b| sqrt(D) = sqrt(N/M) >= isqrt(N M)/M, good to within 1/M.
        let bd = &self.b * &self.b * Self::d_rat(self.d);
        let (n, m) = (bd.numer().clone(), bd.denom().clone());
        let lower = BigRational::new((&n * &m).sqrt(), m);
        let approx = if self.b.is_positive() { &self.a + lower } else { &self.a - lower };
        let mut g = approx.floor().to_integer();
        loop {
            if self.cmp_int(&g) == Ordering::Less {
                g -= 1;
            } else if self.cmp_int(&(&g + 1)) != Ordering::Less {
                g += 1;
            } else {
                return g;
            }
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Fixed-point decimal with `digits` places after the point.
    pub fn to_decimal(&self, digits: usize, rounding: Rounding) -> String {
        let scale = QuadNum::from_bigint(BigInt::from(10u32).pow(digits as u32));
        let x = self * &scale;
        let n = match rounding {
            Rounding::Down => x.floor(),
            Rounding::Up => x.ceil(),
            Rounding::Nearest => (&x + &QuadNum::frac(1, 2)).floor(),
        };
        let neg = n.is_negative();
        let mut s = n.abs().to_str_radix(10);
        if digits > 0 {
            if s.len() <= digits {
                s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
            }
            s.insert(s.len() - digits, '.');
        }
        if neg {
            s.insert(0, '-');
        }
        s
    }

    /// Floating-point approximation, for display geometry only.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17, Rounding::Nearest).parse().unwrap_or(f64::NAN)
    }

    /// Exact square root when it lies in a quadratic field. For rationals
    /// the result may live in a fresh radicand.
    pub fn sqrt_exact(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Precondition("square root of a negative number".into()));
        }
        if self.is_rational() {
            let num = self.a.numer().to_biguint().unwrap_or_default();
            let den = self.a.denom().to_biguint().unwrap_or_default();
            let nm = &num * &den;
            let (s, f) = square_free_decompose(&nm).ok_or(Error::RadicandExplosion)?;
            let coef = BigRational::new(BigInt::from(s), BigInt::from(den));
            let f = f.to_u64().ok_or(Error::RadicandExplosion)?;
            return QuadNum::new(BigRational::zero(), coef, f);
        }
        // (x + y sqrt D)^2 = u + v sqrt D  forces  x^2 = (u +- sqrt(norm)) / 2.
        let s = rational_sqrt(&self.norm()).ok_or(Error::RadicandExplosion)?;
        let two = rat(2, 1);
        for cand in [(&self.a + &s) / &two, (&self.a - &s) / &two] {
            if let Some(x) = rational_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let mut r = Self::build(x, y, self.d);
                if r.is_negative() {
                    r = -r;
                }
                if &(&r * &r) == self {
                    return Ok(r);
                }
            }
        }
        Err(Error::RadicandExplosion)
    }

    /// ASCII form accepted by [`FromStr`]: `a/b+c/d*sqrt(D)`.
    pub fn to_ascii(&self) -> String {
        if self.is_rational() {
            return self.a.to_string();
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        format!("{}{}{}*sqrt({})", self.a, sign, self.b.abs(), self.d)
    }

    pub fn min(self, o: QuadNum) -> QuadNum {
        if o < self {
            o
        } else {
            self
        }
    }

    pub fn max(self, o: QuadNum) -> QuadNum {
        if o > self {
            o
        } else {
            self
        }
    }
}

impl PartialOrd for QuadNum {
    /// `None` exactly when the radicands clash.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

impl From<BigInt> for QuadNum {
    fn from(n: BigInt) -> Self {
        QuadNum::from_bigint(n)
    }
}

impl From<&BigInt> for QuadNum {
    fn from(n: &BigInt) -> Self {
        QuadNum::from_bigint(n.clone())
    }
}

impl From<BigRational> for QuadNum {
    fn from(r: BigRational) -> Self {
        QuadNum::from_rational(r)
    }
}

impl std::ops::Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::build(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl std::ops::Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

// Operators panic on clashing radicands; the `checked_*` methods do not.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, 'b> std::ops::$tr<&'b QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'b QuadNum) -> QuadNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl<'b> std::ops::$tr<&'b QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'b QuadNum) -> QuadNum {
                std::ops::$tr::$m(&self, rhs)
            }
        }
        impl<'a> std::ops::$tr<QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                std::ops::$tr::$m(self, &rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

fn fmt_int_coef(c: &BigInt, d: u64) -> String {
    if c.is_one() {
        format!("√{d}")
    } else if *c == BigInt::from(-1) {
        format!("-√{d}")
    } else {
        format!("{c}√{d}")
    }
}

impl fmt::Display for QuadNum {
    /// Common-denominator form such as `(54+11√30)/14`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let l = self.a.denom().lcm(self.b.denom());
        let an = (&self.a * rat_int(&l)).to_integer();
        let bn = (&self.b * rat_int(&l)).to_integer();
        let body = if an.is_zero() {
            fmt_int_coef(&bn, self.d)
        } else {
            let rad = fmt_int_coef(&bn.abs(), self.d);
            let sign = if bn.is_negative() { '-' } else { '+' };
            format!("{an}{sign}{rad}")
        };
        if l.is_one() {
            write!(f, "{body}")
        } else if an.is_zero() {
            write!(f, "{body}/{l}")
        } else {
            write!(f, "({body})/{l}")
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if let Some((int, frac)) = t.split_once('.') {
        let bad = || Error::Parse(format!("bad decimal '{s}'"));
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
        return Ok(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)));
    }
    let r = BigRational::from_str(t).map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    Ok(r)
}

impl FromStr for QuadNum {
    type Err = Error;

    /// Accepts `p`, `p/q`, finite decimals, `a+b*sqrt(D)`, `b*sqrt(D)` and `sqrt(D)` with
    /// rational `a`, `b`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(idx) = s.find("sqrt(") else {
            return Ok(QuadNum::from_rational(parse_rational(&s)?));
        };
        let inner = s[idx + 5..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in '{s}'")))?;
        let n: u64 = inner.parse().map_err(|_| Error::Parse(format!("bad radicand '{inner}'")))?;
        let prefix = &s[..idx];
        let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
        let split = prefix
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("0", prefix),
        };
        let b = match b_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other)?,
        };
        QuadNum::new(parse_rational(a_str)?, b, n)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadJson {
    a: [String; 2],
    b: [String; 2],
    #[serde(rename = "D")]
    d: u64,
}

fn rat_pair(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn pair_rat(p: &[String; 2]) -> Result<BigRational> {
    let n = BigInt::from_str(&p[0]).map_err(|_| Error::Parse(format!("bad integer '{}'", p[0])))?;
    let d = BigInt::from_str(&p[1]).map_err(|_| Error::Parse(format!("bad integer '{}'", p[1])))?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        QuadJson { a: rat_pair(&self.a), b: rat_pair(&self.b), d: self.d }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<De: Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        use serde::de::Error as _;
        let j = QuadJson::deserialize(de)?;
        let a = pair_rat(&j.a).map_err(De::Error::custom)?;
        let b = pair_rat(&j.b).map_err(De::Error::custom)?;
        if j.d == 0 && !b.is_zero() {
            return Err(De::Error::custom("irrational part with D = 0"));
        }
        if j.d != 0 && !is_square_free(j.d) || j.d == 1 {
            return Err(De::Error::custom(Error::BadRadicand(j.d)));
        }
        QuadNum::new(a, b, j.d).map_err(De::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_common_denominator_form() {
        let x = QuadNum::quad((27, 7), (11, 14), 30);
        assert_eq!(x.to_string(), "(54+11√30)/14");
        assert_eq!(QuadNum::sqrt_of(2).to_string(), "√2");
        assert_eq!(QuadNum::quad((-1, 1), (-1, 2), 5).to_string(), "(-2-√5)/2");
        assert_eq!(QuadNum::frac(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["27/7+11/14*sqrt(30)", "sqrt(2)", "-sqrt(3)", "7/2", "-1-2*sqrt(5)", "3/2-1/3*sqrt(7)"] {
            let x: QuadNum = s.parse().unwrap();
            let y: QuadNum = x.to_ascii().parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
        let x: QuadNum = "sqrt(120)".parse().unwrap();
        assert_eq!(x, QuadNum::quad((0, 1), (2, 1), 30));
        assert_eq!("sqrt(9)".parse::<QuadNum>().unwrap(), QuadNum::from_int(3));
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let x = QuadNum::sqrt_of(2);
        let y = QuadNum::sqrt_of(3);
        assert_eq!(x.checked_add(&y), Err(Error::MixedRadicand(2, 3)));
        assert!(x.partial_cmp(&y).is_none());
        assert!(x.checked_add(&QuadNum::one()).is_ok());
    }

    #[test]
    fn decimal_rounding_is_directed() {
        let x = QuadNum::sqrt_of(2);
        assert_eq!(x.to_decimal(10, Rounding::Down), "1.4142135623");
        assert_eq!(x.to_decimal(10, Rounding::Up), "1.4142135624");
        assert_eq!((-x).to_decimal(3, Rounding::Down), "-1.415");
        assert_eq!(QuadNum::frac(1, 8).to_decimal(2, Rounding::Nearest), "0.13");
        assert_eq!(QuadNum::frac(-1, 3).to_decimal(0, Rounding::Down), "-1");
        assert_eq!(QuadNum::frac(1, 300).to_decimal(4, Rounding::Down), "0.0033");
    }

    #[test]
    fn sqrt_in_new_field() {
        assert_eq!(QuadNum::frac(9, 4).sqrt_exact().unwrap(), QuadNum::frac(3, 2));
        assert_eq!(QuadNum::frac(1, 2).sqrt_exact().unwrap(), QuadNum::quad((0, 1), (1, 2), 2));
        let x = QuadNum::quad((17, 1), (12, 1), 2);
        assert_eq!(x.sqrt_exact().unwrap(), QuadNum::quad((3, 1), (2, 1), 2));
        assert_eq!(QuadNum::quad((1, 1), (1, 1), 2).sqrt_exact(), Err(Error::RadicandExplosion));
    }

    #[test]
    fn json_shape() {
        let x = QuadNum::quad((3, 2), (31, 120), 30);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v, serde_json::json!({"a":["3","2"],"b":["31","120"],"D":30}));
        let r = serde_json::to_value(QuadNum::frac(5, 7)).unwrap();
        assert_eq!(r, serde_json::json!({"a":["5","7"],"b":["0","1"],"D":0}));
        let back: QuadNum = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
        let bad = serde_json::json!({"a":["1","1"],"b":["1","1"],"D":8});
        assert!(serde_json::from_value::<QuadNum>(bad).is_err());
    }

    #[test]
    fn square_free_split() {
        let (s, f) = square_free_decompose(&BigUint::from(2u32 * 2 * 3 * 3 * 3 * 7)).unwrap();
        assert_eq!((s, f), (BigUint::from(6u32), BigUint::from(21u32)));
        assert!(is_square_free(30));
        assert!(!is_square_free(12));
    }
}
