//! ECH capacities of ellipsoids and polydisks, convex lattice paths, and the
//! capacity-ratio lower bound for `E(1, z) -> P(1, beta)`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{QuadNum, Rounding};

/// Largest `k` the path enumeration accepts.
pub const BRUTEFORCE_LIMIT: u64 = 200;

struct HeapItem {
    val: QuadNum,
    m: u64,
    n: u64,
}

impl PartialEq for HeapItem {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for HeapItem {
    // Reversed so the max-heap pops the smallest value first. All values
    // share one field, checked before the heap is built.
    fn cmp(&self, o: &Self) -> Ordering {
        o.val
            .partial_cmp(&self.val)
            .expect("single field")
            .then_with(|| (o.m, o.n).cmp(&(self.m, self.n)))
    }
}

/// `c_0, ..., c_K` of `E(a, b)`: the sorted multiset `{a m + b n}`.
pub fn ellipsoid_caps(a: &QuadNum, b: &QuadNum, k_max: usize) -> Result<Vec<QuadNum>> {
    a.common_radicand(b)?;
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Precondition("ellipsoid sides must be positive".into()));
    }
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem { val: QuadNum::zero(), m: 0, n: 0 });
    let mut out = Vec::with_capacity(k_max + 1);
    while out.len() <= k_max {
        let HeapItem { val, m, n } = heap.pop().expect("frontier never empties");
        heap.push(HeapItem { val: &val + b, m, n: n + 1 });
        if n == 0 {
            heap.push(HeapItem { val: &val + a, m: m + 1, n: 0 });
        }
        out.push(val);
    }
    Ok(out)
}

/// `c_k(P(1, beta)) = min { m + n beta : (m+1)(n+1) >= k+1 }`.
pub fn polydisk_cap(k: u64, beta: &QuadNum) -> Result<QuadNum> {
    if !beta.is_positive() {
        return Err(Error::Precondition("beta must be positive".into()));
    }
    let mut best: Option<QuadNum> = None;
    let mut m = 0u64;
    loop {
        let mq = QuadNum::from(m as i64);
        if let Some(b) = &best {
            if mq > *b {
                break;
            }
        }
        let n = (k + 1).div_ceil(m + 1) - 1;
        let v = &mq + &beta.scale(&crate::exactnum::rat(n as i64, 1));
        best = Some(match best {
            Some(b) if b <= v => b,
            _ => v,
        });
        if n == 0 {
            break;
        }
        m += 1;
    }
    Ok(best.expect("at least one candidate"))
}

pub fn polydisk_caps(k_max: u64, beta: &QuadNum) -> Result<Vec<QuadNum>> {
    (0..=k_max).map(|k| polydisk_cap(k, beta)).collect()
}

/// Concave lattice path from `(0, n)` to `(m, 0)`: every step moves right
/// and/or down, and slopes strictly decrease.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexLatticePath {
    vertices: Vec<(i64, i64)>,
}

fn det(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

impl ConvexLatticePath {
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidPath(m.into()));
        let (Some(first), Some(last)) = (vertices.first(), vertices.last()) else {
            return bad("no vertices");
        };
        if first.0 != 0 || first.1 < 0 {
            return bad("must start on the non-negative y-axis");
        }
        if last.1 != 0 || last.0 < 0 {
            return bad("must end on the non-negative x-axis");
        }
        let mut prev: Option<(i64, i64)> = None;
        for w in vertices.windows(2) {
            let e = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if e.0 < 0 || e.1 > 0 || e == (0, 0) {
                return bad("edges must move right and/or down");
            }
            if let Some(p) = prev {
                if det(p, e) >= 0 {
                    return bad("slopes must strictly decrease");
                }
            }
            prev = Some(e);
        }
        Ok(ConvexLatticePath { vertices })
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.vertices.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
    }
}

/// Lattice points in the closed region cut out by the path and the axes,
/// by Pick's theorem.
pub fn lattice_count(path: &ConvexLatticePath) -> u64 {
    let mut cycle: Vec<(i64, i64)> = vec![(0, 0)];
    for &v in path.vertices() {
        if cycle.last() != Some(&v) {
            cycle.push(v);
        }
    }
    if cycle.len() > 1 && cycle.last() == Some(&(0, 0)) {
        cycle.pop();
    }
    let n = cycle.len();
    let (mut area2, mut boundary) = (0i128, 0i128);
    for i in 0..n {
        let (p, q) = (cycle[i], cycle[(i + 1) % n]);
        area2 += p.0 as i128 * q.1 as i128 - p.1 as i128 * q.0 as i128;
        boundary += ((q.0 - p.0).abs() as i128).gcd(&((q.1 - p.1).abs() as i128));
    }
    ((area2.abs() + boundary + 2) / 2) as u64
}

/// `sum over edges nu of max_{p in Omega} det[nu, p]`, with `Omega` the
/// convex hull of `omega`.
pub fn omega_length(path: &ConvexLatticePath, omega: &[(QuadNum, QuadNum)]) -> QuadNum {
    path.edges().fold(QuadNum::zero(), |acc, e| &acc + &support(e, omega))
}

fn support(e: (i64, i64), omega: &[(QuadNum, QuadNum)]) -> QuadNum {
    let (ex, ey) = (QuadNum::from(e.0), QuadNum::from(e.1));
    omega
        .iter()
        .map(|(px, py)| &(&ex * py) - &(&ey * px))
        .reduce(|a, b| a.max(b))
        .unwrap_or_else(QuadNum::zero)
}

/// Corners of the moment rectangle `[0, beta] x [0, 1]` of `P(1, beta)`.
pub fn polydisk_omega(beta: &QuadNum) -> Vec<(QuadNum, QuadNum)> {
    vec![
        (QuadNum::zero(), QuadNum::zero()),
        (beta.clone(), QuadNum::zero()),
        (beta.clone(), QuadNum::one()),
        (QuadNum::zero(), QuadNum::one()),
    ]
}

/// Lattice points in the columns `x0 < x <= x0 + dx` under the segment from
/// `(x0, y0)` with direction `(dx, dy)`.
fn column_points(y0: i64, dx: i64, dy: i64) -> i64 {
    (1..=dx).map(|i| y0 + Integer::div_floor(&(i * dy), &dx) + 1).sum()
}

struct Enumerator<'a> {
    limit: i64,
    omega: &'a [(QuadNum, QuadNum)],
    support: HashMap<(i64, i64), QuadNum>,
    best: Vec<Option<QuadNum>>,
}

impl Enumerator<'_> {
    fn support(&mut self, e: (i64, i64)) -> QuadNum {
        if let Some(s) = self.support.get(&e) {
            return s.clone();
        }
        let s = support(e, self.omega);
        self.support.insert(e, s.clone());
        s
    }

    fn walk(&mut self, x: i64, y: i64, prev: Option<(i64, i64)>, count: i64, len: QuadNum) {
        if y == 0 {
            let slot = &mut self.best[(count - 1) as usize];
            if slot.as_ref().is_none_or(|b| len < *b) {
                *slot = Some(len.clone());
            }
        }
        for dy in (-y..=0).rev() {
            let mut dx = if dy == 0 { 1 } else { 0 };
            loop {
                let e = (dx, dy);
                // Growing dx only flattens the edge, so the first failure ends the run.
                if prev.is_some_and(|p| det(p, e) >= 0) {
                    break;
                }
                let add = column_points(y, dx, dy);
                if count + add > self.limit {
                    break;
                }
                let l = &len + &self.support(e);
                self.walk(x + dx, y + dy, Some(e), count + add, l);
                dx += 1;
            }
        }
    }
}

/// Minimal `Omega`-length over all convex lattice paths enclosing exactly
/// `k+1` points, for every `k <= k_max`, by exhaustive enumeration.
pub fn polydisk_caps_bruteforce(k_max: u64, beta: &QuadNum) -> Result<Vec<QuadNum>> {
    if k_max > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge(BRUTEFORCE_LIMIT));
    }
    let omega = polydisk_omega(beta);
    let mut en = Enumerator {
        limit: k_max as i64 + 1,
        omega: &omega,
        support: HashMap::new(),
        best: vec![None; k_max as usize + 1],
    };
    for y0 in 0..=k_max as i64 {
        en.walk(0, y0, None, y0 + 1, QuadNum::zero());
    }
    Ok(en.best.into_iter().map(|b| b.expect("every count is reachable")).collect())
}

pub fn polydisk_cap_bruteforce(k: u64, beta: &QuadNum) -> Result<QuadNum> {
    Ok(polydisk_caps_bruteforce(k, beta)?.pop().expect("non-empty"))
}

/// `c_k(E(1, z)) / c_k(P(1, beta))`.
pub fn ratio_at(beta: &QuadNum, k: u64, z: &QuadNum) -> Result<QuadNum> {
    if k == 0 {
        return Err(Error::KZero);
    }
    let e = ellipsoid_caps(&QuadNum::one(), z, k as usize)?.pop().expect("non-empty");
    let p = polydisk_cap(k, beta)?;
    e.checked_div(&p)
}

/// Best capacity ratio over `1 <= k <= K` at one sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSample {
    pub z: QuadNum,
    pub lambda: QuadNum,
    pub argmax_k: u64,
}

/// Maximum of the capacity ratio over `1 <= k <= k_max` at each `z`. Ties
/// go to the smallest `k`.
pub fn lower_bound_sweep(beta: &QuadNum, k_max: u64, samples: &[QuadNum]) -> Result<Vec<SweepSample>> {
    if k_max == 0 {
        return Err(Error::KZero);
    }
    let poly = polydisk_caps(k_max, beta)?;
    samples
        .par_iter()
        .map(|z| {
            beta.common_radicand(z)?;
            let ell = ellipsoid_caps(&QuadNum::one(), z, k_max as usize)?;
            let mut best = 1usize;
            for k in 2..=k_max as usize {
                // ell[k]/poly[k] > ell[best]/poly[best], denominators positive.
                if &ell[k] * &poly[best] > &ell[best] * &poly[k] {
                    best = k;
                }
            }
            Ok(SweepSample { z: z.clone(), lambda: &ell[best] / &poly[best], argmax_k: best as u64 })
        })
        .collect()
}

/// 200 rationals spread over `[1, 9]`, all with denominator dividing 64.
pub fn default_sweep_samples() -> Vec<QuadNum> {
    (0..200i64)
        .map(|i| {
            let num = Integer::div_floor(&(2 * i * 512 + 199), &398);
            QuadNum::frac(64 + num, 64)
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "z_a_num,z_a_den,z_b_num,z_b_den,D,lambda_40digits,argmax_k";

/// CSV rendering; `lambda` is rounded down to `digits` places.
pub fn sweep_csv(samples: &[SweepSample], digits: usize) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.z.a().numer(),
            s.z.a().denom(),
            s.z.b().numer(),
            s.z.b().denom(),
            s.z.radicand().unwrap_or(0),
            s.lambda.to_decimal(digits, Rounding::Down),
            s.argmax_k
        ));
    }
    out
}
