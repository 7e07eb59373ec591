use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use staircase_core::ech::*;
use staircase_core::QuadNum;

fn main_beta() -> QuadNum {
    QuadNum::quad((1, 2), (5, 12), 30)
}

/// Naive oracle: list all a*m + b*n in a box big enough, sort.
fn ellipsoid_caps_naive(a: &QuadNum, b: &QuadNum, k: usize) -> Vec<QuadNum> {
    let mut v = Vec::new();
    for m in 0..=k as i64 {
        for n in 0..=k as i64 {
            v.push(&(a * &QuadNum::from(m)) + &(b * &QuadNum::from(n)));
        }
    }
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v.truncate(k + 1);
    v
}

/// Oracle for the lattice count: test every point of the bounding box
/// against each edge.
fn lattice_count_naive(path: &ConvexLatticePath) -> u64 {
    let vs = path.vertices();
    let xmax = vs.last().unwrap().0;
    let ymax = vs[0].1;
    let mut count = 0;
    for x in 0..=xmax {
        for y in 0..=ymax {
            let inside = vs.windows(2).all(|w| {
                let (e, r) = ((w[1].0 - w[0].0, w[1].1 - w[0].1), (x - w[0].0, y - w[0].1));
                e.0 * r.1 - e.1 * r.0 <= 0
            });
            if inside {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn ellipsoid_heap_matches_sorted_box() {
    for (a, b) in [(QuadNum::one(), QuadNum::frac(41, 5)), (QuadNum::one(), main_beta()), (QuadNum::from(2), QuadNum::frac(3, 2))] {
        assert_eq!(ellipsoid_caps(&a, &b, 150).unwrap(), ellipsoid_caps_naive(&a, &b, 150));
    }
}

#[test]
fn ellipsoid_index_of_center_is_p() {
    for p in 1..=30i64 {
        for q in 1..=30i64 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let k = ((p + 1) * (q + 1) / 2 - 1) as usize;
            let caps = ellipsoid_caps(&QuadNum::one(), &QuadNum::frac(p, q), k).unwrap();
            assert_eq!(caps[k], QuadNum::from(p), "p={p} q={q}");
        }
    }
}

#[test]
fn polydisk_formula_matches_lattice_paths() {
    for beta in [QuadNum::one(), QuadNum::from(2), QuadNum::frac(5, 2), main_beta()] {
        let brute = polydisk_caps_bruteforce(60, &beta).unwrap();
        let fast = polydisk_caps(60, &beta).unwrap();
        assert_eq!(brute, fast, "beta = {beta}");
    }
}

#[test]
fn c7_of_main_polydisk() {
    assert_eq!(polydisk_cap(7, &main_beta()).unwrap(), &QuadNum::from(3) + &main_beta());
}

#[test]
fn bruteforce_guard() {
    assert_eq!(polydisk_cap_bruteforce(201, &QuadNum::one()), Err(staircase_core::Error::TooLarge(200)));
}

#[test]
fn omega_length_of_staircase_path() {
    let beta = main_beta();
    let path = ConvexLatticePath::new(vec![(0, 3), (2, 2), (5, 0)]).unwrap();
    let omega = polydisk_omega(&beta);
    assert_eq!(omega_length(&path, &omega), &QuadNum::from(5) + &(&QuadNum::from(3) * &beta));
}

#[test]
fn sweep_csv_layout() {
    let beta = main_beta();
    let s = lower_bound_sweep(&beta, 10, &[QuadNum::from(7)]).unwrap();
    let csv = sweep_csv(&s, 40);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(SWEEP_CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..5], ["7", "1", "0", "1", "0"]);
    assert_eq!(row[5].split('.').nth(1).unwrap().len(), 40);
    assert_eq!(row[6], "7");
}

fn convex_path() -> impl Strategy<Value = ConvexLatticePath> {
    // Random primitive-ish edge vectors, sorted into decreasing slope.
    prop::collection::vec((1i64..5, 0i64..5, 1i64..3), 0..5).prop_filter_map("convex", |edges| {
        let mut dirs: Vec<(i64, i64)> = edges.iter().map(|&(dx, dy, c)| (dx * c, -dy * c)).collect();
        dirs.sort_by(|a, b| (b.1 * a.0).cmp(&(a.1 * b.0)));
        dirs.dedup_by(|a, b| a.0 * b.1 == a.1 * b.0);
        let h: i64 = dirs.iter().map(|d| -d.1).sum();
        let mut v = vec![(0, h)];
        for d in dirs {
            let last = *v.last().unwrap();
            v.push((last.0 + d.0, last.1 + d.1));
        }
        ConvexLatticePath::new(v).ok()
    })
}

proptest! {
    #[test]
    fn pick_count_matches_enumeration(path in convex_path()) {
        prop_assert_eq!(lattice_count(&path), lattice_count_naive(&path));
    }

    #[test]
    fn rectangle_paths_give_polydisk_candidates(m in 0i64..12, n in 0i64..12) {
        let path = if m == 0 && n == 0 {
            ConvexLatticePath::new(vec![(0, 0)]).unwrap()
        } else if m == 0 {
            ConvexLatticePath::new(vec![(0, n), (0, 0)]).unwrap()
        } else if n == 0 {
            ConvexLatticePath::new(vec![(0, 0), (m, 0)]).unwrap()
        } else {
            ConvexLatticePath::new(vec![(0, n), (m, n), (m, 0)]).unwrap()
        };
        let beta = main_beta();
        prop_assert_eq!(lattice_count(&path), ((m + 1) * (n + 1)) as u64);
        let len = omega_length(&path, &polydisk_omega(&beta));
        prop_assert_eq!(len, &QuadNum::from(m) + &(&QuadNum::from(n) * &beta));
    }

    #[test]
    fn ratio_is_scale_free(k in 1u64..40, p in 1i64..40, q in 1i64..10) {
        let z = QuadNum::frac(p, q);
        let beta = QuadNum::frac(5, 2);
        let r = ratio_at(&beta, k, &z).unwrap();
        let e = ellipsoid_caps(&QuadNum::from(q), &QuadNum::from(p), k as usize).unwrap();
        let scaled = &e[k as usize] / &QuadNum::from_bigint(BigInt::from(q));
        prop_assert_eq!(r, scaled / polydisk_cap(k, &beta).unwrap());
    }
}
