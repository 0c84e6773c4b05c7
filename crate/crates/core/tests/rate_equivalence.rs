//! Cross-validation of the closed-form backhaul rate against a direct
//! evaluation of E[T] = sum_t t * sum_z P(t|z) P_Z(z). The double sum is
//! independent of the closed-form path (it never telescopes the series), so
//! agreement validates the algebra behind the fast evaluator.

use rand_core::{RngCore, SeedableRng};

use satcache_core::lrfc::p_fail_upper;
use satcache_core::popularity::PopularityDist;
use satcache_core::rate::{expected_backhaul_exact, t_given_z, z_dist, Placement};
use satcache_core::topology::ConnectivityDist;

/// Truncated double-sum oracle: sums t * P_{T|Z}(t|z) * P_Z(z) until the
/// remaining tail (bounded by the geometric failure-probability tail) is
/// certifiably below 1e-13.
fn double_sum_oracle(
    x: &Placement,
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    q: u32,
) -> f64 {
    let k = x.k() as usize;
    let z = z_dist(x, pop, conn).unwrap();
    let mut total = 0.0;
    for &(zv, pz) in z.entries() {
        let mut t = 0u64;
        loop {
            total += t as f64 * t_given_z(t, zv, k, q) * pz;
            let delta = zv as i64 - k as i64 + t as i64;
            // once past the k-th symbol the per-term mass decays
            // geometrically; stop when the certified tail is negligible
            if delta >= 0 && (t as f64 + 4.0) * p_fail_upper(delta, q) < 1e-15 {
                break;
            }
            t += 1;
        }
    }
    total
}

#[test]
fn closed_form_matches_double_sum_on_randomized_small_scenarios() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314);
    let mut checked = 0;
    while checked < 120 {
        let n = 1 + (rng.next_u32() % 3) as usize;
        let k = 1 + (rng.next_u32() % 5);
        let q = if rng.next_u32() % 2 == 0 { 2 } else { 4 };
        let alpha = (rng.next_u32() % 20) as f64 / 10.0;
        let pop = PopularityDist::zipf(n, alpha).unwrap();
        let g2 = (rng.next_u32() % 100) as f64 / 100.0;
        let conn = ConnectivityDist::explicit(&[(1, 1.0 - g2), (2, g2)]).unwrap();
        let x: Vec<u32> = (0..n).map(|_| rng.next_u32() % (k + 1)).collect();
        let total: u32 = x.iter().sum();
        if total % k != 0 {
            continue; // placement must be a whole number of files
        }
        let placement = Placement::new(x, k, total / k).unwrap();
        let closed = expected_backhaul_exact(&placement, &pop, &conn, q, 1e-14).unwrap();
        let direct = double_sum_oracle(&placement, &pop, &conn, q);
        assert!(
            (closed - direct).abs() < 1e-9,
            "n={n} k={k} q={q}: closed {closed} vs direct {direct}"
        );
        checked += 1;
    }
}

#[test]
fn closed_form_matches_double_sum_hand_cases() {
    // M=0 and full-cache endpoints, single hub
    for (x, m) in [(vec![0u32, 0], 0u32), (vec![3, 3], 2)] {
        let pop = PopularityDist::zipf(2, 0.0).unwrap();
        let conn = ConnectivityDist::explicit(&[(1, 1.0)]).unwrap();
        let p = Placement::new(x, 3, m).unwrap();
        for q in [2, 4, 16] {
            let closed = expected_backhaul_exact(&p, &pop, &conn, q, 1e-14).unwrap();
            let direct = double_sum_oracle(&p, &pop, &conn, q);
            assert!((closed - direct).abs() < 1e-9);
        }
    }
}
