//! Integer cache-placement optimization.
//!
//! The bound objective delta_u + sum_{j,h} p_j gamma_h (k - x_j h)^+ is
//! separable and convex in each x_j (marginal gains are non-increasing), so
//! greedy marginal allocation of the M*k symbol budget is globally optimal.
//! The MDS objective is identical up to the additive constant delta_u and
//! yields the same argmin. A brute-force enumerator over tiny instances
//! serves as an optimality oracle.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::popularity::PopularityDist;
use crate::rate::{expected_backhaul_exact, Placement};
use crate::topology::ConnectivityDist;
use crate::{Error, Result};

struct Candidate {
    gain: f64,
    j: usize,
}

// Max-heap on gain; ties broken by lowest file index.
impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.j.cmp(&self.j))
    }
}

/// Objective decrease from caching one more symbol of file j:
/// p_j * sum_h gamma_h * min(h, (k - x_j h)^+).
fn marginal_gain(pj: f64, conn: &ConnectivityDist, k: u64, xj: u64) -> f64 {
    let mut g = 0.0;
    for &(h, gh) in conn.gamma() {
        let h = h as u64;
        let shortfall = k.saturating_sub(xj * h);
        g += gh * h.min(shortfall) as f64;
    }
    pj * g
}

fn validate(pop: &PopularityDist, conn: &ConnectivityDist, k: u32, m_files: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1"));
    }
    if conn.uncovered_mass() > 0.0 {
        return Err(Error::UnconnectedMass);
    }
    if m_files as usize > pop.n() {
        return Err(Error::InfeasibleBudget { m_files, n: pop.n() });
    }
    Ok(())
}

fn greedy(pop: &PopularityDist, conn: &ConnectivityDist, k: u32, m_files: u32) -> Result<Placement> {
    validate(pop, conn, k, m_files)?;
    let n = pop.n();
    let mut x = vec![0u32; n];
    let mut heap: BinaryHeap<Candidate> = pop
        .probs()
        .iter()
        .enumerate()
        .map(|(j, &pj)| Candidate { gain: marginal_gain(pj, conn, k as u64, 0), j })
        .collect();
    let budget = m_files as u64 * k as u64;
    for _ in 0..budget {
        // Only the popped file's gain changed since it was pushed, so the
        // heap entries are always current.
        let mut cand = loop {
            let c = heap.pop().expect("budget <= n * k guarantees a candidate");
            if x[c.j] < k {
                break c;
            }
        };
        x[cand.j] += 1;
        if x[cand.j] < k {
            cand.gain = marginal_gain(pop.probs()[cand.j], conn, k as u64, x[cand.j] as u64);
            heap.push(cand);
        }
    }
    Placement::new(x, k, m_files)
}

/// Minimize the upper bound on E[T] (the constant delta_u does not affect
/// the argmin but is part of the objective value).
pub fn optimize_bound(
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    k: u32,
    m_files: u32,
    _q: u32,
) -> Result<Placement> {
    greedy(pop, conn, k, m_files)
}

/// Minimize the MDS backhaul rate. Same machinery as `optimize_bound`
/// without the additive constant, hence the same placement.
pub fn optimize_mds(
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    k: u32,
    m_files: u32,
) -> Result<Placement> {
    greedy(pop, conn, k, m_files)
}

/// Exhaustive minimizer over all x with sum x_j = M*k and 0 <= x_j <= k,
/// lexicographically smallest on ties. Guarded to n*k <= 12 units.
pub fn brute_force_optimum<F>(
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    k: u32,
    m_files: u32,
    objective: F,
) -> Result<Placement>
where
    F: Fn(&Placement) -> f64,
{
    validate(pop, conn, k, m_files)?;
    let n = pop.n();
    if n as u64 * k as u64 > 12 {
        return Err(Error::SearchSpaceTooLarge);
    }
    let budget = m_files * k;
    let mut x = vec![0u32; n];
    let mut best: Option<(f64, Vec<u32>)> = None;
    enumerate(&mut x, 0, budget, k, &mut |x| {
        let p = Placement::new(x.to_vec(), k, m_files).expect("enumeration respects the budget");
        let v = objective(&p);
        // strict improvement keeps the first (lexicographically smallest) optimum
        if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
            best = Some((v, x.to_vec()));
        }
    });
    let (_, x) = best.ok_or(Error::InfeasibleBudget { m_files, n })?;
    Placement::new(x, k, m_files)
}

fn enumerate(x: &mut [u32], j: usize, remaining: u32, cap: u32, visit: &mut impl FnMut(&[u32])) {
    if j == x.len() {
        if remaining == 0 {
            visit(x);
        }
        return;
    }
    let max_here = cap.min(remaining);
    for v in 0..=max_here {
        x[j] = v;
        enumerate(x, j + 1, remaining - v, cap, visit);
    }
    x[j] = 0;
}

/// Single-unit local search over the exact objective, starting from an
/// existing placement. Provided for comparison with the bound optimizer;
/// the acceptance path does not use it.
pub fn refine_exact(
    start: &Placement,
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    q: u32,
    tail_tol: f64,
) -> Result<Placement> {
    let k = start.k();
    let m_files = start.m_files();
    let n = start.n();
    let mut x = start.x().to_vec();
    let mut cur = expected_backhaul_exact(start, pop, conn, q, tail_tol)?;
    // bounded number of passes; each accepted move strictly decreases E[T]
    for _ in 0..64 {
        let mut improved = false;
        for from in 0..n {
            for to in 0..n {
                if x[from] == 0 {
                    break;
                }
                if to == from || x[to] >= k {
                    continue;
                }
                x[from] -= 1;
                x[to] += 1;
                let p = Placement::new(x.clone(), k, m_files)?;
                let v = expected_backhaul_exact(&p, pop, conn, q, tail_tol)?;
                if v < cur - 1e-12 {
                    cur = v;
                    improved = true;
                } else {
                    x[from] += 1;
                    x[to] -= 1;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Placement::new(x, k, m_files)
}
