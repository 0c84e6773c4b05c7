//! Analytical backhaul-rate engine.
//!
//! A user requesting file j while connected to h hubs already holds
//! z = x_j * h cached coded symbols; the backhaul must supply T more until
//! the decoder reaches full rank. This module evaluates E[T] exactly via the
//! closed form
//!
//!   E[T] = E[Delta] + sum_{z<=k} (k-z) P_Z(z)
//!          - sum_{z>k} P_Z(z) * sum_{delta=0}^{z-k-1} P_F(delta)
//!
//! over the finite support of Z, together with the upper bound
//! delta_u + E[(k-Z)^+] and an MDS-code baseline (an MDS receiver needs
//! exactly k distinct symbols).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::lrfc::{self, DEFAULT_TAIL_TOL};
use crate::popularity::PopularityDist;
use crate::topology::ConnectivityDist;
use crate::{Error, Result};

/// Per-hub cache placement: x_j coded symbols of file j, with
/// sum x_j = M * k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    x: Vec<u32>,
    k: u32,
    m_files: u32,
}

impl Placement {
    pub fn new(x: Vec<u32>, k: u32, m_files: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1"));
        }
        let total: u64 = x.iter().map(|&v| v as u64).sum();
        if total != m_files as u64 * k as u64 {
            return Err(Error::InvalidParameter("placement does not sum to M * k"));
        }
        Ok(Placement { x, k, m_files })
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m_files(&self) -> u32 {
        self.m_files
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Finite pmf of Z, the number of cached symbols available to a user.
#[derive(Debug, Clone)]
pub struct ZDist {
    entries: Vec<(u64, f64)>,
}

impl ZDist {
    /// Probability-weighted support, sorted by z, collisions merged.
    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }
}

fn check_h_support(conn: &ConnectivityDist) -> Result<()> {
    if conn.uncovered_mass() > 0.0 {
        return Err(Error::UnconnectedMass);
    }
    Ok(())
}

fn check_dims(x: &Placement, pop: &PopularityDist) -> Result<()> {
    if x.n() != pop.n() {
        return Err(Error::DimensionMismatch { expected: pop.n(), got: x.n() });
    }
    Ok(())
}

/// P_Z(z) = sum_{j,h} p_j gamma_h [z = x_j * h].
pub fn z_dist(x: &Placement, pop: &PopularityDist, conn: &ConnectivityDist) -> Result<ZDist> {
    check_dims(x, pop)?;
    check_h_support(conn)?;
    let mut map: BTreeMap<u64, f64> = BTreeMap::new();
    for (j, &pj) in pop.probs().iter().enumerate() {
        for &(h, g) in conn.gamma() {
            let z = x.x()[j] as u64 * h as u64;
            *map.entry(z).or_insert(0.0) += pj * g;
        }
    }
    Ok(ZDist { entries: map.into_iter().collect() })
}

/// P_{T|Z}(t|z): probability that exactly t backhaul symbols are needed when
/// z cached symbols are available. Uses P_F = 1 for negative arguments, which
/// collapses the z <= k and z > k cases into one formula except at t = 0.
pub fn t_given_z(t: u64, z: u64, k: usize, q: u32) -> f64 {
    let d = z as i64 - k as i64 + t as i64;
    if z > k as u64 && t == 0 {
        return 1.0 - lrfc::p_fail(k, d, q);
    }
    lrfc::p_fail(k, d - 1, q) - lrfc::p_fail(k, d, q)
}

/// Prefix sums of P_F: out[i] = sum_{delta=0}^{i-1} P_F(delta), for i = 0..=len.
fn p_fail_prefix(k: usize, q: u32, len: usize) -> Vec<f64> {
    let mut pref = Vec::with_capacity(len + 1);
    pref.push(0.0);
    let mut acc = 0.0;
    for d in 0..len {
        acc += lrfc::p_fail(k, d as i64, q);
        pref.push(acc);
    }
    pref
}

/// Exact E[T] over the finite Z support.
pub fn expected_backhaul_exact(
    x: &Placement,
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    q: u32,
    tail_tol: f64,
) -> Result<f64> {
    let k = x.k() as usize;
    let z = z_dist(x, pop, conn)?;
    let e_delta = lrfc::avg_overhead(k, q, tail_tol);
    let max_excess = z
        .entries()
        .iter()
        .map(|&(zv, _)| zv.saturating_sub(k as u64))
        .max()
        .unwrap_or(0) as usize;
    let pref = p_fail_prefix(k, q, max_excess);
    let mut et = e_delta;
    for &(zv, pz) in z.entries() {
        if zv <= k as u64 {
            et += (k as u64 - zv) as f64 * pz;
        } else {
            et -= pz * pref[(zv - k as u64) as usize];
        }
    }
    Ok(et)
}

/// Upper bound delta_u + E[(k-Z)^+], computed directly from the (j, h) pairs.
pub fn expected_backhaul_bound(
    x: &Placement,
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    q: u32,
) -> Result<f64> {
    Ok(lrfc::avg_overhead_bound(q) + mean_shortfall(x, pop, conn)?)
}

/// MDS baseline: a receiver needs exactly k distinct symbols, so the
/// backhaul sends (k - x_j h)^+. Requires x_j <= k (an MDS hub never stores
/// more than k useful symbols of one file).
pub fn expected_backhaul_mds(
    x: &Placement,
    pop: &PopularityDist,
    conn: &ConnectivityDist,
) -> Result<f64> {
    if x.x().iter().any(|&v| v > x.k()) {
        return Err(Error::InvalidParameter("MDS placement requires x_j <= k"));
    }
    mean_shortfall(x, pop, conn)
}

/// E[(k - Z)^+] = sum_{j,h} p_j gamma_h max(0, k - x_j h).
fn mean_shortfall(x: &Placement, pop: &PopularityDist, conn: &ConnectivityDist) -> Result<f64> {
    check_dims(x, pop)?;
    check_h_support(conn)?;
    let k = x.k() as u64;
    let mut sum = 0.0;
    for (j, &pj) in pop.probs().iter().enumerate() {
        for &(h, g) in conn.gamma() {
            let z = x.x()[j] as u64 * h as u64;
            sum += pj * g * k.saturating_sub(z) as f64;
        }
    }
    Ok(sum)
}

/// Bundle of the rate quantities for one scenario, raw and normalized by k.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub e_delta: f64,
    pub e_t_exact: f64,
    pub e_t_bound: f64,
    pub e_t_mds: f64,
    pub t_hat_exact: f64,
    pub t_hat_bound: f64,
    pub t_hat_mds: f64,
}

pub fn report(
    x: &Placement,
    pop: &PopularityDist,
    conn: &ConnectivityDist,
    q: u32,
) -> Result<RateReport> {
    let k = x.k() as f64;
    let e_delta = lrfc::avg_overhead(x.k() as usize, q, DEFAULT_TAIL_TOL);
    let e_t_exact = expected_backhaul_exact(x, pop, conn, q, DEFAULT_TAIL_TOL)?;
    let e_t_bound = expected_backhaul_bound(x, pop, conn, q)?;
    let e_t_mds = expected_backhaul_mds(x, pop, conn)?;
    Ok(RateReport {
        e_delta,
        e_t_exact,
        e_t_bound,
        e_t_mds,
        t_hat_exact: e_t_exact / k,
        t_hat_bound: e_t_bound / k,
        t_hat_mds: e_t_mds / k,
    })
}
