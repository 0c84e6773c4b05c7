//! Monte-Carlo delivery-phase simulator using real coded symbols.
//!
//! Each trial samples a requested file and a hub count, feeds the decoder
//! the cached coded symbols available through the connected hubs, and counts
//! how many additional symbols the backhaul must supply until the decoder
//! reaches full rank.
//!
//! Per-trial random streams are derived deterministically from
//! (seed, trial index), so results are bit-identical however trials are
//! partitioned across tasks.

use alloc::collections::BTreeMap;
use rand_core::{RngCore, SeedableRng};

use crate::gf::Field;
use crate::lrfc::{encode, Decoder, SourceBlock};
use crate::popularity::PopularityDist;
use crate::rate::Placement;
use crate::topology::ConnectivityDist;
use crate::{Error, Result};

/// A fully specified caching scenario: field, popularity, connectivity and
/// per-hub placement. The connectivity distribution must have no mass at
/// h = 0 (condition it first).
pub struct Scenario {
    field: Field,
    pop: PopularityDist,
    conn: ConnectivityDist,
    placement: Placement,
}

impl Scenario {
    pub fn new(
        field: Field,
        pop: PopularityDist,
        conn: ConnectivityDist,
        placement: Placement,
    ) -> Result<Self> {
        if placement.n() != pop.n() {
            return Err(Error::DimensionMismatch { expected: pop.n(), got: placement.n() });
        }
        if conn.uncovered_mass() > 0.0 {
            return Err(Error::UnconnectedMass);
        }
        Ok(Scenario { field, pop, conn, placement })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.placement.k() as usize
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }
}

/// Aggregated simulation outcome. Mergeable: the histogram is the complete
/// sufficient statistic, so partial results combine in any order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimResult {
    trials: u64,
    histogram: BTreeMap<u64, u64>,
}

impl SimResult {
    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Map t -> number of trials that needed exactly t backhaul symbols.
    pub fn histogram(&self) -> &BTreeMap<u64, u64> {
        &self.histogram
    }

    /// Sample mean of backhaul symbols per request.
    pub fn mean_t(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let sum: u64 = self.histogram.iter().map(|(&t, &c)| t * c).sum();
        sum as f64 / self.trials as f64
    }

    /// Standard error of the sample mean.
    pub fn std_err(&self) -> f64 {
        if self.trials < 2 {
            return 0.0;
        }
        let mean = self.mean_t();
        let ssq: f64 = self
            .histogram
            .iter()
            .map(|(&t, &c)| {
                let d = t as f64 - mean;
                c as f64 * d * d
            })
            .sum();
        libm::sqrt(ssq / (self.trials - 1) as f64 / self.trials as f64)
    }

    /// Fraction of trials with t = 0.
    pub fn frac_zero(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        *self.histogram.get(&0).unwrap_or(&0) as f64 / self.trials as f64
    }

    pub fn merge(&mut self, other: &SimResult) {
        self.trials += other.trials;
        for (&t, &c) in &other.histogram {
            *self.histogram.entry(t).or_insert(0) += c;
        }
    }
}

/// Serve one request: returns the number of backhaul symbols needed.
///
/// The z = x_j * h cached symbols are modeled as independently encoded
/// columns (different hubs cache different symbol sets; duplicate random
/// columns are a probability-zero event the analysis also ignores).
pub fn simulate_request<R: RngCore>(s: &Scenario, rng: &mut R) -> u64 {
    let k = s.k();
    let j = s.pop.sample_file(rng);
    let h = s.conn.sample(rng) as u64;
    let z = s.placement.x()[j] as u64 * h;

    let block = SourceBlock::random(&s.field, k, rng).expect("k >= 1");
    let mut dec = Decoder::new(&s.field, k).expect("k >= 1");
    for _ in 0..z {
        let sym = encode(&s.field, &block, rng);
        if !dec.is_complete() {
            dec.add(&sym).expect("dimensions match");
        }
    }
    let mut t = 0;
    while !dec.is_complete() {
        dec.add(&encode(&s.field, &block, rng)).expect("dimensions match");
        t += 1;
    }
    debug_assert_eq!(dec.solve().expect("full rank").symbols(), block.symbols());
    t
}

/// Run `count` trials with indices `start..start + count`.
///
/// Trial i uses a ChaCha stream addressed by (seed, i); splitting a run into
/// ranges and merging the results is bit-identical to one sequential run.
pub fn simulate_range(s: &Scenario, start: u64, count: u64, seed: u64) -> SimResult {
    let mut result = SimResult::default();
    for trial in start..start + count {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let t = simulate_request(s, &mut rng);
        *result.histogram.entry(t).or_insert(0) += 1;
        result.trials += 1;
    }
    result
}

/// Run `trials` independent delivery simulations.
pub fn simulate(s: &Scenario, trials: u64, seed: u64) -> Result<SimResult> {
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1"));
    }
    Ok(simulate_range(s, 0, trials, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrfc::{avg_overhead, p_fail};
    use alloc::vec;

    fn single_hub() -> ConnectivityDist {
        ConnectivityDist::explicit(&[(1, 1.0)]).unwrap()
    }

    #[test]
    fn empty_cache_always_needs_backhaul() {
        let s = Scenario::new(
            Field::new(1).unwrap(),
            PopularityDist::zipf(1, 0.0).unwrap(),
            single_hub(),
            Placement::new(vec![0], 1, 0).unwrap(),
        )
        .unwrap();
        let r = simulate(&s, 200, 1).unwrap();
        assert!(r.histogram().keys().all(|&t| t >= 1));
    }

    #[test]
    fn same_seed_identical_results() {
        let s = Scenario::new(
            Field::new(2).unwrap(),
            PopularityDist::zipf(5, 0.8).unwrap(),
            ConnectivityDist::explicit(&[(1, 0.4), (2, 0.6)]).unwrap(),
            Placement::new(vec![3, 2, 1, 0, 0], 3, 2).unwrap(),
        )
        .unwrap();
        let a = simulate(&s, 500, 77).unwrap();
        let b = simulate(&s, 500, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn range_split_merges_to_sequential_run() {
        let s = Scenario::new(
            Field::new(4).unwrap(),
            PopularityDist::zipf(4, 0.5).unwrap(),
            single_hub(),
            Placement::new(vec![2, 1, 1, 0], 2, 2).unwrap(),
        )
        .unwrap();
        let full = simulate(&s, 300, 9).unwrap();
        let mut merged = simulate_range(&s, 0, 120, 9);
        merged.merge(&simulate_range(&s, 120, 180, 9));
        assert_eq!(full, merged);
    }

    #[test]
    fn single_trial_histogram() {
        let s = Scenario::new(
            Field::new(1).unwrap(),
            PopularityDist::zipf(1, 0.0).unwrap(),
            single_hub(),
            Placement::new(vec![2], 2, 1).unwrap(),
        )
        .unwrap();
        let r = simulate(&s, 1, 0).unwrap();
        assert_eq!(r.trials(), 1);
        assert_eq!(r.histogram().values().sum::<u64>(), 1);
    }

    #[test]
    fn zero_trials_rejected() {
        let s = Scenario::new(
            Field::new(1).unwrap(),
            PopularityDist::zipf(1, 0.0).unwrap(),
            single_hub(),
            Placement::new(vec![1], 1, 1).unwrap(),
        )
        .unwrap();
        assert!(simulate(&s, 0, 0).is_err());
    }

    #[test]
    fn degenerate_scenario_matches_avg_overhead() {
        // n=1, gamma_1=1, x=(k): t is exactly the decoding overhead.
        let k = 10;
        let s = Scenario::new(
            Field::new(1).unwrap(),
            PopularityDist::zipf(1, 0.0).unwrap(),
            single_hub(),
            Placement::new(vec![k], k, 1).unwrap(),
        )
        .unwrap();
        let trials = 20_000;
        let r = simulate(&s, trials, 5).unwrap();
        let expect = avg_overhead(k as usize, 2, 1e-12);
        let dev = (r.mean_t() - expect).abs();
        assert!(dev <= 3.0 * r.std_err(), "mean {} vs {expect}, 3se {}", r.mean_t(), 3.0 * r.std_err());
    }

    #[test]
    fn zero_backhaul_frequency_matches_p_fail() {
        // z = k cached symbols: Pr{t = 0} = 1 - P_F(0).
        let s = Scenario::new(
            Field::new(1).unwrap(),
            PopularityDist::zipf(1, 0.0).unwrap(),
            ConnectivityDist::explicit(&[(1, 1.0)]).unwrap(),
            Placement::new(vec![7], 7, 1).unwrap(),
        )
        .unwrap();
        let trials = 50_000u64;
        let r = simulate(&s, trials, 13).unwrap();
        let p0 = 1.0 - p_fail(7, 0, 2);
        let frac = r.frac_zero();
        let sigma = (p0 * (1.0 - p0) / trials as f64).sqrt();
        assert!((frac - p0).abs() <= 3.0 * sigma, "frac {frac} vs {p0}");
    }

    #[test]
    fn rejects_unconnected_mass() {
        let conn = ConnectivityDist::explicit(&[(0, 0.3), (1, 0.7)]).unwrap();
        let r = Scenario::new(
            Field::new(1).unwrap(),
            PopularityDist::zipf(1, 0.0).unwrap(),
            conn,
            Placement::new(vec![1], 1, 1).unwrap(),
        );
        assert!(matches!(r, Err(Error::UnconnectedMass)));
    }
}
