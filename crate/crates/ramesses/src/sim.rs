//! Monte Carlo validation of the decryption-failure analysis.
//!
//! Each trial runs a full keygen/encrypt/decrypt round trip and counts
//! mismatches. For every mismatch the harness checks the failure
//! characterization: the column span of the private vector must meet the
//! column span of S·P nontrivially. The observed rate is compared against
//! the 2^-(n-t-w) bound with a one-sided binomial test at 99% confidence.
//!
//! Trials are independent: trial i draws from a ChaCha20 stream derived
//! from (seed, i), so results are identical whether trials run
//! sequentially or sharded across threads. With the `parallel` feature
//! (default) [`run`] shards over rayon and merges shard counts by
//! summation; without it the same entry point runs sequentially.

use crate::linalg::subspace_intersection_dim;
use crate::scheme::{Scheme, SchemeError};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One-sided 99% normal quantile.
const Z_99: f64 = 2.3263478740408408;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureSimResult {
    pub trials: u64,
    pub failures: u64,
    /// Failures whose colspan-intersection predicate held. The failure
    /// characterization says every failure must satisfy it, so this always
    /// equals `failures` unless the analysis is wrong.
    pub lemma_confirmed: u64,
    /// The failure rate is bounded by 2^-(n-t-w).
    pub bound_exponent: i64,
}

impl FailureSimResult {
    pub fn observed_rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    pub fn bound(&self) -> f64 {
        2f64.powi(-(self.bound_exponent as i32))
    }

    /// Largest failure count still consistent with the bound: the ~99th
    /// percentile of Binomial(trials, bound), by normal approximation.
    pub fn failure_threshold_99(&self) -> u64 {
        let mean = self.trials as f64 * self.bound();
        let sd = (mean * (1.0 - self.bound())).sqrt();
        (mean + Z_99 * sd).ceil() as u64
    }

    /// One-sided test: the observed count does not refute the bound at the
    /// 99% level.
    pub fn within_bound_99(&self) -> bool {
        self.failures <= self.failure_threshold_99()
    }

    /// Approximate one-sided 99% upper confidence limit on the true rate.
    pub fn upper_confidence_99(&self) -> f64 {
        let f = self.failures as f64;
        let n = self.trials as f64;
        (f + Z_99 * Z_99 / 2.0 + Z_99 * (f + Z_99 * Z_99 / 4.0).sqrt()) / n
    }

    pub fn lemma_holds(&self) -> bool {
        self.lemma_confirmed == self.failures
    }

    pub fn render_kv(&self) -> String {
        format!(
            "trials={}\nfailures={}\nobserved_rate={:.6e}\nbound_exponent={}\n\
             bound={:.6e}\nupper_confidence_99={:.6e}\nfailure_threshold_99={}\n\
             within_bound_99={}\nlemma_confirmed={}\nlemma_holds={}\n",
            self.trials,
            self.failures,
            self.observed_rate(),
            self.bound_exponent,
            self.bound(),
            self.upper_confidence_99(),
            self.failure_threshold_99(),
            self.within_bound_99(),
            self.lemma_confirmed,
            self.lemma_holds()
        )
    }
}

#[derive(Clone, Copy, Default)]
struct Counts {
    failures: u64,
    lemma_confirmed: u64,
}

impl Counts {
    fn merge(self, other: Counts) -> Counts {
        Counts {
            failures: self.failures + other.failures,
            lemma_confirmed: self.lemma_confirmed + other.lemma_confirmed,
        }
    }
}

/// One full round trip on the ChaCha20 stream derived from (seed, index).
fn run_trial(scheme: &Scheme, seed: [u8; 32], index: u64) -> Counts {
    let mut rng = ChaCha20Rng::from_seed(seed);
    rng.set_stream(index);

    let k_priv = scheme.sample_secret_vector(&mut rng);
    let (pk, sk) = scheme
        .keygen_from_vector(&k_priv)
        .expect("sampled vector has rank w");
    let pt = scheme.sample_plaintext(&mut rng);
    let (ct, transcript) = scheme
        .encrypt_with_transcript(&pk, &pt, &mut rng)
        .expect("honest encryption");

    let ok = match scheme.decrypt(&sk, &ct) {
        Ok(out) => out == pt,
        Err(SchemeError::DecryptFailure) => false,
        Err(other) => panic!("unexpected decrypt error: {other}"),
    };
    if ok {
        return Counts::default();
    }
    // failure characterization: colspan(k_priv) must meet colspan(S·P)
    let sp = transcript.s_matrix.mul(pt.matrix());
    let kp_cols = scheme.context().ext_g(&k_priv).transpose();
    let dim = subspace_intersection_dim(&kp_cols, &sp.transpose());
    Counts {
        failures: 1,
        lemma_confirmed: (dim >= 1) as u64,
    }
}

fn result_from(scheme: &Scheme, trials: u64, counts: Counts) -> FailureSimResult {
    let p = scheme.params();
    FailureSimResult {
        trials,
        failures: counts.failures,
        lemma_confirmed: counts.lemma_confirmed,
        bound_exponent: crate::estimator::failure_exponent(p.n(), p.w(), p.t()),
    }
}

/// Sequential reference implementation.
pub fn run_sequential(scheme: &Scheme, trials: u64, seed: [u8; 32]) -> FailureSimResult {
    let counts = (0..trials)
        .map(|i| run_trial(scheme, seed, i))
        .fold(Counts::default(), Counts::merge);
    result_from(scheme, trials, counts)
}

/// Trials sharded across the rayon thread pool; counts merged by summation.
#[cfg(feature = "parallel")]
pub fn run_parallel(scheme: &Scheme, trials: u64, seed: [u8; 32]) -> FailureSimResult {
    let counts = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(scheme, seed, i))
        .reduce(Counts::default, Counts::merge);
    result_from(scheme, trials, counts)
}

/// Runs the experiment with the best available backend.
pub fn run(scheme: &Scheme, trials: u64, seed: [u8; 32]) -> FailureSimResult {
    #[cfg(feature = "parallel")]
    {
        run_parallel(scheme, trials, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_sequential(scheme, trials, seed)
    }
}
