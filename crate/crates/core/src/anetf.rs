//! Monte-Carlo estimate of the average number of erasures to failure.
//!
//! Symbols are erased one at a time in a random order until the pattern can
//! no longer be decoded. The count at that moment is one sample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec;
use crate::codespec::{Code, CodeSpec};
use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::matrix::VectorBasis;
use crate::pcheck::build_parity_check;

pub const DEFAULT_TRIALS: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// The recursive decoder's guaranteed capability.
    Capability,
    /// Independence of the erased parity-check columns.
    ParityCheck,
    /// Succeeds when either of the above does.
    Hybrid,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Capability => "capability",
            Mode::ParityCheck => "parity-check",
            Mode::Hybrid => "hybrid",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "capability" | "alg" => Ok(Mode::Capability),
            "parity-check" | "pcheck" => Ok(Mode::ParityCheck),
            "hybrid" => Ok(Mode::Hybrid),
            _ => Err(Error::Parse(format!(
                "unknown mode {s:?} (expected capability, pcheck or hybrid)"
            ))),
        }
    }
}

/// How the random erasure order is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arrival {
    /// Every order of the symbols is equally likely.
    #[default]
    Uniform,
    /// Each erasure picks a leaf row uniformly among rows with a surviving
    /// symbol, then a surviving symbol of that row uniformly.
    RowFirst,
}

impl fmt::Display for Arrival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arrival::Uniform => "uniform",
            Arrival::RowFirst => "row-first",
        })
    }
}

impl FromStr for Arrival {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Arrival::Uniform),
            "row-first" => Ok(Arrival::RowFirst),
            _ => Err(Error::Parse(format!(
                "unknown arrival model {s:?} (expected uniform or row-first)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnetfConfig {
    pub spec: CodeSpec,
    pub mode: Mode,
    pub arrival: Arrival,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl AnetfConfig {
    pub fn new(spec: CodeSpec, mode: Mode, trials: u64, seed: u64) -> Self {
        AnetfConfig {
            spec,
            mode,
            arrival: Arrival::Uniform,
            trials,
            seed,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnetfReport {
    pub mode: Mode,
    pub arrival: Arrival,
    pub trials: u64,
    pub seed: u64,
    pub spec_digest: String,
    pub mean: f64,
    pub std_error: f64,
    /// Failure count -> number of trials.
    pub histogram: BTreeMap<usize, u64>,
}

impl AnetfReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialisation cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "mode: {}\narrival: {}\ntrials: {}\nseed: {}\nspec: {}\nmean: {:.4}\nstd_error: {:.4}\nhistogram:\n",
            self.mode, self.arrival, self.trials, self.seed, self.spec_digest, self.mean, self.std_error
        );
        for (k, v) in &self.histogram {
            out.push_str(&format!("  {k} {v}\n"));
        }
        out
    }
}

/// Decides after how many erasures of a given order decoding first fails.
///
/// A code of dimension zero never fails; it reports `length + 1`.
pub struct FailureOracle {
    spec: CodeSpec,
    mode: Mode,
    /// Columns of the reduced parity-check matrix.
    columns: Vec<Vec<Symbol>>,
    rank: usize,
}

impl FailureOracle {
    pub fn new(spec: &CodeSpec, mode: Mode) -> Self {
        let (columns, rank) = if mode == Mode::Capability {
            (Vec::new(), 0)
        } else {
            let pc = build_parity_check(spec).reduce();
            let h = pc.matrix();
            ((0..h.cols()).map(|c| h.column(c)).collect(), h.rows())
        };
        FailureOracle {
            spec: spec.clone(),
            mode,
            columns,
            rank,
        }
    }

    pub fn erasures_to_failure(&self, perm: &[usize]) -> Result<usize> {
        let n = self.spec.length();
        if perm.len() != n {
            return Err(Error::InvalidPermutation(n));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[p] = true;
        }
        Ok(match self.mode {
            Mode::Capability => self.capability_failure(perm),
            Mode::ParityCheck => self.parity_failure(perm),
            // Both oracles are monotone, so the combined one fails once both have.
            Mode::Hybrid => self.capability_failure(perm).max(self.parity_failure(perm)),
        })
    }

    fn capability_failure(&self, perm: &[usize]) -> usize {
        let n = perm.len();
        let code = self.spec.code();
        let ok = |k: usize| {
            let mut mask = vec![false; n];
            perm[..k].iter().for_each(|&p| mask[p] = true);
            codec::correctable(code, &mask)
        };
        // Smallest k with ok(k) false; ok(0) always holds.
        let (mut lo, mut hi) = (0, n + 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    fn parity_failure(&self, perm: &[usize]) -> usize {
        let mut basis = VectorBasis::new(self.spec.field(), self.rank);
        for (k, &p) in perm.iter().enumerate() {
            if !basis.insert(&self.columns[p]) {
                return k + 1;
            }
        }
        perm.len() + 1
    }
}

/// Failure count for one erasure order.
pub fn erasures_to_failure(spec: &CodeSpec, mode: Mode, perm: &[usize]) -> Result<usize> {
    FailureOracle::new(spec, mode).erasures_to_failure(perm)
}

/// The uniform erasure order used by trial `index`.
pub fn trial_permutation(seed: u64, index: u64, n: usize) -> Vec<usize> {
    trial_order(seed, index, n, n, Arrival::Uniform)
}

/// The erasure order used by trial `index` for a code of length `n` made of rows of `row_len`.
pub fn trial_order(
    seed: u64,
    index: u64,
    n: usize,
    row_len: usize,
    arrival: Arrival,
) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    match arrival {
        Arrival::Uniform => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            perm
        }
        Arrival::RowFirst => {
            let mut rows: Vec<Vec<usize>> = (0..n)
                .step_by(row_len)
                .map(|start| (start..(start + row_len).min(n)).collect())
                .collect();
            let mut live: Vec<usize> = (0..rows.len()).collect();
            let mut perm = Vec::with_capacity(n);
            while !live.is_empty() {
                let slot = rng.gen_range(0..live.len());
                let row = &mut rows[live[slot]];
                let pick = rng.gen_range(0..row.len());
                perm.push(row.swap_remove(pick));
                if row.is_empty() {
                    live.remove(slot);
                }
            }
            perm
        }
    }
}

/// Length of the innermost rows: the leaf length.
fn row_len(code: &Code) -> usize {
    match code {
        Code::Leaf { n, .. } => *n,
        Code::Node { children, .. } => row_len(&children[0]),
    }
}

/// Runs the trials. The report depends only on the spec, mode, trial count and seed.
pub fn simulate(config: &AnetfConfig) -> Result<AnetfReport> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let oracle = FailureOracle::new(&config.spec, config.mode);
    let n = config.spec.length();
    let rows = row_len(config.spec.code());
    let run = || -> Result<Vec<usize>> {
        (0..config.trials)
            .into_par_iter()
            .map(|i| {
                let order = trial_order(config.seed, i, n, rows, config.arrival);
                oracle.erasures_to_failure(&order)
            })
            .collect()
    };
    let counts = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run)?,
        None => run()?,
    };

    let mut histogram = BTreeMap::new();
    for c in counts {
        *histogram.entry(c).or_insert(0u64) += 1;
    }
    let trials = config.trials as f64;
    let mean = histogram
        .iter()
        .map(|(&k, &v)| k as f64 * v as f64)
        .sum::<f64>()
        / trials;
    let std_error = if config.trials > 1 {
        let ss: f64 = histogram
            .iter()
            .map(|(&k, &v)| v as f64 * (k as f64 - mean).powi(2))
            .sum();
        (ss / (trials - 1.0) / trials).sqrt()
    } else {
        0.0
    };
    Ok(AnetfReport {
        mode: config.mode,
        arrival: config.arrival,
        trials: config.trials,
        seed: config.seed,
        spec_digest: config.spec.digest(),
        mean,
        std_error,
        histogram,
    })
}
