//! Parallel sweeps with scheduling-independent results.
//!
//! Work is split by an outer index; every per-index result is collected in
//! index order and folded sequentially, so ties always resolve to the
//! smallest index no matter how many threads ran.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use metriclat_core::logic::{Compiled, LogicError, Model, Quantifier};
use metriclat_core::partition::PartitionLattice;
use metriclat_core::{LatticeError, Rational};
use rayon::prelude::*;

/// Largest value seen so far with the witness that produced it.
#[derive(Debug, Clone, Default)]
pub struct Worst {
    pub instances: u64,
    pub value: Option<Rational>,
    pub witness: String,
}

impl Worst {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts one instance; keeps it if strictly larger than the current value.
    pub fn record(&mut self, v: Rational, witness: impl FnOnce() -> String) {
        self.instances += 1;
        self.offer(v, witness);
    }

    /// Like [`Worst::record`] without counting an instance.
    pub fn offer(&mut self, v: Rational, witness: impl FnOnce() -> String) {
        if self.value.is_none_or(|c| v > c) {
            self.value = Some(v);
            self.witness = witness();
        }
    }

    pub fn add_instances(&mut self, k: u64) {
        self.instances += k;
    }

    /// `self` is the earlier part of the sweep and wins ties.
    pub fn merge(mut self, other: Worst) -> Worst {
        self.instances += other.instances;
        if let Some(v) = other.value {
            if self.value.is_none_or(|c| v > c) {
                self.value = Some(v);
                self.witness = other.witness;
            }
        }
        self
    }

    pub fn max_violation(&self) -> Rational {
        self.value.unwrap_or_default()
    }
}

/// Runs `f` for each index in `0..len` across the current rayon pool.
pub fn par_worst<F>(len: usize, f: F) -> Worst
where
    F: Fn(usize) -> Worst + Sync + Send,
{
    let parts: Vec<Worst> = (0..len).into_par_iter().map(f).collect();
    parts.into_iter().fold(Worst::new(), Worst::merge)
}

/// `P_n`, built once per process.
pub fn partition_lattice(n: usize) -> Result<Arc<PartitionLattice>, LatticeError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PartitionLattice>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let p = Arc::new(PartitionLattice::new(n)?);
    Ok(cache.lock().unwrap().entry(n).or_insert(p).clone())
}

/// Per-`x` maxima with the smallest maximizing index.
type Maxima = Arc<Vec<(i64, usize)>>;

/// `max_y φ(x,y)` in lattice units for every `x` of `P_n`, with the smallest
/// maximizing `y`. Built once per process.
pub fn sup_phi(n: usize) -> Result<Maxima, LatticeError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Maxima>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let p = partition_lattice(n)?;
    let l = p.lattice();
    let v: Vec<(i64, usize)> = (0..l.len())
        .into_par_iter()
        .map(|x| {
            let mut best = (i64::MIN, 0);
            for y in 0..l.len() {
                let v = l.phi_scaled(x, y).0;
                if v > best.0 {
                    best = (v, y);
                }
            }
            best
        })
        .collect();
    Ok(cache.lock().unwrap().entry(n).or_insert(Arc::new(v)).clone())
}

/// Evaluates a compiled formula, splitting the outermost quantifier across
/// the current rayon pool.
pub fn par_eval(c: &Compiled, model: &Model, assignment: &[usize]) -> Result<Rational, LogicError> {
    let Some((q, domain)) = c.outer_domain(model, assignment)? else {
        return c.eval(model, assignment);
    };
    let values: Vec<Rational> =
        domain.par_iter().map(|&v| c.eval_outer_at(model, assignment, v)).collect::<Result<_, _>>()?;
    let folded = match q {
        Quantifier::Sup => values.into_iter().max(),
        Quantifier::Inf => values.into_iter().min(),
    };
    folded.ok_or_else(|| LogicError::DomainUnavailable("outer quantifier".into()))
}

/// A pool with `jobs` workers; `0` means one per available core.
pub fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}
