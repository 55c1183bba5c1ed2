//! Parameter grids: expansion, evaluation with error isolation, and summaries.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{check, IdentityId, IdentityParams, IdentityReport};
use crate::numkernel::PrecisionContext;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub id: IdentityId,
    pub params: IdentityParams,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub entries: Vec<GridEntry>,
    /// Worker threads; 0 picks the available parallelism.
    #[serde(default)]
    pub threads: usize,
}

impl GridSpec {
    pub fn new(entries: Vec<GridEntry>) -> Self {
        GridSpec { entries, threads: 0 }
    }

    /// Cartesian product over the value lists that `id` uses, in the order
    /// k, alpha, nu, beta, x. Lists for parameters outside the signature are ignored.
    pub fn lattice(id: IdentityId, ks: &[u32], alphas: &[f64], nus: &[f64], betas: &[f64], xs: &[f64]) -> Self {
        let sig = id.signature();
        fn pick<T: Copy>(used: bool, v: &[T]) -> Vec<Option<T>> {
            if used {
                v.iter().map(|x| Some(*x)).collect()
            } else {
                vec![None]
            }
        }
        let mut entries = Vec::new();
        for k in pick(sig.contains(&"k"), ks) {
            for alpha in pick(sig.contains(&"alpha"), alphas) {
                for nu in pick(sig.contains(&"nu"), nus) {
                    for beta in pick(sig.contains(&"beta"), betas) {
                        for x in pick(sig.contains(&"x"), xs) {
                            entries.push(GridEntry { id, params: IdentityParams { k, alpha, beta, nu, x } });
                        }
                    }
                }
            }
        }
        GridSpec::new(entries)
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub reports: Vec<IdentityReport>,
    pub passed: usize,
    pub failed: usize,
}

impl GridSummary {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

fn evaluate(e: &GridEntry, ctx: &PrecisionContext) -> IdentityReport {
    check(e.id, &e.params, ctx).unwrap_or_else(|err| IdentityReport::failed(e.id, &e.params, ctx, &err))
}

/// Evaluate every entry. Failures become reports with `error` set; the
/// report order is the entry order whatever the completion order.
pub fn run_grid(spec: &GridSpec, ctx: &PrecisionContext) -> GridSummary {
    let n = spec.entries.len();
    let threads = if spec.threads == 0 {
        std::thread::available_parallelism().map_or(1, |t| t.get())
    } else {
        spec.threads
    }
    .min(n.max(1));
    let slots: Vec<Mutex<Option<IdentityReport>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let r = evaluate(&spec.entries[i], ctx);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    let reports: Vec<IdentityReport> = slots.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    GridSummary { failed: n - passed, passed, reports }
}
