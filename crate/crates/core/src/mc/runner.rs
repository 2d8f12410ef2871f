use std::sync::Mutex;

/// Execution parameters of a Monte-Carlo run.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// 0 means hardware parallelism.
    pub workers: usize,
    /// Trials per work unit; amortizes workspace reuse and must not affect
    /// results (the reduction is per-trial, not per-batch).
    pub batch: usize,
    pub confidence: f64,
}

pub const DEFAULT_BATCH: usize = 4096;

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            workers: 0,
            batch: DEFAULT_BATCH,
            confidence: 0.95,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn effective_workers(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}

/// Evaluate `f(trial_index)` for every trial and return the values indexed
/// by trial. Work units are fixed-size batches handed to a worker pool; the
/// output is identical for any worker count or batch size because each slot
/// is written from its own trial index alone.
pub fn run_trials(cfg: &McConfig, f: impl Fn(u64) -> f64 + Sync) -> Vec<f64> {
    run_trials_multi(cfg, 1, |trial, out| out[0] = f(trial))
}

/// Like [`run_trials`] but with `width` values per trial; the result is
/// trial-major (`trial * width + slot`).
pub fn run_trials_multi(
    cfg: &McConfig,
    width: usize,
    f: impl Fn(u64, &mut [f64]) + Sync,
) -> Vec<f64> {
    assert!(width >= 1);
    let n = cfg.trials as usize;
    let mut out = vec![0.0f64; n * width];
    let batch = cfg.batch.max(1);
    let workers = cfg.effective_workers().min(n.div_ceil(batch)).max(1);

    if workers == 1 {
        for (i, chunk) in out.chunks_mut(width).enumerate() {
            f(i as u64, chunk);
        }
        return out;
    }

    let mut units: Vec<(usize, &mut [f64])> = Vec::with_capacity(n.div_ceil(batch));
    for (b, chunk) in out.chunks_mut(batch * width).enumerate() {
        units.push((b * batch, chunk));
    }
    let queue = Mutex::new(units);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let unit = queue.lock().expect("queue poisoned").pop();
                match unit {
                    Some((start, chunk)) => {
                        for (j, slots) in chunk.chunks_mut(width).enumerate() {
                            f((start + j) as u64, slots);
                        }
                    }
                    None => break,
                }
            });
        }
    });
    out
}
