use hyperwave_core::Replicator;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::CliError;

/// Runs replicas on a dedicated rayon pool. Output order is replica order,
/// so estimates match [`hyperwave_core::Sequential`] exactly.
pub struct RayonRunner {
    pool: ThreadPool,
}

impl RayonRunner {
    /// `None` uses one worker per available core.
    pub fn new(threads: Option<usize>) -> Result<Self, CliError> {
        let mut builder = ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(RayonRunner { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Replicator for RayonRunner {
    fn map<T, F>(&self, count: u64, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| (0..count).into_par_iter().map(task).collect())
    }
}
