//! Unnormalized multi-dimensional complex FFT on row-major cubes, built from
//! batched one-dimensional `rustfft` transforms along each axis.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

#[derive(Clone)]
pub(crate) struct CubeFft {
    n: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CubeFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CubeFft")
            .field("n", &self.n)
            .field("dim", &self.dim)
            .finish()
    }
}

#[derive(Clone, Copy)]
struct SyncPtr(*mut Complex64);
// Columns handed to different workers never overlap.
unsafe impl Send for SyncPtr {}
unsafe impl Sync for SyncPtr {}

impl CubeFft {
    pub(crate) fn new(n: usize, dim: usize) -> Self {
        let mut planner = FftPlanner::new();
        CubeFft {
            n,
            dim,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        debug_assert_eq!(data.len(), n.pow(self.dim as u32));
        let scratch_len = plan.get_inplace_scratch_len();

        // last axis is contiguous: one batched call per chunk of rows
        let rows_per_chunk = (data.len() / n / rayon::current_num_threads().max(1)).max(1);
        data.par_chunks_mut(rows_per_chunk * n).for_each_init(
            || vec![Complex64::default(); scratch_len],
            |scratch, chunk| plan.process_with_scratch(chunk, scratch),
        );
        if self.dim == 1 {
            return;
        }

        // remaining axes: gather strided lines into a contiguous batch
        let ptr = SyncPtr(data.as_mut_ptr());
        let total = data.len();
        for axis in 0..self.dim - 1 {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            // each (outer, inner) pair indexes one line along `axis`
            let outer_count = total / block;
            (0..outer_count).into_par_iter().for_each_init(
                || {
                    (
                        vec![Complex64::default(); stride * n],
                        vec![Complex64::default(); scratch_len],
                    )
                },
                |(buf, scratch), outer| {
                    let base = outer * block;
                    let p = ptr;
                    for inner in 0..stride {
                        for i in 0..n {
                            // SAFETY: index < total and lines are disjoint across workers
                            buf[inner * n + i] = unsafe { *p.0.add(base + inner + i * stride) };
                        }
                    }
                    plan.process_with_scratch(buf, scratch);
                    for inner in 0..stride {
                        for i in 0..n {
                            unsafe { *p.0.add(base + inner + i * stride) = buf[inner * n + i] };
                        }
                    }
                },
            );
        }
    }
}
