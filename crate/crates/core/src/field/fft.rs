//! Unnormalized n-dimensional FFT over a row-major cube, one axis at a time.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use super::GridSpec;

/// Rows handed to one rayon task.
const ROWS_PER_TASK: usize = 16;

/// `positive_kernel` selects `e^{+2πi km/N}` (the forward transform of the
/// library convention); otherwise `e^{-2πi km/N}`.
pub(super) fn transform(data: &mut [Complex64], spec: &GridSpec, positive_kernel: bool) {
    let n = spec.points_per_axis;
    let direction = if positive_kernel {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let fft = FftPlanner::new().plan_fft(n, direction);
    let mut scratch = Vec::new();
    for axis in 0..spec.dim {
        // data viewed as [outer][n][inner]
        let inner = n.pow((spec.dim - 1 - axis) as u32);
        if inner == 1 {
            data.par_chunks_mut(n * ROWS_PER_TASK)
                .for_each(|rows| fft.process(rows));
            continue;
        }
        scratch.resize(n * inner, Complex64::new(0.0, 0.0));
        for block in data.chunks_mut(n * inner) {
            // transpose [n][inner] -> [inner][n]
            let src: &[Complex64] = block;
            scratch
                .par_chunks_mut(n * ROWS_PER_TASK)
                .enumerate()
                .for_each(|(task, rows)| {
                    for (r, row) in rows.chunks_mut(n).enumerate() {
                        let col = task * ROWS_PER_TASK + r;
                        for (k, v) in row.iter_mut().enumerate() {
                            *v = src[k * inner + col];
                        }
                    }
                    fft.process(rows);
                });
            let transposed: &[Complex64] = &scratch;
            block
                .par_chunks_mut(inner)
                .enumerate()
                .for_each(|(k, row)| {
                    for (col, v) in row.iter_mut().enumerate() {
                        *v = transposed[col * n + k];
                    }
                });
        }
    }
}
