//! Thin wrappers around `rustfft` for batched 1-D and row/column 2-D transforms.

use rustfft::FftPlanner;

use crate::C64;

/// In-place unnormalized DFT of every length-`n` chunk of `buf`.
/// `inverse = false` uses `e^{-2πijk/n}`.
pub fn fft_batch(buf: &mut [C64], n: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    plan.process(buf);
}

/// In-place unnormalized 2-D DFT of an `n × n` row-major array.
pub fn fft2(buf: &mut [C64], n: usize, inverse: bool) {
    fft_batch(buf, n, inverse);
    let mut t = transpose(buf, n);
    fft_batch(&mut t, n, inverse);
    buf.copy_from_slice(&transpose(&t, n));
}

pub fn transpose(buf: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for c in 0..n {
            out[c * n + r] = buf[r * n + c];
        }
    }
    out
}

/// DFT over the grid layout (`dim` axes of length `n`).
pub fn dft(buf: &mut [C64], n: usize, dim: usize, inverse: bool) {
    if dim == 1 {
        fft_batch(buf, n, inverse);
    } else {
        fft2(buf, n, inverse);
    }
}

/// Multiplies sample `idx` by `(−1)^{sum of axis indices}`.
pub fn checkerboard(buf: &mut [C64], n: usize, dim: usize) {
    for (idx, v) in buf.iter_mut().enumerate() {
        let s = if dim == 1 { idx } else { idx / n + idx % n };
        if s % 2 == 1 {
            *v = -*v;
        }
    }
}
