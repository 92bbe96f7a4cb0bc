use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{MultiIndex, TrigPoly};

/// Values of `u` on the uniform grid `x = 2π j / m`, `j ∈ {0..m}ⁿ`, row-major.
///
/// Uses an unnormalised inverse FFT along each axis; requires `m > 2·bandwidth`.
pub fn eval_on_grid(u: &TrigPoly, m: usize) -> Vec<Complex64> {
    let n = u.dim();
    assert!(
        m as u64 > 2 * u.bandwidth(),
        "grid too coarse for bandwidth"
    );
    let total = m.pow(n as u32);
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    let mi = m as i64;
    for (k, c) in u.iter() {
        let idx =
            k.0.iter()
                .fold(0usize, |acc, &kj| acc * m + kj.rem_euclid(mi) as usize);
        data[idx] += c;
    }
    if n == 0 {
        return data;
    }

    let fft = FftPlanner::new().plan_fft_inverse(m);
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..n {
        let stride = m.pow((n - 1 - axis) as u32);
        let block = stride * m;
        for base in (0..total).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[start + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[start + i * stride] = *v;
                }
            }
        }
    }
    data
}

/// `max_{|β| ≤ r} sup_x |D^β u(x)|`, evaluated on a grid oversampled 4x past the bandwidth.
///
/// This is a lower bound of the true sup that is sharp to grid resolution.
pub fn sup_norm_deriv(u: &TrigPoly, r: u32) -> f64 {
    let m = 4 * u.bandwidth() as usize + 4;
    MultiIndex::up_to_order(u.dim(), r)
        .iter()
        .map(|beta| {
            eval_on_grid(&u.derivative(beta), m)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
