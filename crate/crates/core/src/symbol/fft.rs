use crate::Complex;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// In-place iterative radix-2 FFT; `inverse` uses `e^{+2πi jk/N}` and scales
/// by `1/N`. The length must be a power of two.
pub(crate) fn fft_in_place(a: &mut [Complex], inverse: bool) {
    let n = a.len();
    assert!(n.is_power_of_two(), "fft length {n} is not a power of two");
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        // Twiddles from sin/cos per index rather than by repeated
        // multiplication, which drifts for long transforms.
        for k in 0..half {
            let ang = sign * 2.0 * PI * k as f64 / len as f64;
            let w = Complex::new(ang.cos(), ang.sin());
            let mut start = 0;
            while start < n {
                let u = a[start + k];
                let v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
                start += len;
            }
        }
        len <<= 1;
    }
    if inverse {
        let s = 1.0 / n as f64;
        for x in a.iter_mut() {
            *x *= s;
        }
    }
}
