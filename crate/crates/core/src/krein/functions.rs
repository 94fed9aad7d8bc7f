//! The entire functions `c(z) = cos √z` and `s(z) = sin √z / √z`.
//!
//! Both are even in √z, so any branch of the square root gives the same
//! value; near zero a Taylor series in `z` avoids the 0/0 in `s`.

use num_complex::Complex64;

const TAYLOR_RADIUS: f64 = 1e-4;

/// `(c(z), s(z))` for complex `z`.
pub fn eval_cs(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() <= TAYLOR_RADIUS {
        // c = Σ (−z)^k/(2k)!, s = Σ (−z)^k/(2k+1)!
        let mut c = Complex64::new(0.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        let mut fact_even = 1.0;
        let mut fact_odd = 1.0;
        for k in 0..6 {
            if k > 0 {
                power *= -z;
                fact_even *= ((2 * k - 1) * (2 * k)) as f64;
                fact_odd *= ((2 * k) * (2 * k + 1)) as f64;
            }
            c += power / fact_even;
            s += power / fact_odd;
        }
        return (c, s);
    }
    let w = z.sqrt();
    (w.cos(), w.sin() / w)
}

/// `(c(t), s(t))` for real `t`; hyperbolic forms for `t < 0`.
pub fn eval_cs_real(t: f64) -> (f64, f64) {
    if t.abs() <= TAYLOR_RADIUS {
        let (c, s) = eval_cs(Complex64::new(t, 0.0));
        return (c.re, s.re);
    }
    if t > 0.0 {
        let w = t.sqrt();
        (w.cos(), w.sin() / w)
    } else {
        let w = (-t).sqrt();
        (w.cosh(), w.sinh() / w)
    }
}

/// Derivatives `(c'(t), s'(t))` for real `t`: `c' = −s/2`, `s' = (c − s)/(2t)`.
pub fn eval_cs_derivative_real(t: f64) -> (f64, f64) {
    let (c, s) = eval_cs_real(t);
    let ds = if t.abs() <= 1e-2 {
        // s' = Σ_{k≥1} k (−1)^k t^{k−1} / (2k+1)!
        let mut sum = 0.0;
        let mut power = 1.0;
        let mut fact = 6.0; // 3!
        for k in 1..10 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * k as f64 * power / fact;
            power *= t;
            fact *= ((2 * k + 2) * (2 * k + 3)) as f64;
        }
        sum
    } else {
        (c - s) / (2.0 * t)
    };
    (-s / 2.0, ds)
}
