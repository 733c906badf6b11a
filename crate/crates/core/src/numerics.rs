//! Cancellation-free building blocks for the closed-form divergences.

/// (1+r)·ln(1+r) − r, for r ≥ −1.
pub fn xlogx_term(r: f64) -> f64 {
    if r == -1.0 {
        return 1.0;
    }
    if r.abs() < 1e-2 {
        // Σ_{k≥2} (−1)^k r^k / (k(k−1))
        let mut sum = 0.0;
        let mut pow = r * r;
        for k in 2..20 {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / (kf * (kf - 1.0));
            pow *= r;
        }
        sum
    } else {
        (1.0 + r) * r.ln_1p() - r
    }
}

/// r − ln(1+r), for r > −1.
pub fn log_term(r: f64) -> f64 {
    if r.abs() < 1e-2 {
        // Σ_{k≥2} (−1)^k r^k / k
        let mut sum = 0.0;
        let mut pow = r * r;
        for k in 2..24 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / k as f64;
            pow *= r;
        }
        sum
    } else {
        r - r.ln_1p()
    }
}

/// (1+r)^q − 1 − q·r, for r ≥ −1.
pub fn pow_term(r: f64, q: f64) -> f64 {
    if r.abs() < 1e-2 {
        // Σ_{k≥2} C(q,k) r^k
        let mut sum = 0.0;
        let mut coef = q;
        let mut pow = r;
        for k in 2..24 {
            coef *= (q - (k - 1) as f64) / k as f64;
            pow *= r;
            sum += coef * pow;
        }
        sum
    } else {
        (q * r.ln_1p()).exp_m1() - q * r
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
