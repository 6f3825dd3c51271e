/// Charlier polynomial `C_n(t, x)`: the coefficient of `zⁿ` in
/// `(1+z)^{x+t} e^{−zt}`, by the recurrence
/// `(n+1)C_{n+1} = (x−n)C_n − t·C_{n−1}`.
pub fn charlier(n: usize, t: f64, x: f64) -> f64 {
    let mut out = vec![0.0; n + 1];
    charlier_table(n, t, x, &mut out);
    out[n]
}

/// Fill `out[k] = C_k(t, x)` for `k ≤ max_n`.
pub fn charlier_table(max_n: usize, t: f64, x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if max_n == 0 {
        return;
    }
    out[1] = x;
    for n in 1..max_n {
        out[n + 1] = ((x - n as f64) * out[n] - t * out[n - 1]) / (n + 1) as f64;
    }
}

/// Independent evaluation straight from the generating function:
/// `C_n = Σ_k binom(x+t, k)·(−t)^{n−k}/(n−k)!`.
pub fn charlier_series(n: usize, t: f64, x: f64) -> f64 {
    let alpha = x + t;
    let mut binom = 1.0; // binom(alpha, k)
    let mut sum = 0.0;
    for k in 0..=n {
        if k > 0 {
            binom *= (alpha - (k - 1) as f64) / k as f64;
        }
        let j = n - k;
        let tail = (1..=j).fold(1.0, |acc, i| acc * (-t) / i as f64);
        sum += binom * tail;
    }
    sum
}
