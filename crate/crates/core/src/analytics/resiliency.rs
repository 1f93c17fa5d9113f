//! Probability that the sampled representatives keep a BFT supermajority.
//!
//! With `F` faulty nodes among `N` candidates and `Ñ` representatives drawn
//! uniformly without replacement, the faulty representative count `F̃` is
//! hypergeometric. The round is resilient when `3F̃ < Ñ`.

use super::erf::{erf_approx, erf_approx_inv};
use crate::error::{invalid, Error, Result};

fn check(n: usize, f: usize, n_tilde: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("need at least one candidate validator"));
    }
    if f > n {
        return Err(invalid(format!("F = {f} exceeds N = {n}")));
    }
    if n_tilde == 0 || n_tilde > n {
        return Err(invalid(format!("Ñ = {n_tilde} outside [1, {n}]")));
    }
    Ok(())
}

/// Support of `F̃` and the log of its unnormalised pmf, via the ratio
/// `p(k+1)/p(k) = (F−k)(Ñ−k) / ((k+1)(N−F−Ñ+k+1))`.
fn log_weights(n: usize, f: usize, n_tilde: usize) -> (usize, Vec<f64>) {
    let lo = n_tilde.saturating_sub(n - f);
    let hi = f.min(n_tilde);
    let mut lw = Vec::with_capacity(hi - lo + 1);
    let mut acc = 0.0;
    lw.push(acc);
    for k in lo..hi {
        let num = ((f - k) * (n_tilde - k)) as f64;
        // k >= lo keeps N − F − Ñ + k + 1 positive.
        let den = ((k + 1) * (n - f + k + 1 - n_tilde)) as f64;
        acc += (num / den).ln();
        lw.push(acc);
    }
    (lo, lw)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Full pmf of `F̃`, indexed by `f` from 0 to `min(F, Ñ)`.
pub fn faulty_pmf(n: usize, f: usize, n_tilde: usize) -> Result<Vec<f64>> {
    check(n, f, n_tilde)?;
    let (lo, lw) = log_weights(n, f, n_tilde);
    let total = log_sum_exp(&lw);
    let mut pmf = vec![0.0; lo];
    pmf.extend(lw.iter().map(|w| (w - total).exp()));
    Ok(pmf)
}

/// Largest `F̃` that still leaves the round resilient: `⌈Ñ/3⌉ − 1`.
pub fn max_tolerated(n_tilde: usize) -> Option<usize> {
    n_tilde.div_ceil(3).checked_sub(1)
}

/// `Pr[F̃ < Ñ/3]`, summed exactly over the hypergeometric lower tail in log space.
pub fn resiliency_exact(n: usize, f: usize, n_tilde: usize) -> Result<f64> {
    check(n, f, n_tilde)?;
    let Some(kmax) = max_tolerated(n_tilde) else {
        return Ok(0.0);
    };
    let (lo, lw) = log_weights(n, f, n_tilde);
    let hi = lo + lw.len() - 1;
    if kmax < lo {
        return Ok(0.0);
    }
    if kmax >= hi {
        return Ok(1.0);
    }
    let tail = log_sum_exp(&lw[..=kmax - lo]);
    Ok((tail - log_sum_exp(&lw)).exp().min(1.0))
}

/// Mean and standard deviation of `F̃`.
pub fn faulty_moments(n: usize, f: usize, n_tilde: usize) -> (f64, f64) {
    let (n, f, m) = (n as f64, f as f64, n_tilde as f64);
    let mean = f * m / n;
    let var = if n > 1.0 { f * m * (n - f) * (n - m) / (n * n * (n - 1.0)) } else { 0.0 };
    (mean, var.max(0.0).sqrt())
}

/// Normal approximation `½(1 + g((Ñ/3 − μ − φ) / (σ√2)))` with continuity
/// correction `phi`. Falls back to the exact tail when `σ = 0`.
pub fn resiliency_normal(n: usize, f: usize, n_tilde: usize, phi: f64) -> Result<f64> {
    check(n, f, n_tilde)?;
    if !(phi > 0.0 && phi < 1.0) {
        return Err(invalid(format!("continuity correction must lie in (0, 1), got {phi}")));
    }
    let (mu, sigma) = faulty_moments(n, f, n_tilde);
    if sigma == 0.0 {
        return resiliency_exact(n, f, n_tilde);
    }
    let z = (n_tilde as f64 / 3.0 - mu - phi) / (sigma * std::f64::consts::SQRT_2);
    Ok(0.5 * (1.0 + erf_approx(z)))
}

/// Representatives needed for `α`-resiliency under the normal model, `N_α`.
///
/// Solves `(A x − φ)² = 2B x (N − x)` for `x`, with `A = 1/3 − F/N` and
/// `B = F(N−F) c² / ((N−1)N²)`, `c = g⁻¹(2α − 1)`. For `α ≥ ½` the larger root
/// applies; below ½ the quantile is negative and the smaller root does.
pub fn n_alpha(n: usize, f: usize, alpha: f64, phi: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("N_α needs at least two candidate validators"));
    }
    if f > n {
        return Err(invalid(format!("F = {f} exceeds N = {n}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid(format!("α must lie in (0, 1], got {alpha}")));
    }
    if !(phi > 0.0 && phi < 1.0) {
        return Err(invalid(format!("continuity correction must lie in (0, 1), got {phi}")));
    }
    let nf = n as f64;
    let a = 1.0 / 3.0 - f as f64 / nf;
    if a <= 0.0 {
        return Err(Error::Infeasible(format!(
            "F = {f} of N = {n} is at least N/3; no representative count is resilient"
        )));
    }
    if alpha == 1.0 {
        return Ok(nf);
    }
    let c = erf_approx_inv(2.0 * alpha - 1.0)?;
    let b = (f * (n - f)) as f64 / ((nf - 1.0) * nf * nf) * c * c;
    let disc = (2.0 * phi * a * b * nf - 2.0 * phi * phi * b + b * b * nf * nf).max(0.0);
    let root = if c >= 0.0 { disc.sqrt() } else { -disc.sqrt() };
    Ok((phi * a + b * nf + root) / (a * a + 2.0 * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumeration() {
        // C(3,2)/C(4,2): both picks avoid the single faulty node.
        assert!((resiliency_exact(4, 1, 2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn no_faulty_nodes() {
        for m in 1..=80 {
            assert_eq!(resiliency_exact(80, 0, m).unwrap(), 1.0);
            assert_eq!(resiliency_normal(80, 0, m, 0.5).unwrap(), 1.0);
        }
    }

    #[test]
    fn full_inclusion_fallback() {
        assert_eq!(resiliency_normal(80, 20, 80, 0.5).unwrap(), 1.0);
        assert_eq!(resiliency_normal(80, 27, 80, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn pmf_sums_to_one() {
        for (n, f, m) in [(80, 25, 30), (12, 4, 7), (1680, 168, 40), (10, 10, 3)] {
            let p = faulty_pmf(n, f, m).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_close_to_exact_at_n80() {
        let e = resiliency_exact(80, 15, 40).unwrap();
        let a = resiliency_normal(80, 15, 40, 0.5).unwrap();
        assert!((e - a).abs() < 0.05, "{e} vs {a}");
    }

    #[test]
    fn n_alpha_reductions() {
        assert!((n_alpha(80, 0, 0.99, 0.5).unwrap() - 1.5).abs() < 1e-12);
        let median = n_alpha(80, 10, 0.5, 0.5).unwrap();
        assert!((median - 0.5 / (1.0 / 3.0 - 0.125)).abs() < 1e-12);
        assert_eq!(n_alpha(80, 10, 1.0, 0.5).unwrap(), 80.0);
        assert!(matches!(n_alpha(80, 27, 0.9, 0.5), Err(Error::Infeasible(_))));
    }

    #[test]
    fn n_alpha_satisfies_target() {
        let na = n_alpha(80, 25, 0.99, 0.5).unwrap();
        let got = resiliency_exact(80, 25, na.ceil() as usize).unwrap();
        assert!(got >= 0.99 - 0.02, "Ñ = {na}: {got}");
    }

    #[test]
    fn n_alpha_monotone_in_alpha() {
        let mut prev = 0.0;
        for i in 1..100 {
            let na = n_alpha(80, 10, i as f64 / 100.0, 0.5).unwrap();
            assert!(na >= prev - 1e-12, "{i}: {na} < {prev}");
            prev = na;
        }
    }

    #[test]
    fn n_alpha_root_hits_normal_threshold() {
        // At x = N_α the normal model equals α (with the approximant).
        for alpha in [0.05, 0.3, 0.7, 0.95] {
            let x = n_alpha(80, 15, alpha, 0.5).unwrap();
            let (n, f) = (80.0, 15.0);
            let sigma = (f * x * (n - f) * (n - x) / (n * n * (n - 1.0))).sqrt();
            let z = (x / 3.0 - f * x / n - 0.5) / (sigma * std::f64::consts::SQRT_2);
            assert!((0.5 * (1.0 + erf_approx(z)) - alpha).abs() < 1e-9, "{alpha}");
        }
    }

    #[test]
    fn range_errors() {
        assert!(resiliency_exact(10, 11, 3).is_err());
        assert!(resiliency_exact(10, 1, 0).is_err());
        assert!(resiliency_exact(10, 1, 11).is_err());
        assert!(resiliency_normal(10, 1, 5, 1.0).is_err());
    }
}
