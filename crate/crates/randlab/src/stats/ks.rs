//! Two-sided Kolmogorov–Smirnov test against the uniform distribution.
//!
//! Small samples (n ≤ 100) use the exact distribution of D_n computed with
//! the Marsaglia–Tsang–Wang matrix method; larger samples use the asymptotic
//! Kolmogorov series with the usual finite-n argument correction.

use crate::error::{Error, Result};

const EXACT_LIMIT: usize = 100;

/// p-value of the two-sided KS statistic of `samples` against Uniform[0,1].
pub fn ks_pvalue(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Parameter(
            "KS test needs at least one sample".to_string(),
        ));
    }
    for &s in samples {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!(
                "KS sample {s} outside [0, 1]"
            )));
        }
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
    let d = ks_statistic(&sorted);
    let n = sorted.len();
    let p = if n <= EXACT_LIMIT {
        1.0 - kolmogorov_cdf_exact(n, d)
    } else {
        let nf = n as f64;
        let t = (nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d;
        kolmogorov_tail(t)
    };
    Ok(p.clamp(0.0, 1.0))
}

/// D_n = sup |ECDF(x) - x| over sorted samples.
fn ks_statistic(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let lo = x - i as f64 / n;
        let hi = (i + 1) as f64 / n - x;
        d = d.max(lo).max(hi);
    }
    d
}

/// Exact P(D_n < d) by the Marsaglia–Tsang–Wang matrix method.
fn kolmogorov_cdf_exact(n: usize, d: f64) -> f64 {
    let nf = n as f64;
    let nd = nf * d;
    if nd <= 0.5 {
        return 0.0; // D_n >= 1/(2n) always
    }
    if d >= 1.0 {
        return 1.0;
    }
    let k = nd.ceil() as usize;
    let m = 2 * k - 1;
    let h = k as f64 - nd;

    let mut hm = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            if i + 1 >= j {
                hm[i * m + j] = 1.0;
            }
        }
    }
    for i in 0..m {
        hm[i * m] -= h.powi(i as i32 + 1);
        hm[(m - 1) * m + i] -= h.powi((m - i) as i32);
    }
    if 2.0 * h - 1.0 > 0.0 {
        hm[(m - 1) * m] += (2.0 * h - 1.0).powi(m as i32);
    }
    for i in 0..m {
        for j in 0..m {
            if i + 1 > j {
                for g in 1..=(i + 1 - j) {
                    hm[i * m + j] /= g as f64;
                }
            }
        }
    }

    let (q, mut exp10) = mat_pow(&hm, m, n);
    let mut s = q[(k - 1) * m + (k - 1)];
    for i in 1..=n {
        s = s * i as f64 / nf;
        if s < 1e-140 {
            s *= 1e140;
            exp10 -= 140;
        }
    }
    (s * 10f64.powi(exp10)).clamp(0.0, 1.0)
}

fn mat_mul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut c = vec![0.0f64; m * m];
    for i in 0..m {
        for l in 0..m {
            let v = a[i * m + l];
            if v == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i * m + j] += v * b[l * m + j];
            }
        }
    }
    c
}

/// H^n with decimal-exponent scaling to keep entries representable.
fn mat_pow(h: &[f64], m: usize, n: usize) -> (Vec<f64>, i32) {
    if n == 1 {
        return (h.to_vec(), 0);
    }
    let (half, e_half) = mat_pow(h, m, n / 2);
    let mut q = mat_mul(&half, &half, m);
    let mut e = 2 * e_half;
    if n % 2 == 1 {
        q = mat_mul(h, &q, m);
    }
    let center = q[(m / 2) * m + m / 2];
    if center > 1e140 {
        for v in q.iter_mut() {
            *v *= 1e-140;
        }
        e += 140;
    }
    (q, e)
}

/// Asymptotic survival function Q_KS(t) = 2 Σ (-1)^(j-1) e^(-2 j² t²),
/// switched to the dual theta series for small t where the direct sum
/// cancels badly.
fn kolmogorov_tail(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 1.18 {
        // P(D < t) = sqrt(2π)/t Σ e^(-(2j-1)² π² / (8t²))
        let factor = (2.0 * std::f64::consts::PI).sqrt() / t;
        let w = std::f64::consts::PI * std::f64::consts::PI / (8.0 * t * t);
        let mut cdf = 0.0;
        for j in 1..=20u32 {
            let q = (2 * j - 1) as f64;
            let term = (-q * q * w).exp();
            cdf += term;
            if term < 1e-18 {
                break;
            }
        }
        1.0 - factor * cdf
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1..=100u32 {
            let jf = f64::from(j);
            let term = (-2.0 * jf * jf * t * t).exp();
            sum += sign * term;
            sign = -sign;
            if term < 1e-18 {
                break;
            }
        }
        2.0 * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Mt19937State;

    #[test]
    fn single_zero_sample_is_extreme() {
        // D = 1 for the sample {0.0}; exact distribution gives p = 0
        let p = ks_pvalue(&[0.0]).unwrap();
        assert!(p < 1e-3, "p = {p}");
    }

    #[test]
    fn exact_matches_closed_form_for_n1() {
        // P(D_1 < d) = 2d - 1 on [1/2, 1]
        for d in [0.55, 0.6, 0.75, 0.9, 0.99] {
            let got = kolmogorov_cdf_exact(1, d);
            assert!((got - (2.0 * d - 1.0)).abs() < 1e-12, "d={d} got={got}");
        }
    }

    #[test]
    fn perfectly_spaced_grid_has_high_p() {
        // {(2i-1)/2n} for n=100: D = 1/(2n)
        let n = 100;
        let grid: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * n) as f64).collect();
        let p = ks_pvalue(&grid).unwrap();
        assert!(p > 0.99, "p = {p}");
    }

    #[test]
    fn uniform_grid_never_below_half() {
        for n in [1usize, 2, 5, 9, 20, 100, 250] {
            let grid: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * n) as f64).collect();
            let p = ks_pvalue(&grid).unwrap();
            assert!(p >= 0.5, "n={n} p={p}");
        }
    }

    #[test]
    fn mt_draws_give_moderate_p() {
        // 25 uniform draws, 100 repetitions: p stays off the edges
        let mut mt = Mt19937State::new(1234);
        for rep in 0..100 {
            let draws: Vec<f64> = (0..25)
                .map(|_| f64::from(mt.next_word()) / 2f64.powi(32))
                .collect();
            let p = ks_pvalue(&draws).unwrap();
            assert!(
                (0.000_1..=0.999_9).contains(&p),
                "rep {rep}: p = {p}"
            );
        }
    }

    #[test]
    fn rejects_out_of_domain_and_empty() {
        assert!(ks_pvalue(&[]).is_err());
        assert!(ks_pvalue(&[0.5, 1.5]).is_err());
        assert!(ks_pvalue(&[-0.1]).is_err());
    }

    #[test]
    fn exact_matches_monte_carlo() {
        // Monte Carlo oracle for the exact small-n distribution
        let mut mt = Mt19937State::new(777);
        for &n in &[5usize, 10] {
            let trials = 100_000;
            let d_threshold = 0.3;
            let mut below = 0usize;
            for _ in 0..trials {
                let mut s: Vec<f64> = (0..n)
                    .map(|_| f64::from(mt.next_word()) / 2f64.powi(32))
                    .collect();
                s.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if ks_statistic(&s) < d_threshold {
                    below += 1;
                }
            }
            let mc = below as f64 / trials as f64;
            let exact = kolmogorov_cdf_exact(n, d_threshold);
            assert!(
                (mc - exact).abs() < 0.01,
                "n={n}: mc={mc} exact={exact}"
            );
        }
    }

    #[test]
    fn asymptotic_agrees_with_exact_at_boundary() {
        // around n = 100 the two evaluation routes should roughly agree
        for d in [0.05, 0.08, 0.11, 0.16] {
            let exact = 1.0 - kolmogorov_cdf_exact(100, d);
            let t = (100f64.sqrt() + 0.12 + 0.11 / 100f64.sqrt()) * d;
            let asym = kolmogorov_tail(t);
            assert!(
                (exact - asym).abs() < 1e-2,
                "d={d} exact={exact} asym={asym}"
            );
        }
    }

    #[test]
    fn tail_series_branches_are_continuous() {
        let below = kolmogorov_tail(1.18 - 1e-9);
        let above = kolmogorov_tail(1.18 + 1e-9);
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn pvalues_always_in_unit_interval() {
        let mut mt = Mt19937State::new(31);
        for n in [1usize, 2, 3, 10, 50, 150] {
            for _ in 0..20 {
                let draws: Vec<f64> = (0..n)
                    .map(|_| f64::from(mt.next_word()) / 2f64.powi(32))
                    .collect();
                let p = ks_pvalue(&draws).unwrap();
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }
}
