//! Log-gamma based beta function and the Yule-Simon closed forms built on it.

use statrs::function::gamma;

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    gamma::gamma(x)
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Tail mass `T_k = k B(k, rho + 1)` of the Yule-Simon law; `T_0 = 1`.
pub fn yule_simon_tail(rho: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    (k.ln() + ln_beta(k, rho + 1.0)).exp()
}

/// `t_i = rho B(i, rho + 1)` for `i >= 1`.
pub fn yule_simon_pmf(rho: f64, i: u64) -> f64 {
    debug_assert!(i >= 1);
    (rho.ln() + ln_beta(i as f64, rho + 1.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_small_arguments() {
        // B(1, b) = 1 / b, B(2, 2) = 1 / 6
        assert!((ln_beta(1.0, 1.2).exp() - 1.0 / 1.2).abs() < 1e-14);
        assert!((ln_beta(2.0, 2.0).exp() - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn beta_large_argument_is_finite() {
        let b = ln_beta(1.0e4, 1.2);
        assert!(b.is_finite());
        // Gamma ratio asymptotics: B(k, b) ~ Gamma(b) k^-b
        let approx = gamma(1.2).ln() - 1.2 * 1.0e4_f64.ln();
        assert!((b - approx).abs() < 1e-4);
    }

    #[test]
    fn yule_simon_first_entry() {
        // t_1 = rho / (rho + 1)
        for rho in [0.2, 1.0, 2.0] {
            assert!((yule_simon_pmf(rho, 1) - rho / (rho + 1.0)).abs() < 1e-14);
        }
    }
}
