//! Class number window from a truncated Euler product.

use num_traits::Signed;

use crate::ntkernel::{bigint_to_f64, kronecker, primes_up_to, Discriminant};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerWindow {
    /// Estimate of h (Δ < 0) or h·R (Δ > 0).
    pub estimate: f64,
    pub hstar: f64,
}

impl EulerWindow {
    /// Whether x lies in (h*, 2h*].
    pub fn contains(&self, x: f64) -> bool {
        x > self.hstar && x <= 2.0 * self.hstar
    }
}

/// Truncated L(1, χ) with χ = (Δ/·).
pub fn l_one_chi(d: &Discriminant, cutoff: u64) -> f64 {
    let mut prod = 1.0f64;
    for p in primes_up_to(cutoff) {
        let chi = kronecker(d.value(), p) as f64;
        prod /= 1.0 - chi / p as f64;
    }
    prod
}

/// Window (h*, 2h*] with h* = estimate/√2 from the analytic class number formula.
pub fn euler_window(d: &Discriminant, cutoff: u64) -> EulerWindow {
    let l = l_one_chi(d, cutoff);
    let abs = bigint_to_f64(&d.value().abs());
    let estimate = if d.is_imaginary() {
        // number of roots of unity: 6 for Δ = -3, 4 for Δ = -4, else 2
        let w = match bigint_to_f64(d.value()) as i64 {
            -3 => 6.0,
            -4 => 4.0,
            _ => 2.0,
        };
        w * abs.sqrt() / (2.0 * std::f64::consts::PI) * l
    } else {
        abs.sqrt() / 2.0 * l
    };
    EulerWindow { estimate, hstar: estimate / std::f64::consts::SQRT_2 }
}
