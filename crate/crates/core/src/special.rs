//! Scalar special functions on top of `libm`.

use core::f64::consts::PI;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `log n!`
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `(2n-1)!! = (2n)! / (2^n n!)`, the number of perfect matchings of `2n` points.
pub fn double_factorial_odd(n: u64) -> u128 {
    (1..=n).fold(1u128, |acc, k| acc * (2 * k as u128 - 1))
}

/// Surface area of the unit sphere in R^d (2 for d = 1, counting both directions).
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * libm::pow(PI, d as f64 / 2.0) / gamma(d as f64 / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(5), 120.0);
        assert_eq!(double_factorial_odd(4), 105);
        assert!((ln_factorial(10) - libm::log(3628800.0)).abs() < 1e-12);
    }
}
