//! Thin wrappers over `libm` so the numeric code reads like std float methods.
//!
//! When anything in the build graph links `std`, its inherent float methods shadow these.
#![allow(dead_code)]

pub(crate) trait FloatExt {
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn floor(self) -> Self;
    fn ceil(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn exp2i(n: i32) -> Self;
}

impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    #[inline]
    fn ceil(self) -> f64 {
        libm::ceil(self)
    }
    #[inline]
    fn powi(self, n: i32) -> f64 {
        let mut base = if n < 0 { 1.0 / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = 1.0;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    /// Exact `2^n` for the exponents used as resolution levels.
    #[inline]
    fn exp2i(n: i32) -> f64 {
        libm::ldexp(1.0, n)
    }
}

pub(crate) fn erf(x: f64) -> f64 {
    libm::erf(x)
}
