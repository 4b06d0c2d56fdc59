use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact non-negative `num / 2^exp`, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { num: BigUint::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self { num: BigUint::one(), exp: 0 }
    }

    pub fn new(num: BigUint, exp: u32) -> Self {
        let mut d = Self { num, exp };
        d.normalize();
        d
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Self { num: BigUint::one(), exp: k }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(u64::from(self.exp)) as u32;
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a + b, exp)
    }

    /// `floor(self * 2^count)` as a `count`-digit binary string (the first
    /// `count` bits after the binary point when `self < 1`).
    pub fn fraction_bits(&self, count: u32) -> String {
        let scaled = if count >= self.exp {
            &self.num << (count - self.exp)
        } else {
            &self.num >> (self.exp - count)
        };
        let modulus = BigUint::one() << count;
        let low = scaled % modulus;
        (0..u64::from(count)).rev().map(|i| if low.bit(i) { '1' } else { '0' }).collect()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        (&self.num << (exp - self.exp)).cmp(&(&other.num << (exp - other.exp)))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `num/2^exp`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
