//! Arbitrary-precision counts and reduced fractions.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A nonnegative exact count.
pub type BigCount = BigUint;

pub fn factorial(n: usize) -> BigCount {
    (2..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k as u64).fold(BigUint::one(), |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Natural log of a big integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// A reduced nonnegative fraction `num/den` with `den ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(Ratio<BigUint>);

impl ExactRatio {
    /// # Panics
    /// If `den` is zero.
    pub fn new(num: BigUint, den: BigUint) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self(Ratio::new(num, den))
    }

    pub fn from_integer(n: BigUint) -> Self {
        Self(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_integer(BigUint::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(BigUint::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn recip(&self) -> Self {
        Self(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        let (num, den) = (self.numer(), self.denom());
        if num.is_zero() {
            return 0.0;
        }
        // keep ~64 significant bits in the quotient
        let shift = 64 + den.bits() as i64 - num.bits() as i64;
        let q = if shift >= 0 {
            (num << shift as u64) / den
        } else {
            num / (den << (-shift) as u64)
        };
        q.to_f64().unwrap() * 2f64.powi(-shift as i32)
    }

    /// Decimal rendering with `sig` significant digits, rounding half to
    /// even. Values in `[1e-6, 1e12)` are written positionally, others in
    /// scientific notation.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        let (num, den) = (self.numer(), self.denom());
        if num.is_zero() {
            return "0".into();
        }
        let ten = BigUint::from(10u32);
        // exponent e with 10^e ≤ x < 10^(e+1), starting from a float guess
        let mut e = self.to_f64().log10().floor() as i64;
        let scaled_cmp = |e: i64| {
            // sign of x - 10^e
            if e >= 0 {
                num.cmp(&(den * ten.pow(e as u32)))
            } else {
                (num * ten.pow((-e) as u32)).cmp(den)
            }
        };
        while scaled_cmp(e) == std::cmp::Ordering::Less {
            e -= 1;
        }
        while scaled_cmp(e + 1) != std::cmp::Ordering::Less {
            e += 1;
        }
        let s = sig as i64 - 1 - e;
        let (n2, d2) = if s >= 0 {
            (num * ten.pow(s as u32), den.clone())
        } else {
            (num.clone(), den * ten.pow((-s) as u32))
        };
        let (mut q, r) = n2.div_rem(&d2);
        let twice = &r << 1u32;
        if twice > d2 || (twice == d2 && q.is_odd()) {
            q += 1u32;
        }
        let mut digits = q.to_string();
        if digits.len() > sig {
            // rounded up to the next power of ten
            digits.truncate(sig);
            e += 1;
        }
        if (0..12).contains(&e) {
            let split = e as usize + 1;
            if split >= digits.len() {
                let pad = split - digits.len();
                digits + &"0".repeat(pad)
            } else {
                format!("{}.{}", &digits[..split], &digits[split..])
            }
        } else if (-6..0).contains(&e) {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
        } else if digits.len() > 1 {
            format!("{}.{}e{}", &digits[..1], &digits[1..], e)
        } else {
            format!("{digits}e{e}")
        }
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactRatio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let num: BigUint = n.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let den: BigUint = d.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(Self::new(num, den))
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::ops::Add for &ExactRatio {
    type Output = ExactRatio;
    fn add(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 + &rhs.0)
    }
}

impl std::ops::Mul for &ExactRatio {
    type Output = ExactRatio;
    fn mul(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 * &rhs.0)
    }
}

impl std::ops::Mul<&BigUint> for &ExactRatio {
    type Output = ExactRatio;
    fn mul(self, rhs: &BigUint) -> ExactRatio {
        ExactRatio(&self.0 * Ratio::from_integer(rhs.clone()))
    }
}

impl std::iter::Sum for ExactRatio {
    fn sum<I: Iterator<Item = ExactRatio>>(iter: I) -> Self {
        ExactRatio(iter.map(|r| r.0).sum())
    }
}
