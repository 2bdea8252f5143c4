//! Ambient dimension and the rational exponents derived from the critical
//! Sobolev exponent `2* = 2N/(N-2)`.

use std::fmt;

use crate::error::{Error, Result};

/// Reduced fraction `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = den.signum();
        Self {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub const fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn signum(self) -> i64 {
        self.num.signum()
    }

    /// `x^self`. Integer and half-integer exponents avoid `powf` so that the
    /// common cases N = 4, 6 are exact up to rounding of the base.
    pub fn pow(self, x: f64) -> f64 {
        match self.den {
            1 => x.powi(self.num as i32),
            2 => x.sqrt().powi(self.num as i32),
            _ => x.powf(self.value()),
        }
    }
}

impl std::ops::Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl std::ops::Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational::new(self.num * rhs.den - rhs.num * self.den, self.den * rhs.den)
    }
}

impl std::ops::Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl std::ops::Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(rhs.num != 0, "division by zero rational");
        Rational::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Ambient dimension `N >= 4` of the coupled critical system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(u32);

impl Dimension {
    pub const MIN: u32 = 4;

    pub fn new(n: u32) -> Result<Self> {
        if n < Self::MIN {
            return Err(Error::UnsupportedDimension(n, Self::MIN));
        }
        Ok(Self(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    pub fn nf(self) -> f64 {
        self.0 as f64
    }

    /// `2* = 2N/(N-2)`.
    pub fn two_star(self) -> Rational {
        let n = self.0 as i64;
        Rational::new(2 * n, n - 2)
    }

    /// `2* - 1 = (N+2)/(N-2)`.
    pub fn p_minus_1(self) -> Rational {
        self.two_star() - Rational::integer(1)
    }

    /// `2* - 2 = 4/(N-2)`.
    pub fn p_minus_2(self) -> Rational {
        self.two_star() - Rational::integer(2)
    }

    /// `2* - 3 = (6-N)/(N-2)`; positive for N = 4, 5, zero for N = 6.
    pub fn p_minus_3(self) -> Rational {
        self.two_star() - Rational::integer(3)
    }

    /// `1/(2*-2) = (N-2)/4`, the exponent mapping a root `m` to `k`.
    pub fn k_exponent(self) -> Rational {
        Rational::integer(1) / self.p_minus_2()
    }

    /// `(3-2*)/(2*-2) = (N-6)/4`, the exponent mapping a root `m` to `l`.
    pub fn l_exponent(self) -> Rational {
        (Rational::integer(3) - self.two_star()) / self.p_minus_2()
    }

    /// `2/(2*-2) = (N-2)/2`.
    pub fn level_exponent(self) -> Rational {
        Rational::integer(2) / self.p_minus_2()
    }

    /// `N/2`, the power of `S` in all limit energies.
    pub fn half_n(self) -> Rational {
        Rational::new(self.0 as i64, 2)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}", self.0)
    }
}
