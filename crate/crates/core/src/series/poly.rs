use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in t with exact rational coefficients, lowest degree first and
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// From integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::from_ints(&[1])
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division: `(q, r)` with `self = q * d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.leading() / &lead;
            let mut shifted = vec![BigRational::zero(); rd - dd];
            shifted.extend(d.coeffs.iter().map(|x| x * &c));
            r = r.sub(&Poly::new(shifted));
            q[rd - dd] = c;
        }
        (Poly::new(q), r)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.scale(&(BigRational::one() / lead))
    }

    /// Least common multiple of coefficient denominators.
    pub(crate) fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Greatest common divisor of numerators of integer coefficients.
    pub(crate) fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, e.g. `-t^3 + 2t - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let coeff = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({a})")
            };
            match (k, a.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coeff}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coeff}t^{k}")?,
            }
        }
        Ok(())
    }
}
