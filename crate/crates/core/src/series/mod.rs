//! Poincaré series of torsion homology above the virtual cohomological
//! dimension, and the closed-form dimension formulas built from them.

mod census;
mod formulas;
mod oracle;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use census::{ComponentCounts, SubgroupCensus};
pub use formulas::{
    coxeter_homology, e2_page, farrell_tate_sl2_dims, farrell_tate_sl2_twisted_dims,
    sl2_mod2_dims, triangle_group_homology, E2Page, XsRows,
};
pub use oracle::{equivariant_graph_cohomology_oracle, restriction_matrix, stabilizer_cohomology_dim};
pub use poly::Poly;

use crate::error::{Error, Result};

/// Degree up to which combined series are checked for integrality.
pub const INTEGRALITY_DEGREE: usize = 20;

/// A rational function `numerator / denominator` in lowest terms.
///
/// Normal form: integer coefficients, no common content between numerator
/// and denominator, positive leading coefficient in the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSeries {
    numerator: Poly,
    denominator: Poly,
}

impl RationalSeries {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<RationalSeries> {
        if denominator.coeff(0).is_zero() {
            return Err(Error::InvalidArgument(
                "denominator vanishes at t = 0".into(),
            ));
        }
        Ok(Self::normalized(numerator, denominator))
    }

    fn normalized(numerator: Poly, denominator: Poly) -> RationalSeries {
        if numerator.is_zero() {
            return RationalSeries {
                numerator,
                denominator: Poly::one(),
            };
        }
        let g = numerator.gcd(&denominator);
        let mut num = numerator.div_rem(&g).0;
        let mut den = denominator.div_rem(&g).0;
        let lcm = num.denominator_lcm().lcm(&den.denominator_lcm());
        let lcm = BigRational::from_integer(lcm);
        num = num.scale(&lcm);
        den = den.scale(&lcm);
        let content = num.content().gcd(&den.content());
        let mut factor = BigRational::new(BigInt::from(1), content);
        if den.leading().is_negative() {
            factor = -factor;
        }
        RationalSeries {
            numerator: num.scale(&factor),
            denominator: den.scale(&factor),
        }
    }

    pub fn zero() -> RationalSeries {
        RationalSeries {
            numerator: Poly::zero(),
            denominator: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        let num = self
            .numerator
            .mul(&other.denominator)
            .add(&other.numerator.mul(&self.denominator));
        Self::normalized(num, self.denominator.mul(&other.denominator))
    }

    pub fn scale(&self, c: &BigRational) -> RationalSeries {
        Self::normalized(self.numerator.scale(c), self.denominator.clone())
    }

    /// Power-series coefficients of t^0 ..= t^n by long division.
    pub fn expand(&self, n: usize) -> Vec<BigRational> {
        let d0 = self.denominator.coeff(0);
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = self.numerator.coeff(k);
            for j in 1..=k {
                let dj = self.denominator.coeff(j);
                if !dj.is_zero() {
                    c -= dj * &out[k - j];
                }
            }
            out.push(c / &d0);
        }
        out
    }

    /// Like [`RationalSeries::expand`], requiring every coefficient to be a
    /// non-negative integer.
    pub fn expand_dims(&self, n: usize) -> Result<Vec<u64>> {
        self.expand(n)
            .into_iter()
            .enumerate()
            .map(|(q, c)| {
                if !c.is_integer() || c.is_negative() {
                    return Err(Error::Census(format!(
                        "coefficient {c} at t^{q} is not a non-negative integer"
                    )));
                }
                u64::try_from(c.to_integer())
                    .map_err(|_| Error::Census(format!("coefficient at t^{q} overflows")))
            })
            .collect()
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.numerator, self.denominator)
    }
}

/// The basis series the torsion Poincaré series are combined from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalSeries {
    /// `-2t^3/(t-1)`: a circle of Z/ℓ stabilizers.
    Circle,
    /// `-t^3(t^2-t+2)/((t-1)(t^2+1))`: a D3 edge at ℓ = 3.
    Edge3,
    /// `-t^3(3t-5)/(2(t-1)^2)`: dim H_q(D2) − 3/2 dim H_q(Z/2).
    D2Star,
    /// `-t^3(t^3-2t^2+2t-3)/(2(t-1)^2(t^2+t+1))`: dim H_q(A4) − 1/2 dim H_q(Z/2).
    A4Star,
}

pub fn canonical_series(kind: CanonicalSeries) -> RationalSeries {
    let minus_t3 = Poly::from_ints(&[0, 0, 0, -1]);
    let t_minus_1 = Poly::from_ints(&[-1, 1]);
    let (num, den) = match kind {
        CanonicalSeries::Circle => (Poly::from_ints(&[0, 0, 0, -2]), t_minus_1),
        CanonicalSeries::Edge3 => (
            minus_t3.mul(&Poly::from_ints(&[2, -1, 1])),
            t_minus_1.mul(&Poly::from_ints(&[1, 0, 1])),
        ),
        CanonicalSeries::D2Star => (
            minus_t3.mul(&Poly::from_ints(&[-5, 3])),
            Poly::from_ints(&[2]).mul(&t_minus_1).mul(&t_minus_1),
        ),
        CanonicalSeries::A4Star => (
            minus_t3.mul(&Poly::from_ints(&[-3, 2, -2, 1])),
            Poly::from_ints(&[2])
                .mul(&t_minus_1)
                .mul(&t_minus_1)
                .mul(&Poly::from_ints(&[1, 1, 1])),
        ),
    };
    RationalSeries::new(num, den).expect("basis denominators do not vanish at 0")
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

fn checked(series: RationalSeries) -> Result<RationalSeries> {
    let dims = series.expand_dims(INTEGRALITY_DEGREE)?;
    if let Some(q) = dims[..3].iter().position(|&d| d != 0) {
        return Err(Error::Census(format!("non-zero coefficient at t^{q} below degree 3")));
    }
    Ok(series)
}

/// Mod-2 Poincaré series of a Bianchi group from its subgroup census:
/// `(λ4 − (3μ2 − 2μT)/2) P_circle + (μ2 − μT) P*_D2 + μT P*_A4`.
pub fn poincare_2torsion(census: &SubgroupCensus) -> Result<RationalSeries> {
    census.validate()?;
    let c = census;
    let circle = half(2 * c.lambda4 as i64 - 3 * c.mu2 as i64 + 2 * c.mu_t as i64);
    let d2 = half(2 * (c.mu2 as i64 - c.mu_t as i64));
    let a4 = half(2 * c.mu_t as i64);
    let series = canonical_series(CanonicalSeries::Circle)
        .scale(&circle)
        .add(&canonical_series(CanonicalSeries::D2Star).scale(&d2))
        .add(&canonical_series(CanonicalSeries::A4Star).scale(&a4));
    checked(series)
}

/// Mod-3 Poincaré series: `(λ6 − μ3/2) P_circle + (μ3/2) P_edge`.
pub fn poincare_3torsion(census: &SubgroupCensus) -> Result<RationalSeries> {
    census.validate()?;
    let c = census;
    let circle = half(2 * c.lambda6 as i64 - c.mu3 as i64);
    let edge = half(c.mu3 as i64);
    let series = canonical_series(CanonicalSeries::Circle)
        .scale(&circle)
        .add(&canonical_series(CanonicalSeries::Edge3).scale(&edge));
    checked(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn geometric_series() {
        let s = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -1])).unwrap();
        assert_eq!(s.expand(3), ints(&[1, 1, 1, 1]));
        assert!(RationalSeries::new(Poly::one(), Poly::from_ints(&[0, 1])).is_err());
    }

    #[test]
    fn canonical_expansions() {
        let circle = canonical_series(CanonicalSeries::Circle);
        assert_eq!(circle.expand(5), ints(&[0, 0, 0, 2, 2, 2]));
        assert_eq!(circle.to_string(), "(-2t^3)/(t - 1)");
        let edge = canonical_series(CanonicalSeries::Edge3);
        assert_eq!(edge.expand(10)[3..], ints(&[2, 1, 0, 1, 2, 1, 0, 1])[..]);
        let d2 = canonical_series(CanonicalSeries::D2Star).expand(20);
        for (q, c) in d2.iter().enumerate().skip(3) {
            assert_eq!(*c, half(2 * q as i64 - 1));
        }
    }

    #[test]
    fn normal_form() {
        let s = RationalSeries::new(Poly::from_ints(&[2, 2]), Poly::from_ints(&[-2, 0, 2])).unwrap();
        // (2 + 2t)/(2t^2 - 2) = 1/(t - 1)
        assert_eq!(s.to_string(), "(1)/(t - 1)");
        assert_eq!(
            canonical_series(CanonicalSeries::D2Star).to_string(),
            "(-3t^4 + 5t^3)/(2t^2 - 4t + 2)"
        );
    }

    #[test]
    fn poincare_examples() {
        let circle = SubgroupCensus { lambda4: 1, ..Default::default() };
        assert_eq!(poincare_2torsion(&circle).unwrap(), canonical_series(CanonicalSeries::Circle));
        assert!(poincare_2torsion(&SubgroupCensus::default()).unwrap().is_zero());
        let edge = SubgroupCensus { lambda6: 1, lambda6star: 1, mu3: 2, ..Default::default() };
        assert_eq!(poincare_3torsion(&edge).unwrap(), canonical_series(CanonicalSeries::Edge3));
        let circle3 = SubgroupCensus { lambda6: 1, ..Default::default() };
        assert_eq!(poincare_3torsion(&circle3).unwrap(), canonical_series(CanonicalSeries::Circle));
        let odd = SubgroupCensus { lambda6: 1, mu3: 1, ..Default::default() };
        assert!(poincare_3torsion(&odd).is_err());
    }

    #[test]
    fn graphfive_census_is_integral() {
        let c = SubgroupCensus::from_components(&ComponentCounts { theta: 1, ..Default::default() });
        let dims = poincare_2torsion(&c).unwrap().expand_dims(20).unwrap();
        for (q, d) in dims.iter().enumerate().skip(3) {
            assert_eq!(*d, 2 * q as u64 - 1);
        }
    }

    #[test]
    fn half_integral_census_is_rejected() {
        let c = SubgroupCensus { lambda4: 3, lambda4star: 1, mu2: 1, ..Default::default() };
        assert!(matches!(poincare_2torsion(&c), Err(Error::Census(_))));
    }
}
