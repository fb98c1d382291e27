use serde::{Deserialize, Serialize};

use super::census::SubgroupCensus;
use crate::error::{Error, Result};
use crate::groups::{dihedral_mod_ell_homology, require_prime};

fn require_odd_prime(ell: u32, what: &str) -> Result<()> {
    require_prime(ell)?;
    if ell == 2 {
        return Err(Error::InvalidArgument(format!("{what} needs an odd prime")));
    }
    Ok(())
}

/// dim H_q(W; F_ℓ) of a Coxeter group whose ℓ-torsion subcomplex has `m`
/// components, each contributing a copy of H_q(D_ℓ; F_ℓ).
pub fn coxeter_homology(m: u64, ell: u32, q: usize) -> Result<u64> {
    require_odd_prime(ell, "coxeter_homology")?;
    Ok(m * dihedral_mod_ell_homology(ell, ell, q)?)
}

/// dim H_deg of the triangle group (p, q, r) with F_ℓ coefficients: the sum
/// over the three vertex groups D_p, D_q, D_r.
pub fn triangle_group_homology(p: u32, q: u32, r: u32, ell: u32, deg: usize) -> Result<u64> {
    require_odd_prime(ell, "triangle_group_homology")?;
    if p < 2 || q < 2 || r < 2 {
        return Err(Error::InvalidArgument(format!(
            "triangle ({p},{q},{r}) needs all entries at least 2"
        )));
    }
    let (p64, q64, r64) = (p as u64, q as u64, r as u64);
    if q64 * r64 + p64 * r64 + p64 * q64 > p64 * q64 * r64 {
        return Err(Error::InvalidArgument(format!(
            "triangle ({p},{q},{r}) is spherical"
        )));
    }
    if deg == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    [p, q, r]
        .iter()
        .map(|&n| dihedral_mod_ell_homology(n, ell, deg))
        .sum()
}

/// dim H_q(SL2(O_-m); F_2) in terms of the Betti numbers of the quotient
/// space, for the fields where the mod-2 cohomology takes this shape (for
/// example m ≡ 3 mod 8 with the appropriate class-group hypotheses). Those
/// hypotheses are not checked here.
pub fn sl2_mod2_dims(beta1: u64, beta2: u64, q: usize) -> Result<u64> {
    let b = beta1 + beta2;
    match q {
        0 => Err(Error::InvalidArgument("degree 0 is not covered".into())),
        1 => Ok(beta1),
        _ => Ok(match (q - 2) % 4 {
            0 => b + 1,
            1 => b + 3,
            2 => b + 2,
            _ => b,
        }),
    }
}

/// The parts of the E2 page coming from the non-central 2-torsion
/// subcomplex X_s and its higher-rank part X_s'.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XsRows {
    #[serde(rename = "E01", default)]
    pub e01: u64,
    #[serde(rename = "E11", default)]
    pub e11: u64,
    #[serde(rename = "E03", default)]
    pub e03: u64,
    #[serde(rename = "E13", default)]
    pub e13: u64,
    #[serde(rename = "H2Xsprime", default)]
    pub h2_xs_prime: u64,
}

/// Dimensions of the mod-2 E2 page in columns n = 0, 1, 2.
///
/// `rows[r]` is the row for degrees q ≡ r mod 4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Page {
    pub rows: [[u64; 3]; 4],
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
}

impl E2Page {
    pub fn get(&self, n: usize, q: usize) -> u64 {
        self.rows[q % 4][n]
    }
}

fn non_negative(name: &str, x: i64) -> Result<u64> {
    u64::try_from(x).map_err(|_| {
        Error::InvalidArgument(format!("{name} = {x} is negative; inputs are inconsistent"))
    })
}

pub fn e2_page(census: &SubgroupCensus, chi_xs: i64, xs: &XsRows) -> Result<E2Page> {
    let (b1, b2) = (census.beta1, census.beta2);
    let sign_v = u64::from(census.v > 0);
    let a1 = non_negative("a1", chi_xs - 1 + b1 as i64 + census.c as i64)?;
    let a2 = b2 + census.c;
    let a3 = b1 + census.v - sign_v;
    let rows = [
        [1, b1, b2],
        [xs.e01, xs.e11 + a1, a2],
        [xs.h2_xs_prime + 1 - sign_v, a3, b2],
        [xs.e03, xs.e13 + a1, a2],
    ];
    Ok(E2Page { rows, a1, a2, a3 })
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn farrell_tate(r: u64, q: i64, ell: u32, keep: impl Fn(i64, i64) -> bool) -> Result<u64> {
    require_odd_prime(ell, "farrell_tate_sl2_dims")?;
    Ok((0..=r)
        .filter(|&k| (q - k as i64).rem_euclid(2) == 0 && keep(q, k as i64))
        .map(|k| binomial(r, k))
        .sum())
}

/// Degree-q dimension of `F_ℓ[a2, a2^-1] ⊗ Λ(ker Nm1)` with `r = dim ker Nm1`
/// and `a2` in degree 2, or of its invariants under the Z/2 acting by −1 on
/// `a2` and on `ker Nm1` when `invariant_class` is set.
///
/// The term `a2^j ⊗ (k-form)` sits in degree `2j + k` and is invariant
/// exactly when `j + k` is even.
pub fn farrell_tate_sl2_dims(r: u64, invariant_class: bool, q: i64, ell: u32) -> Result<u64> {
    farrell_tate(r, q, ell, |q, k| {
        !invariant_class || ((q - k) / 2 + k).rem_euclid(2) == 0
    })
}

/// The complement of the invariant part: terms on which the Z/2 acts by −1.
pub fn farrell_tate_sl2_twisted_dims(r: u64, q: i64, ell: u32) -> Result<u64> {
    farrell_tate(r, q, ell, |q, k| ((q - k) / 2 + k).rem_euclid(2) == 1)
}
