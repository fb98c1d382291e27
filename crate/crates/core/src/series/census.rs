use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Conjugacy-class counts of finite subgroups of a Bianchi group, plus the
/// quotient-space data entering the mod-2 E2 page and the Bredon formulas.
///
/// JSON keys are the Greek names (`λ4`, `μT`, ...); ASCII aliases such as
/// `lambda4` and `mu_t` are accepted on input. Missing fields default to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupCensus {
    #[serde(rename = "λ4", alias = "lambda4", default)]
    pub lambda4: u64,
    #[serde(rename = "λ4star", alias = "lambda4star", default)]
    pub lambda4star: u64,
    #[serde(rename = "λ6", alias = "lambda6", default)]
    pub lambda6: u64,
    #[serde(rename = "λ6star", alias = "lambda6star", default)]
    pub lambda6star: u64,
    #[serde(rename = "μ2", alias = "mu2", default)]
    pub mu2: u64,
    #[serde(rename = "μ3", alias = "mu3", default)]
    pub mu3: u64,
    #[serde(rename = "μT", alias = "mu_t", alias = "muT", default)]
    pub mu_t: u64,
    #[serde(default)]
    pub z2: u64,
    #[serde(default)]
    pub d2: u64,
    /// Conjugacy classes of subgroups of higher 2-rank.
    #[serde(default)]
    pub v: u64,
    /// Correction term in a1 and a2 of the E2 page. It is not derived from
    /// anything else and must be supplied by the caller.
    #[serde(default)]
    pub c: u64,
    #[serde(rename = "β1", alias = "beta1", default)]
    pub beta1: u64,
    #[serde(rename = "β2", alias = "beta2", default)]
    pub beta2: u64,
}

/// Counts of reduced torsion-subcomplex components by type.
///
/// * `o2`, `o3`: circles of Z/2 resp. Z/3 stabilizers
/// * `iota2`: a Z/2 edge between two A4 vertices
/// * `theta`: the theta graph on two D2 vertices
/// * `rho`: the graph with a D2 vertex, a loop and an edge to an A4 vertex
/// * `iota3`: a Z/3 edge between two D3 vertices
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentCounts {
    #[serde(default)]
    pub o2: u64,
    #[serde(default)]
    pub iota2: u64,
    #[serde(default)]
    pub theta: u64,
    #[serde(default)]
    pub rho: u64,
    #[serde(default)]
    pub o3: u64,
    #[serde(default)]
    pub iota3: u64,
}

impl SubgroupCensus {
    pub fn from_json(text: &str) -> Result<SubgroupCensus> {
        let c: SubgroupCensus =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("census: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serializes") + "\n"
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda4star > self.lambda4 {
            return Err(Error::Census("λ4star exceeds λ4".into()));
        }
        if self.lambda6star > self.lambda6 {
            return Err(Error::Census("λ6star exceeds λ6".into()));
        }
        if !self.mu3.is_multiple_of(2) {
            return Err(Error::Census("μ3 is odd".into()));
        }
        if !self.d2.is_multiple_of(2) {
            return Err(Error::Census("d2 is odd".into()));
        }
        Ok(())
    }

    pub fn o2(&self) -> u64 {
        self.lambda4 - self.lambda4star
    }

    pub fn o3(&self) -> u64 {
        self.lambda6 - self.lambda6star
    }

    pub fn iota3(&self) -> u64 {
        self.lambda6star
    }

    /// The census of a group whose reduced torsion subcomplexes consist of
    /// the given components.
    ///
    /// Each component type fixes its own subgroup counts: a θ graph has two
    /// D2 vertices and three Z/2 edges, a ρ graph one D2 and one A4 vertex
    /// and two Z/2 edges, an ι2 edge two A4 vertices and one Z/2 edge. So
    /// `μ2 = 2(θ + ρ + ι2)`, `μT = 2ι2 + ρ`, `λ4* = 3θ + 2ρ + ι2`, and every
    /// ι3 edge contributes two D3 classes, `μ3 = 2ι3`. The counts `z2` and
    /// `d2` are set to the number of Z/2 classes and of D2 classes.
    pub fn from_components(k: &ComponentCounts) -> SubgroupCensus {
        let lambda4star = 3 * k.theta + 2 * k.rho + k.iota2;
        let mu2 = 2 * (k.theta + k.rho + k.iota2);
        SubgroupCensus {
            lambda4: k.o2 + lambda4star,
            lambda4star,
            lambda6: k.o3 + k.iota3,
            lambda6star: k.iota3,
            mu2,
            mu3: 2 * k.iota3,
            mu_t: 2 * k.iota2 + k.rho,
            z2: k.o2 + lambda4star,
            d2: mu2,
            ..Default::default()
        }
    }
}
