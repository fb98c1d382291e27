//! Equivariant cohomology of a graph of finite groups, computed from the
//! two-column spectral sequence
//!
//! ```text
//! ⊕_v H^q(Γ_v; F_ℓ) --d^q--> ⊕_e H^q(Γ_e; F_ℓ),   H^q = ker d^q ⊕ coker d^(q-1)
//! ```
//!
//! Stabilizer cohomology and restriction maps come from a small closed-form
//! model for C1, C2, C3, D2 and D3. The model is checked against the bar
//! complex in degrees up to 3 the first time the oracle runs.

use std::ops::RangeInclusive;
use std::sync::OnceLock;

use crate::complexes::OrbitComplex;
use crate::error::{Error, Result};
use crate::groups::{
    catalog_group, cohomology_dim_bar, embeddings, require_prime, restriction_rank_bar, GroupTag,
    Perm,
};
use crate::linalg::DenseFp;

const CONTEXT: &str = "the graph cohomology oracle";

fn supported(tag: GroupTag) -> Result<()> {
    match tag {
        GroupTag::C1 | GroupTag::C2 | GroupTag::C3 | GroupTag::D2 | GroupTag::D3 => Ok(()),
        _ => Err(Error::UnsupportedTag { tag, context: CONTEXT }),
    }
}

/// dim H^q(G; F_ℓ) for the supported stabilizers.
pub fn stabilizer_cohomology_dim(tag: GroupTag, ell: u32, q: usize) -> Result<usize> {
    supported(tag)?;
    require_prime(ell)?;
    if q == 0 {
        return Ok(1);
    }
    if !tag.order().is_multiple_of(ell as usize) {
        return Ok(0);
    }
    Ok(match (tag, ell) {
        (GroupTag::D2, _) => q + 1,
        (GroupTag::D3, 3) => usize::from(matches!(q % 4, 0 | 3)),
        _ => 1,
    })
}

/// Exponents (α, β) with `g = a^α b^β` for the catalog generators a, b of D2.
fn d2_coordinates(g: &Perm) -> (u32, u32) {
    let gens = GroupTag::D2.generators();
    let id = Perm::identity(g.degree());
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut x = id.clone();
            if alpha == 1 {
                x = &x * &gens[0];
            }
            if beta == 1 {
                x = &x * &gens[1];
            }
            if &x == g {
                return (alpha, beta);
            }
        }
    }
    unreachable!("D2 is generated by its catalog generators")
}

/// Matrix of the restriction `H^q(G) -> H^q(H)` along embedding number
/// `embedding` of H into G, one row per basis class of H^q(H).
///
/// For D2 at ℓ = 2, H^*(D2) = F2[x, y] with x, y dual to the catalog
/// generators a, b, and the basis of H^q is x^i y^(q-i). Restricting to the
/// Z/2 generated by a^α b^β sends x ↦ αu, y ↦ βu. Every other nonzero map
/// between the supported groups is an isomorphism of one-dimensional spaces.
pub fn restriction_matrix(
    g: GroupTag,
    h: GroupTag,
    embedding: usize,
    ell: u32,
    q: usize,
) -> Result<Vec<Vec<u32>>> {
    let emb = embeddings(h, g);
    let e = emb.get(embedding).ok_or_else(|| {
        Error::InvalidArgument(format!("{h} has no embedding number {embedding} in {g}"))
    })?;
    let (dg, dh) = (
        stabilizer_cohomology_dim(g, ell, q)?,
        stabilizer_cohomology_dim(h, ell, q)?,
    );
    let mut m = vec![vec![0u32; dg]; dh];
    if dg == 0 || dh == 0 {
        return Ok(m);
    }
    if g == h || q == 0 {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        return Ok(m);
    }
    match (g, h, ell) {
        (GroupTag::D2, GroupTag::C2, 2) => {
            let gen = e.image.elements().iter().find(|p| !p.is_identity()).unwrap();
            let (alpha, beta) = d2_coordinates(gen);
            for i in 0..=q {
                let a = if i == 0 { 1 } else { alpha };
                let b = if q - i == 0 { 1 } else { beta };
                m[0][i] = a * b;
            }
        }
        (GroupTag::D3, GroupTag::C2, 2) | (GroupTag::D3, GroupTag::C3, 3) => m[0][0] = 1,
        _ => {
            return Err(Error::Invariant(format!(
                "no restriction model for {h} in {g} at ℓ = {ell}, degree {q}"
            )))
        }
    }
    Ok(m)
}

/// Compares the model with the bar complex for every supported inclusion at
/// ℓ ∈ {2, 3} and q ≤ 3.
fn verify_model() -> Result<()> {
    const TAGS: [GroupTag; 5] = [GroupTag::C1, GroupTag::C2, GroupTag::C3, GroupTag::D2, GroupTag::D3];
    for ell in [2, 3] {
        for g in TAGS {
            let gg = catalog_group(g);
            for q in 0..=3 {
                let model = stabilizer_cohomology_dim(g, ell, q)?;
                let bar = cohomology_dim_bar(&gg, ell, q)? as usize;
                if model != bar {
                    return Err(Error::Invariant(format!(
                        "dim H^{q}({g}; F{ell}): model {model}, bar complex {bar}"
                    )));
                }
            }
            for h in TAGS {
                for (k, e) in embeddings(h, g).iter().enumerate() {
                    for q in 0..=3 {
                        let m = restriction_matrix(g, h, k, ell, q)?;
                        let cols = stabilizer_cohomology_dim(g, ell, q)?;
                        let model = DenseFp::from_rows(&m, cols, ell).rank();
                        let bar = restriction_rank_bar(&gg, &e.image, ell, q)?;
                        if model != bar {
                            return Err(Error::Invariant(format!(
                                "rank of restriction {g} -> {h}#{k} in degree {q} at ℓ = {ell}: \
                                 model {model}, bar complex {bar}"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn model_verified() -> Result<()> {
    static CHECK: OnceLock<Result<()>> = OnceLock::new();
    CHECK.get_or_init(verify_model).clone()
}

/// The coboundary `d^q` of the graph as a dense matrix, with its row and
/// column counts.
fn coboundary(x: &OrbitComplex, ell: u32, q: usize) -> Result<DenseFp> {
    let vertices: Vec<_> = x.cells_of_dim(0).collect();
    let edges: Vec<_> = x.cells_of_dim(1).collect();
    let mut col_offset = std::collections::HashMap::new();
    let mut cols = 0;
    for v in &vertices {
        col_offset.insert(v.id.as_str(), cols);
        cols += stabilizer_cohomology_dim(v.stabilizer, ell, q)?;
    }
    let mut rows = 0;
    let mut row_offsets = Vec::with_capacity(edges.len());
    for e in &edges {
        row_offsets.push(rows);
        rows += stabilizer_cohomology_dim(e.stabilizer, ell, q)?;
    }
    let mut d = DenseFp::zeros(rows, cols, ell);
    for (e, &r0) in edges.iter().zip(&row_offsets) {
        let ends = x.edge_ends(&e.id).ok_or_else(|| {
            Error::Precondition(format!("edge {} does not have exactly two ends", e.id))
        })?;
        for ((vid, k), sign) in ends.iter().zip([ell - 1, 1]) {
            let v = x.require_cell(vid)?;
            let c0 = col_offset[vid.as_str()];
            let m = restriction_matrix(v.stabilizer, e.stabilizer, *k, ell, q)?;
            for (i, row) in m.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    let cur = d.get(r0 + i, c0 + j);
                    d.set(r0 + i, c0 + j, (cur + sign * a) % ell);
                }
            }
        }
    }
    Ok(d)
}

/// dim H^q_Γ(X; F_ℓ) for every q in `degrees`, X a graph of groups given as
/// a 1-dimensional orbit complex.
pub fn equivariant_graph_cohomology_oracle(
    x: &OrbitComplex,
    ell: u32,
    degrees: RangeInclusive<usize>,
) -> Result<Vec<u64>> {
    require_prime(ell)?;
    if x.dimension().is_some_and(|d| d > 1) {
        return Err(Error::Precondition(format!("{CONTEXT} needs a graph")));
    }
    for c in x.cells() {
        supported(c.stabilizer)?;
    }
    model_verified()?;
    let mut out = Vec::new();
    for q in degrees {
        let d = coboundary(x, ell, q)?;
        let ker = d.cols - d.rank();
        let coker = if q == 0 {
            0
        } else {
            let prev = coboundary(x, ell, q - 1)?;
            prev.rows - prev.rank()
        };
        out.push((ker + coker) as u64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{Incidence, OrbitCell};

    fn circle() -> OrbitComplex {
        OrbitComplex::new(
            true,
            vec![OrbitCell::new("v", 0, GroupTag::C2), OrbitCell::new("e", 1, GroupTag::C2)],
            vec![Incidence::new("v", "e", 2)],
        )
        .unwrap()
    }

    fn theta() -> OrbitComplex {
        let mut incidences = Vec::new();
        for (k, e) in ["e0", "e1", "e2"].iter().enumerate() {
            incidences.push(Incidence::new("u", e, 1).with_embeddings(vec![k]));
            incidences.push(Incidence::new("w", e, 1).with_embeddings(vec![k]));
        }
        OrbitComplex::new(
            true,
            vec![
                OrbitCell::new("u", 0, GroupTag::D2),
                OrbitCell::new("w", 0, GroupTag::D2),
                OrbitCell::new("e0", 1, GroupTag::C2),
                OrbitCell::new("e1", 1, GroupTag::C2),
                OrbitCell::new("e2", 1, GroupTag::C2),
            ],
            incidences,
        )
        .unwrap()
    }

    #[test]
    fn model_matches_bar_complex() {
        verify_model().unwrap();
    }

    #[test]
    fn circle_and_theta() {
        assert_eq!(
            equivariant_graph_cohomology_oracle(&circle(), 2, 3..=6).unwrap(),
            vec![2, 2, 2, 2]
        );
        let theta = equivariant_graph_cohomology_oracle(&theta(), 2, 3..=8).unwrap();
        assert_eq!(theta, (3..=8).map(|q| 2 * q - 1).collect::<Vec<u64>>());
    }

    #[test]
    fn edge3() {
        let x = OrbitComplex::new(
            true,
            vec![
                OrbitCell::new("a", 0, GroupTag::D3),
                OrbitCell::new("b", 0, GroupTag::D3),
                OrbitCell::new("e", 1, GroupTag::C3),
            ],
            vec![Incidence::new("a", "e", 1), Incidence::new("b", "e", 1)],
        )
        .unwrap();
        assert_eq!(
            equivariant_graph_cohomology_oracle(&x, 3, 3..=6).unwrap(),
            vec![2, 1, 0, 1]
        );
    }

    #[test]
    fn empty_and_unsupported() {
        assert_eq!(
            equivariant_graph_cohomology_oracle(&OrbitComplex::empty(), 2, 0..=3).unwrap(),
            vec![0; 4]
        );
        let s4 = OrbitComplex::new(true, vec![OrbitCell::new("v", 0, GroupTag::S4)], vec![]).unwrap();
        assert!(matches!(
            equivariant_graph_cohomology_oracle(&s4, 2, 3..=3),
            Err(Error::UnsupportedTag { .. })
        ));
    }
}
