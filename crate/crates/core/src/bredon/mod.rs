//! Bredon homology with coefficients in the complex representation ring,
//! equivariant K-homology, and Chen–Ruan orbifold cohomology dimensions.
//!
//! The Bredon chain complex of an orbit complex has `⊕_σ R_C(Γ_σ)` in each
//! degree, with differentials assembled from induction along the stabilizer
//! inclusions. Orientation conventions:
//!
//! * An edge runs from its first end to its second (faces sorted by id, see
//!   [`OrbitComplex::edge_ends`]); the tail enters with sign −1, the head
//!   with +1. A loop thus contributes the difference of its two inductions.
//! * A 2-cell takes the lexicographically first sign vector over its edge
//!   copies (+1 before −1, copies in incidence order) whose boundary in the
//!   quotient graph vanishes.

mod abelian;
mod characters;
mod eisenstein;
mod intmat;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

pub use abelian::AbelianGroup;
pub use characters::{
    block_labels, block_sizes, induction_matrix, rep_ring, split_induction_matrix,
    splitting_basis, verify_frobenius, BlockSizes, RepRing, SUPPORTED,
};
pub use eisenstein::Eis;
pub use intmat::{smith_normal_form, IntMatrix, Smith};

use crate::complexes::OrbitComplex;
use crate::error::{Error, Result};
use crate::groups::GroupTag;
use crate::series::SubgroupCensus;

/// `C_0 <- C_1 <- … ` with `differentials[n - 1]` the map `C_n -> C_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub differentials: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<ChainComplex> {
        if differentials.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} chain groups need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        Ok(ChainComplex { dims, differentials })
    }

    pub fn zero() -> ChainComplex {
        ChainComplex {
            dims: vec![0],
            differentials: Vec::new(),
        }
    }

    /// Fails unless every composite of consecutive differentials vanishes.
    pub fn check(&self) -> Result<()> {
        for (k, w) in self.differentials.windows(2).enumerate() {
            if !w[0].mul(&w[1]).is_zero() {
                return Err(Error::NotAChainComplex(format!(
                    "the composite C_{} -> C_{} is non-zero",
                    k + 2,
                    k
                )));
            }
        }
        Ok(())
    }
}

/// H_n = ker d_n / im d_{n+1}, from Smith normal forms.
pub fn homology(c: &ChainComplex) -> Result<Vec<AbelianGroup>> {
    c.check()?;
    let snfs: Vec<Smith> = c.differentials.iter().map(smith_normal_form).collect();
    for (d, s) in c.differentials.iter().zip(&snfs) {
        if s.u.mul(d).mul(&s.v) != s.d {
            return Err(Error::Invariant("Smith normal form does not reproduce D".into()));
        }
    }
    let rank = |n: usize| -> usize {
        if n == 0 || n > snfs.len() {
            0
        } else {
            snfs[n - 1].rank()
        }
    };
    Ok((0..c.dims.len())
        .map(|n| {
            let free = c.dims[n] - rank(n) - rank(n + 1);
            let torsion: Vec<u64> = if n < snfs.len() {
                snfs[n].divisors().into_iter().map(|d| d as u64).filter(|&d| d > 1).collect()
            } else {
                Vec::new()
            };
            AbelianGroup::new(free, &torsion)
        })
        .collect())
}

/// The Bredon chain complex together with the generator of each basis
/// element: `labels[n][k] = (cell id, character index)`.
#[derive(Clone, Debug, Serialize)]
pub struct BredonComplex {
    pub complex: ChainComplex,
    pub labels: Vec<Vec<(String, usize)>>,
    #[serde(skip)]
    stabilizers: Vec<Vec<GroupTag>>,
}

fn two_cell_signs(x: &OrbitComplex, cell: &str) -> Result<Vec<i64>> {
    let copies: Vec<&str> = x
        .faces_of(cell)
        .flat_map(|i| std::iter::repeat_n(i.face.as_str(), i.multiplicity as usize))
        .collect();
    if copies.len() > 20 {
        return Err(Error::Precondition(format!("2-cell {cell} has too many edges")));
    }
    // quotient boundary of each edge copy as (vertex, coefficient) pairs
    let mut boundaries = Vec::new();
    for e in &copies {
        let ends = x
            .edge_ends(e)
            .ok_or_else(|| Error::Precondition(format!("edge {e} does not have two ends")))?;
        boundaries.push([(ends[0].0.clone(), -1), (ends[1].0.clone(), 1)]);
    }
    for mask in 0u32..(1 << copies.len()) {
        // bit k set means sign −1 for copy k; counting up from 0 walks the
        // sign vectors in lexicographic order once bits are read high to low
        let signs: Vec<i64> = (0..copies.len())
            .map(|k| if mask >> (copies.len() - 1 - k) & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut total: HashMap<&str, i64> = HashMap::new();
        for (s, b) in signs.iter().zip(&boundaries) {
            for (v, c) in b {
                *total.entry(v.as_str()).or_default() += s * c;
            }
        }
        if total.values().all(|&c| c == 0) {
            return Ok(signs);
        }
    }
    Err(Error::Precondition(format!(
        "no choice of signs makes the boundary of 2-cell {cell} a cycle"
    )))
}

/// Assembles Ψ_1 and Ψ_2 from induction matrices.
pub fn bredon_complex(x: &OrbitComplex) -> Result<BredonComplex> {
    if !x.rigid() {
        return Err(Error::NonRigid);
    }
    let top = x.dimension().unwrap_or(0);
    if top > 2 {
        return Err(Error::Precondition(format!(
            "Bredon complex of a {top}-dimensional complex; at most 2 is supported"
        )));
    }
    for c in x.cells_of_dim(2) {
        if c.stabilizer != GroupTag::C1 {
            return Err(Error::Precondition(format!(
                "2-cell {} has stabilizer {}; 2-cells must be trivially stabilized",
                c.id, c.stabilizer
            )));
        }
    }
    let mut labels = Vec::new();
    let mut stabilizers = Vec::new();
    let mut offset: Vec<HashMap<String, usize>> = Vec::new();
    for n in 0..=top {
        let mut l = Vec::new();
        let mut s = Vec::new();
        let mut o = HashMap::new();
        for c in x.cells_of_dim(n) {
            o.insert(c.id.clone(), l.len());
            let rank = rep_ring(c.stabilizer)?.rank();
            l.extend((0..rank).map(|k| (c.id.clone(), k)));
            s.push(c.stabilizer);
        }
        labels.push(l);
        stabilizers.push(s);
        offset.push(o);
    }
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    let mut diffs = Vec::new();
    if top >= 1 {
        let mut psi1 = IntMatrix::zeros(dims[0], dims[1]);
        for e in x.cells_of_dim(1) {
            let ends = x.edge_ends(&e.id).ok_or_else(|| {
                Error::Precondition(format!("edge {} does not have exactly two ends", e.id))
            })?;
            for ((v, k), sign) in ends.iter().zip([-1, 1]) {
                let vt = x.require_cell(v)?.stabilizer;
                let m = induction_matrix(e.stabilizer, vt, *k)?;
                psi1.add_block(offset[0][v], offset[1][&e.id], &m, sign);
            }
        }
        diffs.push(psi1);
    }
    if top >= 2 {
        let mut psi2 = IntMatrix::zeros(dims[1], dims[2]);
        for f in x.cells_of_dim(2) {
            let signs = two_cell_signs(x, &f.id)?;
            let copies = x
                .faces_of(&f.id)
                .flat_map(|i| i.embedding_indices().into_iter().map(move |k| (i.face.clone(), k)));
            for ((e, k), sign) in copies.zip(signs) {
                let et = x.require_cell(&e)?.stabilizer;
                let m = induction_matrix(GroupTag::C1, et, k)?;
                psi2.add_block(offset[1][&e], offset[2][&f.id], &m, sign);
            }
        }
        diffs.push(psi2);
    }
    let complex = ChainComplex::new(dims, diffs)?;
    complex.check()?;
    Ok(BredonComplex {
        complex,
        labels,
        stabilizers,
    })
}

/// The three summands of the Bredon complex after the splitting base change.
#[derive(Clone, Debug, Serialize)]
pub struct SplitBlocks {
    /// The cellular chain complex of the orbit space.
    pub trivial: ChainComplex,
    /// The summand induced from 2-torsion.
    pub two: ChainComplex,
    /// The summand induced from 3-torsion.
    pub three: ChainComplex,
}

fn block_diagonal(blocks: Vec<IntMatrix>) -> IntMatrix {
    let rows: usize = blocks.iter().map(IntMatrix::rows).sum();
    let cols: usize = blocks.iter().map(IntMatrix::cols).sum();
    let mut m = IntMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        m.add_block(r, c, &b, 1);
        r += b.rows();
        c += b.cols();
    }
    m
}

/// Changes every R_C(Γ_σ) to its splitting basis and cuts the complex into
/// the trivial, 2- and 3-parts. Entries linking different parts are an error.
pub fn split_blocks(b: &BredonComplex) -> Result<SplitBlocks> {
    let mut bases = Vec::new();
    let mut inverses = Vec::new();
    let mut kinds: Vec<Vec<usize>> = Vec::new();
    for tags in &b.stabilizers {
        let mats: Vec<IntMatrix> = tags.iter().map(|&t| splitting_basis(t)).collect::<Result<_>>()?;
        let invs: Vec<IntMatrix> = mats
            .iter()
            .map(|m| {
                m.inverse_unimodular()
                    .ok_or_else(|| Error::Invariant("splitting basis is not unimodular".into()))
            })
            .collect::<Result<_>>()?;
        let mut k = Vec::new();
        for &t in tags {
            k.extend(block_labels(t)?);
        }
        bases.push(block_diagonal(mats));
        inverses.push(block_diagonal(invs));
        kinds.push(k);
    }
    let changed: Vec<IntMatrix> = b
        .complex
        .differentials
        .iter()
        .enumerate()
        .map(|(k, d)| inverses[k].mul(d).mul(&bases[k + 1]))
        .collect();
    for (k, d) in changed.iter().enumerate() {
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if d.get(i, j) != 0 && kinds[k][i] != kinds[k + 1][j] {
                    let (ci, cj) = (&b.labels[k][i], &b.labels[k + 1][j]);
                    return Err(Error::OffBlockEntries(format!(
                        "entry {} at ({}#{}, {}#{}) of the degree-{} differential",
                        d.get(i, j),
                        ci.0,
                        ci.1,
                        cj.0,
                        cj.1,
                        k + 1
                    )));
                }
            }
        }
    }
    let part = |p: usize| -> Result<ChainComplex> {
        let idx: Vec<Vec<usize>> = kinds
            .iter()
            .map(|k| (0..k.len()).filter(|&i| k[i] == p).collect())
            .collect();
        let diffs = changed
            .iter()
            .enumerate()
            .map(|(k, d)| d.select(&idx[k], &idx[k + 1]))
            .collect();
        ChainComplex::new(idx.iter().map(Vec::len).collect(), diffs)
    };
    Ok(SplitBlocks {
        trivial: part(0)?,
        two: part(1)?,
        three: part(2)?,
    })
}

/// Bredon homology of the 2- and 3-parts as predicted from the census:
/// the 2-part is Z^z2 ⊕ (Z/2)^(d2/2) in degree 0 and Z^o2 in degree 1; the
/// 3-part is Z^(2 o3 + ι3) in degrees 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BredonFormula {
    pub h0_2: AbelianGroup,
    pub h1_2: AbelianGroup,
    pub h0_3: AbelianGroup,
    pub h1_3: AbelianGroup,
}

pub fn bredon_homology_formula(census: &SubgroupCensus) -> Result<BredonFormula> {
    census.validate()?;
    let three = AbelianGroup::free((2 * census.o3() + census.iota3()) as usize);
    Ok(BredonFormula {
        h0_2: AbelianGroup::new(census.z2 as usize, &vec![2; (census.d2 / 2) as usize]),
        h1_2: AbelianGroup::free(census.o2() as usize),
        h0_3: three.clone(),
        h1_3: three,
    })
}

/// Equivariant K-homology of the classifying space for proper actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KHomology {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

/// K_0 = Z ⊕ Z^β2 ⊕ Z^z2 ⊕ (Z/2)^(d2/2) ⊕ Z^(2 o3 + ι3) and
/// K_1 = H_1(orbit space) ⊕ Z^o2 ⊕ Z^(2 o3 + ι3), valid when the
/// classifying space has dimension at most 2.
pub fn k_homology(census: &SubgroupCensus, h1_orbit: &AbelianGroup, beta2: u64) -> Result<KHomology> {
    let f = bredon_homology_formula(census)?;
    let k0 = AbelianGroup::free(1 + beta2 as usize)
        .direct_sum(&f.h0_2)
        .direct_sum(&f.h0_3);
    let k1 = h1_orbit.direct_sum(&f.h1_2).direct_sum(&f.h1_3);
    Ok(KHomology { k0, k1 })
}

/// Dimensions of rational Chen–Ruan orbifold cohomology from those of the
/// quotient space.
///
/// Complexified: λ4 + 2λ6 − λ6* extra classes in degree 2 and
/// λ4 − λ4* + 2λ6 − λ6* in degree 3. Real: λ4* edges (degree 0 only) and
/// λ4 − λ4* + 2λ6 − λ6* circles (degrees 0 and 1).
pub fn chen_ruan_dims(
    census: &SubgroupCensus,
    quotient_dims: &BTreeMap<usize, u64>,
    complexified: bool,
) -> Result<BTreeMap<usize, u64>> {
    census.validate()?;
    let c = census;
    let circles = c.o2() + 2 * c.lambda6 - c.lambda6star;
    let mut out = quotient_dims.clone();
    let mut add = |d: usize, x: u64| *out.entry(d).or_default() += x;
    if complexified {
        add(2, c.lambda4 + 2 * c.lambda6 - c.lambda6star);
        add(3, circles);
    } else {
        add(0, c.lambda4star + circles);
        add(1, circles);
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}
