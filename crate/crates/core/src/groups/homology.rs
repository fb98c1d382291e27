//! Mod-ℓ (co)homology dimensions of small groups.
//!
//! The brute-force route uses the normalized bar complex with trivial
//! coefficients: `C_q` has basis the q-tuples of non-identity elements and
//!
//! ```text
//! d[g1|..|gq] = [g2|..|gq] + Σ_{0<i<q} (-1)^i [..|g_i g_{i+1}|..] + (-1)^q [g1|..|g_{q-1}]
//! ```
//!
//! with tuples containing the identity dropped.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{require_prime, FiniteGroup, Perm, Table, MAX_ORDER};
use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, DenseFp, SparseColumn};

/// Bar-complex size limit: `|G|^(q_max + 1)` tuples.
pub const BAR_RESOURCE_BOUND: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyDims {
    pub prime: u32,
    pub dims: BTreeMap<usize, u64>,
}

impl HomologyDims {
    pub fn get(&self, q: usize) -> Option<u64> {
        self.dims.get(&q).copied()
    }
}

/// dim H_q(D_n; F_ℓ) for odd ℓ: 1 in degree 0, 1 in degrees ≡ 3, 4 mod 4
/// when ℓ divides n, 0 otherwise.
pub fn dihedral_mod_ell_homology(n: u32, ell: u32, q: usize) -> Result<u64> {
    require_prime(ell)?;
    if ell == 2 {
        return Err(Error::InvalidArgument(
            "the dihedral formula holds for odd primes only".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dihedral group D_0".into()));
    }
    Ok(match q {
        0 => 1,
        _ if n.is_multiple_of(ell) && matches!(q % 4, 0 | 3) => 1,
        _ => 0,
    })
}

/// Bar complex bookkeeping for one group.
struct Bar {
    table: Table,
    /// Non-identity element indices; tuple entries index into this list.
    nonid: Vec<usize>,
    /// Position in `nonid` of each element, `None` for the identity.
    pos: Vec<Option<u32>>,
}

impl Bar {
    fn new(table: Table) -> Bar {
        let nonid: Vec<usize> = (0..table.order()).filter(|&a| a != table.identity).collect();
        let mut pos = vec![None; table.order()];
        for (k, &a) in nonid.iter().enumerate() {
            pos[a] = Some(k as u32);
        }
        Bar { table, nonid, pos }
    }

    fn m(&self) -> u64 {
        self.nonid.len() as u64
    }

    fn size(&self, q: usize) -> u64 {
        self.m().pow(q as u32)
    }

    fn decode(&self, mut x: u64, q: usize) -> Vec<usize> {
        let m = self.m();
        let mut t = vec![0; q];
        for k in (0..q).rev() {
            t[k] = self.nonid[(x % m) as usize];
            x /= m;
        }
        t
    }

    fn encode(&self, t: &[usize]) -> Option<u32> {
        let mut x = 0u32;
        for &a in t {
            x = x * self.m() as u32 + self.pos[a]?;
        }
        Some(x)
    }

    /// Column `x` of `d_q : C_q -> C_{q-1}` over F_p.
    fn boundary_column(&self, x: u64, q: usize, p: u32) -> SparseColumn {
        let t = self.decode(x, q);
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(q + 1);
        for i in 0..=q {
            let face: Vec<usize> = if i == 0 {
                t[1..].to_vec()
            } else if i == q {
                t[..q - 1].to_vec()
            } else {
                let mut f = t[..i - 1].to_vec();
                f.push(self.table.mul[t[i - 1]][t[i]] as usize);
                f.extend_from_slice(&t[i + 1..]);
                f
            };
            if let Some(r) = self.encode(&face) {
                entries.push((r, if i % 2 == 0 { 1 } else { p - 1 }));
            }
        }
        entries.sort_unstable();
        let mut merged: SparseColumn = Vec::with_capacity(entries.len());
        for (r, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 = (last.1 + v) % p,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        merged
    }

    fn boundary_rank(&self, q: usize, p: u32) -> usize {
        if q == 0 {
            return 0;
        }
        let cols = (0..self.size(q)).map(|x| self.boundary_column(x, q, p));
        sparse_rank(cols, self.size(q - 1) as usize, p)
    }

    /// The coboundary `δ^q : C^q -> C^{q+1}`, i.e. the transpose of `d_{q+1}`.
    fn coboundary(&self, q: usize, p: u32) -> DenseFp {
        let mut m = DenseFp::zeros(self.size(q + 1) as usize, self.size(q) as usize, p);
        for x in 0..self.size(q + 1) {
            for (r, v) in self.boundary_column(x, q + 1, p) {
                m.set(x as usize, r as usize, v);
            }
        }
        m
    }
}

fn check_bound(order: usize, q_max: usize) -> Result<()> {
    let tuples = (order as u64).checked_pow(q_max as u32 + 1);
    match tuples {
        Some(t) if t <= BAR_RESOURCE_BOUND => Ok(()),
        _ => Err(Error::ResourceBound(format!(
            "order {order} to the power {} exceeds {BAR_RESOURCE_BOUND} bar tuples",
            q_max + 1
        ))),
    }
}

fn bar_homology(table: Table, ell: u32, q_max: usize) -> HomologyDims {
    let bar = Bar::new(table);
    let ranks: Vec<usize> = (0..=q_max + 1).map(|q| bar.boundary_rank(q, ell)).collect();
    let dims = (0..=q_max)
        .map(|q| (q, bar.size(q) - ranks[q] as u64 - ranks[q + 1] as u64))
        .collect();
    HomologyDims { prime: ell, dims }
}

/// dim H_q(G; F_ℓ) for `q <= q_max` from ranks of the bar differentials.
pub fn mod_ell_homology_bruteforce(g: &FiniteGroup, ell: u32, q_max: usize) -> Result<HomologyDims> {
    require_prime(ell)?;
    check_bound(g.order(), q_max)?;
    Ok(bar_homology(g.table(), ell, q_max))
}

/// Same as [`mod_ell_homology_bruteforce`] for the permutation group
/// generated by `gens`, which need not be a catalog group (dihedral groups of
/// odd degree, for instance).
pub fn mod_ell_homology_of_generated(gens: &[Perm], ell: u32, q_max: usize) -> Result<HomologyDims> {
    require_prime(ell)?;
    let degree = gens.first().map_or(1, Perm::degree);
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(Error::InvalidArgument(format!("generators must all have degree {degree}")));
    }
    let mut elements = BTreeSet::from([Perm::identity(degree)]);
    let mut frontier = vec![Perm::identity(degree)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x * g;
            if elements.insert(y.clone()) {
                if elements.len() > MAX_ORDER {
                    return Err(Error::GroupTooLarge(elements.len()));
                }
                frontier.push(y);
            }
        }
    }
    check_bound(elements.len(), q_max)?;
    let elements: Vec<Perm> = elements.into_iter().collect();
    Ok(bar_homology(Table::new(&elements), ell, q_max))
}

/// dim H^q(G; F_ℓ) computed from bar cochains.
pub(crate) fn cohomology_dim_bar(g: &FiniteGroup, ell: u32, q: usize) -> Result<u64> {
    require_prime(ell)?;
    check_bound(g.order(), q)?;
    let bar = Bar::new(g.table());
    let cocycles = bar.coboundary(q, ell).kernel().len() as u64;
    let coboundaries = if q == 0 { 0 } else { bar.coboundary(q - 1, ell).rank() as u64 };
    Ok(cocycles - coboundaries)
}

/// Rank of the restriction `H^q(G; F_ℓ) -> H^q(H; F_ℓ)` for a subgroup H of G,
/// computed on bar cochains: restrict every cocycle of G to tuples from H and
/// measure the span modulo the coboundaries of H.
pub(crate) fn restriction_rank_bar(
    g: &FiniteGroup,
    h: &FiniteGroup,
    ell: u32,
    q: usize,
) -> Result<usize> {
    require_prime(ell)?;
    if !h.is_subgroup_of(g) {
        return Err(Error::NotASubgroup(format!("{} in {}", h.tag(), g.tag())));
    }
    check_bound(g.order(), q)?;
    let gbar = Bar::new(g.table());
    let hbar = Bar::new(h.table());
    // element index of H -> element index of G
    let h_in_g: Vec<usize> = h
        .elements()
        .iter()
        .map(|x| g.elements().binary_search(x).unwrap())
        .collect();
    let cocycles = gbar.coboundary(q, ell).kernel();
    let restricted: Vec<Vec<u32>> = cocycles
        .iter()
        .map(|z| {
            (0..hbar.size(q))
                .map(|x| {
                    let t: Vec<usize> = hbar.decode(x, q).into_iter().map(|a| h_in_g[a]).collect();
                    z[gbar.encode(&t).unwrap() as usize]
                })
                .collect()
        })
        .collect();
    let width = hbar.size(q) as usize;
    let coboundaries: Vec<Vec<u32>> = if q == 0 {
        Vec::new()
    } else {
        let d = hbar.coboundary(q - 1, ell);
        (0..d.cols)
            .map(|c| (0..d.rows).map(|r| d.get(r, c)).collect())
            .collect()
    };
    let base = DenseFp::from_rows(&coboundaries, width, ell).rank();
    let mut both = coboundaries;
    both.extend(restricted);
    Ok(DenseFp::from_rows(&both, width, ell).rank() - base)
}
