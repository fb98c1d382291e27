//! Small finite groups as permutation groups.
//!
//! Everything here is brute force over element sets. Every group is capped at
//! order 24 and carries the [`GroupTag`] of the catalog group it is
//! isomorphic to, so any subgroup, quotient or normalizer computed from a
//! catalog group is itself tagged.

mod homology;
mod perm;
mod table;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use homology::{
    dihedral_mod_ell_homology, mod_ell_homology_bruteforce, mod_ell_homology_of_generated, HomologyDims,
    BAR_RESOURCE_BOUND,
};
pub(crate) use homology::{cohomology_dim_bar, restriction_rank_bar};
pub use perm::Perm;
pub(crate) use table::Table;

/// Largest group order handled anywhere in the crate (|S4|).
pub const MAX_ORDER: usize = 24;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupTag {
    C1,
    C2,
    C3,
    C4,
    C6,
    D2,
    D3,
    D4,
    D6,
    A4,
    S4,
}

impl GroupTag {
    pub const ALL: [GroupTag; 11] = [
        GroupTag::C1,
        GroupTag::C2,
        GroupTag::C3,
        GroupTag::C4,
        GroupTag::C6,
        GroupTag::D2,
        GroupTag::D3,
        GroupTag::D4,
        GroupTag::D6,
        GroupTag::A4,
        GroupTag::S4,
    ];

    pub fn order(self) -> usize {
        match self {
            GroupTag::C1 => 1,
            GroupTag::C2 => 2,
            GroupTag::C3 => 3,
            GroupTag::C4 | GroupTag::D2 => 4,
            GroupTag::C6 | GroupTag::D3 => 6,
            GroupTag::D4 => 8,
            GroupTag::D6 | GroupTag::A4 => 12,
            GroupTag::S4 => 24,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupTag::C1 => "C1",
            GroupTag::C2 => "C2",
            GroupTag::C3 => "C3",
            GroupTag::C4 => "C4",
            GroupTag::C6 => "C6",
            GroupTag::D2 => "D2",
            GroupTag::D3 => "D3",
            GroupTag::D4 => "D4",
            GroupTag::D6 => "D6",
            GroupTag::A4 => "A4",
            GroupTag::S4 => "S4",
        }
    }

    pub fn is_cyclic(self) -> bool {
        matches!(
            self,
            GroupTag::C1 | GroupTag::C2 | GroupTag::C3 | GroupTag::C4 | GroupTag::C6
        )
    }

    /// Degree and generators of the pinned permutation realization.
    fn realization(self) -> (usize, Vec<Perm>) {
        let c = |deg: usize, cycles: &[&[u8]]| Perm::from_cycles(deg, cycles).unwrap();
        match self {
            GroupTag::C1 => (1, vec![]),
            GroupTag::C2 => (2, vec![c(2, &[&[0, 1]])]),
            GroupTag::C3 => (3, vec![c(3, &[&[0, 1, 2]])]),
            GroupTag::C4 => (4, vec![c(4, &[&[0, 1, 2, 3]])]),
            GroupTag::C6 => (5, vec![c(5, &[&[0, 1, 2], &[3, 4]])]),
            GroupTag::D2 => (4, vec![c(4, &[&[0, 1], &[2, 3]]), c(4, &[&[0, 2], &[1, 3]])]),
            GroupTag::D3 => (3, vec![c(3, &[&[0, 1, 2]]), c(3, &[&[0, 1]])]),
            GroupTag::D4 => (4, vec![c(4, &[&[0, 1, 2, 3]]), c(4, &[&[0, 2]])]),
            GroupTag::D6 => (
                6,
                vec![c(6, &[&[0, 1, 2, 3, 4, 5]]), c(6, &[&[1, 5], &[2, 4]])],
            ),
            GroupTag::A4 => (4, vec![c(4, &[&[0, 1, 2]]), c(4, &[&[0, 1], &[2, 3]])]),
            GroupTag::S4 => (4, vec![c(4, &[&[0, 1, 2, 3]]), c(4, &[&[0, 1]])]),
        }
    }

    /// Generators of the pinned realization (see [`catalog_group`]).
    pub fn generators(self) -> Vec<Perm> {
        self.realization().1
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupTag> {
        GroupTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown group tag {s:?}")))
    }
}

/// A permutation group isomorphic to a catalog group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    tag: GroupTag,
}

impl FiniteGroup {
    /// The subgroup of `Sym(degree)` generated by `gens`.
    ///
    /// Fails if the group has more than [`MAX_ORDER`] elements or is not
    /// isomorphic to a catalog group.
    pub fn generated_by(degree: usize, gens: &[Perm]) -> Result<FiniteGroup> {
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidArgument(format!(
                "generators must all have degree {degree}"
            )));
        }
        let mut elements = BTreeSet::from([Perm::identity(degree)]);
        let mut frontier: Vec<Perm> = elements.iter().cloned().collect();
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
        FiniteGroup::from_elements(degree, elements.into_iter().collect())
    }

    /// Wraps a set of permutations already known to be closed under products.
    fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Result<FiniteGroup> {
        elements.sort();
        elements.dedup();
        if elements.len() > MAX_ORDER {
            return Err(Error::GroupTooLarge(elements.len()));
        }
        let table = Table::new(&elements);
        let tag = identify(&table)?;
        Ok(FiniteGroup {
            degree,
            elements,
            tag,
        })
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in increasing lexicographic order of their image lists.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|p| other.contains(p))
    }

    pub(crate) fn table(&self) -> Table {
        Table::new(&self.elements)
    }

    fn subgroup_from_mask(&self, mask: u32) -> FiniteGroup {
        let elements = table::mask_members(mask)
            .map(|i| self.elements[i].clone())
            .collect();
        FiniteGroup::from_elements(self.degree, elements)
            .expect("subgroups of catalog groups are catalog groups")
    }

    /// All subgroups, sorted by order and then by element list.
    pub fn subgroups(&self) -> Vec<FiniteGroup> {
        let mut out: Vec<FiniteGroup> = self
            .table()
            .subgroup_masks()
            .into_iter()
            .map(|m| self.subgroup_from_mask(m))
            .collect();
        sort_groups(&mut out);
        out
    }

    pub fn is_normal_subgroup(&self, h: &FiniteGroup) -> bool {
        h.is_subgroup_of(self)
            && self.elements.iter().all(|g| {
                let gi = g.inverse();
                h.elements.iter().all(|x| h.contains(&(&(g * x) * &gi)))
            })
    }

    /// Conjugacy classes, each sorted, ordered by their least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Perm>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for x in &self.elements {
            if seen.contains(x) {
                continue;
            }
            let class: BTreeSet<Perm> = self
                .elements
                .iter()
                .map(|g| &(g * x) * &g.inverse())
                .collect();
            seen.extend(class.iter().cloned());
            out.push(class.into_iter().collect());
        }
        out
    }

    pub fn are_conjugate(&self, x: &Perm, y: &Perm) -> bool {
        self.elements.iter().any(|g| &(g * x) * &g.inverse() == *y)
    }

    /// The quotient `self / n`, realized by left multiplication on left cosets.
    pub fn quotient(&self, n: &FiniteGroup) -> Result<FiniteGroup> {
        if !self.is_normal_subgroup(n) {
            return Err(Error::NotASubgroup(format!(
                "{} is not a normal subgroup of {}",
                n.tag, self.tag
            )));
        }
        let mut coset_of: HashMap<Perm, usize> = HashMap::new();
        let mut reps: Vec<&Perm> = Vec::new();
        for g in &self.elements {
            if coset_of.contains_key(g) {
                continue;
            }
            for x in &n.elements {
                coset_of.insert(g * x, reps.len());
            }
            reps.push(g);
        }
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .map(|x| {
                let images = reps.iter().map(|r| coset_of[&(x * *r)] as u8).collect();
                Perm::from_images(images).expect("left multiplication permutes cosets")
            })
            .collect();
        FiniteGroup::from_elements(reps.len(), elements)
    }

    /// An explicit isomorphism to `other`, as pairs (element of self, image).
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<(Perm, Perm)>> {
        let map = table::find_isomorphism(&self.table(), &other.table())?;
        Some(
            map.iter()
                .enumerate()
                .map(|(i, &j)| (self.elements[i].clone(), other.elements[j].clone()))
                .collect(),
        )
    }
}

fn sort_groups(groups: &mut [FiniteGroup]) {
    groups.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
}

fn catalog_tables() -> &'static Vec<(GroupTag, Table)> {
    static TABLES: OnceLock<Vec<(GroupTag, Table)>> = OnceLock::new();
    TABLES.get_or_init(|| {
        GroupTag::ALL
            .into_iter()
            .map(|tag| (tag, Table::new(&catalog_elements(tag))))
            .collect()
    })
}

fn catalog_elements(tag: GroupTag) -> Vec<Perm> {
    let (degree, gens) = tag.realization();
    let mut elements = BTreeSet::from([Perm::identity(degree)]);
    let mut frontier = vec![Perm::identity(degree)];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = &x * g;
            if elements.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    elements.into_iter().collect()
}

fn identify(table: &Table) -> Result<GroupTag> {
    let fp = table.fingerprint();
    for (tag, cat) in catalog_tables() {
        if cat.fingerprint() == fp && table::find_isomorphism(table, cat).is_some() {
            return Ok(*tag);
        }
    }
    Err(Error::NotInCatalog(table.order()))
}

/// The pinned permutation realization of a catalog group.
///
/// | tag | degree | generators |
/// |-----|--------|------------|
/// | C1 | 1 | none |
/// | C2 | 2 | (0 1) |
/// | C3 | 3 | (0 1 2) |
/// | C4 | 4 | (0 1 2 3) |
/// | C6 | 5 | (0 1 2)(3 4) |
/// | D2 | 4 | (0 1)(2 3), (0 2)(1 3) |
/// | D3 | 3 | (0 1 2), (0 1) |
/// | D4 | 4 | (0 1 2 3), (0 2) |
/// | D6 | 6 | (0 1 2 3 4 5), (1 5)(2 4) |
/// | A4 | 4 | (0 1 2), (0 1)(2 3) |
/// | S4 | 4 | (0 1 2 3), (0 1) |
pub fn catalog_group(tag: GroupTag) -> FiniteGroup {
    static CACHE: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        GroupTag::ALL
            .into_iter()
            .map(|t| FiniteGroup {
                degree: t.realization().0,
                elements: catalog_elements(t),
                tag: t,
            })
            .collect()
    });
    all[GroupTag::ALL.iter().position(|t| *t == tag).unwrap()].clone()
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn require_prime(ell: u32) -> Result<()> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{ell} is not a prime")))
    }
}

/// All normal subgroups, from `{1}` up to `g`.
pub fn normal_subgroups(g: &FiniteGroup) -> Result<Vec<FiniteGroup>> {
    if g.order() > MAX_ORDER {
        return Err(Error::GroupTooLarge(g.order()));
    }
    Ok(g.subgroups()
        .into_iter()
        .filter(|h| g.is_normal_subgroup(h))
        .collect())
}

/// All Sylow ℓ-subgroups, sorted by element list.
pub fn sylow_subgroups(g: &FiniteGroup, ell: u32) -> Result<Vec<FiniteGroup>> {
    require_prime(ell)?;
    let mut part = 1;
    while g.order().is_multiple_of(part * ell as usize) {
        part *= ell as usize;
    }
    Ok(g.subgroups()
        .into_iter()
        .filter(|h| h.order() == part)
        .collect())
}

/// The Sylow ℓ-subgroup whose sorted element list is lexicographically least.
pub fn sylow_subgroup(g: &FiniteGroup, ell: u32) -> Result<FiniteGroup> {
    Ok(sylow_subgroups(g, ell)?.swap_remove(0))
}

pub fn center(g: &FiniteGroup) -> FiniteGroup {
    let elements = g
        .elements
        .iter()
        .filter(|z| g.elements.iter().all(|x| (*z * x) == (x * *z)))
        .cloned()
        .collect();
    FiniteGroup::from_elements(g.degree, elements).expect("centers of catalog groups are catalog")
}

pub fn normalizer(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotASubgroup(format!(
            "{} (degree {}) is not contained in {} (degree {})",
            h.tag, h.degree, g.tag, g.degree
        )));
    }
    let elements = g
        .elements
        .iter()
        .filter(|x| {
            let xi = x.inverse();
            h.elements.iter().all(|y| h.contains(&(&(*x * y) * &xi)))
        })
        .cloned()
        .collect();
    FiniteGroup::from_elements(g.degree, elements)
}

/// Zassenhaus: the center of one Sylow ℓ-subgroup P is the center of every
/// Sylow ℓ-subgroup containing Z(P).
///
/// Vacuously true when ℓ does not divide |G|.
pub fn is_ell_normal(g: &FiniteGroup, ell: u32) -> Result<bool> {
    let sylows = sylow_subgroups(g, ell)?;
    let z = center(&sylows[0]);
    Ok(sylows
        .iter()
        .filter(|q| z.is_subgroup_of(q))
        .all(|q| center(q) == z))
}

pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    table::find_isomorphism(&g.table(), &h.table()).is_some()
}

/// Reduced mod-ℓ cohomology vanishes exactly when |G| is prime to ℓ.
pub fn has_trivial_mod_ell_cohomology(g: &FiniteGroup, ell: u32) -> bool {
    !g.order().is_multiple_of(ell as usize)
}

/// An injective homomorphism from the catalog group `source` into the
/// catalog group `target`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: GroupTag,
    pub target: GroupTag,
    /// The image, a subgroup of `catalog_group(target)`.
    pub image: FiniteGroup,
    map: Vec<(Perm, Perm)>,
}

impl Embedding {
    /// Image of an element of `catalog_group(source)`.
    pub fn apply(&self, x: &Perm) -> &Perm {
        &self.map[self.map.binary_search_by(|(s, _)| s.cmp(x)).unwrap()].1
    }

    /// Preimage of an element of the image subgroup.
    pub fn preimage(&self, y: &Perm) -> Option<&Perm> {
        self.map.iter().find(|(_, t)| t == y).map(|(s, _)| s)
    }
}

/// All subgroups of `catalog_group(target)` isomorphic to `source`, sorted
/// as in [`FiniteGroup::subgroups`], each with a fixed identification.
///
/// Incidence records in complexes refer to embeddings by index into this list.
pub fn embeddings(source: GroupTag, target: GroupTag) -> Arc<Vec<Embedding>> {
    type Cache = HashMap<(GroupTag, GroupTag), Arc<Vec<Embedding>>>;
    static CACHE: OnceLock<Mutex<Cache>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(source, target)) {
        return hit.clone();
    }
    let src = catalog_group(source);
    let list: Vec<Embedding> = catalog_group(target)
        .subgroups()
        .into_iter()
        .filter(|h| h.tag == source)
        .map(|image| {
            // the whole group embeds by the identity, not some automorphism
            let mut map = if image.elements() == src.elements() {
                src.elements().iter().map(|x| (x.clone(), x.clone())).collect()
            } else {
                src.isomorphism_to(&image).expect("equal tags")
            };
            map.sort();
            Embedding {
                source,
                target,
                image,
                map,
            }
        })
        .collect();
    let list = Arc::new(list);
    cache
        .lock()
        .unwrap()
        .insert((source, target), list.clone());
    list
}

/// Whether `source` is isomorphic to a subgroup of `target`.
pub fn embeds_in(source: GroupTag, target: GroupTag) -> bool {
    !embeddings(source, target).is_empty()
}
