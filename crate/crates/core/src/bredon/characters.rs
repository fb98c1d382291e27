//! Complex representation rings of the stabilizer groups: pinned character
//! tables, induction along embeddings, and the splitting base change.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::eisenstein::{Eis, OMEGA, OMEGA2};
use super::intmat::IntMatrix;
use crate::error::{Error, Result};
use crate::groups::{catalog_group, embeddings, GroupTag, Perm};

/// Character table of a catalog group with class representatives given as
/// words in its catalog generators.
#[derive(Clone, Debug)]
pub struct RepRing {
    pub group: GroupTag,
    pub names: Vec<&'static str>,
    pub class_reps: Vec<Perm>,
    pub class_sizes: Vec<usize>,
    /// `characters[i][c]`: value of character i on class c.
    pub characters: Vec<Vec<Eis>>,
    class_of: HashMap<Perm, usize>,
}

/// Ranks of the three summands of R_C(G) after the splitting base change:
/// the regular representation, the part induced from 2-torsion and the part
/// induced from 3-torsion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSizes {
    pub trivial: usize,
    pub two: usize,
    pub three: usize,
}

const CONTEXT: &str = "representation rings";

fn word(tag: GroupTag, w: &[usize]) -> Perm {
    let gens = tag.generators();
    let g = catalog_group(tag);
    w.iter()
        .fold(Perm::identity(g.degree()), |acc, &k| &acc * &gens[k])
}

/// Character names, class representatives as generator words, and values.
type PinnedTable = (Vec<&'static str>, Vec<Vec<usize>>, Vec<Vec<Eis>>);

fn pinned(tag: GroupTag) -> Result<PinnedTable> {
    let i = Eis::int;
    let (w, o) = (OMEGA, OMEGA2);
    Ok(match tag {
        GroupTag::C1 => (vec!["1"], vec![vec![]], vec![vec![i(1)]]),
        // classes e, a
        GroupTag::C2 => (
            vec!["1", "σ"],
            vec![vec![], vec![0]],
            vec![vec![i(1), i(1)], vec![i(1), i(-1)]],
        ),
        // classes e, g, g²
        GroupTag::C3 => (
            vec!["1", "χ1", "χ2"],
            vec![vec![], vec![0], vec![0, 0]],
            vec![
                vec![i(1), i(1), i(1)],
                vec![i(1), w, o],
                vec![i(1), o, w],
            ],
        ),
        // classes e, a, b, ab; χk has kernel ⟨a⟩, ⟨b⟩, ⟨ab⟩
        GroupTag::D2 => (
            vec!["1", "χa", "χb", "χab"],
            vec![vec![], vec![0], vec![1], vec![0, 1]],
            vec![
                vec![i(1), i(1), i(1), i(1)],
                vec![i(1), i(1), i(-1), i(-1)],
                vec![i(1), i(-1), i(1), i(-1)],
                vec![i(1), i(-1), i(-1), i(1)],
            ],
        ),
        // classes e, r, s
        GroupTag::D3 => (
            vec!["1", "ε", "ρ"],
            vec![vec![], vec![0], vec![1]],
            vec![
                vec![i(1), i(1), i(1)],
                vec![i(1), i(1), i(-1)],
                vec![i(2), i(-1), i(0)],
            ],
        ),
        // classes e, t, g, g² with g a 3-cycle and t a double transposition
        GroupTag::A4 => (
            vec!["1", "ψ1", "ψ2", "φ"],
            vec![vec![], vec![1], vec![0], vec![0, 0]],
            vec![
                vec![i(1), i(1), i(1), i(1)],
                vec![i(1), i(1), w, o],
                vec![i(1), i(1), o, w],
                vec![i(3), i(-1), i(0), i(0)],
            ],
        ),
        _ => return Err(Error::UnsupportedTag { tag, context: CONTEXT }),
    })
}

fn build(tag: GroupTag) -> Result<RepRing> {
    let (names, words, characters) = pinned(tag)?;
    let class_reps: Vec<Perm> = words.iter().map(|w| word(tag, w)).collect();
    let g = catalog_group(tag);
    let classes = g.conjugacy_classes();
    if classes.len() != class_reps.len() {
        return Err(Error::Invariant(format!(
            "{tag} has {} classes, the pinned table {}",
            classes.len(),
            class_reps.len()
        )));
    }
    let mut class_of = HashMap::new();
    let mut class_sizes = Vec::new();
    for (c, rep) in class_reps.iter().enumerate() {
        let class = classes.iter().find(|cl| cl.contains(rep)).unwrap();
        if class.iter().any(|x| class_of.contains_key(x)) {
            return Err(Error::Invariant(format!("{tag}: two pinned representatives are conjugate")));
        }
        class_sizes.push(class.len());
        for x in class {
            class_of.insert(x.clone(), c);
        }
    }
    Ok(RepRing {
        group: tag,
        names,
        class_reps,
        class_sizes,
        characters,
        class_of,
    })
}

impl RepRing {
    pub fn rank(&self) -> usize {
        self.characters.len()
    }

    pub fn order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn class_of(&self, x: &Perm) -> usize {
        self.class_of[x]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.characters[i][0].as_int().unwrap()
    }

    /// ⟨f, g⟩ = (1/|G|) Σ_c |c| f(c) conj(g(c)) for class functions f, g.
    pub fn inner(&self, f: &[Eis], g: &[Eis]) -> Result<i64> {
        let mut s = Eis::int(0);
        for c in 0..self.class_sizes.len() {
            s = s + Eis::int(self.class_sizes[c] as i64) * f[c] * g[c].conj();
        }
        let n = self.order() as i64;
        match s.as_int() {
            Some(x) if x % n == 0 => Ok(x / n),
            _ => Err(Error::Invariant(format!(
                "{}: inner product {s}/{n} is not an integer",
                self.group
            ))),
        }
    }
}

/// The pinned character table of `tag`, checked on first use.
pub fn rep_ring(tag: GroupTag) -> Result<Arc<RepRing>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupTag, Arc<RepRing>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&tag) {
        return Ok(hit.clone());
    }
    let ring = Arc::new(build(tag)?);
    check_orthogonality(&ring)?;
    cache.lock().unwrap().insert(tag, ring.clone());
    Ok(ring)
}

fn check_orthogonality(r: &RepRing) -> Result<()> {
    for i in 0..r.rank() {
        for j in 0..r.rank() {
            let ip = r.inner(&r.characters[i], &r.characters[j])?;
            if ip != i64::from(i == j) {
                return Err(Error::Invariant(format!(
                    "{}: ⟨{}, {}⟩ = {ip}",
                    r.group, r.names[i], r.names[j]
                )));
            }
        }
    }
    // column relations: Σ_χ χ(a) conj χ(b) = δ_ab |G|/|a|
    let n = r.order() as i64;
    for a in 0..r.class_sizes.len() {
        for b in 0..r.class_sizes.len() {
            let s = r
                .characters
                .iter()
                .fold(Eis::int(0), |acc, chi| acc + chi[a] * chi[b].conj());
            let want = if a == b { n / r.class_sizes[a] as i64 } else { 0 };
            if s != Eis::int(want) {
                return Err(Error::Invariant(format!(
                    "{}: column relation fails on classes {a}, {b}",
                    r.group
                )));
            }
        }
    }
    Ok(())
}

fn inclusion_supported(source: GroupTag, target: GroupTag) -> bool {
    use GroupTag::*;
    source == target
        || source == C1
        || matches!((source, target), (C2, D2) | (C2, D3) | (C3, D3) | (C2, A4) | (C3, A4))
}

/// The map R_C(H) → R_C(G) induced by embedding number `embedding` of
/// `source` = H into `target` = G, in character coordinates: column j is
/// Ind χ_j, with entries ⟨Ind χ_j, ψ_i⟩ = ⟨χ_j, Res ψ_i⟩ (Frobenius).
/// Restriction uses the class fusion of the actual embedding.
pub fn induction_matrix(source: GroupTag, target: GroupTag, embedding: usize) -> Result<IntMatrix> {
    if !inclusion_supported(source, target) {
        return Err(Error::InvalidArgument(format!(
            "induction from {source} to {target} is not supported"
        )));
    }
    let (h, g) = (rep_ring(source)?, rep_ring(target)?);
    let emb = embeddings(source, target);
    let e = emb.get(embedding).ok_or_else(|| {
        Error::InvalidArgument(format!("{source} has no embedding number {embedding} in {target}"))
    })?;
    let mut m = IntMatrix::zeros(g.rank(), h.rank());
    for (i, psi) in g.characters.iter().enumerate() {
        let res: Vec<Eis> = h
            .class_reps
            .iter()
            .map(|x| psi[g.class_of(e.apply(x))])
            .collect();
        for (j, chi) in h.characters.iter().enumerate() {
            m.set(i, j, h.inner(chi, &res)?);
        }
    }
    Ok(m)
}

/// Ind χ as a class function on G, summed directly over conjugates:
/// Ind χ(g) = (1/|H|) Σ_{x ∈ G, x g x⁻¹ ∈ H} χ(x g x⁻¹).
fn induced_character(source: GroupTag, target: GroupTag, embedding: usize, j: usize) -> Result<Vec<Eis>> {
    let (h, g) = (rep_ring(source)?, rep_ring(target)?);
    let e = &embeddings(source, target)[embedding];
    let gg = catalog_group(target);
    let mut out = Vec::new();
    for rep in &g.class_reps {
        let mut s = Eis::int(0);
        for x in gg.elements() {
            let y = &(x * rep) * &x.inverse();
            if let Some(pre) = e.preimage(&y) {
                s = s + h.characters[j][h.class_of(pre)];
            }
        }
        let n = h.order() as i64;
        if s.a % n != 0 || s.b % n != 0 {
            return Err(Error::Invariant(format!("Ind from {source} to {target} is not integral")));
        }
        out.push(Eis { a: s.a / n, b: s.b / n });
    }
    Ok(out)
}

/// Checks ⟨Ind χ, ψ⟩_G computed from explicitly induced characters against
/// the reciprocity matrix, for every supported inclusion and embedding.
pub fn verify_frobenius() -> Result<()> {
    for &source in SUPPORTED {
        for &target in SUPPORTED {
            if !inclusion_supported(source, target) {
                continue;
            }
            let g = rep_ring(target)?;
            for k in 0..embeddings(source, target).len() {
                let m = induction_matrix(source, target, k)?;
                for j in 0..m.cols() {
                    let ind = induced_character(source, target, k, j)?;
                    for (i, psi) in g.characters.iter().enumerate() {
                        if g.inner(&ind, psi)? != m.get(i, j) {
                            return Err(Error::Invariant(format!(
                                "Frobenius reciprocity fails for {source} in {target} (#{k})"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Stabilizer types with pinned character tables.
pub const SUPPORTED: &[GroupTag] = &[
    GroupTag::C1,
    GroupTag::C2,
    GroupTag::C3,
    GroupTag::D2,
    GroupTag::D3,
    GroupTag::A4,
];

pub fn block_sizes(tag: GroupTag) -> Result<BlockSizes> {
    let (two, three) = match tag {
        GroupTag::C1 => (0, 0),
        GroupTag::C2 => (1, 0),
        GroupTag::C3 => (0, 2),
        GroupTag::D2 => (3, 0),
        GroupTag::D3 => (1, 1),
        GroupTag::A4 => (1, 2),
        _ => return Err(Error::UnsupportedTag { tag, context: CONTEXT }),
    };
    Ok(BlockSizes { trivial: 1, two, three })
}

/// Base change of R_C(G): column k is the k-th new basis vector in
/// character coordinates, ordered trivial block, 2-part, 3-part.
///
/// In every case the trivial character is replaced by the regular
/// representation. The rest:
///
/// * C2, C3, D2: the non-trivial characters.
/// * D3: ε + ρ (2-part), ρ (3-part).
/// * A4: φ (2-part), ψ1 + φ and ψ2 + φ (3-part).
///
/// For A4, subtracting the trivial character from ψ1 and ψ2 would not make
/// induction from C3 block-diagonal, since Ind χ1 = ψ1 + φ.
pub fn splitting_basis(tag: GroupTag) -> Result<IntMatrix> {
    let r = rep_ring(tag)?;
    let n = r.rank();
    let unit = |k: usize| -> Vec<i64> { (0..n).map(|i| i64::from(i == k)).collect() };
    let sum = |a: Vec<i64>, b: Vec<i64>| -> Vec<i64> { a.iter().zip(&b).map(|(x, y)| x + y).collect() };
    let regular: Vec<i64> = (0..n).map(|i| r.degree(i)).collect();
    let columns: Vec<Vec<i64>> = match tag {
        GroupTag::C1 | GroupTag::C2 | GroupTag::C3 | GroupTag::D2 => {
            std::iter::once(regular).chain((1..n).map(unit)).collect()
        }
        GroupTag::D3 => vec![regular, sum(unit(1), unit(2)), unit(2)],
        GroupTag::A4 => vec![regular, unit(3), sum(unit(1), unit(3)), sum(unit(2), unit(3))],
        _ => return Err(Error::UnsupportedTag { tag, context: CONTEXT }),
    };
    Ok(IntMatrix::from_rows(&columns, n).transpose())
}

/// The block (0 trivial, 1 two-part, 2 three-part) of each new basis vector.
pub fn block_labels(tag: GroupTag) -> Result<Vec<usize>> {
    let b = block_sizes(tag)?;
    Ok(std::iter::repeat_n(0, b.trivial)
        .chain(std::iter::repeat_n(1, b.two))
        .chain(std::iter::repeat_n(2, b.three))
        .collect())
}

/// The induction matrix in the split bases: B_G⁻¹ · Ind · B_H.
pub fn split_induction_matrix(source: GroupTag, target: GroupTag, embedding: usize) -> Result<IntMatrix> {
    let m = induction_matrix(source, target, embedding)?;
    let bg = splitting_basis(target)?
        .inverse_unimodular()
        .ok_or_else(|| Error::Invariant(format!("splitting basis of {target} is not unimodular")))?;
    Ok(bg.mul(&m).mul(&splitting_basis(source)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_orthogonality() {
        let ranks: Vec<usize> = SUPPORTED.iter().map(|&t| rep_ring(t).unwrap().rank()).collect();
        assert_eq!(ranks, vec![1, 2, 3, 4, 3, 4]);
        let d3 = rep_ring(GroupTag::D3).unwrap();
        assert_eq!((0..3).map(|i| d3.degree(i)).collect::<Vec<_>>(), vec![1, 1, 2]);
        let a4 = rep_ring(GroupTag::A4).unwrap();
        assert_eq!((0..4).map(|i| a4.degree(i)).collect::<Vec<_>>(), vec![1, 1, 1, 3]);
        assert!(rep_ring(GroupTag::S4).is_err());
    }

    #[test]
    fn frobenius_both_ways() {
        verify_frobenius().unwrap();
    }

    #[test]
    fn induction_examples() {
        for &t in SUPPORTED {
            assert_eq!(induction_matrix(t, t, 0).unwrap(), IntMatrix::identity(rep_ring(t).unwrap().rank()));
        }
        // degrees double from C2 to D2
        let m = induction_matrix(GroupTag::C2, GroupTag::D2, 0).unwrap();
        let d2 = rep_ring(GroupTag::D2).unwrap();
        for j in 0..2 {
            let deg: i64 = (0..4).map(|i| m.get(i, j) * d2.degree(i)).sum();
            assert_eq!(deg, 2);
        }
        // Ind from C3 of a non-trivial character is ρ
        let m = induction_matrix(GroupTag::C3, GroupTag::D3, 0).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1, 0, 0], vec![1, 0, 0], vec![0, 1, 1]]);
        assert!(induction_matrix(GroupTag::D2, GroupTag::A4, 0).is_err());
    }

    #[test]
    fn splitting_is_block_diagonal_and_unimodular() {
        for &t in SUPPORTED {
            assert_eq!(splitting_basis(t).unwrap().det().abs(), 1);
        }
        assert_eq!(splitting_basis(GroupTag::C1).unwrap(), IntMatrix::identity(1));
        assert_eq!(
            splitting_basis(GroupTag::C3).unwrap().to_rows(),
            vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]
        );
        for &s in SUPPORTED {
            for &t in SUPPORTED {
                if !inclusion_supported(s, t) {
                    continue;
                }
                let (ls, lt) = (block_labels(s).unwrap(), block_labels(t).unwrap());
                for k in 0..embeddings(s, t).len() {
                    let m = split_induction_matrix(s, t, k).unwrap();
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            if lt[i] != ls[j] {
                                assert_eq!(m.get(i, j), 0, "{s} in {t} #{k} at ({i},{j})");
                            }
                        }
                    }
                }
            }
        }
    }
}
