//! Torsion subcomplex reduction: merging pairs of cells across a shared face
//! and cutting off cells with a terminal face, both gated by the group
//! condition [`check_condition_b_prime`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complexes::{torsion_subcomplex, Incidence, OrbitCell, OrbitComplex};
use crate::error::{Error, Result};
use crate::groups::{
    are_isomorphic, catalog_group, center, has_trivial_mod_ell_cohomology, is_ell_normal,
    normal_subgroups, normalizer, require_prime, sylow_subgroup, FiniteGroup, GroupTag,
};

/// Which clause of the group condition held.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BPrimeClause {
    /// The ℓ-coprime quotients are isomorphic.
    #[serde(rename = "B'(1)")]
    Quotients,
    /// G_σ is ℓ-normal and G_τ is the normalizer of the center of its Sylow subgroup.
    #[serde(rename = "B'(2)")]
    SylowCenterNormalizer,
    /// Both are ℓ-normal and those normalizers differ by an ℓ-coprime kernel.
    #[serde(rename = "B'(3)")]
    NormalizerExtension,
}

impl fmt::Display for BPrimeClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BPrimeClause::Quotients => "B'(1)",
            BPrimeClause::SylowCenterNormalizer => "B'(2)",
            BPrimeClause::NormalizerExtension => "B'(3)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MergeCandidate {
    pub sigma: String,
    pub tau1: String,
    pub tau2: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Merge,
    Cut,
    /// A merge requested by the caller without the group conditions.
    ScriptedMerge,
}

/// One reduction step. `cells` is `[sigma, tau1, tau2]` for merges and
/// `[sigma, tau]` for cuts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionMove {
    pub kind: MoveKind,
    pub cells: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<BPrimeClause>,
    /// Id of the merged cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
    /// Stabilizer imposed on the merged cell by a scripted merge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<GroupTag>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionLog {
    pub moves: Vec<ReductionMove>,
}

impl ReductionLog {
    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.moves
            .iter()
            .map(|m| serde_json::to_string(m).expect("moves serialize") + "\n")
            .collect()
    }

    pub fn from_json_lines(text: &str) -> Result<ReductionLog> {
        let moves = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(k, l)| {
                serde_json::from_str(l).map_err(|e| Error::Schema(format!("log line {}: {e}", k + 1)))
            })
            .collect::<Result<_>>()?;
        Ok(ReductionLog { moves })
    }
}

/// Normalizer of the center of the chosen Sylow ℓ-subgroup.
fn sylow_center_normalizer(g: &FiniteGroup, ell: u32) -> Result<FiniteGroup> {
    let z = center(&sylow_subgroup(g, ell)?);
    normalizer(g, &z)
}

/// Quotients of `g` by its normal subgroups of order prime to ℓ.
fn coprime_quotients(g: &FiniteGroup, ell: u32) -> Result<Vec<FiniteGroup>> {
    normal_subgroups(g)?
        .iter()
        .filter(|t| has_trivial_mod_ell_cohomology(t, ell))
        .map(|t| g.quotient(t))
        .collect()
}

/// Searches all pairs of ℓ-coprime normal subgroups `T_σ ⊴ Γ_σ`, `T_τ ⊴ Γ_τ`
/// and returns the first clause that holds for some pair, trying clause 1
/// on every pair before clause 2 and clause 3.
pub fn check_condition_b_prime(
    g_sigma: GroupTag,
    g_tau: GroupTag,
    ell: u32,
) -> Result<Option<BPrimeClause>> {
    require_prime(ell)?;
    let qs = coprime_quotients(&catalog_group(g_sigma), ell)?;
    let qt = coprime_quotients(&catalog_group(g_tau), ell)?;
    let pairs = || qs.iter().flat_map(|a| qt.iter().map(move |b| (a, b)));
    if pairs().any(|(a, b)| are_isomorphic(a, b)) {
        return Ok(Some(BPrimeClause::Quotients));
    }
    for (a, b) in pairs() {
        if is_ell_normal(a, ell)? && are_isomorphic(b, &sylow_center_normalizer(a, ell)?) {
            return Ok(Some(BPrimeClause::SylowCenterNormalizer));
        }
    }
    for (a, b) in pairs() {
        if !(is_ell_normal(a, ell)? && is_ell_normal(b, ell)?) {
            continue;
        }
        let na = sylow_center_normalizer(a, ell)?;
        let nb = sylow_center_normalizer(b, ell)?;
        if coprime_quotients(&na, ell)?.iter().any(|q| are_isomorphic(q, &nb)) {
            return Ok(Some(BPrimeClause::NormalizerExtension));
        }
    }
    Ok(None)
}

/// True if some cell of dimension at least `dim(sigma) + 2` has `sigma` in
/// its boundary closure.
fn touched_from_above(x: &OrbitComplex, sigma: &OrbitCell) -> bool {
    x.cells()
        .iter()
        .filter(|c| c.dim >= sigma.dim + 2)
        .any(|c| x.closure_of(&c.id).contains(&sigma.id))
}

/// Condition A: `sigma` lies in the boundary of exactly `tau1` and `tau2`,
/// once each; nothing of dimension two or more above `sigma` touches it;
/// neither `tau` is self-identified; and their stabilizers are isomorphic.
pub fn check_condition_a(x: &OrbitComplex, sigma: &str, tau1: &str, tau2: &str) -> Result<bool> {
    let s = x.require_cell(sigma)?;
    let t1 = x.require_cell(tau1)?;
    let t2 = x.require_cell(tau2)?;
    if t1.dim != s.dim + 1 || t2.dim != s.dim + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{sigma:?} has dim {}, but {tau1:?} and {tau2:?} have dims {} and {}",
            s.dim, t1.dim, t2.dim
        )));
    }
    if tau1 == tau2 || t1.self_identified || t2.self_identified {
        return Ok(false);
    }
    let cofaces: Vec<&Incidence> = x.cofaces_of(sigma).collect();
    let pattern = cofaces.len() == 2
        && cofaces.iter().all(|i| i.multiplicity == 1)
        && cofaces.iter().any(|i| i.coface == tau1)
        && cofaces.iter().any(|i| i.coface == tau2);
    if !pattern || touched_from_above(x, s) {
        return Ok(false);
    }
    Ok(are_isomorphic(
        &catalog_group(t1.stabilizer),
        &catalog_group(t2.stabilizer),
    ))
}

/// All `(sigma, tau)` where `tau` is the only coface of `sigma`, met once,
/// and no cell of dimension two or more above `sigma` touches it; sorted by
/// `(dim sigma, sigma, tau)`.
pub fn find_terminal_cells(x: &OrbitComplex) -> Vec<(String, String)> {
    let mut out: Vec<(usize, String, String)> = x
        .cells()
        .iter()
        .filter_map(|s| {
            let cofaces: Vec<&Incidence> = x.cofaces_of(&s.id).collect();
            match cofaces.as_slice() {
                [only] if only.multiplicity == 1 && !touched_from_above(x, s) => {
                    Some((s.dim, s.id.clone(), only.coface.clone()))
                }
                _ => None,
            }
        })
        .collect();
    out.sort();
    out.into_iter().map(|(_, s, t)| (s, t)).collect()
}

fn fresh_id(x: &OrbitComplex, base: &str) -> String {
    let mut id = format!("{base}+");
    while x.cell(&id).is_some() {
        id.push('+');
    }
    id
}

/// Replaces `sigma`, `tau1`, `tau2` by one cell with the boundary of both
/// taus minus `sigma`.
fn merge_cells(x: &OrbitComplex, c: &MergeCandidate, stabilizer: GroupTag) -> Result<(OrbitComplex, String)> {
    let t1 = x.require_cell(&c.tau1)?;
    let new_id = fresh_id(x, &c.tau1);
    let keep_embeddings = stabilizer == t1.stabilizer && stabilizer == x.require_cell(&c.tau2)?.stabilizer;
    let cells: Vec<OrbitCell> = x
        .cells()
        .iter()
        .filter(|cell| cell.id != c.sigma && cell.id != c.tau2)
        .map(|cell| {
            if cell.id == c.tau1 {
                OrbitCell {
                    id: new_id.clone(),
                    dim: cell.dim,
                    stabilizer,
                    self_identified: false,
                }
            } else {
                cell.clone()
            }
        })
        .collect();
    let mut incidences: Vec<Incidence> = Vec::new();
    for inc in x.incidences() {
        if inc.face == c.sigma || inc.coface == c.sigma {
            continue;
        }
        if inc.face == c.tau1 || inc.face == c.tau2 {
            return Err(Error::Precondition(format!(
                "{:?} has coface {:?} and cannot be merged",
                inc.face, inc.coface
            )));
        }
        if inc.coface != c.tau1 && inc.coface != c.tau2 {
            incidences.push(inc.clone());
            continue;
        }
        let indices = if keep_embeddings {
            inc.embedding_indices()
        } else {
            vec![0; inc.multiplicity as usize]
        };
        match incidences
            .iter_mut()
            .find(|i| i.face == inc.face && i.coface == new_id)
        {
            Some(existing) => {
                let mut all = existing.embedding_indices();
                all.extend(indices);
                existing.multiplicity += inc.multiplicity;
                existing.embeddings = if all.iter().all(|&e| e == 0) { Vec::new() } else { all };
            }
            None => incidences.push(Incidence {
                face: inc.face.clone(),
                coface: new_id.clone(),
                multiplicity: inc.multiplicity,
                embeddings: if indices.iter().all(|&e| e == 0) { Vec::new() } else { indices },
            }),
        }
    }
    let merged = OrbitComplex::new(x.rigid(), cells, incidences)?;
    Ok((merged, new_id))
}

/// Merges `tau1` and `tau2` across `sigma`; the merged cell keeps the
/// stabilizer of `tau1` and is named after it with a `+` suffix.
pub fn merge(x: &OrbitComplex, c: &MergeCandidate, ell: u32) -> Result<(OrbitComplex, ReductionMove)> {
    if !check_condition_a(x, &c.sigma, &c.tau1, &c.tau2)? {
        return Err(Error::Precondition(format!(
            "condition A fails for {:?} between {:?} and {:?}",
            c.sigma, c.tau1, c.tau2
        )));
    }
    let s = x.require_cell(&c.sigma)?.stabilizer;
    let t = x.require_cell(&c.tau1)?.stabilizer;
    let clause = check_condition_b_prime(s, t, ell)?.ok_or_else(|| {
        Error::Precondition(format!("no clause of condition B' holds for ({s}, {t}) at {ell}"))
    })?;
    let (merged, id) = merge_cells(x, c, t)?;
    let mv = ReductionMove {
        kind: MoveKind::Merge,
        cells: vec![c.sigma.clone(), c.tau1.clone(), c.tau2.clone()],
        condition: Some(clause),
        result: Some(id),
        stabilizer: None,
    };
    Ok((merged, mv))
}

/// Merges `tau1` and `tau2` across `sigma` with a caller-chosen stabilizer,
/// bypassing the group conditions. Only the incidence pattern is checked.
/// Embedding indices of the merged cell are reset when its stabilizer
/// changes.
pub fn merge_scripted(
    x: &OrbitComplex,
    c: &MergeCandidate,
    stabilizer: GroupTag,
) -> Result<(OrbitComplex, ReductionMove)> {
    let s = x.require_cell(&c.sigma)?;
    let cofaces: BTreeSet<&str> = x.cofaces_of(&c.sigma).map(|i| i.coface.as_str()).collect();
    if c.tau1 == c.tau2 || cofaces != BTreeSet::from([c.tau1.as_str(), c.tau2.as_str()]) {
        return Err(Error::Precondition(format!(
            "{:?} is not a face of exactly {:?} and {:?}",
            c.sigma, c.tau1, c.tau2
        )));
    }
    if touched_from_above(x, s) {
        return Err(Error::Precondition(format!("{:?} is touched by higher cells", c.sigma)));
    }
    let (merged, id) = merge_cells(x, c, stabilizer)?;
    let mv = ReductionMove {
        kind: MoveKind::ScriptedMerge,
        cells: vec![c.sigma.clone(), c.tau1.clone(), c.tau2.clone()],
        condition: None,
        result: Some(id),
        stabilizer: Some(stabilizer),
    };
    Ok((merged, mv))
}

/// Removes the terminal pair `(sigma, tau)`.
pub fn cut(x: &OrbitComplex, sigma: &str, tau: &str, ell: u32) -> Result<(OrbitComplex, ReductionMove)> {
    if !find_terminal_cells(x)
        .iter()
        .any(|(s, t)| s == sigma && t == tau)
    {
        return Err(Error::Precondition(format!("({sigma:?}, {tau:?}) is not terminal")));
    }
    let gs = x.require_cell(sigma)?.stabilizer;
    let gt = x.require_cell(tau)?.stabilizer;
    let clause = check_condition_b_prime(gs, gt, ell)?.ok_or_else(|| {
        Error::Precondition(format!("no clause of condition B' holds for ({gs}, {gt}) at {ell}"))
    })?;
    let out = x.restrict(|c| c.id != sigma && c.id != tau);
    let mv = ReductionMove {
        kind: MoveKind::Cut,
        cells: vec![sigma.to_string(), tau.to_string()],
        condition: Some(clause),
        result: None,
        stabilizer: None,
    };
    Ok((out, mv))
}

/// Merge candidates satisfying condition A, sorted by `(dim sigma, sigma,
/// tau1, tau2)` with `tau1 < tau2`.
pub fn merge_candidates(x: &OrbitComplex) -> Vec<MergeCandidate> {
    let mut out: Vec<(usize, MergeCandidate)> = Vec::new();
    for s in x.cells() {
        let mut taus: Vec<&str> = x.cofaces_of(&s.id).map(|i| i.coface.as_str()).collect();
        if taus.len() != 2 {
            continue;
        }
        taus.sort();
        if check_condition_a(x, &s.id, taus[0], taus[1]).unwrap_or(false) {
            out.push((
                s.dim,
                MergeCandidate {
                    sigma: s.id.clone(),
                    tau1: taus[0].to_string(),
                    tau2: taus[1].to_string(),
                },
            ));
        }
    }
    out.sort();
    out.into_iter().map(|(_, c)| c).collect()
}

fn next_move(x: &OrbitComplex, ell: u32) -> Result<Option<(OrbitComplex, ReductionMove)>> {
    for (s, t) in find_terminal_cells(x) {
        let gs = x.require_cell(&s)?.stabilizer;
        let gt = x.require_cell(&t)?.stabilizer;
        if check_condition_b_prime(gs, gt, ell)?.is_some() {
            return cut(x, &s, &t, ell).map(Some);
        }
    }
    for c in merge_candidates(x) {
        let gs = x.require_cell(&c.sigma)?.stabilizer;
        let gt = x.require_cell(&c.tau1)?.stabilizer;
        if check_condition_b_prime(gs, gt, ell)?.is_some() {
            return merge(x, &c, ell).map(Some);
        }
    }
    Ok(None)
}

/// Extracts the ℓ-torsion subcomplex and applies cuts and merges until none
/// applies. Among available moves the one with the lowest `(dim, id)` is
/// taken, cuts before merges.
pub fn reduce(x: &OrbitComplex, ell: u32) -> Result<(OrbitComplex, ReductionLog)> {
    let mut current = torsion_subcomplex(x, ell)?;
    let mut log = ReductionLog::default();
    while let Some((next, mv)) = next_move(&current, ell)? {
        if next.cells().len() >= current.cells().len() {
            return Err(Error::Invariant("a reduction move did not shrink the complex".into()));
        }
        current = next;
        log.moves.push(mv);
    }
    Ok((current, log))
}

/// Applies one logged move, re-checking its conditions.
pub fn apply_move(x: &OrbitComplex, mv: &ReductionMove, ell: u32) -> Result<OrbitComplex> {
    let bad = || Error::Schema(format!("malformed move {mv:?}"));
    let (next, redone) = match (mv.kind, mv.cells.as_slice()) {
        (MoveKind::Cut, [s, t]) => cut(x, s, t, ell)?,
        (MoveKind::Merge, [s, t1, t2]) => merge(x, &candidate(s, t1, t2), ell)?,
        (MoveKind::ScriptedMerge, [s, t1, t2]) => {
            merge_scripted(x, &candidate(s, t1, t2), mv.stabilizer.ok_or_else(bad)?)?
        }
        _ => return Err(bad()),
    };
    if redone != *mv {
        return Err(Error::Precondition(format!(
            "replayed move {redone:?} differs from logged move {mv:?}"
        )));
    }
    Ok(next)
}

fn candidate(s: &str, t1: &str, t2: &str) -> MergeCandidate {
    MergeCandidate {
        sigma: s.to_string(),
        tau1: t1.to_string(),
        tau2: t2.to_string(),
    }
}

/// Replays a log on the ℓ-torsion subcomplex of `x`.
pub fn replay(x: &OrbitComplex, log: &ReductionLog, ell: u32) -> Result<OrbitComplex> {
    let mut current = torsion_subcomplex(x, ell)?;
    for mv in &log.moves {
        current = apply_move(&current, mv, ell)?;
    }
    Ok(current)
}

/// The whole move sequence as a list of intermediate complexes, starting
/// with the ℓ-torsion subcomplex.
pub fn replay_states(x: &OrbitComplex, log: &ReductionLog, ell: u32) -> Result<Vec<OrbitComplex>> {
    let mut states = vec![torsion_subcomplex(x, ell)?];
    for mv in &log.moves {
        let next = apply_move(states.last().unwrap(), mv, ell)?;
        states.push(next);
    }
    Ok(states)
}

/// Tags of the stabilizers involved in each logged merge, as
/// `(stab sigma, stab tau1)`.
pub fn merged_stabilizers(
    x: &OrbitComplex,
    log: &ReductionLog,
    ell: u32,
) -> Result<Vec<(GroupTag, GroupTag)>> {
    let states = replay_states(x, log, ell)?;
    let mut out = Vec::new();
    for (state, mv) in states.iter().zip(&log.moves) {
        if mv.kind == MoveKind::Merge {
            let s = state.require_cell(&mv.cells[0])?.stabilizer;
            let t = state.require_cell(&mv.cells[1])?.stabilizer;
            out.push((s, t));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::OrbitCell;
    use GroupTag::*;

    fn path3(a: GroupTag, e: GroupTag, b: GroupTag, f: GroupTag, c: GroupTag) -> OrbitComplex {
        OrbitComplex::new(
            true,
            vec![
                OrbitCell::new("u", 0, a),
                OrbitCell::new("w", 0, b),
                OrbitCell::new("x", 0, c),
                OrbitCell::new("e1", 1, e),
                OrbitCell::new("e2", 1, f),
            ],
            vec![
                Incidence::new("u", "e1", 1),
                Incidence::new("w", "e1", 1),
                Incidence::new("w", "e2", 1),
                Incidence::new("x", "e2", 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn b_prime_examples() {
        assert_eq!(check_condition_b_prime(D3, C2, 2).unwrap(), Some(BPrimeClause::Quotients));
        assert_eq!(check_condition_b_prime(C2, C2, 2).unwrap(), Some(BPrimeClause::Quotients));
        assert_eq!(check_condition_b_prime(D3, C3, 3).unwrap(), None);
        assert_eq!(check_condition_b_prime(D2, C2, 2).unwrap(), None);
        assert_eq!(check_condition_b_prime(D4, D4, 2).unwrap(), Some(BPrimeClause::Quotients));
        assert_eq!(check_condition_b_prime(S4, D4, 2).unwrap(), None);
        assert_eq!(check_condition_b_prime(S4, D2, 2).unwrap(), None);
        assert_eq!(check_condition_b_prime(A4, C2, 2).unwrap(), None);
        // A4 is 2-normal with N(Z(V4)) = A4
        assert_eq!(
            check_condition_b_prime(A4, A4, 2).unwrap(),
            Some(BPrimeClause::Quotients)
        );
        // S4/V4 ≅ D3
        assert_eq!(check_condition_b_prime(S4, D3, 3).unwrap(), Some(BPrimeClause::Quotients));
        assert!(check_condition_b_prime(D3, C2, 4).is_err());
    }

    #[test]
    fn sylow_center_normalizers() {
        let n = |g: GroupTag, ell| sylow_center_normalizer(&catalog_group(g), ell).unwrap().tag();
        assert_eq!(n(S4, 3), D3);
        assert_eq!(n(A4, 2), A4);
        assert_eq!(n(A4, 3), C3);
        assert_eq!(n(D4, 2), D4);
        assert_eq!(n(D6, 3), D6);
    }

    /// Whenever a clause holds for a catalog inclusion, the two groups have
    /// equal mod-ℓ homology dimensions as far as the bar oracle reaches.
    #[test]
    fn clauses_imply_equal_homology_dims() {
        use crate::groups::{embeds_in, mod_ell_homology_bruteforce, BAR_RESOURCE_BOUND};
        for ell in [2u32, 3] {
            for a in GroupTag::ALL {
                for b in GroupTag::ALL {
                    if !embeds_in(b, a) || check_condition_b_prime(a, b, ell).unwrap().is_none() {
                        continue;
                    }
                    let mut q_max = 1;
                    while (a.order() as u64).pow(q_max as u32 + 2) <= BAR_RESOURCE_BOUND && q_max < 3 {
                        q_max += 1;
                    }
                    let da = mod_ell_homology_bruteforce(&catalog_group(a), ell, q_max).unwrap();
                    let db = mod_ell_homology_bruteforce(&catalog_group(b), ell, q_max).unwrap();
                    assert_eq!(da.dims, db.dims, "({a}, {b}) at {ell}");
                }
            }
        }
    }

    #[test]
    fn condition_a() {
        let p = path3(C2, C2, D3, C2, C2);
        assert!(check_condition_a(&p, "w", "e1", "e2").unwrap());
        assert!(!check_condition_a(&p, "w", "e1", "e1").unwrap());
        assert!(matches!(
            check_condition_a(&p, "e1", "w", "x"),
            Err(Error::DimensionMismatch(_))
        ));
        let q = path3(S4, D2, D6, C2, S4);
        assert!(!check_condition_a(&q, "w", "e1", "e2").unwrap());
    }

    #[test]
    fn merge_path() {
        let p = path3(C2, C2, D3, C2, C2);
        let c = candidate("w", "e1", "e2");
        let (m, mv) = merge(&p, &c, 2).unwrap();
        assert_eq!(mv.condition, Some(BPrimeClause::Quotients));
        assert_eq!(m.cells().len(), 3);
        assert_eq!(m.cell("e1+").unwrap().stabilizer, C2);
        let ends = m.edge_ends("e1+").unwrap();
        assert_eq!((ends[0].0.as_str(), ends[1].0.as_str()), ("u", "x"));
        assert!(merge(&m, &candidate("u", "e1+", "e1+"), 2).is_err());
        assert_eq!(p.euler_characteristic(), m.euler_characteristic());
    }

    #[test]
    fn merge_two_edge_loop_gives_circle() {
        let x = OrbitComplex::new(
            true,
            vec![
                OrbitCell::new("a", 0, D3),
                OrbitCell::new("b", 0, D3),
                OrbitCell::new("e", 1, C2),
                OrbitCell::new("f", 1, C2),
            ],
            vec![
                Incidence::new("a", "e", 1),
                Incidence::new("b", "e", 1),
                Incidence::new("a", "f", 1),
                Incidence::new("b", "f", 1),
            ],
        )
        .unwrap();
        let (r, log) = reduce(&x, 2).unwrap();
        assert_eq!(log.moves.len(), 1);
        assert_eq!(r.cells().len(), 2);
        assert_eq!(r.incidences(), &[Incidence::new("b", "e+", 2)]);
        assert_eq!(
            crate::complexes::classify_component(&r, 2).unwrap(),
            crate::complexes::ComponentType::Circle
        );
    }

    #[test]
    fn terminal_cells_and_cuts() {
        let p = path3(C2, C2, D3, C2, D2);
        assert_eq!(
            find_terminal_cells(&p),
            vec![("u".to_string(), "e1".to_string()), ("x".to_string(), "e2".to_string())]
        );
        let (c, mv) = cut(&p, "u", "e1", 2).unwrap();
        assert_eq!(mv.kind, MoveKind::Cut);
        assert_eq!(c.cells().len(), 3);
        // leaf D2 vertex on a C2 edge stays
        assert!(cut(&p, "x", "e2", 2).is_err());
        assert!(cut(&p, "w", "e1", 2).is_err());
    }

    #[test]
    fn loops_and_bare_vertices_have_no_terminal_cells() {
        let l = OrbitComplex::new(
            true,
            vec![OrbitCell::new("v", 0, C2), OrbitCell::new("e", 1, C2)],
            vec![Incidence::new("v", "e", 2)],
        )
        .unwrap();
        assert!(find_terminal_cells(&l).is_empty());
        let v = OrbitComplex::new(true, vec![OrbitCell::new("v", 0, C2)], vec![]).unwrap();
        assert!(find_terminal_cells(&v).is_empty());
    }

    #[test]
    fn reduce_is_deterministic_and_replayable() {
        let p = path3(C2, C2, D3, C2, D2);
        let (r1, l1) = reduce(&p, 2).unwrap();
        let (r2, l2) = reduce(&p, 2).unwrap();
        assert_eq!((&r1, &l1), (&r2, &l2));
        assert_eq!(replay(&p, &l1, 2).unwrap(), r1);
        let text = l1.to_json_lines();
        assert_eq!(ReductionLog::from_json_lines(&text).unwrap(), l1);
    }

    #[test]
    fn scripted_merge_changes_stabilizer() {
        let q = path3(S4, D2, D6, C2, S4);
        let (m, mv) = merge_scripted(&q, &candidate("w", "e2", "e1"), C2).unwrap();
        assert_eq!(mv.kind, MoveKind::ScriptedMerge);
        assert_eq!(m.cell("e2+").unwrap().stabilizer, C2);
        assert_eq!(m.cells().len(), 3);
        assert!(merge_scripted(&q, &candidate("u", "e1", "e2"), C2).is_err());
    }

    #[test]
    fn nonrigid_input_is_rejected() {
        let x = OrbitComplex::new(false, vec![], vec![]).unwrap();
        assert_eq!(reduce(&x, 2).unwrap_err(), Error::NonRigid);
    }
}
