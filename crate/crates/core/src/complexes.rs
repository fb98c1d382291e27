//! Orbit-level cell complexes: one record per orbit of cells, with stabilizer
//! tags and incidence multiplicities.
//!
//! An incidence may carry an `embeddings` list of the same length as its
//! multiplicity. Entry `k` selects, for the k-th copy of the face in the
//! coface's boundary, which subgroup of the face stabilizer the coface
//! stabilizer is, as an index into [`groups::embeddings`]. A missing list
//! means index 0 for every copy.
//!
//! Orientation convention for an edge: its end faces are listed in order of
//! increasing face id, each copy in embedding-list order; the first end is the
//! tail (sign -1) and the second the head (sign +1). A loop is an edge with one
//! face of multiplicity 2.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{self, require_prime, GroupTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitCell {
    pub id: String,
    pub dim: usize,
    pub stabilizer: GroupTag,
    pub self_identified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incidence {
    pub face: String,
    pub coface: String,
    pub multiplicity: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embeddings: Vec<usize>,
}

impl Incidence {
    pub fn new(face: &str, coface: &str, multiplicity: u32) -> Incidence {
        Incidence {
            face: face.to_string(),
            coface: coface.to_string(),
            multiplicity,
            embeddings: Vec::new(),
        }
    }

    pub fn with_embeddings(mut self, embeddings: Vec<usize>) -> Incidence {
        self.embeddings = embeddings;
        self
    }

    /// The embedding index of every copy of the face, defaulting to 0.
    pub fn embedding_indices(&self) -> Vec<usize> {
        if self.embeddings.is_empty() {
            vec![0; self.multiplicity as usize]
        } else {
            self.embeddings.clone()
        }
    }
}

impl OrbitCell {
    pub fn new(id: &str, dim: usize, stabilizer: GroupTag) -> OrbitCell {
        OrbitCell {
            id: id.to_string(),
            dim,
            stabilizer,
            self_identified: false,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    rigid: bool,
    cells: Vec<OrbitCell>,
    incidences: Vec<Incidence>,
}

/// A validated orbit complex. Cells and incidences keep their input order,
/// which fixes every downstream ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitComplex {
    rigid: bool,
    cells: Vec<OrbitCell>,
    incidences: Vec<Incidence>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentType {
    Circle,
    Edge,
    GraphFive,
    GraphTwo,
    Other,
}

/// What is known about the d₂ differential of the equivariant spectral
/// sequence on a component of this type.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum D2Behaviour {
    /// Trivial in every degree.
    Trivial,
    /// Trivial on the rows q ≡ 3 mod 4.
    TrivialInDegrees3Mod4,
    /// Trivial for q ≡ 1 mod 4 exactly when trivial for q ≡ 3 mod 4; not
    /// determined by the component type alone.
    Undetermined,
}

impl ComponentType {
    /// d₂ metadata for components of the non-central 2-torsion subcomplex.
    pub fn d2_behaviour(self) -> D2Behaviour {
        match self {
            ComponentType::Edge => D2Behaviour::Trivial,
            ComponentType::GraphFive | ComponentType::GraphTwo => {
                D2Behaviour::TrivialInDegrees3Mod4
            }
            ComponentType::Circle | ComponentType::Other => D2Behaviour::Undetermined,
        }
    }
}

impl OrbitComplex {
    pub fn new(rigid: bool, cells: Vec<OrbitCell>, incidences: Vec<Incidence>) -> Result<OrbitComplex> {
        let c = OrbitComplex {
            rigid,
            cells,
            incidences,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn empty() -> OrbitComplex {
        OrbitComplex {
            rigid: true,
            cells: Vec::new(),
            incidences: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let mut index: HashMap<&str, &OrbitCell> = HashMap::new();
        for (k, cell) in self.cells.iter().enumerate() {
            if cell.id.is_empty() {
                return Err(Error::Schema(format!("cells[{k}].id: empty id")));
            }
            if index.insert(&cell.id, cell).is_some() {
                return Err(Error::Schema(format!("cells[{k}].id: duplicate id {:?}", cell.id)));
            }
        }
        let mut pairs = BTreeSet::new();
        for (k, inc) in self.incidences.iter().enumerate() {
            let lookup = |id: &str, field: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::Schema(format!("incidences[{k}].{field}: unknown cell id {id:?}")))
            };
            let face = lookup(&inc.face, "face")?;
            let coface = lookup(&inc.coface, "coface")?;
            if coface.dim != face.dim + 1 {
                return Err(Error::Schema(format!(
                    "incidences[{k}]: coface {:?} has dim {} but face {:?} has dim {}",
                    coface.id, coface.dim, face.id, face.dim
                )));
            }
            if inc.multiplicity == 0 {
                return Err(Error::Schema(format!("incidences[{k}].multiplicity: must be at least 1")));
            }
            if !pairs.insert((inc.face.as_str(), inc.coface.as_str())) {
                return Err(Error::Schema(format!(
                    "incidences[{k}]: duplicate incidence {:?} -> {:?}",
                    inc.face, inc.coface
                )));
            }
            let available = groups::embeddings(coface.stabilizer, face.stabilizer).len();
            if available == 0 {
                return Err(Error::Schema(format!(
                    "incidences[{k}]: stabilizer {} of {:?} is not a subgroup of stabilizer {} of {:?}",
                    coface.stabilizer, coface.id, face.stabilizer, face.id
                )));
            }
            if !inc.embeddings.is_empty() {
                if inc.embeddings.len() != inc.multiplicity as usize {
                    return Err(Error::Schema(format!(
                        "incidences[{k}].embeddings: length {} differs from multiplicity {}",
                        inc.embeddings.len(),
                        inc.multiplicity
                    )));
                }
                if let Some(&bad) = inc.embeddings.iter().find(|&&e| e >= available) {
                    return Err(Error::Schema(format!(
                        "incidences[{k}].embeddings: index {bad} out of range, {} has {available} subgroups isomorphic to {}",
                        face.stabilizer, coface.stabilizer
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rigid(&self) -> bool {
        self.rigid
    }

    pub fn cells(&self) -> &[OrbitCell] {
        &self.cells
    }

    pub fn incidences(&self) -> &[Incidence] {
        &self.incidences
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: &str) -> Option<&OrbitCell> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub(crate) fn require_cell(&self, id: &str) -> Result<&OrbitCell> {
        self.cell(id)
            .ok_or_else(|| Error::Precondition(format!("no cell with id {id:?}")))
    }

    /// Highest cell dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn cells_of_dim(&self, dim: usize) -> impl Iterator<Item = &OrbitCell> {
        self.cells.iter().filter(move |c| c.dim == dim)
    }

    /// Incidences in which `id` is the face.
    pub fn cofaces_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Incidence> {
        self.incidences.iter().filter(move |i| i.face == id)
    }

    /// Incidences in which `id` is the coface.
    pub fn faces_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Incidence> {
        self.incidences.iter().filter(move |i| i.coface == id)
    }

    /// All cells in the boundary closure of `id`, excluding `id` itself.
    pub fn closure_of(&self, id: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id.to_string()];
        while let Some(x) = stack.pop() {
            for inc in self.faces_of(&x) {
                if out.insert(inc.face.clone()) {
                    stack.push(inc.face.clone());
                }
            }
        }
        out
    }

    /// Σ (-1)^dim over orbits of cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// The subcomplex on the cells satisfying `keep`, with the incidences
    /// between kept cells.
    pub(crate) fn restrict(&self, keep: impl Fn(&OrbitCell) -> bool) -> OrbitComplex {
        let cells: Vec<OrbitCell> = self.cells.iter().filter(|c| keep(c)).cloned().collect();
        let ids: BTreeSet<&str> = cells.iter().map(|c| c.id.as_str()).collect();
        let incidences = self
            .incidences
            .iter()
            .filter(|i| ids.contains(i.face.as_str()) && ids.contains(i.coface.as_str()))
            .cloned()
            .collect();
        OrbitComplex {
            rigid: self.rigid,
            cells,
            incidences,
        }
    }

    /// The two ends of an edge as `(vertex id, embedding index)`, tail first.
    /// `None` unless the edge has exactly two ends counted with multiplicity.
    pub fn edge_ends(&self, edge: &str) -> Option<[(String, usize); 2]> {
        let mut faces: Vec<&Incidence> = self.faces_of(edge).collect();
        faces.sort_by(|a, b| a.face.cmp(&b.face));
        let ends: Vec<(String, usize)> = faces
            .iter()
            .flat_map(|i| i.embedding_indices().into_iter().map(|e| (i.face.clone(), e)))
            .collect();
        <[(String, usize); 2]>::try_from(ends).ok()
    }
}

pub fn parse_complex(text: &str) -> Result<OrbitComplex> {
    let raw: RawComplex = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    OrbitComplex::new(raw.rigid, raw.cells, raw.incidences)
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_complex(c: &OrbitComplex) -> String {
    let mut s = serde_json::to_string_pretty(c).expect("complexes serialize");
    s.push('\n');
    s
}

/// Cells whose stabilizer contains an element of order ℓ, i.e. whose order
/// is divisible by ℓ.
pub fn torsion_subcomplex(x: &OrbitComplex, ell: u32) -> Result<OrbitComplex> {
    require_prime(ell)?;
    if !x.rigid {
        return Err(Error::NonRigid);
    }
    Ok(x.restrict(|c| c.stabilizer.order() % ell as usize == 0))
}

/// Connected components under incidence, ordered by their first cell.
pub fn connected_components(x: &OrbitComplex) -> Vec<OrbitComplex> {
    let n = x.cells.len();
    let pos: HashMap<&str, usize> = x.cells.iter().enumerate().map(|(k, c)| (c.id.as_str(), k)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for inc in &x.incidences {
        let a = find(&mut parent, pos[inc.face.as_str()]);
        let b = find(&mut parent, pos[inc.coface.as_str()]);
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for k in 0..n {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().insert(k);
    }
    groups
        .into_values()
        .map(|members| {
            let ids: BTreeSet<&str> = members.iter().map(|&k| x.cells[k].id.as_str()).collect();
            x.restrict(|c| ids.contains(c.id.as_str()))
        })
        .collect()
}

/// Shape of a connected 1-dimensional component of a reduced torsion
/// subcomplex quotient.
pub fn classify_component(x: &OrbitComplex, ell: u32) -> Result<ComponentType> {
    require_prime(ell)?;
    if x.dimension() != Some(1) {
        return Err(Error::Precondition(format!(
            "classification needs a 1-dimensional component, got dimension {:?}",
            x.dimension()
        )));
    }
    if connected_components(x).len() != 1 {
        return Err(Error::Precondition("component is not connected".into()));
    }
    if let Some(c) = x.cells.iter().find(|c| c.stabilizer.order() % ell as usize != 0) {
        return Err(Error::Precondition(format!(
            "cell {:?} with stabilizer {} is not in the {ell}-torsion subcomplex",
            c.id, c.stabilizer
        )));
    }
    let vertices: Vec<&OrbitCell> = x.cells_of_dim(0).collect();
    let edges: Vec<&OrbitCell> = x.cells_of_dim(1).collect();
    let degree = |v: &str| -> u32 { x.cofaces_of(v).map(|i| i.multiplicity).sum() };
    let all_edges_closed = edges.iter().all(|e| x.edge_ends(&e.id).is_some());
    if !all_edges_closed {
        return Ok(ComponentType::Other);
    }
    let degrees: Vec<u32> = vertices.iter().map(|v| degree(&v.id)).collect();
    if edges.len() == vertices.len() && degrees.iter().all(|&d| d == 2) {
        return Ok(ComponentType::Circle);
    }
    let no_loops = edges.iter().all(|e| {
        let [a, b] = x.edge_ends(&e.id).unwrap();
        a.0 != b.0
    });
    if edges.len() + 1 == vertices.len() && degrees.iter().all(|&d| d <= 2) && no_loops {
        return Ok(ComponentType::Edge);
    }
    let mut essential: Vec<(u32, GroupTag)> = vertices
        .iter()
        .zip(&degrees)
        .filter(|(_, &d)| d != 2)
        .map(|(v, &d)| (d, v.stabilizer))
        .collect();
    essential.sort();
    Ok(match essential.as_slice() {
        [(3, GroupTag::D2), (3, GroupTag::D2)] => ComponentType::GraphFive,
        [(1, GroupTag::A4), (3, GroupTag::D2)] => ComponentType::GraphTwo,
        _ => ComponentType::Other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupTag::*;

    fn loop_complex(vertex: &str, edge: &str, tag: GroupTag) -> (Vec<OrbitCell>, Vec<Incidence>) {
        (
            vec![OrbitCell::new(vertex, 0, tag), OrbitCell::new(edge, 1, tag)],
            vec![Incidence::new(vertex, edge, 2)],
        )
    }

    fn path(tags: &[(GroupTag, GroupTag)], last: GroupTag) -> OrbitComplex {
        let mut cells = Vec::new();
        let mut incs = Vec::new();
        for (k, (v, e)) in tags.iter().enumerate() {
            cells.push(OrbitCell::new(&format!("v{k}"), 0, *v));
            cells.push(OrbitCell::new(&format!("e{k}"), 1, *e));
            incs.push(Incidence::new(&format!("v{k}"), &format!("e{k}"), 1));
            incs.push(Incidence::new(&format!("v{}", k + 1), &format!("e{k}"), 1));
        }
        cells.push(OrbitCell::new(&format!("v{}", tags.len()), 0, last));
        OrbitComplex::new(true, cells, incs).unwrap()
    }

    #[test]
    fn empty_document() {
        let c = parse_complex(r#"{"rigid": true, "cells": [], "incidences": []}"#).unwrap();
        assert!(c.is_empty());
        assert_eq!(connected_components(&c), vec![]);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let err = parse_complex(
            r#"{"rigid": true, "cells": [{"id": "a", "dim": 0, "stabilizer": "C2", "self_identified": false}],
                "incidences": [{"face": "a", "coface": "b", "multiplicity": 1}]}"#,
        )
        .unwrap_err();
        assert_eq!(err, Error::Schema("incidences[0].coface: unknown cell id \"b\"".into()));
        let err = parse_complex(r#"{"rigid": true, "cells": [{"id": "a", "dim": 0, "stabilizer": "Z2", "self_identified": false}], "incidences": []}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Schema(ref m) if m.contains("line 1")), "{err}");
        let err = parse_complex(r#"{"rigid": true, "cells": []}"#).unwrap_err();
        assert!(matches!(err, Error::Schema(ref m) if m.contains("incidences")));
    }

    #[test]
    fn rejects_impossible_inclusions_and_bad_embeddings() {
        let cells = vec![OrbitCell::new("v", 0, D2), OrbitCell::new("e", 1, C3)];
        let err = OrbitComplex::new(true, cells, vec![Incidence::new("v", "e", 1)]).unwrap_err();
        assert!(matches!(err, Error::Schema(ref m) if m.contains("not a subgroup")));
        let cells = vec![OrbitCell::new("v", 0, D2), OrbitCell::new("e", 1, C2)];
        let inc = Incidence::new("v", "e", 2).with_embeddings(vec![0, 3]);
        assert!(OrbitComplex::new(true, cells.clone(), vec![inc]).is_err());
        let inc = Incidence::new("v", "e", 2).with_embeddings(vec![0]);
        assert!(OrbitComplex::new(true, cells.clone(), vec![inc]).is_err());
        let inc = Incidence::new("v", "e", 2).with_embeddings(vec![0, 2]);
        assert!(OrbitComplex::new(true, cells, vec![inc]).is_ok());
    }

    #[test]
    fn round_trip() {
        let (cells, incs) = loop_complex("v", "e", C2);
        let c = OrbitComplex::new(true, cells, incs).unwrap();
        assert_eq!(parse_complex(&serialize_complex(&c)).unwrap(), c);
    }

    #[test]
    fn torsion_extraction() {
        let p = path(&[(C2, C2), (D3, C2)], C2);
        let t3 = torsion_subcomplex(&p, 3).unwrap();
        assert_eq!(t3.cells().len(), 1);
        assert_eq!(t3.cells()[0].stabilizer, D3);
        assert!(t3.incidences().is_empty());
        assert!(torsion_subcomplex(&p, 5).unwrap().is_empty());
        assert_eq!(torsion_subcomplex(&p, 2).unwrap(), p);
        let nonrigid = OrbitComplex::new(false, vec![], vec![]).unwrap();
        assert_eq!(torsion_subcomplex(&nonrigid, 2), Err(Error::NonRigid));
    }

    #[test]
    fn components_of_two_loops() {
        let (mut cells, mut incs) = loop_complex("a", "x", C2);
        let (c2, i2) = loop_complex("b", "y", C3);
        cells.extend(c2);
        incs.extend(i2);
        let c = OrbitComplex::new(true, cells, incs).unwrap();
        let comps = connected_components(&c);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].cells()[0].id, "a");
        assert_eq!(classify_component(&comps[0], 2).unwrap(), ComponentType::Circle);
        assert_eq!(classify_component(&comps[1], 3).unwrap(), ComponentType::Circle);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_component(&path(&[(D3, C3)], D3), 3).unwrap(), ComponentType::Edge);
        assert_eq!(
            classify_component(&path(&[(A4, C2)], A4), 2).unwrap(),
            ComponentType::Edge
        );
        let vertex = OrbitComplex::new(true, vec![OrbitCell::new("v", 0, C2)], vec![]).unwrap();
        assert!(classify_component(&vertex, 2).is_err());
        // a path with a coprime stabilizer is not part of the 3-torsion subcomplex
        assert!(classify_component(&path(&[(D3, C2)], D3), 3).is_err());
        // three edges at one vertex
        let star = OrbitComplex::new(
            true,
            vec![
                OrbitCell::new("c", 0, D2),
                OrbitCell::new("a", 0, C2),
                OrbitCell::new("b", 0, C2),
                OrbitCell::new("d", 0, C2),
                OrbitCell::new("ea", 1, C2),
                OrbitCell::new("eb", 1, C2),
                OrbitCell::new("ed", 1, C2),
            ],
            vec![
                Incidence::new("c", "ea", 1),
                Incidence::new("a", "ea", 1),
                Incidence::new("c", "eb", 1),
                Incidence::new("b", "eb", 1),
                Incidence::new("c", "ed", 1),
                Incidence::new("d", "ed", 1),
            ],
        )
        .unwrap();
        assert_eq!(classify_component(&star, 2).unwrap(), ComponentType::Other);
    }

    #[test]
    fn edge_ends_follow_id_order() {
        let p = path(&[(D3, C3)], D3);
        let ends = p.edge_ends("e0").unwrap();
        assert_eq!(ends[0].0, "v0");
        assert_eq!(ends[1].0, "v1");
        let (cells, incs) = loop_complex("v", "e", C2);
        let l = OrbitComplex::new(true, cells, incs).unwrap();
        assert_eq!(l.edge_ends("e").unwrap(), [("v".into(), 0), ("v".into(), 0)]);
    }

    #[test]
    fn closure_and_euler() {
        let p = path(&[(C2, C2), (D3, C2)], C2);
        assert_eq!(p.euler_characteristic(), 1);
        assert_eq!(p.closure_of("e0"), BTreeSet::from(["v0".to_string(), "v1".to_string()]));
        assert!(p.closure_of("v0").is_empty());
    }
}
