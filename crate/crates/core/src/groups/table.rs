use std::collections::BTreeSet;

use super::perm::Perm;

/// Cayley table of a group of order at most 32, elements indexed `0..n`.
///
/// Subsets of elements are `u32` bit masks.
#[derive(Clone, Debug)]
pub(crate) struct Table {
    pub mul: Vec<Vec<u8>>,
    pub inv: Vec<u8>,
    pub identity: usize,
    pub orders: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fingerprint {
    order: usize,
    element_orders: Vec<usize>,
    center: usize,
    derived: usize,
}

pub(crate) fn mask_members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

impl Table {
    /// Table of a closed set of permutations, indexed in the given order.
    pub fn new(elements: &[Perm]) -> Table {
        assert!(elements.len() <= 32);
        let index = |p: &Perm| {
            elements
                .iter()
                .position(|e| e == p)
                .expect("element set is closed")
        };
        let mul: Vec<Vec<u8>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index(&(a * b)) as u8).collect())
            .collect();
        let identity = elements.iter().position(|e| e.is_identity()).unwrap();
        let inv = (0..elements.len())
            .map(|a| mul[a].iter().position(|&c| c as usize == identity).unwrap() as u8)
            .collect();
        let orders = (0..elements.len())
            .map(|a| {
                let mut x = a;
                let mut k = 1;
                while x != identity {
                    x = mul[x][a] as usize;
                    k += 1;
                }
                k
            })
            .collect();
        Table {
            mul,
            inv,
            identity,
            orders,
        }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn full_mask(&self) -> u32 {
        if self.order() == 32 {
            u32::MAX
        } else {
            (1u32 << self.order()) - 1
        }
    }

    /// The subgroup generated by a set of elements.
    pub fn closure(&self, mask: u32) -> u32 {
        let mut mask = mask | (1 << self.identity);
        loop {
            let mut next = mask;
            for a in mask_members(mask) {
                for b in mask_members(mask) {
                    next |= 1 << self.mul[a][b];
                }
            }
            if next == mask {
                return mask;
            }
            mask = next;
        }
    }

    /// Every subgroup, as joins of cyclic subgroups.
    pub fn subgroup_masks(&self) -> Vec<u32> {
        let cyclic: BTreeSet<u32> = (0..self.order()).map(|a| self.closure(1 << a)).collect();
        let mut all: BTreeSet<u32> = cyclic.clone();
        let mut frontier: Vec<u32> = cyclic.iter().copied().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &a in &frontier {
                for &c in &cyclic {
                    let j = self.closure(a | c);
                    if all.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.into_iter().collect()
    }

    fn center_mask(&self) -> u32 {
        let n = self.order();
        (0..n)
            .filter(|&z| (0..n).all(|x| self.mul[z][x] == self.mul[x][z]))
            .fold(0, |m, z| m | (1 << z))
    }

    fn derived_mask(&self) -> u32 {
        let n = self.order();
        let mut m = 0u32;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul[a][b] as usize;
                let ainv_binv = self.mul[self.inv[a] as usize][self.inv[b] as usize] as usize;
                m |= 1 << self.mul[ab][ainv_binv];
            }
        }
        self.closure(m)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut element_orders = self.orders.clone();
        element_orders.sort_unstable();
        Fingerprint {
            order: self.order(),
            element_orders,
            center: self.center_mask().count_ones() as usize,
            derived: self.derived_mask().count_ones() as usize,
        }
    }

    /// A small generating set: greedily take elements of largest order not
    /// yet generated.
    pub fn generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.order()).collect();
        by_order.sort_by_key(|&a| std::cmp::Reverse(self.orders[a]));
        let mut gens = Vec::new();
        let mut span = self.closure(0);
        for a in by_order {
            if span == self.full_mask() {
                break;
            }
            if span & (1 << a) == 0 {
                gens.push(a);
                span = self.closure(span | (1 << a));
            }
        }
        gens
    }

    /// Extends `gens[i] -> images[i]` to a map on all elements, if the
    /// assignment is consistent with right multiplication by generators.
    fn extend(&self, gens: &[usize], target: &Table, images: &[usize]) -> Option<Vec<usize>> {
        const UNSET: usize = usize::MAX;
        let mut map = vec![UNSET; self.order()];
        map[self.identity] = target.identity;
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul[x][g] as usize;
                let fy = target.mul[map[x]][h] as usize;
                if map[y] == UNSET {
                    map[y] = fy;
                    queue.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        Some(map)
    }
}

/// An isomorphism `a -> b` as an index map, found by exhaustive search over
/// generator images once the fingerprints agree.
pub(crate) fn find_isomorphism(a: &Table, b: &Table) -> Option<Vec<usize>> {
    if a.fingerprint() != b.fingerprint() {
        return None;
    }
    let gens = a.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..b.order()).filter(|&h| b.orders[h] == a.orders[g]).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice
            .iter()
            .zip(&candidates)
            .map(|(&k, c)| c[k])
            .collect();
        if let Some(map) = a.extend(&gens, b, &images) {
            let hit = map.iter().fold(0u32, |m, &x| m | (1 << x));
            if hit == b.full_mask() {
                return Some(map);
            }
        }
        // odometer over candidate tuples
        let mut i = 0;
        loop {
            if i == gens.len() {
                return None;
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
