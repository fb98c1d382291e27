use std::fmt;

/// A permutation of `{0, .., degree-1}` stored as its image list.
///
/// Products compose right to left: `(a * b)(i) = a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u8).collect())
    }

    /// Builds a permutation from its image list; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u8>) -> Option<Perm> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen.get_mut(x as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2], &[3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[u8]]) -> Option<Perm> {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let x = x as usize;
                if x >= degree || touched[x] {
                    return None;
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = &p * self;
            k += 1;
        }
        k
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u8];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x as u8);
                x = self.0[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl std::ops::Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        Perm(rhs.0.iter().map(|&x| self.0[x as usize]).collect())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
