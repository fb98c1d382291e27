use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely generated abelian group Z^r ⊕ Z/d1 ⊕ … ⊕ Z/dk with
/// d1 | d2 | … | dk and every d > 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl AbelianGroup {
    pub fn free(r: usize) -> AbelianGroup {
        AbelianGroup {
            free_rank: r,
            torsion: Vec::new(),
        }
    }

    pub fn trivial() -> AbelianGroup {
        AbelianGroup::default()
    }

    /// Z^r ⊕ the cyclic groups Z/d for d in `cyclic`, rewritten in
    /// invariant-factor form. Entries 0 add a free summand, entries 1 vanish.
    pub fn new(free_rank: usize, cyclic: &[u64]) -> AbelianGroup {
        let mut free_rank = free_rank;
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in cyclic {
            if d == 0 {
                free_rank += 1;
                continue;
            }
            for (p, q) in prime_powers(d) {
                by_prime.entry(p).or_default().push(q);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (k, q) in powers.iter().enumerate() {
                torsion[k] *= q;
            }
        }
        torsion.reverse();
        AbelianGroup { free_rank, torsion }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut cyclic = self.torsion.clone();
        cyclic.extend(&other.torsion);
        AbelianGroup::new(self.free_rank + other.free_rank, &cyclic)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    /// `Z^3 ⊕ Z/2`, `Z`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses the display form; `+` is accepted in place of `⊕`.
    fn from_str(s: &str) -> Result<AbelianGroup> {
        let bad = || Error::InvalidArgument(format!("cannot parse abelian group {s:?}"));
        let s = s.trim();
        if s == "0" {
            return Ok(AbelianGroup::trivial());
        }
        let mut free = 0;
        let mut cyclic = Vec::new();
        for part in s.split(['⊕', '+']).map(str::trim) {
            if part == "Z" {
                free += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free += r.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: u64 = d.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                cyclic.push(d);
            } else {
                return Err(bad());
            }
        }
        Ok(AbelianGroup::new(free, &cyclic))
    }
}
