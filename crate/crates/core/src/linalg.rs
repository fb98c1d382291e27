//! Linear algebra over the prime field F_p.

pub(crate) fn inv_mod(x: u32, p: u32) -> u32 {
    debug_assert!(!x.is_multiple_of(p));
    let (mut r, mut base, mut e) = (1u64, x as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

/// A sparse column: `(row, value)` pairs sorted by row, values in `1..p`.
pub(crate) type SparseColumn = Vec<(u32, u32)>;

/// Rank of a matrix given column by column, by column reduction with the
/// lowest nonzero row as pivot.
pub(crate) fn sparse_rank(cols: impl Iterator<Item = SparseColumn>, nrows: usize, p: u32) -> usize {
    let mut pivots: Vec<Option<SparseColumn>> = vec![None; nrows];
    let mut rank = 0;
    for mut c in cols {
        while let Some(&(low, v)) = c.last() {
            match &pivots[low as usize] {
                None => {
                    let iv = inv_mod(v, p);
                    for e in c.iter_mut() {
                        e.1 = e.1 * iv % p;
                    }
                    pivots[low as usize] = Some(c);
                    rank += 1;
                    break;
                }
                Some(pc) => c = axpy(&c, pc, p - v, p),
            }
        }
    }
    rank
}

/// `c + a * pc` for sorted sparse columns.
fn axpy(c: &SparseColumn, pc: &SparseColumn, a: u32, p: u32) -> SparseColumn {
    let mut out = Vec::with_capacity(c.len() + pc.len());
    let (mut i, mut j) = (0, 0);
    while i < c.len() || j < pc.len() {
        if j >= pc.len() || (i < c.len() && c[i].0 < pc[j].0) {
            out.push(c[i]);
            i += 1;
        } else if i >= c.len() || pc[j].0 < c[i].0 {
            out.push((pc[j].0, pc[j].1 * a % p));
            j += 1;
        } else {
            let x = (c[i].1 + pc[j].1 * a) % p;
            if x != 0 {
                out.push((c[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense matrix over F_p, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DenseFp {
    pub rows: usize,
    pub cols: usize,
    pub p: u32,
    pub data: Vec<u32>,
}

impl DenseFp {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> DenseFp {
        DenseFp {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(rows: &[Vec<u32>], cols: usize, p: u32) -> DenseFp {
        let mut m = DenseFp::zeros(rows.len(), cols, p);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x % p;
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x % self.p;
    }

    /// Row-reduces in place and returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(k) = (r..self.rows).find(|&k| self.get(k, c) != 0) else {
                continue;
            };
            if k != r {
                for j in 0..self.cols {
                    self.data.swap(k * self.cols + j, r * self.cols + j);
                }
            }
            let iv = inv_mod(self.get(r, c), p);
            for j in c..self.cols {
                let x = self.get(r, j) * iv % p;
                self.set(r, j, x);
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && f != 0 {
                    for j in c..self.cols {
                        let x = (self.get(i, j) + (p - f) * self.get(r, j)) % p;
                        self.set(i, j, x);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// A basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u32; self.cols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - m.get(r, f)) % p;
                }
                x
            })
            .collect()
    }
}
