//! Dense integer matrices and the Smith normal form.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// From row vectors; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] += x;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_at(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// The submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`, adding to what
    /// is there.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &IntMatrix, sign: i64) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.add_at(r0 + i, c0 + j, sign * block.get(i, j));
            }
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.rows != self.cols || self.det().abs() != 1 {
            return None;
        }
        // Column-style Smith reduction keeps everything integral: U M V = D
        // with D = diag(±1), so M^-1 = V D U.
        let snf = smith_normal_form(self);
        let inv = snf.v.mul(&snf.d).mul(&snf.u);
        debug_assert_eq!(self.mul(&inv), IntMatrix::identity(self.rows));
        Some(inv)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_rows() {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, its non-zero
/// entries positive and each dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// The non-zero diagonal entries.
    pub fn divisors(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i))
            .take_while(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols {
            m.data.swap(a * m.cols + j, b * m.cols + j);
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows {
            m.data.swap(i * m.cols + a, i * m.cols + b);
        }
    }
}

/// row[dst] += c * row[src]
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, c: i64) {
    for j in 0..m.cols {
        let x = m.get(src, j);
        m.add_at(dst, j, c * x);
    }
}

/// col[dst] += c * col[src]
fn add_col(m: &mut IntMatrix, dst: usize, src: usize, c: i64) {
    for i in 0..m.rows {
        let x = m.get(i, src);
        m.add_at(i, dst, c * x);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols {
        let x = m.get(r, j);
        m.set(r, j, -x);
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // pivot: smallest non-zero absolute value in the lower-right block
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d.get(i, j) != 0)
                .min_by_key(|&(i, j)| (d.get(i, j).abs(), i, j));
            let Some((pi, pj)) = pivot else {
                return finish(u, d, v);
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).div_euclid(p);
                if q != 0 {
                    add_row(&mut d, i, t, -q);
                    add_row(&mut u, i, t, -q);
                }
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_euclid(p);
                if q != 0 {
                    add_col(&mut d, j, t, -q);
                    add_col(&mut v, j, t, -q);
                }
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest, otherwise fold an offending row in
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d.get(i, j) % p != 0));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, 1);
                    add_row(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    finish(u, d, v)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> Smith {
    for t in 0..d.rows.min(d.cols) {
        if d.get(t, t) < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Smith { u, d, v }
}
