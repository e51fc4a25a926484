//! Arbitrary-precision integer matrices, Smith normal form with unimodular
//! transforms, and lattice arithmetic (kernels, images, intersections,
//! preimages) used by the cohomology and spectral-sequence code.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix. Columns act on column vectors; a lattice
/// in Z^n is represented by a matrix whose columns generate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows
            .into_iter()
            .flatten()
            .map(BigInt::from)
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// The submatrix of the listed columns.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// The first `n` rows.
    pub fn top_rows(&self, n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, self.cols, |i, j| self.get(i, j).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(a, j) + q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, a) + q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith normal form: returns (U, D, V) with U*M*V = D, U and V unimodular,
/// D diagonal with nonnegative entries in a divisibility chain.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // move a nonzero entry of the trailing submatrix to the pivot
        let pivot = (t..m.rows)
            .flat_map(|i| (t..m.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !d.get(i, j).is_zero())
            .min_by_key(|&(i, j)| d.get(i, j).abs());
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
        }
        if pj != t {
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }
        'reduce: loop {
            // clear column t by Euclid row steps
            for i in t + 1..m.rows {
                while !d.get(i, t).is_zero() {
                    let q = -(d.get(i, t) / d.get(t, t));
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                    }
                }
            }
            // clear row t by Euclid column steps (may dirty the column)
            for j in t + 1..m.cols {
                while !d.get(t, j).is_zero() {
                    let q = -(d.get(t, j) / d.get(t, t));
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                }
            }
            if (t + 1..m.rows).any(|i| !d.get(i, t).is_zero()) {
                continue 'reduce;
            }
            // pivot must divide the rest of the submatrix for the chain
            for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        d.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (u, d, v)
}

/// The diagonal of an SNF result, trimmed of trailing zeros.
pub fn snf_diagonal(d: &IntMatrix) -> Vec<BigInt> {
    let n = d.rows().min(d.cols());
    let mut out: Vec<BigInt> = (0..n).map(|i| d.get(i, i).clone()).collect();
    while out.last().map_or(false, |x| x.is_zero()) {
        out.pop();
    }
    out
}

/// A basis of the integer kernel of M, as columns.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (_, d, v) = smith_normal_form(m);
    let n = m.rows.min(m.cols);
    let idx: Vec<usize> = (0..m.cols)
        .filter(|&j| j >= n || d.get(j, j).is_zero())
        .collect();
    v.select_columns(&idx)
}

/// Solve M x = b over the integers; None when no solution exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len());
    let (u, d, v) = smith_normal_form(m);
    let y = u.mul_vec(b);
    let n = m.rows.min(m.cols);
    let mut z = vec![BigInt::zero(); m.cols];
    for (i, yi) in y.iter().enumerate() {
        if i < n && !d.get(i, i).is_zero() {
            let (q, r) = yi.div_rem(d.get(i, i));
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(v.mul_vec(&z))
}

/// A basis (independent columns) of the lattice generated by the columns of
/// M, by unimodular column reduction.
pub fn image_basis(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut row = 0usize;
    let mut col = 0usize;
    while row < a.rows && col < a.cols {
        let Some(pj) = (col..a.cols).find(|&j| !a.get(row, j).is_zero()) else {
            row += 1;
            continue;
        };
        if pj != col {
            a.swap_cols(col, pj);
        }
        for j in col + 1..a.cols {
            while !a.get(row, j).is_zero() {
                let q = -(a.get(row, j) / a.get(row, col));
                a.add_col(j, col, &q);
                if !a.get(row, j).is_zero() {
                    a.swap_cols(col, j);
                }
            }
        }
        row += 1;
        col += 1;
    }
    let idx: Vec<usize> = (0..a.cols)
        .filter(|&j| (0..a.rows).any(|i| !a.get(i, j).is_zero()))
        .collect();
    a.select_columns(&idx)
}

/// Generators of the intersection of the column lattices of A and B.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows, b.rows);
    // (x, y) with A x = B y; the intersection is A x over the kernel
    let k = kernel_basis(&a.hstack(&b.neg()));
    let x = k.top_rows(a.cols);
    image_basis(&a.mul(&x))
}

/// Generators of the preimage {x : M x lies in the lattice of B}.
pub fn lattice_preimage(m: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows, b.rows);
    let k = kernel_basis(&m.hstack(&b.neg()));
    image_basis(&k.top_rows(m.cols))
}

/// Whether every column of B lies in the lattice generated by A.
pub fn lattice_contains(a: &IntMatrix, b: &IntMatrix) -> bool {
    (0..b.cols).all(|j| solve(a, &b.column(j)).is_some())
}

/// Relations of the columns of `sub` with respect to a *basis* matrix
/// `basis`: the matrix C with basis * C = sub. Errors when sub is not inside
/// the lattice of basis.
pub fn express_in_basis(basis: &IntMatrix, sub: &IntMatrix) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(basis.cols, sub.cols);
    for j in 0..sub.cols {
        let c = solve(basis, &sub.column(j)).ok_or_else(|| {
            Error::InvalidFiltration("generator outside the enclosing lattice".into())
        })?;
        for i in 0..basis.cols {
            out.set(i, j, c[i].clone());
        }
    }
    Ok(out)
}
