//! Dense matrices over Z/n, Smith diagonalization and linear system solving.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::arith::{ext_gcd, gcd, inv_mod, mul_mod, normalizing_unit, reduce};
use crate::error::{Error, Result};

/// Row-major dense matrix with entries stored as `u64`.
///
/// The matrix does not know its modulus; every arithmetic operation takes it
/// explicitly. Entries are expected to be reduced into `[0, n)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[u64]) -> Self {
        let k = entries.len();
        Self::from_fn(k, k, |i, j| if i == j { entries[i] } else { 0 })
    }

    pub fn column(values: &[u64]) -> Self {
        Self { rows: values.len(), cols: 1, data: values.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix, n: u64) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = (out.data[idx] + mul_mod(a, b, n)) % n;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], n: u64) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, n)) % n))
            .collect()
    }

    pub fn add(&self, other: &Matrix, n: u64) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + b) % n).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, n: u64) -> Matrix {
        let data = self.data.iter().map(|&a| (n - a % n) % n).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64, n: u64) -> Matrix {
        let data = self.data.iter().map(|&a| mul_mod(a, c, n)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Reduces row `i` modulo `orders[i]`.
    pub fn reduce_rows(&mut self, orders: &[u64]) {
        assert_eq!(orders.len(), self.rows);
        for (i, &m) in orders.iter().enumerate() {
            for j in 0..self.cols {
                let idx = i * self.cols + j;
                self.data[idx] %= m;
            }
        }
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// `[self ; other]`.
    pub fn vcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Writes `b` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64, n: u64) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = mul_mod(self.data[idx], c, n);
        }
    }

    fn scale_col(&mut self, col: usize, c: u64, n: u64) {
        for i in 0..self.rows {
            let idx = i * self.cols + col;
            self.data[idx] = mul_mod(self.data[idx], c, n);
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: u64, n: u64) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = mul_mod(self.data[src * self.cols + j], c, n);
            let idx = dst * self.cols + j;
            self.data[idx] = (self.data[idx] + v) % n;
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: u64, n: u64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = mul_mod(self.data[i * self.cols + src], c, n);
            let idx = i * self.cols + dst;
            self.data[idx] = (self.data[idx] + v) % n;
        }
    }

    /// (row_a, row_b) <- [[p, q], [r, s]] * (row_a, row_b)
    fn mix_rows(&mut self, a: usize, b: usize, m: [u64; 4], n: u64) {
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j];
            let y = self.data[b * self.cols + j];
            self.data[a * self.cols + j] = (mul_mod(m[0], x, n) + mul_mod(m[1], y, n)) % n;
            self.data[b * self.cols + j] = (mul_mod(m[2], x, n) + mul_mod(m[3], y, n)) % n;
        }
    }

    /// (col_a, col_b) <- (col_a, col_b) * [[p, q], [r, s]]
    fn mix_cols(&mut self, a: usize, b: usize, m: [u64; 4], n: u64) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a];
            let y = self.data[i * self.cols + b];
            self.data[i * self.cols + a] = (mul_mod(x, m[0], n) + mul_mod(y, m[2], n)) % n;
            self.data[i * self.cols + b] = (mul_mod(x, m[1], n) + mul_mod(y, m[3], n)) % n;
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// Normalized representative of the ideal generated by `a` in Z/n: a divisor of n
/// (`n` itself stands for the zero ideal).
pub fn ideal_generator(a: u64, n: u64) -> u64 {
    if a.is_multiple_of(n) {
        n
    } else {
        gcd(a, n)
    }
}

/// Smith normal form over Z/n: `u * a * v = diag(diag)` with `u`, `v` invertible.
///
/// Diagonal entries are divisors of n forming a divisibility chain; an entry
/// equal to n stands for a zero pivot.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<u64>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

struct SmithCalc {
    n: u64,
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl SmithCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn scale_row(&mut self, i: usize, unit: u64) {
        let n = self.n;
        let inv = inv_mod(unit, n).expect("scaling by a unit");
        self.a.scale_row(i, unit, n);
        self.u.scale_row(i, unit, n);
        self.u_inv.scale_col(i, inv, n);
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: u64) {
        let n = self.n;
        self.a.add_row(dst, src, c, n);
        self.u.add_row(dst, src, c, n);
        self.u_inv.add_col(src, dst, (n - c % n) % n, n);
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: u64) {
        let n = self.n;
        self.a.add_col(dst, src, c, n);
        self.v.add_col(dst, src, c, n);
        self.v_inv.add_row(src, dst, (n - c % n) % n, n);
    }

    fn bezout(&self, x: u64, y: u64) -> (u64, [u64; 4], [u64; 4]) {
        let n = self.n;
        let (g, s, t) = ext_gcd(x as i128, y as i128);
        let xg = x as i128 / g;
        let yg = y as i128 / g;
        let m = [reduce(s, n), reduce(t, n), reduce(-yg, n), reduce(xg, n)];
        let m_inv = [reduce(xg, n), reduce(-t, n), reduce(yg, n), reduce(s, n)];
        (g as u64, m, m_inv)
    }

    /// Combines rows `p` and `i` so that `a[p][c]` becomes their gcd and `a[i][c]` zero.
    fn bezout_rows(&mut self, p: usize, i: usize, c: usize) {
        let n = self.n;
        let (_, m, m_inv) = self.bezout(self.a.get(p, c), self.a.get(i, c));
        self.a.mix_rows(p, i, m, n);
        self.u.mix_rows(p, i, m, n);
        self.u_inv.mix_cols(p, i, m_inv, n);
    }

    fn bezout_cols(&mut self, p: usize, j: usize, r: usize) {
        let n = self.n;
        let (_, m, m_inv) = self.bezout(self.a.get(r, p), self.a.get(r, j));
        // a * E with E = [[s, -y'], [t, x']]
        let e = [m[0], m[2], m[1], m[3]];
        let e_inv = [m_inv[0], m_inv[2], m_inv[1], m_inv[3]];
        self.a.mix_cols(p, j, e, n);
        self.v.mix_cols(p, j, e, n);
        self.v_inv.mix_rows(p, j, e_inv, n);
    }

    fn run(mut self) -> Smith {
        let n = self.n;
        let (m, r) = self.a.shape();
        let k = m.min(r);
        let mut diag = Vec::with_capacity(k);
        for t in 0..k {
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..m {
                for j in t..r {
                    let x = self.a.get(i, j);
                    if x != 0 {
                        let g = ideal_generator(x, n);
                        if best.is_none_or(|(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                        }
                    }
                }
            }
            let Some((_, bi, bj)) = best else {
                diag.extend(std::iter::repeat_n(n, k - t));
                break;
            };
            self.swap_rows(t, bi);
            self.swap_cols(t, bj);
            loop {
                let unit = normalizing_unit(self.a.get(t, t), n);
                if unit != 1 {
                    self.scale_row(t, unit);
                }
                let g = self.a.get(t, t);
                let mut changed = false;
                for i in t + 1..m {
                    let x = self.a.get(i, t);
                    if x == 0 {
                        continue;
                    }
                    if x.is_multiple_of(g) {
                        self.add_row(i, t, (n - x / g) % n);
                    } else {
                        self.bezout_rows(t, i, t);
                        changed = true;
                        break;
                    }
                }
                if changed {
                    continue;
                }
                for j in t + 1..r {
                    let x = self.a.get(t, j);
                    if x == 0 {
                        continue;
                    }
                    if x.is_multiple_of(g) {
                        self.add_col(j, t, (n - x / g) % n);
                    } else {
                        self.bezout_cols(t, j, t);
                        changed = true;
                        break;
                    }
                }
                if changed {
                    continue;
                }
                let bad = (t + 1..m).find(|&i| (t + 1..r).any(|j| !self.a.get(i, j).is_multiple_of(g)));
                match bad {
                    Some(i) => self.add_row(t, i, 1),
                    None => break,
                }
            }
            diag.push(ideal_generator(self.a.get(t, t), n));
        }
        Smith { diag, u: self.u, u_inv: self.u_inv, v: self.v, v_inv: self.v_inv }
    }
}

impl Smith {
    pub fn compute(a: &Matrix, n: u64) -> Smith {
        let (m, r) = a.shape();
        let mut a = a.clone();
        for x in a.data.iter_mut() {
            *x %= n;
        }
        SmithCalc {
            n,
            a,
            u: Matrix::identity(m),
            u_inv: Matrix::identity(m),
            v: Matrix::identity(r),
            v_inv: Matrix::identity(r),
        }
        .run()
    }
}

/// All solutions of `A X = B` over Z/n: a particular solution plus generators of
/// the solution module of `A x = 0` (each generator is a column vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Matrix,
    pub kernel: Vec<Vec<u64>>,
}

/// Solves `A X = B` over Z/n. Returns `Ok(None)` for an inconsistent system.
pub fn howell_solve(a: &Matrix, b: &Matrix, n: u64) -> Result<Option<Solution>> {
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!("A has {} rows but B has {}", a.rows(), b.rows())));
    }
    let smith = Smith::compute(a, n);
    let (m, k) = a.shape();
    let c = b.cols();
    let ub = smith.u.mul(b, n);
    let mut y = Matrix::zeros(k, c);
    for i in 0..m {
        let g = if i < smith.diag.len() { smith.diag[i] } else { n };
        for col in 0..c {
            let rhs = ub.get(i, col);
            if g == n {
                if rhs != 0 {
                    return Ok(None);
                }
            } else if !rhs.is_multiple_of(g) {
                return Ok(None);
            } else {
                y.set(i, col, rhs / g);
            }
        }
    }
    let particular = smith.v.mul(&y, n);
    let mut kernel = Vec::new();
    for i in 0..k {
        let g = if i < smith.diag.len() { smith.diag[i] } else { n };
        let step = if g == n { 1 } else { n / g };
        if step % n == 0 {
            continue;
        }
        let gen: Vec<u64> = smith.v.col(i).iter().map(|&x| mul_mod(x, step, n)).collect();
        if gen.iter().any(|&x| x != 0) {
            kernel.push(gen);
        }
    }
    Ok(Some(Solution { particular, kernel }))
}
