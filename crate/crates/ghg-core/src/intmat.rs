//! Exact integer-matrix algorithms: Smith and Hermite normal forms, determinants,
//! and linear solving over Z and Z/m.
//!
//! Everything here runs on `BigInt` entries; pivot growth in normal-form
//! computations makes fixed-width arithmetic unsafe even for small inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IMat::zero(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn diag_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut out = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
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

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * &self[(src, j)];
            self[(dst, j)] += add;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
                match swap {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Exact inverse over Q; `None` if singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from(self[(i, j)].clone())).collect())
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= p.clone();
                inv[col][j] /= p.clone();
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let av = a[col][j].clone();
                    let iv = inv[col][j].clone();
                    a[i][j] -= f.clone() * av;
                    inv[i][j] -= f.clone() * iv;
                }
            }
        }
        Some(inv)
    }

    /// Inverse of a unimodular matrix, exact over Z. Panics if not unimodular.
    pub fn inverse_unimodular(&self) -> IMat {
        let inv = self.inverse_rational().expect("matrix is singular");
        let n = self.rows;
        let mut out = IMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                assert!(inv[i][j].is_integer(), "matrix is not unimodular");
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a Smith decomposition: `u * m * v = d` with `u`, `v` unimodular
/// and `d` diagonal with each diagonal entry dividing the next.
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

/// Smith normal form with transformation matrices.
pub fn smith_decompose(m: &IMat) -> Snf {
    let mut d = m.clone();
    let mut u = IMat::identity(m.rows);
    let mut v = IMat::identity(m.cols);
    let n = m.rows.min(m.cols);

    for t in 0..n {
        if !move_smallest_pivot(&mut d, &mut u, &mut v, t) {
            break; // remaining submatrix is zero
        }
        loop {
            clear_column(&mut d, &mut u, t);
            clear_row(&mut d, &mut v, t);
            if col_cleared(&d, t) && row_cleared(&d, t) {
                // pivot must divide the whole remaining block
                match find_nondivisible(&d, t) {
                    Some(i) => {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                    }
                    None => break,
                }
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    // enforce the divisibility chain on the diagonal
    loop {
        let mut changed = false;
        for i in 0..n.saturating_sub(1) {
            let a = d[(i, i)].clone();
            let b = d[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                // zeros sink to the end
                d.swap_rows(i, i + 1);
                u.swap_rows(i, i + 1);
                d.swap_cols(i, i + 1);
                v.swap_cols(i, i + 1);
                changed = true;
            } else if !a.is_zero() && !b.is_zero() && !(&b % &a).is_zero() {
                pairwise_divisibility_fix(&mut d, &mut u, &mut v, i, i + 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Snf { u, d, v }
}

fn move_smallest_pivot(d: &mut IMat, u: &mut IMat, v: &mut IMat, t: usize) -> bool {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            if !d[(i, j)].is_zero()
                && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
            {
                best = Some((i, j));
            }
        }
    }
    match best {
        Some((i, j)) => {
            d.swap_rows(t, i);
            u.swap_rows(t, i);
            d.swap_cols(t, j);
            v.swap_cols(t, j);
            true
        }
        None => false,
    }
}

fn clear_column(d: &mut IMat, u: &mut IMat, t: usize) {
    loop {
        // pick smallest nonzero entry in the column to the pivot seat
        let mut smallest = t;
        for i in t + 1..d.rows {
            if !d[(i, t)].is_zero()
                && (d[(smallest, t)].is_zero() || d[(i, t)].abs() < d[(smallest, t)].abs())
            {
                smallest = i;
            }
        }
        if smallest != t {
            d.swap_rows(t, smallest);
            u.swap_rows(t, smallest);
        }
        let mut done = true;
        for i in t + 1..d.rows {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = -(&d[(i, t)] / &d[(t, t)]);
            d.add_row_multiple(i, t, &q);
            u.add_row_multiple(i, t, &q);
            if !d[(i, t)].is_zero() {
                done = false;
            }
        }
        if done {
            return;
        }
    }
}

fn clear_row(d: &mut IMat, v: &mut IMat, t: usize) {
    loop {
        let mut smallest = t;
        for j in t + 1..d.cols {
            if !d[(t, j)].is_zero()
                && (d[(t, smallest)].is_zero() || d[(t, j)].abs() < d[(t, smallest)].abs())
            {
                smallest = j;
            }
        }
        if smallest != t {
            d.swap_cols(t, smallest);
            v.swap_cols(t, smallest);
        }
        let mut done = true;
        for j in t + 1..d.cols {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = -(&d[(t, j)] / &d[(t, t)]);
            d.add_col_multiple(j, t, &q);
            v.add_col_multiple(j, t, &q);
            if !d[(t, j)].is_zero() {
                done = false;
            }
        }
        if done {
            return;
        }
    }
}

fn col_cleared(d: &IMat, t: usize) -> bool {
    (t + 1..d.rows).all(|i| d[(i, t)].is_zero())
}

fn row_cleared(d: &IMat, t: usize) -> bool {
    (t + 1..d.cols).all(|j| d[(t, j)].is_zero())
}

fn find_nondivisible(d: &IMat, t: usize) -> Option<usize> {
    let p = &d[(t, t)];
    for i in t + 1..d.rows {
        for j in t + 1..d.cols {
            if !(&d[(i, j)] % p).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

/// Replace diag (a, b) at positions (i, j) by (gcd(a,b), lcm(a,b)) with
/// unimodular updates derived from a Bezout identity.
fn pairwise_divisibility_fix(d: &mut IMat, u: &mut IMat, v: &mut IMat, i: usize, j: usize) {
    let a = d[(i, i)].clone();
    let b = d[(j, j)].clone();
    let eg = a.extended_gcd(&b);
    let (g, x, y) = (eg.gcd, eg.x, eg.y);
    let l = &a * &b / &g;
    let a_g = &a / &g;
    let b_g = &b / &g;

    // left factor rows (i, j): [[x, y], [-b/g, a/g]]
    apply_two_row_transform(d, i, j, &x, &y, &(-&b_g), &a_g);
    apply_two_row_transform(u, i, j, &x, &y, &(-&b_g), &a_g);
    // right factor cols (i, j): [[1, -y*b/g], [1, x*a/g]]
    let r01 = -(&y * &b_g);
    let r11 = &x * &a_g;
    apply_two_col_transform(d, i, j, &BigInt::one(), &r01, &BigInt::one(), &r11);
    apply_two_col_transform(v, i, j, &BigInt::one(), &r01, &BigInt::one(), &r11);

    d[(i, i)] = g;
    d[(j, j)] = l;
    d[(i, j)] = BigInt::zero();
    d[(j, i)] = BigInt::zero();
}

/// rows (i, j) <- [[m00, m01], [m10, m11]] * rows (i, j)
fn apply_two_row_transform(
    m: &mut IMat,
    i: usize,
    j: usize,
    m00: &BigInt,
    m01: &BigInt,
    m10: &BigInt,
    m11: &BigInt,
) {
    for c in 0..m.cols {
        let a = m[(i, c)].clone();
        let b = m[(j, c)].clone();
        m[(i, c)] = m00 * &a + m01 * &b;
        m[(j, c)] = m10 * &a + m11 * &b;
    }
}

/// cols (i, j) <- cols (i, j) * [[m00, m01], [m10, m11]]
fn apply_two_col_transform(
    m: &mut IMat,
    i: usize,
    j: usize,
    m00: &BigInt,
    m01: &BigInt,
    m10: &BigInt,
    m11: &BigInt,
) {
    for r in 0..m.rows {
        let a = m[(r, i)].clone();
        let b = m[(r, j)].clone();
        m[(r, i)] = &a * m00 + &b * m10;
        m[(r, j)] = &a * m01 + &b * m11;
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// Returns a basis in lower-triangular-by-pivot shape: the k-th returned row
/// has its pivot in the k-th pivot column, zeros to the right of it, and
/// entries below earlier pivots reduced into `[0, pivot)`. For a full-rank
/// square lattice this is lower triangular with positive diagonal, so the
/// form is canonical and lattice equality is plain row-by-row equality.
pub fn hnf_rows(m: &IMat) -> IMat {
    let mut w = m.clone();
    let rows = w.rows;
    let cols = w.cols;
    let mut pivot_row = rows; // rows [pivot_row..] are finished pivots
    let mut pivot_cols: Vec<usize> = Vec::new();

    for col in (0..cols).rev() {
        // gcd the entries of the unfinished rows in this column into one row
        loop {
            let mut smallest: Option<usize> = None;
            for i in 0..pivot_row {
                if !w[(i, col)].is_zero()
                    && smallest.map_or(true, |s| w[(i, col)].abs() < w[(s, col)].abs())
                {
                    smallest = Some(i);
                }
            }
            let s = match smallest {
                Some(s) => s,
                None => break,
            };
            let mut others = false;
            for i in 0..pivot_row {
                if i == s || w[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&w[(i, col)] / &w[(s, col)]);
                w.add_row_multiple(i, s, &q);
                if !w[(i, col)].is_zero() {
                    others = true;
                }
            }
            if !others {
                // move the gcd row to the pivot seat
                pivot_row -= 1;
                w.swap_rows(s, pivot_row);
                if w[(pivot_row, col)].is_negative() {
                    w.negate_row(pivot_row);
                }
                // reduce this column in the already-finished rows
                for i in pivot_row + 1..rows {
                    if w[(i, col)].is_zero() {
                        continue;
                    }
                    let q = -(w[(i, col)].div_floor(&w[(pivot_row, col)]));
                    w.add_row_multiple(i, pivot_row, &q);
                }
                pivot_cols.push(col);
                break;
            }
        }
        if pivot_row == 0 {
            break;
        }
    }

    let rank = rows - pivot_row;
    let mut out = IMat::zero(rank, cols);
    for k in 0..rank {
        // finished rows sit at pivot_row.. already in ascending pivot-column order
        let src = pivot_row + k;
        for j in 0..cols {
            out[(k, j)] = w[(src, j)].clone();
        }
    }
    out
}

/// Solve `m * x = t` over the integers. Returns one solution if any exists.
pub fn solve_integer(m: &IMat, t: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, t.len());
    let snf = smith_decompose(m);
    let ut = snf.u.mul_vec(t);
    let n = m.cols;
    let mut w = vec![BigInt::zero(); n];
    for i in 0..m.rows {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ut[i].is_zero() {
                return None;
            }
        } else {
            if !(&ut[i] % &di).is_zero() {
                return None;
            }
            w[i] = &ut[i] / &di;
        }
    }
    Some(snf.v.mul_vec(&w))
}

/// Solve `m * x ≡ t (mod moduli)` where `moduli[i]` applies to row `i`
/// (a modulus of zero means the equation holds exactly over Z).
pub fn solve_mod(m: &IMat, t: &[BigInt], moduli: &[BigInt]) -> Option<Vec<BigInt>> {
    let aug = augment_with_moduli(m, moduli);
    let sol = solve_integer(&aug, t)?;
    Some(sol[..m.cols].to_vec())
}

/// Generators of the lattice `{x in Z^n : m * x ≡ 0 (mod moduli)}`.
pub fn kernel_mod(m: &IMat, moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let aug = augment_with_moduli(m, moduli);
    let snf = smith_decompose(&aug);
    let n = aug.cols;
    let mut gens = Vec::new();
    for j in 0..n {
        let dj = if j < aug.rows.min(n) { snf.d[(j, j)].clone() } else { BigInt::zero() };
        if dj.is_zero() {
            gens.push((0..m.cols).map(|i| snf.v[(i, j)].clone()).collect());
        }
    }
    gens
}

fn augment_with_moduli(m: &IMat, moduli: &[BigInt]) -> IMat {
    assert_eq!(m.rows, moduli.len());
    let mut aug = IMat::zero(m.rows, m.cols + m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols + i)] = moduli[i].clone();
    }
    aug
}
