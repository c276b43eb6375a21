//! Monogenic number-field orders `Z[th]` presented by a monic integer
//! minimal polynomial, exact element arithmetic in the power basis, traces,
//! and a small parser for human-writable element expressions like
//! `"3 + 2*th^2 - 1/5"`.

use crate::error::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A field element in the power basis `1, th, ..., th^{n-1}`.
pub type QElem = Vec<BigRational>;

/// A monogenic order `Z[th]` with `th` a root of a monic integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberFieldOrder {
    /// Coefficients `c_0 + c_1 x + ... + c_n x^n`, `c_n = 1`.
    min_poly: Vec<BigInt>,
    /// Reductions of `th^k` for `k = 0 .. 2n-2` to the power basis.
    power_table: Vec<Vec<BigRational>>,
}

impl NumberFieldOrder {
    /// Degree of the field over the rationals.
    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// Build from a monic integer polynomial of degree >= 1. Irreducibility
    /// is the caller's responsibility; only the absence of small rational
    /// roots is checked (any rational root of a monic integer polynomial is
    /// an integer dividing the constant term).
    pub fn new(min_poly: Vec<BigInt>) -> Result<Self, Error> {
        if min_poly.len() < 2 {
            return Err(Error::Validation("minimal polynomial must have degree >= 1".into()));
        }
        if min_poly.len() > 16 {
            return Err(Error::Validation("polynomial degree is implausibly large".into()));
        }
        if !min_poly.last().unwrap().is_one() {
            return Err(Error::Validation("minimal polynomial must be monic".into()));
        }
        let n = min_poly.len() - 1;
        if n > 1 {
            let c0 = &min_poly[0];
            if c0.is_zero() {
                return Err(Error::Validation(
                    "polynomial has the rational root 0; not irreducible".into(),
                ));
            }
            let eval = |x: &BigInt| -> BigInt {
                let mut acc = BigInt::zero();
                for c in min_poly.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            };
            let bound = c0.abs().min(BigInt::from(1000));
            let mut div = BigInt::one();
            while div <= bound {
                if (c0 % &div).is_zero() {
                    for cand in [div.clone(), -div.clone()] {
                        if eval(&cand).is_zero() {
                            return Err(Error::Validation(format!(
                                "polynomial has the rational root {cand}; not irreducible"
                            )));
                        }
                    }
                }
                div += 1;
            }
        }
        // th^n = -(c_0 + c_1 th + ... + c_{n-1} th^{n-1}); extend to th^{2n-2}
        let mut power_table: Vec<Vec<BigRational>> = Vec::with_capacity(2 * n - 1);
        for k in 0..n {
            let mut row = vec![BigRational::zero(); n];
            row[k] = BigRational::one();
            power_table.push(row);
        }
        for k in n..(2 * n - 1) {
            let prev = power_table[k - 1].clone();
            let mut row = vec![BigRational::zero(); n];
            let overflow = prev[n - 1].clone();
            for i in (1..n).rev() {
                row[i] = prev[i - 1].clone();
            }
            for (i, c) in min_poly.iter().take(n).enumerate() {
                row[i] -= overflow.clone() * BigRational::from(c.clone());
            }
            power_table.push(row);
        }
        Ok(NumberFieldOrder { min_poly, power_table })
    }

    /// The rationals as a degree-1 field (`th = 0`).
    pub fn rationals() -> Self {
        NumberFieldOrder::new(vec![BigInt::zero(), BigInt::one()]).expect("x is monic")
    }

    /// The maximal order of a quadratic field `Q(sqrt(m))` for squarefree
    /// `m != 0, 1`: `th = sqrt(m)` when `m = 2, 3 mod 4` and
    /// `th = (1 + sqrt(m))/2` when `m = 1 mod 4`.
    pub fn quadratic(m: i64) -> Result<Self, Error> {
        if m == 0 || m == 1 {
            return Err(Error::Validation("need squarefree m different from 0 and 1".into()));
        }
        if m.rem_euclid(4) == 1 {
            NumberFieldOrder::new(vec![
                BigInt::from(-(m - 1) / 4),
                BigInt::from(-1),
                BigInt::one(),
            ])
        } else {
            NumberFieldOrder::new(vec![BigInt::from(-m), BigInt::zero(), BigInt::one()])
        }
    }

    pub fn zero(&self) -> QElem {
        vec![BigRational::zero(); self.degree()]
    }

    pub fn one(&self) -> QElem {
        let mut v = self.zero();
        v[0] = BigRational::one();
        v
    }

    pub fn theta(&self) -> QElem {
        let mut v = self.zero();
        if self.degree() > 1 {
            v[1] = BigRational::one();
        } else {
            // degree 1: th is the rational root of the polynomial
            v[0] = BigRational::from(-self.min_poly[0].clone());
        }
        v
    }

    pub fn from_integer(&self, k: i64) -> QElem {
        let mut v = self.zero();
        v[0] = BigRational::from(BigInt::from(k));
        v
    }

    pub fn add(&self, x: &QElem, y: &QElem) -> QElem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &QElem, y: &QElem) -> QElem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, x: &QElem, c: &BigRational) -> QElem {
        x.iter().map(|a| a * c).collect()
    }

    pub fn mul(&self, x: &QElem, y: &QElem) -> QElem {
        let n = self.degree();
        let mut out = vec![BigRational::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (t, p) in self.power_table[i + j].iter().enumerate() {
                    out[t] += &c * p;
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &QElem, k: u32) -> QElem {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Matrix of multiplication by `x` on the power basis (columns are the
    /// images of `th^j`).
    pub fn mul_matrix(&self, x: &QElem) -> Vec<Vec<BigRational>> {
        let n = self.degree();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut basis = self.zero();
            basis[j] = BigRational::one();
            cols.push(self.mul(x, &basis));
        }
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m[i][j] = col[i].clone();
            }
        }
        m
    }

    /// Absolute trace `Tr(x)` as the trace of the multiplication matrix.
    pub fn trace(&self, x: &QElem) -> BigRational {
        let m = self.mul_matrix(x);
        let mut t = BigRational::zero();
        for (i, row) in m.iter().enumerate() {
            t += &row[i];
        }
        t
    }

    /// Field norm `N(x)` as the determinant of the multiplication matrix.
    pub fn norm(&self, x: &QElem) -> BigRational {
        rational_det(&self.mul_matrix(x))
    }

    /// Derivative of the minimal polynomial evaluated at `th`.
    pub fn poly_derivative_at_theta(&self) -> QElem {
        let theta = self.theta();
        let mut acc = self.zero();
        for (k, c) in self.min_poly.iter().enumerate().skip(1) {
            let coef = BigRational::from(BigInt::from(k as i64) * c);
            let term = self.scale(&self.pow(&theta, (k - 1) as u32), &coef);
            acc = self.add(&acc, &term);
        }
        acc
    }

    pub fn is_zero_elem(&self, x: &QElem) -> bool {
        x.iter().all(|c| c.is_zero())
    }

    /// Parse an element expression: sums of terms `q`, `q*th^k`, `th^k`,
    /// with rational `q` written as `a` or `a/b`. Whitespace is ignored.
    pub fn parse_element(&self, input: &str) -> Result<QElem, Error> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element expression".into()));
        }
        if s.len() > 4096 {
            return Err(Error::Parse("element expression too long".into()));
        }
        let mut acc = self.zero();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let mut sign = BigRational::one();
            loop {
                if let Some(r) = rest.strip_prefix('+') {
                    rest = r;
                } else if let Some(r) = rest.strip_prefix('-') {
                    sign = -sign;
                    rest = r;
                } else {
                    break;
                }
            }
            if rest.is_empty() {
                return Err(Error::Parse("dangling sign".into()));
            }
            let (term, r) = self.parse_term(rest)?;
            acc = self.add(&acc, &self.scale(&term, &sign));
            rest = r;
            if !rest.is_empty() && !rest.starts_with('+') && !rest.starts_with('-') {
                return Err(Error::Parse(format!("unexpected input at `{rest}`")));
            }
        }
        Ok(acc)
    }

    /// One term: `factor ('*' factor)*` where a factor is a rational literal
    /// or a power of `th`.
    fn parse_term<'a>(&self, input: &'a str) -> Result<(QElem, &'a str), Error> {
        let (mut acc, mut rest) = self.parse_factor(input)?;
        while let Some(r) = rest.strip_prefix('*') {
            let (f, r2) = self.parse_factor(r)?;
            acc = self.mul(&acc, &f);
            rest = r2;
        }
        Ok((acc, rest))
    }

    fn parse_factor<'a>(&self, input: &'a str) -> Result<(QElem, &'a str), Error> {
        if let Some(rest) = input.strip_prefix("th") {
            let (exp, rest) = if let Some(r) = rest.strip_prefix('^') {
                let (e, r2) = take_uint(r)?;
                if e > 64 {
                    return Err(Error::Parse("exponent larger than 64".into()));
                }
                (e as u32, r2)
            } else {
                (1, rest)
            };
            return Ok((self.pow(&self.theta(), exp), rest));
        }
        let (num, rest) = take_uint(input)?;
        let (q, rest) = if let Some(r) = rest.strip_prefix('/') {
            let (den, r2) = take_uint(r)?;
            if den == 0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            (BigRational::new(BigInt::from(num), BigInt::from(den)), r2)
        } else {
            (BigRational::from(BigInt::from(num)), rest)
        };
        let mut v = self.zero();
        v[0] = q;
        Ok((v, rest))
    }
}

fn take_uint(input: &str) -> Result<(u64, &str), Error> {
    let end = input.find(|c: char| !c.is_ascii_digit()).unwrap_or(input.len());
    if end == 0 {
        return Err(Error::Parse(format!("expected a number at `{input}`")));
    }
    if end > 18 {
        return Err(Error::Parse("number literal too long".into()));
    }
    let v: u64 = input[..end].parse().map_err(|e| Error::Parse(format!("bad number: {e}")))?;
    Ok((v, &input[end..]))
}

/// Exact determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&i| !a[i][col].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= p.clone();
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &p;
            for j in col..n {
                let sub = &f * &a[col][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// Exact solve `M x = b` over the rationals; `None` if singular.
pub fn rational_solve(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..=n {
            a[col][j] = &a[col][j] / &p;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..=n {
                let sub = &f * &a[col][j];
                a[i][j] -= sub;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt2_field_arithmetic() {
        let k = NumberFieldOrder::quadratic(2).unwrap();
        let th = k.theta();
        // th^2 = 2
        let sq = k.mul(&th, &th);
        assert_eq!(sq, vec![q(2, 1), q(0, 1)]);
        assert_eq!(k.trace(&th), q(0, 1));
        assert_eq!(k.trace(&k.one()), q(2, 1));
        assert_eq!(k.norm(&th), q(-2, 1));
    }

    #[test]
    fn golden_field_uses_half_integers() {
        // m = 5 = 1 mod 4: th = (1 + sqrt 5)/2 with th^2 = th + 1
        let k = NumberFieldOrder::quadratic(5).unwrap();
        let th = k.theta();
        let sq = k.mul(&th, &th);
        assert_eq!(sq, vec![q(1, 1), q(1, 1)]);
        assert_eq!(k.trace(&th), q(1, 1));
        assert_eq!(k.norm(&th), q(-1, 1));
    }

    #[test]
    fn different_generators() {
        let k2 = NumberFieldOrder::quadratic(2).unwrap();
        // f'(th) = 2 th, norm -(2^2 * 2) = -8
        let d = k2.poly_derivative_at_theta();
        assert_eq!(d, vec![q(0, 1), q(2, 1)]);
        assert_eq!(k2.norm(&d).abs(), q(8, 1));

        let k5 = NumberFieldOrder::quadratic(5).unwrap();
        // f'(th) = 2 th - 1 = sqrt 5, norm -5
        let d = k5.poly_derivative_at_theta();
        assert_eq!(d, vec![q(-1, 1), q(2, 1)]);
        assert_eq!(k5.norm(&d).abs(), q(5, 1));
    }

    #[test]
    fn rationals_as_degree_one() {
        let k = NumberFieldOrder::rationals();
        assert_eq!(k.degree(), 1);
        assert_eq!(k.trace(&k.from_integer(7)), q(7, 1));
        assert!(k.is_zero_elem(&k.theta()));
        assert_eq!(k.poly_derivative_at_theta(), vec![q(1, 1)]);
    }

    #[test]
    fn cubic_field_trace() {
        // x^3 + x^2 - 2x - 1 (the real subfield of the 7th cyclotomic field)
        let k = NumberFieldOrder::new(
            [-1i64, -2, 1, 1].iter().map(|&c| BigInt::from(c)).collect(),
        )
        .unwrap();
        let th = k.theta();
        // trace of th is minus the x^2 coefficient
        assert_eq!(k.trace(&th), q(-1, 1));
        // th^3 = -th^2 + 2 th + 1
        let cube = k.pow(&th, 3);
        assert_eq!(cube, vec![q(1, 1), q(2, 1), q(-1, 1)]);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(NumberFieldOrder::new(vec![BigInt::from(2)]).is_err()); // constant
        assert!(NumberFieldOrder::new(vec![BigInt::from(1), BigInt::from(2)]).is_err()); // not monic
        // x^2 - 1 has the rational roots +-1
        assert!(
            NumberFieldOrder::new(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]).is_err()
        );
        // x^2 has the root 0
        assert!(
            NumberFieldOrder::new(vec![BigInt::zero(), BigInt::zero(), BigInt::one()]).is_err()
        );
    }

    #[test]
    fn parser_accepts_standard_forms() {
        let k = NumberFieldOrder::quadratic(2).unwrap();
        assert_eq!(k.parse_element("7").unwrap(), vec![q(7, 1), q(0, 1)]);
        assert_eq!(k.parse_element("3+th").unwrap(), vec![q(3, 1), q(1, 1)]);
        assert_eq!(k.parse_element("-th").unwrap(), vec![q(0, 1), q(-1, 1)]);
        assert_eq!(k.parse_element("1/2*th").unwrap(), vec![q(0, 1), q(1, 2)]);
        assert_eq!(k.parse_element("th^2").unwrap(), vec![q(2, 1), q(0, 1)]);
        assert_eq!(k.parse_element("2*th - th").unwrap(), vec![q(0, 1), q(1, 1)]);
        assert_eq!(k.parse_element(" 1 + 2 * th ").unwrap(), vec![q(1, 1), q(2, 1)]);
        assert_eq!(k.parse_element("--1").unwrap(), vec![q(1, 1), q(0, 1)]);
    }

    #[test]
    fn parser_rejects_junk() {
        let k = NumberFieldOrder::quadratic(2).unwrap();
        for bad in ["", "+", "th^", "1/0", "x", "2**3", "th^999", "1+", "3//4", "th@"] {
            assert!(k.parse_element(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn solve_and_det_roundtrip() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        assert_eq!(rational_det(&m), q(5, 1));
        let x = rational_solve(&m, &[q(4, 1), q(7, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(2, 1)]);
    }
}
