//! Finite abelian groups presented by cyclic factor lists, their elements,
//! homomorphisms and bilinear pairings.
//!
//! Groups built from Smith normal form carry canonical invariant factors
//! (each dividing the next, trivial factors dropped). Direct sums concatenate
//! factor lists verbatim so that coordinates stay aligned with the summands.

use crate::error::Error;
use crate::intmat::{self, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A finite abelian group `Z/d1 x Z/d2 x ... x Z/dk`, each `di >= 2`.
///
/// The empty list is the trivial group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    invariant_factors: Vec<u64>,
}

impl FinAbGroup {
    /// Build from a factor list. Factors of 1 are dropped; factors must not be 0.
    pub fn new(factors: Vec<u64>) -> Result<Self, Error> {
        if factors.iter().any(|&d| d == 0) {
            return Err(Error::Validation("group factor must be nonzero".into()));
        }
        Ok(FinAbGroup { invariant_factors: factors.into_iter().filter(|&d| d > 1).collect() })
    }

    pub fn trivial() -> Self {
        FinAbGroup { invariant_factors: vec![] }
    }

    pub fn cyclic(d: u64) -> Self {
        FinAbGroup::new(vec![d]).expect("cyclic order must be nonzero")
    }

    /// Canonical form of the diagonal of a Smith normal form.
    pub fn from_snf_diagonal(diag: &[BigInt]) -> Result<Self, Error> {
        let mut factors = Vec::new();
        for d in diag {
            if d.is_zero() {
                return Err(Error::Validation("quotient is infinite (zero SNF entry)".into()));
            }
            let v = d.abs().to_u64().ok_or_else(|| {
                Error::Validation(format!("group factor {d} does not fit in u64"))
            })?;
            if v > 1 {
                factors.push(v);
            }
        }
        FinAbGroup::new(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.iter().fold(1u64, |acc, &d| acc.lcm(&d))
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// The invariant factors of the canonical decomposition (d1 | d2 | ...),
    /// regardless of how this group's factor list is stored.
    pub fn canonical_invariant_factors(&self) -> Vec<u64> {
        if self.invariant_factors.windows(2).all(|w| w[1] % w[0] == 0) {
            return self.invariant_factors.clone();
        }
        let diag: Vec<BigInt> = self.invariant_factors.iter().map(|&d| BigInt::from(d)).collect();
        let snf = intmat::smith_decompose(&IMat::diagonal(&diag));
        snf.d
            .diag_entries()
            .iter()
            .filter_map(|d| d.to_u64())
            .filter(|&d| d > 1)
            .collect()
    }

    /// Same abstract group, possibly different presentations.
    pub fn is_isomorphic_to(&self, other: &FinAbGroup) -> bool {
        self.canonical_invariant_factors() == other.canonical_invariant_factors()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { parent: self.clone(), coords: vec![0; self.rank()] }
    }

    /// Element from integer coordinates, reduced mod the factors.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, Error> {
        if coords.len() != self.rank() {
            return Err(Error::Validation(format!(
                "coordinate length {} does not match group rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(GroupElement {
            parent: self.clone(),
            coords: coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64))
                .collect(),
        })
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0i64; self.rank()];
        coords[i] = 1;
        GroupElement { parent: self.clone(), coords }
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// All elements in the canonical lexicographic order (first coordinate
    /// most significant). `enumerate().nth(x.index())` recovers `x`.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let order = self.order();
        (0..order).map(move |idx| self.element_at(idx))
    }

    /// Element with the given lexicographic index.
    pub fn element_at(&self, mut idx: u64) -> GroupElement {
        let k = self.rank();
        let mut coords = vec![0i64; k];
        for i in (0..k).rev() {
            let d = self.invariant_factors[i];
            coords[i] = (idx % d) as i64;
            idx /= d;
        }
        GroupElement { parent: self.clone(), coords }
    }

    /// Direct sum with coordinates concatenated in order.
    pub fn direct_sum(parts: &[FinAbGroup]) -> FinAbGroup {
        FinAbGroup {
            invariant_factors: parts.iter().flat_map(|g| g.invariant_factors.clone()).collect(),
        }
    }

    fn factors_bigint(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().map(|&d| BigInt::from(d)).collect()
    }
}

/// An element of a [`FinAbGroup`], stored as reduced residue coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(skip)]
    parent: FinAbGroup,
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Lexicographic index consistent with [`FinAbGroup::elements`].
    pub fn index(&self) -> u64 {
        let mut idx = 0u64;
        for (c, d) in self.coords.iter().zip(self.parent.factors()) {
            idx = idx * d + *c as u64;
        }
        idx
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, Error> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        Ok(GroupElement {
            parent: self.parent.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .zip(self.parent.factors())
                .map(|((a, b), &d)| (a + b).rem_euclid(d as i64))
                .collect(),
        })
    }

    pub fn scale(&self, n: i64) -> GroupElement {
        GroupElement {
            parent: self.parent.clone(),
            coords: self
                .coords
                .iter()
                .zip(self.parent.factors())
                .map(|(c, &d)| {
                    let m = d as i128;
                    ((*c as i128 * n as i128).rem_euclid(m)) as i64
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> GroupElement {
        self.scale(-1)
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement, Error> {
        self.add(&other.neg())
    }

    /// Additive order.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.parent.factors())
            .map(|(&c, &d)| {
                if c == 0 {
                    1
                } else {
                    d / d.gcd(&(c as u64))
                }
            })
            .fold(1u64, |acc, o| acc.lcm(&o))
    }

    pub fn concat(&self, other: &GroupElement) -> GroupElement {
        let parent = FinAbGroup::direct_sum(&[self.parent.clone(), other.parent.clone()]);
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        GroupElement { parent, coords }
    }

    /// Split a direct-sum element back into the given parts.
    pub fn split(&self, parts: &[FinAbGroup]) -> Result<Vec<GroupElement>, Error> {
        let total: usize = parts.iter().map(|p| p.rank()).sum();
        if total != self.coords.len() {
            return Err(Error::Validation("split parts do not match element rank".into()));
        }
        let mut out = Vec::with_capacity(parts.len());
        let mut off = 0;
        for p in parts {
            out.push(GroupElement {
                parent: p.clone(),
                coords: self.coords[off..off + p.rank()].to_vec(),
            });
            off += p.rank();
        }
        Ok(out)
    }
}

/// A homomorphism between finite abelian groups, given by an integer matrix
/// acting on coordinate columns: generator `j` of the source maps to the
/// element of the target with coordinates `matrix[.][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    /// `target.rank()` rows by `source.rank()` columns
    pub matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    /// Validates that the matrix respects the source relations:
    /// `d_j * (image of generator j) = 0` in the target.
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: Vec<Vec<i64>>) -> Result<Self, Error> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Validation(format!(
                "hom matrix must be {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        for (j, &dj) in source.factors().iter().enumerate() {
            for (i, &ti) in target.factors().iter().enumerate() {
                let v = (matrix[i][j] as i128 * dj as i128).rem_euclid(ti as i128);
                if v != 0 {
                    return Err(Error::Validation(format!(
                        "matrix does not respect relation of source generator {j}: \
                         {dj} * {} != 0 mod {ti}",
                        matrix[i][j]
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let k = g.rank();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        GroupHom { source: g.clone(), target: g.clone(), matrix }
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, Error> {
        if *x.parent() != self.source {
            return Err(Error::ParentMismatch);
        }
        let coords: Vec<i64> = self
            .matrix
            .iter()
            .zip(self.target.factors())
            .map(|(row, &t)| {
                let s: i128 = row.iter().zip(x.coords()).map(|(&m, &c)| m as i128 * c as i128).sum();
                s.rem_euclid(t as i128) as i64
            })
            .collect();
        self.target.element(&coords)
    }

    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, Error> {
        if inner.target != self.source {
            return Err(Error::Validation("composition domain mismatch".into()));
        }
        let rows = self.target.rank();
        let mid = self.source.rank();
        let cols = inner.source.rank();
        let mut matrix = vec![vec![0i64; cols]; rows];
        for i in 0..rows {
            let ti = self.target.factors()[i] as i128;
            for j in 0..cols {
                let mut s: i128 = 0;
                for k in 0..mid {
                    s += self.matrix[i][k] as i128 * inner.matrix[k][j] as i128;
                }
                matrix[i][j] = s.rem_euclid(ti) as i64;
            }
        }
        GroupHom::new(inner.source.clone(), self.target.clone(), matrix)
    }

    /// True if this endo/iso is a bijection (trivial kernel and square shape).
    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        kernel_order_of_map(&self.matrix, &self.source, &self.target) == BigInt::one()
    }
}

/// Enumerate all homomorphisms from `a` into a cyclic group `c`.
///
/// The count is the product of `gcd(d_i, r)` over the factors of `a`.
pub fn hom_enumerate(a: &FinAbGroup, c: &FinAbGroup) -> Result<Vec<GroupHom>, Error> {
    if !c.is_cyclic() {
        return Err(Error::Validation("hom_enumerate requires a cyclic target".into()));
    }
    if c.is_trivial() {
        return Ok(vec![GroupHom::zero(a, c)]);
    }
    let r = c.factors()[0];
    let mut choices: Vec<Vec<i64>> = Vec::new();
    for &d in a.factors() {
        let g = d.gcd(&r);
        let step = (r / g) as i64;
        choices.push((0..g as i64).map(|k| k * step).collect());
    }
    let mut out = Vec::new();
    let mut stack = vec![0usize; a.rank()];
    loop {
        let row: Vec<i64> = stack.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
        out.push(GroupHom::new(a.clone(), c.clone(), vec![row])?);
        // odometer increment
        let mut pos = a.rank();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            stack[pos] += 1;
            if stack[pos] < choices[pos].len() {
                break;
            }
            stack[pos] = 0;
        }
    }
}

/// A bilinear pairing `left x right -> target` given by its values on
/// generator pairs. `vals[i][j]` holds the target coordinates of
/// `lambda(e_i, f_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub left: FinAbGroup,
    pub right: FinAbGroup,
    pub target: FinAbGroup,
    vals: Vec<Vec<Vec<i64>>>,
}

impl Pairing {
    /// Validates bilinearity consistency: the order of each generator must
    /// kill the corresponding row/column of values.
    pub fn new(
        left: FinAbGroup,
        right: FinAbGroup,
        target: FinAbGroup,
        vals: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self, Error> {
        if vals.len() != left.rank() || vals.iter().any(|row| row.len() != right.rank()) {
            return Err(Error::Validation("pairing value table has wrong shape".into()));
        }
        let mut reduced = vec![vec![Vec::new(); right.rank()]; left.rank()];
        for (i, &di) in left.factors().iter().enumerate() {
            for (j, &ej) in right.factors().iter().enumerate() {
                let v = target.element(&vals[i][j])?;
                if !v.scale(di as i64).is_zero() || !v.scale(ej as i64).is_zero() {
                    return Err(Error::Validation(format!(
                        "pairing value at ({i},{j}) is not killed by generator orders"
                    )));
                }
                reduced[i][j] = v.coords().to_vec();
            }
        }
        Ok(Pairing { left, right, target, vals: reduced })
    }

    /// Pairing into a cyclic group of order `r` from a plain integer table.
    pub fn cyclic(
        left: FinAbGroup,
        right: FinAbGroup,
        r: u64,
        table: Vec<Vec<i64>>,
    ) -> Result<Self, Error> {
        let target = FinAbGroup::cyclic(r);
        let vals = table
            .into_iter()
            .map(|row| row.into_iter().map(|v| if target.is_trivial() { vec![] } else { vec![v] }).collect())
            .collect();
        Pairing::new(left, right, target, vals)
    }

    /// The integer value table when the target is cyclic.
    pub fn cyclic_table(&self) -> Result<Vec<Vec<i64>>, Error> {
        if !self.target.is_cyclic() {
            return Err(Error::Validation("pairing target is not cyclic".into()));
        }
        Ok(self
            .vals
            .iter()
            .map(|row| row.iter().map(|v| v.first().copied().unwrap_or(0)).collect())
            .collect())
    }

    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, Error> {
        if *a.parent() != self.left || *b.parent() != self.right {
            return Err(Error::ParentMismatch);
        }
        let mut acc = vec![0i128; self.target.rank()];
        for (i, &ai) in a.coords().iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coords().iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let scale = ai as i128 * bj as i128;
                for (t, acc_t) in acc.iter_mut().enumerate() {
                    *acc_t += scale * self.vals[i][j][t] as i128;
                }
            }
        }
        let coords: Vec<i64> = acc
            .iter()
            .zip(self.target.factors())
            .map(|(&v, &d)| v.rem_euclid(d as i128) as i64)
            .collect();
        self.target.element(&coords)
    }

    /// The transposed pairing `right x left -> target`, `(b, a) -> lambda(a, b)`.
    pub fn opposite(&self) -> Pairing {
        let mut vals = vec![vec![Vec::new(); self.left.rank()]; self.right.rank()];
        for i in 0..self.left.rank() {
            for j in 0..self.right.rank() {
                vals[j][i] = self.vals[i][j].clone();
            }
        }
        Pairing {
            left: self.right.clone(),
            right: self.left.clone(),
            target: self.target.clone(),
            vals,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.left == self.right && (0..self.left.rank()).all(|i| {
            (0..self.left.rank()).all(|j| self.vals[i][j] == self.vals[j][i])
        })
    }

    /// Left kernel `{a : lambda(a, .) = 0}` as a subgroup of `left`.
    pub fn left_kernel(&self) -> Subgroup {
        self.side_kernel(true)
    }

    /// Right kernel `{b : lambda(., b) = 0}` as a subgroup of `right`.
    pub fn right_kernel(&self) -> Subgroup {
        self.side_kernel(false)
    }

    fn side_kernel(&self, left_side: bool) -> Subgroup {
        let (ambient, other) = if left_side {
            (&self.left, &self.right)
        } else {
            (&self.right, &self.left)
        };
        // rows indexed by (other generator j, target coordinate t)
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut moduli: Vec<BigInt> = Vec::new();
        for j in 0..other.rank() {
            for (t, &rt) in self.target.factors().iter().enumerate() {
                let row: Vec<i64> = (0..ambient.rank())
                    .map(|i| if left_side { self.vals[i][j][t] } else { self.vals[j][i][t] })
                    .collect();
                rows.push(row);
                moduli.push(BigInt::from(rt));
            }
        }
        if rows.is_empty() {
            return Subgroup::full(ambient);
        }
        let m = IMat::from_rows_i64(&rows);
        let gens = intmat::kernel_mod(&m, &moduli);
        Subgroup::from_lattice_generators(ambient, &gens)
    }

    /// The subgroup of the target generated by all pairing values.
    pub fn image_subgroup(&self) -> Subgroup {
        let gens: Vec<GroupElement> = self
            .vals
            .iter()
            .flatten()
            .map(|coords| self.target.element(coords).expect("validated on construction"))
            .collect();
        Subgroup::generated_by(&self.target, &gens)
    }
}

/// A subgroup of a finite abelian group, described by generators together
/// with the invariant factors of the subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub ambient: FinAbGroup,
    pub generators: Vec<GroupElement>,
    pub invariant_factors: Vec<u64>,
    pub order: u64,
}

impl Subgroup {
    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            generators: vec![],
            invariant_factors: vec![],
            order: 1,
        }
    }

    pub fn full(ambient: &FinAbGroup) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            generators: ambient.generators(),
            invariant_factors: ambient.canonical_invariant_factors(),
            order: ambient.order(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn generated_by(ambient: &FinAbGroup, gens: &[GroupElement]) -> Subgroup {
        let lattice: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.coords().iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        Subgroup::from_lattice_generators(ambient, &lattice)
    }

    /// Subgroup from integer vectors generating a lattice `L` with
    /// `L + D Z^k` describing the subgroup `(L + D Z^k) / D Z^k` of the
    /// ambient group `Z^k / D Z^k`.
    pub fn from_lattice_generators(ambient: &FinAbGroup, gens: &[Vec<BigInt>]) -> Subgroup {
        let k = ambient.rank();
        if k == 0 {
            return Subgroup::trivial(ambient);
        }
        let d = ambient.factors_bigint();
        let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
        for (i, di) in d.iter().enumerate() {
            let mut row = vec![BigInt::zero(); k];
            row[i] = di.clone();
            rows.push(row);
        }
        let mut stacked = IMat::zero(rows.len(), k);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                stacked[(i, j)] = v.clone();
            }
        }
        let basis = intmat::hnf_rows(&stacked);
        debug_assert_eq!(basis.rows, k, "lattice contains D Z^k so it is full rank");
        // express D = Y * basis; the quotient L / D Z^k has relation matrix Y
        let binv = basis.inverse_rational().expect("full-rank lattice basis");
        let mut y = IMat::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                // row i of D in basis coordinates: D[i][.] * binv (rows are vectors)
                let mut acc = num_rational::BigRational::zero();
                for t in 0..k {
                    let dit = if t == i { d[i].clone() } else { BigInt::zero() };
                    acc += num_rational::BigRational::from(dit) * binv[t][j].clone();
                }
                debug_assert!(acc.is_integer(), "D must lie in the lattice");
                y[(i, j)] = acc.to_integer();
            }
        }
        let snf = intmat::smith_decompose(&y);
        let invariant_factors: Vec<u64> = snf
            .d
            .diag_entries()
            .iter()
            .map(|e| e.to_u64().expect("subgroup factor fits u64"))
            .filter(|&e| e > 1)
            .collect();
        let order = invariant_factors.iter().product();
        let generators = (0..basis.rows)
            .map(|i| {
                let coords: Vec<i64> = (0..k)
                    .map(|j| {
                        let m = BigInt::from(ambient.factors()[j]);
                        let r = basis[(i, j)].mod_floor(&m);
                        r.to_i64().expect("reduced coordinate fits i64")
                    })
                    .collect();
                ambient.element(&coords).expect("coords valid")
            })
            .filter(|g| !g.is_zero())
            .collect();
        Subgroup { ambient: ambient.clone(), generators, invariant_factors, order }
    }

    /// Membership test through an integer solve.
    pub fn contains(&self, x: &GroupElement) -> bool {
        if *x.parent() != self.ambient {
            return false;
        }
        if self.generators.is_empty() {
            return x.is_zero();
        }
        let k = self.ambient.rank();
        let mut m = IMat::zero(k, self.generators.len());
        for (j, g) in self.generators.iter().enumerate() {
            for i in 0..k {
                m[(i, j)] = BigInt::from(g.coords()[i]);
            }
        }
        let t: Vec<BigInt> = x.coords().iter().map(|&c| BigInt::from(c)).collect();
        let moduli = self.ambient.factors_bigint();
        intmat::solve_mod(&m, &t, &moduli).is_some()
    }
}

/// Order of the kernel of the map given by `matrix` between two groups.
fn kernel_order_of_map(matrix: &[Vec<i64>], source: &FinAbGroup, target: &FinAbGroup) -> BigInt {
    if source.rank() == 0 {
        return BigInt::one();
    }
    let m = IMat::from_rows_i64(matrix);
    let moduli = target.factors_bigint();
    let gens = intmat::kernel_mod(&m, &moduli);
    let sub = Subgroup::from_lattice_generators(source, &gens);
    BigInt::from(sub.order)
}

/// Kernel of a hom as a subgroup of its source.
pub fn hom_kernel(h: &GroupHom) -> Subgroup {
    if h.source.rank() == 0 {
        return Subgroup::trivial(&h.source);
    }
    let m = IMat::from_rows_i64(&h.matrix);
    let moduli = h.target.factors_bigint();
    let gens = intmat::kernel_mod(&m, &moduli);
    Subgroup::from_lattice_generators(&h.source, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn element_arithmetic_mod_5() {
        let g = FinAbGroup::cyclic(5);
        let x = g.element(&[3]).unwrap();
        let y = g.element(&[4]).unwrap();
        assert_eq!(x.add(&y).unwrap(), g.element(&[2]).unwrap());
        assert_eq!(x.add(&g.zero()).unwrap(), x);
    }

    #[test]
    fn element_arithmetic_z2_z4() {
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        let x = g.element(&[1, 3]).unwrap();
        let y = g.element(&[1, 2]).unwrap();
        assert_eq!(x.add(&y).unwrap(), g.element(&[0, 1]).unwrap());
    }

    #[test]
    fn parent_mismatch_is_an_error() {
        let g3 = FinAbGroup::cyclic(3);
        let g5 = FinAbGroup::cyclic(5);
        assert!(g3.element(&[1]).unwrap().add(&g5.element(&[1]).unwrap()).is_err());
    }

    #[test]
    fn neg_via_scale() {
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        let x = g.element(&[1, 3]).unwrap();
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn hom_counts() {
        let z3 = FinAbGroup::cyclic(3);
        assert_eq!(hom_enumerate(&z3, &z3).unwrap().len(), 3);
        let z2z2 = FinAbGroup::new(vec![2, 2]).unwrap();
        assert_eq!(hom_enumerate(&z2z2, &FinAbGroup::cyclic(3)).unwrap().len(), 1);
        let z6 = FinAbGroup::cyclic(6);
        let z4 = FinAbGroup::cyclic(4);
        let homs = hom_enumerate(&z6, &z4).unwrap();
        assert_eq!(homs.len(), 2);
        // every enumerated hom really respects the relations
        for h in &homs {
            for x in z6.elements() {
                let img = h.apply(&x).unwrap();
                assert!(h.apply(&x.scale(6)).unwrap().is_zero());
                assert_eq!(img.scale(6), z4.zero());
            }
        }
    }

    #[test]
    fn hom_enumerate_yields_distinct_homs() {
        let a = FinAbGroup::new(vec![2, 6]).unwrap();
        let c = FinAbGroup::cyclic(4);
        let homs = hom_enumerate(&a, &c).unwrap();
        assert_eq!(homs.len(), 4); // gcd(2,4) * gcd(6,4)
        for i in 0..homs.len() {
            for j in i + 1..homs.len() {
                assert_ne!(homs[i].matrix, homs[j].matrix);
            }
        }
    }

    #[test]
    fn pairing_multiplication_mod_3() {
        let z3 = FinAbGroup::cyclic(3);
        let p = Pairing::cyclic(z3.clone(), z3.clone(), 3, vec![vec![1]]).unwrap();
        let two = z3.element(&[2]).unwrap();
        assert_eq!(p.eval(&two, &two).unwrap(), z3.element(&[1]).unwrap());
        assert!(p.eval(&z3.zero(), &two).unwrap().is_zero());
    }

    #[test]
    fn pairing_kernels_degenerate() {
        // lambda(a, b) = 2ab on Z/4 x Z/2 -> Z/4: left kernel {0, 2}, right kernel 0
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        let p = Pairing::cyclic(z4.clone(), z2.clone(), 4, vec![vec![2]]).unwrap();
        assert_eq!(p.left_kernel().order, 2);
        assert_eq!(p.right_kernel().order, 1);
    }

    #[test]
    fn image_subgroup_of_base_case_pairing() {
        let z6 = FinAbGroup::cyclic(6);
        let p = Pairing::cyclic(z6.clone(), z6.clone(), 6, vec![vec![1]]).unwrap();
        assert_eq!(p.image_subgroup().order, 6);
        let p2 = Pairing::cyclic(z6.clone(), z6.clone(), 6, vec![vec![2]]).unwrap();
        assert_eq!(p2.image_subgroup().order, 3);
    }

    #[test]
    fn subgroup_membership() {
        let g = FinAbGroup::new(vec![4, 4]).unwrap();
        let s = Subgroup::generated_by(&g, &[g.element(&[2, 0]).unwrap()]);
        assert_eq!(s.order, 2);
        assert!(s.contains(&g.element(&[2, 0]).unwrap()));
        assert!(!s.contains(&g.element(&[1, 0]).unwrap()));
        assert!(s.contains(&g.zero()));
    }

    #[test]
    fn index_roundtrip() {
        let g = FinAbGroup::new(vec![2, 3, 4]).unwrap();
        for (i, x) in g.elements().enumerate() {
            assert_eq!(x.index(), i as u64);
            assert_eq!(g.element_at(i as u64), x);
        }
    }

    proptest! {
        #[test]
        fn pairing_bilinear_random(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = *[2u64, 3, 4, 6, 12].get(rng.gen_range(0..5)).unwrap();
            let factors: Vec<u64> = (0..rng.gen_range(1..=3))
                .map(|_| *[2u64, 3, 4, 6].get(rng.gen_range(0..4)).unwrap())
                .collect();
            let left = FinAbGroup::new(factors.clone()).unwrap();
            let right = FinAbGroup::new(factors).unwrap();
            // random consistent table: entry at (i, j) must be killed by both orders
            let table: Vec<Vec<i64>> = left.factors().iter().map(|&di| {
                right.factors().iter().map(|&ej| {
                    let g = (r / r.gcd(&di)).lcm(&(r / r.gcd(&ej))) as i64;
                    g * rng.gen_range(0..=(r as i64 / g).max(1) - 1).max(0)
                }).collect()
            }).collect();
            let p = Pairing::cyclic(left.clone(), right.clone(), r, table).unwrap();
            let rand_elem = |rng: &mut rand_chacha::ChaCha8Rng, g: &FinAbGroup| {
                let coords: Vec<i64> = g.factors().iter().map(|&d| rng.gen_range(0..d as i64)).collect();
                g.element(&coords).unwrap()
            };
            for _ in 0..20 {
                let a = rand_elem(&mut rng, &left);
                let a2 = rand_elem(&mut rng, &left);
                let b = rand_elem(&mut rng, &right);
                let lhs = p.eval(&a.add(&a2).unwrap(), &b).unwrap();
                let rhs = p.eval(&a, &b).unwrap().add(&p.eval(&a2, &b).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
                let b2 = rand_elem(&mut rng, &right);
                let lhs = p.eval(&a, &b.add(&b2).unwrap()).unwrap();
                let rhs = p.eval(&a, &b).unwrap().add(&p.eval(&a, &b2).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn hom_count_matches_gcd_product(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            loop {
                let k = rng.gen_range(1..=3);
                let factors: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=12)).collect();
                if factors.iter().product::<u64>() > 200 {
                    continue;
                }
                let a = FinAbGroup::new(factors.clone()).unwrap();
                let r = rng.gen_range(2..=12);
                let c = FinAbGroup::cyclic(r);
                let expected: u64 = factors.iter().map(|d| d.gcd(&r)).product();
                prop_assert_eq!(hom_enumerate(&a, &c).unwrap().len() as u64, expected);
                break;
            }
        }
    }
}
