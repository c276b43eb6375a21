//! GHGs of arithmetic type: fractional ideals of a monogenic order as
//! integer lattices in Hermite normal form, the different, the trace pairing
//! on `I / fI x f^{-1} Ihat / Ihat`, residue rings `O/f`, and the
//! identification of the symplectic group with `SL_2(O/f)` through a choice
//! of module bases.

use crate::abelian::{FinAbGroup, Pairing, Subgroup};
use crate::error::Error;
use crate::field::{rational_solve, NumberFieldOrder, QElem};
use crate::ghg::{GhgDescriptor, RingGenAction, RingStructure};
use crate::intmat::{self, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A fractional ideal as `(1/denom) L` for a full-rank integer lattice `L`
/// spanned by the rows of `num` (coordinates in the power basis), kept in
/// Hermite normal form with `gcd(content(num), denom) = 1`, so equality of
/// ideals is equality of representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracIdeal {
    order: NumberFieldOrder,
    num: IMat,
    denom: BigInt,
}

impl FracIdeal {
    pub fn order(&self) -> &NumberFieldOrder {
        &self.order
    }

    pub fn num_basis(&self) -> &IMat {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    fn normalized(order: &NumberFieldOrder, rows: IMat, denom: BigInt) -> Result<Self, Error> {
        let n = order.degree();
        let h = intmat::hnf_rows(&rows);
        if h.rows < n {
            return Err(Error::Validation("zero or degenerate ideal".into()));
        }
        let mut content = denom.clone();
        for i in 0..h.rows {
            for j in 0..h.cols {
                content = content.gcd(&h[(i, j)]);
            }
        }
        if content.is_zero() {
            return Err(Error::Validation("zero ideal".into()));
        }
        let mut num = IMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                num[(i, j)] = &h[(i, j)] / &content;
            }
        }
        Ok(FracIdeal { order: order.clone(), num, denom: denom / content })
    }

    /// The ring of integers `O` itself.
    pub fn one(order: &NumberFieldOrder) -> Self {
        FracIdeal {
            order: order.clone(),
            num: IMat::identity(order.degree()),
            denom: BigInt::one(),
        }
    }

    /// The ideal generated by the given field elements.
    pub fn from_generators(order: &NumberFieldOrder, gens: &[QElem]) -> Result<Self, Error> {
        let n = order.degree();
        let mut denom = BigInt::one();
        for g in gens {
            for c in g {
                denom = denom.lcm(c.denom());
            }
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for g in gens {
            for j in 0..n {
                let mut basis = order.zero();
                basis[j] = BigRational::one();
                let prod = order.mul(g, &basis);
                rows.push(
                    prod.iter()
                        .map(|c| {
                            let v = c * BigRational::from(denom.clone());
                            debug_assert!(v.is_integer());
                            v.to_integer()
                        })
                        .collect(),
                );
            }
        }
        if rows.is_empty() {
            return Err(Error::Validation("zero ideal".into()));
        }
        let mut m = IMat::zero(rows.len(), n);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        FracIdeal::normalized(order, m, denom)
    }

    pub fn principal(order: &NumberFieldOrder, x: &QElem) -> Result<Self, Error> {
        FracIdeal::from_generators(order, std::slice::from_ref(x))
    }

    /// Basis vectors as field elements.
    pub fn basis_elements(&self) -> Vec<QElem> {
        let n = self.order.degree();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::new(self.num[(i, j)].clone(), self.denom.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, other: &FracIdeal) -> Result<FracIdeal, Error> {
        if self.order != other.order {
            return Err(Error::Validation("ideals over different orders".into()));
        }
        let n = self.order.degree();
        let mut rows = IMat::zero(n * n, n);
        for i in 0..n {
            let a: QElem =
                (0..n).map(|t| BigRational::from(self.num[(i, t)].clone())).collect();
            for j in 0..n {
                let b: QElem =
                    (0..n).map(|t| BigRational::from(other.num[(j, t)].clone())).collect();
                let prod = self.order.mul(&a, &b);
                for t in 0..n {
                    debug_assert!(prod[t].is_integer());
                    rows[(i * n + j, t)] = prod[t].to_integer();
                }
            }
        }
        FracIdeal::normalized(&self.order, rows, &self.denom * &other.denom)
    }

    /// The inverse ideal `{x : x I lies in O}`, verified by multiplying
    /// back to `O`.
    pub fn inverse(&self) -> Result<FracIdeal, Error> {
        let n = self.order.degree();
        // stack the multiplication matrices of the basis elements
        let mut stacked = IMat::zero(n * n, n);
        for i in 0..n {
            let a: QElem =
                (0..n).map(|t| BigRational::from(self.num[(i, t)].clone())).collect();
            let m = self.order.mul_matrix(&a);
            for r in 0..n {
                for c in 0..n {
                    debug_assert!(m[r][c].is_integer());
                    stacked[(i * n + r, c)] = m[r][c].to_integer();
                }
            }
        }
        // x with stacked * x in denom * Z^{n^2}, through the Smith form
        let snf = intmat::smith_decompose(&stacked);
        let mut lcm = BigInt::one();
        for j in 0..n {
            let dj = snf.d[(j, j)].clone();
            if dj.is_zero() {
                return Err(Error::Validation("ideal is degenerate".into()));
            }
            lcm = lcm.lcm(&dj);
        }
        let mut rows = IMat::zero(n, n);
        for j in 0..n {
            let scale = &self.denom * (&lcm / &snf.d[(j, j)]);
            for t in 0..n {
                rows[(j, t)] = &snf.v[(t, j)] * &scale;
            }
        }
        let inv = FracIdeal::normalized(&self.order, rows, lcm)?;
        let product = self.mul(&inv)?;
        if product != FracIdeal::one(&self.order) {
            return Err(Error::Validation(
                "ideal is not invertible over this order (order not maximal?)".into(),
            ));
        }
        Ok(inv)
    }

    /// Ideal norm `|det| / denom^n` as a rational number.
    pub fn norm(&self) -> BigRational {
        let n = self.order.degree();
        let det = self.num.det().abs();
        let mut denom_pow = BigInt::one();
        for _ in 0..n {
            denom_pow *= &self.denom;
        }
        BigRational::new(det, denom_pow)
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// The positive generator of `(this ideal) intersect Q`.
    pub fn intersect_rationals(&self) -> BigRational {
        // rows are in pivot-triangular HNF: row 0 is (H00, 0, ..., 0)
        BigRational::new(self.num[(0, 0)].clone(), self.denom.clone())
    }

    pub fn contains(&self, x: &QElem) -> bool {
        let n = self.order.degree();
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from(self.num[(j, i)].clone())).collect())
            .collect();
        let target: Vec<BigRational> =
            x.iter().map(|c| c * BigRational::from(self.denom.clone())).collect();
        match rational_solve(&m, &target) {
            Some(sol) => sol.iter().all(|c| c.is_integer()),
            None => false,
        }
    }

    /// Scale by a nonzero rational number.
    pub fn scale(&self, q: &BigRational) -> Result<FracIdeal, Error> {
        if q.is_zero() {
            return Err(Error::Validation("zero ideal".into()));
        }
        let mut rows = self.num.clone();
        for i in 0..rows.rows {
            for j in 0..rows.cols {
                rows[(i, j)] = &rows[(i, j)] * q.numer();
            }
        }
        FracIdeal::normalized(&self.order, rows, &self.denom * q.denom())
    }
}

/// The absolute different of a monogenic maximal order: `(f'(th))`.
pub fn different(order: &NumberFieldOrder) -> Result<FracIdeal, Error> {
    FracIdeal::principal(order, &order.poly_derivative_at_theta())
}

/// The finite ring `O/f` for an integral ideal `f`, with residues stored as
/// canonical reduced coordinate vectors.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    order: NumberFieldOrder,
    hnf: IMat,
    sizes: Vec<u64>,
}

impl ResidueRing {
    pub fn new(order: &NumberFieldOrder, modulus: &FracIdeal) -> Result<Self, Error> {
        if !modulus.is_integral() {
            return Err(Error::Validation("residue ring needs an integral ideal".into()));
        }
        let n = order.degree();
        let hnf = modulus.num.clone();
        let sizes: Vec<u64> = (0..n)
            .map(|i| {
                hnf[(i, i)]
                    .to_u64()
                    .ok_or_else(|| Error::Validation("residue ring too large".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(ResidueRing { order: order.clone(), hnf, sizes })
    }

    pub fn cardinality(&self) -> u64 {
        self.sizes.iter().product()
    }

    /// Canonical residue of an integer coordinate vector.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.sizes.len();
        let mut x = v.to_vec();
        for k in (0..n).rev() {
            let q = x[k].div_floor(&self.hnf[(k, k)]);
            if q.is_zero() {
                continue;
            }
            for j in 0..=k {
                let sub = &q * &self.hnf[(k, j)];
                x[j] -= sub;
            }
        }
        x
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.sizes.len()]
    }

    pub fn one(&self) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = BigInt::one();
        self.reduce(&v)
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, x: &[BigInt]) -> Vec<BigInt> {
        let neg: Vec<BigInt> = x.iter().map(|a| -a).collect();
        self.reduce(&neg)
    }

    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let xe: QElem = x.iter().map(|c| BigRational::from(c.clone())).collect();
        let ye: QElem = y.iter().map(|c| BigRational::from(c.clone())).collect();
        let prod = self.order.mul(&xe, &ye);
        let coords: Vec<BigInt> = prod
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        self.reduce(&coords)
    }

    pub fn sub(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.add(x, &self.neg(y))
    }

    /// Enumerate every residue once.
    pub fn elements(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        let total = self.cardinality();
        (0..total).map(move |mut idx| {
            let n = self.sizes.len();
            let mut v = vec![BigInt::zero(); n];
            for k in (0..n).rev() {
                v[k] = BigInt::from(idx % self.sizes[k]);
                idx /= self.sizes[k];
            }
            self.reduce(&v)
        })
    }
}

/// The data of an arithmetic tuple `(I, f)` with optional enlarged centre.
#[derive(Debug, Clone)]
pub struct ArithTuple {
    pub order: NumberFieldOrder,
    pub ideal: FracIdeal,
    pub frak_f: FracIdeal,
    /// The integer with `f intersect Z = fZ`.
    pub f: u64,
    /// Optional enlarged central order (a multiple of `f`).
    pub r: Option<u64>,
}

impl ArithTuple {
    pub fn new(
        order: NumberFieldOrder,
        ideal: FracIdeal,
        frak_f: FracIdeal,
        r: Option<u64>,
    ) -> Result<Self, Error> {
        if !frak_f.is_integral() {
            return Err(Error::Validation("f must be an integral ideal".into()));
        }
        let fq = frak_f.intersect_rationals();
        if !fq.is_integer() {
            return Err(Error::Internal("integral ideal with fractional Z-intersection".into()));
        }
        let f = fq
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Validation("conductor too large".into()))?;
        if f < 2 {
            return Err(Error::Validation("f must be a proper nonzero ideal".into()));
        }
        if let Some(r) = r {
            if r % f != 0 {
                return Err(Error::Validation(format!(
                    "enlarged centre {r} must be a multiple of f = {f}"
                )));
            }
        }
        Ok(ArithTuple { order, ideal, frak_f, f, r })
    }
}

/// A quotient of one lattice by a sublattice, with coordinates adapted to
/// the invariant-factor decomposition.
#[derive(Debug, Clone)]
pub struct QuotientModule {
    order: NumberFieldOrder,
    pub group: FinAbGroup,
    /// All adapted basis vectors of the top lattice, as field elements.
    adapted: Vec<QElem>,
    /// Invariant factor per adapted basis vector (1 allowed).
    divisors: Vec<BigInt>,
    /// Indices of adapted vectors with divisor > 1, aligned with `group`.
    kept: Vec<usize>,
}

impl QuotientModule {
    /// Build `top / bottom` for lattices with `bottom` inside `top`.
    pub fn new(
        order: &NumberFieldOrder,
        top: &FracIdeal,
        bottom: &FracIdeal,
    ) -> Result<Self, Error> {
        let n = order.degree();
        // bottom basis in top coordinates: solve basis(top)^T c = row_b
        let top_t: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::new(top.num[(j, i)].clone(), top.denom.clone()))
                    .collect()
            })
            .collect();
        let mut x = IMat::zero(n, n);
        for i in 0..n {
            let b: Vec<BigRational> = (0..n)
                .map(|j| BigRational::new(bottom.num[(i, j)].clone(), bottom.denom.clone()))
                .collect();
            let sol = rational_solve(&top_t, &b)
                .ok_or_else(|| Error::Internal("top lattice is degenerate".into()))?;
            for (j, c) in sol.iter().enumerate() {
                if !c.is_integer() {
                    return Err(Error::Validation(
                        "bottom lattice is not contained in the top lattice".into(),
                    ));
                }
                x[(i, j)] = c.to_integer();
            }
        }
        let snf = intmat::smith_decompose(&x);
        let v_inv = snf.v.inverse_unimodular();
        // adapted top basis: rows of v_inv * top.num over top.denom
        let adapted_rows = v_inv.mul(&top.num);
        let adapted: Vec<QElem> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::new(adapted_rows[(i, j)].clone(), top.denom.clone()))
                    .collect()
            })
            .collect();
        let divisors: Vec<BigInt> = (0..n).map(|i| snf.d[(i, i)].abs()).collect();
        let kept: Vec<usize> = (0..n).filter(|&i| divisors[i] > BigInt::one()).collect();
        let factors: Vec<u64> = kept
            .iter()
            .map(|&i| {
                divisors[i]
                    .to_u64()
                    .ok_or_else(|| Error::Validation("quotient factor too large".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(QuotientModule {
            order: order.clone(),
            group: FinAbGroup::new(factors)?,
            adapted,
            divisors,
            kept,
        })
    }

    /// Field representatives of the group generators.
    pub fn generators(&self) -> Vec<QElem> {
        self.kept.iter().map(|&i| self.adapted[i].clone()).collect()
    }

    /// Coordinates of (the class of) a top-lattice element.
    pub fn coords(&self, x: &QElem) -> Result<Vec<i64>, Error> {
        let n = self.adapted.len();
        let m: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| self.adapted[j][i].clone()).collect()).collect();
        let sol = rational_solve(&m, x)
            .ok_or_else(|| Error::Internal("adapted basis is degenerate".into()))?;
        for c in &sol {
            if !c.is_integer() {
                return Err(Error::Validation("element does not lie in the top lattice".into()));
            }
        }
        let mut coords = Vec::with_capacity(self.kept.len());
        for &i in &self.kept {
            let d = &self.divisors[i];
            let c = sol[i].to_integer().mod_floor(d);
            coords.push(
                c.to_i64()
                    .ok_or_else(|| Error::Validation("coordinate does not fit in i64".into()))?,
            );
        }
        Ok(coords)
    }

    /// A field representative of the class with the given coordinates.
    pub fn lift(&self, coords: &[i64]) -> Result<QElem, Error> {
        if coords.len() != self.kept.len() {
            return Err(Error::Validation("coordinate length mismatch".into()));
        }
        let mut acc = self.order.zero();
        for (k, &i) in self.kept.iter().enumerate() {
            let c = BigRational::from(BigInt::from(coords[k]));
            acc = self.order.add(&acc, &self.order.scale(&self.adapted[i], &c));
        }
        Ok(acc)
    }
}

/// An arithmetic GHG: the descriptor together with the quotient-module data
/// needed to move between field elements and coordinates.
#[derive(Debug, Clone)]
pub struct ArithGhg {
    pub tuple: ArithTuple,
    pub desc: GhgDescriptor,
    pub a_quot: QuotientModule,
    pub b_quot: QuotientModule,
}

/// Build the GHG `H[I, f]` (or `H[I, f, r]` when the tuple carries an
/// enlarged centre): `A = I/fI`, `B = f^{-1} Ihat / Ihat` with
/// `Ihat = D^{-1} I^{-1}`, `C = Z/f`, and the pairing `Tr(ab) + Z` valued in
/// `f^{-1} Z / Z`, with the `O/f` action attached as ring structure.
pub fn trace_pairing_build(tuple: &ArithTuple) -> Result<ArithGhg, Error> {
    let order = &tuple.order;
    let f = tuple.f;
    let f_ideal = &tuple.frak_f;
    let ideal = &tuple.ideal;

    let fi = f_ideal.mul(ideal)?;
    let a_quot = QuotientModule::new(order, ideal, &fi)?;

    let ihat = different(order)?.inverse()?.mul(&ideal.inverse()?)?;
    let f_inv_ihat = f_ideal.inverse()?.mul(&ihat)?;
    let b_quot = QuotientModule::new(order, &f_inv_ihat, &ihat)?;

    let r = tuple.r.unwrap_or(f);
    let scale = (r / f) as i64;
    let a_gens = a_quot.generators();
    let b_gens = b_quot.generators();
    let mut table = vec![vec![0i64; b_gens.len()]; a_gens.len()];
    for (i, a) in a_gens.iter().enumerate() {
        for (j, b) in b_gens.iter().enumerate() {
            let t = order.trace(&order.mul(a, b));
            let val = t * BigRational::from(BigInt::from(f));
            if !val.is_integer() {
                return Err(Error::Internal(
                    "trace pairing does not land in (1/f)Z; lattice data inconsistent".into(),
                ));
            }
            let v = val.to_integer().mod_floor(&BigInt::from(f)).to_i64().unwrap();
            table[i][j] = v * scale;
        }
    }
    let lambda = Pairing::cyclic(a_quot.group.clone(), b_quot.group.clone(), r, table)?;

    // the O/f structure: theta acting on A and B coordinates
    let theta = order.theta();
    let theta_action = |quot: &QuotientModule| -> Result<Vec<Vec<i64>>, Error> {
        let k = quot.group.rank();
        let mut m = vec![vec![0i64; k]; k];
        for (j, g) in quot.generators().iter().enumerate() {
            let img = quot.coords(&order.mul(&theta, g))?;
            for t in 0..k {
                m[t][j] = img[t];
            }
        }
        Ok(m)
    };
    let ring = RingStructure {
        generators: vec![RingGenAction {
            on_a: theta_action(&a_quot)?,
            on_b: theta_action(&b_quot)?,
        }],
    };
    let desc = GhgDescriptor::new(lambda, Some(ring))?;
    let ndc = desc.check_ndc();
    if !ndc.is_ndc {
        return Err(Error::Internal(format!(
            "trace pairing failed the non-degeneracy check: {ndc:?}"
        )));
    }
    let nf = f_ideal.norm();
    if BigRational::from(BigInt::from(desc.group_a().order())) != nf {
        return Err(Error::Internal("|A| does not equal the norm of f".into()));
    }
    Ok(ArithGhg { tuple: tuple.clone(), desc, a_quot, b_quot })
}

/// Same `A`, `B` and pairing, with the centre enlarged from `Z/f` to `Z/r`.
pub fn ghg_with_enlarged_centre(ag: &ArithGhg, r: u64) -> Result<ArithGhg, Error> {
    let mut tuple = ag.tuple.clone();
    if r % tuple.f != 0 {
        return Err(Error::Validation(format!(
            "enlarged centre {r} must be a multiple of f = {}",
            tuple.f
        )));
    }
    tuple.r = Some(r);
    trace_pairing_build(&tuple)
}

/// Find module generators: `x` in `I` with `x O + f I = I` (so `{x}` is an
/// `O/f`-basis of `A`), and likewise `y` for `B`. The search tries single
/// generators, then two-generator combinations with small coefficients, and
/// reports exhaustion loudly.
pub fn basis_pick(ag: &ArithGhg) -> Result<(Vec<i64>, Vec<i64>), Error> {
    let x = pick_cyclic_generator(ag, &ag.a_quot, true)?;
    let y = pick_cyclic_generator(ag, &ag.b_quot, false)?;
    Ok((x, y))
}

fn pick_cyclic_generator(
    ag: &ArithGhg,
    quot: &QuotientModule,
    left: bool,
) -> Result<Vec<i64>, Error> {
    let group = if left { ag.desc.group_a() } else { ag.desc.group_b() };
    let k = group.rank();
    let full = group.order();
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for i in 0..k {
        let mut c = vec![0i64; k];
        c[i] = 1;
        candidates.push(c);
    }
    for i in 0..k {
        for j in (i + 1)..k {
            for ci in 1..=3i64 {
                for cj in 1..=3i64 {
                    let mut c = vec![0i64; k];
                    c[i] = ci;
                    c[j] = cj;
                    candidates.push(c);
                }
            }
        }
    }
    let action = module_action_matrix(ag, quot)?;
    for cand in candidates {
        let elem = group.element(&cand)?;
        // the O-module generated by the candidate: Z-span of theta^k x
        let mut gens = vec![elem.clone()];
        let mut current = elem.clone();
        for _ in 1..ag.tuple.order.degree() {
            current = apply_matrix(group, &action, &current)?;
            gens.push(current.clone());
        }
        if Subgroup::generated_by(group, &gens).order == full {
            return Ok(cand);
        }
    }
    Err(Error::Exhausted("no cyclic O/f-generator found among small combinations".into()))
}

fn module_action_matrix(ag: &ArithGhg, quot: &QuotientModule) -> Result<Vec<Vec<i64>>, Error> {
    let theta = ag.tuple.order.theta();
    let k = quot.group.rank();
    let mut m = vec![vec![0i64; k]; k];
    for (j, g) in quot.generators().iter().enumerate() {
        let img = quot.coords(&ag.tuple.order.mul(&theta, g))?;
        for t in 0..k {
            m[t][j] = img[t];
        }
    }
    Ok(m)
}

fn apply_matrix(
    group: &FinAbGroup,
    m: &[Vec<i64>],
    x: &crate::abelian::GroupElement,
) -> Result<crate::abelian::GroupElement, Error> {
    let coords: Vec<i64> = m
        .iter()
        .zip(group.factors())
        .map(|(row, &d)| {
            let s: i128 =
                row.iter().zip(x.coords()).map(|(&a, &b)| a as i128 * b as i128).sum();
            s.rem_euclid(d as i128) as i64
        })
        .collect();
    group.element(&coords)
}

/// The image of an `O/f`-linear endomorphism of `A + B` in `M_2(O/f)` with
/// respect to the module bases `x`, `y`, plus the determinant test.
#[derive(Debug, Clone)]
pub struct Sl2Image {
    /// Entries `[[u, v], [w, z]]` as canonical residues.
    pub entries: [[Vec<BigInt>; 2]; 2],
    pub det_is_one: bool,
}

/// The bijection `u -> u * basis` between the residue ring and one side.
pub struct ModuleBasis {
    ring: ResidueRing,
    /// residue-enumeration index -> module coordinates
    to_coords: Vec<Vec<i64>>,
    /// module coordinates -> residue element
    from_coords: std::collections::HashMap<Vec<i64>, Vec<BigInt>>,
}

impl ModuleBasis {
    pub fn new(
        ag: &ArithGhg,
        quot: &QuotientModule,
        basis_coords: &[i64],
    ) -> Result<Self, Error> {
        let ring = ResidueRing::new(&ag.tuple.order, &ag.tuple.frak_f)?;
        let base = quot.lift(basis_coords)?;
        let mut to_coords = Vec::new();
        let mut from_coords = std::collections::HashMap::new();
        for u in ring.elements() {
            let ue: QElem = u.iter().map(|c| BigRational::from(c.clone())).collect();
            let coords = quot.coords(&ag.tuple.order.mul(&ue, &base))?;
            to_coords.push(coords.clone());
            if from_coords.insert(coords, u).is_some() {
                return Err(Error::Validation(
                    "chosen element does not generate the module freely".into(),
                ));
            }
        }
        Ok(ModuleBasis { ring, to_coords, from_coords })
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn coords_of(&self, u: &[BigInt]) -> Option<&Vec<i64>> {
        self.ring.elements().position(|e| e == u).map(|i| &self.to_coords[i])
    }

    pub fn residue_of(&self, coords: &[i64]) -> Option<&Vec<BigInt>> {
        self.from_coords.get(coords)
    }
}

/// Extract the `M_2(O/f)` matrix of an `O/f`-linear endomorphism of `A + B`
/// with respect to chosen module bases, verifying the linearity by
/// reconstructing the map. `det = 1` is reported so both directions of the
/// determinant criterion can be tested externally.
pub fn xi_sl2_map(
    ag: &ArithGhg,
    endo: &[Vec<i64>],
    basis_a: &ModuleBasis,
    basis_x: &[i64],
    basis_b: &ModuleBasis,
    basis_y: &[i64],
) -> Result<Sl2Image, Error> {
    let desc = &ag.desc;
    let abar = desc.abar();
    let a_rank = desc.group_a().rank();
    let hom =
        crate::abelian::GroupHom::new(abar.clone(), abar.clone(), endo.to_vec())?;
    let apply = |v: &[i64]| -> Result<(Vec<i64>, Vec<i64>), Error> {
        let x = abar.element(v)?;
        let img = hom.apply(&x)?;
        let coords = img.coords();
        Ok((coords[..a_rank].to_vec(), coords[a_rank..].to_vec()))
    };
    // images of (x, 0) and (0, y)
    let mut xa = basis_x.to_vec();
    xa.extend(vec![0i64; abar.rank() - a_rank]);
    let (p, q) = apply(&xa)?;
    let mut yb = vec![0i64; a_rank];
    yb.extend_from_slice(basis_y);
    let (p2, q2) = apply(&yb)?;

    let miss = || Error::Internal("image misses the free module".into());
    let u = basis_a.residue_of(&p).ok_or_else(miss)?.clone();
    let w = basis_b.residue_of(&q).ok_or_else(miss)?.clone();
    let v = basis_a.residue_of(&p2).ok_or_else(miss)?.clone();
    let z = basis_b.residue_of(&q2).ok_or_else(miss)?.clone();

    // O/f-linearity: the reconstruction must agree with the map everywhere
    let recon = endo_from_m2(ag, [[&u, &v], [&w, &z]], basis_a, basis_b)?;
    for (i, row) in recon.iter().enumerate() {
        let d = abar.factors()[i] as i64;
        for (j, &val) in row.iter().enumerate() {
            if (val - endo[i][j]).rem_euclid(d) != 0 {
                return Err(Error::Validation(
                    "endomorphism is not O/f-linear for the chosen bases".into(),
                ));
            }
        }
    }

    let ring = basis_a.ring();
    let det = ring.sub(&ring.mul(&u, &z), &ring.mul(&v, &w));
    let det_is_one = det == ring.one();
    Ok(Sl2Image { entries: [[u, v], [w, z]], det_is_one })
}

/// The endomorphism of `A + B` induced by a matrix `[[u, v], [w, z]]` over
/// `O/f`: `(alpha x, beta y) -> ((u alpha + v beta) x, (w alpha + z beta) y)`.
pub fn endo_from_m2(
    ag: &ArithGhg,
    m: [[&Vec<BigInt>; 2]; 2],
    basis_a: &ModuleBasis,
    basis_b: &ModuleBasis,
) -> Result<Vec<Vec<i64>>, Error> {
    let desc = &ag.desc;
    let abar = desc.abar();
    let a_rank = desc.group_a().rank();
    let k = abar.rank();
    let ring = basis_a.ring();
    let miss = || Error::Internal("coordinates outside the free-module bijection".into());
    let mut out = vec![vec![0i64; k]; k];
    for j in 0..k {
        // generator j decomposes as (alpha x, beta y)
        let mut gen = vec![0i64; k];
        gen[j] = 1;
        let (ga, gb) = (gen[..a_rank].to_vec(), gen[a_rank..].to_vec());
        let alpha = basis_a.residue_of(&ga).ok_or_else(miss)?;
        let beta = basis_b.residue_of(&gb).ok_or_else(miss)?;
        let new_alpha = ring.add(&ring.mul(m[0][0], alpha), &ring.mul(m[0][1], beta));
        let new_beta = ring.add(&ring.mul(m[1][0], alpha), &ring.mul(m[1][1], beta));
        let pa = basis_a.coords_of(&new_alpha).ok_or_else(miss)?;
        let pb = basis_b.coords_of(&new_beta).ok_or_else(miss)?;
        for t in 0..a_rank {
            out[t][j] = pa[t];
        }
        for t in 0..k - a_rank {
            out[a_rank + t][j] = pb[t];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn sqrt2() -> NumberFieldOrder {
        NumberFieldOrder::quadratic(2).unwrap()
    }

    fn sqrt5() -> NumberFieldOrder {
        NumberFieldOrder::quadratic(5).unwrap()
    }

    fn cyclotomic7_plus() -> NumberFieldOrder {
        NumberFieldOrder::new([-1i64, -2, 1, 1].iter().map(|&c| BigInt::from(c)).collect())
            .unwrap()
    }

    fn split_seven(k: &NumberFieldOrder) -> FracIdeal {
        FracIdeal::from_generators(
            k,
            &[k.from_integer(7), k.sub(&k.theta(), &k.from_integer(3))],
        )
        .unwrap()
    }

    #[test]
    fn ideal_times_ring_is_itself() {
        let k = sqrt2();
        let i = FracIdeal::from_generators(&k, &[k.theta(), k.from_integer(4)]).unwrap();
        assert_eq!(i.mul(&FracIdeal::one(&k)).unwrap(), i);
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let k = sqrt2();
        let i = FracIdeal::principal(&k, &k.theta()).unwrap();
        let sq = i.mul(&i).unwrap();
        let two = FracIdeal::principal(&k, &k.from_integer(2)).unwrap();
        assert_eq!(sq, two);
        assert_eq!(sq.norm(), BigRational::from(BigInt::from(4)));
    }

    #[test]
    fn inverse_roundtrip_on_random_ideals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for k in [sqrt2(), sqrt5(), cyclotomic7_plus()] {
            let n = k.degree();
            let mut done = 0;
            while done < 50 {
                let gen1: QElem = (0..n)
                    .map(|_| BigRational::from(BigInt::from(rng.gen_range(-4i64..=4))))
                    .collect();
                let gen2: QElem = (0..n)
                    .map(|_| BigRational::from(BigInt::from(rng.gen_range(-4i64..=4))))
                    .collect();
                if k.is_zero_elem(&gen1) && k.is_zero_elem(&gen2) {
                    continue;
                }
                let i = match FracIdeal::from_generators(&k, &[gen1, gen2]) {
                    Ok(i) => i,
                    Err(_) => continue,
                };
                let inv = i.inverse().unwrap();
                assert_eq!(i.mul(&inv).unwrap(), FracIdeal::one(&k));
                done += 1;
            }
        }
    }

    #[test]
    fn hnf_canonicity_two_presentations() {
        let k = sqrt2();
        // (2, 2 th) = 2 O has two presentations
        let a = FracIdeal::from_generators(
            &k,
            &[k.from_integer(2), k.scale(&k.theta(), &BigRational::from(BigInt::from(2)))],
        )
        .unwrap();
        let b = FracIdeal::principal(&k, &k.from_integer(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_ideal_is_rejected() {
        let k = sqrt2();
        assert!(FracIdeal::from_generators(&k, &[k.zero()]).is_err());
        assert!(FracIdeal::from_generators(&k, &[]).is_err());
    }

    #[test]
    fn different_norms() {
        let d2 = different(&sqrt2()).unwrap();
        assert_eq!(d2.norm(), BigRational::from(BigInt::from(8)));
        let d5 = different(&sqrt5()).unwrap();
        assert_eq!(d5.norm(), BigRational::from(BigInt::from(5)));
        let dq = different(&NumberFieldOrder::rationals()).unwrap();
        assert_eq!(dq, FracIdeal::one(&NumberFieldOrder::rationals()));
    }

    #[test]
    fn base_case_from_rational_data() {
        // k = Q, I = Z, f = dZ builds the d-dimensional base descriptor
        let k = NumberFieldOrder::rationals();
        for d in [3i64, 4, 6] {
            let f = FracIdeal::principal(&k, &k.from_integer(d)).unwrap();
            let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, None).unwrap();
            let ag = trace_pairing_build(&tuple).unwrap();
            assert_eq!(ag.desc.group_a().factors(), &[d as u64]);
            assert_eq!(ag.desc.group_b().factors(), &[d as u64]);
            assert_eq!(ag.desc.group_c().factors(), &[d as u64]);
            assert_eq!(ag.desc.lambda().cyclic_table().unwrap(), vec![vec![1]]);
            assert!(ag.desc.check_ndc().is_ndc);
        }
    }

    #[test]
    fn split_prime_above_seven_in_sqrt2() {
        // 3^2 = 2 mod 7, so (7, th - 3) is a split prime of norm 7
        let k = sqrt2();
        let f = split_seven(&k);
        assert_eq!(f.norm(), BigRational::from(BigInt::from(7)));
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, None).unwrap();
        assert_eq!(tuple.f, 7);
        let ag = trace_pairing_build(&tuple).unwrap();
        assert_eq!(ag.desc.group_a().order(), 7);
        assert_eq!(ag.desc.group_b().order(), 7);
        assert_eq!(ag.desc.group_c().order(), 7);
        assert!(ag.desc.check_ndc().is_ndc);
    }

    #[test]
    fn inert_three_in_sqrt5() {
        let k = sqrt5();
        let f = FracIdeal::principal(&k, &k.from_integer(3)).unwrap();
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, None).unwrap();
        assert_eq!(tuple.f, 3);
        let ag = trace_pairing_build(&tuple).unwrap();
        assert_eq!(ag.desc.group_a().order(), 9);
        assert!(ag.desc.check_ndc().is_ndc);
        // kernels are trivial by the SNF route; double-check by enumeration
        let mut kernel = 0;
        for a in ag.desc.group_a().elements() {
            if ag
                .desc
                .group_b()
                .elements()
                .all(|b| ag.desc.lambda().eval(&a, &b).unwrap().is_zero())
            {
                kernel += 1;
            }
        }
        assert_eq!(kernel, 1);
    }

    #[test]
    fn trace_pairing_agrees_with_field_trace() {
        // lambda(xbar, ybar) = Tr(xy) mod Z on representatives
        let k = sqrt2();
        let f = split_seven(&k);
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, None).unwrap();
        let ag = trace_pairing_build(&tuple).unwrap();
        let a_gen = &ag.a_quot.generators()[0];
        let b_gen = &ag.b_quot.generators()[0];
        for i in 0..7i64 {
            for j in 0..7i64 {
                let x = k.scale(a_gen, &BigRational::from(BigInt::from(i)));
                let y = k.scale(b_gen, &BigRational::from(BigInt::from(j)));
                let tr = k.trace(&k.mul(&x, &y));
                let expected = (tr * BigRational::from(BigInt::from(7)))
                    .to_integer()
                    .mod_floor(&BigInt::from(7));
                let got = ag
                    .desc
                    .lambda()
                    .eval(
                        &ag.desc.group_a().element(&[i]).unwrap(),
                        &ag.desc.group_b().element(&[j]).unwrap(),
                    )
                    .unwrap();
                assert_eq!(BigInt::from(got.coords()[0]), expected);
            }
        }
    }

    #[test]
    fn pairing_well_defined_under_lift_perturbation() {
        let k = sqrt5();
        let f = FracIdeal::principal(&k, &k.from_integer(3)).unwrap();
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f.clone(), None).unwrap();
        let ag = trace_pairing_build(&tuple).unwrap();
        let a_gen = &ag.a_quot.generators()[0];
        let b_gen = &ag.b_quot.generators()[0];
        // perturb the a-lift by an element of fI and the b-lift by one of Ihat
        let fi = f.mul(&FracIdeal::one(&k)).unwrap();
        let ihat = different(&k).unwrap().inverse().unwrap();
        for pa in fi.basis_elements() {
            for pb in ihat.basis_elements() {
                let x = k.add(a_gen, &pa);
                let y = k.add(b_gen, &pb);
                let t0 = k.trace(&k.mul(a_gen, b_gen));
                let t1 = k.trace(&k.mul(&x, &y));
                let diff = t1 - t0;
                assert!(diff.is_integer(), "pairing changed under lift perturbation");
            }
        }
    }

    #[test]
    fn remark_isomorphism_when_f_prime_to_different() {
        // f^{-1} I^{-1} / I^{-1} = f^{-1} Ihat / Ihat when f + D = O,
        // through the inclusion-induced map
        let k = sqrt2();
        let f = split_seven(&k);
        let i = FracIdeal::principal(&k, &k.add(&k.theta(), &k.from_integer(1))).unwrap();
        let f_inv = f.inverse().unwrap();
        let i_inv = i.inverse().unwrap();
        let ihat = different(&k).unwrap().inverse().unwrap().mul(&i_inv).unwrap();
        let lhs = QuotientModule::new(&k, &f_inv.mul(&i_inv).unwrap(), &i_inv).unwrap();
        let rhs = QuotientModule::new(&k, &f_inv.mul(&ihat).unwrap(), &ihat).unwrap();
        assert!(lhs.group.is_isomorphic_to(&rhs.group));
        // the inclusion-induced map is a bijection: distinct classes on the
        // left stay distinct on the right
        let mut seen = std::collections::HashSet::new();
        let g = lhs.generators()[0].clone();
        for c in 0..7i64 {
            let x = k.scale(&g, &BigRational::from(BigInt::from(c)));
            let class = rhs.coords(&x).unwrap();
            assert!(seen.insert(class));
        }
    }

    #[test]
    fn residue_ring_of_split_prime() {
        let k = sqrt2();
        let f = split_seven(&k);
        let ring = ResidueRing::new(&k, &f).unwrap();
        assert_eq!(ring.cardinality(), 7);
        // theta is congruent to 3 in this ring
        let theta = ring.reduce(&[BigInt::zero(), BigInt::one()]);
        assert_eq!(theta, vec![BigInt::from(3), BigInt::zero()]);
        // ring multiplication matches integer multiplication mod 7
        let four = ring.reduce(&[BigInt::from(4), BigInt::zero()]);
        let five = ring.reduce(&[BigInt::from(5), BigInt::zero()]);
        assert_eq!(
            ring.mul(&four, &five),
            ring.reduce(&[BigInt::from(20), BigInt::zero()])
        );
        assert_eq!(ring.elements().count(), 7);
    }

    #[test]
    fn basis_pick_gives_free_generators() {
        let k = sqrt2();
        let f = split_seven(&k);
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, None).unwrap();
        let ag = trace_pairing_build(&tuple).unwrap();
        let (x, y) = basis_pick(&ag).unwrap();
        // freeness: u -> u x is a bijection O/f -> A
        let basis_a = ModuleBasis::new(&ag, &ag.a_quot, &x).unwrap();
        let basis_b = ModuleBasis::new(&ag, &ag.b_quot, &y).unwrap();
        assert_eq!(basis_a.ring().cardinality(), 7);
        assert_eq!(basis_b.ring().cardinality(), 7);
    }

    #[test]
    fn enlarged_centre_even_base_case() {
        let k = NumberFieldOrder::rationals();
        let f = FracIdeal::principal(&k, &k.from_integer(4)).unwrap();
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, Some(8)).unwrap();
        let ag = trace_pairing_build(&tuple).unwrap();
        assert_eq!(ag.desc.order(), 128);
        assert_eq!(ag.desc.centre_and_derived().centre_order, 8);
        assert_eq!(ag.desc.group_c().factors(), &[8]);
        // r = f reproduces the plain construction
        let plain = ghg_with_enlarged_centre(&ag, 4).unwrap();
        let tuple0 = ArithTuple::new(
            k.clone(),
            FracIdeal::one(&k),
            FracIdeal::principal(&k, &k.from_integer(4)).unwrap(),
            None,
        )
        .unwrap();
        let ag0 = trace_pairing_build(&tuple0).unwrap();
        assert_eq!(
            plain.desc.lambda().cyclic_table().unwrap(),
            ag0.desc.lambda().cyclic_table().unwrap()
        );
        assert!(ghg_with_enlarged_centre(&ag, 6).is_err());
    }

    #[test]
    fn diagonal_unit_maps_to_diagonal_matrix_for_any_basis() {
        // Delta(u) maps to diag(u, u^{-1}) irrespective of the basis choice
        let k = sqrt2();
        let f = split_seven(&k);
        let tuple = ArithTuple::new(k.clone(), FracIdeal::one(&k), f, None).unwrap();
        let ag = trace_pairing_build(&tuple).unwrap();
        let (x, y) = basis_pick(&ag).unwrap();
        let basis_a = ModuleBasis::new(&ag, &ag.a_quot, &x).unwrap();
        let basis_b = ModuleBasis::new(&ag, &ag.b_quot, &y).unwrap();

        // u acts on A as multiplication by 2 (an element of (O/f)^x)
        let alpha = crate::abelian::GroupHom::new(
            ag.desc.group_a().clone(),
            ag.desc.group_a().clone(),
            vec![vec![2]],
        )
        .unwrap();
        let (_, pair) = crate::autgrp::delta_diagonal(&ag.desc, &alpha).unwrap();
        let auto = pair.unwrap();
        let image = xi_sl2_map(&ag, auto.sp.matrix(), &basis_a, &x, &basis_b, &y).unwrap();
        assert!(image.det_is_one);
        let ring = basis_a.ring();
        // off-diagonal entries vanish; diagonal entries are u and u^{-1}
        assert_eq!(image.entries[0][1], ring.zero());
        assert_eq!(image.entries[1][0], ring.zero());
        let u = image.entries[0][0].clone();
        let uinv = image.entries[1][1].clone();
        assert_eq!(ring.mul(&u, &uinv), ring.one());
        assert_eq!(u, ring.reduce(&[BigInt::from(2), BigInt::zero()]));
    }
}
