//! The generalised Heisenberg group `H(A, B, C, lambda)`: the set
//! `A x B x C` with multiplication twisted by a bilinear pairing,
//!
//! ```text
//! h(a,b,c) h(a',b',c') = h(a+a', b+b', c+c'+lambda(a,b'))
//! ```
//!
//! plus its structure subgroups, the non-degenerate-by-cyclic (ND-C) check,
//! canonical automorphisms, diagonal homomorphisms and direct sums.

use crate::abelian::{FinAbGroup, GroupElement, GroupHom, Pairing, Subgroup};
use crate::error::Error;
use serde::{Deserialize, Serialize};

/// Action of one ring generator on the coordinates of `A` and `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingGenAction {
    pub on_a: Vec<Vec<i64>>,
    pub on_b: Vec<Vec<i64>>,
}

/// An `R`-structure: one explicit endomorphism pair per ring generator.
/// `R = Z` is the empty list (the integer action is implicit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RingStructure {
    pub generators: Vec<RingGenAction>,
}

/// The tuple `(A, B, C, lambda)` defining a generalised Heisenberg group,
/// with an optional ring acting on `A` and `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhgDescriptor {
    a: FinAbGroup,
    b: FinAbGroup,
    c: FinAbGroup,
    lambda: Pairing,
    ring: Option<RingStructure>,
}

/// A group element `h(a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisElem {
    pub a: GroupElement,
    pub b: GroupElement,
    pub c: GroupElement,
}

impl GhgDescriptor {
    pub fn new(lambda: Pairing, ring: Option<RingStructure>) -> Result<Self, Error> {
        let a = lambda.left.clone();
        let b = lambda.right.clone();
        let c = lambda.target.clone();
        if let Some(ref r) = ring {
            for (gi, gen) in r.generators.iter().enumerate() {
                let on_a = GroupHom::new(a.clone(), a.clone(), gen.on_a.clone())?;
                let on_b = GroupHom::new(b.clone(), b.clone(), gen.on_b.clone())?;
                // R-balance on generator pairs: lambda(r a, b) = lambda(a, r b)
                for x in a.generators() {
                    for y in b.generators() {
                        let lhs = lambda.eval(&on_a.apply(&x)?, &y)?;
                        let rhs = lambda.eval(&x, &on_b.apply(&y)?)?;
                        if lhs != rhs {
                            return Err(Error::Validation(format!(
                                "pairing is not balanced for ring generator {gi}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(GhgDescriptor { a, b, c, lambda, ring })
    }

    /// The Base Case `H_d`. For odd `d` this is `H(Z/d, Z/d, Z/d, x)`;
    /// for even `d` the centre is enlarged to `Z/2d` and the pairing is
    /// `(a, b) -> 2ab`, matching the Weyl-Heisenberg group conventions.
    pub fn base_case(d: u64) -> Result<Self, Error> {
        if d < 2 {
            return Err(Error::Validation("base case needs d >= 2".into()));
        }
        let zd = FinAbGroup::cyclic(d);
        let lambda = if d % 2 == 1 {
            Pairing::cyclic(zd.clone(), zd.clone(), d, vec![vec![1]])?
        } else {
            Pairing::cyclic(zd.clone(), zd.clone(), 2 * d, vec![vec![2]])?
        };
        GhgDescriptor::new(lambda, None)
    }

    pub fn group_a(&self) -> &FinAbGroup {
        &self.a
    }

    pub fn group_b(&self) -> &FinAbGroup {
        &self.b
    }

    pub fn group_c(&self) -> &FinAbGroup {
        &self.c
    }

    pub fn lambda(&self) -> &Pairing {
        &self.lambda
    }

    pub fn ring(&self) -> Option<&RingStructure> {
        self.ring.as_ref()
    }

    pub fn order(&self) -> u64 {
        self.a.order() * self.b.order() * self.c.order()
    }

    /// `|C|` when `C` is cyclic.
    pub fn central_order(&self) -> u64 {
        self.c.order()
    }

    /// The quotient `H/Z` identified with `A + B` (under ND-C).
    pub fn abar(&self) -> FinAbGroup {
        FinAbGroup::direct_sum(&[self.a.clone(), self.b.clone()])
    }

    pub fn split_ab(&self, ab: &GroupElement) -> Result<(GroupElement, GroupElement), Error> {
        let parts = ab.split(&[self.a.clone(), self.b.clone()])?;
        let mut it = parts.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap()))
    }

    pub fn join_ab(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.concat(b)
    }

    pub fn identity(&self) -> HeisElem {
        HeisElem { a: self.a.zero(), b: self.b.zero(), c: self.c.zero() }
    }

    pub fn elem(&self, a: GroupElement, b: GroupElement, c: GroupElement) -> Result<HeisElem, Error> {
        if *a.parent() != self.a || *b.parent() != self.b || *c.parent() != self.c {
            return Err(Error::DescriptorMismatch);
        }
        Ok(HeisElem { a, b, c })
    }

    pub fn elem_i64(&self, a: &[i64], b: &[i64], c: &[i64]) -> Result<HeisElem, Error> {
        Ok(HeisElem {
            a: self.a.element(a)?,
            b: self.b.element(b)?,
            c: self.c.element(c)?,
        })
    }

    /// Central injection `m(c) = h(0, 0, c)`.
    pub fn central(&self, c: &GroupElement) -> Result<HeisElem, Error> {
        self.elem(self.a.zero(), self.b.zero(), c.clone())
    }

    /// The zero-lift section of `H -> A + B`, `(a, b) -> h(a, b, 0)`.
    pub fn zero_section(&self, ab: &GroupElement) -> Result<HeisElem, Error> {
        let (a, b) = self.split_ab(ab)?;
        self.elem(a, b, self.c.zero())
    }

    fn check_membership(&self, h: &HeisElem) -> Result<(), Error> {
        if *h.a.parent() != self.a || *h.b.parent() != self.b || *h.c.parent() != self.c {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn multiply(&self, h: &HeisElem, g: &HeisElem) -> Result<HeisElem, Error> {
        self.check_membership(h)?;
        self.check_membership(g)?;
        let twist = self.lambda.eval(&h.a, &g.b)?;
        Ok(HeisElem {
            a: h.a.add(&g.a)?,
            b: h.b.add(&g.b)?,
            c: h.c.add(&g.c)?.add(&twist)?,
        })
    }

    /// `h(a,b,c)^{-1} = h(-a, -b, lambda(a,b) - c)`.
    pub fn inverse(&self, h: &HeisElem) -> HeisElem {
        let lam = self.lambda.eval(&h.a, &h.b).expect("element components match descriptor");
        HeisElem {
            a: h.a.neg(),
            b: h.b.neg(),
            c: lam.sub(&h.c).expect("same parent"),
        }
    }

    /// `[h, g] = h(0, 0, lambda(a,b') - lambda(a',b))`.
    pub fn commutator(&self, h: &HeisElem, g: &HeisElem) -> Result<HeisElem, Error> {
        self.check_membership(h)?;
        self.check_membership(g)?;
        let c = self.lambda.eval(&h.a, &g.b)?.sub(&self.lambda.eval(&g.a, &h.b)?)?;
        self.central(&c)
    }

    pub fn power(&self, h: &HeisElem, n: i64) -> HeisElem {
        let mut base = if n < 0 { self.inverse(h) } else { h.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base).expect("same descriptor");
            }
            base = self.multiply(&base, &base).expect("same descriptor");
            e >>= 1;
        }
        acc
    }

    /// All `|A| |B| |C|` elements, `c` varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = HeisElem> + '_ {
        self.a.elements().flat_map(move |a| {
            self.b.elements().flat_map({
                let a = a.clone();
                move |b| {
                    let a = a.clone();
                    self.c.elements().map(move |c| HeisElem { a: a.clone(), b: b.clone(), c })
                }
            })
        })
    }

    /// Structural data of the centre `h(K_A, K_B, C)` and of the derived
    /// subgroup `h(0, 0, im lambda)`.
    pub fn centre_and_derived(&self) -> CentreInfo {
        let k_a = self.lambda.left_kernel();
        let k_b = self.lambda.right_kernel();
        let image = self.lambda.image_subgroup();
        let centre_order = k_a.order * k_b.order * self.c.order();
        let derived_order = image.order;
        CentreInfo { k_a, k_b, image, centre_order, derived_order }
    }

    /// ND-C: the pairing is non-degenerate and `C` is cyclic.
    pub fn check_ndc(&self) -> NdcReport {
        let info = self.centre_and_derived();
        let c_cyclic = self.c.is_cyclic();
        let non_degenerate = info.k_a.is_trivial() && info.k_b.is_trivial();
        NdcReport {
            is_ndc: c_cyclic && non_degenerate,
            c_cyclic,
            left_kernel_order: info.k_a.order,
            right_kernel_order: info.k_b.order,
            sides_same_order: self.a.order() == self.b.order(),
            exponent_divides_r: c_cyclic && {
                let r = self.c.order();
                r % self.a.exponent().max(1) == 0 || self.a.is_trivial()
            },
        }
    }

    /// The four canonical automorphisms; each is verified to respect the
    /// group law on a deterministic sample of element pairs.
    pub fn canonical_autos(&self) -> Result<Vec<(CanonicalAuto, GhgMap)>, Error> {
        let mut out = Vec::new();
        for kind in [
            CanonicalAuto::Identity,
            CanonicalAuto::NegLeft,
            CanonicalAuto::NegRight,
            CanonicalAuto::NegBoth,
        ] {
            out.push((kind, self.canonical_auto(kind)?));
        }
        Ok(out)
    }

    /// One canonical automorphism; `Flip` needs `A = B` and symmetric lambda.
    pub fn canonical_auto(&self, kind: CanonicalAuto) -> Result<GhgMap, Error> {
        if kind == CanonicalAuto::Flip && !self.lambda.is_symmetric() {
            return Err(Error::Validation(
                "the flip automorphism needs A = B and a symmetric pairing".into(),
            ));
        }
        let map = GhgMap { desc: self.clone(), kind };
        map.verify_homomorphism()?;
        Ok(map)
    }

    /// The opposite group `H(B, A, C, lambda^op)`.
    pub fn opposite(&self) -> GhgDescriptor {
        let ring = self.ring.as_ref().map(|r| RingStructure {
            generators: r
                .generators
                .iter()
                .map(|g| RingGenAction { on_a: g.on_b.clone(), on_b: g.on_a.clone() })
                .collect(),
        });
        GhgDescriptor {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            lambda: self.lambda.opposite(),
            ring,
        }
    }

    /// The isomorphism `varphi : H(A,B,C,lambda) -> H(B,A,C,lambda^op)`,
    /// `h(a,b,c) -> h(-b, -a, lambda(a,b) - c)`.
    pub fn varphi_to_opposite(&self, h: &HeisElem) -> Result<HeisElem, Error> {
        self.check_membership(h)?;
        let lam = self.lambda.eval(&h.a, &h.b)?;
        Ok(HeisElem { a: h.b.neg(), b: h.a.neg(), c: lam.sub(&h.c)? })
    }
}

/// Subgroup data for the centre and derived subgroup.
#[derive(Debug, Clone)]
pub struct CentreInfo {
    pub k_a: Subgroup,
    pub k_b: Subgroup,
    /// `im(lambda)` inside `C` (the subgroup generated by all pairing values).
    pub image: Subgroup,
    pub centre_order: u64,
    pub derived_order: u64,
}

/// Diagnostics from [`GhgDescriptor::check_ndc`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NdcReport {
    pub is_ndc: bool,
    pub c_cyclic: bool,
    pub left_kernel_order: u64,
    pub right_kernel_order: u64,
    pub sides_same_order: bool,
    pub exponent_divides_r: bool,
}

/// The canonical automorphisms of any GHG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CanonicalAuto {
    Identity,
    /// `phi_-`: `h(a,b,c) -> h(-a, b, -c)`
    NegLeft,
    /// `phi^-`: `h(a,b,c) -> h(a, -b, -c)`
    NegRight,
    /// `phi_{-1} = phi^- . phi_-`: `h(a,b,c) -> h(-a, -b, c)`
    NegBoth,
    /// `phi` (A = B, symmetric lambda): `h(a,b,c) -> h(-b, -a, lambda(a,b) - c)`
    Flip,
}

/// A self-map of a GHG given by one of the canonical formulas.
#[derive(Debug, Clone)]
pub struct GhgMap {
    desc: GhgDescriptor,
    pub kind: CanonicalAuto,
}

impl GhgMap {
    pub fn apply(&self, h: &HeisElem) -> Result<HeisElem, Error> {
        let d = &self.desc;
        Ok(match self.kind {
            CanonicalAuto::Identity => h.clone(),
            CanonicalAuto::NegLeft => HeisElem { a: h.a.neg(), b: h.b.clone(), c: h.c.neg() },
            CanonicalAuto::NegRight => HeisElem { a: h.a.clone(), b: h.b.neg(), c: h.c.neg() },
            CanonicalAuto::NegBoth => HeisElem { a: h.a.neg(), b: h.b.neg(), c: h.c.clone() },
            CanonicalAuto::Flip => {
                let lam = d.lambda.eval(&h.a, &h.b)?;
                HeisElem { a: h.b.neg(), b: h.a.neg(), c: lam.sub(&h.c)? }
            }
        })
    }

    /// Check multiplicativity on a deterministic sample of pairs
    /// (exhaustive for small groups).
    fn verify_homomorphism(&self) -> Result<(), Error> {
        let d = &self.desc;
        let n = d.order();
        let pairs: Vec<(HeisElem, HeisElem)> = if n <= 64 {
            let elems: Vec<HeisElem> = d.elements().collect();
            elems
                .iter()
                .flat_map(|x| elems.iter().map(move |y| (x.clone(), y.clone())))
                .collect()
        } else {
            // a fixed stride sample through the element enumeration
            let elems: Vec<HeisElem> = d.elements().collect();
            let step = (n as usize / 37).max(1);
            let mut v = Vec::new();
            for i in (0..elems.len()).step_by(step) {
                for j in (0..elems.len()).step_by(step) {
                    v.push((elems[i].clone(), elems[j].clone()));
                }
            }
            v
        };
        for (x, y) in pairs {
            let lhs = self.apply(&d.multiply(&x, &y)?)?;
            let rhs = d.multiply(&self.apply(&x)?, &self.apply(&y)?)?;
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "canonical map {:?} fails to be a homomorphism",
                    self.kind
                )));
            }
        }
        Ok(())
    }
}

/// A diagonal homomorphism `t_A x t_B x t_C` between two GHGs, validated by
/// the compatibility identity `t_C(lambda(a,b)) = lambda~(t_A a, t_B b)` on
/// all generator pairs.
#[derive(Debug, Clone)]
pub struct DiagonalHom {
    pub src: GhgDescriptor,
    pub dst: GhgDescriptor,
    pub t_a: GroupHom,
    pub t_b: GroupHom,
    pub t_c: GroupHom,
}

impl DiagonalHom {
    pub fn new(
        src: &GhgDescriptor,
        dst: &GhgDescriptor,
        t_a: GroupHom,
        t_b: GroupHom,
        t_c: GroupHom,
    ) -> Result<Self, Error> {
        if t_a.source != src.a
            || t_b.source != src.b
            || t_c.source != src.c
            || t_a.target != dst.a
            || t_b.target != dst.b
            || t_c.target != dst.c
        {
            return Err(Error::Validation("diagonal hom endpoints do not line up".into()));
        }
        for (i, x) in src.a.generators().iter().enumerate() {
            for (j, y) in src.b.generators().iter().enumerate() {
                let lhs = t_c.apply(&src.lambda.eval(x, y)?)?;
                let rhs = dst.lambda.eval(&t_a.apply(x)?, &t_b.apply(y)?)?;
                if lhs != rhs {
                    return Err(Error::Incompatible(i, j));
                }
            }
        }
        Ok(DiagonalHom { src: src.clone(), dst: dst.clone(), t_a, t_b, t_c })
    }

    pub fn apply(&self, h: &HeisElem) -> Result<HeisElem, Error> {
        self.dst.elem(self.t_a.apply(&h.a)?, self.t_b.apply(&h.b)?, self.t_c.apply(&h.c)?)
    }
}

/// The GHG of a direct sum of tuples sharing the same centre, together with
/// the product-to-sum homomorphism `theta`.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub parts: Vec<GhgDescriptor>,
    pub total: GhgDescriptor,
}

/// Build the direct-sum GHG. All summands must satisfy ND-C and share `C`.
pub fn direct_sum(parts: &[GhgDescriptor]) -> Result<DirectSum, Error> {
    let first = parts.first().ok_or_else(|| Error::Validation("empty direct sum".into()))?;
    let c = first.c.clone();
    for p in parts {
        if p.c != c {
            return Err(Error::Validation("direct sum requires a common centre group".into()));
        }
        if !p.check_ndc().is_ndc {
            return Err(Error::Validation("direct sum requires ND-C summands".into()));
        }
    }
    let a = FinAbGroup::direct_sum(&parts.iter().map(|p| p.a.clone()).collect::<Vec<_>>());
    let b = FinAbGroup::direct_sum(&parts.iter().map(|p| p.b.clone()).collect::<Vec<_>>());
    // block-diagonal value table: cross terms between distinct summands vanish
    let mut vals = vec![vec![vec![0i64; c.rank()]; b.rank()]; a.rank()];
    let mut a_off = 0;
    let mut b_off = 0;
    for p in parts {
        for i in 0..p.a.rank() {
            for j in 0..p.b.rank() {
                let v = p.lambda.eval(&p.a.generator(i), &p.b.generator(j))?;
                vals[a_off + i][b_off + j] = v.coords().to_vec();
            }
        }
        a_off += p.a.rank();
        b_off += p.b.rank();
    }
    let lambda = Pairing::new(a, b, c, vals)?;
    let total = GhgDescriptor::new(lambda, None)?;
    Ok(DirectSum { parts: parts.to_vec(), total })
}

impl DirectSum {
    /// The injection of the `i`-th summand.
    pub fn inject(&self, i: usize, h: &HeisElem) -> Result<HeisElem, Error> {
        let mut a_coords = Vec::new();
        let mut b_coords = Vec::new();
        for (k, p) in self.parts.iter().enumerate() {
            if k == i {
                a_coords.extend_from_slice(h.a.coords());
                b_coords.extend_from_slice(h.b.coords());
            } else {
                a_coords.extend(std::iter::repeat(0).take(p.group_a().rank()));
                b_coords.extend(std::iter::repeat(0).take(p.group_b().rank()));
            }
        }
        self.total.elem(
            self.total.group_a().element(&a_coords)?,
            self.total.group_b().element(&b_coords)?,
            h.c.clone(),
        )
    }

    /// `theta(h_1, ..., h_m) = t_1(h_1) ... t_m(h_m)`.
    pub fn theta(&self, hs: &[HeisElem]) -> Result<HeisElem, Error> {
        if hs.len() != self.parts.len() {
            return Err(Error::Validation("component count mismatch".into()));
        }
        let mut acc = self.total.identity();
        for (i, h) in hs.iter().enumerate() {
            acc = self.total.multiply(&acc, &self.inject(i, h)?)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rand_elem(rng: &mut rand_chacha::ChaCha8Rng, d: &GhgDescriptor) -> HeisElem {
        let pick = |g: &FinAbGroup, rng: &mut rand_chacha::ChaCha8Rng| {
            let coords: Vec<i64> =
                g.factors().iter().map(|&m| rng.gen_range(0..m as i64)).collect();
            g.element(&coords).unwrap()
        };
        HeisElem {
            a: pick(d.group_a(), rng),
            b: pick(d.group_b(), rng),
            c: pick(d.group_c(), rng),
        }
    }

    #[test]
    fn identity_and_base_case_square() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let h = d.elem_i64(&[1], &[1], &[0]).unwrap();
        assert_eq!(d.multiply(&h, &d.identity()).unwrap(), h);
        let sq = d.multiply(&h, &h).unwrap();
        assert_eq!(sq, d.elem_i64(&[2], &[2], &[1]).unwrap());
    }

    #[test]
    fn inverse_formula() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let central = d.elem_i64(&[0], &[0], &[2]).unwrap();
        assert_eq!(d.inverse(&central), d.elem_i64(&[0], &[0], &[1]).unwrap());
        let h = d.elem_i64(&[1], &[2], &[0]).unwrap();
        assert_eq!(d.inverse(&h), d.elem_i64(&[2], &[1], &[2]).unwrap());
    }

    #[test]
    fn group_axioms_randomised() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for desc in [GhgDescriptor::base_case(3).unwrap(), GhgDescriptor::base_case(4).unwrap()] {
            for _ in 0..1000 {
                let x = rand_elem(&mut rng, &desc);
                let y = rand_elem(&mut rng, &desc);
                let z = rand_elem(&mut rng, &desc);
                let lhs = desc.multiply(&desc.multiply(&x, &y).unwrap(), &z).unwrap();
                let rhs = desc.multiply(&x, &desc.multiply(&y, &z).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "associativity failed");
                assert_eq!(desc.multiply(&x, &desc.inverse(&x)).unwrap(), desc.identity());
                // commutator formula equals the four-fold product
                let four = desc
                    .multiply(
                        &desc.multiply(&x, &y).unwrap(),
                        &desc.multiply(&desc.inverse(&x), &desc.inverse(&y)).unwrap(),
                    )
                    .unwrap();
                assert_eq!(desc.commutator(&x, &y).unwrap(), four);
            }
        }
    }

    #[test]
    fn commutator_of_generators() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let x = d.elem_i64(&[1], &[0], &[0]).unwrap();
        let y = d.elem_i64(&[0], &[1], &[0]).unwrap();
        assert_eq!(d.commutator(&x, &y).unwrap(), d.elem_i64(&[0], &[0], &[1]).unwrap());
        assert_eq!(d.commutator(&x, &x).unwrap(), d.identity());
    }

    #[test]
    fn centre_of_ndc_tuple_is_c() {
        let d = GhgDescriptor::base_case(5).unwrap();
        let info = d.centre_and_derived();
        assert_eq!(info.centre_order, 5);
        assert!(info.k_a.is_trivial() && info.k_b.is_trivial());
    }

    #[test]
    fn centre_of_zero_pairing_is_everything() {
        let z3 = FinAbGroup::cyclic(3);
        let lambda = Pairing::cyclic(z3.clone(), z3.clone(), 3, vec![vec![0]]).unwrap();
        let d = GhgDescriptor::new(lambda, None).unwrap();
        assert_eq!(d.centre_and_derived().centre_order, d.order());
        assert_eq!(d.centre_and_derived().derived_order, 1);
    }

    #[test]
    fn derived_subgroup_of_base_6() {
        let d = GhgDescriptor::base_case(6).unwrap();
        // oracle: enumerate commutators of random pairs and collect them
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..2000 {
            let x = rand_elem(&mut rng, &d);
            let y = rand_elem(&mut rng, &d);
            seen.insert(d.commutator(&x, &y).unwrap());
        }
        assert_eq!(d.centre_and_derived().derived_order, 6);
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn ndc_checks() {
        assert!(GhgDescriptor::base_case(3).unwrap().check_ndc().is_ndc);
        assert!(GhgDescriptor::base_case(4).unwrap().check_ndc().is_ndc);

        // C not cyclic
        let z2 = FinAbGroup::cyclic(2);
        let c = FinAbGroup::new(vec![2, 2]).unwrap();
        let lambda = Pairing::new(
            z2.clone(),
            z2.clone(),
            c,
            vec![vec![vec![1, 0]]],
        )
        .unwrap();
        let d = GhgDescriptor::new(lambda, None).unwrap();
        let rep = d.check_ndc();
        assert!(!rep.is_ndc && !rep.c_cyclic);

        // |A| != |B| forces degeneracy
        let z4 = FinAbGroup::cyclic(4);
        let lambda = Pairing::cyclic(z4, z2, 4, vec![vec![2]]).unwrap();
        let d = GhgDescriptor::new(lambda, None).unwrap();
        let rep = d.check_ndc();
        assert!(!rep.is_ndc && !rep.sides_same_order);
        assert_eq!(rep.left_kernel_order, 2);
        // oracle: enumerate the kernel directly
        let mut kernel = 0;
        for a in d.group_a().elements() {
            if d.group_b()
                .elements()
                .all(|b| d.lambda().eval(&a, &b).unwrap().is_zero())
            {
                kernel += 1;
            }
        }
        assert_eq!(kernel, 2);
    }

    #[test]
    fn canonical_autos_act_as_stated() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let neg_left = d.canonical_auto(CanonicalAuto::NegLeft).unwrap();
        let h = d.elem_i64(&[1], &[1], &[1]).unwrap();
        assert_eq!(neg_left.apply(&h).unwrap(), d.elem_i64(&[2], &[1], &[2]).unwrap());
        let neg_both = d.canonical_auto(CanonicalAuto::NegBoth).unwrap();
        let central = d.elem_i64(&[0], &[0], &[2]).unwrap();
        assert_eq!(neg_both.apply(&central).unwrap(), central);
    }

    #[test]
    fn flip_is_an_involution_on_base_5() {
        let d = GhgDescriptor::base_case(5).unwrap();
        let flip = d.canonical_auto(CanonicalAuto::Flip).unwrap();
        for h in d.elements() {
            assert_eq!(flip.apply(&flip.apply(&h).unwrap()).unwrap(), h);
        }
    }

    #[test]
    fn flip_requires_symmetry() {
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        let lambda = Pairing::cyclic(z4, z2, 4, vec![vec![2]]).unwrap();
        let d = GhgDescriptor::new(lambda, None).unwrap();
        assert!(d.canonical_auto(CanonicalAuto::Flip).is_err());
    }

    #[test]
    fn diagonal_hom_identity_and_incompatible() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let id = DiagonalHom::new(
            &d,
            &d,
            GroupHom::identity(d.group_a()),
            GroupHom::identity(d.group_b()),
            GroupHom::identity(d.group_c()),
        )
        .unwrap();
        let h = d.elem_i64(&[1], &[2], &[0]).unwrap();
        assert_eq!(id.apply(&h).unwrap(), h);

        // t_C = 2 is incompatible with t_A = t_B = 1 since 2*lambda(1,1) != lambda(1,1)
        let bad = DiagonalHom::new(
            &d,
            &d,
            GroupHom::identity(d.group_a()),
            GroupHom::identity(d.group_b()),
            GroupHom::new(d.group_c().clone(), d.group_c().clone(), vec![vec![2]]).unwrap(),
        );
        assert!(matches!(bad, Err(Error::Incompatible(0, 0))));
    }

    #[test]
    fn diagonal_hom_preserves_products() {
        let d = GhgDescriptor::base_case(5).unwrap();
        // u x u^{-1} x id is a diagonal automorphism; u = 2, inverse 3 mod 5
        let hom = DiagonalHom::new(
            &d,
            &d,
            GroupHom::new(d.group_a().clone(), d.group_a().clone(), vec![vec![2]]).unwrap(),
            GroupHom::new(d.group_b().clone(), d.group_b().clone(), vec![vec![3]]).unwrap(),
            GroupHom::identity(d.group_c()),
        )
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = rand_elem(&mut rng, &d);
            let y = rand_elem(&mut rng, &d);
            let lhs = hom.apply(&d.multiply(&x, &y).unwrap()).unwrap();
            let rhs = d.multiply(&hom.apply(&x).unwrap(), &hom.apply(&y).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn direct_sum_of_two_base_3() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let ds = direct_sum(&[d.clone(), d.clone()]).unwrap();
        assert_eq!(ds.total.group_a().factors(), &[3, 3]);
        assert_eq!(ds.total.order(), 3u64.pow(5));
        assert!(ds.total.check_ndc().is_ndc);

        // theta is a homomorphism
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x = [rand_elem(&mut rng, &d), rand_elem(&mut rng, &d)];
            let y = [rand_elem(&mut rng, &d), rand_elem(&mut rng, &d)];
            let xy = [
                d.multiply(&x[0], &y[0]).unwrap(),
                d.multiply(&x[1], &y[1]).unwrap(),
            ];
            let lhs = ds.theta(&xy).unwrap();
            let rhs = ds
                .total
                .multiply(&ds.theta(&x).unwrap(), &ds.theta(&y).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }

        // kernel of theta: central tuples summing to zero; here of size 3
        let mut kernel = 0;
        for c1 in d.group_c().elements() {
            for c2 in d.group_c().elements() {
                let t = [d.central(&c1).unwrap(), d.central(&c2).unwrap()];
                if ds.theta(&t).unwrap() == ds.total.identity() {
                    assert!(c1.add(&c2).unwrap().is_zero());
                    kernel += 1;
                }
            }
        }
        assert_eq!(kernel, 3);

        // theta is surjective: image cardinality equals |H|
        let mut image = std::collections::HashSet::new();
        for h1 in d.elements() {
            for h2 in d.elements() {
                image.insert(fmt_elem(&ds.theta(&[h1.clone(), h2.clone()]).unwrap()));
            }
        }
        assert_eq!(image.len() as u64, ds.total.order());
    }

    fn fmt_elem(h: &HeisElem) -> String {
        format!("{:?}|{:?}|{:?}", h.a.coords(), h.b.coords(), h.c.coords())
    }

    #[test]
    fn single_summand_direct_sum_is_identity_construction() {
        let d = GhgDescriptor::base_case(3).unwrap();
        let ds = direct_sum(&[d.clone()]).unwrap();
        assert_eq!(ds.total.group_a(), d.group_a());
        assert_eq!(ds.total.lambda().cyclic_table().unwrap(), d.lambda().cyclic_table().unwrap());
        let h = d.elem_i64(&[2], &[1], &[2]).unwrap();
        assert_eq!(ds.theta(std::slice::from_ref(&h)).unwrap(), h);
    }

    #[test]
    fn base_case_even_orders() {
        let d = GhgDescriptor::base_case(4).unwrap();
        assert_eq!(d.order(), 128);
        assert_eq!(d.centre_and_derived().centre_order, 8);
    }
}
