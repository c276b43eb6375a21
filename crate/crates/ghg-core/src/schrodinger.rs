//! The representation space `M(A)` of complex functions on `A`, the left and
//! right Schrödinger representations, characters, the Stone-von-Neumann
//! classification, Fourier duality between the two sides, and tensor
//! factorisation over direct sums.

use crate::abelian::{FinAbGroup, GroupElement};
use crate::error::Error;
use crate::ghg::{DirectSum, GhgDescriptor, HeisElem};
use crate::linalg::{self, C64, CMat};
use num_integer::Integer;
use std::f64::consts::TAU;

/// Which Schrödinger representation: `sigma_p` on `M(A)` or `tau_p` on `M(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A Schrödinger representation choice: a descriptor together with the
/// exponential character `p(c) = exp(2 pi i u c / r)` of its cyclic centre.
#[derive(Debug, Clone, PartialEq)]
pub struct RepConfig {
    desc: GhgDescriptor,
    u: i64,
}

impl RepConfig {
    pub fn new(desc: GhgDescriptor, u: i64) -> Result<Self, Error> {
        if !desc.group_c().is_cyclic() {
            return Err(Error::Validation(
                "Schrödinger representations here need a cyclic C".into(),
            ));
        }
        Ok(RepConfig { desc, u })
    }

    /// The canonical faithful choice `u = 1`.
    pub fn standard(desc: GhgDescriptor) -> Result<Self, Error> {
        RepConfig::new(desc, 1)
    }

    pub fn desc(&self) -> &GhgDescriptor {
        &self.desc
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn r(&self) -> u64 {
        self.desc.group_c().order()
    }

    pub fn p_injective(&self) -> bool {
        let r = self.r();
        if r == 1 {
            return true;
        }
        (self.u.rem_euclid(r as i64) as u64).gcd(&r) == 1
    }

    /// `p(c)` for an element of `C`.
    pub fn p_value(&self, c: &GroupElement) -> C64 {
        let r = self.r();
        if r == 1 {
            return C64::new(1.0, 0.0);
        }
        let coord = c.coords().first().copied().unwrap_or(0);
        let e = (self.u as i128 * coord as i128).rem_euclid(r as i128) as f64;
        C64::from_polar(1.0, TAU * e / r as f64)
    }

    /// Dimension of the left representation space `M(A)`.
    pub fn dim_left(&self) -> usize {
        self.desc.group_a().order() as usize
    }

    pub fn dim_right(&self) -> usize {
        self.desc.group_b().order() as usize
    }

    pub fn dim(&self, side: Side) -> usize {
        match side {
            Side::Left => self.dim_left(),
            Side::Right => self.dim_right(),
        }
    }
}

/// A complex function on a finite abelian group, stored in the canonical
/// lexicographic coordinate order of its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub domain: FinAbGroup,
    pub values: Vec<C64>,
}

impl StateVector {
    pub fn zero(domain: &FinAbGroup) -> Self {
        StateVector {
            domain: domain.clone(),
            values: vec![C64::new(0.0, 0.0); domain.order() as usize],
        }
    }

    /// The basis vector `e_y`.
    pub fn basis(domain: &FinAbGroup, y: &GroupElement) -> Self {
        let mut v = StateVector::zero(domain);
        v.values[y.index() as usize] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_values(domain: &FinAbGroup, values: Vec<C64>) -> Result<Self, Error> {
        if values.len() != domain.order() as usize {
            return Err(Error::Validation(format!(
                "state vector length {} does not match |domain| = {}",
                values.len(),
                domain.order()
            )));
        }
        Ok(StateVector { domain: domain.clone(), values })
    }

    pub fn value_at(&self, x: &GroupElement) -> C64 {
        self.values[x.index() as usize]
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        linalg::inner(&self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.values)
    }

    pub fn normalized(&self) -> StateVector {
        StateVector { domain: self.domain.clone(), values: linalg::normalize(&self.values) }
    }
}

/// `(h . f)(x) = p(lambda(x, b) + c) f(x + a)` on `M(A)`.
pub fn sigma_apply(cfg: &RepConfig, h: &HeisElem, f: &StateVector) -> Result<StateVector, Error> {
    let d = cfg.desc();
    if f.domain != *d.group_a() {
        return Err(Error::Validation("state vector does not live on M(A)".into()));
    }
    let mut out = StateVector::zero(&f.domain);
    for x in f.domain.elements() {
        let phase = cfg.p_value(&d.lambda().eval(&x, &h.b)?.add(&h.c)?);
        let shifted = x.add(&h.a)?;
        out.values[x.index() as usize] = phase * f.value_at(&shifted);
    }
    Ok(out)
}

/// `(h . l)(y) = p(c - lambda(a, y + b)) l(y + b)` on `M(B)`.
pub fn tau_apply(cfg: &RepConfig, h: &HeisElem, l: &StateVector) -> Result<StateVector, Error> {
    let d = cfg.desc();
    if l.domain != *d.group_b() {
        return Err(Error::Validation("state vector does not live on M(B)".into()));
    }
    let mut out = StateVector::zero(&l.domain);
    for y in l.domain.elements() {
        let shifted = y.add(&h.b)?;
        let phase = cfg.p_value(&h.c.sub(&d.lambda().eval(&h.a, &shifted)?)?);
        out.values[y.index() as usize] = phase * l.value_at(&shifted);
    }
    Ok(out)
}

pub fn apply(
    cfg: &RepConfig,
    side: Side,
    h: &HeisElem,
    f: &StateVector,
) -> Result<StateVector, Error> {
    match side {
        Side::Left => sigma_apply(cfg, h, f),
        Side::Right => tau_apply(cfg, h, f),
    }
}

/// Matrix of the representation in the canonical basis of the relevant side.
pub fn rep_matrix(cfg: &RepConfig, h: &HeisElem, side: Side) -> Result<CMat, Error> {
    let domain = match side {
        Side::Left => cfg.desc().group_a().clone(),
        Side::Right => cfg.desc().group_b().clone(),
    };
    let cols: Result<Vec<Vec<C64>>, Error> = domain
        .elements()
        .map(|y| Ok(apply(cfg, side, h, &StateVector::basis(&domain, &y))?.values))
        .collect();
    Ok(CMat::from_columns(&cols?))
}

/// Closed-form character value of `sigma_p` (Left) or `tau_p` (Right):
/// `p(c) |A|` when `a = 0` and `lambda(A, b)` lies in `ker p`, else zero.
pub fn character(cfg: &RepConfig, h: &HeisElem, side: Side) -> C64 {
    let d = cfg.desc();
    let r = cfg.r();
    let u = cfg.u;
    let in_ker_p = |vals: Vec<GroupElement>| {
        vals.iter().all(|v| {
            let coord = v.coords().first().copied().unwrap_or(0);
            (u as i128 * coord as i128).rem_euclid(r as i128) == 0
        })
    };
    match side {
        Side::Left => {
            if !h.a.is_zero() {
                return C64::new(0.0, 0.0);
            }
            let gen_values: Vec<GroupElement> = d
                .group_a()
                .generators()
                .iter()
                .map(|x| d.lambda().eval(x, &h.b).expect("components match"))
                .collect();
            if in_ker_p(gen_values) {
                cfg.p_value(&h.c) * C64::new(d.group_a().order() as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }
        Side::Right => {
            if !h.b.is_zero() {
                return C64::new(0.0, 0.0);
            }
            let gen_values: Vec<GroupElement> = d
                .group_b()
                .generators()
                .iter()
                .map(|y| d.lambda().eval(&h.a, y).expect("components match"))
                .collect();
            if in_ker_p(gen_values) {
                cfg.p_value(&h.c) * C64::new(d.group_b().order() as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }
    }
}

/// The normalised discrete Fourier transform
/// `xi_p(f)(y) = s^{-1/2} sum_x f(x) p(lambda(x, y))`, intertwining
/// `sigma_p` with `tau_p`. Requires an injective `p`.
pub fn fourier_xi(cfg: &RepConfig, f: &StateVector) -> Result<StateVector, Error> {
    if !cfg.p_injective() {
        return Err(Error::Validation("fourier_xi needs an injective central character".into()));
    }
    let d = cfg.desc();
    if f.domain != *d.group_a() {
        return Err(Error::Validation("state vector does not live on M(A)".into()));
    }
    let s = d.group_a().order() as f64;
    let scale = C64::new(1.0 / s.sqrt(), 0.0);
    let b = d.group_b();
    let mut out = StateVector::zero(b);
    for y in b.elements() {
        let mut acc = C64::new(0.0, 0.0);
        for x in f.domain.elements() {
            acc += f.value_at(&x) * cfg.p_value(&d.lambda().eval(&x, &y)?);
        }
        out.values[y.index() as usize] = scale * acc;
    }
    Ok(out)
}

/// Inputs for the Stone-von-Neumann classification of a matrix representation.
pub struct SvInput<'a> {
    /// Images of every group element.
    pub matrices: &'a [CMat],
    /// Centre membership flag per element.
    pub central: &'a [bool],
    /// One element index per coset of the centre.
    pub coset_reps: &'a [usize],
}

/// The five equivalent SV conditions, evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvReport {
    /// chi vanishes off the centre and `|G/Z| = s^2`
    pub vanishing_and_count: bool,
    /// irreducible (character norm) and `|G/Z| = s^2`
    pub irreducible_and_count: bool,
    /// irreducible and chi vanishes off the centre
    pub irreducible_and_vanishing: bool,
    /// irreducible and the coset representatives have linearly independent images
    pub lin_indep_reps: bool,
    /// irreducible and the images of the representatives form a basis of `End(V)`
    pub basis_reps: bool,
    pub is_sv: bool,
}

/// Evaluate all five SV conditions and check their mutual consistency.
/// Inconsistency signals a bug upstream and is reported as an error.
pub fn sv_classify(input: &SvInput, tol: f64) -> Result<SvReport, Error> {
    let n = input.matrices.len();
    if n == 0 || input.central.len() != n {
        return Err(Error::Validation("SV input shape mismatch".into()));
    }
    let s = input.matrices[0].rows;
    let z: usize = input.central.iter().filter(|&&c| c).count();
    if z == 0 || n % z != 0 {
        return Err(Error::Validation("centre does not divide the group".into()));
    }
    let t = n / z;
    if input.coset_reps.len() != t {
        return Err(Error::Validation(format!(
            "expected {t} coset representatives, got {}",
            input.coset_reps.len()
        )));
    }

    let chi: Vec<C64> = input.matrices.iter().map(|m| m.trace()).collect();
    let off_centre_max = chi
        .iter()
        .zip(input.central)
        .filter(|(_, &c)| !c)
        .map(|(x, _)| x.norm())
        .fold(0.0, f64::max);
    let vanishing = off_centre_max < tol * s as f64;

    let char_norm: f64 = chi.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
    let irreducible = (char_norm - 1.0).abs() < tol * n as f64;

    let count = t == s * s;

    // Gram matrix of the representative images under the HS inner product
    let gram_ok = {
        let reps: Vec<&CMat> = input.coset_reps.iter().map(|&i| &input.matrices[i]).collect();
        let mut gram = CMat::zero(t, t);
        for i in 0..t {
            let di = reps[i].dagger();
            for j in 0..t {
                gram[(i, j)] = di.mul(reps[j]).trace();
            }
        }
        gram_nonsingular(&gram, tol)
    };
    let basis = gram_ok && t == s * s;

    let report = SvReport {
        vanishing_and_count: vanishing && count,
        irreducible_and_count: irreducible && count,
        irreducible_and_vanishing: irreducible && vanishing,
        lin_indep_reps: irreducible && gram_ok,
        basis_reps: irreducible && basis,
        is_sv: irreducible && count,
    };
    let all = [
        report.vanishing_and_count,
        report.irreducible_and_count,
        report.irreducible_and_vanishing,
        report.lin_indep_reps,
        report.basis_reps,
    ];
    if all.iter().any(|&x| x != report.is_sv) {
        return Err(Error::Internal(format!(
            "SV conditions disagree: {report:?} (they are provably equivalent)"
        )));
    }
    Ok(report)
}

fn gram_nonsingular(gram: &CMat, tol: f64) -> bool {
    let n = gram.rows;
    let scale = gram.max_abs().max(1e-300);
    let mut a = gram.clone();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().partial_cmp(&a[(y, col)].norm()).unwrap())
            .unwrap();
        if a[(pivot, col)].norm() < tol * scale {
            return false;
        }
        for j in 0..n {
            let tmp = a[(col, j)];
            a[(col, j)] = a[(pivot, j)];
            a[(pivot, j)] = tmp;
        }
        let p = a[(col, col)];
        for i in col + 1..n {
            let f = a[(i, col)] / p;
            for j in col..n {
                let sub = f * a[(col, j)];
                a[(i, j)] -= sub;
            }
        }
    }
    true
}

/// Build the SV input for a Schrödinger representation of a GHG, enumerating
/// every group element. Intended for small groups.
pub fn sv_input_for_ghg(
    cfg: &RepConfig,
    side: Side,
) -> Result<(Vec<CMat>, Vec<bool>, Vec<usize>), Error> {
    let d = cfg.desc();
    let info = d.centre_and_derived();
    let elems: Vec<HeisElem> = d.elements().collect();
    let mut matrices = Vec::with_capacity(elems.len());
    let mut central = Vec::with_capacity(elems.len());
    for h in &elems {
        matrices.push(rep_matrix(cfg, h, side)?);
        central.push(info.k_a.contains(&h.a) && info.k_b.contains(&h.b));
    }
    // one representative per coset of the centre h(K_A, K_B, C)
    let mut reps = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, h) in elems.iter().enumerate() {
        let key = coset_key(&info, h);
        if seen.insert(key) {
            reps.push(i);
        }
    }
    Ok((matrices, central, reps))
}

fn coset_key(info: &crate::ghg::CentreInfo, h: &HeisElem) -> (Vec<i64>, Vec<i64>) {
    // canonicalise (a, b) modulo K_A x K_B by taking the least coordinate
    // vector in the coset
    let reduce = |x: &GroupElement, sub: &crate::abelian::Subgroup| -> Vec<i64> {
        if sub.is_trivial() {
            return x.coords().to_vec();
        }
        subgroup_elements(sub)
            .iter()
            .map(|z| x.add(z).expect("same parent").coords().to_vec())
            .min()
            .expect("subgroup is nonempty")
    };
    (reduce(&h.a, &info.k_a), reduce(&h.b, &info.k_b))
}

fn subgroup_elements(s: &crate::abelian::Subgroup) -> Vec<GroupElement> {
    let mut set = std::collections::HashSet::new();
    let mut frontier = vec![s.ambient.zero()];
    set.insert(s.ambient.zero());
    while let Some(x) = frontier.pop() {
        for g in &s.generators {
            let y = x.add(g).expect("same parent");
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// The pointwise-product isomorphism `V : tensor of M(A_i) -> M(A)` on
/// elementary tensors, first factor slowest-varying.
pub fn tensor_to_function(ds: &DirectSum, factors: &[StateVector]) -> Result<StateVector, Error> {
    if factors.len() != ds.parts.len() {
        return Err(Error::Validation("factor count mismatch".into()));
    }
    for (f, p) in factors.iter().zip(&ds.parts) {
        if f.domain != *p.group_a() {
            return Err(Error::Validation("tensor factor on the wrong domain".into()));
        }
    }
    let a = ds.total.group_a().clone();
    let mut out = vec![C64::new(1.0, 0.0)];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.values.len());
        for v in &out {
            for w in &f.values {
                next.push(v * w);
            }
        }
        out = next;
    }
    StateVector::from_values(&a, out)
}

/// Apply the factored action: `p(c)` times the per-summand actions of
/// `h(a_i, b_i, 0)`, returning the image under `V` as a function on `A`.
pub fn tensor_factorize(
    cfg: &RepConfig,
    ds: &DirectSum,
    h: &HeisElem,
    factors: &[StateVector],
) -> Result<StateVector, Error> {
    if cfg.desc() != &ds.total {
        return Err(Error::Validation("config does not match the direct sum".into()));
    }
    let a_parts: Vec<FinAbGroup> = ds.parts.iter().map(|p| p.group_a().clone()).collect();
    let b_parts: Vec<FinAbGroup> = ds.parts.iter().map(|p| p.group_b().clone()).collect();
    let has = h.a.split(&a_parts)?;
    let hbs = h.b.split(&b_parts)?;
    let mut moved = Vec::with_capacity(factors.len());
    for (i, part) in ds.parts.iter().enumerate() {
        let cfg_i = RepConfig::new(part.clone(), cfg.u())?;
        let hi = part.elem(has[i].clone(), hbs[i].clone(), part.group_c().zero())?;
        moved.push(sigma_apply(&cfg_i, &hi, &factors[i])?);
    }
    let mut out = tensor_to_function(ds, &moved)?;
    let scale = cfg.p_value(&h.c);
    for v in out.values.iter_mut() {
        *v *= scale;
    }
    Ok(out)
}
