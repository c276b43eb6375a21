//! Orbits of complex lines under `H/Z` acting through the Schrödinger
//! representation, their overlap and angle maps, the Hermitian operator
//! `Upsilon` and the clinometric eigenvalue relation, equiangularity and
//! regularity classification, symmetry groups, and the exact eigenbasis of
//! `Upsilon` on order-class functions in the Base Case.

use crate::abelian::GroupElement;
use crate::autgrp::{self, delta, Automorphism};
use crate::error::Error;
use crate::ghg::GhgDescriptor;
use crate::linalg::{C64, CMat};
use crate::schrodinger::{sigma_apply, RepConfig, StateVector};
use num_integer::Integer;
use num_rational::Rational64;

/// A complex line: a unit generator with the phase fixed by making its first
/// entry of largest modulus positive real.
#[derive(Debug, Clone)]
pub struct Line {
    v: StateVector,
}

impl Line {
    pub fn new(v: &StateVector) -> Result<Self, Error> {
        let n = v.norm();
        if n < 1e-12 {
            return Err(Error::Validation("cannot build a line from the zero vector".into()));
        }
        let mut values: Vec<C64> = v.values.iter().map(|z| z / n).collect();
        let mut best = 0;
        for (i, z) in values.iter().enumerate() {
            if z.norm() > values[best].norm() {
                best = i;
            }
        }
        let phase = values[best] / values[best].norm();
        for z in values.iter_mut() {
            *z *= phase.conj();
        }
        Ok(Line { v: StateVector::from_values(&v.domain, values)? })
    }

    pub fn generator(&self) -> &StateVector {
        &self.v
    }

    /// Phase-free equality: `|<v, w>| > 1 - tol`.
    pub fn equals(&self, other: &Line, tol: f64) -> bool {
        self.v.inner(&other.v).norm() > 1.0 - tol
    }
}

/// Default tolerance for line equality inside orbit computations.
pub const LINE_EQ_TOL: f64 = 1e-9;

/// Act on a line by a class `gamma` of `H/Z`, through the zero-lift section
/// (the induced map on lines is independent of the section).
pub fn act(cfg: &RepConfig, gamma: &GroupElement, line: &Line) -> Result<Line, Error> {
    let h = cfg.desc().zero_section(gamma)?;
    Line::new(&sigma_apply(cfg, &h, line.generator())?)
}

/// An orbit of a line under `H/Z`, with its stabiliser.
#[derive(Debug, Clone)]
pub struct Bouquet {
    pub base: Line,
    /// Distinct lines of the orbit, each keyed by one class mapping the base
    /// line onto it.
    pub lines: Vec<(GroupElement, Line)>,
    /// The stabiliser of the base line in `H/Z`.
    pub stabilizer: Vec<GroupElement>,
}

impl Bouquet {
    pub fn is_free(&self) -> bool {
        self.stabilizer.len() == 1
    }

    pub fn contains(&self, line: &Line, tol: f64) -> bool {
        self.lines.iter().any(|(_, l)| l.equals(line, tol))
    }
}

/// Compute the orbit of a line and its stabiliser by enumerating `H/Z`.
pub fn orbit_and_stabilizer(cfg: &RepConfig, line: &Line) -> Result<Bouquet, Error> {
    let abar = cfg.desc().abar();
    let mut lines: Vec<(GroupElement, Line)> = Vec::new();
    let mut stabilizer = Vec::new();
    for gamma in abar.elements() {
        let image = act(cfg, &gamma, line)?;
        if image.equals(line, LINE_EQ_TOL) {
            stabilizer.push(gamma.clone());
        }
        if !lines.iter().any(|(_, l)| l.equals(&image, LINE_EQ_TOL)) {
            lines.push((gamma, image));
        }
    }
    if lines.len() * stabilizer.len() != abar.order() as usize {
        return Err(Error::Internal(format!(
            "orbit-stabiliser mismatch: {} lines x {} stabiliser != {}",
            lines.len(),
            stabilizer.len(),
            abar.order()
        )));
    }
    Ok(Bouquet { base: line.clone(), lines, stabilizer })
}

/// Choice of section of `H -> H/Z` used to evaluate overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    /// The canonical section `D`; needs odd central order.
    Displacement,
    /// The zero lift `gamma -> h(a, b, 0)`; always available.
    ZeroLift,
}

/// Pick the displacement section when the central order is odd.
pub fn default_section(desc: &GhgDescriptor) -> Section {
    if desc.group_c().order() % 2 == 1 {
        Section::Displacement
    } else {
        Section::ZeroLift
    }
}

/// The overlap map `gamma -> <v, R(gamma) v>` over all of `H/Z`, with the
/// angle map as absolute values.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    pub section: Section,
    /// Indexed by the enumeration order of `H/Z`.
    pub values: Vec<C64>,
    pub angles: Vec<f64>,
}

pub fn overlap_table(
    cfg: &RepConfig,
    line: &Line,
    section: Section,
) -> Result<OverlapTable, Error> {
    let desc = cfg.desc();
    let abar = desc.abar();
    let v = line.generator();
    let mut values = Vec::with_capacity(abar.order() as usize);
    for gamma in abar.elements() {
        let lift = match section {
            Section::Displacement => autgrp::dmap(desc, &gamma)?,
            Section::ZeroLift => desc.zero_section(&gamma)?,
        };
        values.push(v.inner(&sigma_apply(cfg, &lift, v)?));
    }
    let angles = values.iter().map(|z| z.norm()).collect();
    Ok(OverlapTable { section, values, angles })
}

/// Coefficients of the rank-one projector onto the line in the displacement
/// basis: `Pi = sum_a l_a D(a)` with `s l_{-a} = <v, D(a) v>`. Odd `r` only.
pub fn projector_decompose(cfg: &RepConfig, line: &Line) -> Result<Vec<C64>, Error> {
    let desc = cfg.desc();
    let abar = desc.abar();
    let s = desc.group_a().order() as f64;
    let table = overlap_table(cfg, line, Section::Displacement)?;
    let mut coeffs = vec![C64::new(0.0, 0.0); table.values.len()];
    for gamma in abar.elements() {
        // l_a = overlap(-a) / s
        let idx = gamma.index() as usize;
        coeffs[idx] = table.values[gamma.neg().index() as usize] / s;
    }
    Ok(coeffs)
}

/// `psi(delta(gamma, gamma'))` in the chosen central character.
pub fn psi_delta(cfg: &RepConfig, x: &GroupElement, y: &GroupElement) -> Result<C64, Error> {
    Ok(cfg.p_value(&delta(cfg.desc(), x, y)?))
}

/// Apply `Upsilon_psi`: `(Upsilon f)(gamma') = sum_gamma
/// psi(delta(gamma, gamma')) f(gamma)` on functions on `H/Z`.
pub fn upsilon_apply(cfg: &RepConfig, f: &[C64]) -> Result<Vec<C64>, Error> {
    let abar = cfg.desc().abar();
    let n = abar.order() as usize;
    if f.len() != n {
        return Err(Error::Validation("function length does not match |H/Z|".into()));
    }
    // materialise the matrix only in small dimension
    if cfg.desc().group_a().order() <= 16 {
        let m = upsilon_matrix(cfg)?;
        return Ok(m.mul_vec(f));
    }
    let elems: Vec<GroupElement> = abar.elements().collect();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (j, gp) in elems.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (i, g) in elems.iter().enumerate() {
            acc += psi_delta(cfg, g, gp)? * f[i];
        }
        out[j] = acc;
    }
    Ok(out)
}

/// The matrix of `Upsilon_psi` with entries `M[gamma'][gamma] =
/// psi(delta(gamma, gamma'))`; Hermitian by skew symmetry of `delta`.
pub fn upsilon_matrix(cfg: &RepConfig) -> Result<CMat, Error> {
    let abar = cfg.desc().abar();
    let elems: Vec<GroupElement> = abar.elements().collect();
    let n = elems.len();
    let mut m = CMat::zero(n, n);
    for (j, gp) in elems.iter().enumerate() {
        for (i, g) in elems.iter().enumerate() {
            m[(j, i)] = psi_delta(cfg, g, gp)?;
        }
    }
    Ok(m)
}

/// Residuals of the clinometric relation for a bouquet: the squared angle
/// map is an eigenvector of `Upsilon` with eigenvalue `|H/Z| / s`, and its
/// values sum to the same number.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ClinometricReport {
    pub eigenvalue: f64,
    pub eigen_residual_inf: f64,
    pub scalar_sum: f64,
    pub scalar_residual: f64,
}

pub fn clinometric_check(cfg: &RepConfig, bouquet: &Bouquet) -> Result<ClinometricReport, Error> {
    let desc = cfg.desc();
    let table = overlap_table(cfg, &bouquet.base, default_section(desc))?;
    let asq: Vec<C64> = table.angles.iter().map(|&a| C64::new(a * a, 0.0)).collect();
    let eigenvalue = desc.abar().order() as f64 / desc.group_a().order() as f64;
    let image = upsilon_apply(cfg, &asq)?;
    let eigen_residual_inf = image
        .iter()
        .zip(&asq)
        .map(|(y, x)| (y - x * eigenvalue).norm())
        .fold(0.0, f64::max);
    let scalar_sum: f64 = table.angles.iter().map(|a| a * a).sum();
    Ok(ClinometricReport {
        eigenvalue,
        eigen_residual_inf,
        scalar_sum,
        scalar_residual: (scalar_sum - eigenvalue).abs(),
    })
}

/// Classification of a free bouquet against equiangularity and per-orbit
/// regularity.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Classification {
    pub equiangular: bool,
    /// Mean angle off the identity.
    pub angle_mean: f64,
    /// Largest deviation of an off-identity angle from the mean.
    pub angle_spread: f64,
    /// The forced equiangular value `1/sqrt(s+1)`.
    pub theoretical_value: f64,
    pub regular: bool,
    pub per_orbit: Vec<OrbitStat>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OrbitStat {
    pub size: usize,
    pub mean: f64,
    pub spread: f64,
}

/// Decide equiangularity and regularity w.r.t. an orbit partition of
/// `H/Z` minus the identity (index sets into the enumeration).
pub fn classify(
    cfg: &RepConfig,
    bouquet: &Bouquet,
    partition: &[Vec<usize>],
    angle_tol: f64,
) -> Result<Classification, Error> {
    let desc = cfg.desc();
    let s = desc.group_a().order();
    let n = desc.abar().order() as usize;
    if desc.abar().order() != s * s {
        return Err(Error::Validation(
            "an equiangular bouquet forces |H/Z| = s^2; refusing other inputs".into(),
        ));
    }
    if !bouquet.is_free() {
        return Err(Error::Validation(
            "equiangularity and regularity are defined for free bouquets only".into(),
        ));
    }
    let mut covered = vec![false; n];
    covered[0] = true;
    for block in partition {
        for &i in block {
            if i == 0 || i >= n || covered[i] {
                return Err(Error::Validation(
                    "partition must cover each nonidentity class exactly once".into(),
                ));
            }
            covered[i] = true;
        }
    }
    if covered.iter().any(|&c| !c) {
        return Err(Error::Validation("partition does not cover H/Z minus the identity".into()));
    }

    let table = overlap_table(cfg, &bouquet.base, default_section(desc))?;
    let off_identity: Vec<f64> = (1..n).map(|i| table.angles[i]).collect();
    let angle_mean = off_identity.iter().sum::<f64>() / off_identity.len() as f64;
    let angle_spread =
        off_identity.iter().map(|a| (a - angle_mean).abs()).fold(0.0, f64::max);
    let equiangular = angle_spread < angle_tol;

    let mut per_orbit = Vec::with_capacity(partition.len());
    let mut regular = true;
    for block in partition {
        let vals: Vec<f64> = block.iter().map(|&i| table.angles[i]).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().map(|a| (a - mean).abs()).fold(0.0, f64::max);
        if spread >= angle_tol {
            regular = false;
        }
        per_orbit.push(OrbitStat { size: block.len(), mean, spread });
    }
    Ok(Classification {
        equiangular,
        angle_mean,
        angle_spread,
        theoretical_value: 1.0 / ((s as f64) + 1.0).sqrt(),
        regular,
        per_orbit,
    })
}

/// Partition the nonidentity classes of `H/Z` by additive order
/// (the `Sp`-orbit partition in the Base Case).
pub fn partition_by_order(desc: &GhgDescriptor) -> Vec<Vec<usize>> {
    let abar = desc.abar();
    let mut blocks: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
    for gamma in abar.elements() {
        if gamma.is_zero() {
            continue;
        }
        blocks.entry(gamma.order()).or_default().push(gamma.index() as usize);
    }
    blocks.into_values().collect()
}

/// Partition the nonidentity classes of `H/Z` into orbits of the full
/// symplectic group (enumerated; small descriptors only).
pub fn partition_by_sp_orbits(desc: &GhgDescriptor) -> Result<Vec<Vec<usize>>, Error> {
    let sps = autgrp::enumerate_symplectic(desc)?;
    let abar = desc.abar();
    let n = abar.order() as usize;
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut blocks = Vec::new();
    for gamma in abar.elements() {
        let idx = gamma.index() as usize;
        if seen[idx] {
            continue;
        }
        let mut orbit = Vec::new();
        for sp in &sps {
            let img = sp.apply(&gamma)?.index() as usize;
            if !seen[img] {
                seen[img] = true;
                orbit.push(img);
            }
        }
        orbit.sort_unstable();
        blocks.push(orbit);
    }
    Ok(blocks)
}

/// Result of testing candidate outer classes for membership in the symmetry
/// group of a bouquet.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    /// Indices (into the candidate list) of classes stabilising the bouquet.
    pub members: Vec<usize>,
    /// Largest defect of the angle-map invariance cross-check over members.
    pub angle_invariance_defect: f64,
}

/// Test which candidate automorphisms (eta = 0 representatives of outer
/// classes) map the bouquet onto itself under their Weil operators.
pub fn symmetry_group(
    cfg: &RepConfig,
    bouquet: &Bouquet,
    candidates: &[Automorphism],
    seed: u64,
) -> Result<SymmetryReport, Error> {
    let mut members = Vec::new();
    let mut defect = 0.0f64;
    let table = overlap_table(cfg, &bouquet.base, default_section(cfg.desc()))?;
    for (i, auto) in candidates.iter().enumerate() {
        let t = autgrp::weil_solve(cfg, |h| auto.apply(h), seed ^ (i as u64))?;
        let moved = Line::new(&StateVector::from_values(
            &bouquet.base.generator().domain,
            t.mul_vec(&bouquet.base.generator().values),
        )?)?;
        if bouquet.contains(&moved, LINE_EQ_TOL) {
            members.push(i);
            // invariance implies the angle map is constant on sp-orbits
            for gamma in cfg.desc().abar().elements() {
                let img = auto.sp.apply(&gamma)?;
                let d = (table.angles[gamma.index() as usize]
                    - table.angles[img.index() as usize])
                    .abs();
                defect = defect.max(d);
            }
        }
    }
    Ok(SymmetryReport { members, angle_invariance_defect: defect })
}

/// The d = 3 equiangular fiducial `(0, 1, -1)/sqrt(2)` (the Hesse SIC).
pub fn hesse_fiducial() -> StateVector {
    let domain = crate::abelian::FinAbGroup::cyclic(3);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_values(
        &domain,
        vec![C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)],
    )
    .expect("length 3")
}

/// The exact `Upsilon` eigen-structure on order-class functions for the Base
/// Case `H_d`, odd `d >= 3`: the partition `O_j` of `(Z/d)^2` by additive
/// order, the subgroup indicators `w_j` with `Upsilon w_j = (d/j)^2 w_{d/j}`,
/// and the rational eigenbasis `u_j` with `Upsilon u_j = d u_j`.
#[derive(Debug, Clone)]
pub struct BaseCaseEigenbasis {
    pub d: u64,
    /// All divisors of `d`, ascending.
    pub divisors: Vec<u64>,
    /// `O_j`: indices of the elements of additive order exactly `j`.
    pub orbit_indices: Vec<Vec<usize>>,
    /// `w_j`: indicator of the subgroup `j (Z/d)^2`, per divisor.
    pub w: Vec<Vec<i64>>,
    /// Divisors `j <= sqrt(d)`.
    pub small_divisors: Vec<u64>,
    /// `u_j = j^2/(j^2+d) w_j + d/(j^2+d) w_{d/j}`, per small divisor.
    pub u_basis: Vec<Vec<Rational64>>,
}

pub fn base_case_eigenbasis(d: u64) -> Result<BaseCaseEigenbasis, Error> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Validation("the eigenbasis is built for odd d >= 3".into()));
    }
    let divisors: Vec<u64> = (1..=d).filter(|j| d % j == 0).collect();
    let n = (d * d) as usize;
    let order_of = |idx: usize| -> u64 {
        let a = (idx as u64) / d;
        let b = (idx as u64) % d;
        let oa = if a == 0 { 1 } else { d / d.gcd(&a) };
        let ob = if b == 0 { 1 } else { d / d.gcd(&b) };
        oa.lcm(&ob)
    };
    let orbit_indices: Vec<Vec<usize>> = divisors
        .iter()
        .map(|&j| (0..n).filter(|&i| order_of(i) == j).collect())
        .collect();
    // gamma lies in j (Z/d)^2 iff its order divides d/j
    let w: Vec<Vec<i64>> = divisors
        .iter()
        .map(|&j| (0..n).map(|i| i64::from((d / j) % order_of(i) == 0)).collect())
        .collect();
    let small_divisors: Vec<u64> = divisors.iter().copied().filter(|&j| j * j <= d).collect();
    let u_basis = small_divisors
        .iter()
        .map(|&j| {
            let denom = (j * j + d) as i64;
            let cj = Rational64::new((j * j) as i64, denom);
            let cdj = Rational64::new(d as i64, denom);
            let wj = &w[divisors.iter().position(|&x| x == j).unwrap()];
            let wdj = &w[divisors.iter().position(|&x| x == d / j).unwrap()];
            (0..n)
                .map(|i| cj * Rational64::from(wj[i]) + cdj * Rational64::from(wdj[i]))
                .collect()
        })
        .collect();
    Ok(BaseCaseEigenbasis { d, divisors, orbit_indices, w, small_divisors, u_basis })
}

/// Exact evaluation of `Upsilon_p(w_j)` for the Base Case with any unit `u`:
/// the value at `gamma'` is a character sum over the subgroup `j (Z/d)^2`,
/// equal to `(d/j)^2` when the character is trivial there and `0` otherwise.
pub fn upsilon_on_w_exact(d: u64, j: u64, u: i64) -> Result<Vec<i64>, Error> {
    if d == 0 || j == 0 || d % j != 0 {
        return Err(Error::Validation("j must divide d".into()));
    }
    if (u.rem_euclid(d as i64) as u64).gcd(&d) != 1 {
        return Err(Error::Validation("u must be a unit mod d".into()));
    }
    let n = (d * d) as usize;
    let sub_order = ((d / j) * (d / j)) as i64;
    let mut out = vec![0i64; n];
    for (idx, entry) in out.iter_mut().enumerate() {
        let a = (idx as u64 / d) as i64;
        let b = (idx as u64 % d) as i64;
        // the character gamma -> psi(delta(gamma, gamma')) restricted to
        // j (Z/d)^2 is trivial iff u*j*a and u*j*b vanish mod d
        let triv = (u as i128 * j as i128 * b as i128).rem_euclid(d as i128) == 0
            && (u as i128 * j as i128 * a as i128).rem_euclid(d as i128) == 0;
        *entry = if triv { sub_order } else { 0 };
    }
    Ok(out)
}


#[cfg(test)]
mod transport_tests {
    use super::*;
    use crate::abelian::{FinAbGroup, GroupHom};
    use crate::ghg::GhgDescriptor;
    use rand::{Rng, SeedableRng};

    fn rand_line(rng: &mut rand_chacha::ChaCha8Rng, g: &FinAbGroup) -> Line {
        let values: Vec<C64> = (0..g.order())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Line::new(&StateVector::from_values(g, values).unwrap()).unwrap()
    }

    #[test]
    fn classifier_refuses_unbalanced_quotients() {
        // |A| != |B| makes |H/Z| != s^2; the classifier refuses regardless
        // of freeness
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        let lambda =
            crate::abelian::Pairing::cyclic(z4.clone(), z2, 4, vec![vec![2]]).unwrap();
        let desc = GhgDescriptor::new(lambda, None).unwrap();
        let cfg = RepConfig::standard(desc.clone()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(83);
        let line = rand_line(&mut rng, desc.group_a());
        let orbit = orbit_and_stabilizer(&cfg, &line).unwrap();
        let err = classify(&cfg, &orbit, &[], 1e-7);
        assert!(matches!(err, Err(Error::Validation(msg)) if msg.contains("s^2")));
    }

    #[test]
    fn bouquet_image_depends_only_on_the_outer_class() {
        // composing with an inner automorphism leaves T(bouquet) unchanged
        let desc = GhgDescriptor::base_case(3).unwrap();
        let cfg = RepConfig::standard(desc.clone()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(85);
        let line = rand_line(&mut rng, desc.group_a());
        let orbit = orbit_and_stabilizer(&cfg, &line).unwrap();

        let sp = crate::autgrp::SpElement::new(&desc, vec![vec![1, 1], vec![0, 1]]).unwrap();
        let auto = crate::autgrp::auto_from_pair(
            &desc,
            GroupHom::zero(&desc.abar(), desc.group_c()),
            sp,
        )
        .unwrap();
        let inner =
            crate::autgrp::Automorphism::inner(&desc, &desc.elem_i64(&[1], &[2], &[0]).unwrap())
                .unwrap();
        let composed = auto.compose(&inner).unwrap();

        let t1 = crate::autgrp::weil_solve(&cfg, |h| auto.apply(h), 301).unwrap();
        let t2 = crate::autgrp::weil_solve(&cfg, |h| composed.apply(h), 302).unwrap();
        let move_line = |t: &CMat| {
            Line::new(
                &StateVector::from_values(
                    &orbit.base.generator().domain,
                    t.mul_vec(&orbit.base.generator().values),
                )
                .unwrap(),
            )
            .unwrap()
        };
        let b1 = orbit_and_stabilizer(&cfg, &move_line(&t1)).unwrap();
        let l2 = move_line(&t2);
        assert!(b1.contains(&l2, LINE_EQ_TOL), "image bouquet changed with the inner factor");
    }

    #[test]
    fn angle_map_transport_under_weil_images() {
        // a_{T(Y)} . spbar = a_Y
        let desc = GhgDescriptor::base_case(3).unwrap();
        let cfg = RepConfig::standard(desc.clone()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(87);
        let line = rand_line(&mut rng, desc.group_a());
        let table = overlap_table(&cfg, &line, Section::Displacement).unwrap();

        let sp = crate::autgrp::SpElement::new(&desc, vec![vec![1, 0], vec![1, 1]]).unwrap();
        let auto = crate::autgrp::auto_from_pair(
            &desc,
            GroupHom::zero(&desc.abar(), desc.group_c()),
            sp.clone(),
        )
        .unwrap();
        let t = crate::autgrp::weil_solve(&cfg, |h| auto.apply(h), 303).unwrap();
        let moved = Line::new(
            &StateVector::from_values(
                &line.generator().domain,
                t.mul_vec(&line.generator().values),
            )
            .unwrap(),
        )
        .unwrap();
        let moved_table = overlap_table(&cfg, &moved, Section::Displacement).unwrap();
        for gamma in desc.abar().elements() {
            let img = sp.apply(&gamma).unwrap();
            let lhs = moved_table.angles[img.index() as usize];
            let rhs = table.angles[gamma.index() as usize];
            assert!((lhs - rhs).abs() < 1e-8, "transport defect at {gamma:?}");
        }
    }
}
