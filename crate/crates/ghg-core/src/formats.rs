//! External data formats: JSON schemas for groups, descriptors, elements,
//! state vectors, field/ideal configurations and search targets, plus the
//! string parser for group elements. Everything here accepts untrusted
//! input: all failures are reported as errors, never panics, and sizes are
//! capped before any allocation-heavy validation runs.

use crate::abelian::{FinAbGroup, Pairing};
use crate::arith::{ArithTuple, FracIdeal};
use crate::error::Error;
use crate::field::NumberFieldOrder;
use crate::ghg::{GhgDescriptor, HeisElem, RingStructure};
use crate::linalg::C64;
use crate::schrodinger::StateVector;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Hard caps applied to untrusted inputs before construction.
const MAX_GROUP_RANK: usize = 16;
const MAX_GROUP_ORDER: u64 = 1 << 24;
const MAX_GENERATORS: usize = 32;
const MAX_VECTOR_LEN: usize = 1 << 20;

fn parse_json<'a, T: Deserialize<'a>>(input: &'a str) -> Result<T, Error> {
    serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupDto {
    invariant_factors: Vec<u64>,
}

fn group_from_dto(dto: &GroupDto) -> Result<FinAbGroup, Error> {
    if dto.invariant_factors.len() > MAX_GROUP_RANK {
        return Err(Error::Validation("too many group factors".into()));
    }
    let mut order: u64 = 1;
    for &d in &dto.invariant_factors {
        if d == 0 {
            return Err(Error::Validation("group factor must be nonzero".into()));
        }
        order = order
            .checked_mul(d)
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or_else(|| Error::Validation("group order exceeds the supported bound".into()))?;
    }
    FinAbGroup::new(dto.invariant_factors.clone())
}

fn group_to_dto(g: &FinAbGroup) -> GroupDto {
    GroupDto { invariant_factors: g.factors().to_vec() }
}

#[derive(Debug, Serialize, Deserialize)]
struct DescriptorDto {
    #[serde(rename = "A")]
    a: GroupDto,
    #[serde(rename = "B")]
    b: GroupDto,
    #[serde(rename = "C")]
    c: GroupDto,
    lambda_matrix: Vec<Vec<i64>>,
    #[serde(default)]
    ring: Option<RingStructure>,
}

/// Parse a descriptor from its JSON form. `C` must be cyclic here: the wire
/// format stores the pairing as a plain integer table.
pub fn descriptor_from_json(input: &str) -> Result<GhgDescriptor, Error> {
    let dto: DescriptorDto = parse_json(input)?;
    let a = group_from_dto(&dto.a)?;
    let b = group_from_dto(&dto.b)?;
    let c = group_from_dto(&dto.c)?;
    if !c.is_cyclic() {
        return Err(Error::Validation("the JSON descriptor form needs a cyclic C".into()));
    }
    let r = c.order();
    if let Some(ring) = &dto.ring {
        if ring.generators.len() > MAX_GENERATORS {
            return Err(Error::Validation("too many ring generators".into()));
        }
        for g in &ring.generators {
            if g.on_a.len() > MAX_GROUP_RANK
                || g.on_b.len() > MAX_GROUP_RANK
                || g.on_a.iter().chain(&g.on_b).any(|row| row.len() > MAX_GROUP_RANK)
            {
                return Err(Error::Validation("ring action matrix too large".into()));
            }
        }
    }
    if dto.lambda_matrix.len() != a.rank()
        || dto.lambda_matrix.iter().any(|row| row.len() != b.rank())
    {
        return Err(Error::Validation("lambda_matrix shape must be rank(A) x rank(B)".into()));
    }
    let lambda = Pairing::cyclic(a, b, r, dto.lambda_matrix)?;
    GhgDescriptor::new(lambda, dto.ring)
}

pub fn descriptor_to_json(desc: &GhgDescriptor) -> Result<String, Error> {
    let dto = DescriptorDto {
        a: group_to_dto(desc.group_a()),
        b: group_to_dto(desc.group_b()),
        c: group_to_dto(desc.group_c()),
        lambda_matrix: desc.lambda().cyclic_table()?,
        ring: desc.ring().cloned(),
    };
    serde_json::to_string_pretty(&dto).map_err(|e| Error::Internal(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
struct StateVectorDto {
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Parse a state vector and bind it to a domain, checking length and
/// finiteness.
pub fn state_vector_from_json(input: &str, domain: &FinAbGroup) -> Result<StateVector, Error> {
    let dto: StateVectorDto = parse_json(input)?;
    if dto.re.len() != dto.im.len() {
        return Err(Error::Validation("re and im arrays differ in length".into()));
    }
    if dto.re.len() > MAX_VECTOR_LEN {
        return Err(Error::Validation("state vector too long".into()));
    }
    if dto.re.iter().chain(&dto.im).any(|x| !x.is_finite()) {
        return Err(Error::Validation("state vector entries must be finite".into()));
    }
    let values: Vec<C64> =
        dto.re.iter().zip(&dto.im).map(|(&re, &im)| C64::new(re, im)).collect();
    StateVector::from_values(domain, values)
}

/// Validate the raw shape of a state vector without binding to a domain.
pub fn state_vector_parts_from_json(input: &str) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let dto: StateVectorDto = parse_json(input)?;
    if dto.re.len() != dto.im.len() {
        return Err(Error::Validation("re and im arrays differ in length".into()));
    }
    Ok((dto.re, dto.im))
}

pub fn state_vector_to_json(v: &StateVector) -> String {
    let dto = StateVectorDto {
        re: v.values.iter().map(|z| z.re).collect(),
        im: v.values.iter().map(|z| z.im).collect(),
    };
    serde_json::to_string(&dto).expect("plain arrays always serialise")
}

/// Parse `"a,b,c"` coordinates into a group element triple: the flat list of
/// integers is split positionally into the `A`, `B` and `C` coordinates.
pub fn element_from_str(desc: &GhgDescriptor, input: &str) -> Result<HeisElem, Error> {
    if input.len() > 4096 {
        return Err(Error::Parse("element string too long".into()));
    }
    let parts: Result<Vec<i64>, _> =
        input.split(',').map(|p| p.trim().parse::<i64>()).collect();
    let coords = parts.map_err(|e| Error::Parse(format!("bad coordinate: {e}")))?;
    let (ra, rb, rc) =
        (desc.group_a().rank(), desc.group_b().rank(), desc.group_c().rank());
    if coords.len() != ra + rb + rc {
        return Err(Error::Parse(format!(
            "expected {} coordinates ({} for A, {} for B, {} for C), got {}",
            ra + rb + rc,
            ra,
            rb,
            rc,
            coords.len()
        )));
    }
    desc.elem_i64(&coords[..ra], &coords[ra..ra + rb], &coords[ra + rb..])
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldConfigDto {
    min_poly: Vec<i64>,
    #[serde(rename = "I")]
    ideal: Vec<String>,
    frak_f: Vec<String>,
    #[serde(default)]
    r: Option<u64>,
}

/// Parse a field/ideal configuration into an arithmetic tuple:
/// `{"min_poly":[-2,0,1],"I":["1","th"],"frak_f":["7","3+th"],"r":null}`.
pub fn field_config_from_json(input: &str) -> Result<ArithTuple, Error> {
    let dto: FieldConfigDto = parse_json(input)?;
    let order =
        NumberFieldOrder::new(dto.min_poly.iter().map(|&c| BigInt::from(c)).collect())?;
    if dto.ideal.len() > MAX_GENERATORS || dto.frak_f.len() > MAX_GENERATORS {
        return Err(Error::Validation("too many ideal generators".into()));
    }
    let parse_ideal = |gens: &[String]| -> Result<FracIdeal, Error> {
        let elems = gens
            .iter()
            .map(|s| order.parse_element(s))
            .collect::<Result<Vec<_>, _>>()?;
        FracIdeal::from_generators(&order, &elems)
    };
    let ideal = parse_ideal(&dto.ideal)?;
    let frak_f = parse_ideal(&dto.frak_f)?;
    ArithTuple::new(order, ideal, frak_f, dto.r)
}

/// Orbit partition selector for verification and search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionSpec {
    /// `"divisor"` (classes by additive order) or `"autgroup"` (orbits of
    /// the enumerated symplectic group).
    Named(String),
    Explicit { explicit: Vec<Vec<usize>> },
}

impl PartitionSpec {
    pub fn resolve(&self, desc: &GhgDescriptor) -> Result<Vec<Vec<usize>>, Error> {
        match self {
            PartitionSpec::Named(name) => match name.as_str() {
                "divisor" => Ok(crate::bouquet::partition_by_order(desc)),
                "autgroup" => crate::bouquet::partition_by_sp_orbits(desc),
                other => Err(Error::Parse(format!(
                    "unknown partition `{other}` (expected divisor or autgroup)"
                ))),
            },
            PartitionSpec::Explicit { explicit } => {
                if explicit.iter().map(|b| b.len()).sum::<usize>() > MAX_VECTOR_LEN {
                    return Err(Error::Validation("partition too large".into()));
                }
                Ok(explicit.clone())
            }
        }
    }
}

/// Search/verification targets file: a partition plus one squared-angle
/// target per block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetsDto {
    pub partition: PartitionSpec,
    pub targets: Vec<f64>,
}

pub fn targets_from_json(input: &str) -> Result<TargetsDto, Error> {
    parse_json(input)
}

/// Automorphism wire format.
#[derive(Debug, Serialize, Deserialize)]
pub struct AutomorphismDto {
    pub eta_matrix: Vec<Vec<i64>>,
    pub sp_matrix: Vec<Vec<i64>>,
}

pub fn automorphism_from_json(
    desc: &GhgDescriptor,
    input: &str,
) -> Result<crate::autgrp::Automorphism, Error> {
    let dto: AutomorphismDto = parse_json(input)?;
    if dto.sp_matrix.len() > MAX_GROUP_RANK
        || dto.sp_matrix.iter().any(|r| r.len() > MAX_GROUP_RANK)
    {
        return Err(Error::Validation("sp matrix too large".into()));
    }
    let eta = crate::abelian::GroupHom::new(
        desc.abar(),
        desc.group_c().clone(),
        dto.eta_matrix,
    )?;
    let sp = crate::autgrp::SpElement::new(desc, dto.sp_matrix)?;
    crate::autgrp::auto_from_pair(desc, eta, sp)
}

pub fn automorphism_to_json(auto: &crate::autgrp::Automorphism) -> String {
    let dto = AutomorphismDto {
        eta_matrix: auto.eta.matrix.clone(),
        sp_matrix: auto.sp.matrix().clone(),
    };
    serde_json::to_string_pretty(&dto).expect("plain matrices always serialise")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base3_json() -> String {
        descriptor_to_json(&GhgDescriptor::base_case(3).unwrap()).unwrap()
    }

    #[test]
    fn descriptor_roundtrip() {
        let json = base3_json();
        let desc = descriptor_from_json(&json).unwrap();
        assert_eq!(desc, GhgDescriptor::base_case(3).unwrap());
        // and a descriptor with ring structure
        let k = NumberFieldOrder::quadratic(5).unwrap();
        let f = FracIdeal::principal(&k, &k.from_integer(3)).unwrap();
        let tuple = ArithTuple::new(k, FracIdeal::one(&NumberFieldOrder::quadratic(5).unwrap()), f, None).unwrap();
        let ag = crate::arith::trace_pairing_build(&tuple).unwrap();
        let json = descriptor_to_json(&ag.desc).unwrap();
        let back = descriptor_from_json(&json).unwrap();
        assert_eq!(back, ag.desc);
    }

    #[test]
    fn descriptor_rejects_bad_shapes() {
        for bad in [
            "",
            "{}",
            r#"{"A":{"invariant_factors":[3]},"B":{"invariant_factors":[3]},"C":{"invariant_factors":[3]},"lambda_matrix":[[1],[2]]}"#,
            r#"{"A":{"invariant_factors":[3]},"B":{"invariant_factors":[3]},"C":{"invariant_factors":[2,2]},"lambda_matrix":[[1]]}"#,
            r#"{"A":{"invariant_factors":[0]},"B":{"invariant_factors":[3]},"C":{"invariant_factors":[3]},"lambda_matrix":[[1]]}"#,
            r#"{"A":{"invariant_factors":[99999999,99999999,99999999]},"B":{"invariant_factors":[3]},"C":{"invariant_factors":[3]},"lambda_matrix":[[1],[1],[1]]}"#,
        ] {
            assert!(descriptor_from_json(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn state_vector_roundtrip_and_validation() {
        let g = FinAbGroup::cyclic(3);
        let v = crate::bouquet::hesse_fiducial();
        let json = state_vector_to_json(&v);
        let back = state_vector_from_json(&json, &g).unwrap();
        assert!(crate::linalg::max_abs_diff(&back.values, &v.values) < 1e-15);

        assert!(state_vector_from_json(r#"{"re":[1,0],"im":[0]}"#, &g).is_err());
        assert!(state_vector_from_json(r#"{"re":[1,0],"im":[0,0]}"#, &g).is_err()); // wrong length
        assert!(
            state_vector_from_json(r#"{"re":[1,0,null],"im":[0,0,0]}"#, &g).is_err()
        );
    }

    #[test]
    fn element_string_parsing() {
        let desc = GhgDescriptor::base_case(3).unwrap();
        let h = element_from_str(&desc, "1,0,2").unwrap();
        assert_eq!(h, desc.elem_i64(&[1], &[0], &[2]).unwrap());
        assert_eq!(element_from_str(&desc, " -1 , 0 , 5 ").unwrap(),
                   desc.elem_i64(&[2], &[0], &[2]).unwrap());
        assert!(element_from_str(&desc, "1,0").is_err());
        assert!(element_from_str(&desc, "1,0,x").is_err());
        assert!(element_from_str(&desc, "").is_err());
    }

    #[test]
    fn field_config_parsing() {
        let cfg = r#"{"min_poly":[-2,0,1],"I":["1","th"],"frak_f":["7","3+th"],"r":null}"#;
        let tuple = field_config_from_json(cfg).unwrap();
        assert_eq!(tuple.f, 7);
        let ag = crate::arith::trace_pairing_build(&tuple).unwrap();
        assert_eq!(ag.desc.group_a().order(), 7);

        for bad in [
            "",
            "{}",
            r#"{"min_poly":[1],"I":["1"],"frak_f":["2"]}"#,
            r#"{"min_poly":[-2,0,1],"I":["0"],"frak_f":["7"]}"#,
            r#"{"min_poly":[-2,0,1],"I":["1"],"frak_f":["1/7"]}"#,
            r#"{"min_poly":[-2,0,1],"I":["1"],"frak_f":["7"],"r":10}"#,
        ] {
            assert!(field_config_from_json(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn targets_and_partitions() {
        let desc = GhgDescriptor::base_case(9).unwrap();
        let dto =
            targets_from_json(r#"{"partition":"divisor","targets":[0.5,0.08]}"#).unwrap();
        let partition = dto.partition.resolve(&desc).unwrap();
        assert_eq!(partition.len(), 2);
        assert_eq!(partition[0].len(), 8);

        let dto = targets_from_json(
            r#"{"partition":{"explicit":[[1,2],[3]]},"targets":[0.1,0.2]}"#,
        )
        .unwrap();
        assert_eq!(dto.partition.resolve(&desc).unwrap().len(), 2);

        assert!(targets_from_json(r#"{"partition":"bogus","targets":[]}"#)
            .unwrap()
            .partition
            .resolve(&desc)
            .is_err());
    }

    #[test]
    fn automorphism_roundtrip() {
        let desc = GhgDescriptor::base_case(3).unwrap();
        let autos = crate::autgrp::enumerate_aut0(&desc).unwrap();
        let json = automorphism_to_json(&autos[17]);
        let back = automorphism_from_json(&desc, &json).unwrap();
        assert_eq!(back.eta, autos[17].eta);
        assert_eq!(back.sp, autos[17].sp);

        // non-symplectic sp matrices are rejected
        let bad = r#"{"eta_matrix":[[0,0]],"sp_matrix":[[1,0],[0,2]]}"#;
        assert!(matches!(
            automorphism_from_json(&desc, bad),
            Err(Error::NotSymplectic)
        ));
    }
}
