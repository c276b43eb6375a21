//! The symplectic/SL2 correspondence over an inert prime: for Q(sqrt 5)
//! with f = (3), every O/f-linear map written in M_2(O/f) is symplectic
//! exactly when its determinant is 1, and the group has order |SL2(F_9)|.

use ghg_core::arith::{
    self, basis_pick, endo_from_m2, trace_pairing_build, xi_sl2_map, ArithTuple, FracIdeal,
    ModuleBasis,
};
use ghg_core::autgrp;
use ghg_core::field::NumberFieldOrder;
use num_bigint::BigInt;

#[test]
fn sqrt5_inert_three_matches_sl2_f9() {
    let k = NumberFieldOrder::quadratic(5).unwrap();
    let f = FracIdeal::principal(&k, &k.from_integer(3)).unwrap();
    let tuple = ArithTuple::new(k, FracIdeal::one(&NumberFieldOrder::quadratic(5).unwrap()), f, None)
        .unwrap();
    let ag = trace_pairing_build(&tuple).unwrap();
    assert_eq!(ag.desc.group_a().order(), 9);

    let (x, y) = basis_pick(&ag).unwrap();
    let basis_a = ModuleBasis::new(&ag, &ag.a_quot, &x).unwrap();
    let basis_b = ModuleBasis::new(&ag, &ag.b_quot, &y).unwrap();
    let ring = basis_a.ring().clone();
    let residues: Vec<Vec<BigInt>> = ring.elements().collect();
    assert_eq!(residues.len(), 9);

    let mut symplectic = 0usize;
    let mut det_one = 0usize;
    for u in &residues {
        for v in &residues {
            for w in &residues {
                for z in &residues {
                    let endo = endo_from_m2(&ag, [[u, v], [w, z]], &basis_a, &basis_b).unwrap();
                    let is_sp = autgrp::is_symplectic(&ag.desc, &endo).unwrap();
                    let det = ring.sub(&ring.mul(u, z), &ring.mul(v, w));
                    let det1 = det == ring.one();
                    assert_eq!(
                        is_sp, det1,
                        "determinant criterion failed at [[{u:?},{v:?}],[{w:?},{z:?}]]"
                    );
                    if is_sp {
                        symplectic += 1;
                        let image = xi_sl2_map(&ag, &endo, &basis_a, &x, &basis_b, &y).unwrap();
                        assert!(image.det_is_one);
                    }
                    if det1 {
                        det_one += 1;
                    }
                }
            }
        }
    }
    // |SL2(F_9)| = 9 * (9^2 - 1) = 720
    assert_eq!(symplectic, 720);
    assert_eq!(det_one, 720);

    // the arithmetic descriptor is usable downstream: its quotient is an
    // O/f-free module of rank 2 over a 9-element ring
    let _ = arith::ghg_with_enlarged_centre(&ag, 6).unwrap();
}
