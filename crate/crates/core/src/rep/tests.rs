use std::sync::Arc;

use super::*;
use crate::quiver::Quiver;
use crate::zn::{FinMod, Matrix, ModHom, Modulus};

fn zn(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

fn a2() -> Arc<Quiver> {
    Arc::new(Quiver::from_spec(&["1", "2"], &[("a", "1", "2")]).unwrap())
}

/// `M --f--> N` on A2.
fn a2_rep(md: &Modulus, m: &[u64], n: &[u64], f: &[Vec<u64>]) -> Representation {
    let mm = FinMod::new(md.clone(), m.to_vec()).unwrap();
    let nn = FinMod::new(md.clone(), n.to_vec()).unwrap();
    let fm = if f.is_empty() { Matrix::zeros(nn.rank(), mm.rank()) } else { Matrix::from_rows(f).unwrap() };
    let h = ModHom::new(mm.clone(), nn.clone(), fm).unwrap();
    Representation::new(a2(), md.clone(), vec![mm, nn], vec![h]).unwrap()
}

#[test]
fn psi_phi_on_a2() {
    let md = zn(4);
    let x = a2_rep(&md, &[4], &[4], &[vec![2]]);
    assert_eq!(x.psi(0).matrix(), &Matrix::from_rows(&[vec![2]]).unwrap());
    assert!(x.psi(1).codomain().is_zero());
    assert_eq!(x.phi(1).matrix(), &Matrix::from_rows(&[vec![2]]).unwrap());
    assert!(x.phi(0).domain().is_zero());
    assert_eq!(x.psi(0).kernel().module.factors(), &[2]);
}

#[test]
fn psi_on_kronecker_is_diagonal() {
    let md = zn(2);
    let q = Arc::new(Quiver::from_spec(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap());
    let z2 = FinMod::cyclic(&md, 2).unwrap();
    let id = ModHom::identity(&z2);
    let x = Representation::new(q, md, vec![z2.clone(), z2.clone()], vec![id.clone(), id]).unwrap();
    let p = x.psi(0);
    assert_eq!(p.codomain().factors(), &[2, 2]);
    assert_eq!(p.matrix().col(0), vec![1, 1]);
    let s = stalk(x.quiver_arc().clone(), 1, &z2);
    assert!(s.psi(0).is_zero());
}

#[test]
fn kernel_and_cokernel() {
    let md = zn(4);
    let x = a2_rep(&md, &[4], &[4], &[vec![2]]);
    let id = RepMorphism::identity(&x);
    assert!(id.kernel().source().is_zero());
    let z = Representation::zero(x.quiver_arc().clone(), &md);
    let c = RepMorphism::zero(&z, &x).cokernel();
    assert_eq!(c.target().modules(), x.modules());
}

#[test]
fn hom_reps_examples() {
    let md = zn(2);
    let z2 = FinMod::cyclic(&md, 2).unwrap();
    let s1 = stalk(a2(), 0, &z2);
    let s2 = stalk(a2(), 1, &z2);
    assert!(hom_reps(&s1, &s2).group.is_zero());
    let x = a2_rep(&zn(4), &[2, 4], &[4], &[vec![2, 1]]);
    let h = hom_reps(&x, &x);
    let id = RepMorphism::identity(&x);
    let sys = MorphismSystem::new(&x, &x);
    let raw = sys.raw_coords(&id);
    let coords = crate::zn::solve_in(x.modulus(), sys.raw_orders(), &h.inclusion, &Matrix::column(&raw));
    assert!(coords.is_some());
}

#[test]
fn yoneda_for_p1() {
    let md = zn(4);
    let p1 = a2_rep(&md, &[4], &[4], &[vec![1]]);
    let x = a2_rep(&md, &[2, 4], &[2, 4], &[vec![1, 0], vec![0, 2]]);
    assert_eq!(hom_reps(&p1, &x).group.cardinality(), x.at(0).cardinality());
}

#[test]
fn stalk_hom_matches_kernel_of_psi() {
    let md = zn(4);
    let x = a2_rep(&md, &[2, 4], &[4], &[vec![2, 2]]);
    let z2 = FinMod::cyclic(&md, 2).unwrap();
    let s = stalk(a2(), 0, &z2);
    let k = x.psi(0).kernel().module;
    let lhs = hom_reps(&s, &x).group.cardinality();
    let rhs = crate::zn::hom_group(&z2, &k).unwrap().0.cardinality();
    assert_eq!(lhs, rhs);
}

#[test]
fn right_adjoint_examples() {
    let md = zn(4);
    let z4 = FinMod::cyclic(&md, 4).unwrap();
    let big = a2();
    let v1 = Arc::new(big.full_subquiver(&["1"]).unwrap());
    let v2 = Arc::new(big.full_subquiver(&["2"]).unwrap());
    let e1 = right_adjoint(&big, &stalk(v1, 0, &z4)).unwrap();
    assert_eq!(e1.rep.at(0).factors(), &[4]);
    assert!(e1.rep.at(1).is_zero());
    let e2 = right_adjoint(&big, &stalk(v2, 0, &z4)).unwrap();
    assert_eq!(e2.rep.at(0).factors(), &[4]);
    assert_eq!(e2.rep.at(1).factors(), &[4]);
    assert!(e2.rep.map(0).is_iso());
}

#[test]
fn adjunction_bijection_round_trips() {
    let md = zn(4);
    let big = a2();
    let sub = Arc::new(big.full_subquiver(&["2"]).unwrap());
    let z2 = FinMod::cyclic(&md, 2).unwrap();
    let x = stalk(sub.clone(), 0, &FinMod::new(md.clone(), vec![2, 4]).unwrap());
    let y = a2_rep(&md, &[4], &[2, 4], &[vec![1], vec![2]]);
    let e = right_adjoint(&big, &x).unwrap();
    let yr = restrict(&sub, &y).unwrap();
    let left = hom_reps(&y, &e.rep);
    let right = hom_reps(&yr, &x);
    assert_eq!(left.group.cardinality(), right.group.cardinality());
    for g in &right.basis {
        let f = e.from_restricted(g, &y).unwrap();
        assert_eq!(&e.to_restricted(&f, &yr, &x).unwrap(), g);
    }
    let _ = z2;
}

#[test]
fn dual_of_doubling() {
    let md = zn(4);
    let x = a2_rep(&md, &[4], &[4], &[vec![2]]);
    let d = dual_rep(&x);
    assert_eq!(d.map(0).matrix().get(0, 0), 2);
    assert_eq!(d.quiver().arrows()[0].src, "2");
    assert_eq!(dual_rep(&d), x);
}

#[test]
fn tensor_examples() {
    let md = zn(2);
    let z2 = FinMod::cyclic(&md, 2).unwrap();
    let op = Arc::new(a2().opposite());
    let y1 = stalk(op.clone(), 0, &z2);
    let x1 = stalk(a2(), 0, &z2);
    assert_eq!(tensor(&y1, &x1).unwrap().module.factors(), &[2]);
    let y2 = stalk(op, 1, &z2);
    let p1 = a2_rep(&md, &[2], &[2], &[vec![1]]);
    assert!(tensor(&y2, &p1).unwrap().module.is_zero());
    assert!(adjunction_check(&y1, &x1).unwrap().holds());
    assert!(adjunction_check(&y2, &p1).unwrap().holds());
}

#[test]
fn tensor_adjunction_mixed() {
    let md = zn(4);
    let x = a2_rep(&md, &[2, 4], &[4], &[vec![2, 1]]);
    let y = dual_rep(&a2_rep(&md, &[4], &[2, 4], &[vec![1], vec![2]]));
    let w = adjunction_check(&y, &x).unwrap();
    assert!(w.holds(), "{w:?}");
}

#[test]
fn json_round_trip() {
    let md = zn(4);
    let x = a2_rep(&md, &[2, 4], &[4], &[vec![2, 1]]);
    assert_eq!(Representation::from_json(&x.to_json()).unwrap(), x);
    let bad = r#"{"modulus":4,"vertices":["1","2"],"arrows":[{"id":"a","src":"1","tgt":"2"}],
        "modules":{"1":[2],"2":[4]},"arrows_maps":{"a":[[1]]}}"#;
    let err = Representation::from_json(bad).unwrap_err();
    assert!(err.to_string().contains("arrows_maps.a"), "{err}");
}

#[test]
fn generated_subrep_is_closed() {
    let md = zn(4);
    let x = a2_rep(&md, &[4], &[4], &[vec![1]]);
    let inc = x.generated_subrep(&[vec![vec![2]], vec![]]);
    assert_eq!(inc.source().at(0).factors(), &[2]);
    assert_eq!(inc.source().at(1).factors(), &[2]);
    let s = RepSES::from_mono(inc).unwrap();
    assert_eq!(s.right().at(0).factors(), &[2]);
    let back = RepSES::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
}
