//! Purity of sequences of representations.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::projective_generator;
use crate::rep::{
    dual_rep, dual_rep_morphism, dual_rep_ses, stalk, tensor_map_right, MorphismSystem, RepMorphism, RepSES,
    Representation,
};
use crate::zn::{is_pure_module_ses, is_split, solve_postcompose, solve_precompose, FinMod, ModHom, ModSES};

#[derive(Clone, Debug)]
pub enum PurityCertificate {
    /// `r` with `r ∘ g⁺ = 1` on the dual sequence.
    DualRetraction(RepMorphism),
    /// The dual sequence has no splitting; `witness` names a test object that breaks exactness.
    DualNotSplit { witness: Option<String> },
}

#[derive(Clone, Debug)]
pub struct PurityVerdict {
    pub pure: bool,
    pub certificate: PurityCertificate,
}

impl PurityVerdict {
    /// Replays the certificate against the sequence.
    pub fn replay(&self, eta: &RepSES) -> bool {
        match &self.certificate {
            PurityCertificate::DualRetraction(r) => {
                let gd = dual_rep_morphism(eta.g());
                self.pure && r.compose(&gd) == RepMorphism::identity(gd.source())
            }
            PurityCertificate::DualNotSplit { .. } => !self.pure && dual_retraction(eta).is_none(),
        }
    }
}

fn dual_retraction(eta: &RepSES) -> Option<RepMorphism> {
    let d = dual_rep_ses(eta);
    let gd = d.f();
    let mut sys = MorphismSystem::new(gd.target(), gd.source());
    for v in 0..gd.source().quiver().num_vertices() {
        sys.require_precompose(v, gd.at(v), &ModHom::identity(gd.source().at(v)));
    }
    sys.solve()
}

/// Pure iff the dual sequence splits.
pub fn is_pure_rep_ses(eta: &RepSES) -> PurityVerdict {
    match dual_retraction(eta) {
        Some(r) => PurityVerdict { pure: true, certificate: PurityCertificate::DualRetraction(r) },
        None => {
            let witness = stalk_witness(eta);
            PurityVerdict { pure: false, certificate: PurityCertificate::DualNotSplit { witness } }
        }
    }
}

/// Whether `S ⊗ f` stays injective.
fn tensor_keeps_mono(s: &Representation, f: &RepMorphism) -> bool {
    tensor_map_right(s, f).map(|m| m.is_injective()).unwrap_or(false)
}

fn stalk_family(q: &Arc<crate::quiver::Quiver>, x: &Representation) -> Vec<(String, Representation)> {
    let md = x.modulus();
    let mut out = Vec::new();
    for v in 0..q.num_vertices() {
        for d in md.divisors().into_iter().filter(|&d| d > 1) {
            let m = FinMod::cyclic(md, d).expect("divisor");
            out.push((format!("stalk {} Z/{d}", q.vertex_name(v)), stalk(q.clone(), v, &m)));
        }
    }
    out
}

fn stalk_witness(eta: &RepSES) -> Option<String> {
    let op = Arc::new(eta.left().quiver().opposite());
    stalk_family(&op, eta.left()).into_iter().find(|(_, s)| !tensor_keeps_mono(s, eta.f())).map(|(name, _)| name)
}

#[derive(Clone, Debug, Serialize)]
pub struct DefinitionalPurity {
    pub pure: bool,
    pub tested: usize,
    pub witness: Option<String>,
}

/// Tensors the sequence with test objects over the opposite quiver: stalks of
/// cyclic modules, projective generators, the dual of the left term and the
/// given extras. Any loss of injectivity on the left is a definitive impurity.
pub fn definitional_purity_check(eta: &RepSES, extras: &[Representation]) -> DefinitionalPurity {
    let op = Arc::new(eta.left().quiver().opposite());
    let mut family = stalk_family(&op, eta.left());
    if op.is_acyclic() {
        for v in 0..op.num_vertices() {
            if let Ok(p) = projective_generator(&op, eta.left().modulus(), v) {
                family.push((format!("projective {}", op.vertex_name(v)), p));
            }
        }
    }
    family.push(("dual of left term".into(), dual_rep(eta.left())));
    for (k, e) in extras.iter().enumerate() {
        family.push((format!("extra {k}"), e.clone()));
    }
    let mut tested = 0;
    for (name, s) in &family {
        tested += 1;
        if !tensor_keeps_mono(s, eta.f()) {
            return DefinitionalPurity { pure: false, tested, witness: Some(name.clone()) };
        }
    }
    DefinitionalPurity { pure: true, tested, witness: None }
}

/// Splitness of the sequence itself.
pub fn rep_split_retraction(eta: &RepSES) -> Option<RepMorphism> {
    let f = eta.f();
    let mut sys = MorphismSystem::new(f.target(), f.source());
    for v in 0..f.source().quiver().num_vertices() {
        sys.require_precompose(v, f.at(v), &ModHom::identity(f.source().at(v)));
    }
    sys.solve()
}

/// `f` mono is pure when `f⁺` is a split epimorphism; returns a section of `f⁺`.
pub fn is_pure_mono(f: &RepMorphism) -> Result<Option<RepMorphism>> {
    if !f.is_mono() {
        return Err(Error::Hypothesis("map is not a monomorphism".into()));
    }
    let fd = dual_rep_morphism(f);
    let mut sys = MorphismSystem::new(fd.target(), fd.source());
    for v in 0..fd.source().quiver().num_vertices() {
        sys.require_postcompose(v, fd.at(v), &ModHom::identity(fd.target().at(v)));
    }
    Ok(sys.solve())
}

/// `g` epi is pure when `g⁺` is a split monomorphism; returns a retraction of `g⁺`.
pub fn is_pure_epi(g: &RepMorphism) -> Result<Option<RepMorphism>> {
    if !g.is_epi() {
        return Err(Error::Hypothesis("map is not an epimorphism".into()));
    }
    let gd = dual_rep_morphism(g);
    let mut sys = MorphismSystem::new(gd.target(), gd.source());
    for v in 0..gd.source().quiver().num_vertices() {
        sys.require_precompose(v, gd.at(v), &ModHom::identity(gd.source().at(v)));
    }
    Ok(sys.solve())
}

/// Module version: a mono `f` is pure iff `0 → dom → cod → coker → 0` is pure.
pub fn is_pure_module_mono(f: &ModHom) -> Result<bool> {
    let c = f.cokernel();
    let s = ModSES::new(f.clone(), c.projection).map_err(|_| Error::Hypothesis("map is not a monomorphism".into()))?;
    Ok(is_pure_module_ses(&s))
}

/// Module version for epimorphisms.
pub fn is_pure_module_epi(g: &ModHom) -> Result<bool> {
    let k = g.kernel();
    let s = ModSES::new(k.inclusion, g.clone()).map_err(|_| Error::Hypothesis("map is not an epimorphism".into()))?;
    Ok(is_pure_module_ses(&s))
}

/// Inputs of the retraction-extension construction: two split short exact rows
/// `0 → X --μ--> Y --p--> Z → 0` and `0 → L --ν--> M --q--> N → 0` joined by
/// `f, g, h`, plus a retraction `r` of `μ`.
pub struct SplitDiagram<'a> {
    pub mu: &'a ModHom,
    pub p: &'a ModHom,
    pub nu: &'a ModHom,
    pub q: &'a ModHom,
    pub f: &'a ModHom,
    pub g: &'a ModHom,
    pub h: &'a ModHom,
    pub r: &'a ModHom,
}

/// A left inverse `s` of `ν` with `s g = f r`.
pub fn split_diagram_retraction(d: &SplitDiagram<'_>) -> Result<ModHom> {
    let hyp = |m: &str| Err(Error::Hypothesis(m.to_string()));
    ModSES::new(d.mu.clone(), d.p.clone())?;
    let bottom = ModSES::new(d.nu.clone(), d.q.clone())?;
    if d.r.compose(d.mu) != ModHom::identity(d.mu.domain()) {
        return hyp("r is not a retraction of mu");
    }
    if d.g.compose(d.mu) != d.nu.compose(d.f) || d.h.compose(d.p) != d.q.compose(d.g) {
        return hyp("diagram does not commute");
    }
    if !d.h.is_injective() {
        return hyp("h is not a monomorphism");
    }
    let Some(s0) = is_split(&bottom) else {
        return hyp("bottom row does not split");
    };
    let z = d.p.codomain();
    let sigma1 = solve_postcompose(d.p, &ModHom::identity(z)).expect("p is onto and the top row splits");
    let sigma = sigma1.sub(&d.mu.compose(&d.r.compose(&sigma1)));
    let k = s0.compose(&d.g.compose(&sigma));
    let Some(alpha) = solve_precompose(d.h, &k) else {
        return hyp("a map Z → L does not extend along h");
    };
    let s = s0.sub(&alpha.compose(d.q));
    debug_assert_eq!(s.compose(d.nu), ModHom::identity(d.nu.domain()));
    debug_assert_eq!(s.compose(d.g), d.f.compose(d.r));
    Ok(s)
}

/// Checks that every hom `Z → L` extends along `h : Z → N`.
pub fn extension_property(h: &ModHom, l: &FinMod) -> bool {
    crate::zn::hom_group(h.domain(), l).expect("same ring").1.iter().all(|k| solve_precompose(h, k).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::nonpure_xi;
    use crate::zn::{Biproduct, Matrix, Modulus};

    #[test]
    fn xi_is_not_pure_but_splits_vertexwise() {
        for n in [2, 4, 9] {
            let md = Modulus::new(n).unwrap();
            let xi = nonpure_xi(&md);
            let v = is_pure_rep_ses(&xi);
            assert!(!v.pure);
            assert!(v.replay(&xi));
            for w in 0..2 {
                assert!(is_split(&xi.vertex_ses(w)).is_some());
            }
            let d = definitional_purity_check(&xi, &[]);
            assert!(!d.pure);
            let w = d.witness.unwrap();
            assert!(w.starts_with("stalk 2"), "{w}");
            assert!(is_pure_mono(xi.f()).unwrap().is_none());
        }
    }

    #[test]
    fn split_sequence_is_pure() {
        let md = Modulus::new(4).unwrap();
        let xi = nonpure_xi(&md);
        let s = xi.left().clone();
        let b = Representation::direct_sum(&[s.clone(), xi.right().clone()]).unwrap();
        let eta = RepSES::new(b.injections[0].clone(), b.projections[1].clone()).unwrap();
        let v = is_pure_rep_ses(&eta);
        assert!(v.pure && v.replay(&eta));
        assert!(definitional_purity_check(&eta, &[]).pure);
        let id = RepMorphism::identity(&s);
        assert!(is_pure_mono(&id).unwrap().is_some());
        assert!(is_pure_epi(&id).unwrap().is_some());
    }

    #[test]
    fn split_diagram_examples() {
        let md = Modulus::new(4).unwrap();
        let z = FinMod::zero(&md);
        let z4 = FinMod::cyclic(&md, 4).unwrap();
        let z2 = FinMod::cyclic(&md, 2).unwrap();
        // Z = N = 0.
        let id = ModHom::identity(&z4);
        let zero_z = ModHom::zero(&z4, &z);
        let s = split_diagram_retraction(&SplitDiagram {
            mu: &id,
            p: &zero_z,
            nu: &id,
            q: &zero_z,
            f: &id,
            g: &id,
            h: &ModHom::identity(&z),
            r: &id,
        })
        .unwrap();
        assert_eq!(s, id);

        // L injective, h = doubling Z/2 → Z/4.
        let b_top = Biproduct::of(&md, &[z4.clone(), z2.clone()]);
        let b_bot = Biproduct::of(&md, &[z4.clone(), z4.clone()]);
        let h = ModHom::new(z2.clone(), z4.clone(), Matrix::column(&[2])).unwrap();
        let k = ModHom::new(z2.clone(), z4.clone(), Matrix::column(&[2])).unwrap();
        let g = b_bot.injections[0]
            .compose(&b_top.projections[0])
            .add(&b_bot.injections[0].compose(&k).compose(&b_top.projections[1]))
            .add(&b_bot.injections[1].compose(&h).compose(&b_top.projections[1]));
        let s = split_diagram_retraction(&SplitDiagram {
            mu: &b_top.injections[0],
            p: &b_top.projections[1],
            nu: &b_bot.injections[0],
            q: &b_bot.projections[1],
            f: &id,
            g: &g,
            h: &h,
            r: &b_top.projections[0],
        })
        .unwrap();
        assert_eq!(s.compose(&b_bot.injections[0]), id);

        // L = Z/2, Z = Z/2 → N = Z/4 by doubling, k = id: no extension.
        let b_top = Biproduct::of(&md, &[z2.clone(), z2.clone()]);
        let b_bot = Biproduct::of(&md, &[z2.clone(), z4.clone()]);
        let idz2 = ModHom::identity(&z2);
        let g = b_bot.injections[0]
            .compose(&b_top.projections[0])
            .add(&b_bot.injections[0].compose(&b_top.projections[1]))
            .add(&b_bot.injections[1].compose(&h).compose(&b_top.projections[1]));
        let err = split_diagram_retraction(&SplitDiagram {
            mu: &b_top.injections[0],
            p: &b_top.projections[1],
            nu: &b_bot.injections[0],
            q: &b_bot.projections[1],
            f: &idz2,
            g: &g,
            h: &h,
            r: &b_top.projections[0],
        })
        .unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        assert!(!extension_property(&h, &z2));
    }
}
