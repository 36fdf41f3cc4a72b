//! Stalks, restriction to a subquiver and its right adjoint.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver};
use crate::zn::{Biproduct, FinMod, ModHom};

use super::{RepMorphism, Representation};

/// `M` at vertex `v`, zero elsewhere.
pub fn stalk(quiver: Arc<Quiver>, v: usize, m: &FinMod) -> Representation {
    let md = m.modulus().clone();
    let z = FinMod::zero(&md);
    let modules: Vec<FinMod> = (0..quiver.num_vertices()).map(|w| if w == v { m.clone() } else { z.clone() }).collect();
    let maps =
        (0..quiver.num_arrows()).map(|a| ModHom::zero(&modules[quiver.src(a)], &modules[quiver.tgt(a)])).collect();
    Representation::new(quiver, md, modules, maps).expect("stalks are consistent")
}

/// Restriction of `x` to the subquiver `sub`.
pub fn restrict(sub: &Arc<Quiver>, x: &Representation) -> Result<Representation> {
    let q = x.quiver();
    if !sub.is_subquiver_of(q) {
        return Err(Error::NotSubquiver("restriction target is not a subquiver".into()));
    }
    let modules = sub.vertices().iter().map(|v| Ok(x.at(q.vertex(v)?).clone())).collect::<Result<Vec<_>>>()?;
    let maps = sub.arrows().iter().map(|a| Ok(x.map(q.arrow(&a.id)?).clone())).collect::<Result<Vec<_>>>()?;
    Representation::new(sub.clone(), x.modulus().clone(), modules, maps)
}

/// A factor of the product at a vertex of the big quiver: a path `w ⇝ u`
/// that is trivial (when `w` lies in the subquiver) or ends with an arrow outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    /// Path in the big quiver.
    pub path: Path,
    /// Its endpoint, as a vertex index of the subquiver.
    pub end: usize,
}

/// The right adjoint of restriction applied to a representation of the subquiver.
#[derive(Clone, Debug)]
pub struct RightAdjoint {
    pub rep: Representation,
    pub sub: Arc<Quiver>,
    pub terms: Vec<Vec<Term>>,
    pub products: Vec<Biproduct>,
}

pub fn right_adjoint(big: &Arc<Quiver>, x: &Representation) -> Result<RightAdjoint> {
    let sub = x.quiver_arc().clone();
    if !sub.is_subquiver_of(big) {
        return Err(Error::NotSubquiver("representation quiver is not a subquiver".into()));
    }
    if !big.is_acyclic() {
        return Err(Error::CyclicQuiver("the right adjoint of restriction"));
    }
    let md = x.modulus().clone();
    let in_sub_v: Vec<Option<usize>> = big.vertices().iter().map(|v| sub.vertex(v).ok()).collect();
    let in_sub_a: Vec<Option<usize>> = big.arrows().iter().map(|a| sub.arrow(&a.id).ok()).collect();
    let nv = big.num_vertices();

    let mut terms: Vec<Vec<Term>> = Vec::with_capacity(nv);
    for w in 0..nv {
        let mut ts = Vec::new();
        if let Some(u) = in_sub_v[w] {
            ts.push(Term { path: Path::trivial(w), end: u });
        }
        for a in 0..big.num_arrows() {
            if in_sub_a[a].is_some() {
                continue;
            }
            let Some(u) = in_sub_v[big.tgt(a)] else {
                continue;
            };
            for alpha in big.paths(w, big.src(a))? {
                ts.push(Term { path: alpha.then(big, a), end: u });
            }
        }
        terms.push(ts);
    }
    let products: Vec<Biproduct> = terms
        .iter()
        .map(|ts| Biproduct::of(&md, &ts.iter().map(|t| x.at(t.end).clone()).collect::<Vec<_>>()))
        .collect();

    let mut maps = Vec::with_capacity(big.num_arrows());
    for b in 0..big.num_arrows() {
        let (w, w2) = (big.src(b), big.tgt(b));
        let src = &products[w];
        let comps: Vec<ModHom> = terms[w2]
            .iter()
            .map(|t| {
                if !t.path.is_trivial() {
                    let mut arrows = vec![b];
                    arrows.extend_from_slice(&t.path.arrows);
                    let p = Path { source: w, target: t.path.target, arrows };
                    let k = terms[w].iter().position(|s| s.path == p).expect("composite is a term");
                    src.projections[k].clone()
                } else if let Some(bs) = in_sub_a[b] {
                    let k = terms[w].iter().position(|s| s.path.is_trivial()).expect("source lies in the subquiver");
                    x.map(bs).compose(&src.projections[k])
                } else {
                    let p = Path::trivial(w).then(big, b);
                    let k = terms[w].iter().position(|s| s.path == p).expect("arrow is a term");
                    src.projections[k].clone()
                }
            })
            .collect();
        let m = if comps.is_empty() {
            ModHom::zero(&src.module, &products[w2].module)
        } else {
            products[w2].into_sum(&comps)
        };
        maps.push(m);
    }
    let rep = Representation::new(big.clone(), md, products.iter().map(|p| p.module.clone()).collect(), maps)?;
    Ok(RightAdjoint { rep, sub, terms, products })
}

impl RightAdjoint {
    /// `Hom_Q(Y, e(X)) → Hom_{Q'}(Y|, X)`: the trivial-term component at each subquiver vertex.
    pub fn to_restricted(
        &self,
        f: &RepMorphism,
        y_restricted: &Representation,
        x: &Representation,
    ) -> Result<RepMorphism> {
        let big = self.rep.quiver();
        let comps = self
            .sub
            .vertices()
            .iter()
            .map(|v| {
                let w = big.vertex(v)?;
                let k = self.terms[w].iter().position(|t| t.path.is_trivial()).expect("trivial term");
                Ok(self.products[w].projections[k].compose(f.at(w)))
            })
            .collect::<Result<Vec<_>>>()?;
        RepMorphism::new(y_restricted, x, comps)
    }

    /// The inverse bijection: component at term `(u, p)` is `g(u) ∘ Y(p)`.
    pub fn from_restricted(&self, g: &RepMorphism, y: &Representation) -> Result<RepMorphism> {
        let big = y.quiver();
        let comps = (0..big.num_vertices())
            .map(|w| {
                let parts: Vec<ModHom> =
                    self.terms[w].iter().map(|t| g.at(t.end).compose(&y.path_map(&t.path))).collect();
                if parts.is_empty() {
                    ModHom::zero(y.at(w), &self.products[w].module)
                } else {
                    self.products[w].into_sum(&parts)
                }
            })
            .collect();
        RepMorphism::new(y, &self.rep, comps)
    }
}
