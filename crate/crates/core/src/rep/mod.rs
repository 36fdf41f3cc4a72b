//! Representations of a finite quiver in finitely generated Z/n-modules.

mod functors;
mod io;
mod system;
mod tensor;

use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver};
use crate::zn::{subgroup, Biproduct, FinMod, Matrix, ModHom, ModSES, Modulus};

pub use functors::{restrict, right_adjoint, stalk, RightAdjoint, Term};
pub use io::{RepFamilyFile, RepFile, RepSesFile};
pub use system::{hom_reps, HomReps, MorphismSystem};
pub use tensor::{adjunction_check, tensor, tensor_map_left, tensor_map_right, AdjunctionWitness, TensorProduct};

#[derive(Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    modulus: Modulus,
    modules: Vec<FinMod>,
    maps: Vec<ModHom>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep[{}](", self.modulus)?;
        for (v, m) in self.modules.iter().enumerate() {
            if v > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", self.quiver.vertex_name(v), m)?;
        }
        write!(f, "; ")?;
        for (a, h) in self.maps.iter().enumerate() {
            write!(f, "{}={:?} ", self.quiver.arrow_id(a), h.matrix())?;
        }
        write!(f, ")")
    }
}

impl Representation {
    pub fn new(quiver: Arc<Quiver>, modulus: Modulus, modules: Vec<FinMod>, maps: Vec<ModHom>) -> Result<Self> {
        if modules.len() != quiver.num_vertices() || maps.len() != quiver.num_arrows() {
            return Err(Error::Shape("module/map count does not match the quiver".into()));
        }
        for m in &modules {
            if m.modulus() != &modulus {
                return Err(Error::ModulusMismatch(m.n(), modulus.n()));
            }
        }
        for (a, h) in maps.iter().enumerate() {
            if h.domain() != &modules[quiver.src(a)] || h.codomain() != &modules[quiver.tgt(a)] {
                return Err(Error::Shape(format!(
                    "map for arrow `{}` does not match its endpoint modules",
                    quiver.arrow_id(a)
                )));
            }
        }
        Ok(Self { quiver, modulus, modules, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, modulus: &Modulus) -> Self {
        let z = FinMod::zero(modulus);
        let modules = vec![z.clone(); quiver.num_vertices()];
        let maps = vec![ModHom::zero(&z, &z); quiver.num_arrows()];
        Self { quiver, modulus: modulus.clone(), modules, maps }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn at(&self, v: usize) -> &FinMod {
        &self.modules[v]
    }

    pub fn map(&self, a: usize) -> &ModHom {
        &self.maps[a]
    }

    pub fn modules(&self) -> &[FinMod] {
        &self.modules
    }

    pub fn maps(&self) -> &[ModHom] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(FinMod::is_zero)
    }

    /// Product of the vertex cardinalities.
    pub fn cardinality(&self) -> u128 {
        self.modules.iter().fold(1u128, |acc, m| acc.saturating_mul(m.cardinality()))
    }

    /// Same quiver and ring.
    pub fn compatible(&self, other: &Representation) -> bool {
        self.modulus == other.modulus && *self.quiver == *other.quiver
    }

    /// `X(p)` for a path `p`.
    pub fn path_map(&self, p: &Path) -> ModHom {
        p.arrows.iter().fold(ModHom::identity(&self.modules[p.source]), |acc, &a| self.maps[a].compose(&acc))
    }

    /// The product over arrows leaving `v` of the target modules.
    pub fn out_product(&self, v: usize) -> Biproduct {
        let parts: Vec<FinMod> =
            self.quiver.out_of(v).iter().map(|&a| self.modules[self.quiver.tgt(a)].clone()).collect();
        Biproduct::of(&self.modulus, &parts)
    }

    /// The sum over arrows entering `v` of the source modules.
    pub fn in_sum(&self, v: usize) -> Biproduct {
        let parts: Vec<FinMod> =
            self.quiver.in_of(v).iter().map(|&a| self.modules[self.quiver.src(a)].clone()).collect();
        Biproduct::of(&self.modulus, &parts)
    }

    /// `ψ_v : X(v) → ∏_{a: v → w} X(w)`.
    pub fn psi(&self, v: usize) -> ModHom {
        let bip = self.out_product(v);
        let comps: Vec<ModHom> = self.quiver.out_of(v).iter().map(|&a| self.maps[a].clone()).collect();
        if comps.is_empty() {
            return ModHom::zero(&self.modules[v], &bip.module);
        }
        bip.into_sum(&comps)
    }

    /// `φ_v : ⊕_{a: w → v} X(w) → X(v)`.
    pub fn phi(&self, v: usize) -> ModHom {
        let bip = self.in_sum(v);
        let comps: Vec<ModHom> = self.quiver.in_of(v).iter().map(|&a| self.maps[a].clone()).collect();
        bip.out_of_sum(&comps, &self.modules[v])
    }

    pub fn psi_at(&self, v: &str) -> Result<ModHom> {
        Ok(self.psi(self.quiver.vertex(v)?))
    }

    pub fn phi_at(&self, v: &str) -> Result<ModHom> {
        Ok(self.phi(self.quiver.vertex(v)?))
    }

    /// Stable digest of the instance (hex SHA-256 of its JSON form).
    pub fn digest(&self) -> String {
        let json = self.to_json();
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Direct sum with the structure morphisms, vertex by vertex.
    pub fn direct_sum(parts: &[Representation]) -> Result<RepBiproduct> {
        let first = parts.first().ok_or_else(|| Error::Shape("empty direct sum".into()))?;
        if parts.iter().any(|p| !p.compatible(first)) {
            return Err(Error::Incompatible);
        }
        let q = first.quiver.clone();
        let md = first.modulus.clone();
        let bips: Vec<Biproduct> = (0..q.num_vertices())
            .map(|v| Biproduct::of(&md, &parts.iter().map(|p| p.modules[v].clone()).collect::<Vec<_>>()))
            .collect();
        let maps: Vec<ModHom> = (0..q.num_arrows())
            .map(|a| {
                let (s, t) = (q.src(a), q.tgt(a));
                let comps: Vec<ModHom> = parts
                    .iter()
                    .enumerate()
                    .map(|(k, p)| bips[t].injections[k].compose(&p.maps[a]).compose(&bips[s].projections[k]))
                    .collect();
                comps.iter().skip(1).fold(comps[0].clone(), |acc, c| acc.add(c))
            })
            .collect();
        let sum = Representation::new(q.clone(), md, bips.iter().map(|b| b.module.clone()).collect(), maps)?;
        let injections = (0..parts.len())
            .map(|k| {
                RepMorphism::new_unchecked(&parts[k], &sum, bips.iter().map(|b| b.injections[k].clone()).collect())
            })
            .collect();
        let projections = (0..parts.len())
            .map(|k| {
                RepMorphism::new_unchecked(&sum, &parts[k], bips.iter().map(|b| b.projections[k].clone()).collect())
            })
            .collect();
        Ok(RepBiproduct { rep: sum, injections, projections })
    }

    /// The subrepresentation generated by the given elements (per vertex), with its inclusion.
    pub fn generated_subrep(&self, gens: &[Vec<Vec<u64>>]) -> RepMorphism {
        let q = &self.quiver;
        let nv = q.num_vertices();
        let md = &self.modulus;
        let mut cols: Vec<Vec<Vec<u64>>> = gens.to_vec();
        cols.resize(nv, Vec::new());
        let mut subs: Vec<(FinMod, Matrix)> = Vec::with_capacity(nv);
        loop {
            subs.clear();
            for v in 0..nv {
                let g = Matrix::from_fn(self.modules[v].rank(), cols[v].len(), |i, j| cols[v][j][i]);
                let (m, incl, _) = subgroup(md, self.modules[v].factors(), &g);
                subs.push((m, incl));
            }
            let mut grew = false;
            for a in 0..q.num_arrows() {
                let (s, t) = (q.src(a), q.tgt(a));
                let images = self.maps[a].matrix().mul(&subs[s].1, md.n());
                for c in 0..images.cols() {
                    let y = self.modules[t].reduce(&images.col(c));
                    let inside = ModHom::new_unchecked(subs[t].0.clone(), self.modules[t].clone(), subs[t].1.clone())
                        .preimage(&y)
                        .is_some();
                    if !inside {
                        cols[t].push(y);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let incls: Vec<ModHom> = (0..nv)
            .map(|v| ModHom::new_unchecked(subs[v].0.clone(), self.modules[v].clone(), subs[v].1.clone()))
            .collect();
        let maps: Vec<ModHom> = (0..q.num_arrows())
            .map(|a| {
                let (s, t) = (q.src(a), q.tgt(a));
                incls[t].factor_through(&self.maps[a].compose(&incls[s])).expect("closed under arrows")
            })
            .collect();
        let sub = Representation::new(q.clone(), md.clone(), subs.into_iter().map(|s| s.0).collect(), maps)
            .expect("consistent by construction");
        RepMorphism::new_unchecked(&sub, self, incls)
    }
}

/// Direct sum of representations with injections and projections.
#[derive(Clone, Debug)]
pub struct RepBiproduct {
    pub rep: Representation,
    pub injections: Vec<RepMorphism>,
    pub projections: Vec<RepMorphism>,
}

impl RepBiproduct {
    /// The morphism into the sum with the given components.
    pub fn into_sum(&self, source: &Representation, components: &[RepMorphism]) -> RepMorphism {
        components
            .iter()
            .zip(&self.injections)
            .fold(RepMorphism::zero(source, &self.rep), |acc, (c, i)| acc.add(&i.compose(c)))
    }

    /// The morphism out of the sum with the given components.
    pub fn out_of_sum(&self, components: &[RepMorphism], target: &Representation) -> RepMorphism {
        components
            .iter()
            .zip(&self.projections)
            .fold(RepMorphism::zero(&self.rep, target), |acc, (c, p)| acc.add(&c.compose(p)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMorphism {
    source: Representation,
    target: Representation,
    comps: Vec<ModHom>,
}

impl RepMorphism {
    pub fn new(source: &Representation, target: &Representation, comps: Vec<ModHom>) -> Result<Self> {
        if !source.compatible(target) {
            return Err(Error::Incompatible);
        }
        let q = source.quiver();
        if comps.len() != q.num_vertices() {
            return Err(Error::Shape("one component per vertex expected".into()));
        }
        for (v, c) in comps.iter().enumerate() {
            if c.domain() != source.at(v) || c.codomain() != target.at(v) {
                return Err(Error::Shape(format!("component at `{}` has wrong endpoints", q.vertex_name(v))));
            }
        }
        for a in 0..q.num_arrows() {
            let (s, t) = (q.src(a), q.tgt(a));
            if target.map(a).compose(&comps[s]) != comps[t].compose(source.map(a)) {
                return Err(Error::NotNatural(q.arrow_id(a).to_string()));
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), comps })
    }

    pub(crate) fn new_unchecked(source: &Representation, target: &Representation, comps: Vec<ModHom>) -> Self {
        debug_assert!(RepMorphism::new(source, target, comps.clone()).is_ok());
        Self { source: source.clone(), target: target.clone(), comps }
    }

    pub fn identity(x: &Representation) -> Self {
        Self { source: x.clone(), target: x.clone(), comps: x.modules.iter().map(ModHom::identity).collect() }
    }

    pub fn zero(x: &Representation, y: &Representation) -> Self {
        let comps = x.modules.iter().zip(&y.modules).map(|(a, b)| ModHom::zero(a, b)).collect();
        Self { source: x.clone(), target: y.clone(), comps }
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn at(&self, v: usize) -> &ModHom {
        &self.comps[v]
    }

    pub fn comps(&self) -> &[ModHom] {
        &self.comps
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RepMorphism) -> RepMorphism {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.compose(b)).collect();
        RepMorphism { source: other.source.clone(), target: self.target.clone(), comps }
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        RepMorphism { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn neg(&self) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(ModHom::neg).collect(),
        }
    }

    pub fn sub(&self, other: &RepMorphism) -> RepMorphism {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ModHom::is_zero)
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().all(ModHom::is_injective)
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().all(ModHom::is_surjective)
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(ModHom::is_iso)
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> RepMorphism {
        let x = &self.source;
        let q = x.quiver_arc().clone();
        let subs: Vec<_> = self.comps.iter().map(ModHom::kernel).collect();
        let maps = (0..q.num_arrows())
            .map(|a| {
                let (s, t) = (q.src(a), q.tgt(a));
                subs[t].inclusion.factor_through(&x.map(a).compose(&subs[s].inclusion)).expect("kernels are natural")
            })
            .collect();
        let k = Representation::new(q, x.modulus.clone(), subs.iter().map(|s| s.module.clone()).collect(), maps)
            .expect("consistent by construction");
        RepMorphism::new_unchecked(&k, x, subs.into_iter().map(|s| s.inclusion).collect())
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> RepMorphism {
        let y = &self.target;
        let q = y.quiver_arc().clone();
        let n = y.modulus.n();
        let quots: Vec<_> = self.comps.iter().map(ModHom::cokernel).collect();
        let maps = (0..q.num_arrows())
            .map(|a| {
                let (s, t) = (q.src(a), q.tgt(a));
                let m = quots[t].projection.matrix().mul(y.map(a).matrix(), n).mul(&quots[s].section, n);
                ModHom::new(quots[s].module.clone(), quots[t].module.clone(), m).expect("induced map is well defined")
            })
            .collect();
        let c = Representation::new(q, y.modulus.clone(), quots.iter().map(|c| c.module.clone()).collect(), maps)
            .expect("consistent by construction");
        RepMorphism::new_unchecked(y, &c, quots.into_iter().map(|c| c.projection).collect())
    }

    /// Image as a subrepresentation of the target, with its inclusion.
    pub fn image(&self) -> RepMorphism {
        let gens: Vec<Vec<Vec<u64>>> =
            self.comps.iter().map(|c| (0..c.domain().rank()).map(|i| c.matrix().col(i)).collect()).collect();
        self.target.generated_subrep(&gens)
    }

    /// Solves `self ∘ h = g` for a morphism `h`, assuming `self` is mono.
    pub fn factor_mono(&self, g: &RepMorphism) -> Option<RepMorphism> {
        let comps: Option<Vec<ModHom>> = self.comps.iter().zip(&g.comps).map(|(m, c)| m.factor_through(c)).collect();
        RepMorphism::new(&g.source, &self.source, comps?).ok()
    }
}

/// A short exact sequence `0 → X → Y → Z → 0` of representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSES {
    f: RepMorphism,
    g: RepMorphism,
}

impl RepSES {
    pub fn new(f: RepMorphism, g: RepMorphism) -> Result<Self> {
        if f.target != g.source {
            return Err(Error::InvalidSequence("target(f) != source(g)".into()));
        }
        for v in 0..f.source.quiver().num_vertices() {
            ModSES::new(f.comps[v].clone(), g.comps[v].clone()).map_err(|e| {
                Error::InvalidSequence(format!("at vertex `{}`: {e}", f.source.quiver().vertex_name(v)))
            })?;
        }
        Ok(Self { f, g })
    }

    /// `0 → X → Y → Y/X → 0` from a monomorphism.
    pub fn from_mono(f: RepMorphism) -> Result<Self> {
        let g = f.cokernel();
        Self::new(f, g)
    }

    /// `0 → ker g → Y → Z → 0` from an epimorphism.
    pub fn from_epi(g: RepMorphism) -> Result<Self> {
        let f = g.kernel();
        Self::new(f, g)
    }

    pub fn f(&self) -> &RepMorphism {
        &self.f
    }

    pub fn g(&self) -> &RepMorphism {
        &self.g
    }

    pub fn left(&self) -> &Representation {
        &self.f.source
    }

    pub fn middle(&self) -> &Representation {
        &self.f.target
    }

    pub fn right(&self) -> &Representation {
        &self.g.target
    }

    pub fn vertex_ses(&self, v: usize) -> ModSES {
        ModSES::new(self.f.comps[v].clone(), self.g.comps[v].clone()).expect("validated")
    }

    /// Direct sum of two sequences.
    pub fn direct_sum(&self, other: &RepSES) -> Result<RepSES> {
        let l = Representation::direct_sum(&[self.left().clone(), other.left().clone()])?;
        let m = Representation::direct_sum(&[self.middle().clone(), other.middle().clone()])?;
        let r = Representation::direct_sum(&[self.right().clone(), other.right().clone()])?;
        let f = m.injections[0]
            .compose(&self.f)
            .compose(&l.projections[0])
            .add(&m.injections[1].compose(&other.f).compose(&l.projections[1]));
        let g = r.injections[0]
            .compose(&self.g)
            .compose(&m.projections[0])
            .add(&r.injections[1].compose(&other.g).compose(&m.projections[1]));
        RepSES::new(f, g)
    }
}

/// `X⁺` over the opposite quiver.
pub fn dual_rep(x: &Representation) -> Representation {
    let q = Arc::new(x.quiver().opposite());
    let modules = x.modules.iter().map(crate::zn::matlis_dual).collect();
    let maps = x.maps.iter().map(crate::zn::matlis_dual_hom).collect();
    Representation::new(q, x.modulus.clone(), modules, maps).expect("duality preserves shapes")
}

/// `f⁺ : Y⁺ → X⁺` for `f : X → Y`.
pub fn dual_rep_morphism(f: &RepMorphism) -> RepMorphism {
    let comps = f.comps.iter().map(crate::zn::matlis_dual_hom).collect();
    RepMorphism::new_unchecked(&dual_rep(&f.target), &dual_rep(&f.source), comps)
}

/// `0 → Z⁺ → Y⁺ → X⁺ → 0`.
pub fn dual_rep_ses(s: &RepSES) -> RepSES {
    RepSES::new(dual_rep_morphism(&s.g), dual_rep_morphism(&s.f)).expect("duality is exact")
}

#[cfg(test)]
mod tests;
