//! Homological predicates on Z/n-modules and their short exact sequences.

use serde::Serialize;

use super::arith::gcd;
use super::hom::solve_precompose;
use super::matrix::Matrix;
use super::module::{homology_of, FinMod, ModHom};
use crate::error::{Error, Result};

/// Outcome of the Baer test for the ideal `(d)`.
///
/// A map `(d) → M` is determined by the image `m` of `d`, which must satisfy
/// `(n/d) m = 0`; it extends to `Z/n` exactly when `m ∈ dM`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaerExtension {
    pub ideal: u64,
    /// Image of `d` under a generator of `Hom((d), M)`.
    pub image: Vec<u64>,
    /// Image of 1 under the extension.
    pub extension: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BaerCertificate {
    /// Extension data for generators of every `Hom((d), M)`.
    Extends(Vec<BaerExtension>),
    /// The map `(d) → M`, `d ↦ image`, has no extension to `Z/n`.
    Fails { ideal: u64, image: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub holds: bool,
    pub certificate: BaerCertificate,
}

/// `M[k]`, the elements killed by `k`, as inclusion columns.
fn torsion_generators(m: &FinMod, k: u64) -> Matrix {
    ModHom::scalar(m, k).kernel().inclusion.matrix().clone()
}

pub fn baer_certificate(m: &FinMod) -> BaerCertificate {
    let n = m.n();
    let mut ext = Vec::new();
    for d in m.modulus().divisors() {
        if d == n {
            continue;
        }
        let gens = torsion_generators(m, n / d);
        let mult = ModHom::scalar(m, d);
        for c in 0..gens.cols() {
            let image = gens.col(c);
            match mult.preimage(&image) {
                Some(x) => ext.push(BaerExtension { ideal: d, image, extension: x }),
                None => return BaerCertificate::Fails { ideal: d, image },
            }
        }
    }
    BaerCertificate::Extends(ext)
}

/// Structural criterion: every invariant factor `d` has `gcd(d, n/d) = 1`, i.e. each
/// p-local part is free over `Z/p^k`.
pub fn is_locally_free(m: &FinMod) -> bool {
    let n = m.n();
    m.factors().iter().all(|&d| gcd(d, n / d) == 1)
}

pub fn is_injective_module(m: &FinMod) -> InjectivityVerdict {
    let certificate = baer_certificate(m);
    let holds = matches!(certificate, BaerCertificate::Extends(_));
    debug_assert_eq!(holds, is_locally_free(m));
    InjectivityVerdict { holds, certificate }
}

/// Over Z/n projective, injective and flat modules coincide.
pub fn is_projective_module(m: &FinMod) -> InjectivityVerdict {
    is_injective_module(m)
}

pub fn is_flat_module(m: &FinMod) -> InjectivityVerdict {
    is_injective_module(m)
}

/// `Ext^i(Z/d, M)` for `i = 1, 2` from the 2-periodic free resolution of `Z/d`.
pub fn ext_cyclic(d: u64, m: &FinMod, i: usize) -> FinMod {
    let n = m.n();
    let r = m.rank();
    let f = m.factors();
    let times = |c: u64| Matrix::identity(r).scale(c, n);
    // Hom(resolution, M): M --d--> M --n/d--> M --d--> M ...
    let (inc, out) = if i % 2 == 1 { (times(d), times(n / d)) } else { (times(n / d), times(d)) };
    homology_of(m.modulus(), r, f, f, &inc, &out)
}

pub fn is_strongly_fp_injective_module(m: &FinMod) -> bool {
    is_injective_module(m).holds
}

/// Definitional check: `Ext^i(Z/d, M) = 0` for all `d | n` and `i = 1, 2`.
pub fn ext_oracle_vanishes(m: &FinMod) -> bool {
    m.modulus().divisors().into_iter().all(|d| (1..=2).all(|i| ext_cyclic(d, m, i).is_zero()))
}

/// A short exact sequence `0 → X --f--> Y --g--> Z → 0` of modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSES {
    f: ModHom,
    g: ModHom,
}

impl ModSES {
    pub fn new(f: ModHom, g: ModHom) -> Result<Self> {
        if f.codomain() != g.domain() {
            return Err(Error::InvalidSequence("codomain(f) != domain(g)".into()));
        }
        if !g.compose(&f).is_zero() {
            return Err(Error::InvalidSequence("g ∘ f is not zero".into()));
        }
        if !f.is_injective() {
            return Err(Error::InvalidSequence("f is not injective".into()));
        }
        if !g.is_surjective() {
            return Err(Error::InvalidSequence("g is not surjective".into()));
        }
        let (x, y, z) = (f.domain(), f.codomain(), g.codomain());
        let outer: Vec<u64> = x.log_order().iter().zip(z.log_order()).map(|(a, b)| a + b).collect();
        if outer != y.log_order() {
            return Err(Error::InvalidSequence("image(f) != kernel(g)".into()));
        }
        Ok(Self { f, g })
    }

    pub fn f(&self) -> &ModHom {
        &self.f
    }

    pub fn g(&self) -> &ModHom {
        &self.g
    }
}

/// A retraction `r` of `f` (so `r ∘ f = 1`), if the sequence splits.
pub fn is_split(s: &ModSES) -> Option<ModHom> {
    solve_precompose(&s.f, &ModHom::identity(s.f.domain()))
}

/// `None` when pure; otherwise a divisor `d` for which `Hom(Z/d, -)` breaks exactness.
pub fn purity_witness(s: &ModSES) -> Option<u64> {
    let (x, y, z) = (s.f.domain(), s.f.codomain(), s.g.codomain());
    // Hom(Z/d, -) is left exact, so exactness reduces to counting.
    x.modulus().divisors().into_iter().find(|&d| y.torsion_count(d) != x.torsion_count(d) * z.torsion_count(d))
}

pub fn is_pure_module_ses(s: &ModSES) -> bool {
    purity_witness(s).is_none()
}

/// A 2-periodic complex of free modules `... → F --even--> F --odd--> F --even--> ...`.
#[derive(Clone, Debug)]
pub struct PeriodicComplex {
    pub term: FinMod,
    pub even: ModHom,
    pub odd: ModHom,
}

impl PeriodicComplex {
    pub fn is_exact(&self) -> bool {
        let ok = |a: &ModHom, b: &ModHom| {
            a.compose(b).is_zero() && a.kernel().module.log_order() == b.image().module.log_order()
        };
        ok(&self.even, &self.odd) && ok(&self.odd, &self.even)
    }

    /// Exactness of `Hom(-, Z/n)`; enough for every free target.
    pub fn is_totally_acyclic(&self) -> bool {
        let dual = PeriodicComplex {
            term: self.term.clone(),
            even: super::dual::matlis_dual_hom(&self.odd),
            odd: super::dual::matlis_dual_hom(&self.even),
        };
        self.is_exact() && dual.is_exact()
    }

    /// The cycle module `ker(even)`.
    pub fn cycle(&self) -> FinMod {
        self.even.kernel().module
    }
}

#[derive(Clone, Debug)]
pub struct GiModuleCertificate {
    pub complex: PeriodicComplex,
    pub exact: bool,
    pub totally_acyclic: bool,
    pub cycle_matches: bool,
}

impl GiModuleCertificate {
    pub fn holds(&self) -> bool {
        self.exact && self.totally_acyclic && self.cycle_matches
    }
}

/// Totally acyclic complex of free modules having `M` as the cycle at degree 0.
pub fn gi_module_certificate(m: &FinMod) -> GiModuleCertificate {
    let md = m.modulus();
    let n = md.n();
    let term = FinMod::free(md, m.rank());
    let diag = |f: &dyn Fn(u64) -> u64| {
        let entries: Vec<u64> = m.factors().iter().map(|&d| f(d) % n).collect();
        ModHom::new(term.clone(), term.clone(), Matrix::diagonal(&entries)).expect("free target")
    };
    // ker(·d) on Z/n is (n/d)Z/n ≅ Z/d.
    let even = diag(&|d| d);
    let odd = diag(&|d| n / d);
    let complex = PeriodicComplex { term, even, odd };
    let exact = complex.is_exact();
    let totally_acyclic = complex.is_totally_acyclic();
    let cycle_matches = &complex.cycle() == m;
    GiModuleCertificate { complex, exact, totally_acyclic, cycle_matches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::{Biproduct, Modulus};

    fn z(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn injectivity_examples() {
        let m = z(4);
        let z4 = FinMod::cyclic(&m, 4).unwrap();
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        assert!(is_injective_module(&z4).holds);
        assert!(is_injective_module(&FinMod::zero(&m)).holds);
        let v = is_injective_module(&z2);
        assert!(!v.holds);
        assert_eq!(v.certificate, BaerCertificate::Fails { ideal: 2, image: vec![1] });
    }

    #[test]
    fn ext_examples() {
        let m = z(4);
        let z4 = FinMod::cyclic(&m, 4).unwrap();
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        assert!(ext_cyclic(2, &z4, 1).is_zero());
        assert_eq!(ext_cyclic(2, &z2, 1).factors(), &[2]);
        assert!(ext_oracle_vanishes(&z4));
        assert!(!ext_oracle_vanishes(&z2));
    }

    #[test]
    fn split_examples() {
        let m = z(4);
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        let z4 = FinMod::cyclic(&m, 4).unwrap();
        let b = Biproduct::of(&m, &[z2.clone(), z2.clone()]);
        let s = ModSES::new(b.injections[0].clone(), b.projections[1].clone()).unwrap();
        assert!(is_split(&s).is_some());
        assert!(is_pure_module_ses(&s));

        let f = ModHom::new(z2.clone(), z4.clone(), Matrix::column(&[2])).unwrap();
        let g = ModHom::new(z4.clone(), z2.clone(), Matrix::column(&[1])).unwrap();
        let s = ModSES::new(f, g).unwrap();
        assert!(is_split(&s).is_none());
        assert_eq!(purity_witness(&s), Some(2));

        let zero = FinMod::zero(&m);
        let s = ModSES::new(ModHom::zero(&zero, &z4), ModHom::identity(&z4)).unwrap();
        assert!(is_split(&s).unwrap().is_zero());
    }

    #[test]
    fn gi_certificates() {
        let m = z(4);
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        let c = gi_module_certificate(&z2);
        assert!(c.holds());
        assert_eq!(c.complex.even.matrix().get(0, 0), 2);
        assert_eq!(c.complex.odd.matrix().get(0, 0), 2);
        assert!(gi_module_certificate(&FinMod::cyclic(&m, 4).unwrap()).holds());
        assert!(gi_module_certificate(&FinMod::zero(&m)).holds());
    }
}
