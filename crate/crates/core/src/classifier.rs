//! Decision procedures for classes of representations, each paired with an oracle.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{
    ext1, injective_embedding, injective_test_family, totally_acyclic_injective_complex, totally_acyclic_with_family,
};
use crate::purity::{is_pure_module_epi, is_pure_module_mono, is_pure_rep_ses};
use crate::quiver::Quiver;
use crate::rep::{RepSES, Representation};
use crate::zn::{
    gi_module_certificate, is_flat_module, is_injective_module, is_projective_module, is_strongly_fp_injective_module,
    solve_postcompose, solve_precompose, FinMod, Matrix, ModHom, Modulus,
};

/// Whether the characterization is a full decision procedure or only a necessary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Characterization,
    NecessityOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexEvidence {
    pub vertex: String,
    /// The condition on `ψ_v` or `φ_v`.
    pub map_condition: bool,
    /// The module-level condition on `X(v)`.
    pub component: bool,
    /// The module-level condition on `Ker ψ_v`, where relevant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<bool>,
    /// Splitting map of `ψ_v` or `φ_v` as matrix rows, where relevant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub class: String,
    pub holds: bool,
    pub scope: Scope,
    pub vertices: Vec<VertexEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
}

impl ClassVerdict {
    fn from_evidence(class: &str, scope: Scope, vertices: Vec<VertexEvidence>) -> Self {
        let holds = vertices.iter().all(|e| e.map_condition && e.component && e.kernel.unwrap_or(true));
        ClassVerdict { class: class.into(), holds, scope, vertices, oracle: None }
    }

    /// The characterization and the oracle disagree in a way the scope does not allow.
    pub fn is_violation(&self) -> bool {
        match (self.scope, self.oracle) {
            (_, None) => false,
            (Scope::Characterization, Some(o)) => o != self.holds,
            (Scope::NecessityOnly, Some(o)) => o && !self.conditions_hold(),
        }
    }

    /// The per-vertex conditions, regardless of scope.
    pub fn conditions_hold(&self) -> bool {
        self.vertices.iter().all(|e| e.map_condition && e.component && e.kernel.unwrap_or(true))
    }

    /// Re-checks every recorded splitting against the representation.
    pub fn replay(&self, x: &Representation) -> bool {
        let q = x.quiver();
        self.vertices.iter().all(|e| {
            let Some(rows) = &e.splitting else {
                return true;
            };
            let Ok(v) = q.vertex(&e.vertex) else {
                return false;
            };
            let shaped = |r: usize, c: usize| {
                if rows.is_empty() {
                    Ok(Matrix::zeros(r, c))
                } else {
                    Matrix::from_rows(rows)
                }
            };
            match self.class.as_str() {
                "injective" => {
                    let psi = x.psi(v);
                    let Ok(m) = shaped(x.at(v).rank(), psi.codomain().rank()) else {
                        return false;
                    };
                    ModHom::new(psi.codomain().clone(), x.at(v).clone(), m)
                        .map(|s| psi.compose(&s) == ModHom::identity(psi.codomain()))
                        .unwrap_or(false)
                }
                "projective" => {
                    let phi = x.phi(v);
                    let Ok(m) = shaped(phi.domain().rank(), x.at(v).rank()) else {
                        return false;
                    };
                    ModHom::new(x.at(v).clone(), phi.domain().clone(), m)
                        .map(|r| r.compose(&phi) == ModHom::identity(phi.domain()))
                        .unwrap_or(false)
                }
                _ => true,
            }
        })
    }
}

fn scope_right(q: &Quiver) -> Scope {
    if q.is_right_rooted() {
        Scope::Characterization
    } else {
        Scope::NecessityOnly
    }
}

fn scope_left(q: &Quiver) -> Scope {
    if q.is_left_rooted() {
        Scope::Characterization
    } else {
        Scope::NecessityOnly
    }
}

fn psi_section(x: &Representation, v: usize) -> Option<ModHom> {
    let psi = x.psi(v);
    if !psi.is_surjective() {
        return None;
    }
    solve_postcompose(&psi, &ModHom::identity(psi.codomain()))
}

fn phi_retraction(x: &Representation, v: usize) -> Option<ModHom> {
    let phi = x.phi(v);
    if !phi.is_injective() {
        return None;
    }
    solve_precompose(&phi, &ModHom::identity(phi.domain()))
}

fn psi_pure_epi(x: &Representation, v: usize) -> bool {
    let psi = x.psi(v);
    psi.is_surjective() && is_pure_module_epi(&psi).unwrap_or(false)
}

/// The injectivity conditions without sections: over Z/n an epimorphism out of an
/// injective module splits exactly when its kernel is injective.
pub fn injective_by_kernels(x: &Representation) -> bool {
    (0..x.quiver().num_vertices()).all(|v| {
        let psi = x.psi(v);
        is_injective_module(x.at(v)).holds && psi.is_surjective() && is_injective_module(&psi.kernel().module).holds
    })
}

/// `ψ_v` split epi and `X(v)` injective for every `v`.
pub fn classify_injective(x: &Representation) -> ClassVerdict {
    let q = x.quiver();
    let vertices = (0..q.num_vertices())
        .map(|v| {
            let s = psi_section(x, v);
            VertexEvidence {
                vertex: q.vertex_name(v).into(),
                map_condition: s.is_some(),
                component: is_injective_module(x.at(v)).holds,
                kernel: None,
                splitting: s.map(|s| s.matrix().to_rows()),
            }
        })
        .collect();
    let mut verdict = ClassVerdict::from_evidence("injective", scope_right(q), vertices);
    if verdict.scope == Scope::NecessityOnly {
        let o = injectivity_oracle(x);
        verdict.holds = o;
        verdict.oracle = Some(o);
    }
    verdict
}

pub fn classify_injective_with_oracle(x: &Representation) -> ClassVerdict {
    let mut v = classify_injective(x);
    v.oracle = Some(injectivity_oracle(x));
    v
}

/// Rank-one test objects over `Z/p` on cyclic quivers: `Z/p` at every vertex
/// with scalar arrow actions, when there are few enough of them.
fn scalar_tests(q: &Arc<Quiver>, md: &Modulus, p: u64) -> Vec<Representation> {
    let arrows = q.num_arrows() as u32;
    if q.is_acyclic() || p.checked_pow(arrows).is_none_or(|c| c > 64) {
        return Vec::new();
    }
    let zp = FinMod::cyclic(md, p).expect("prime divides n");
    let mut out = Vec::new();
    for code in 0..p.pow(arrows) {
        let mut c = code;
        let maps = (0..arrows)
            .map(|_| {
                let s = c % p;
                c /= p;
                ModHom::scalar(&zp, s)
            })
            .collect();
        if let Ok(r) = Representation::new(q.clone(), md.clone(), vec![zp.clone(); q.num_vertices()], maps) {
            out.push(r);
        }
    }
    out
}

/// Simple test objects `s_v(Z/p)`, plus scalar rank-one objects on cyclic quivers.
pub fn simple_test_objects(q: &Arc<Quiver>, md: &Modulus) -> Vec<Representation> {
    let mut out = Vec::new();
    for &(p, _) in md.primes() {
        let zp = FinMod::cyclic(md, p).expect("prime divides n");
        for v in 0..q.num_vertices() {
            out.push(crate::rep::stalk(q.clone(), v, &zp));
        }
        out.extend(scalar_tests(q, md, p));
    }
    out
}

/// `Ext^1_Q(S, X) = 0` for every simple test object `S`.
pub fn injectivity_oracle(x: &Representation) -> bool {
    simple_test_objects(x.quiver_arc(), x.modulus()).iter().all(|s| ext1(s, x).map(|e| e.is_zero()).unwrap_or(false))
}

/// `Ext^1_Q(X, S) = 0` for every simple test object `S`.
pub fn projectivity_oracle(x: &Representation) -> bool {
    simple_test_objects(x.quiver_arc(), x.modulus()).iter().all(|s| ext1(x, s).map(|e| e.is_zero()).unwrap_or(false))
}

/// `φ_v` split mono and `X(v)` projective for every `v`.
pub fn classify_projective(x: &Representation) -> ClassVerdict {
    let q = x.quiver();
    let vertices = (0..q.num_vertices())
        .map(|v| {
            let r = phi_retraction(x, v);
            VertexEvidence {
                vertex: q.vertex_name(v).into(),
                map_condition: r.is_some(),
                component: is_projective_module(x.at(v)).holds,
                kernel: None,
                splitting: r.map(|r| r.matrix().to_rows()),
            }
        })
        .collect();
    let mut verdict = ClassVerdict::from_evidence("projective", scope_left(q), vertices);
    if verdict.scope == Scope::NecessityOnly {
        let o = projectivity_oracle(x);
        verdict.holds = o;
        verdict.oracle = Some(o);
    }
    verdict
}

pub fn classify_projective_with_oracle(x: &Representation) -> ClassVerdict {
    let mut v = classify_projective(x);
    v.oracle = Some(projectivity_oracle(x));
    v
}

/// `φ_v` pure mono and `X(v)` flat for every `v`.
pub fn classify_flat(x: &Representation) -> ClassVerdict {
    let q = x.quiver();
    let vertices = (0..q.num_vertices())
        .map(|v| {
            let phi = x.phi(v);
            VertexEvidence {
                vertex: q.vertex_name(v).into(),
                map_condition: phi.is_injective() && is_pure_module_mono(&phi).unwrap_or(false),
                component: is_flat_module(x.at(v)).holds,
                kernel: None,
                splitting: None,
            }
        })
        .collect();
    ClassVerdict::from_evidence("flat", scope_left(q), vertices)
}

/// `ψ_v` pure epi and `X(v)` fp-injective for every `v`.
pub fn classify_fp_injective(x: &Representation) -> ClassVerdict {
    let q = x.quiver();
    let vertices = (0..q.num_vertices())
        .map(|v| VertexEvidence {
            vertex: q.vertex_name(v).into(),
            map_condition: psi_pure_epi(x, v),
            component: is_injective_module(x.at(v)).holds,
            kernel: None,
            splitting: None,
        })
        .collect();
    ClassVerdict::from_evidence("fp-injective", scope_right(q), vertices)
}

/// `ψ_v` pure epi and `X(v)` strongly fp-injective for every `v`.
pub fn classify_strongly_fp_injective(x: &Representation) -> ClassVerdict {
    let q = x.quiver();
    let vertices = (0..q.num_vertices())
        .map(|v| VertexEvidence {
            vertex: q.vertex_name(v).into(),
            map_condition: psi_pure_epi(x, v),
            component: is_strongly_fp_injective_module(x.at(v)),
            kernel: None,
            splitting: None,
        })
        .collect();
    ClassVerdict::from_evidence("strongly-fp-injective", scope_right(q), vertices)
}

pub fn classify_strongly_fp_injective_with_oracle(x: &Representation) -> Result<ClassVerdict> {
    let mut v = classify_strongly_fp_injective(x);
    v.oracle = Some(definitional_sfp_check(x, default_depth(x.quiver()))?.holds);
    Ok(v)
}

pub fn default_depth(q: &Quiver) -> usize {
    q.num_vertices() + 2
}

#[derive(Clone, Debug, Serialize)]
pub struct SfpCheck {
    pub holds: bool,
    /// Steps whose purity was tested.
    pub steps: usize,
    /// First impure step.
    pub failed_step: Option<usize>,
    /// The run stopped on a repeated cosyzygy.
    pub periodic: bool,
    #[serde(skip)]
    pub sequence: Vec<RepSES>,
}

/// Builds the canonical injective coresolution step by step and tests each step for purity.
pub fn definitional_sfp_check(x: &Representation, depth: usize) -> Result<SfpCheck> {
    if !x.quiver().is_right_rooted() {
        return Err(Error::CyclicQuiver("the canonical injective coresolution"));
    }
    let mut seen = BTreeSet::new();
    let mut current = x.clone();
    let mut sequence = Vec::new();
    for k in 0..depth.max(1) {
        if current.is_zero() {
            return Ok(SfpCheck { holds: true, steps: k, failed_step: None, periodic: false, sequence });
        }
        if !seen.insert(current.digest()) {
            return Ok(SfpCheck { holds: true, steps: k, failed_step: None, periodic: true, sequence });
        }
        let s = RepSES::from_mono(injective_embedding(&current)?)?;
        let pure = is_pure_rep_ses(&s).pure;
        current = s.right().clone();
        sequence.push(s);
        if !pure {
            return Ok(SfpCheck { holds: false, steps: k + 1, failed_step: Some(k), periodic: false, sequence });
        }
    }
    if current.is_zero() {
        return Ok(SfpCheck { holds: true, steps: depth, failed_step: None, periodic: false, sequence });
    }
    Err(Error::DepthExhausted(depth))
}

/// Default window of the totally acyclic construction on each side.
pub const ACYCLIC_WINDOW: usize = 2;

/// `ψ_v` onto, with Gorenstein certificates for `X(v)` and `Ker ψ_v`.
pub fn classify_gorenstein_sfp(x: &Representation) -> ClassVerdict {
    let q = x.quiver();
    let vertices = (0..q.num_vertices())
        .map(|v| {
            let psi = x.psi(v);
            VertexEvidence {
                vertex: q.vertex_name(v).into(),
                map_condition: psi.is_surjective(),
                component: gi_module_certificate(x.at(v)).holds(),
                kernel: Some(gi_module_certificate(&psi.kernel().module).holds()),
                splitting: None,
            }
        })
        .collect();
    ClassVerdict::from_evidence("gorenstein-strongly-fp-injective", scope_right(q), vertices)
}

pub fn classify_gorenstein_sfp_with_oracle(x: &Representation) -> Result<ClassVerdict> {
    let mut v = classify_gorenstein_sfp(x);
    v.oracle = Some(totally_acyclic_injective_complex(x, ACYCLIC_WINDOW)?.found());
    Ok(v)
}

/// Gorenstein test with the `Hom(J, -)` family restricted to fp-injective objects.
pub fn is_ding_injective(x: &Representation) -> Result<bool> {
    let family: Vec<_> = injective_test_family(x.quiver_arc(), x.modulus())?
        .into_iter()
        .filter(|(_, j)| classify_fp_injective(j).holds)
        .collect();
    Ok(totally_acyclic_with_family(x, ACYCLIC_WINDOW, family)?.found())
}

/// Module classes usable in the membership tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleClass {
    All,
    Injective,
    Projective,
    Flat,
    StronglyFpInjective,
    GorensteinInjective,
}

impl ModuleClass {
    pub fn contains(&self, m: &FinMod) -> bool {
        match self {
            ModuleClass::All => true,
            ModuleClass::Injective => is_injective_module(m).holds,
            ModuleClass::Projective => is_projective_module(m).holds,
            ModuleClass::Flat => is_flat_module(m).holds,
            ModuleClass::StronglyFpInjective => is_strongly_fp_injective_module(m),
            ModuleClass::GorensteinInjective => gi_module_certificate(m).holds(),
        }
    }
}

/// `X(v) ∈ C` for every `v`.
pub fn membership_rep_class(x: &Representation, class: ModuleClass) -> bool {
    x.modules().iter().all(|m| class.contains(m))
}

/// `ψ_v` onto with `X(v), Ker ψ_v ∈ C` for every `v`.
pub fn membership_psi_class(x: &Representation, class: ModuleClass) -> bool {
    (0..x.quiver().num_vertices()).all(|v| {
        let psi = x.psi(v);
        psi.is_surjective() && class.contains(x.at(v)) && class.contains(&psi.kernel().module)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub pairs: usize,
    /// Indices of pairs with `Ext^1(K, J) ≠ 0`.
    pub violations: Vec<usize>,
}

/// `Ext^1_Q(K, J)` for each sampled pair.
pub fn ext_orthogonality_sample(pairs: &[(Representation, Representation)]) -> Result<OrthogonalityReport> {
    let mut violations = Vec::new();
    for (i, (k, j)) in pairs.iter().enumerate() {
        if !ext1(k, j)?.is_zero() {
            violations.push(i);
        }
    }
    Ok(OrthogonalityReport { pairs: pairs.len(), violations })
}

/// Every class verdict, with oracles when requested.
pub fn classify_all(x: &Representation, oracle: bool) -> Result<Vec<ClassVerdict>> {
    let rooted = x.quiver().is_right_rooted();
    let mut out = Vec::new();
    out.push(if oracle { classify_injective_with_oracle(x) } else { classify_injective(x) });
    out.push(if oracle { classify_projective_with_oracle(x) } else { classify_projective(x) });
    out.push(classify_flat(x));
    out.push(classify_fp_injective(x));
    out.push(if oracle && rooted {
        classify_strongly_fp_injective_with_oracle(x)?
    } else {
        classify_strongly_fp_injective(x)
    });
    out.push(if oracle && rooted { classify_gorenstein_sfp_with_oracle(x)? } else { classify_gorenstein_sfp(x) });
    Ok(out)
}

pub const CLASS_NAMES: [&str; 6] =
    ["injective", "projective", "flat", "fp-injective", "strongly-fp-injective", "gorenstein-strongly-fp-injective"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a2, a2_rep, gorenstein_fixture, loop_fixture};
    use crate::homology::projective_generator;
    use crate::rep::stalk;

    fn zn(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn injective_examples() {
        let md = zn(4);
        let e1 = a2_rep(&md, &[4], &[], &[]);
        let v = classify_injective_with_oracle(&e1);
        assert!(v.holds && !v.is_violation() && v.replay(&e1));
        let s2 = stalk(a2(), 1, &FinMod::free(&md, 1));
        let v = classify_injective_with_oracle(&s2);
        assert!(!v.holds && v.oracle == Some(false));
        let e2 = a2_rep(&md, &[4], &[4], &[vec![1]]);
        let v = classify_injective_with_oracle(&e2);
        assert!(v.holds && v.oracle == Some(true) && v.replay(&e2));
    }

    #[test]
    fn projective_examples() {
        let md = zn(2);
        let p1 = projective_generator(&a2(), &md, 0).unwrap();
        assert!(classify_projective_with_oracle(&p1).holds);
        assert!(classify_flat(&p1).holds);
        let s1 = stalk(a2(), 0, &FinMod::free(&md, 1));
        let v = classify_projective_with_oracle(&s1);
        assert!(!v.holds && v.oracle == Some(false));
    }

    #[test]
    fn splittings_with_empty_sides_replay() {
        let x = gorenstein_fixture(&zn(4));
        assert!(classify_projective(&x).replay(&x));
        assert!(classify_injective(&x).replay(&x));
        let p1 = projective_generator(&a2(), &zn(4), 0).unwrap();
        assert!(classify_projective(&p1).replay(&p1));
    }

    #[test]
    fn strongly_fp_injective_examples() {
        let md = zn(4);
        let s2 = stalk(a2(), 1, &FinMod::free(&md, 1));
        let v = classify_strongly_fp_injective_with_oracle(&s2).unwrap();
        assert!(!v.holds && v.oracle == Some(false));
        let d = definitional_sfp_check(&s2, 4).unwrap();
        assert_eq!(d.failed_step, Some(0));
        let e2 = a2_rep(&md, &[4], &[4], &[vec![1]]);
        let v = classify_strongly_fp_injective_with_oracle(&e2).unwrap();
        assert!(v.holds && v.oracle == Some(true));
        assert!(classify_fp_injective(&e2).holds);
        assert!(!classify_fp_injective(&s2).holds);
    }

    #[test]
    fn gorenstein_fixture_is_gorenstein_not_injective() {
        let md = zn(4);
        let g = gorenstein_fixture(&md);
        let v = classify_gorenstein_sfp_with_oracle(&g).unwrap();
        assert!(v.holds && v.oracle == Some(true));
        assert!(!classify_injective(&g).holds);
        assert!(membership_psi_class(&g, ModuleClass::GorensteinInjective));
        assert!(is_ding_injective(&g).unwrap());
        let s2 = stalk(a2(), 1, &FinMod::cyclic(&md, 2).unwrap());
        let v = classify_gorenstein_sfp_with_oracle(&s2).unwrap();
        assert!(!v.holds && v.oracle == Some(false));
    }

    #[test]
    fn loop_fixture_needs_rootedness() {
        let md = zn(4);
        let x = loop_fixture(&md);
        let v = classify_injective(&x);
        assert_eq!(v.scope, Scope::NecessityOnly);
        assert!(v.conditions_hold());
        assert_eq!(v.oracle, Some(false));
        assert!(!v.holds && !v.is_violation());
    }

    #[test]
    fn membership_trivia() {
        let md = zn(4);
        let x = a2_rep(&md, &[2], &[4], &[vec![2]]);
        assert!(membership_rep_class(&x, ModuleClass::All));
        assert!(!membership_rep_class(&x, ModuleClass::Injective));
        let r = ext_orthogonality_sample(&[(x.clone(), a2_rep(&md, &[4], &[4], &[vec![1]]))]).unwrap();
        assert!(r.violations.is_empty());
    }
}
