//! The verification suites and their negative controls.

use std::sync::Arc;

use rand::Rng;
use serde_json::json;

use super::gen::{
    pick_modulus, random_coinduced, random_element, random_injective, random_module, random_quiver, random_rep_ses,
    random_representation, random_subquiver, ModuleCaps, QuiverCaps, QuiverConstraints, Rng8,
};
use super::oracles::{brute_force_ext1_cardinality, has_cycle, stages_well_formed};
use super::{Config, Outcome};
use crate::classifier::{
    classify_flat, classify_fp_injective, classify_gorenstein_sfp, classify_injective, classify_injective_with_oracle,
    classify_projective, classify_strongly_fp_injective, default_depth, definitional_sfp_check,
    ext_orthogonality_sample, injective_by_kernels, injectivity_oracle, is_ding_injective, membership_psi_class,
    ModuleClass, ACYCLIC_WINDOW,
};
use crate::error::Result;
use crate::fixtures::{a2, gorenstein_fixture, loop_quiver, nonpure_xi, NONPURE_MODULI};
use crate::homology::{
    canonical_sequence, ext, ext1, ext1_yoneda, injective_embedding, projective_resolution, stalk_ext_identity_check,
    totally_acyclic_injective_complex, TotallyAcyclicOutcome,
};
use crate::purity::{definitional_purity_check, is_pure_mono, is_pure_rep_ses, rep_split_retraction};
use crate::quiver::{Arrow, Quiver};
use crate::rep::{
    adjunction_check, dual_rep_ses, hom_reps, restrict, right_adjoint, stalk, RepMorphism, RepSES, Representation,
};
use crate::zn::{ext_cyclic, is_pure_module_ses, is_split, Biproduct, FinMod, ModHom, Modulus};

pub type TrialFn = fn(&mut Rng8, &Config, usize) -> Result<Outcome>;

pub struct Suite {
    pub name: &'static str,
    pub trial: TrialFn,
    /// A corrupted instance per index; its outcome passes when the corruption was caught.
    pub control: Option<TrialFn>,
    /// Suites replaying named fixtures run a fixed number of trials.
    pub fixed_trials: Option<usize>,
}

pub static SUITES: [Suite; 16] = [
    Suite { name: "rootedness", trial: rootedness, control: Some(rootedness_control), fixed_trials: None },
    Suite { name: "purity", trial: purity, control: Some(purity_control), fixed_trials: None },
    Suite { name: "classification", trial: classification, control: Some(classification_control), fixed_trials: None },
    Suite { name: "gorenstein", trial: gorenstein, control: Some(gorenstein_control), fixed_trials: None },
    Suite { name: "closure", trial: closure, control: Some(closure_control), fixed_trials: None },
    Suite { name: "stability", trial: stability, control: Some(stability_control), fixed_trials: None },
    Suite { name: "products", trial: products, control: Some(products_control), fixed_trials: None },
    Suite {
        name: "right_adjoint",
        trial: right_adjoint_suite,
        control: Some(right_adjoint_control),
        fixed_trials: None,
    },
    Suite { name: "adjunction", trial: adjunction, control: Some(adjunction_control), fixed_trials: None },
    Suite { name: "ext", trial: ext_suite, control: Some(ext_control), fixed_trials: None },
    Suite { name: "long_exact", trial: long_exact, control: Some(long_exact_control), fixed_trials: None },
    Suite { name: "stalk_ext", trial: stalk_ext, control: Some(stalk_ext_control), fixed_trials: None },
    Suite { name: "orthogonality", trial: orthogonality, control: Some(orthogonality_control), fixed_trials: None },
    Suite { name: "nonpure_fixture", trial: nonpure_fixture, control: Some(nonpure_control), fixed_trials: Some(3) },
    Suite {
        name: "totally_acyclic_injectivity",
        trial: totally_acyclic,
        control: Some(totally_acyclic_control),
        fixed_trials: None,
    },
    Suite { name: "collapse", trial: collapse, control: Some(collapse_control), fixed_trials: None },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

// ---------------------------------------------------------------- helpers

fn qcaps(cfg: &Config, v: usize, a: usize) -> QuiverCaps {
    QuiverCaps { max_vertices: cfg.max_vertices.min(v).max(1), max_arrows: cfg.max_arrows.min(a) }
}

fn mcaps(cfg: &Config, rank: usize, card: u128) -> ModuleCaps {
    ModuleCaps { max_rank: rank, max_cardinality: cfg.max_cardinality.min(card) }
}

const ROOTED: QuiverConstraints = QuiverConstraints { right_rooted: true, acyclic: true };

fn rooted_quiver(rng: &mut Rng8, cfg: &Config, v: usize, a: usize) -> Result<Arc<Quiver>> {
    Ok(Arc::new(random_quiver(rng, qcaps(cfg, v, a), ROOTED)?))
}

/// Moduli from the configuration restricted to `allowed`, or `allowed` itself when none remain.
fn pick_from(rng: &mut Rng8, cfg: &Config, allowed: &[u64]) -> Modulus {
    let both: Vec<u64> = cfg.moduli.iter().copied().filter(|m| allowed.contains(m)).collect();
    pick_modulus(rng, if both.is_empty() { allowed } else { &both })
}

fn outcome(instance: String, verdicts: serde_json::Value, pass: bool) -> Result<Outcome> {
    Ok(Outcome { instance, verdicts, pass })
}

fn ses_digest(s: &RepSES) -> String {
    format!("{}>{}", s.left().digest(), s.middle().digest())
}

fn sfp(x: &Representation) -> bool {
    classify_strongly_fp_injective(x).holds
}

/// A quiver with at least one arrow and that arrow: `q` itself when it has one, else A2.
fn with_arrow(q: &Arc<Quiver>) -> (Arc<Quiver>, usize) {
    if q.num_arrows() > 0 {
        (q.clone(), 0)
    } else {
        (a2(), 0)
    }
}

/// `s_t(Z/p)` at the target of arrow `a`: `ψ` at the source is not onto.
fn stalk_at_target(q: &Arc<Quiver>, a: usize, md: &Modulus) -> Representation {
    let p = md.primes()[0].0;
    stalk(q.clone(), q.tgt(a), &FinMod::cyclic(md, p).expect("prime divides n"))
}

/// `x` with the map of arrow `a` replaced by zero.
fn zero_arrow(x: &Representation, a: usize) -> Representation {
    let mut maps = x.maps().to_vec();
    maps[a] = ModHom::zero(maps[a].domain(), maps[a].codomain());
    Representation::new(x.quiver_arc().clone(), x.modulus().clone(), x.modules().to_vec(), maps)
        .expect("zero maps are well defined")
}

/// An arrow whose zeroing changes `x`.
fn live_arrow(x: &Representation) -> Option<usize> {
    (0..x.quiver().num_arrows()).find(|&a| !x.map(a).is_zero())
}

fn random_morphism(rng: &mut Rng8, x: &Representation, y: &Representation) -> RepMorphism {
    let h = hom_reps(x, y);
    if h.basis.is_empty() {
        return RepMorphism::zero(x, y);
    }
    h.morphism(&random_element(rng, &h.group))
}

fn direct_sum2(x: &Representation, y: &Representation) -> Result<Representation> {
    Ok(Representation::direct_sum(&[x.clone(), y.clone()])?.rep)
}

/// A mix of injective, quotient-of-injective and random instances.
fn mixed_instance(
    rng: &mut Rng8,
    trial: usize,
    q: &Arc<Quiver>,
    md: &Modulus,
    caps: ModuleCaps,
) -> Result<Representation> {
    Ok(match trial % 3 {
        0 => random_injective(rng, q, md, caps)?,
        1 => {
            let i = random_injective(rng, q, md, caps)?;
            random_rep_ses(rng, &i)?.right().clone()
        }
        _ => random_representation(rng, q, md, caps),
    })
}

// ---------------------------------------------------------------- rootedness

fn rootedness(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q =
        if trial == 0 { loop_quiver() } else { random_quiver(rng, qcaps(cfg, 8, 10), QuiverConstraints::default())? };
    let rooted = q.is_right_rooted();
    let cycle = has_cycle(&q);
    let (stages_ok, fixpoint) = stages_well_formed(&q);
    let mut pass = rooted == !cycle && q.is_acyclic() == !cycle && stages_ok;
    if trial == 0 {
        pass &= !rooted;
    }
    outcome(
        format!("{}v{}a", q.num_vertices(), q.num_arrows()),
        json!({ "right_rooted": rooted, "cycle": cycle, "stages_ascending": stages_ok, "fixpoint": fixpoint }),
        pass,
    )
}

fn rootedness_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = random_quiver(rng, qcaps(cfg, 8, 10), ROOTED)?;
    let mut arrows = q.arrows().to_vec();
    let v = q.vertex_name(rng.gen_range(0..q.num_vertices())).to_string();
    arrows.push(Arrow { id: "loop".into(), src: v.clone(), tgt: v });
    let corrupted = Quiver::new(q.vertices().to_vec(), arrows)?;
    let detected = corrupted.is_right_rooted() != q.is_right_rooted();
    outcome(format!("{}v+loop", q.num_vertices()), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- purity

fn purity_instance(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<(RepSES, Arc<Quiver>)> {
    let caps = mcaps(cfg, 2, 64);
    match trial % 10 {
        1 => {
            let md = pick_from(rng, cfg, &[2, 3, 4, 8, 9]);
            Ok((nonpure_xi(&md), a2()))
        }
        2 => {
            let q = rooted_quiver(rng, cfg, 4, 5)?;
            let md = pick_modulus(rng, &cfg.moduli);
            let x = random_representation(rng, &q, &md, caps);
            let z = random_representation(rng, &q, &md, caps);
            let sum = Representation::direct_sum(&[x.clone(), z])?;
            Ok((RepSES::from_mono(sum.injections[0].clone())?, q))
        }
        _ => {
            let q = rooted_quiver(rng, cfg, 4, 5)?;
            let md = pick_modulus(rng, &cfg.moduli);
            let y = random_representation(rng, &q, &md, caps);
            Ok((random_rep_ses(rng, &y)?, q))
        }
    }
}

fn purity(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let (eta, q) = purity_instance(rng, cfg, trial)?;
    let md = eta.left().modulus().clone();
    let op = Arc::new(q.opposite());
    let extra = random_representation(rng, &op, &md, mcaps(cfg, 2, 16));
    let verdict = is_pure_rep_ses(&eta);
    let definitional = definitional_purity_check(&eta, &[extra]);
    let dual_split = rep_split_retraction(&dual_rep_ses(&eta)).is_some();
    let mono_pure = is_pure_mono(eta.f())?.is_some();
    let split = rep_split_retraction(&eta).is_some();
    let vertexwise = (0..q.num_vertices()).all(|v| is_pure_module_ses(&eta.vertex_ses(v)));
    let replay = verdict.replay(&eta);
    let pass = verdict.pure == definitional.pure
        && verdict.pure == dual_split
        && verdict.pure == mono_pure
        && (!split || verdict.pure)
        && (!verdict.pure || vertexwise)
        && replay;
    outcome(
        ses_digest(&eta),
        json!({
            "pure": verdict.pure, "definitional": definitional.pure, "dual_split": dual_split,
            "pure_mono": mono_pure, "split": split, "vertexwise_pure": vertexwise,
            "certificate_replays": replay, "witness": definitional.witness,
        }),
        pass,
    )
}

/// Vertexwise splitness taken as the purity verdict.
fn purity_control(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let (eta, q) = if trial.is_multiple_of(2) {
        let md = pick_from(rng, cfg, &[2, 3, 4, 8, 9]);
        (nonpure_xi(&md), a2())
    } else {
        purity_instance(rng, cfg, trial)?
    };
    let claimed = (0..q.num_vertices()).all(|v| is_split(&eta.vertex_ses(v)).is_some());
    let detected = is_pure_rep_ses(&eta).pure != claimed;
    outcome(ses_digest(&eta), json!({ "claimed": claimed, "detected": detected }), detected)
}

// ---------------------------------------------------------------- classification

fn classification(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 4, 4)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let x = mixed_instance(rng, trial, &q, &md, mcaps(cfg, 2, 32))?;
    let inj = classify_injective(&x);
    let oracle = injectivity_oracle(&x);
    let sfp_v = sfp(&x);
    let def = definitional_sfp_check(&x, default_depth(x.quiver()))?;
    let fp = classify_fp_injective(&x).holds;
    let by_kernels = injective_by_kernels(&x);
    let replay = inj.replay(&x);
    let pass = inj.holds == oracle
        && inj.holds == by_kernels
        && inj.holds == sfp_v
        && sfp_v == def.holds
        && sfp_v == fp
        && replay;
    outcome(
        x.digest(),
        json!({
            "injective": inj.holds, "oracle": oracle, "strongly_fp_injective": sfp_v,
            "definitional": def.holds, "definitional_steps": def.steps, "fp_injective": fp, "by_kernels": by_kernels, "replay": replay,
        }),
        pass,
    )
}

/// An injective instance with one arrow map zeroed, still expected injective.
fn classification_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 4, 4)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let x = random_injective(rng, &q, &md, mcaps(cfg, 2, 32))?;
    let Some(a) = live_arrow(&x) else {
        return outcome(x.digest(), json!({ "detected": false, "reason": "no live arrow" }), false);
    };
    let corrupted = zero_arrow(&x, a);
    let detected = !classify_injective(&corrupted).holds;
    outcome(corrupted.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- gorenstein

fn gorenstein(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &[4, 9]);
    let fixture = trial == 0;
    let x = if fixture {
        gorenstein_fixture(&Modulus::new(4)?)
    } else {
        let q = rooted_quiver(rng, cfg, 3, 3)?;
        mixed_instance(rng, trial, &q, &md, mcaps(cfg, 2, 16))?
    };
    let g = classify_gorenstein_sfp(&x).holds;
    let psi_class = membership_psi_class(&x, ModuleClass::GorensteinInjective);
    let complex = totally_acyclic_injective_complex(&x, ACYCLIC_WINDOW)?.found();
    let epi = (0..x.quiver().num_vertices()).all(|v| x.psi(v).is_surjective());
    let ding = is_ding_injective(&x)?;
    let mut pass = g == psi_class && g == complex && g == epi && g == ding;
    let injective = classify_injective(&x).holds;
    if fixture {
        pass &= g && !injective;
    }
    outcome(
        x.digest(),
        json!({
            "gorenstein": g, "psi_class": psi_class, "totally_acyclic": complex,
            "psi_epi": epi, "ding": ding, "injective": injective,
        }),
        pass,
    )
}

/// A stalk at an arrow target, expected Gorenstein.
fn gorenstein_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &[4, 9]);
    let (q, a) = with_arrow(&rooted_quiver(rng, cfg, 3, 3)?);
    let x = stalk_at_target(&q, a, &md);
    let detected = !classify_gorenstein_sfp(&x).holds;
    outcome(x.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- closure

fn closure(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 16);
    let i = random_injective(rng, &q, &md, caps)?;
    let j = random_injective(rng, &q, &md, caps)?;
    let x = random_representation(rng, &q, &md, caps);

    let sum = sfp(&direct_sum2(&i, &j)?);
    let summand = sfp(&direct_sum2(&i, &x)?) == (sfp(&i) && sfp(&x));
    let ext_vanishes = ext1(&j, &i)?.is_zero();
    let cokernel = sfp(canonical_sequence(&i)?.right());

    // Pure sub-situation inside an injective.
    let y = random_injective(rng, &q, &md, caps)?;
    let eta = random_rep_ses(rng, &y)?;
    let pure = is_pure_rep_ses(&eta).pure;
    let premise = pure && sfp(eta.middle()) && sfp(eta.right());
    let pure_sub = !premise || sfp(eta.left());
    // Cokernel of a mono between members.
    let mono_cokernel = !sfp(eta.left()) || sfp(eta.right());

    let pass = sum && summand && ext_vanishes && cokernel && pure_sub && mono_cokernel && sfp(&i);
    outcome(
        format!("{}|{}|{}", i.digest(), j.digest(), x.digest()),
        json!({
            "sum": sum, "summand": summand, "extension_splits": ext_vanishes, "cokernel": cokernel,
            "pure_sub": pure_sub, "pure_premise": premise, "mono_cokernel": mono_cokernel,
        }),
        pass,
    )
}

/// One summand swapped for a stalk at an arrow target; the sum is still expected in the class.
fn closure_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &cfg.moduli);
    let (q, a) = with_arrow(&rooted_quiver(rng, cfg, 3, 3)?);
    let i = random_injective(rng, &q, &md, mcaps(cfg, 2, 16))?;
    let corrupted = direct_sum2(&i, &stalk_at_target(&q, a, &md))?;
    let detected = !sfp(&corrupted);
    outcome(corrupted.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- stability

fn stability(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 16);
    let x = mixed_instance(rng, trial, &q, &md, caps)?;
    let expected = sfp(&x);
    let coresolution = definitional_sfp_check(&x, default_depth(&q))?;

    // A random embedding into a sum of two injectives.
    let iota = injective_embedding(&x)?;
    let j = random_injective(rng, &q, &md, caps)?;
    let h = random_morphism(rng, &x, &j);
    let target = Representation::direct_sum(&[iota.target().clone(), j])?;
    let embedding = target.into_sum(&x, &[iota, h]);
    let eta = RepSES::from_mono(embedding)?;
    let embedding_pure = is_pure_rep_ses(&eta).pure;

    let pass = coresolution.holds == expected && embedding_pure == expected;
    outcome(
        x.digest(),
        json!({
            "strongly_fp_injective": expected, "pure_coresolution": coresolution.holds,
            "embedding_pure": embedding_pure, "fp_not_sfp_substitution": "skipped: no finite witness",
        }),
        pass,
    )
}

/// An embedding of a stalk at an arrow target into an injective, expected pure.
fn stability_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &cfg.moduli);
    let (q, a) = with_arrow(&rooted_quiver(rng, cfg, 3, 3)?);
    let x = stalk_at_target(&q, a, &md);
    let eta = RepSES::from_mono(injective_embedding(&x)?)?;
    let detected = !is_pure_rep_ses(&eta).pure;
    outcome(x.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- products

fn products(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 16);
    let i = random_injective(rng, &q, &md, caps)?;
    let j = random_injective(rng, &q, &md, caps)?;
    let product = sfp(&direct_sum2(&i, &j)?);
    let empty = Representation::zero(q.clone(), &md);
    let empty_ok = sfp(&empty) && classify_gorenstein_sfp(&empty).holds;
    let x1 = mixed_instance(rng, trial, &q, &md, caps)?;
    let x2 = mixed_instance(rng, trial + 1, &q, &md, caps)?;
    let g = |x: &Representation| classify_gorenstein_sfp(x).holds;
    let both = direct_sum2(&x1, &x2)?;
    let gorenstein_pair = g(&both) == (g(&x1) && g(&x2));
    let sfp_pair = sfp(&both) == (sfp(&x1) && sfp(&x2));
    let pass = product && empty_ok && gorenstein_pair && sfp_pair;
    outcome(
        format!("{}|{}", x1.digest(), x2.digest()),
        json!({
            "product": product, "empty_product": empty_ok,
            "gorenstein_pair": gorenstein_pair, "sfp_pair": sfp_pair,
        }),
        pass,
    )
}

fn products_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &cfg.moduli);
    let (q, a) = with_arrow(&rooted_quiver(rng, cfg, 3, 3)?);
    let i = random_injective(rng, &q, &md, mcaps(cfg, 2, 16))?;
    let corrupted = direct_sum2(&stalk_at_target(&q, a, &md), &i)?;
    let detected = !classify_gorenstein_sfp(&corrupted).holds;
    outcome(corrupted.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- right adjoint

fn counit(e: &Representation, sub: &Arc<Quiver>, x: &Representation) -> Result<RepMorphism> {
    let ra = right_adjoint(e.quiver_arc(), x)?;
    let y = restrict(sub, e)?;
    ra.to_restricted(&RepMorphism::identity(e), &y, x)
}

fn right_adjoint_suite(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 4, 4)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 16);
    let single = trial.is_multiple_of(4);
    let sub = if single {
        let v = rng.gen_range(0..q.num_vertices());
        Arc::new(q.full_subquiver(&[q.vertex_name(v)])?)
    } else {
        Arc::new(random_subquiver(rng, &q)?)
    };
    let x =
        if trial % 4 == 1 { Representation::zero(sub.clone(), &md) } else { random_injective(rng, &sub, &md, caps)? };
    let e = right_adjoint(&q, &x)?.rep;
    let in_class = sfp(&e);
    let injective = !single || classify_injective(&e).holds;
    let counit_epi = counit(&e, &sub, &x)?.is_epi();
    let zero_ok = !x.is_zero() || e.is_zero();
    let pass = in_class && injective && counit_epi && zero_ok;
    outcome(
        format!("{}<{}", e.digest(), sub.num_vertices()),
        json!({
            "strongly_fp_injective": in_class, "single_vertex_injective": injective,
            "counit_epi": counit_epi, "zero": zero_ok,
        }),
        pass,
    )
}

fn right_adjoint_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 4, 4)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let e = random_coinduced(rng, &q, &md, mcaps(cfg, 2, 16))?;
    let Some(a) = live_arrow(&e) else {
        return outcome(e.digest(), json!({ "detected": false, "reason": "no live arrow" }), false);
    };
    let corrupted = zero_arrow(&e, a);
    let detected = !sfp(&corrupted);
    outcome(corrupted.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- adjunction

fn restrict_morphism(h: &RepMorphism, sub: &Arc<Quiver>, ys: &Representation) -> Result<RepMorphism> {
    let big = h.source().quiver();
    let comps = sub.vertices().iter().map(|v| Ok(h.at(big.vertex(v)?).clone())).collect::<Result<Vec<_>>>()?;
    RepMorphism::new(ys, ys, comps)
}

fn adjunction(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 8);
    let sub = Arc::new(random_subquiver(rng, &q)?);
    let x = random_representation(rng, &sub, &md, caps);
    let y = random_representation(rng, &q, &md, caps);
    let ra = right_adjoint(&q, &x)?;
    let ys = restrict(&sub, &y)?;
    let big_hom = hom_reps(&y, &ra.rep);
    let small_hom = hom_reps(&ys, &x);
    let cardinality = big_hom.group.cardinality() == small_hom.group.cardinality();
    let mut round_trip = true;
    for f in &big_hom.basis {
        round_trip &= ra.from_restricted(&ra.to_restricted(f, &ys, &x)?, &y)? == *f;
    }
    for g in &small_hom.basis {
        round_trip &= ra.to_restricted(&ra.from_restricted(g, &y)?, &ys, &x)? == *g;
    }
    let mut natural = true;
    let ends = hom_reps(&y, &y);
    for h in ends.basis.iter().take(2) {
        let hs = restrict_morphism(h, &sub, &ys)?;
        for f in big_hom.basis.iter().take(2) {
            natural &= ra.to_restricted(&f.compose(h), &ys, &x)? == ra.to_restricted(f, &ys, &x)?.compose(&hs);
        }
    }
    let op = Arc::new(q.opposite());
    let yop = random_representation(rng, &op, &md, caps);
    let tensor = adjunction_check(&yop, &y)?;
    let pass = cardinality && round_trip && natural && tensor.holds();
    outcome(
        format!("{}|{}", y.digest(), x.digest()),
        json!({
            "hom_cardinality": cardinality, "round_trip": round_trip, "natural": natural,
            "tensor_cardinality": tensor.tensor_cardinality == tensor.hom_cardinality,
            "tensor_injective": tensor.injective, "tensor_natural": tensor.natural,
        }),
        pass,
    )
}

/// `X` on the subquiver and zero elsewhere.
fn extension_by_zero(q: &Arc<Quiver>, x: &Representation) -> Result<Representation> {
    let sub = x.quiver();
    let md = x.modulus();
    let modules: Vec<FinMod> = q
        .vertices()
        .iter()
        .map(|v| sub.vertex(v).map(|u| x.at(u).clone()).unwrap_or_else(|_| FinMod::zero(md)))
        .collect();
    let maps = (0..q.num_arrows())
        .map(|a| match sub.arrow(q.arrow_id(a)) {
            Ok(b) => x.map(b).clone(),
            Err(_) => ModHom::zero(&modules[q.src(a)], &modules[q.tgt(a)]),
        })
        .collect();
    Representation::new(q.clone(), md.clone(), modules, maps)
}

/// Extension by zero in place of the right adjoint at the target of an arrow,
/// tested against the free representation.
fn adjunction_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let (q, a) = with_arrow(&rooted_quiver(rng, cfg, 3, 3)?);
    let md = pick_modulus(rng, &cfg.moduli);
    let sub = Arc::new(q.full_subquiver(&[q.vertex_name(q.tgt(a))])?);
    let x = stalk(sub.clone(), 0, &random_module(rng, &md, mcaps(cfg, 2, 8)));
    let gens =
        (0..q.num_vertices()).map(|w| crate::homology::projective_generator(&q, &md, w)).collect::<Result<Vec<_>>>()?;
    let y = Representation::direct_sum(&gens)?.rep;
    let corrupted = extension_by_zero(&q, &x)?;
    let ys = restrict(&sub, &y)?;
    let detected = hom_reps(&y, &corrupted).group.cardinality() != hom_reps(&ys, &x).group.cardinality();
    outcome(corrupted.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- ext

/// Pairs with `|X| · |Y| ≤ 256`.
fn small_pair(rng: &mut Rng8, cfg: &Config) -> Result<(Representation, Representation)> {
    loop {
        let q = rooted_quiver(rng, cfg, 3, 3)?;
        let md = pick_modulus(rng, &cfg.moduli);
        let caps = mcaps(cfg, 2, 16);
        let x = random_representation(rng, &q, &md, caps);
        let y = random_representation(rng, &q, &md, caps);
        if x.cardinality() * y.cardinality() <= 256 {
            return Ok((x, y));
        }
    }
}

fn a2_stalks() -> (Representation, Representation) {
    let md = Modulus::new(2).expect("valid");
    let z2 = FinMod::free(&md, 1);
    (stalk(a2(), 0, &z2), stalk(a2(), 1, &z2))
}

fn ext_suite(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let (x, y, expected) = match trial {
        0 => {
            let (s1, s2) = a2_stalks();
            (s1, s2, Some(vec![2]))
        }
        1 => {
            let (s1, s2) = a2_stalks();
            (s2, s1, Some(vec![]))
        }
        _ => {
            let (x, y) = small_pair(rng, cfg)?;
            (x, y, None)
        }
    };
    let e1 = ext1(&x, &y)?;
    let yoneda = ext1_yoneda(&x, &y)?;
    let brute = brute_force_ext1_cardinality(&x, &y);
    let e0 = ext(&x, &y, 0)?;
    let hom = hom_reps(&x, &y).group;
    let ext0_hom = e0.module == hom;

    // Dimension shifting along 0 → K → P → X → 0.
    let res = projective_resolution(&x, 3)?;
    let (shift1, shift2) = match res.steps.first() {
        Some(step) => {
            let (k, p) = (step.left(), step.middle());
            let card = |m: &FinMod| m.cardinality();
            (
                card(&e1) * card(&hom_reps(p, &y).group) == card(&hom_reps(k, &y).group) * card(&hom),
                ext(&x, &y, 2)?.module == ext1(k, &y)?,
            )
        }
        None => (e1.is_zero(), ext(&x, &y, 2)?.module.is_zero()),
    };

    let mut pass = e1 == yoneda && brute == Some(e1.cardinality()) && ext0_hom && shift1 && shift2;
    if let Some(f) = &expected {
        pass &= e1.factors() == f.as_slice();
    }
    outcome(
        format!("{}|{}", x.digest(), y.digest()),
        json!({
            "ext1": e1.factors(), "yoneda": yoneda.factors(), "brute_force": brute.map(|b| b.to_string()),
            "ext0_is_hom": ext0_hom, "shift1": shift1, "shift2": shift2,
        }),
        pass,
    )
}

/// Arguments swapped on the engine side only.
fn ext_control(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let (x, y) = if trial == 0 { a2_stalks() } else { small_pair(rng, cfg)? };
    let brute = brute_force_ext1_cardinality(&x, &y);
    let swapped = ext1(&y, &x)?.cardinality();
    let detected = brute != Some(swapped);
    outcome(format!("{}|{}", x.digest(), y.digest()), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- long exact sequence

/// `|im δ|` for the connecting map `Ext^1(A, Y) → Ext^2(C, Y)`, from the exact segment
/// `0 → Hom(C) → Hom(B) → Hom(A) → Ext^1(C) → Ext^1(B) → Ext^1(A) → Ext^2(C)`;
/// with its bound `gcd(|Ext^1(A)|, |Ext^2(C)|)` and whether the quotient was integral.
fn connecting_image(
    a: &Representation,
    b: &Representation,
    c: &Representation,
    y: &Representation,
) -> Result<(u128, u128, bool)> {
    let h = |z: &Representation| hom_reps(z, y).group.cardinality();
    let e = |z: &Representation, k| -> Result<u128> { Ok(ext(z, y, k)?.module.cardinality()) };
    let num = h(b) * e(c, 1)? * e(a, 1)?;
    let den = h(c) * h(a) * e(b, 1)?;
    let bound = crate::zn::gcd(e(a, 1)? as u64, e(c, 2)? as u64) as u128;
    Ok((num / den, bound, num % den == 0))
}

fn segment_consistent(image: u128, bound: u128, integral: bool) -> bool {
    integral && image >= 1 && bound.is_multiple_of(image)
}

fn long_exact(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 2)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 16);
    let b = random_representation(rng, &q, &md, caps);
    let eta = random_rep_ses(rng, &b)?;
    let y = random_representation(rng, &q, &md, caps);
    let (image, bound, integral) = connecting_image(eta.left(), eta.middle(), eta.right(), &y)?;
    outcome(
        format!("{}|{}", ses_digest(&eta), y.digest()),
        json!({ "connecting_image": image.to_string(), "bound": bound.to_string(), "integral": integral }),
        segment_consistent(image, bound, integral),
    )
}

/// The middle term enlarged by `Y`, expected to keep the segment exact.
fn long_exact_control(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let (a, b, c, y) = if trial == 0 {
        let (s1, s2) = a2_stalks();
        let p1 = crate::homology::projective_generator(&a2(), s1.modulus(), 0)?;
        (s2.clone(), p1, s1, s2)
    } else {
        let q = rooted_quiver(rng, cfg, 3, 2)?;
        let md = pick_modulus(rng, &cfg.moduli);
        let caps = mcaps(cfg, 2, 16);
        let b = random_representation(rng, &q, &md, caps);
        let eta = random_rep_ses(rng, &b)?;
        let y = random_representation(rng, &q, &md, caps);
        (eta.left().clone(), b, eta.right().clone(), y)
    };
    let corrupted = direct_sum2(&b, &y)?;
    let (image, bound, integral) = connecting_image(&a, &corrupted, &c, &y)?;
    let detected = !segment_consistent(image, bound, integral);
    outcome(corrupted.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- stalk Ext identity

fn stalk_ext(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let caps = mcaps(cfg, 2, 16);
    let x = mixed_instance(rng, trial, &q, &md, caps)?;
    let f = random_module(rng, &md, mcaps(cfg, 2, 16));
    let epi: Vec<usize> = (0..q.num_vertices()).filter(|&v| x.psi(v).is_surjective()).collect();
    let i = epi[rng.gen_range(0..epi.len())];
    let r = stalk_ext_identity_check(&f, &x, i)?;
    outcome(
        format!("{}@{}", x.digest(), q.vertex_name(i)),
        json!({ "module_side": r.module_side, "quiver_side": r.quiver_side }),
        r.agree,
    )
}

/// The identity evaluated at a vertex whose `ψ` is not onto.
fn stalk_ext_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &cfg.moduli);
    let (q, a) = with_arrow(&rooted_quiver(rng, cfg, 3, 3)?);
    let x = stalk(q.clone(), q.tgt(a), &FinMod::free(&md, 1));
    let i = q.src(a);
    let f = FinMod::free(&md, 1);
    let k = x.psi(i).kernel().module;
    let lhs = Biproduct::of(&md, &f.factors().iter().map(|&d| ext_cyclic(d, &k, 1)).collect::<Vec<_>>()).module;
    let rhs = ext1(&stalk(q.clone(), i, &f), &x)?;
    let detected = lhs != rhs;
    outcome(x.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- orthogonality

fn orthogonality(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let (q, md) = if trial.is_multiple_of(2) {
        (a2(), Modulus::new(4)?)
    } else {
        (rooted_quiver(rng, cfg, 3, 3)?, pick_modulus(rng, &cfg.moduli))
    };
    let caps = mcaps(cfg, 2, 16);
    let k = random_representation(rng, &q, &md, caps);
    let j = random_injective(rng, &q, &md, caps)?;
    let report = ext_orthogonality_sample(&[(k.clone(), j.clone())])?;
    outcome(
        format!("{}|{}", k.digest(), j.digest()),
        json!({ "pairs": report.pairs, "violations": report.violations }),
        report.violations.is_empty(),
    )
}

/// A stalk at an arrow target in place of the injective.
fn orthogonality_control(rng: &mut Rng8, _cfg: &Config, _trial: usize) -> Result<Outcome> {
    let md = pick_modulus(rng, &[2, 4]);
    let q = a2();
    let j = stalk(q.clone(), 1, &FinMod::free(&md, 1));
    let k = stalk(q, 0, &FinMod::free(&md, 1));
    let report = ext_orthogonality_sample(&[(k, j.clone())])?;
    let detected = !report.violations.is_empty();
    outcome(j.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- non-pure fixture

fn nonpure_fixture(_rng: &mut Rng8, _cfg: &Config, trial: usize) -> Result<Outcome> {
    let md = Modulus::new(NONPURE_MODULI[trial % NONPURE_MODULI.len()])?;
    let n = md.n();
    let xi = nonpure_xi(&md);
    let exact = RepSES::new(xi.f().clone(), xi.g().clone()).is_ok();
    let vertex_split = (0..2).all(|v| is_split(&xi.vertex_ses(v)).is_some());
    let verdict = is_pure_rep_ses(&xi);
    let definitional = definitional_purity_check(&xi, &[]);
    let d = dual_rep_ses(&xi);
    let shape = d.left().at(0).factors() == [n]
        && d.left().at(1).is_zero()
        && d.middle().at(0).factors() == [n]
        && d.middle().at(1).factors() == [n]
        && d.middle().map(0).is_iso()
        && d.right().at(0).is_zero()
        && d.right().at(1).factors() == [n];
    let dual_split = rep_split_retraction(&d).is_some();
    let dual_vertex_split = (0..2).all(|v| is_split(&d.vertex_ses(v)).is_some());
    let pass = exact
        && vertex_split
        && !verdict.pure
        && !definitional.pure
        && verdict.replay(&xi)
        && shape
        && !dual_split
        && dual_vertex_split;
    outcome(
        format!("xi Z/{n}"),
        json!({
            "exact": exact, "vertex_split": vertex_split, "pure": verdict.pure,
            "definitional_pure": definitional.pure, "witness": definitional.witness,
            "dual_shape": shape, "dual_split": dual_split, "dual_vertex_split": dual_vertex_split,
        }),
        pass,
    )
}

/// The split sequence in place of the fixture, expected not pure.
fn nonpure_control(_rng: &mut Rng8, _cfg: &Config, trial: usize) -> Result<Outcome> {
    let md = Modulus::new(NONPURE_MODULI[trial % NONPURE_MODULI.len()])?;
    let xi = nonpure_xi(&md);
    let sum = Representation::direct_sum(&[xi.left().clone(), xi.right().clone()])?;
    let split = RepSES::from_mono(sum.injections[0].clone())?;
    let detected = is_pure_rep_ses(&split).pure;
    outcome(format!("split Z/{}", md.n()), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- totally acyclic

fn left_half_pure(x: &Representation) -> Result<Option<bool>> {
    Ok(match totally_acyclic_injective_complex(x, ACYCLIC_WINDOW)? {
        TotallyAcyclicOutcome::Found(c) if c.holds() => Some(c.left.iter().all(|s| is_pure_rep_ses(s).pure)),
        _ => None,
    })
}

fn totally_acyclic(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let caps = mcaps(cfg, 2, 16);
    let (x, kind) = match trial % 4 {
        0 => (gorenstein_fixture(&pick_from(rng, cfg, &[4, 8])), "fixture"),
        1 => {
            let q = rooted_quiver(rng, cfg, 3, 3)?;
            (Representation::zero(q, &pick_modulus(rng, &cfg.moduli)), "zero")
        }
        2 => {
            let q = rooted_quiver(rng, cfg, 3, 3)?;
            let md = pick_modulus(rng, &cfg.moduli);
            (random_injective(rng, &q, &md, caps)?, "injective")
        }
        _ => {
            let q = rooted_quiver(rng, cfg, 3, 3)?;
            let md = pick_modulus(rng, &cfg.moduli);
            (random_representation(rng, &q, &md, caps), "random")
        }
    };
    let injective = classify_injective(&x).holds;
    let left_pure = left_half_pure(&x)?;
    let implication = !(left_pure == Some(true) && sfp(&x)) || injective;
    let pass = implication
        && match kind {
            "fixture" => !injective && left_pure == Some(false),
            "zero" | "injective" => injective && left_pure == Some(true),
            _ => true,
        };
    outcome(
        x.digest(),
        json!({ "kind": kind, "injective": injective, "left_half_pure": left_pure, "implication": implication }),
        pass,
    )
}

/// The fixture presented as having a pure left half.
fn totally_acyclic_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let x = gorenstein_fixture(&pick_from(rng, cfg, &[4, 8]));
    let detected = left_half_pure(&x)? != Some(true);
    outcome(x.digest(), json!({ "detected": detected }), detected)
}

// ---------------------------------------------------------------- collapse

fn collapse(rng: &mut Rng8, cfg: &Config, trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let x = if trial == 0 {
        random_injective(rng, &q, &md, mcaps(cfg, 2, 16))?
    } else {
        mixed_instance(rng, trial, &q, &md, mcaps(cfg, 2, 16))?
    };
    let inj = classify_injective(&x).holds;
    let fp = classify_fp_injective(&x).holds;
    let s = sfp(&x);
    let flat = classify_flat(&x).holds;
    let proj = classify_projective(&x).holds;
    let g = classify_gorenstein_sfp(&x).holds;
    let ding = is_ding_injective(&x)?;
    let mut pass = inj == fp && fp == s && flat == proj && g == ding;
    if trial == 0 {
        pass &= inj;
    }
    outcome(
        x.digest(),
        json!({
            "injective": inj, "fp_injective": fp, "strongly_fp_injective": s,
            "flat": flat, "projective": proj, "gorenstein": g, "ding": ding,
        }),
        pass,
    )
}

/// An injectivity certificate with one splitting entry altered.
fn collapse_control(rng: &mut Rng8, cfg: &Config, _trial: usize) -> Result<Outcome> {
    let q = rooted_quiver(rng, cfg, 3, 3)?;
    let md = pick_modulus(rng, &cfg.moduli);
    let x = random_injective(rng, &q, &md, mcaps(cfg, 2, 16))?;
    let mut verdict = classify_injective_with_oracle(&x);
    let target = verdict
        .vertices
        .iter_mut()
        .filter_map(|e| e.splitting.as_mut())
        .find(|rows| rows.first().is_some_and(|r| !r.is_empty()));
    let Some(rows) = target else {
        return outcome(x.digest(), json!({ "detected": false, "reason": "no splitting" }), false);
    };
    rows[0][0] += 1;
    let detected = !verdict.replay(&x);
    outcome(x.digest(), json!({ "detected": detected }), detected)
}
