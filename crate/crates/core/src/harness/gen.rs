//! Seeded random instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quiver::{Arrow, Quiver};
use crate::rep::{right_adjoint, stalk, RepMorphism, RepSES, Representation};
use crate::zn::{FinMod, HomSpace, Modulus};

pub type Rng8 = ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct QuiverCaps {
    pub max_vertices: usize,
    pub max_arrows: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct QuiverConstraints {
    pub right_rooted: bool,
    pub acyclic: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ModuleCaps {
    pub max_rank: usize,
    pub max_cardinality: u128,
}

const REJECTION_BUDGET: usize = 1000;

fn raw_quiver(rng: &mut Rng8, caps: QuiverCaps, ordered: bool) -> Quiver {
    let nv = rng.gen_range(1..=caps.max_vertices.max(1));
    let na = rng.gen_range(0..=caps.max_arrows);
    let vertices: Vec<String> = (1..=nv).map(|i| i.to_string()).collect();
    let mut order: Vec<usize> = (0..nv).collect();
    order.shuffle(rng);
    let mut arrows = Vec::with_capacity(na);
    for k in 0..na {
        let (mut s, mut t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        if ordered {
            if nv == 1 {
                break;
            }
            while s == t {
                t = rng.gen_range(0..nv);
            }
            if order[s] > order[t] {
                std::mem::swap(&mut s, &mut t);
            }
        }
        arrows.push(Arrow { id: format!("a{}", k + 1), src: vertices[s].clone(), tgt: vertices[t].clone() });
    }
    Quiver::new(vertices, arrows).expect("generated quiver is well formed")
}

/// A random quiver; with constraints, rejection sampling on arrows drawn along a hidden order.
pub fn random_quiver(rng: &mut Rng8, caps: QuiverCaps, constraints: QuiverConstraints) -> Result<Quiver> {
    let want = constraints.right_rooted || constraints.acyclic;
    for _ in 0..REJECTION_BUDGET {
        let ordered = want && rng.gen_bool(0.9);
        let q = raw_quiver(rng, caps, ordered);
        if (!constraints.right_rooted || q.is_right_rooted()) && (!constraints.acyclic || q.is_acyclic()) {
            return Ok(q);
        }
    }
    Err(Error::RejectionBudget(REJECTION_BUDGET))
}

/// A random module with at most `max_rank` invariant factors.
pub fn random_module(rng: &mut Rng8, md: &Modulus, caps: ModuleCaps) -> FinMod {
    let divisors: Vec<u64> = md.divisors().into_iter().filter(|&d| d > 1).collect();
    loop {
        let r = rng.gen_range(0..=caps.max_rank);
        let orders: Vec<u64> = (0..r).map(|_| *divisors.choose(rng).expect("n > 1")).collect();
        let m = FinMod::from_orders(md, &orders).module;
        if m.cardinality() <= caps.max_cardinality {
            return m;
        }
    }
}

/// A random injective module: a sum of `Z/n` and `Z/p^k` pieces.
pub fn random_injective_module(rng: &mut Rng8, md: &Modulus, caps: ModuleCaps) -> FinMod {
    let mut pieces: Vec<u64> = vec![md.n()];
    pieces.extend(md.primes().iter().map(|&(p, _)| md.prime_power(p)));
    pieces.dedup();
    loop {
        let r = rng.gen_range(0..=caps.max_rank);
        let orders: Vec<u64> = (0..r).map(|_| *pieces.choose(rng).expect("nonempty")).collect();
        let m = FinMod::from_orders(md, &orders).module;
        if m.cardinality() <= caps.max_cardinality {
            return m;
        }
    }
}

pub fn random_element(rng: &mut Rng8, m: &FinMod) -> Vec<u64> {
    m.factors().iter().map(|&d| rng.gen_range(0..d)).collect()
}

pub fn random_hom(rng: &mut Rng8, m: &FinMod, n: &FinMod) -> crate::zn::ModHom {
    let space = HomSpace::new(m, n).expect("same ring");
    let c = random_element(rng, &space.group);
    space.hom(&c)
}

pub fn random_representation(rng: &mut Rng8, q: &Arc<Quiver>, md: &Modulus, caps: ModuleCaps) -> Representation {
    let modules: Vec<FinMod> = (0..q.num_vertices()).map(|_| random_module(rng, md, caps)).collect();
    let maps = (0..q.num_arrows()).map(|a| random_hom(rng, &modules[q.src(a)], &modules[q.tgt(a)])).collect();
    Representation::new(q.clone(), md.clone(), modules, maps).expect("random maps are well defined")
}

/// `e^v(E)` for a random vertex and a random injective module `E`.
pub fn random_coinduced(rng: &mut Rng8, q: &Arc<Quiver>, md: &Modulus, caps: ModuleCaps) -> Result<Representation> {
    let v = rng.gen_range(0..q.num_vertices());
    let e = random_injective_module(rng, md, caps);
    let sub = Arc::new(q.full_subquiver(&[q.vertex_name(v)])?);
    Ok(right_adjoint(q, &stalk(sub, 0, &e))?.rep)
}

/// A sum of one or two random `e^v(E)`; injective on acyclic quivers.
pub fn random_injective(rng: &mut Rng8, q: &Arc<Quiver>, md: &Modulus, caps: ModuleCaps) -> Result<Representation> {
    let k = rng.gen_range(1..=2);
    let parts = (0..k).map(|_| random_coinduced(rng, q, md, caps)).collect::<Result<Vec<_>>>()?;
    Ok(Representation::direct_sum(&parts)?.rep)
}

/// Random elements spread over the vertices.
pub fn random_generators(rng: &mut Rng8, y: &Representation, count: usize) -> Vec<Vec<Vec<u64>>> {
    let nv = y.quiver().num_vertices();
    let mut gens = vec![Vec::new(); nv];
    for _ in 0..count {
        let v = rng.gen_range(0..nv);
        if y.at(v).rank() > 0 {
            gens[v].push(random_element(rng, y.at(v)));
        }
    }
    gens
}

/// `0 → X → Y → Y/X → 0` for a random subrepresentation `X` of `y`.
pub fn random_rep_ses(rng: &mut Rng8, y: &Representation) -> Result<RepSES> {
    let count = rng.gen_range(0..=2);
    let gens = random_generators(rng, y, count);
    RepSES::from_mono(y.generated_subrep(&gens))
}

/// A random quotient of `y`.
pub fn random_quotient(rng: &mut Rng8, y: &Representation) -> Result<RepMorphism> {
    Ok(random_rep_ses(rng, y)?.g().clone())
}

/// A random subquiver: a nonempty vertex subset with some of the arrows between them.
pub fn random_subquiver(rng: &mut Rng8, q: &Quiver) -> Result<Quiver> {
    let mut vs: Vec<&str> = q.vertices().iter().map(String::as_str).filter(|_| rng.gen_bool(0.6)).collect();
    if vs.is_empty() {
        vs.push(q.vertex_name(rng.gen_range(0..q.num_vertices())));
    }
    let arrows: Vec<&str> = q
        .arrows()
        .iter()
        .filter(|a| vs.contains(&a.src.as_str()) && vs.contains(&a.tgt.as_str()) && rng.gen_bool(0.7))
        .map(|a| a.id.as_str())
        .collect();
    q.subquiver(&vs, &arrows)
}

pub fn pick_modulus(rng: &mut Rng8, moduli: &[u64]) -> Modulus {
    Modulus::new(*moduli.choose(rng).expect("nonempty modulus list")).expect("valid modulus")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let caps = QuiverCaps { max_vertices: 5, max_arrows: 6 };
        let c = QuiverConstraints { right_rooted: true, acyclic: false };
        let a = random_quiver(&mut Rng8::seed_from_u64(7), caps, c).unwrap();
        let b = random_quiver(&mut Rng8::seed_from_u64(7), caps, c).unwrap();
        assert_eq!(a, b);
        assert!(a.is_right_rooted());
    }

    #[test]
    fn random_sequences_validate() {
        let mut rng = Rng8::seed_from_u64(3);
        let caps = QuiverCaps { max_vertices: 3, max_arrows: 3 };
        let mc = ModuleCaps { max_rank: 2, max_cardinality: 256 };
        for _ in 0..20 {
            let q = Arc::new(random_quiver(&mut rng, caps, QuiverConstraints::default()).unwrap());
            let md = pick_modulus(&mut rng, &[2, 4, 6]);
            let y = random_representation(&mut rng, &q, &md, mc);
            let s = random_rep_ses(&mut rng, &y).unwrap();
            assert!(RepSES::new(s.f().clone(), s.g().clone()).is_ok());
        }
    }
}
