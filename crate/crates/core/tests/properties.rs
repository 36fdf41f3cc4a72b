use std::sync::Arc;

use fpinj::classifier::{classify_injective, classify_strongly_fp_injective};
use fpinj::harness::gen::{
    random_hom, random_injective_module, random_module, random_quiver, random_rep_ses, random_representation,
    ModuleCaps, QuiverCaps, QuiverConstraints, Rng8,
};
use fpinj::harness::oracles::{brute_force_ext1_cardinality, has_cycle};
use fpinj::harness::{replay, suite, Config};
use fpinj::homology::{ext, projective_generator, projective_resolution};
use fpinj::purity::{is_pure_rep_ses, rep_split_retraction, split_diagram_retraction, SplitDiagram};
use fpinj::rep::{dual_rep_ses, hom_reps, tensor_map_right, RepSES};
use fpinj::zn::{
    double_dual_evaluation, ext_oracle_vanishes, gcd, hom_group, is_injective_module, is_pure_module_ses, is_split,
    is_strongly_fp_injective_module, matlis_dual_hom, present, subgroup, Biproduct, Matrix, ModHom, ModSES,
};
use fpinj::{FinMod, Modulus, Quiver, Representation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

const MODULI: [u64; 6] = [2, 3, 4, 6, 8, 9];

fn md(i: usize) -> Modulus {
    Modulus::new(MODULI[i % MODULI.len()]).unwrap()
}

fn caps(rank: usize, card: u128) -> ModuleCaps {
    ModuleCaps { max_rank: rank, max_cardinality: card }
}

fn rooted(rng: &mut Rng8, v: usize, a: usize) -> Arc<Quiver> {
    let c = QuiverConstraints { right_rooted: true, acyclic: true };
    Arc::new(random_quiver(rng, QuiverCaps { max_vertices: v, max_arrows: a }, c).unwrap())
}

fn primes(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| n.is_multiple_of(p) && (2..p).all(|d| p % d != 0)).collect()
}

/// Invariant factors of `⊕ Z/o_i`, from the sorted prime-power parts of each order.
fn chain_by_primes(orders: &[u64], n: u64) -> Vec<u64> {
    let mut out = vec![1u64; orders.len()];
    for p in primes(n) {
        let mut parts: Vec<u64> = orders
            .iter()
            .map(|&o| {
                let mut q = 1;
                let mut o = o;
                while o % p == 0 {
                    o /= p;
                    q *= p;
                }
                q
            })
            .collect();
        parts.sort_unstable();
        for (slot, q) in out.iter_mut().zip(parts) {
            *slot *= q;
        }
    }
    out.retain(|&d| d > 1);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // ------------------------------------------------------------ modules over Z/n

    #[test]
    fn presenting_a_cyclic_sum_gives_the_prime_wise_chain(i in 0usize..6, picks in prop::collection::vec(0usize..12, 0..5)) {
        let m = md(i);
        let n = m.n();
        let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        let orders: Vec<u64> = picks.iter().map(|&k| divisors[k % divisors.len()]).collect();
        let diag: Vec<u64> = orders.iter().map(|&d| d % n).collect();
        let p = present(&m, &Matrix::diagonal(&diag));
        prop_assert_eq!(p.module.factors().to_vec(), chain_by_primes(&orders, n));
        prop_assert_eq!(FinMod::from_orders(&m, &orders).module, p.module);
    }

    #[test]
    fn cokernel_and_image_orders_multiply_to_the_ambient(i in 0usize..6, seed in any::<u64>()) {
        let m = md(i);
        let n = m.n();
        let mut rng = Rng8::seed_from_u64(seed);
        let (rows, cols) = (rng.gen_range(1..4), rng.gen_range(0..4));
        let a = Matrix::from_fn(rows, cols, |_, _| rng.gen_range(0..n));
        let quotient = present(&m, &a).module;
        let (image, _, _) = subgroup(&m, &vec![n; rows], &a);
        prop_assert_eq!(quotient.cardinality() * image.cardinality(), u128::from(n).pow(rows as u32));
    }

    #[test]
    fn hom_group_order_is_the_gcd_product(i in 0usize..6, seed in any::<u64>()) {
        let m = md(i);
        let mut rng = Rng8::seed_from_u64(seed);
        let (a, b) = (random_module(&mut rng, &m, caps(3, 4096)), random_module(&mut rng, &m, caps(3, 4096)));
        let expected: u128 = a.factors().iter().flat_map(|&d| b.factors().iter().map(move |&e| u128::from(gcd(d, e)))).product();
        prop_assert_eq!(hom_group(&a, &b).unwrap().0.cardinality(), expected);
    }

    #[test]
    fn double_dual_evaluation_is_an_isomorphism(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let m = random_module(&mut rng, &md(i), caps(3, 4096));
        prop_assert!(double_dual_evaluation(&m).is_iso());
    }

    #[test]
    fn duality_exchanges_monos_and_epis(i in 0usize..6, seed in any::<u64>()) {
        let m = md(i);
        let mut rng = Rng8::seed_from_u64(seed);
        let (a, b) = (random_module(&mut rng, &m, caps(2, 256)), random_module(&mut rng, &m, caps(2, 256)));
        let f = random_hom(&mut rng, &a, &b);
        let d = matlis_dual_hom(&f);
        prop_assert_eq!(f.is_injective(), d.is_surjective());
        prop_assert_eq!(f.is_surjective(), d.is_injective());
    }

    #[test]
    fn module_sequences_are_pure_exactly_when_split(i in 0usize..6, seed in any::<u64>()) {
        let m = md(i);
        let mut rng = Rng8::seed_from_u64(seed);
        let (a, b) = (random_module(&mut rng, &m, caps(2, 256)), random_module(&mut rng, &m, caps(3, 512)));
        let image = random_hom(&mut rng, &a, &b).image();
        let q = image.inclusion.cokernel();
        let s = ModSES::new(image.inclusion.clone(), q.projection.clone()).unwrap();
        prop_assert_eq!(is_pure_module_ses(&s), is_split(&s).is_some());
    }

    #[test]
    fn module_injectivity_three_ways(i in 0usize..6, seed in any::<u64>(), injective in any::<bool>()) {
        let m = md(i);
        let mut rng = Rng8::seed_from_u64(seed);
        let x = if injective { random_injective_module(&mut rng, &m, caps(3, 4096)) } else { random_module(&mut rng, &m, caps(3, 4096)) };
        let inj = is_injective_module(&x).holds;
        prop_assert_eq!(inj, is_strongly_fp_injective_module(&x));
        prop_assert_eq!(inj, ext_oracle_vanishes(&x));
    }

    // ------------------------------------------------------------ quivers

    #[test]
    fn root_stages_ascend_and_stabilise(seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = random_quiver(&mut rng, QuiverCaps { max_vertices: 8, max_arrows: 10 }, QuiverConstraints::default()).unwrap();
        let stages = q.root_stages();
        prop_assert!(stages.windows(2).all(|w| w[0].is_subset(&w[1])));
        prop_assert!(stages.len() - 1 <= q.num_vertices());
        for w in stages.windows(2) {
            for &v in &w[1] {
                prop_assert!(q.out_of(v).iter().all(|&a| w[0].contains(&q.tgt(a))));
            }
        }
    }

    #[test]
    fn rootedness_is_acyclicity_and_dualises(seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = random_quiver(&mut rng, QuiverCaps { max_vertices: 8, max_arrows: 10 }, QuiverConstraints::default()).unwrap();
        prop_assert_eq!(q.is_right_rooted(), !has_cycle(&q));
        prop_assert_eq!(q.is_right_rooted(), q.opposite().is_left_rooted());
        prop_assert_eq!(q.is_left_rooted(), q.opposite().is_right_rooted());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // ------------------------------------------------------------ representations

    #[test]
    fn psi_and_phi_recover_the_arrow_maps(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = Arc::new(random_quiver(&mut rng, QuiverCaps { max_vertices: 4, max_arrows: 6 }, QuiverConstraints::default()).unwrap());
        let x = random_representation(&mut rng, &q, &md(i), caps(2, 64));
        for v in 0..q.num_vertices() {
            let (out, psi) = (x.out_product(v), x.psi(v));
            for (k, &a) in q.out_of(v).iter().enumerate() {
                prop_assert_eq!(&out.projections[k].compose(&psi), x.map(a));
            }
            let (inn, phi) = (x.in_sum(v), x.phi(v));
            for (k, &a) in q.in_of(v).iter().enumerate() {
                prop_assert_eq!(&phi.compose(&inn.injections[k]), x.map(a));
            }
        }
    }

    #[test]
    fn duals_of_exact_sequences_are_exact(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 4, 5);
        let y = random_representation(&mut rng, &q, &md(i), caps(2, 64));
        let eta = random_rep_ses(&mut rng, &y).unwrap();
        let d = dual_rep_ses(&eta);
        prop_assert!(RepSES::new(d.f().clone(), d.g().clone()).is_ok());
    }

    #[test]
    fn tensoring_is_right_exact(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 3, 4);
        let m = md(i);
        let y = random_representation(&mut rng, &q, &m, caps(2, 32));
        let eta = random_rep_ses(&mut rng, &y).unwrap();
        let t = random_representation(&mut rng, &Arc::new(q.opposite()), &m, caps(2, 32));
        let f = tensor_map_right(&t, eta.f()).unwrap();
        let g = tensor_map_right(&t, eta.g()).unwrap();
        prop_assert!(g.is_surjective());
        prop_assert!(g.compose(&f).is_zero());
        prop_assert_eq!(f.image().module.log_order(), g.kernel().module.log_order());
    }

    #[test]
    fn yoneda_for_projective_generators(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 4, 5);
        let m = md(i);
        let x = random_representation(&mut rng, &q, &m, caps(2, 64));
        for v in 0..q.num_vertices() {
            let p = projective_generator(&q, &m, v).unwrap();
            let h = hom_reps(&p, &x);
            prop_assert_eq!(h.group.factors(), x.at(v).factors());
        }
    }

    // ------------------------------------------------------------ purity

    #[test]
    fn purity_is_dual_splitting_and_splitting(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 4, 5);
        let y = random_representation(&mut rng, &q, &md(i), caps(2, 64));
        let eta = random_rep_ses(&mut rng, &y).unwrap();
        let pure = is_pure_rep_ses(&eta).pure;
        prop_assert_eq!(pure, rep_split_retraction(&dual_rep_ses(&eta)).is_some());
        prop_assert_eq!(pure, rep_split_retraction(&eta).is_some());
        if pure {
            prop_assert!((0..q.num_vertices()).all(|v| is_pure_module_ses(&eta.vertex_ses(v))));
        }
    }

    #[test]
    fn purity_of_a_sum_is_purity_of_both(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 3, 4);
        let m = md(i);
        let ay = random_representation(&mut rng, &q, &m, caps(2, 32));
        let a = random_rep_ses(&mut rng, &ay).unwrap();
        let by = random_representation(&mut rng, &q, &m, caps(2, 32));
        let b = random_rep_ses(&mut rng, &by).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        prop_assert_eq!(is_pure_rep_ses(&sum).pure, is_pure_rep_ses(&a).pure && is_pure_rep_ses(&b).pure);
    }

    #[test]
    fn split_diagram_retraction_is_exact(i in 0usize..6, seed in any::<u64>()) {
        let m = md(i);
        let mut rng = Rng8::seed_from_u64(seed);
        let x = random_module(&mut rng, &m, caps(2, 64));
        let z = random_module(&mut rng, &m, caps(2, 64));
        let l = random_injective_module(&mut rng, &m, caps(2, 64));
        let w = random_module(&mut rng, &m, caps(2, 64));
        let top = Biproduct::of(&m, &[x.clone(), z.clone()]);
        let nsum = Biproduct::of(&m, &[z.clone(), w]);
        let nn = nsum.module.clone();
        let bottom = Biproduct::of(&m, &[l.clone(), nn.clone()]);
        let (mu, p, r) = (top.injections[0].clone(), top.projections[1].clone(), top.projections[0].clone());
        let (nu, qq) = (bottom.injections[0].clone(), bottom.projections[1].clone());
        let f = random_hom(&mut rng, &x, &l);
        let t = random_hom(&mut rng, &z, &l);
        let h = nsum.injections[0].clone();
        // g = [[f, t], [0, h]] from X ⊕ Z to L ⊕ N.
        let to_l = top.out_of_sum(&[f.clone(), t], &l);
        let to_n = top.out_of_sum(&[ModHom::zero(&x, &nn), h.clone()], &nn);
        let g = bottom.into_sum(&[to_l, to_n]);
        let d = SplitDiagram { mu: &mu, p: &p, nu: &nu, q: &qq, f: &f, g: &g, h: &h, r: &r };
        let s = split_diagram_retraction(&d).unwrap();
        prop_assert_eq!(s.compose(&nu), ModHom::identity(&l));
        prop_assert_eq!(s.compose(&g), f.compose(&r));
    }

    // ------------------------------------------------------------ Ext

    #[test]
    fn ext_zero_is_hom_and_dimension_shifts(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 3, 3);
        let m = md(i);
        let x = random_representation(&mut rng, &q, &m, caps(2, 16));
        let y = random_representation(&mut rng, &q, &m, caps(2, 16));
        prop_assert_eq!(ext(&x, &y, 0).unwrap().module, hom_reps(&x, &y).group);
        let res = projective_resolution(&x, 4).unwrap();
        if let Some(step) = res.steps.first() {
            let k = step.left();
            for n in 1..=2 {
                prop_assert_eq!(ext(&x, &y, n + 1).unwrap().module, ext(k, &y, n).unwrap().module);
            }
        } else {
            prop_assert!(x.is_zero());
        }
    }

    #[test]
    fn ext_one_matches_enumeration(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 3, 3);
        let m = md(i);
        let x = random_representation(&mut rng, &q, &m, caps(2, 16));
        let y = random_representation(&mut rng, &q, &m, caps(2, 16));
        prop_assume!(x.cardinality() * y.cardinality() <= 256);
        prop_assert_eq!(brute_force_ext1_cardinality(&x, &y), Some(ext(&x, &y, 1).unwrap().module.cardinality()));
    }

    // ------------------------------------------------------------ classification

    #[test]
    fn injective_and_strongly_fp_injective_agree(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let q = rooted(&mut rng, 4, 4);
        let x: Representation = random_representation(&mut rng, &q, &md(i), caps(2, 32));
        prop_assert_eq!(classify_injective(&x).holds, classify_strongly_fp_injective(&x).holds);
    }

    #[test]
    fn classifier_suites_hold_for_any_seed(seed in any::<u64>(), trial in 0usize..50) {
        let cfg = Config { seed, ..Config::default() };
        for name in ["classification", "gorenstein", "collapse", "closure", "products"] {
            let r = replay(suite(name).unwrap(), &cfg, trial);
            prop_assert!(r.pass, "{}", r.to_json_line());
        }
    }
}
