//! Seeded workloads shared by the benchmarks.

use std::sync::Arc;

use fpinj::harness::gen::{
    random_quiver, random_rep_ses, random_representation, ModuleCaps, QuiverCaps, QuiverConstraints, Rng8,
};
use fpinj::zn::Matrix;
use fpinj::{Modulus, RepSES, Representation};
use rand::{Rng, SeedableRng};

pub fn modulus(n: u64) -> Modulus {
    Modulus::new(n).expect("valid modulus")
}

/// A dense `size × size` matrix with entries in `0..n`.
pub fn square_matrix(seed: u64, size: usize, n: u64) -> Matrix {
    let mut rng = Rng8::seed_from_u64(seed);
    Matrix::from_fn(size, size, |_, _| rng.gen_range(0..n))
}

/// Two representations of one random right-rooted quiver.
pub fn rep_pair(seed: u64, vertices: usize, md: &Modulus) -> (Representation, Representation) {
    let mut rng = Rng8::seed_from_u64(seed);
    let c = QuiverConstraints { right_rooted: true, acyclic: true };
    let q =
        Arc::new(random_quiver(&mut rng, QuiverCaps { max_vertices: vertices, max_arrows: vertices + 1 }, c).unwrap());
    let caps = ModuleCaps { max_rank: 2, max_cardinality: 64 };
    (random_representation(&mut rng, &q, md, caps), random_representation(&mut rng, &q, md, caps))
}

pub fn rep_ses(seed: u64, vertices: usize, md: &Modulus) -> RepSES {
    let (y, _) = rep_pair(seed, vertices, md);
    let mut rng = Rng8::seed_from_u64(seed ^ 0x5e5);
    random_rep_ses(&mut rng, &y).expect("sequence on a rooted quiver")
}
