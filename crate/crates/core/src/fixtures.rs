//! Small named instances used by tests, suites and the command line.

use std::sync::Arc;

use crate::homology::canonical_sequence;
use crate::quiver::Quiver;
use crate::rep::{stalk, RepSES, Representation};
use crate::zn::{FinMod, Matrix, ModHom, Modulus};

/// `1 --a--> 2`.
pub fn a2() -> Arc<Quiver> {
    Arc::new(Quiver::from_spec(&["1", "2"], &[("a", "1", "2")]).expect("valid quiver"))
}

/// One vertex `v` with a loop `alpha`.
pub fn loop_quiver() -> Quiver {
    Quiver::from_spec(&["v"], &[("alpha", "v", "v")]).expect("valid quiver")
}

/// `M --f--> N` on A2 with the given invariant factors; an empty `f` is the zero map.
pub fn a2_rep(md: &Modulus, m: &[u64], n: &[u64], f: &[Vec<u64>]) -> Representation {
    let mm = FinMod::new(md.clone(), m.to_vec()).expect("valid factors");
    let nn = FinMod::new(md.clone(), n.to_vec()).expect("valid factors");
    let fm =
        if f.is_empty() { Matrix::zeros(nn.rank(), mm.rank()) } else { Matrix::from_rows(f).expect("rectangular") };
    let h = ModHom::new(mm.clone(), nn.clone(), fm).expect("well defined");
    Representation::new(a2(), md.clone(), vec![mm, nn], vec![h]).expect("consistent")
}

/// `0 → s_2(Z/n) → (Z/n = Z/n) → (Z/n → 0) → 0` on A2: exact, split at every vertex, not pure.
pub fn nonpure_xi(md: &Modulus) -> RepSES {
    let x = stalk(a2(), 1, &FinMod::free(md, 1));
    canonical_sequence(&x).expect("A2 is acyclic")
}

/// `Z/2 = Z/2` on A2; needs `2 | n`.
pub fn gorenstein_fixture(md: &Modulus) -> Representation {
    a2_rep(md, &[2], &[2], &[vec![1]])
}

/// `Z/n` on the loop quiver with the loop acting as the identity. Every `ψ` is split
/// and the component is injective, yet the representation is not injective.
pub fn loop_fixture(md: &Modulus) -> Representation {
    let z = FinMod::free(md, 1);
    Representation::new(Arc::new(loop_quiver()), md.clone(), vec![z.clone()], vec![ModHom::identity(&z)])
        .expect("consistent")
}

/// The moduli of the three displayed non-pure instances.
pub const NONPURE_MODULI: [u64; 3] = [4, 2, 9];
