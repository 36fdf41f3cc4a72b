//! The duality `M ↦ Hom(M, Z/n)`.
//!
//! `M⁺` has the same invariant factors as `M`; its generator `δ_i` sends the
//! generator `ε_i` of `Z/d_i` to `n/d_i` and kills the others.

use super::matrix::Matrix;
use super::module::{FinMod, ModHom};

pub fn matlis_dual(m: &FinMod) -> FinMod {
    m.clone()
}

/// `f⁺ : N⁺ → M⁺` for `f : M → N`.
pub fn matlis_dual_hom(f: &ModHom) -> ModHom {
    let d = f.domain().factors();
    let e = f.codomain().factors();
    let a = f.matrix();
    // δ_j ∘ f sends ε_i to a_ji n/e_j = (a_ji d_i / e_j) (n/d_i).
    let m = Matrix::from_fn(d.len(), e.len(), |i, j| {
        let v = a.get(j, i) as u128 * d[i] as u128 / e[j] as u128;
        (v % d[i] as u128) as u64
    });
    ModHom::new_unchecked(matlis_dual(f.codomain()), matlis_dual(f.domain()), m)
}

/// The evaluation map `M → M⁺⁺` in the chosen bases.
pub fn double_dual_evaluation(m: &FinMod) -> ModHom {
    ModHom::identity(m)
}

/// Evaluates the functional with dual coordinates `phi` at `x`, as an element of Z/n.
pub fn pairing(m: &FinMod, phi: &[u64], x: &[u64]) -> u64 {
    let n = m.n();
    let mut acc = 0u128;
    for (k, &d) in m.factors().iter().enumerate() {
        acc += phi[k] as u128 * x[k] as u128 * (n / d) as u128;
    }
    (acc % n as u128) as u64
}
