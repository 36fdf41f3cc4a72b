//! Exact linear algebra and module calculus over Z/n.

mod arith;
mod dual;
mod hom;
mod matrix;
mod module;
mod predicates;

pub use arith::{gcd, inv_mod, lcm, mul_mod, Modulus};
pub use dual::{double_dual_evaluation, matlis_dual, matlis_dual_hom, pairing};
pub use hom::{flatten, hom_group, solve_postcompose, solve_precompose, HomSpace};
pub use matrix::{howell_solve, Matrix, Smith, Solution};
pub use module::{
    cokernel_of, homology_of, kernel_of, present, solve_in, subgroup, Biproduct, FinMod, ModHom, Presentation,
    Quotient, Sub,
};
pub use predicates::{
    baer_certificate, ext_cyclic, ext_oracle_vanishes, gi_module_certificate, is_flat_module, is_injective_module,
    is_locally_free, is_projective_module, is_pure_module_ses, is_split, is_strongly_fp_injective_module,
    purity_witness, BaerCertificate, BaerExtension, GiModuleCertificate, InjectivityVerdict, ModSES, PeriodicComplex,
};
