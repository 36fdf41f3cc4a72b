//! Finitely generated Z/n-modules in invariant-factor form and their homomorphisms.
//!
//! A module `Z/d_1 + ... + Z/d_k` is handled through its lift `(Z/n)^k` together
//! with the relation submodule spanned by `d_i e_i`. Every construction (kernels,
//! cokernels, sums, Hom groups) is a linear problem on lifts followed by a Smith
//! diagonalization that brings the answer back to canonical form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::arith::{gcd, Modulus};
use super::matrix::{howell_solve, Matrix, Smith};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMod {
    modulus: Modulus,
    factors: Vec<u64>,
}

/// Canonical module isomorphic to the cokernel of a relation matrix.
///
/// `proj` maps lifted coordinates onto the canonical generators and `sect` maps
/// canonical generators back to lifted coordinates; `proj * sect` is the identity
/// on the canonical module.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub module: FinMod,
    pub proj: Matrix,
    pub sect: Matrix,
}

/// Computes the canonical form of `(Z/n)^m / colspan(relations)`.
pub fn present(modulus: &Modulus, relations: &Matrix) -> Presentation {
    let n = modulus.n();
    let m = relations.rows();
    let smith = Smith::compute(relations, n);
    let mut keep = Vec::new();
    let mut factors = Vec::new();
    for i in 0..m {
        let f = if i < smith.diag.len() { smith.diag[i] } else { n };
        if f > 1 {
            keep.push(i);
            factors.push(f);
        }
    }
    let mut proj = smith.u.select_rows(&keep);
    proj.reduce_rows(&factors);
    let sect = smith.u_inv.select_cols(&keep);
    Presentation { module: FinMod { modulus: modulus.clone(), factors }, proj, sect }
}

/// Solves `A X ≡ B` where the columns of `B` live in the cyclic sum with the
/// given orders (so equality is modulo the relations `orders[i] e_i`).
pub fn solve_in(modulus: &Modulus, cod: &[u64], a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = modulus.n();
    let big = a.hcat(&Matrix::diagonal(cod));
    let sol = howell_solve(&big, b, n).expect("shapes agree by construction")?;
    Some(sol.particular.block(0, a.cols(), 0, b.cols()))
}

/// Generators (columns) of the solutions of `A x ≡ 0` in the cyclic sum with orders `cod`.
fn kernel_generators(modulus: &Modulus, dom: usize, cod: &[u64], a: &Matrix) -> Matrix {
    let n = modulus.n();
    let big = a.hcat(&Matrix::diagonal(cod));
    let sol = howell_solve(&big, &Matrix::zeros(cod.len(), 1), n)
        .expect("shapes agree")
        .expect("homogeneous systems are consistent");
    let cols: Vec<Vec<u64>> =
        sol.kernel.iter().map(|v| v[..dom].to_vec()).filter(|v| v.iter().any(|&x| x != 0)).collect();
    Matrix::from_fn(dom, cols.len(), |i, j| cols[j][i])
}

/// The submodule of the cyclic sum `amb` generated by the columns of `gens`.
///
/// Returns the canonical module, its inclusion matrix (`amb.len() x rank`) and
/// the matrix expressing each generator in canonical coordinates.
pub fn subgroup(modulus: &Modulus, amb: &[u64], gens: &Matrix) -> (FinMod, Matrix, Matrix) {
    let g = gens.cols();
    let rel = kernel_generators(modulus, g, amb, gens);
    let pres = present(modulus, &rel);
    let mut incl = gens.mul(&pres.sect, modulus.n());
    incl.reduce_rows(amb);
    (pres.module, incl, pres.proj)
}

/// Kernel of the map between cyclic sums given by `a` (`cod.len() x dom.len()`).
pub fn kernel_of(modulus: &Modulus, dom: &[u64], cod: &[u64], a: &Matrix) -> (FinMod, Matrix) {
    let gens = kernel_generators(modulus, dom.len(), cod, a);
    let (k, incl, _) = subgroup(modulus, dom, &gens);
    (k, incl)
}

/// Cokernel of the map between cyclic sums given by `a`.
pub fn cokernel_of(modulus: &Modulus, cod: &[u64], a: &Matrix) -> Presentation {
    present(modulus, &Matrix::diagonal(cod).hcat(a))
}

/// Homology `ker(out) / im(inc)` at the middle term of `prev -> mid -> next`.
pub fn homology_of(modulus: &Modulus, prev: usize, mid: &[u64], next: &[u64], inc: &Matrix, out: &Matrix) -> FinMod {
    let (k, incl) = kernel_of(modulus, mid, next, out);
    if k.is_zero() {
        return k;
    }
    let coords = if prev == 0 {
        Matrix::zeros(k.rank(), 0)
    } else {
        let mut z = solve_in(modulus, mid, &incl, inc).expect("image lies in the kernel");
        z.reduce_rows(k.factors());
        z
    };
    cokernel_of(modulus, k.factors(), &coords).module
}

impl FinMod {
    pub fn new(modulus: Modulus, factors: Vec<u64>) -> Result<Self> {
        let n = modulus.n();
        for (i, &d) in factors.iter().enumerate() {
            if d <= 1 || !n.is_multiple_of(d) {
                return Err(Error::InvalidModule(format!("factor {d} must be > 1 and divide {n}")));
            }
            if i > 0 && d % factors[i - 1] != 0 {
                return Err(Error::InvalidModule(format!("factors {:?} do not form a divisibility chain", factors)));
            }
        }
        Ok(Self { modulus, factors })
    }

    /// Canonical form of an arbitrary cyclic sum `Z/o_1 + ... + Z/o_k` (orders dividing n).
    pub fn from_orders(modulus: &Modulus, orders: &[u64]) -> Presentation {
        if is_chain(orders) {
            let k = orders.len();
            return Presentation {
                module: FinMod { modulus: modulus.clone(), factors: orders.to_vec() },
                proj: Matrix::identity(k),
                sect: Matrix::identity(k),
            };
        }
        let n = modulus.n();
        let diag: Vec<u64> = orders.iter().map(|&d| d % n).collect();
        present(modulus, &Matrix::diagonal(&diag))
    }

    pub fn zero(modulus: &Modulus) -> Self {
        Self { modulus: modulus.clone(), factors: Vec::new() }
    }

    pub fn free(modulus: &Modulus, rank: usize) -> Self {
        Self { modulus: modulus.clone(), factors: vec![modulus.n(); rank] }
    }

    /// Z/d as a Z/n-module. `d` must divide n.
    pub fn cyclic(modulus: &Modulus, d: u64) -> Result<Self> {
        if d == 1 {
            return Ok(Self::zero(modulus));
        }
        Self::new(modulus.clone(), vec![d])
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn n(&self) -> u64 {
        self.modulus.n()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of elements. Saturates at `u128::MAX`.
    pub fn cardinality(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    /// Exponent of each prime of the modulus in `|M|`; exact where [`FinMod::cardinality`] saturates.
    pub fn log_order(&self) -> Vec<u64> {
        self.modulus
            .primes()
            .iter()
            .map(|&(p, _)| {
                self.factors
                    .iter()
                    .map(|&d| {
                        let (mut d, mut e) = (d, 0);
                        while d % p == 0 {
                            d /= p;
                            e += 1;
                        }
                        e
                    })
                    .sum()
            })
            .collect()
    }

    /// Number of elements killed by `k`.
    pub fn torsion_count(&self, k: u64) -> u128 {
        self.factors.iter().fold(1u128, |acc, &d| acc.saturating_mul(gcd(k, d) as u128))
    }

    /// Reduces a lifted coordinate vector into canonical range.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.factors).map(|(&v, &d)| v % d).collect()
    }

    pub fn zero_element(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    /// All elements in lexicographic order. Only sensible for small modules.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for x in 0..d {
                    let mut v = e.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    pub fn check_same_ring(&self, other: &FinMod) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.n(), other.n()));
        }
        Ok(())
    }
}

fn is_chain(orders: &[u64]) -> bool {
    orders.iter().all(|&d| d > 1) && orders.windows(2).all(|w| w[1] % w[0] == 0)
}

impl fmt::Display for FinMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism `domain -> codomain`; column `i` is the image of generator `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModHom {
    domain: FinMod,
    codomain: FinMod,
    matrix: Matrix,
}

/// Submodule together with its inclusion.
#[derive(Clone, Debug)]
pub struct Sub {
    pub module: FinMod,
    pub inclusion: ModHom,
}

/// Quotient together with its projection and a set-theoretic lift.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FinMod,
    pub projection: ModHom,
    /// Lifts canonical generators of the quotient to lifted codomain coordinates.
    pub section: Matrix,
}

impl ModHom {
    pub fn new(domain: FinMod, codomain: FinMod, matrix: Matrix) -> Result<Self> {
        domain.check_same_ring(&codomain)?;
        if matrix.shape() != (codomain.rank(), domain.rank()) {
            return Err(Error::Shape(format!(
                "expected {}x{} matrix, got {}x{}",
                codomain.rank(),
                domain.rank(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n = domain.n();
        let mut matrix = matrix;
        for j in 0..codomain.rank() {
            let e = codomain.factors[j];
            for i in 0..domain.rank() {
                let a = matrix.get(j, i) % n;
                let d = domain.factors[i];
                if !(a as u128 * d as u128).is_multiple_of(e as u128) {
                    return Err(Error::IllDefinedHom(format!("entry ({j},{i}) = {a}: {a}*{d} is not 0 mod {e}")));
                }
                matrix.set(j, i, a % e);
            }
        }
        Ok(Self { domain, codomain, matrix })
    }

    pub(crate) fn new_unchecked(domain: FinMod, codomain: FinMod, mut matrix: Matrix) -> Self {
        matrix.reduce_rows(codomain.factors());
        Self { domain, codomain, matrix }
    }

    pub fn zero(domain: &FinMod, codomain: &FinMod) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: Matrix::zeros(codomain.rank(), domain.rank()),
        }
    }

    pub fn identity(m: &FinMod) -> Self {
        Self { domain: m.clone(), codomain: m.clone(), matrix: Matrix::identity(m.rank()) }
    }

    /// Multiplication by a ring element.
    pub fn scalar(m: &FinMod, c: u64) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.rank()).scale(c, m.n()))
    }

    pub fn domain(&self) -> &FinMod {
        &self.domain
    }

    pub fn codomain(&self) -> &FinMod {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn modulus(&self) -> &Modulus {
        self.domain.modulus()
    }

    fn n(&self) -> u64 {
        self.domain.n()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModHom) -> ModHom {
        assert_eq!(other.codomain, self.domain, "composition of incompatible homs");
        ModHom::new_unchecked(other.domain.clone(), self.codomain.clone(), self.matrix.mul(&other.matrix, self.n()))
    }

    pub fn add(&self, other: &ModHom) -> ModHom {
        assert!(self.domain == other.domain && self.codomain == other.codomain);
        ModHom::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.add(&other.matrix, self.n()))
    }

    pub fn neg(&self) -> ModHom {
        ModHom::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.neg(self.n()))
    }

    pub fn sub(&self, other: &ModHom) -> ModHom {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> ModHom {
        ModHom::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.scale(c, self.n()))
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.codomain.reduce(&self.matrix.mul_vec(x, self.n()))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn kernel(&self) -> Sub {
        let (module, incl) = kernel_of(self.modulus(), self.domain.factors(), self.codomain.factors(), &self.matrix);
        let inclusion = ModHom::new_unchecked(module.clone(), self.domain.clone(), incl);
        Sub { module, inclusion }
    }

    pub fn image(&self) -> Sub {
        let (module, incl, _) = subgroup(self.modulus(), self.codomain.factors(), &self.matrix);
        let inclusion = ModHom::new_unchecked(module.clone(), self.codomain.clone(), incl);
        Sub { module, inclusion }
    }

    pub fn cokernel(&self) -> Quotient {
        let pres = cokernel_of(self.modulus(), self.codomain.factors(), &self.matrix);
        let projection = ModHom::new_unchecked(self.codomain.clone(), pres.module.clone(), pres.proj);
        Quotient { module: pres.module, projection, section: pres.sect }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().module.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.domain.factors() == self.codomain.factors() && self.is_injective()
    }

    /// Some `x` with `self(x) = y`, if `y` lies in the image.
    pub fn preimage(&self, y: &[u64]) -> Option<Vec<u64>> {
        let sol = solve_in(self.modulus(), self.codomain.factors(), &self.matrix, &Matrix::column(y))?;
        Some(self.domain.reduce(&sol.col(0)))
    }

    /// Solves `self ∘ h = g` for `h`; `None` when `g` does not factor through `self`.
    ///
    /// When `self` is injective the solution is unique and automatically a homomorphism.
    pub fn factor_through(&self, g: &ModHom) -> Option<ModHom> {
        assert_eq!(g.codomain, self.codomain);
        let sol = solve_in(self.modulus(), self.codomain.factors(), &self.matrix, &g.matrix)?;
        ModHom::new(g.domain.clone(), self.domain.clone(), sol).ok()
    }
}

/// Direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub module: FinMod,
    pub injections: Vec<ModHom>,
    pub projections: Vec<ModHom>,
}

impl Biproduct {
    pub fn of(modulus: &Modulus, summands: &[FinMod]) -> Biproduct {
        let orders: Vec<u64> = summands.iter().flat_map(|m| m.factors().iter().copied()).collect();
        let pres = FinMod::from_orders(modulus, &orders);
        let mut injections = Vec::with_capacity(summands.len());
        let mut projections = Vec::with_capacity(summands.len());
        let mut offset = 0;
        for m in summands {
            let k = m.rank();
            let idx: Vec<usize> = (offset..offset + k).collect();
            injections.push(ModHom::new_unchecked(m.clone(), pres.module.clone(), pres.proj.select_cols(&idx)));
            projections.push(ModHom::new_unchecked(pres.module.clone(), m.clone(), pres.sect.select_rows(&idx)));
            offset += k;
        }
        Biproduct { module: pres.module, injections, projections }
    }

    /// The map into the sum with the given components.
    pub fn into_sum(&self, components: &[ModHom]) -> ModHom {
        assert_eq!(components.len(), self.injections.len());
        let src = components.first().map(|c| c.domain().clone());
        match src {
            None => ModHom::zero(&FinMod::zero(self.module.modulus()), &self.module),
            Some(src) => components
                .iter()
                .zip(&self.injections)
                .fold(ModHom::zero(&src, &self.module), |acc, (c, inj)| acc.add(&inj.compose(c))),
        }
    }

    /// The map out of the sum with the given components.
    pub fn out_of_sum(&self, components: &[ModHom], target: &FinMod) -> ModHom {
        assert_eq!(components.len(), self.projections.len());
        components
            .iter()
            .zip(&self.projections)
            .fold(ModHom::zero(&self.module, target), |acc, (c, p)| acc.add(&c.compose(p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn present_examples() {
        let m4 = zn(4);
        assert_eq!(present(&m4, &Matrix::column(&[2])).module.factors(), &[2]);
        let m9 = zn(9);
        assert_eq!(present(&m9, &Matrix::zeros(2, 0)).module.factors(), &[9, 9]);
        let m6 = zn(6);
        let rel = Matrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(present(&m6, &rel).module.factors(), &[6]);
    }

    #[test]
    fn hom_validation() {
        let m = zn(4);
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        let z4 = FinMod::cyclic(&m, 4).unwrap();
        assert!(ModHom::new(z2.clone(), z4.clone(), Matrix::column(&[2])).is_ok());
        assert!(ModHom::new(z2.clone(), z4.clone(), Matrix::column(&[1])).is_err());
        assert!(ModHom::new(z4.clone(), z2.clone(), Matrix::column(&[1])).is_ok());
    }

    #[test]
    fn kernel_of_doubling() {
        let m = zn(4);
        let z4 = FinMod::cyclic(&m, 4).unwrap();
        let dbl = ModHom::scalar(&z4, 2);
        let k = dbl.kernel();
        assert_eq!(k.module.factors(), &[2]);
        assert!(dbl.compose(&k.inclusion).is_zero());
        assert_eq!(dbl.cokernel().module.factors(), &[2]);
        assert_eq!(dbl.image().module.factors(), &[2]);
    }

    #[test]
    fn biproduct_reassembles_crt() {
        let m = zn(6);
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        let z3 = FinMod::cyclic(&m, 3).unwrap();
        let b = Biproduct::of(&m, &[z2.clone(), z3.clone()]);
        assert_eq!(b.module.factors(), &[6]);
        for (k, s) in [z2, z3].iter().enumerate() {
            assert_eq!(b.projections[k].compose(&b.injections[k]), ModHom::identity(s));
        }
        assert!(b.projections[0].compose(&b.injections[1]).is_zero());
    }

    #[test]
    fn display_renders_sum() {
        let m = zn(4);
        assert_eq!(FinMod::new(m.clone(), vec![2, 4]).unwrap().to_string(), "Z/2 + Z/4");
        assert_eq!(FinMod::zero(&m).to_string(), "0");
    }
}
