//! The tensor product `Y ⊗_Q X` of a representation of `Q^op` with one of `Q`,
//! and its adjunction with `Hom(X, Z/n)`.

use crate::error::{Error, Result};
use crate::zn::{gcd, kernel_of, pairing, present, FinMod, Matrix, ModHom};

use super::system::MorphismSystem;
use super::{dual_rep, hom_reps, RepMorphism, Representation};

/// `Y ⊗_Q X` with the bookkeeping needed to address generators `y_k ⊗ x_l`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: FinMod,
    /// Raw generator offset of each vertex block.
    pub offsets: Vec<usize>,
    pub raw_orders: Vec<u64>,
    /// Raw generators to canonical coordinates.
    pub proj: Matrix,
    /// Canonical generators as raw combinations.
    pub sect: Matrix,
}

impl TensorProduct {
    /// Raw index of `y_k ⊗ x_l` at vertex `v` (with `x` of rank `xr` there).
    pub fn raw_index(&self, v: usize, k: usize, l: usize, xr: usize) -> usize {
        self.offsets[v] + k * xr + l
    }

    /// Canonical coordinates of `y_k ⊗ x_l` at `v`.
    pub fn generator(&self, v: usize, k: usize, l: usize, xr: usize) -> Vec<u64> {
        self.module.reduce(&self.proj.col(self.raw_index(v, k, l, xr)))
    }
}

fn check_pair(y: &Representation, x: &Representation) -> Result<()> {
    if y.modulus() != x.modulus() {
        return Err(Error::ModulusMismatch(y.modulus().n(), x.modulus().n()));
    }
    if *y.quiver() != x.quiver().opposite() {
        return Err(Error::Incompatible);
    }
    Ok(())
}

pub fn tensor(y: &Representation, x: &Representation) -> Result<TensorProduct> {
    check_pair(y, x)?;
    let md = x.modulus();
    let n = md.n();
    let q = x.quiver();
    let mut offsets = Vec::with_capacity(q.num_vertices());
    let mut raw_orders = Vec::new();
    for v in 0..q.num_vertices() {
        offsets.push(raw_orders.len());
        for &d in y.at(v).factors() {
            for &e in x.at(v).factors() {
                raw_orders.push(gcd(d, e));
            }
        }
    }
    let idx = |v: usize, k: usize, l: usize| offsets[v] + k * x.at(v).rank() + l;
    let mut rels: Vec<Vec<u64>> = Vec::new();
    for a in 0..q.num_arrows() {
        let (i, j) = (q.src(a), q.tgt(a));
        let ya = y.map(a).matrix(); // Y(j) → Y(i)
        let xa = x.map(a).matrix(); // X(i) → X(j)
        for k in 0..y.at(j).rank() {
            for l in 0..x.at(i).rank() {
                // Y(a^op)(y_k) ⊗ x_l - y_k ⊗ X(a)(x_l)
                let mut col = vec![0u64; raw_orders.len()];
                for m in 0..y.at(i).rank() {
                    let r = idx(i, m, l);
                    col[r] = (col[r] + ya.get(m, k)) % n;
                }
                for p in 0..x.at(j).rank() {
                    let r = idx(j, k, p);
                    col[r] = (col[r] + n - xa.get(p, l) % n) % n;
                }
                rels.push(col);
            }
        }
    }
    let diag: Vec<u64> = raw_orders.iter().map(|&g| g % n).collect();
    let rel = Matrix::diagonal(&diag).hcat(&Matrix::from_fn(raw_orders.len(), rels.len(), |r, c| rels[c][r]));
    let pres = present(md, &rel);
    Ok(TensorProduct { module: pres.module, offsets, raw_orders, proj: pres.proj, sect: pres.sect })
}

/// `h ⊗ 1 : Y' ⊗ X → Y ⊗ X` for `h : Y' → Y`.
pub fn tensor_map_left(h: &RepMorphism, x: &Representation) -> Result<ModHom> {
    let src = tensor(h.source(), x)?;
    let dst = tensor(h.target(), x)?;
    let n = x.modulus().n();
    let q = x.quiver();
    let mut raw_images = Matrix::zeros(dst.module.rank(), src.raw_orders.len());
    for v in 0..q.num_vertices() {
        let xr = x.at(v).rank();
        let hv = h.at(v).matrix();
        for k in 0..h.source().at(v).rank() {
            for l in 0..xr {
                let mut img = vec![0u64; dst.module.rank()];
                for m in 0..h.target().at(v).rank() {
                    let c = hv.get(m, k);
                    let g = dst.generator(v, m, l, xr);
                    for (t, gv) in g.iter().enumerate() {
                        img[t] = ((img[t] as u128 + c as u128 * *gv as u128) % n as u128) as u64;
                    }
                }
                let r = src.raw_index(v, k, l, xr);
                for (t, val) in img.iter().enumerate() {
                    raw_images.set(t, r, *val);
                }
            }
        }
    }
    let m = raw_images.mul(&src.sect, n);
    ModHom::new(src.module.clone(), dst.module.clone(), m)
}

/// `1 ⊗ f : Y ⊗ X → Y ⊗ X'` for `f : X → X'`.
pub fn tensor_map_right(y: &Representation, f: &RepMorphism) -> Result<ModHom> {
    let src = tensor(y, f.source())?;
    let dst = tensor(y, f.target())?;
    let n = y.modulus().n();
    let q = f.source().quiver();
    let mut raw_images = Matrix::zeros(dst.module.rank(), src.raw_orders.len());
    for v in 0..q.num_vertices() {
        let xr = f.source().at(v).rank();
        let xr2 = f.target().at(v).rank();
        let fv = f.at(v).matrix();
        for k in 0..y.at(v).rank() {
            for l in 0..xr {
                let mut img = vec![0u64; dst.module.rank()];
                for p in 0..xr2 {
                    let c = fv.get(p, l);
                    for (t, gv) in dst.generator(v, k, p, xr2).iter().enumerate() {
                        img[t] = ((img[t] as u128 + c as u128 * *gv as u128) % n as u128) as u64;
                    }
                }
                let r = src.raw_index(v, k, l, xr);
                for (t, val) in img.iter().enumerate() {
                    raw_images.set(t, r, *val);
                }
            }
        }
    }
    let m = raw_images.mul(&src.sect, n);
    ModHom::new(src.module.clone(), dst.module.clone(), m)
}

/// Outcome of checking `Hom(Y ⊗ X, Z/n) ≅ Hom_{Q^op}(Y, X⁺)`.
#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    pub tensor_cardinality: u128,
    pub hom_cardinality: u128,
    /// The map on functionals is injective.
    pub injective: bool,
    /// Naturality in `Y` held on every sampled endomorphism.
    pub natural: bool,
}

impl AdjunctionWitness {
    pub fn holds(&self) -> bool {
        self.injective && self.natural && self.tensor_cardinality == self.hom_cardinality
    }
}

/// The morphism `Y → X⁺` attached to the functional `phi` on `Y ⊗ X`.
fn curry(
    t: &TensorProduct,
    y: &Representation,
    x: &Representation,
    xd: &Representation,
    phi: &[u64],
) -> Result<RepMorphism> {
    let n = x.modulus().n();
    let q = x.quiver();
    let comps = (0..q.num_vertices())
        .map(|v| {
            let xr = x.at(v).rank();
            let xf = x.at(v).factors();
            let m = Matrix::from_fn(xr, y.at(v).rank(), |l, k| {
                let val = pairing(&t.module, phi, &t.generator(v, k, l, xr));
                let unit = n / xf[l];
                debug_assert_eq!(val % unit, 0);
                (val / unit) % xf[l]
            });
            ModHom::new(y.at(v).clone(), xd.at(v).clone(), m)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(y, xd, comps)
}

pub fn adjunction_check(y: &Representation, x: &Representation) -> Result<AdjunctionWitness> {
    let t = tensor(y, x)?;
    let xd = dual_rep(x);
    let homs = hom_reps(y, &xd);
    let sys = MorphismSystem::new(y, &xd);
    let md = x.modulus();
    let r = t.module.rank();
    let mut images = Vec::with_capacity(r);
    for c in 0..r {
        let mut phi = vec![0u64; r];
        phi[c] = 1;
        images.push(sys.raw_coords(&curry(&t, y, x, &xd, &phi)?));
    }
    let raw_len = sys.raw_orders().len();
    let m = Matrix::from_fn(raw_len, r, |i, j| images[j][i]);
    let (ker, _) = kernel_of(md, t.module.factors(), sys.raw_orders(), &m);
    let injective = ker.is_zero();

    // Naturality in Y: curry(phi ∘ (h ⊗ 1)) = curry(phi) ∘ h.
    let mut natural = true;
    let ends = hom_reps(y, y);
    for h in ends.basis.iter().take(3) {
        let hm = tensor_map_left(h, x)?;
        for c in 0..r.min(3) {
            let mut phi = vec![0u64; r];
            phi[c] = 1;
            // phi ∘ hm in dual coordinates is hm⁺(phi).
            let pulled = crate::zn::matlis_dual_hom(&hm).apply(&phi);
            let lhs = curry(&t, y, x, &xd, &pulled)?;
            let rhs = curry(&t, y, x, &xd, &phi)?.compose(h);
            if lhs != rhs {
                natural = false;
            }
        }
    }
    Ok(AdjunctionWitness {
        tensor_cardinality: t.module.cardinality(),
        hom_cardinality: homs.group.cardinality(),
        injective,
        natural,
    })
}
