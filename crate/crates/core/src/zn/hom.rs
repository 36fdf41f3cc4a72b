//! The group `Hom(M, N)` as a module.

use super::arith::gcd;
use super::matrix::Matrix;
use super::module::{solve_in, FinMod, ModHom, Presentation};
use crate::error::Result;

/// Coordinates on `Hom(M, N)`.
///
/// Every hom is determined by its matrix, and entry `(j, i)` ranges over the
/// multiples of `e_j / gcd(d_i, e_j)`, a cyclic group of order `gcd(d_i, e_j)`.
/// Raw coordinates list these cyclic parameters column by column.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub domain: FinMod,
    pub codomain: FinMod,
    /// Order of each raw coordinate.
    pub raw_orders: Vec<u64>,
    /// Multiplier turning a raw coordinate into the matrix entry.
    pub steps: Vec<u64>,
    pub group: FinMod,
    /// Raw coordinates to canonical coordinates of `group`.
    pub proj: Matrix,
    /// Canonical coordinates to raw coordinates.
    pub sect: Matrix,
}

impl HomSpace {
    pub fn new(domain: &FinMod, codomain: &FinMod) -> Result<Self> {
        domain.check_same_ring(codomain)?;
        let mut raw_orders = Vec::new();
        let mut steps = Vec::new();
        for &d in domain.factors() {
            for &e in codomain.factors() {
                let g = gcd(d, e);
                raw_orders.push(g);
                steps.push(e / g);
            }
        }
        let Presentation { module, proj, sect } = FinMod::from_orders(domain.modulus(), &raw_orders);
        Ok(Self { domain: domain.clone(), codomain: codomain.clone(), raw_orders, steps, group: module, proj, sect })
    }

    pub fn reduce_raw(&self, raw: &[u64]) -> Vec<u64> {
        raw.iter().zip(&self.raw_orders).map(|(x, o)| x % o).collect()
    }

    /// Number of raw coordinates.
    pub fn raw_len(&self) -> usize {
        self.raw_orders.len()
    }

    /// Index of the raw coordinate for matrix entry `(j, i)`.
    pub fn raw_index(&self, j: usize, i: usize) -> usize {
        i * self.codomain.rank() + j
    }

    pub fn hom_from_raw(&self, raw: &[u64]) -> ModHom {
        let n = self.domain.n();
        let m = Matrix::from_fn(self.codomain.rank(), self.domain.rank(), |j, i| {
            let k = self.raw_index(j, i);
            (raw[k] as u128 * self.steps[k] as u128 % n as u128) as u64
        });
        ModHom::new_unchecked(self.domain.clone(), self.codomain.clone(), m)
    }

    pub fn raw_from_hom(&self, f: &ModHom) -> Vec<u64> {
        let mut raw = vec![0; self.raw_len()];
        for i in 0..self.domain.rank() {
            for j in 0..self.codomain.rank() {
                let k = self.raw_index(j, i);
                raw[k] = (f.matrix().get(j, i) / self.steps[k]) % self.raw_orders[k];
            }
        }
        raw
    }

    /// The hom with canonical coordinates `c` in `group`.
    pub fn hom(&self, c: &[u64]) -> ModHom {
        let raw = self.sect.mul_vec(c, self.domain.n());
        let raw: Vec<u64> = raw.iter().zip(&self.raw_orders).map(|(x, o)| x % o).collect();
        self.hom_from_raw(&raw)
    }

    pub fn coords(&self, f: &ModHom) -> Vec<u64> {
        let raw = self.raw_from_hom(f);
        self.group.reduce(&self.proj.mul_vec(&raw, self.domain.n()))
    }

    /// Homs corresponding to the canonical generators of `group`.
    pub fn basis(&self) -> Vec<ModHom> {
        (0..self.group.rank())
            .map(|k| {
                let mut e = vec![0; self.group.rank()];
                e[k] = 1;
                self.hom(&e)
            })
            .collect()
    }
}

impl HomSpace {
    /// Linear map from raw coordinates of `h` to the entries of `h ∘ f`.
    ///
    /// Rows are indexed column-major over the entries of `h ∘ f`; the returned
    /// orders are the codomain factor of each row.
    pub fn precompose_system(&self, f: &ModHom) -> (Matrix, Vec<u64>) {
        assert_eq!(f.codomain(), &self.domain);
        let n = self.domain.n();
        let rows = self.codomain.rank();
        let cols = f.domain().rank();
        let mut a = Matrix::zeros(rows * cols, self.raw_len());
        for l in 0..cols {
            for j in 0..rows {
                for i in 0..self.domain.rank() {
                    let k = self.raw_index(j, i);
                    let v = (self.steps[k] as u128 * f.matrix().get(i, l) as u128 % n as u128) as u64;
                    a.set(l * rows + j, k, v);
                }
            }
        }
        let orders = (0..rows * cols).map(|r| self.codomain.factors()[r % rows.max(1)]).collect();
        (a, orders)
    }

    /// Linear map from raw coordinates of `h` to the entries of `g ∘ h`.
    pub fn postcompose_system(&self, g: &ModHom) -> (Matrix, Vec<u64>) {
        assert_eq!(g.domain(), &self.codomain);
        let n = self.domain.n();
        let rows = g.codomain().rank();
        let cols = self.domain.rank();
        let mut a = Matrix::zeros(rows * cols, self.raw_len());
        for i in 0..cols {
            for m in 0..rows {
                for j in 0..self.codomain.rank() {
                    let k = self.raw_index(j, i);
                    let v = (self.steps[k] as u128 * g.matrix().get(m, j) as u128 % n as u128) as u64;
                    a.set(i * rows + m, k, v);
                }
            }
        }
        let orders = (0..rows * cols).map(|r| g.codomain().factors()[r % rows.max(1)]).collect();
        (a, orders)
    }
}

/// Flattens a hom's matrix column-major, matching the row order of the composition systems.
pub fn flatten(f: &ModHom) -> Vec<u64> {
    let m = f.matrix();
    (0..m.cols()).flat_map(|c| (0..m.rows()).map(move |r| m.get(r, c))).collect()
}

/// Some `α` with `α ∘ h = k` (so `α` extends `k` along `h`).
pub fn solve_precompose(h: &ModHom, k: &ModHom) -> Option<ModHom> {
    assert_eq!(h.domain(), k.domain());
    let space = HomSpace::new(h.codomain(), k.codomain()).expect("same ring");
    let (a, orders) = space.precompose_system(h);
    let sol = solve_in(h.modulus(), &orders, &a, &Matrix::column(&flatten(k)))?;
    Some(space.hom_from_raw(&space.reduce_raw(&sol.col(0))))
}

/// Some `σ` with `p ∘ σ = t` (so `σ` lifts `t` through `p`).
pub fn solve_postcompose(p: &ModHom, t: &ModHom) -> Option<ModHom> {
    assert_eq!(p.codomain(), t.codomain());
    let space = HomSpace::new(t.domain(), p.domain()).expect("same ring");
    let (a, orders) = space.postcompose_system(p);
    let sol = solve_in(p.modulus(), &orders, &a, &Matrix::column(&flatten(t)))?;
    Some(space.hom_from_raw(&space.reduce_raw(&sol.col(0))))
}

/// `Hom(M, N)` in canonical form with homs realizing its canonical generators.
pub fn hom_group(m: &FinMod, n: &FinMod) -> Result<(FinMod, Vec<ModHom>)> {
    let space = HomSpace::new(m, n)?;
    let basis = space.basis();
    Ok((space.group, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::Modulus;

    #[test]
    fn spec_cardinalities() {
        let m = Modulus::new(4).unwrap();
        let z2 = FinMod::cyclic(&m, 2).unwrap();
        let z4 = FinMod::cyclic(&m, 4).unwrap();
        assert_eq!(hom_group(&z2, &z4).unwrap().0.cardinality(), 2);
        assert_eq!(hom_group(&z4, &z4).unwrap().0.cardinality(), 4);
        assert!(hom_group(&z4, &FinMod::zero(&m)).unwrap().0.is_zero());
    }

    #[test]
    fn coords_round_trip() {
        let m = Modulus::new(12).unwrap();
        let a = FinMod::new(m.clone(), vec![2, 6]).unwrap();
        let b = FinMod::new(m.clone(), vec![3, 12]).unwrap();
        let space = HomSpace::new(&a, &b).unwrap();
        for c in space.group.elements() {
            let f = space.hom(&c);
            assert_eq!(space.coords(&f), c);
        }
    }
}
