//! Linear systems whose unknowns are morphisms of representations.

use crate::zn::{flatten, kernel_of, solve_in, FinMod, HomSpace, Matrix, ModHom};

use super::{RepMorphism, Representation};

/// Unknown `g : X → Y` given by raw coordinates of every vertex component,
/// constrained by naturality and by optional affine equations.
pub struct MorphismSystem {
    source: Representation,
    target: Representation,
    spaces: Vec<HomSpace>,
    offsets: Vec<usize>,
    raw_orders: Vec<u64>,
    rows: Vec<Vec<u64>>,
    orders: Vec<u64>,
    rhs: Vec<u64>,
}

impl MorphismSystem {
    pub fn new(source: &Representation, target: &Representation) -> Self {
        let q = source.quiver();
        let spaces: Vec<HomSpace> =
            (0..q.num_vertices()).map(|v| HomSpace::new(source.at(v), target.at(v)).expect("same ring")).collect();
        let mut offsets = Vec::with_capacity(spaces.len());
        let mut raw_orders = Vec::new();
        for s in &spaces {
            offsets.push(raw_orders.len());
            raw_orders.extend_from_slice(&s.raw_orders);
        }
        let mut sys = Self {
            source: source.clone(),
            target: target.clone(),
            spaces,
            offsets,
            raw_orders,
            rows: Vec::new(),
            orders: Vec::new(),
            rhs: Vec::new(),
        };
        sys.add_naturality();
        sys
    }

    fn width(&self) -> usize {
        self.raw_orders.len()
    }

    fn push_block(&mut self, v: usize, block: &Matrix, orders: &[u64], sign_neg: bool) -> usize {
        let n = self.source.modulus().n();
        let start = self.rows.len();
        for r in 0..block.rows() {
            let mut row = vec![0u64; self.width()];
            for c in 0..block.cols() {
                let x = block.get(r, c);
                row[self.offsets[v] + c] = if sign_neg { (n - x) % n } else { x };
            }
            self.rows.push(row);
            self.orders.push(orders[r]);
            self.rhs.push(0);
        }
        start
    }

    fn add_naturality(&mut self) {
        let n = self.source.modulus().n();
        let q = self.source.quiver_arc().clone();
        for a in 0..q.num_arrows() {
            let (s, t) = (q.src(a), q.tgt(a));
            // Y(a) g_s - g_t X(a) = 0 as a hom X(s) → Y(t).
            let (post, orders) = self.spaces[s].postcompose_system(self.target.map(a));
            let (pre, _) = self.spaces[t].precompose_system(self.source.map(a));
            let start = self.push_block(s, &post, &orders, false);
            for r in 0..pre.rows() {
                for c in 0..pre.cols() {
                    let x = pre.get(r, c);
                    let cell = &mut self.rows[start + r][self.offsets[t] + c];
                    *cell = (*cell + (n - x) % n) % n;
                }
            }
        }
    }

    /// Requires `g_v ∘ f = target` for a fixed hom `f` into `X(v)`.
    pub fn require_precompose(&mut self, v: usize, f: &ModHom, target: &ModHom) {
        let (a, orders) = self.spaces[v].precompose_system(f);
        let start = self.push_block(v, &a, &orders, false);
        for (k, x) in flatten(target).into_iter().enumerate() {
            self.rhs[start + k] = x;
        }
    }

    /// Requires `h ∘ g_v = target` for a fixed hom `h` out of `Y(v)`.
    pub fn require_postcompose(&mut self, v: usize, h: &ModHom, target: &ModHom) {
        let (a, orders) = self.spaces[v].postcompose_system(h);
        let start = self.push_block(v, &a, &orders, false);
        for (k, x) in flatten(target).into_iter().enumerate() {
            self.rhs[start + k] = x;
        }
    }

    fn matrix(&self) -> Matrix {
        Matrix::from_fn(self.rows.len(), self.width(), |r, c| self.rows[r][c])
    }

    fn morphism_from_raw(&self, raw: &[u64]) -> RepMorphism {
        let comps = self
            .spaces
            .iter()
            .enumerate()
            .map(|(v, s)| {
                let chunk: Vec<u64> = raw[self.offsets[v]..self.offsets[v] + s.raw_len()]
                    .iter()
                    .zip(&s.raw_orders)
                    .map(|(x, o)| x % o)
                    .collect();
                s.hom_from_raw(&chunk)
            })
            .collect();
        RepMorphism::new_unchecked(&self.source, &self.target, comps)
    }

    /// Some morphism satisfying every equation.
    pub fn solve(&self) -> Option<RepMorphism> {
        let sol = solve_in(self.source.modulus(), &self.orders, &self.matrix(), &Matrix::column(&self.rhs))?;
        Some(self.morphism_from_raw(&sol.col(0)))
    }

    /// The group of solutions of the homogeneous system, with generating morphisms.
    pub fn solution_group(&self) -> (FinMod, Vec<RepMorphism>, Matrix) {
        let (group, incl) = kernel_of(self.source.modulus(), &self.raw_orders, &self.orders, &self.matrix());
        let basis = (0..incl.cols()).map(|c| self.morphism_from_raw(&incl.col(c))).collect();
        (group, basis, incl)
    }

    /// Raw coordinates of a morphism, in the layout used by the system.
    pub fn raw_coords(&self, f: &RepMorphism) -> Vec<u64> {
        let mut raw = Vec::with_capacity(self.width());
        for (v, s) in self.spaces.iter().enumerate() {
            raw.extend(s.raw_from_hom(f.at(v)));
        }
        raw
    }

    pub fn raw_orders(&self) -> &[u64] {
        &self.raw_orders
    }
}

/// `Hom_Q(X, Y)` as a group with generating morphisms.
#[derive(Clone, Debug)]
pub struct HomReps {
    pub group: FinMod,
    pub basis: Vec<RepMorphism>,
    /// Raw coordinates of the generators (one column each).
    pub inclusion: Matrix,
}

impl HomReps {
    /// The morphism with canonical coordinates `c`.
    pub fn morphism(&self, c: &[u64]) -> RepMorphism {
        let x = &self.basis;
        match x.first() {
            None => unreachable!("call on an empty basis"),
            Some(first) => {
                let zero = RepMorphism::zero(first.source(), first.target());
                x.iter().zip(c).fold(zero, |acc, (b, &k)| {
                    let comps = b.comps().iter().map(|h| h.scale(k)).collect();
                    acc.add(&RepMorphism::new_unchecked(b.source(), b.target(), comps))
                })
            }
        }
    }
}

pub fn hom_reps(x: &Representation, y: &Representation) -> HomReps {
    let sys = MorphismSystem::new(x, y);
    let (group, basis, inclusion) = sys.solution_group();
    HomReps { group, basis, inclusion }
}
