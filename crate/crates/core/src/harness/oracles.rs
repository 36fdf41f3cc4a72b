//! Brute-force oracles that share no code path with the engines they check.

use crate::quiver::Quiver;
use crate::rep::{hom_reps, Representation};
#[cfg(test)]
use crate::rep::{RepMorphism, RepSES};
use crate::zn::{present, FinMod, Matrix, ModHom, ModSES, Presentation};

/// Directed cycle detection by depth-first search with three colours.
pub fn has_cycle(q: &Quiver) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    fn visit(q: &Quiver, v: usize, colour: &mut [Colour]) -> bool {
        colour[v] = Colour::Grey;
        for &a in q.out_of(v) {
            let w = q.tgt(a);
            let c = colour[w];
            if c == Colour::Grey || (c == Colour::White && visit(q, w, colour)) {
                return true;
            }
        }
        colour[v] = Colour::Black;
        false
    }
    let mut colour = vec![Colour::White; q.num_vertices()];
    (0..q.num_vertices()).any(|v| colour[v] == Colour::White && visit(q, v, &mut colour))
}

/// Stages are ascending and stabilise within `|Q_0|` steps.
pub fn stages_well_formed(q: &Quiver) -> (bool, usize) {
    let stages = q.root_stages();
    let ascending = stages.windows(2).all(|w| w[0].is_subset(&w[1]));
    let fixpoint = stages.len().saturating_sub(1);
    (ascending && fixpoint <= q.num_vertices(), fixpoint)
}

/// Cap on the work of one enumeration, counted as in [`enumeration_size`].
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Visits every index tuple below `sizes` in odometer order.
fn odometer(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        f(&idx);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `0 → Y(v) → E(v) → X(v) → 0` for one choice of lift defects at `v`.
struct VertexExt {
    rel: Matrix,
    pres: Presentation,
    #[cfg_attr(not(test), allow(dead_code))]
    f: ModHom,
    #[cfg_attr(not(test), allow(dead_code))]
    g: ModHom,
}

/// Candidate extensions: `E(v) = (Y(v) ⊕ Z^{r_v}) / (orders of Y(v), d_i ε_i - c_{v,i})`, with arrow
/// maps given by `Y`'s maps, `X`'s maps and corrections `λ_a`.
struct Candidate<'a> {
    x: &'a Representation,
    y: &'a Representation,
}

impl Candidate<'_> {
    /// `None` unless the vertex sequence is exact.
    fn vertex(&self, v: usize, c: &[Vec<u64>]) -> Option<VertexExt> {
        let (x, y) = (self.x, self.y);
        let md = x.modulus();
        let n = md.n();
        let (ry, rx) = (y.at(v).rank(), x.at(v).rank());
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for (j, &e) in y.at(v).factors().iter().enumerate() {
            let mut col = vec![0; ry + rx];
            col[j] = e % n;
            cols.push(col);
        }
        for (i, &d) in x.at(v).factors().iter().enumerate() {
            let mut col = vec![0; ry + rx];
            for j in 0..ry {
                col[j] = (n - c[i][j] % n) % n;
            }
            col[ry + i] = d % n;
            cols.push(col);
        }
        let rel = Matrix::from_fn(ry + rx, cols.len(), |r, k| cols[k][r]);
        let pres = present(md, &rel);
        let fm = pres.proj.select_cols(&(0..ry).collect::<Vec<_>>());
        let f = ModHom::new(y.at(v).clone(), pres.module.clone(), fm).ok()?;
        let raw = Matrix::from_fn(rx, ry + rx, |r, k| u64::from(k >= ry && k - ry == r));
        let g = ModHom::new(pres.module.clone(), x.at(v).clone(), raw.mul(&pres.sect, n)).ok()?;
        ModSES::new(f.clone(), g.clone()).ok()?;
        Some(VertexExt { rel, pres, f, g })
    }

    /// The map `E(s(a)) → E(t(a))`; `None` when it is not well defined.
    fn arrow(&self, a: usize, es: &VertexExt, et: &VertexExt, lambda: &[Vec<u64>]) -> Option<ModHom> {
        let (x, y) = (self.x, self.y);
        let q = x.quiver();
        let n = x.modulus().n();
        let (s, t) = (q.src(a), q.tgt(a));
        let (rys, rxs) = (y.at(s).rank(), x.at(s).rank());
        let ryt = y.at(t).rank();
        let xa = x.map(a).matrix();
        let ya = y.map(a).matrix();
        // Raw images in the raw coordinates of E(t).
        let raw = Matrix::from_fn(ryt + x.at(t).rank(), rys + rxs, |r, k| {
            if k < rys {
                if r < ryt {
                    ya.get(r, k)
                } else {
                    0
                }
            } else {
                let i = k - rys;
                if r < ryt {
                    lambda[i][r]
                } else {
                    xa.get(r - ryt, i)
                }
            }
        });
        let canon = et.pres.proj.mul(&raw, n);
        let on_relations = canon.mul(&es.rel, n);
        for k in 0..on_relations.cols() {
            if et.pres.module.reduce(&on_relations.col(k)).iter().any(|&e| e != 0) {
                return None;
            }
        }
        ModHom::new(es.pres.module.clone(), et.pres.module.clone(), canon.mul(&es.pres.sect, n)).ok()
    }

    /// The whole sequence `0 → Y → E → X → 0`, checked as a sequence of representations.
    #[cfg(test)]
    fn build(&self, c: &[Vec<Vec<u64>>], lambda: &[Vec<Vec<u64>>]) -> Option<RepSES> {
        let (x, y) = (self.x, self.y);
        let q = x.quiver_arc();
        let vs = (0..q.num_vertices()).map(|v| self.vertex(v, &c[v])).collect::<Option<Vec<_>>>()?;
        let maps = (0..q.num_arrows())
            .map(|a| self.arrow(a, &vs[q.src(a)], &vs[q.tgt(a)], &lambda[a]))
            .collect::<Option<Vec<_>>>()?;
        let modules = vs.iter().map(|e| e.pres.module.clone()).collect();
        let e = Representation::new(q.clone(), x.modulus().clone(), modules, maps).ok()?;
        let f = RepMorphism::new(y, &e, vs.iter().map(|e| e.f.clone()).collect()).ok()?;
        let g = RepMorphism::new(&e, x, vs.iter().map(|e| e.g.clone()).collect()).ok()?;
        RepSES::new(f, g).ok()
    }
}

/// Lift-defect choices at `v`: one element of `Y(v)` per generator of `X(v)`.
fn vertex_choices(x: &Representation, y: &Representation, v: usize) -> u128 {
    y.at(v).cardinality().checked_pow(x.at(v).rank() as u32).unwrap_or(u128::MAX)
}

/// Correction choices along `a`: one element of `Y(t(a))` per generator of `X(s(a))`.
fn arrow_choices(x: &Representation, y: &Representation, a: usize) -> u128 {
    let q = x.quiver();
    y.at(q.tgt(a)).cardinality().checked_pow(x.at(q.src(a)).rank() as u32).unwrap_or(u128::MAX)
}

/// Work of the enumeration: all joint vertex choices, plus every arrow correction tried
/// against every pair of vertex choices at its ends. `None` on overflow.
pub fn enumeration_size(x: &Representation, y: &Representation) -> Option<u128> {
    let q = x.quiver();
    let nv = q.num_vertices();
    let joint = (0..nv).try_fold(1u128, |acc, v| acc.checked_mul(vertex_choices(x, y, v)))?;
    (0..q.num_arrows()).try_fold(joint, |acc, a| {
        let per = vertex_choices(x, y, q.src(a))
            .checked_mul(vertex_choices(x, y, q.tgt(a)))?
            .checked_mul(arrow_choices(x, y, a))?;
        acc.checked_add(per)
    })
}

fn tuples(m: &FinMod, k: usize) -> Vec<Vec<Vec<u64>>> {
    let elems = m.elements();
    let mut out = Vec::new();
    odometer(&vec![elems.len(); k], |idx| out.push(idx.iter().map(|&i| elems[i].clone()).collect()));
    out
}

/// `|Ext^1_Q(X, Y)|` by counting every extension datum that yields an exact sequence of
/// representations, then dividing by the orbit size of changing lifts:
/// `|Ext^1| = |Z^1| · |Hom(X, Y)| / |C^0|`. A datum is valid exactly when each vertex
/// sequence is exact and each arrow map is well defined, so the count is a sum over
/// valid vertex data of a product over arrows. `None` if the enumeration is too large.
pub fn brute_force_ext1_cardinality(x: &Representation, y: &Representation) -> Option<u128> {
    if enumeration_size(x, y)? > ENUMERATION_LIMIT {
        return None;
    }
    let q = x.quiver();
    let cand = Candidate { x, y };
    let valid: Vec<Vec<VertexExt>> = (0..q.num_vertices())
        .map(|v| tuples(y.at(v), x.at(v).rank()).iter().filter_map(|c| cand.vertex(v, c)).collect())
        .collect();
    let counts: Vec<Vec<Vec<u128>>> = (0..q.num_arrows())
        .map(|a| {
            let (s, t) = (q.src(a), q.tgt(a));
            let lambdas = tuples(y.at(t), x.at(s).rank());
            valid[s]
                .iter()
                .map(|es| {
                    valid[t]
                        .iter()
                        .map(|et| lambdas.iter().filter(|l| cand.arrow(a, es, et, l).is_some()).count() as u128)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut cocycles: u128 = 0;
    odometer(&valid.iter().map(Vec::len).collect::<Vec<_>>(), |idx| {
        cocycles += (0..q.num_arrows()).map(|a| counts[a][idx[q.src(a)]][idx[q.tgt(a)]]).product::<u128>();
    });
    let c0: u128 = (0..q.num_vertices()).map(|v| vertex_choices(x, y, v)).product();
    let hom = hom_reps(x, y).group.cardinality();
    Some(cocycles * hom / c0)
}

/// The same count with every datum assembled into a full sequence of representations.
#[cfg(test)]
fn unfactored_ext1_cardinality(x: &Representation, y: &Representation) -> u128 {
    let q = x.quiver();
    let mut slots: Vec<Vec<Vec<u64>>> = Vec::new();
    for v in 0..q.num_vertices() {
        for _ in 0..x.at(v).rank() {
            slots.push(y.at(v).elements());
        }
    }
    for a in 0..q.num_arrows() {
        for _ in 0..x.at(q.src(a)).rank() {
            slots.push(y.at(q.tgt(a)).elements());
        }
    }
    let cand = Candidate { x, y };
    let mut cocycles: u128 = 0;
    odometer(&slots.iter().map(Vec::len).collect::<Vec<_>>(), |idx| {
        let mut k = 0;
        let mut take = |r: usize| {
            let out: Vec<Vec<u64>> = (0..r).map(|j| slots[k + j][idx[k + j]].clone()).collect();
            k += r;
            out
        };
        let c: Vec<_> = (0..q.num_vertices()).map(|v| take(x.at(v).rank())).collect();
        let lambda: Vec<_> = (0..q.num_arrows()).map(|a| take(x.at(q.src(a)).rank())).collect();
        if cand.build(&c, &lambda).is_some() {
            cocycles += 1;
        }
    });
    let c0: u128 = (0..q.num_vertices()).map(|v| vertex_choices(x, y, v)).product();
    cocycles * hom_reps(x, y).group.cardinality() / c0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a2, loop_fixture, loop_quiver};
    use crate::rep::stalk;
    use crate::zn::Modulus;

    #[test]
    fn cycle_oracle() {
        assert!(!has_cycle(&a2()));
        assert!(has_cycle(&loop_quiver()));
    }

    #[test]
    fn brute_force_on_a2() {
        let md = Modulus::new(2).unwrap();
        let z2 = FinMod::cyclic(&md, 2).unwrap();
        let s1 = stalk(a2(), 0, &z2);
        let s2 = stalk(a2(), 1, &z2);
        assert_eq!(brute_force_ext1_cardinality(&s1, &s2), Some(2));
        assert_eq!(brute_force_ext1_cardinality(&s2, &s1), Some(1));
    }

    #[test]
    fn factored_count_matches_full_enumeration() {
        use crate::harness::gen::{
            random_quiver, random_representation, ModuleCaps, QuiverCaps, QuiverConstraints, Rng8,
        };
        use rand::SeedableRng;
        let mut rng = Rng8::seed_from_u64(11);
        let (mut checked, mut nontrivial) = (0, 0);
        while checked < 40 {
            let caps = QuiverCaps { max_vertices: 3, max_arrows: 3 };
            let q = std::sync::Arc::new(random_quiver(&mut rng, caps, QuiverConstraints::default()).unwrap());
            let md = Modulus::new([2, 3, 4][checked % 3]).unwrap();
            let mc = ModuleCaps { max_rank: 2, max_cardinality: 4 };
            let (x, y) = (random_representation(&mut rng, &q, &md, mc), random_representation(&mut rng, &q, &md, mc));
            let full: u128 = (0..q.num_vertices()).map(|v| vertex_choices(&x, &y, v)).product::<u128>()
                * (0..q.num_arrows()).map(|a| arrow_choices(&x, &y, a)).product::<u128>();
            if full > 4096 {
                continue;
            }
            let count = unfactored_ext1_cardinality(&x, &y);
            assert_eq!(brute_force_ext1_cardinality(&x, &y), Some(count));
            nontrivial += usize::from(count > 1);
            checked += 1;
        }
        assert!(nontrivial >= 5, "{nontrivial}");
    }

    #[test]
    fn brute_force_on_the_loop() {
        let md = Modulus::new(2).unwrap();
        let x = loop_fixture(&md);
        let e = crate::homology::ext1_yoneda(&x, &x).unwrap();
        assert_eq!(brute_force_ext1_cardinality(&x, &x), Some(e.cardinality()));
    }
}
