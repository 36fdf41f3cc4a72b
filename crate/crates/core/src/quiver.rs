//! Finite quivers, paths and the rootedness fixpoint.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct QuiverFile {
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<Arrow>,
}

/// A finite quiver. Vertices and arrows keep their declaration order, which
/// fixes every coordinate convention downstream.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "QuiverFile", into = "QuiverFile")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vindex: HashMap<String, usize>,
    aindex: HashMap<String, usize>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> = self.arrows.iter().map(|a| format!("{}:{}->{}", a.id, a.src, a.tgt)).collect();
        write!(f, "Quiver({:?}; {})", self.vertices, arrows.join(", "))
    }
}

impl TryFrom<QuiverFile> for Quiver {
    type Error = Error;
    fn try_from(f: QuiverFile) -> Result<Self> {
        Quiver::new(f.vertices, f.arrows)
    }
}

impl From<Quiver> for QuiverFile {
    fn from(q: Quiver) -> Self {
        QuiverFile { vertices: q.vertices, arrows: q.arrows }
    }
}

/// A path, stored as arrow indices in traversal order. The empty sequence is the
/// trivial path at `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

#[allow(clippy::len_without_is_empty)]
impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Appends an arrow leaving the current target.
    pub fn then(&self, q: &Quiver, a: usize) -> Path {
        debug_assert_eq!(q.src[a], self.target);
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path { source: self.source, target: q.tgt[a], arrows }
    }

    pub fn render(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e_{}", q.vertices[self.source]);
        }
        let ids: Vec<&str> = self.arrows.iter().map(|&a| q.arrows[a].id.as_str()).collect();
        ids.join(".")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSequence {
    /// `W_0, W_1, ...` up to the first stage equal to its successor.
    pub stages: Vec<Vec<String>>,
    /// Index of the stage where the sequence stabilizes.
    pub fixpoint: usize,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        let mut aindex = HashMap::new();
        let mut src = Vec::with_capacity(arrows.len());
        let mut tgt = Vec::with_capacity(arrows.len());
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inn = vec![Vec::new(); vertices.len()];
        for (k, a) in arrows.iter().enumerate() {
            if aindex.insert(a.id.clone(), k).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{}`", a.id)));
            }
            let s = *vindex.get(&a.src).ok_or_else(|| Error::UnknownVertex(a.src.clone()))?;
            let t = *vindex.get(&a.tgt).ok_or_else(|| Error::UnknownVertex(a.tgt.clone()))?;
            src.push(s);
            tgt.push(t);
            out[s].push(k);
            inn[t].push(k);
        }
        Ok(Self { vertices, arrows, vindex, aindex, src, tgt, out, inn })
    }

    /// Convenience constructor from string slices: arrows are `(id, src, tgt)`.
    pub fn from_spec(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            arrows
                .iter()
                .map(|(id, s, t)| Arrow { id: id.to_string(), src: s.to_string(), tgt: t.to_string() })
                .collect(),
        )
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::input("quiver", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quivers serialize")
    }

    /// The linear quiver `1 → 2 → ... → k` with arrows `a1, a2, ...`.
    pub fn linear(k: usize) -> Self {
        let vs: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        let arrows =
            (1..k).map(|i| Arrow { id: format!("a{i}"), src: i.to_string(), tgt: (i + 1).to_string() }).collect();
        Self::new(vs, arrows).expect("well formed")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vindex.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arrow(&self, id: &str) -> Result<usize> {
        self.aindex.get(id).copied().ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn arrow_id(&self, a: usize) -> &str {
        &self.arrows[a].id
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    /// Arrows leaving `v`, in declaration order.
    pub fn out_of(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Arrows entering `v`, in declaration order.
    pub fn in_of(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn out_arrows(&self, v: &str) -> Result<Vec<&Arrow>> {
        Ok(self.out[self.vertex(v)?].iter().map(|&a| &self.arrows[a]).collect())
    }

    pub fn in_arrows(&self, v: &str) -> Result<Vec<&Arrow>> {
        Ok(self.inn[self.vertex(v)?].iter().map(|&a| &self.arrows[a]).collect())
    }

    /// Arrows reversed, each id toggling an `op` suffix so that the construction is an involution.
    pub fn opposite(&self) -> Quiver {
        let arrows =
            self.arrows.iter().map(|a| Arrow { id: op_id(&a.id), src: a.tgt.clone(), tgt: a.src.clone() }).collect();
        Quiver::new(self.vertices.clone(), arrows).expect("toggling is a bijection on ids")
    }

    /// Vertices in a topological order, or `None` when there is a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.inn.iter().map(|v| v.len()).collect();
        let mut ready: Vec<usize> = (0..self.num_vertices()).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.num_vertices());
        while let Some(v) = ready.pop() {
            order.push(v);
            for &a in &self.out[v] {
                let t = self.tgt[a];
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.push(t);
                }
            }
        }
        (order.len() == self.num_vertices()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    fn reach(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            let (edges, ends) = if forward { (&self.out[v], &self.tgt) } else { (&self.inn[v], &self.src) };
            for &a in edges {
                let w = ends[a];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// All paths from `i` to `j` ordered by length, then by arrow ids.
    pub fn paths(&self, i: usize, j: usize) -> Result<Vec<Path>> {
        let fwd = self.reach(i, true);
        let bwd = self.reach(j, false);
        let live: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();
        if !live[i] {
            return Ok(Vec::new());
        }
        // A cycle through live vertices yields infinitely many paths.
        let mut indeg = vec![0usize; self.num_vertices()];
        for a in 0..self.num_arrows() {
            if live[self.src[a]] && live[self.tgt[a]] {
                indeg[self.tgt[a]] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..self.num_vertices()).filter(|&v| live[v] && indeg[v] == 0).collect();
        let mut done = 0;
        while let Some(v) = ready.pop() {
            done += 1;
            for &a in &self.out[v] {
                let t = self.tgt[a];
                if live[t] {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        if done != live.iter().filter(|&&x| x).count() {
            return Err(Error::InfinitePaths(self.vertices[i].clone(), self.vertices[j].clone()));
        }
        let mut out = Vec::new();
        let mut stack = vec![Path::trivial(i)];
        while let Some(p) = stack.pop() {
            if p.target == j {
                out.push(p.clone());
            }
            for &a in &self.out[p.target] {
                if live[self.tgt[a]] {
                    stack.push(p.then(self, a));
                }
            }
        }
        out.sort_by(|p, q| {
            p.len().cmp(&q.len()).then_with(|| {
                let pi: Vec<&str> = p.arrows.iter().map(|&a| self.arrow_id(a)).collect();
                let qi: Vec<&str> = q.arrows.iter().map(|&a| self.arrow_id(a)).collect();
                pi.cmp(&qi)
            })
        });
        Ok(out)
    }

    pub fn paths_between(&self, i: &str, j: &str) -> Result<Vec<Path>> {
        self.paths(self.vertex(i)?, self.vertex(j)?)
    }

    /// Stages `W_{k+1} = { v : every arrow out of v ends in W_k }`, starting from the empty set.
    pub fn root_stages(&self) -> Vec<BTreeSet<usize>> {
        let mut stages = vec![BTreeSet::new()];
        loop {
            let last = stages.last().expect("nonempty");
            let next: BTreeSet<usize> = (0..self.num_vertices())
                .filter(|&v| self.out[v].iter().all(|&a| last.contains(&self.tgt[a])))
                .collect();
            if &next == last {
                return stages;
            }
            stages.push(next);
        }
    }

    pub fn root_sequence(&self) -> RootSequence {
        let stages = self.root_stages();
        let fixpoint = stages.len() - 1;
        let stages = stages.iter().map(|s| s.iter().map(|&v| self.vertices[v].clone()).collect()).collect();
        RootSequence { stages, fixpoint }
    }

    pub fn is_right_rooted(&self) -> bool {
        self.root_stages().last().expect("nonempty").len() == self.num_vertices()
    }

    pub fn is_left_rooted(&self) -> bool {
        self.opposite().is_right_rooted()
    }

    pub fn is_locally_target_finite(&self) -> bool {
        true
    }

    /// The subquiver on the given vertices and arrows (ids). Arrows must join listed vertices.
    pub fn subquiver(&self, vertices: &[&str], arrows: &[&str]) -> Result<Quiver> {
        let vs: Vec<usize> = vertices.iter().map(|v| self.vertex(v)).collect::<Result<_>>()?;
        let mut keep_v = vec![false; self.num_vertices()];
        for &v in &vs {
            keep_v[v] = true;
        }
        let mut keep_a = vec![false; self.num_arrows()];
        for id in arrows {
            let a = self.arrow(id)?;
            if !keep_v[self.src[a]] || !keep_v[self.tgt[a]] {
                return Err(Error::NotSubquiver(format!("arrow `{id}` leaves the vertex set")));
            }
            keep_a[a] = true;
        }
        Ok(self.induced(&keep_v, &keep_a))
    }

    /// The full subquiver on the given vertices.
    pub fn full_subquiver(&self, vertices: &[&str]) -> Result<Quiver> {
        let mut keep_v = vec![false; self.num_vertices()];
        for v in vertices {
            keep_v[self.vertex(v)?] = true;
        }
        let keep_a: Vec<bool> = (0..self.num_arrows()).map(|a| keep_v[self.src[a]] && keep_v[self.tgt[a]]).collect();
        Ok(self.induced(&keep_v, &keep_a))
    }

    fn induced(&self, keep_v: &[bool], keep_a: &[bool]) -> Quiver {
        let vs = (0..self.num_vertices()).filter(|&v| keep_v[v]).map(|v| self.vertices[v].clone()).collect();
        let arrows = (0..self.num_arrows()).filter(|&a| keep_a[a]).map(|a| self.arrows[a].clone()).collect();
        Quiver::new(vs, arrows).expect("subsets of a valid quiver are valid")
    }

    /// Whether `self` is a subquiver of `big` (same ids, same endpoints).
    pub fn is_subquiver_of(&self, big: &Quiver) -> bool {
        self.vertices.iter().all(|v| big.vindex.contains_key(v))
            && self.arrows.iter().all(|a| big.aindex.get(&a.id).is_some_and(|&k| big.arrows[k] == *a))
    }
}

/// Toggles a trailing `op` on an arrow id.
pub fn op_id(id: &str) -> String {
    match id.strip_suffix("op") {
        Some(base) => base.to_string(),
        None => format!("{id}op"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver {
        Quiver::from_spec(&["1", "2"], &[("a", "1", "2")]).unwrap()
    }

    fn loop_quiver() -> Quiver {
        Quiver::from_spec(&["v"], &[("alpha", "v", "v")]).unwrap()
    }

    #[test]
    fn path_examples() {
        let q = a2();
        let p = q.paths_between("1", "2").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].render(&q), "a");
        let p = q.paths_between("1", "1").unwrap();
        assert_eq!(p, vec![Path::trivial(0)]);
        let k = Quiver::from_spec(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        assert_eq!(k.paths_between("1", "2").unwrap().len(), 2);
        assert!(matches!(loop_quiver().paths_between("v", "v"), Err(Error::InfinitePaths(..))));
    }

    #[test]
    fn cycle_off_route_is_harmless() {
        let q = Quiver::from_spec(&["1", "2", "3"], &[("a", "1", "2"), ("l", "3", "3"), ("b", "1", "3")]).unwrap();
        assert_eq!(q.paths_between("1", "2").unwrap().len(), 1);
    }

    #[test]
    fn opposite_examples() {
        let q = a2();
        let o = q.opposite();
        assert_eq!(o.arrows()[0], Arrow { id: "aop".into(), src: "2".into(), tgt: "1".into() });
        assert_eq!(o.opposite(), q);
        assert_eq!(loop_quiver().opposite().num_arrows(), 1);
    }

    #[test]
    fn incidence_examples() {
        let q = a2();
        assert_eq!(q.out_arrows("1").unwrap().len(), 1);
        assert!(q.in_arrows("1").unwrap().is_empty());
        let l = loop_quiver();
        assert_eq!(l.out_arrows("v").unwrap().len(), 1);
        assert_eq!(l.in_arrows("v").unwrap().len(), 1);
        let star =
            Quiver::from_spec(&["c", "x", "y", "z"], &[("a", "c", "x"), ("b", "c", "y"), ("d", "c", "z")]).unwrap();
        assert_eq!(star.out_arrows("c").unwrap().len(), 3);
        assert!(matches!(q.out_arrows("9"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn root_sequence_examples() {
        let rs = a2().root_sequence();
        assert_eq!(rs.stages, vec![vec![], vec!["2".to_string()], vec!["1".to_string(), "2".to_string()]]);
        assert!(a2().is_right_rooted());
        let l = loop_quiver();
        assert_eq!(l.root_sequence().stages, vec![Vec::<String>::new()]);
        assert!(!l.is_right_rooted());
        let c2 = Quiver::from_spec(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        assert!(!c2.is_right_rooted());
        assert!(c2.subquiver(&["1", "2"], &["a"]).unwrap().is_right_rooted());
    }

    #[test]
    fn json_round_trip() {
        let q = a2();
        let back = Quiver::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
        assert!(Quiver::from_json(r#"{"vertices":["1"],"arrows":[{"id":"a","src":"1","tgt":"2"}]}"#).is_err());
    }
}
