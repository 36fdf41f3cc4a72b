//! JSON forms of representations and of short exact sequences.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{Arrow, Quiver};
use crate::zn::{FinMod, Matrix, ModHom, Modulus};

use super::{RepMorphism, RepSES, Representation};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepFile {
    pub modulus: u64,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub modules: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    pub arrows_maps: BTreeMap<String, Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepSesFile {
    pub modulus: u64,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
    pub x: Components,
    pub y: Components,
    pub z: Components,
    pub f: BTreeMap<String, Vec<Vec<u64>>>,
    pub g: BTreeMap<String, Vec<Vec<u64>>>,
}

/// Several named representations over one quiver.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepFamilyFile {
    pub modulus: u64,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
    pub representations: BTreeMap<String, Components>,
}

/// Vertex modules and arrow maps of one representation inside a larger file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Components {
    #[serde(default)]
    pub modules: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    pub arrows_maps: BTreeMap<String, Vec<Vec<u64>>>,
}

fn parse_matrix(field: &str, rows: &[Vec<u64>], cod: &FinMod, dom: &FinMod) -> Result<ModHom> {
    let n = cod.n();
    let m = if rows.is_empty() && (cod.rank() == 0 || dom.rank() == 0) {
        Matrix::zeros(cod.rank(), dom.rank())
    } else {
        Matrix::from_rows(rows).map_err(|e| Error::input(field, e.to_string()))?
    };
    if m.shape() != (cod.rank(), dom.rank()) {
        return Err(Error::input(
            field,
            format!("expected a {}x{} matrix, got {}x{}", cod.rank(), dom.rank(), m.rows(), m.cols()),
        ));
    }
    if rows.iter().flatten().any(|&x| x >= n) {
        return Err(Error::input(field, format!("entries must lie in [0, {n})")));
    }
    ModHom::new(dom.clone(), cod.clone(), m).map_err(|e| Error::input(field, e.to_string()))
}

fn parse_modules(
    field: &str,
    quiver: &Quiver,
    modulus: &Modulus,
    modules: &BTreeMap<String, Vec<u64>>,
) -> Result<Vec<FinMod>> {
    for v in modules.keys() {
        quiver.vertex(v).map_err(|_| Error::input(format!("{field}.{v}"), "unknown vertex"))?;
    }
    quiver
        .vertices()
        .iter()
        .map(|v| match modules.get(v) {
            None => Ok(FinMod::zero(modulus)),
            Some(fs) => FinMod::new(modulus.clone(), fs.clone())
                .map_err(|e| Error::input(format!("{field}.{v}"), e.to_string())),
        })
        .collect()
}

fn parse_maps(
    field: &str,
    quiver: &Quiver,
    modules: &[FinMod],
    maps: &BTreeMap<String, Vec<Vec<u64>>>,
) -> Result<Vec<ModHom>> {
    for a in maps.keys() {
        quiver.arrow(a).map_err(|_| Error::input(format!("{field}.{a}"), "unknown arrow"))?;
    }
    (0..quiver.num_arrows())
        .map(|a| {
            let id = quiver.arrow_id(a);
            let (s, t) = (&modules[quiver.src(a)], &modules[quiver.tgt(a)]);
            match maps.get(id) {
                None if s.is_zero() || t.is_zero() => Ok(ModHom::zero(s, t)),
                None => Err(Error::input(format!("{field}.{id}"), "missing map")),
                Some(rows) => parse_matrix(&format!("{field}.{id}"), rows, t, s),
            }
        })
        .collect()
}

fn parse_header(modulus: u64, vertices: &[String], arrows: &[Arrow]) -> Result<(Modulus, Arc<Quiver>)> {
    let md = Modulus::new(modulus).map_err(|e| Error::input("modulus", e.to_string()))?;
    let q = Quiver::new(vertices.to_vec(), arrows.to_vec()).map_err(|e| Error::input("arrows", e.to_string()))?;
    Ok((md, Arc::new(q)))
}

fn build(
    prefix: &str,
    q: &Arc<Quiver>,
    md: &Modulus,
    c: &BTreeMap<String, Vec<u64>>,
    m: &BTreeMap<String, Vec<Vec<u64>>>,
) -> Result<Representation> {
    let join = |s: &str| {
        if prefix.is_empty() {
            s.to_string()
        } else {
            format!("{prefix}.{s}")
        }
    };
    let modules = parse_modules(&join("modules"), q, md, c)?;
    let maps = parse_maps(&join("arrows_maps"), q, &modules, m)?;
    Representation::new(q.clone(), md.clone(), modules, maps)
}

fn matrix_map(h: &[ModHom], q: &Quiver) -> BTreeMap<String, Vec<Vec<u64>>> {
    h.iter().enumerate().map(|(i, m)| (q.vertex_name(i).to_string(), m.matrix().to_rows())).collect()
}

impl RepFile {
    pub fn into_rep(self) -> Result<Representation> {
        let (md, q) = parse_header(self.modulus, &self.vertices, &self.arrows)?;
        build("", &q, &md, &self.modules, &self.arrows_maps)
    }

    pub fn from_rep(x: &Representation) -> Self {
        let q = x.quiver();
        RepFile {
            modulus: x.modulus().n(),
            vertices: q.vertices().to_vec(),
            arrows: q.arrows().to_vec(),
            modules: (0..q.num_vertices())
                .map(|v| (q.vertex_name(v).to_string(), x.at(v).factors().to_vec()))
                .collect(),
            arrows_maps: (0..q.num_arrows())
                .map(|a| (q.arrow_id(a).to_string(), x.map(a).matrix().to_rows()))
                .collect(),
        }
    }
}

impl Components {
    fn of(x: &Representation) -> Self {
        let f = RepFile::from_rep(x);
        Components { modules: f.modules, arrows_maps: f.arrows_maps }
    }
}

impl RepFamilyFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::input("representations", e.to_string()))
    }

    /// Builds the representation stored under `name`.
    pub fn get(&self, name: &str) -> Result<Representation> {
        let (md, q) = parse_header(self.modulus, &self.vertices, &self.arrows)?;
        let c = self
            .representations
            .get(name)
            .ok_or_else(|| Error::input(format!("representations.{name}"), "no such representation"))?;
        build(&format!("representations.{name}"), &q, &md, &c.modules, &c.arrows_maps)
    }

    pub fn from_reps(reps: &[(&str, &Representation)]) -> Self {
        let x = reps.first().expect("at least one representation").1;
        let q = x.quiver();
        RepFamilyFile {
            modulus: x.modulus().n(),
            vertices: q.vertices().to_vec(),
            arrows: q.arrows().to_vec(),
            representations: reps.iter().map(|(n, r)| (n.to_string(), Components::of(r))).collect(),
        }
    }
}

impl RepSesFile {
    pub fn into_ses(self) -> Result<RepSES> {
        let (md, q) = parse_header(self.modulus, &self.vertices, &self.arrows)?;
        let x = build("x", &q, &md, &self.x.modules, &self.x.arrows_maps)?;
        let y = build("y", &q, &md, &self.y.modules, &self.y.arrows_maps)?;
        let z = build("z", &q, &md, &self.z.modules, &self.z.arrows_maps)?;
        let comps = |field: &str, src: &Representation, dst: &Representation, m: &BTreeMap<String, Vec<Vec<u64>>>| {
            (0..q.num_vertices())
                .map(|v| {
                    let name = q.vertex_name(v);
                    match m.get(name) {
                        None if src.at(v).is_zero() || dst.at(v).is_zero() => Ok(ModHom::zero(src.at(v), dst.at(v))),
                        None => Err(Error::input(format!("{field}.{name}"), "missing component")),
                        Some(rows) => parse_matrix(&format!("{field}.{name}"), rows, dst.at(v), src.at(v)),
                    }
                })
                .collect::<Result<Vec<_>>>()
        };
        let f = RepMorphism::new(&x, &y, comps("f", &x, &y, &self.f)?).map_err(|e| Error::input("f", e.to_string()))?;
        let g = RepMorphism::new(&y, &z, comps("g", &y, &z, &self.g)?).map_err(|e| Error::input("g", e.to_string()))?;
        RepSES::new(f, g).map_err(|e| Error::input("f/g", e.to_string()))
    }

    pub fn from_ses(s: &RepSES) -> Self {
        let q = s.middle().quiver();
        RepSesFile {
            modulus: s.middle().modulus().n(),
            vertices: q.vertices().to_vec(),
            arrows: q.arrows().to_vec(),
            x: Components::of(s.left()),
            y: Components::of(s.middle()),
            z: Components::of(s.right()),
            f: matrix_map(s.f().comps(), q),
            g: matrix_map(s.g().comps(), q),
        }
    }
}

impl Representation {
    pub fn from_json(s: &str) -> Result<Self> {
        let f: RepFile = serde_json::from_str(s).map_err(|e| Error::input("representation", e.to_string()))?;
        f.into_rep()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RepFile::from_rep(self)).expect("serializable")
    }
}

impl RepSES {
    pub fn from_json(s: &str) -> Result<Self> {
        let f: RepSesFile = serde_json::from_str(s).map_err(|e| Error::input("sequence", e.to_string()))?;
        f.into_ses()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RepSesFile::from_ses(self)).expect("serializable")
    }
}
