//! JSON domain files.
//!
//! Two layouts are accepted. The explicit one lists every cell with its
//! signed boundary and gives ideal generators and lifts per facet:
//!
//! ```json
//! { "name": "two", "n": 2, "r": 1,
//!   "faces": [ {"0": [], ...}, {"0": [[0,-1],[1,1]], ...}, {"0": [[0,1], ...]} ],
//!   "facets": { "0": { "ideals": {"0": "u0_2", "1": "u1_2"},
//!                      "transition": {"source": 0, "target": 1, "lift": ["-u1_2", "..."]} } } }
//! ```
//!
//! The quad layout lists counter-clockwise corner lists and gluing data,
//! either per edge (keyed "a-b" by vertex ids) or as a default:
//!
//! ```json
//! { "n": 2, "r": 1, "quads": [[0,1,2,3],[1,0,4,5]], "gluing": {"symmetric": [3,4]} }
//! ```

use crate::complex::fixtures;
use crate::complex::{
    symmetric_gluing, symmetric_gluing_with, CellComplex, FaceIdeal, FrameConvention, GluingData, GrDomain, QuadMesh,
    TransitionMap,
};
use crate::error::{Error, Result};
use crate::poly::{parse_rational, GradingKind, Polynomial, VariableSpace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingKind>,
    /// Explicit layout: per dimension, id → signed boundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<BTreeMap<String, Vec<(usize, i64)>>>>,
    /// Quad layout: corner lists, face id = position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quads: Option<Vec<[usize; 4]>>,
    /// "inward" (default) or "outward" relative frames for the quad layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<String>,
    /// Default gluing for interior edges of the quad layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facets: BTreeMap<String, FacetSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reverse: BTreeMap<String, TransitionSpec>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FacetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideals: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<TransitionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub source: usize,
    pub target: usize,
    pub lift: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GluingSpec {
    Explicit { a: String, b: String },
    /// Valences (w, w′).
    Symmetric { symmetric: [u32; 2] },
    /// Rational stand-ins for 2cos(2π/w), 2cos(2π/w′).
    Surrogate { symmetric_values: [String; 2] },
}

impl GluingSpec {
    pub fn to_gluing(&self) -> Result<GluingData> {
        match self {
            GluingSpec::Explicit { a, b } => GluingData::parse(a, b),
            GluingSpec::Symmetric { symmetric: [w, w2] } => symmetric_gluing(*w, *w2),
            GluingSpec::Surrogate { symmetric_values: [c, c2] } => {
                Ok(symmetric_gluing_with(parse_rational(c)?, parse_rational(c2)?))
            }
        }
    }
}

fn key(k: &str, what: &str) -> Result<usize> {
    k.trim().parse().map_err(|_| Error::Format(format!("{what} key `{k}` is not a face id")))
}

fn poly(text: &str, space: &Arc<VariableSpace>, ctx: &str) -> Result<Polynomial> {
    Polynomial::parse(text, space).map_err(|e| Error::Format(format!("{ctx}: {e}")))
}

fn transition(t: &TransitionSpec, facet: usize, r: u32, space: &Arc<VariableSpace>) -> Result<TransitionMap> {
    let lift = t
        .lift
        .iter()
        .enumerate()
        .map(|(i, s)| poly(s, space, &format!("facet {facet}: lift[{i}]")))
        .collect::<Result<_>>()?;
    Ok(TransitionMap { source: t.source, target: t.target, facet, r, lift })
}

impl DomainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_domain(&self) -> Result<GrDomain> {
        let d = match (&self.faces, &self.quads) {
            (Some(_), Some(_)) => return Err(Error::Format("give either `faces` or `quads`, not both".into())),
            (None, None) => return Err(Error::Format("missing `faces` (or `quads`)".into())),
            (Some(faces), None) => self.explicit(faces)?,
            (None, Some(quads)) => self.quad(quads)?,
        };
        d.ensure_compatible()?;
        Ok(d)
    }

    fn explicit(&self, faces: &[BTreeMap<String, Vec<(usize, i64)>>]) -> Result<GrDomain> {
        let n = self.n;
        if faces.len() != n + 1 {
            return Err(Error::Format(format!("`faces` must have {} entries (dimensions 0..={n})", n + 1)));
        }
        let mut c = CellComplex::new(n);
        for (k, m) in faces.iter().enumerate() {
            for (id, b) in m {
                c.add_face(k, key(id, &format!("faces[{k}]"))?, b.clone());
            }
        }
        crate::complex::validate_complex(&c)?;
        let space = GrDomain::space_for(&c);
        let mut ideals = BTreeMap::new();
        let mut transitions = BTreeMap::new();
        for (k, f) in &self.facets {
            let t = key(k, "facets")?;
            if f.gluing.is_some() {
                return Err(Error::Format(format!("facet {t}: gluing shorthand needs the quad layout")));
            }
            if let Some(ids) = &f.ideals {
                let mut gens = BTreeMap::new();
                for (s, g) in ids {
                    gens.insert(key(s, &format!("facet {t} ideals"))?, poly(g, &space, &format!("facet {t}: ideal in face {s}"))?);
                }
                ideals.insert(t, FaceIdeal { facet: t, generators: gens });
            }
            if let Some(tr) = &f.transition {
                transitions.insert(t, transition(tr, t, self.r, &space)?);
            }
        }
        for t in c.interior_faces(n - 1) {
            if !transitions.contains_key(&t) {
                let cf: Vec<usize> = c.cofaces(n - 1, t).into_iter().map(|x| x.0).collect();
                return Err(Error::Format(format!(
                    "interior {} {t} (between faces {} and {}) is missing its transition",
                    if n == 2 { "edge" } else { "facet" },
                    cf[0],
                    cf[1]
                )));
            }
        }
        let mut d = GrDomain::new(self.name.clone().unwrap_or_else(|| "domain".into()), c, self.r, ideals, transitions)?;
        self.add_reverse(&mut d)?;
        Ok(d)
    }

    fn add_reverse(&self, d: &mut GrDomain) -> Result<()> {
        for (k, tr) in &self.reverse {
            let t = key(k, "reverse")?;
            d.reverse.insert(t, transition(tr, t, self.r, &d.space)?);
        }
        Ok(())
    }

    fn quad(&self, quads: &[[usize; 4]]) -> Result<GrDomain> {
        if self.n != 2 {
            return Err(Error::Format("the quad layout needs n = 2".into()));
        }
        let nv = quads.iter().flatten().max().map_or(0, |m| m + 1);
        let mesh = QuadMesh::new(nv, quads.to_vec());
        let conv = match self.frames.as_deref() {
            None | Some("inward") => FrameConvention::Inward,
            Some("outward") => FrameConvention::Outward,
            Some(o) => return Err(Error::Format(format!("unknown frame convention `{o}`"))),
        };
        let mut per_edge: BTreeMap<(usize, usize), &FacetSpec> = BTreeMap::new();
        for (k, f) in &self.facets {
            let (a, b) = k
                .split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::Format(format!("quad layout: facet key `{k}` must be `a-b` (vertex ids)")))?;
            if mesh.edge_id(a, b).is_none() {
                return Err(Error::Format(format!("facet `{k}` is not an edge of the mesh")));
            }
            per_edge.insert((a.min(b), a.max(b)), f);
        }
        let edges = mesh.edges();
        let mut d = mesh.build_domain(self.name.as_deref().unwrap_or("domain"), self.r, conv, None, |ctx| {
            let (a, b) = edges[ctx.edge];
            let spec = per_edge.get(&(a, b));
            if let Some(g) = spec.and_then(|f| f.gluing.as_ref()).or(self.gluing.as_ref()) {
                return g.to_gluing();
            }
            if spec.is_some_and(|f| f.transition.is_some()) {
                return GluingData::parse("0", "-1");
            }
            Err(Error::Format(format!("interior edge {a}-{b} (between faces {} and {}) is missing its transition", ctx.source, ctx.target)))
        })?;
        for ((a, b), f) in per_edge {
            let e = mesh.edge_id(a, b).unwrap();
            if let Some(ids) = &f.ideals {
                let fi = d.ideals.entry(e).or_insert(FaceIdeal { facet: e, generators: BTreeMap::new() });
                for (s, g) in ids {
                    fi.generators.insert(key(s, &format!("edge {a}-{b} ideals"))?, poly(g, &d.space, &format!("edge {a}-{b}"))?);
                }
            }
            if let Some(tr) = &f.transition {
                let t = transition(tr, e, self.r, &d.space)?;
                d.transitions.insert(e, t);
            }
        }
        d.check_structure()?;
        self.add_reverse(&mut d)?;
        Ok(d)
    }

    /// Explicit-layout description of a domain.
    pub fn from_domain(d: &GrDomain) -> Self {
        let c = &d.complex;
        let faces = (0..=c.n)
            .map(|k| c.faces[k].iter().map(|&id| (id.to_string(), c.face_boundary(k, id).to_vec())).collect())
            .collect();
        let tr = |t: &TransitionMap| TransitionSpec {
            source: t.source,
            target: t.target,
            lift: t.lift.iter().map(|p| p.to_string()).collect(),
        };
        let mut facets = BTreeMap::new();
        let ids: std::collections::BTreeSet<usize> = d.ideals.keys().chain(d.transitions.keys()).copied().collect();
        for t in ids {
            facets.insert(
                t.to_string(),
                FacetSpec {
                    ideals: d
                        .ideals
                        .get(&t)
                        .map(|fi| fi.generators.iter().map(|(s, g)| (s.to_string(), g.to_string())).collect()),
                    transition: d.transitions.get(&t).map(tr),
                    gluing: None,
                },
            );
        }
        DomainFile {
            name: Some(d.name.clone()),
            n: d.n(),
            r: d.r,
            grading: None,
            faces: Some(faces),
            quads: None,
            frames: None,
            gluing: None,
            facets,
            reverse: d.reverse.iter().map(|(t, m)| (t.to_string(), tr(m))).collect(),
        }
    }
}

/// Parse a domain from JSON text.
pub fn parse_domain_str(text: &str) -> Result<GrDomain> {
    DomainFile::from_json(text)?.to_domain()
}

/// Load a domain file, or a fixture given as `builtin:<name>`.
pub fn parse_domain(path: impl AsRef<Path>) -> Result<GrDomain> {
    load_domain(path, None)
}

/// Like [`parse_domain`]; `r` overrides the file's smoothness.
pub fn load_domain(path: impl AsRef<Path>, r: Option<u32>) -> Result<GrDomain> {
    let p = path.as_ref().to_string_lossy().to_string();
    if let Some(name) = p.strip_prefix("builtin:") {
        return fixtures::builtin(name, r.unwrap_or(1));
    }
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Format(format!("{p}: {e}")))?;
    let mut f = DomainFile::from_json(&text).map_err(|e| Error::Format(format!("{p}: {e}")))?;
    if let Some(r) = r {
        if r != f.r {
            if f.quads.is_some() && f.facets.values().all(|x| x.transition.is_none()) {
                // gluing shorthand: rebuild at the requested order
                f.r = r;
            } else {
                return f.to_domain()?.with_smoothness(r);
            }
        }
    }
    f.to_domain()
}

pub fn serialize_domain(d: &GrDomain) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DomainFile::from_domain(d))?)
}

/// Default grading recorded in a domain file, if any.
pub fn file_grading(path: impl AsRef<Path>) -> Option<GradingKind> {
    let text = std::fs::read_to_string(path).ok()?;
    DomainFile::from_json(&text).ok()?.grading
}
