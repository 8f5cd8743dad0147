//! Interpolation with a spline basis and quad-mesh export of the resulting
//! parametric surface. Patches are sampled over the unit square.

use super::basis::BasisFile;
use crate::complex::GrDomain;
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::poly::{format_decimal, format_rational, parse_rational, rat, Rational};
use crate::spline::{Spline, SplineBasis};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Interpolation condition: the spline's value at `point` of `face`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub face: usize,
    pub point: Vec<Rational>,
    /// One value per coordinate function.
    pub value: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetRecord {
    pub face: usize,
    pub point: Vec<String>,
    pub value: Vec<String>,
}

pub fn parse_targets(text: &str) -> Result<Vec<Target>> {
    let recs: Vec<TargetRecord> = serde_json::from_str(text).map_err(|e| Error::Format(format!("targets: {e}")))?;
    recs.into_iter()
        .map(|r| {
            Ok(Target {
                face: r.face,
                point: r.point.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
                value: r.value.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            })
        })
        .collect()
}

/// Face centres of the cube sent to (0,0,∓1), (0,∓1,0), (∓1,0,0).
pub fn cube_center_targets() -> Vec<Target> {
    let h = || vec![rat(1, 2), rat(1, 2)];
    let v = |x: i64, y: i64, z: i64| vec![Rational::from_integer(x.into()), Rational::from_integer(y.into()), Rational::from_integer(z.into())];
    vec![
        Target { face: 0, point: h(), value: v(0, 0, -1) },
        Target { face: 1, point: h(), value: v(0, 0, 1) },
        Target { face: 2, point: h(), value: v(0, -1, 0) },
        Target { face: 3, point: h(), value: v(0, 1, 0) },
        Target { face: 4, point: h(), value: v(-1, 0, 0) },
        Target { face: 5, point: h(), value: v(1, 0, 0) },
    ]
}

/// Basis plus one coefficient vector per coordinate function.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub basis: BasisFile,
    pub coefficients: Vec<Vec<String>>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    2
}

impl SurfaceSpec {
    pub fn new(basis: &SplineBasis, coefficients: &[Vec<Rational>], resolution: usize) -> Self {
        Self {
            basis: BasisFile::from_basis(basis),
            coefficients: coefficients.iter().map(|c| c.iter().map(format_rational).collect()).collect(),
            resolution,
        }
    }

    pub fn coefficient_vectors(&self) -> Result<Vec<Vec<Rational>>> {
        self.coefficients.iter().map(|c| c.iter().map(|s| parse_rational(s)).collect()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub coefficients: Vec<Vec<Rational>>,
    pub rank: usize,
    /// Evaluation residuals per target and coordinate (all zero on success).
    pub residuals: Vec<Vec<Rational>>,
    /// True when the interpolant is not unique (free coefficients set to 0).
    pub underdetermined: bool,
}

impl FitResult {
    pub fn residual_is_zero(&self) -> bool {
        self.residuals.iter().flatten().all(|x| x.is_zero())
    }
}

pub fn fit_interpolate(d: &GrDomain, basis: &SplineBasis, targets: &[Target]) -> Result<FitResult> {
    if targets.is_empty() {
        return Err(Error::Interpolation("no targets".into()));
    }
    let ncoord = targets[0].value.len();
    if targets.iter().any(|t| t.value.len() != ncoord) {
        return Err(Error::Interpolation("targets have differing numbers of coordinates".into()));
    }
    let rows: Vec<Vec<Rational>> = targets
        .iter()
        .map(|t| basis.splines.iter().map(|s| s.eval(d, t.face, &t.point)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let e = RationalMatrix::from_rows(rows);
    let rank = e.rank();
    let mut coefficients = Vec::new();
    for k in 0..ncoord {
        let b: Vec<Rational> = targets.iter().map(|t| t.value[k].clone()).collect();
        let c = e.solve(&b).ok_or_else(|| {
            Error::Interpolation(format!(
                "inconsistent system: {} targets, evaluation rank {rank}, basis size {} (coordinate {k})",
                targets.len(),
                basis.len()
            ))
        })?;
        coefficients.push(c);
    }
    let residuals = targets
        .iter()
        .enumerate()
        .map(|(i, t)| (0..ncoord).map(|k| e.mul_vec(&coefficients[k])[i].clone() - &t.value[k]).collect())
        .collect();
    Ok(FitResult { coefficients, rank, residuals, underdetermined: rank < basis.len() })
}

/// Sampled surface: `(res+1)²` vertices per patch and `res²` quads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub vertices: Vec<Vec<Rational>>,
    /// 0-based vertex indices.
    pub quads: Vec<[usize; 4]>,
    pub resolution: usize,
    /// (face id, index of the patch's first vertex).
    pub patches: Vec<(usize, usize)>,
}

impl Mesh {
    /// Vertex of `face` at parameter (i/res, j/res).
    pub fn sample(&self, face: usize, i: usize, j: usize) -> Option<&[Rational]> {
        let (_, off) = self.patches.iter().find(|p| p.0 == face)?;
        self.vertices.get(off + j * (self.resolution + 1) + i).map(|v| v.as_slice())
    }

    pub fn to_text(&self, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {title}: {} patches, resolution {}", self.patches.len(), self.resolution);
        for v in &self.vertices {
            let c: Vec<String> = v.iter().map(format_decimal).collect();
            let _ = writeln!(out, "v {}", c.join(" "));
        }
        for q in &self.quads {
            let _ = writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<(Vec<Vec<Rational>>, Vec<[usize; 4]>)> {
        let mut vs = Vec::new();
        let mut fs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let mut it = line.split_whitespace();
            match it.next() {
                Some("v") => vs.push(it.map(parse_rational).collect::<Result<Vec<_>>>()?),
                Some("f") => {
                    let idx: Vec<usize> = it
                        .map(|s| s.parse::<usize>().map_err(|_| Error::Format(format!("mesh line {}: bad index", ln + 1))))
                        .collect::<Result<_>>()?;
                    if idx.len() != 4 || idx.contains(&0) {
                        return Err(Error::Format(format!("mesh line {}: expected 4 one-based indices", ln + 1)));
                    }
                    fs.push([idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1]);
                }
                _ => {}
            }
        }
        Ok((vs, fs))
    }
}

fn grid(res: usize) -> Vec<Vec<Rational>> {
    let mut pts = Vec::new();
    for j in 0..=res {
        for i in 0..=res {
            pts.push(vec![Rational::new((i as i64).into(), (res as i64).into()), Rational::new((j as i64).into(), (res as i64).into())]);
        }
    }
    pts
}

/// Sample the coordinate splines on every patch.
pub fn export_surface(d: &GrDomain, coords: &[Spline], resolution: usize) -> Result<Mesh> {
    if d.n() != 2 {
        return Err(Error::Interpolation("surface export needs a 2-dimensional domain".into()));
    }
    if resolution == 0 {
        return Err(Error::Interpolation("resolution must be positive".into()));
    }
    let pts = grid(resolution);
    let mut mesh = Mesh { vertices: Vec::new(), quads: Vec::new(), resolution, patches: Vec::new() };
    let w = resolution + 1;
    for &f in d.complex.top_faces() {
        let off = mesh.vertices.len();
        mesh.patches.push((f, off));
        for p in &pts {
            mesh.vertices.push(coords.iter().map(|s| s.eval(d, f, p)).collect::<Result<_>>()?);
        }
        for j in 0..resolution {
            for i in 0..resolution {
                let a = off + j * w + i;
                mesh.quads.push([a, a + 1, a + w + 1, a + w]);
            }
        }
    }
    Ok(mesh)
}

pub fn export_from_spec(d: &GrDomain, spec: &SurfaceSpec) -> Result<Mesh> {
    let basis = spec.basis.to_basis(d)?;
    let coords = spec
        .coefficient_vectors()?
        .iter()
        .map(|c| basis.combine(c))
        .collect::<Result<Vec<_>>>()?;
    export_surface(d, &coords, spec.resolution)
}

/// Interface samples where the two sides of an interior edge disagree:
/// grid points p of the target face with ℓ(p) = 0, compared with the source
/// piece at lift(p). Returns (edge, target point) pairs.
pub fn interface_mismatches(d: &GrDomain, s: &Spline, resolution: usize) -> Result<Vec<(usize, Vec<Rational>)>> {
    let mut bad = Vec::new();
    let nv = d.space.nvars();
    for (&t, tm) in &d.transitions {
        let l = d.generator(t, tm.target).unwrap();
        let tb = d.block(tm.target);
        for p in grid(resolution) {
            let mut full = vec![Rational::zero(); nv];
            for (k, i) in tb.clone().enumerate() {
                full[i] = p[k].clone();
            }
            if !l.eval(&full).is_zero() {
                continue;
            }
            let q: Vec<Rational> = tm.lift.iter().map(|f| f.eval(&full)).collect();
            if s.eval(d, tm.target, &p)? != s.eval(d, tm.source, &q)? {
                bad.push((t, p));
            }
        }
    }
    Ok(bad)
}
