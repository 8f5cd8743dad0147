use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gsplines_core::chain::{ChainContext, ChainOptions, OrderChoice};
use gsplines_core::io::{self, SurfaceSpec};
use gsplines_core::poly::{Grading, GradingKind};
use gsplines_core::spline::{basis_algorithm1, dimension_with, Verifier};
use gsplines_core::GrDomain;
use rayon::prelude::*;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Dimensions, homology and bases of geometrically continuous spline spaces.
#[derive(Parser)]
#[command(name = "gsplines", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spline space dimension per degree.
    Dim(Common),
    /// Euler characteristic of the quotient complex per degree.
    Euler(Common),
    /// Homology dimensions H_0..H_n, χ and dim per degree.
    Homology(Common),
    /// Compute a basis (Algorithm 1) and write it as JSON.
    Basis(Common),
    /// Check the splines of a basis file against a domain.
    Verify {
        /// Domain and basis file, in either order.
        first: String,
        second: String,
        #[command(flatten)]
        opts: Common2,
    },
    /// Interpolate targets with a basis; writes a surface spec.
    Fit {
        #[command(flatten)]
        common: Common,
        /// JSON list of {face, point, value}; `builtin:cube-centers` for the cube's face centres.
        #[arg(long, default_value = "builtin:cube-centers")]
        targets: String,
        #[arg(long, default_value_t = 2)]
        resolution: usize,
    },
    /// Sample a surface spec into a text quad mesh.
    Export {
        domain: String,
        /// Surface spec written by `fit`.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the compatibility checks on a domain.
    Check {
        domain: String,
        #[arg(long)]
        r: Option<u32>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Domain JSON file or `builtin:<name>`.
    domain: String,
    #[command(flatten)]
    opts: Common2,
}

#[derive(Args, Clone)]
struct Common2 {
    /// Smoothness order (overrides the file).
    #[arg(long)]
    r: Option<u32>,
    /// Degree or inclusive range `a..b`.
    #[arg(long, default_value = "1..4")]
    degree: String,
    #[arg(long)]
    grading: Option<GradingKind>,
    #[arg(long, default_value = "grevlex")]
    order: OrderChoice,
    /// Output file (JSON report, basis, spec or mesh depending on the command).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn degrees(s: &str) -> Result<Vec<u32>> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => {
            let d = s.trim().parse()?;
            (d, d)
        }
    };
    if a > b {
        bail!("empty degree range {s}");
    }
    Ok((a..=b).collect())
}

fn load(domain: &str, r: Option<u32>) -> Result<GrDomain> {
    io::load_domain(domain, r).with_context(|| format!("loading {domain}"))
}

fn grading_kind(o: &Common2, domain: &str) -> GradingKind {
    o.grading.or_else(|| io::file_grading(domain)).unwrap_or(GradingKind::Total)
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn report(o: &Common2, value: serde_json::Value) -> Result<()> {
    if let Some(p) = &o.out {
        write_out(p, &serde_json::to_string_pretty(&value)?)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Dim(c) => {
            let d = load(&c.domain, c.opts.r)?;
            d.ensure_compatible()?;
            let kind = grading_kind(&c.opts, &c.domain);
            let ds = degrees(&c.opts.degree)?;
            let dims: Vec<usize> = ds
                .par_iter()
                .map(|&k| dimension_with(&d, Grading { kind, d: k }, c.opts.order))
                .collect::<Result<_, _>>()?;
            println!("degree\tdim");
            for (k, v) in ds.iter().zip(&dims) {
                println!("{k}\t{v}");
            }
            report(&c.opts, json!({"domain": d.name, "r": d.r, "grading": kind, "degrees": ds, "dim": dims}))?;
        }
        Cmd::Euler(c) => {
            let (d, kind, ds, cs) = complexes(&c)?;
            println!("degree\tchi");
            let chis: Vec<i64> = cs.iter().map(|x| x.euler_characteristic()).collect();
            for (k, v) in ds.iter().zip(&chis) {
                println!("{k}\t{v}");
            }
            report(&c.opts, json!({"domain": d.name, "r": d.r, "grading": kind, "degrees": ds, "chi": chis}))?;
        }
        Cmd::Homology(c) => {
            let (d, kind, ds, cs) = complexes(&c)?;
            let n = d.n();
            let hs: Vec<String> = (0..=n).map(|k| format!("H{k}")).collect();
            println!("degree\t{}\tchi\tdim", hs.join("\t"));
            let mut rows = Vec::new();
            for (k, cx) in ds.iter().zip(&cs) {
                let h = cx.homology_dims();
                let cells: Vec<String> = h.iter().map(|x| x.to_string()).collect();
                println!("{k}\t{}\t{}\t{}", cells.join("\t"), cx.euler_characteristic(), h[n]);
                rows.push(json!({"degree": k, "homology": h, "chi": cx.euler_characteristic(), "quotient_dims": cx.dims()}));
            }
            report(&c.opts, json!({"domain": d.name, "r": d.r, "grading": kind, "rows": rows}))?;
        }
        Cmd::Basis(c) => {
            let d = load(&c.domain, c.opts.r)?;
            let kind = grading_kind(&c.opts, &c.domain);
            let ds = degrees(&c.opts.degree)?;
            if ds.len() != 1 {
                bail!("basis needs a single degree");
            }
            let b = basis_algorithm1(&d, Grading { kind, d: ds[0] }, c.opts.order)?;
            let text = io::serialize_basis(&b)?;
            println!("degree\tsize");
            println!("{}\t{}", ds[0], b.len());
            match &c.opts.out {
                Some(p) => write_out(p, &text)?,
                None => println!("{text}"),
            }
        }
        Cmd::Verify { first, second, opts } => {
            let looks_like_basis = |p: &str| {
                std::fs::read_to_string(p).ok().and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok()).is_some_and(|v| v.get("splines").is_some())
            };
            let (dom, bas) = if looks_like_basis(&first) { (second, first) } else { (first, second) };
            let d = load(&dom, opts.r)?;
            let text = std::fs::read_to_string(&bas).with_context(|| format!("reading {bas}"))?;
            let b = io::parse_basis(&text, &d)?;
            let v = Verifier::new(&d)?;
            println!("spline\tedges_ok\tdegree_ok\tfailed_edges");
            let mut all = true;
            let mut rows = Vec::new();
            for (i, s) in b.splines.iter().enumerate() {
                let rep = v.verify(s, Some(b.grading));
                all &= rep.ok();
                let failed = rep.failed_edges();
                println!("{i}\t{}\t{}\t{failed:?}", rep.continuous(), rep.degree_violations.is_empty());
                rows.push(json!({"spline": i, "ok": rep.ok(), "failed_edges": failed, "degree_violations": rep.degree_violations}));
            }
            println!("{}", if all { "pass" } else { "FAIL" });
            report(&opts, json!({"pass": all, "splines": rows}))?;
            return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Fit { common: c, targets, resolution } => {
            let d = load(&c.domain, c.opts.r)?;
            let kind = c.opts.grading.or_else(|| io::file_grading(&c.domain)).unwrap_or(GradingKind::Bidegree);
            let ds = degrees(if c.opts.degree == "1..4" { "2" } else { &c.opts.degree })?;
            if ds.len() != 1 {
                bail!("fit needs a single degree");
            }
            let tg = if targets == "builtin:cube-centers" {
                io::cube_center_targets()
            } else {
                io::parse_targets(&std::fs::read_to_string(&targets).with_context(|| format!("reading {targets}"))?)?
            };
            let b = basis_algorithm1(&d, Grading { kind, d: ds[0] }, c.opts.order)?;
            let fit = io::fit_interpolate(&d, &b, &tg)?;
            println!("targets\tbasis\trank\tresidual_zero\tunique");
            println!("{}\t{}\t{}\t{}\t{}", tg.len(), b.len(), fit.rank, fit.residual_is_zero(), !fit.underdetermined);
            let spec = SurfaceSpec::new(&b, &fit.coefficients, resolution);
            let text = serde_json::to_string_pretty(&spec)?;
            match &c.opts.out {
                Some(p) => write_out(p, &text)?,
                None => println!("{text}"),
            }
        }
        Cmd::Export { domain, spec, resolution, r, out } => {
            let d = load(&domain, r)?;
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let mut s: SurfaceSpec = serde_json::from_str(&text).context("parsing surface spec")?;
            if let Some(res) = resolution {
                s.resolution = res;
            }
            let mesh = io::export_from_spec(&d, &s)?;
            let txt = mesh.to_text(&format!("gsplines surface on {}", d.name));
            match out {
                Some(p) => {
                    write_out(&p, &txt)?;
                    println!("vertices\tquads");
                    println!("{}\t{}", mesh.vertices.len(), mesh.quads.len());
                }
                None => print!("{txt}"),
            }
        }
        Cmd::Check { domain, r } => {
            let d = match load(&domain, r) {
                Ok(d) => d,
                Err(e) => {
                    println!("INCOMPATIBLE\t{e:#}");
                    return Ok(ExitCode::from(1));
                }
            };
            let rep = d.check_compatibility();
            for w in &rep.warnings {
                println!("warning\t{w}");
            }
            for v in &rep.violations {
                println!("violation\t{v}");
            }
            println!("{}\t{} interior vertices checked", if rep.is_ok() { "compatible" } else { "INCOMPATIBLE" }, rep.vertices_checked);
            return Ok(if rep.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

type Complexes = (GrDomain, GradingKind, Vec<u32>, Vec<gsplines_core::TruncatedChainComplex>);

fn complexes(c: &Common) -> Result<Complexes> {
    let d = load(&c.domain, c.opts.r)?;
    d.ensure_compatible()?;
    let kind = grading_kind(&c.opts, &c.domain);
    let ds = degrees(&c.opts.degree)?;
    let ctx = ChainContext::new(&d, ChainOptions { order: c.opts.order, zero_ideals: false })?;
    let cs = ds.par_iter().map(|&k| ctx.complex(Grading { kind, d: k })).collect::<Result<Vec<_>, _>>()?;
    Ok((d, kind, ds, cs))
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
