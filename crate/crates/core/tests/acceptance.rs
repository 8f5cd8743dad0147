//! Acceptance run: one PASS/FAIL line per criterion, all comparisons exact.
//!
//! Points where a published closed form disagrees with the computed space
//! are listed in `KNOWN`; they still print as FAIL but do not fail the run.

use gsplines_core::chain::{q_basis, t_span, ChainContext, ChainOptions, OrderChoice, TruncatedChainComplex};
use gsplines_core::complex::fixtures::{builtin, cube, cube_flipped_b, cube_from_mesh, flipped_cube_mesh, two_patch, two_simplices, CubeVariant};
use gsplines_core::complex::{symmetric_gluing, GluingData};
use gsplines_core::formulas::{bss_reference_dim, closed_form_star, closed_form_two_patch, two_patch_j_basis};
use gsplines_core::io::{cube_center_targets, export_surface, fit_interpolate};
use gsplines_core::poly::{int, rat, Grading, GradingKind, Monomial, MonomialOrder, Polynomial, Rational};
use gsplines_core::spline::{algorithm1_system, basis_algorithm1, dimension, Verifier};
use gsplines_core::{buchberger, GrDomain, RationalMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Debug;
use std::time::Instant;

use GradingKind::{Bidegree, Total};

/// The constant-𝔞 bidegree formulas are stated for d ≥ 0, but at d = 0 the
/// only (d,d) polynomials are constants: dim G = 1 (formula 0) and
/// dim Q(τ) = 1 (formula 2).
const KNOWN: &[&str] = &[
    "two-patch a=0 bidegree d=0",
    "two-patch a=1 bidegree d=0",
    "Q(tau) a=0 bidegree d=0",
    "Q(tau) a=1 bidegree d=0",
];

struct Check {
    id: u32,
    name: &'static str,
    count: usize,
    bad: Vec<String>,
}

impl Check {
    fn new(id: u32, name: &'static str) -> Self {
        Self { id, name, count: 0, bad: Vec::new() }
    }

    fn eq<T: PartialEq + Debug>(&mut self, label: impl Into<String>, got: T, want: T) {
        self.count += 1;
        if got != want {
            self.bad.push(format!("{}: got {got:?}, want {want:?}", label.into()));
        }
    }

    fn ok(&mut self, label: impl Into<String>, cond: bool) {
        self.eq(label, cond, true);
    }

    fn unexpected(&self) -> Vec<&String> {
        self.bad.iter().filter(|b| !KNOWN.iter().any(|k| b.starts_with(&format!("{k}:")))).collect()
    }

    fn report(&self, secs: f64) -> bool {
        if self.bad.is_empty() {
            println!("PASS {} {} — {} exact comparisons ({secs:.1}s)", self.id, self.name, self.count);
            return true;
        }
        let unexpected = self.unexpected();
        println!(
            "FAIL {} {} — {} of {} comparisons differ{} ({secs:.1}s)",
            self.id,
            self.name,
            self.bad.len(),
            self.count,
            if unexpected.is_empty() { ", all at known points" } else { "" }
        );
        for b in &self.bad {
            let tag = if unexpected.contains(&b) { "unexpected" } else { "known" };
            println!("     [{tag}] {b}");
        }
        unexpected.is_empty()
    }
}

fn tag(k: GradingKind) -> &'static str {
    match k {
        Total => "total",
        Bidegree => "bidegree",
    }
}

fn grading(kind: GradingKind, d: u32) -> Grading {
    Grading { kind, d }
}

fn ctx(d: &GrDomain) -> ChainContext {
    ChainContext::new(d, ChainOptions::default()).expect("chain context")
}

fn cplx(c: &ChainContext, kind: GradingKind, d: u32) -> TruncatedChainComplex {
    c.complex(grading(kind, d)).expect("complex")
}

fn alt_sum(c: &TruncatedChainComplex) -> i64 {
    let n = c.dims().len() - 1;
    c.homology_dims().iter().enumerate().map(|(k, &h)| if (n - k) % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
}

fn c1_table() -> Check {
    let mut c = Check::new(1, "cube Table 1 (both 𝔞 sign variants)");
    let total = [(1, 1, -6), (2, 1, -12), (3, 1, -12), (4, 6, -6), (5, 18, 6), (6, 36, 24)];
    let bideg = [(1, 1, 0), (2, 6, 6), (3, 24, 24), (4, 54, 54), (5, 96, 96)];
    for (name, v) in [("a=2u-1", CubeVariant::Standard), ("a=-2u+1", CubeVariant::Reflected)] {
        let d = cube(v, 1).unwrap();
        let cx = ctx(&d);
        for (kind, rows) in [(Total, &total[..]), (Bidegree, &bideg[..])] {
            for &(k, dim, chi) in rows {
                let g = grading(kind, k);
                c.eq(format!("{name} {} d={k} dim", tag(kind)), dimension(&d, g).unwrap(), dim);
                c.eq(format!("{name} {} d={k} chi", tag(kind)), cplx(&cx, kind, k).euler_characteristic(), chi);
            }
        }
    }
    c
}

fn two_patch_fixtures() -> Vec<(String, GluingData, bool)> {
    vec![
        ("a=0".into(), symmetric_gluing(4, 4).unwrap(), true),
        ("a=1".into(), GluingData::parse("1", "-1").unwrap(), true),
        ("a=2u-1".into(), symmetric_gluing(3, 3).unwrap(), false),
        ("(3,4)".into(), symmetric_gluing(3, 4).unwrap(), false),
    ]
}

fn c2_two_patch() -> Check {
    let mut c = Check::new(2, "two-patch closed forms, d_𝔞 ∈ {0,1,2}");
    let mut seen = BTreeSet::new();
    for (name, g, constant) in two_patch_fixtures() {
        let da = g.deg_a();
        seen.insert(da);
        let d = two_patch(&g, 1).unwrap();
        for kind in [Total, Bidegree] {
            let lo = if constant { 0 } else if kind == Total { da + 1 } else { da };
            for k in lo..=8 {
                let want = closed_form_two_patch(da, k, kind, constant).unwrap();
                let got = dimension(&d, grading(kind, k)).unwrap() as i64;
                c.eq(format!("two-patch {name} {} d={k}", tag(kind)), got, want);
            }
        }
    }
    c.eq("covered deg 𝔞", seen, BTreeSet::from([0, 1, 2]));
    let ex = two_patch(&symmetric_gluing(3, 4).unwrap(), 1).unwrap();
    c.eq("example (3,4) total d=3", dimension(&ex, Grading::total(3)).unwrap(), 11);
    c.eq("example (3,4) bidegree d=3", dimension(&ex, Grading::bidegree(3)).unwrap(), 23);
    c
}

/// (builtin, s, deg 𝔞, 𝔞 ≡ 0)
const STARS: &[(&str, u32, u32, bool)] =
    &[("star3", 3, 2, false), ("star4", 4, 0, true), ("star4_w3", 4, 2, false), ("star5", 5, 2, false), ("star6", 6, 2, false)];

fn c3_star() -> Check {
    let mut c = Check::new(3, "vertex-star formulas");
    for &(name, s, da, zero) in STARS {
        let d = builtin(name, 1).unwrap();
        let cx = ctx(&d);
        for kind in [Total, Bidegree] {
            for k in 0..=8 {
                let Ok(f) = closed_form_star(s, da, k, kind, zero) else { continue };
                let cc = cplx(&cx, kind, k);
                c.eq(format!("{name} {} d={k} chi", tag(kind)), cc.euler_characteristic(), f.value);
                if f.exact {
                    c.eq(format!("{name} {} d={k} dim=chi", tag(kind)), cc.spline_dim() as i64, f.value);
                }
                if name == "star3" {
                    let lo = if kind == Total { 4 } else { 3 };
                    if k >= lo {
                        let dk = k as i64;
                        let want = if kind == Total { 3 * (dk * dk - dk - 2) / 2 } else { 3 * dk * dk - 3 };
                        c.eq(format!("star3 example {} d={k}", tag(kind)), cc.spline_dim() as i64, want);
                    }
                }
            }
        }
    }
    let d = builtin("star3", 1).unwrap();
    c.eq("star3 dimension() total d=5", dimension(&d, Grading::total(5)).unwrap(), 27);
    c
}

fn j_basis_checks(c: &mut Check, name: &str, g: &GluingData, kind: GradingKind, k: u32) {
    let da = g.deg_a();
    let (t, list) = two_patch_j_basis(g, k, kind).unwrap();
    let s = t.space.clone();
    let x = |i: usize| Polynomial::var(&s, i);
    let order = MonomialOrder::grevlex(s.nvars());
    let gens = vec![&x(0) - &t.images[0], &x(1) - &t.images[1], t.source_ideal.pow(2), t.target_ideal.pow(2)];
    let gb = buchberger(&gens, &order).unwrap();
    let want = if kind == Total { k * k + k - da } else { 2 * k * k + 2 * k - da };
    let label = format!("J-basis {name} {} d={k}", tag(kind));
    c.eq(format!("{label} size"), list.len(), want as usize);
    c.ok(format!("{label} membership"), list.iter().all(|p| gb.contains(p)));
    let span = t_span(&s, &[1, 2], grading(kind, k), &order).unwrap();
    let inside: BTreeSet<&Monomial> = span.iter().collect();
    c.ok(format!("{label} within T_d"), list.iter().all(|p| p.terms().all(|(m, _)| inside.contains(m))));
    let rows: Vec<Vec<Rational>> = list.iter().map(|p| span.iter().map(|m| p.coefficient(m)).collect()).collect();
    c.eq(format!("{label} rank"), RationalMatrix::from_rows(rows).rank(), list.len());
    c.eq(format!("{label} spans J"), q_basis(1, 0, span, &gb).kernel_dim, list.len());
}

fn c4_quotients() -> Check {
    let mut c = Check::new(4, "quotient dimensions and J-bases");
    for (name, g, constant) in two_patch_fixtures() {
        let da = g.deg_a();
        let cx = ctx(&two_patch(&g, 1).unwrap());
        for kind in [Total, Bidegree] {
            let lo = if constant { 0 } else if kind == Total { da + 1 } else { da };
            for k in lo..=8 {
                let want = match (constant, kind) {
                    (true, Bidegree) => 2 * k + 2,
                    _ => 2 * k + da + 1,
                };
                c.eq(format!("Q(tau) {name} {} d={k}", tag(kind)), cplx(&cx, kind, k).dims()[1], want as usize);
                if !constant {
                    j_basis_checks(&mut c, &name, &g, kind, k);
                }
            }
        }
    }
    for &(name, s, _, _) in STARS {
        let cx = ctx(&builtin(name, 1).unwrap());
        let want = if s == 4 { 4 } else { 3 };
        for kind in [Total, Bidegree] {
            let lo = match (s == 4, kind) {
                (true, Total) => 2,
                _ => 1,
            };
            for k in lo..=8 {
                c.eq(format!("Q(gamma) {name} {} d={k}", tag(kind)), cplx(&cx, kind, k).dims()[0], want);
            }
        }
    }
    c
}

fn c5_homology() -> Check {
    let mut c = Check::new(5, "homology");
    for (name, g, _) in two_patch_fixtures() {
        let cx = ctx(&two_patch(&g, 1).unwrap());
        for kind in [Total, Bidegree] {
            for k in 0..=8 {
                let cc = cplx(&cx, kind, k);
                let h = cc.homology_dims();
                c.eq(format!("two-patch {name} {} d={k} H0,H1", tag(kind)), (h[0], h[1]), (0, 0));
                c.eq(format!("two-patch {name} {} d={k} sum", tag(kind)), alt_sum(&cc), cc.euler_characteristic());
            }
        }
    }
    for &(name, ..) in STARS {
        let cx = ctx(&builtin(name, 1).unwrap());
        for kind in [Total, Bidegree] {
            for k in 0..=8 {
                let cc = cplx(&cx, kind, k);
                let h = cc.homology_dims();
                c.eq(format!("{name} {} d={k} H0", tag(kind)), h[0], 0);
                if k >= if kind == Total { 4 } else { 3 } {
                    c.eq(format!("{name} {} d={k} H1", tag(kind)), h[1], 0);
                }
                c.eq(format!("{name} {} d={k} sum", tag(kind)), alt_sum(&cc), cc.euler_characteristic());
            }
        }
    }
    let cube = cube(CubeVariant::Standard, 1).unwrap();
    let cx = ctx(&cube);
    for k in 0..=6 {
        let cc = cplx(&cx, Total, k);
        if k >= 4 {
            c.eq(format!("cube total d={k} dim-chi"), cc.spline_dim() as i64 - cc.euler_characteristic(), 12);
        }
        c.eq(format!("cube total d={k} sum"), alt_sum(&cc), cc.euler_characteristic());
    }
    for k in 0..=5 {
        let cc = cplx(&cx, Bidegree, k);
        c.eq(format!("cube bidegree d={k} sum"), alt_sum(&cc), cc.euler_characteristic());
    }
    for name in ["circle", "sphere"] {
        let cx = ctx(&builtin(name, 1).unwrap());
        for k in 0..=5 {
            let cc = cplx(&cx, Total, k);
            c.eq(format!("{name} total d={k} sum"), alt_sum(&cc), cc.euler_characteristic());
        }
    }
    c
}

fn c6_simplices() -> Check {
    let mut c = Check::new(6, "two simplices against C^r counts");
    for r in 0..=2 {
        let d = two_simplices(2, r).unwrap();
        for k in 0..=6 {
            c.eq(format!("r={r} d={k}"), dimension(&d, Grading::total(k)).unwrap(), bss_reference_dim(2, r, k));
        }
    }
    c
}

fn random_poly(rng: &mut ChaCha8Rng, d: &GrDomain, blocks: &[usize]) -> Polynomial {
    let vars: Vec<usize> = blocks.iter().flat_map(|&f| d.block(f)).collect();
    let mut p = Polynomial::zero(&d.space);
    for _ in 0..rng.gen_range(1..=6) {
        let mut e = vec![0u32; d.space.nvars()];
        for _ in 0..rng.gen_range(0..=4) {
            e[vars[rng.gen_range(0..vars.len())]] += 1;
        }
        p.add_term(Monomial::from_exponents(e), rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
    }
    p
}

fn c7_structure() -> Check {
    let mut c = Check::new(7, "structural suite");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for name in ["two_patch_34", "star3", "star4", "cube", "circle", "sphere"] {
        let d = builtin(name, 1).unwrap();
        let cx = ctx(&d);
        let kinds: &[(GradingKind, u32)] = if d.n() == 1 { &[(Total, 5)] } else { &[(Total, 4), (Bidegree, 3)] };
        for &(kind, top) in kinds {
            for k in 0..=top {
                c.ok(format!("{name} {} d={k} δδ=0", tag(kind)), cplx(&cx, kind, k).delta_squared_zero());
            }
            let g = grading(kind, top);
            let order = OrderChoice::Grevlex.order(d.space.nvars());
            let sys = algorithm1_system(&d, g, &order).unwrap();
            let basis = basis_algorithm1(&d, g, OrderChoice::Grevlex).unwrap();
            c.eq(format!("{name} {} d={top} size", tag(kind)), basis.len(), sys.columns.len() - sys.matrix.rank());
            let v = Verifier::new(&d).unwrap();
            c.ok(format!("{name} {} d={top} verify", tag(kind)), basis.splines.iter().all(|s| v.verify(s, Some(g)).ok()));
        }
        for sys in cx.ideals[..d.n()].iter().flatten() {
            let polys: Vec<Polynomial> = (0..200).map(|_| random_poly(&mut rng, &d, &sys.blocks)).collect();
            let nf: Vec<Polynomial> = polys.iter().map(|p| sys.gb.normal_form(p)).collect();
            let label = format!("{name} {}-face {}", sys.dim, sys.face);
            c.ok(format!("{label} 𝔯 idempotent"), nf.iter().all(|r| sys.gb.normal_form(r) == *r));
            let linear = (0..200).all(|i| {
                let j = (i + 1) % 200;
                let a: Rational = rat(i as i64 - 100, 7);
                let f = &polys[i] + &polys[j].scale(&a);
                sys.gb.normal_form(&f) == &nf[i] + &nf[j].scale(&a)
            });
            c.ok(format!("{label} 𝔯 linear"), linear);
        }
    }
    for e in 0..12 {
        let d = cube_flipped_b(e, 1).unwrap();
        c.ok(format!("flipped 𝔟 on edge {e} rejected"), d.ensure_compatible().is_err());
        if e == 0 {
            c.ok("flipped 𝔟 basis refused", basis_algorithm1(&d, Grading::total(4), OrderChoice::Grevlex).is_err());
        }
    }
    c.ok("flipped face orientation rejected", cube_from_mesh(&flipped_cube_mesh(), CubeVariant::Standard, 1).is_err());
    c
}

fn c8_fig4() -> Check {
    let mut c = Check::new(8, "cube surface fit and export");
    let d = cube(CubeVariant::Standard, 1).unwrap();
    let basis = basis_algorithm1(&d, Grading::bidegree(2), OrderChoice::Grevlex).unwrap();
    let targets = cube_center_targets();
    let fit = fit_interpolate(&d, &basis, &targets).unwrap();
    c.ok("fit residual zero", fit.residual_is_zero());
    let coords: Vec<_> = fit.coefficients.iter().map(|v| basis.combine(v).unwrap()).collect();
    let mesh = export_surface(&d, &coords, 2).unwrap();
    let mut centers = BTreeSet::new();
    for t in &targets {
        let p = mesh.sample(t.face, 1, 1).unwrap().to_vec();
        c.eq(format!("face {} center", t.face), p.clone(), t.value.clone());
        centers.insert(p);
    }
    let mut want = BTreeSet::new();
    for i in 0..3 {
        for s in [-1, 1] {
            let mut v = vec![int(0); 3];
            v[i] = int(s);
            want.insert(v);
        }
    }
    c.eq("center set", centers, want);
    c
}

fn main() {
    let checks: [(u32, fn() -> Check); 8] =
        [(1, c1_table), (2, c2_two_patch), (3, c3_star), (4, c4_quotients), (5, c5_homology), (6, c6_simplices), (7, c7_structure), (8, c8_fig4)];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut fine = true;
    for (id, f) in checks {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let c = f();
        fine &= c.report(t.elapsed().as_secs_f64());
    }
    if !fine {
        println!("acceptance: unexpected failures");
        std::process::exit(1);
    }
    println!("acceptance: no unexpected failures");
}
