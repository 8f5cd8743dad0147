//! Domain files, basis files, fitting and mesh export.

mod basis;
mod domain;
mod surface;

pub use basis::{parse_basis, parse_spline_record, serialize_basis, spline_record, BasisFile};
pub use domain::{
    file_grading, load_domain, parse_domain, parse_domain_str, serialize_domain, DomainFile, FacetSpec, GluingSpec,
    TransitionSpec,
};
pub use surface::{
    cube_center_targets, export_from_spec, export_surface, fit_interpolate, interface_mismatches, parse_targets, FitResult,
    Mesh, SurfaceSpec, Target, TargetRecord,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::OrderChoice;
    use crate::complex::fixtures::builtin;
    use crate::poly::{format_decimal, int, rat, Grading, Rational};
    use crate::spline::{basis_algorithm1, Spline, Verifier};

    fn repo_fixture(name: &str) -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
    }

    #[test]
    fn round_trip_is_identical() {
        for name in crate::complex::fixtures::BUILTIN_NAMES {
            let d = builtin(name, 1).unwrap();
            let text = serialize_domain(&d).unwrap();
            let back = parse_domain_str(&text).unwrap();
            assert_eq!(back, d, "{name}");
            assert_eq!(serialize_domain(&back).unwrap(), text);
        }
    }

    #[test]
    fn bundled_fixtures_match_builtins() {
        let cube = parse_domain(repo_fixture("cube.json")).unwrap();
        let b = builtin("cube", 1).unwrap();
        assert_eq!((cube.transitions.clone(), cube.ideals.clone()), (b.transitions, b.ideals));
        let tp = parse_domain(repo_fixture("two_patch_34.json")).unwrap();
        assert_eq!(tp.transitions, builtin("two_patch_34", 1).unwrap().transitions);
        let refl = parse_domain(repo_fixture("cube_reflected.json")).unwrap();
        assert_eq!(refl.transitions, cube.transitions);
        assert!(parse_domain(repo_fixture("two_patch_explicit.json")).is_ok());
        assert_eq!(load_domain("builtin:star3", Some(2)).unwrap().r, 2);
        assert_eq!(load_domain(repo_fixture("two_patch_34.json"), Some(2)).unwrap().r, 2);
        // symmetric data are G¹ data: at r = 2 the cube fails the vertex condition
        assert!(load_domain(repo_fixture("cube.json"), Some(2)).is_err());
    }

    #[test]
    fn missing_transition_names_the_edge() {
        let quads = r#"{"n": 2, "r": 1, "quads": [[0,1,2,3],[1,0,4,5]]}"#;
        let e = parse_domain_str(quads).unwrap_err().to_string();
        assert!(e.contains("interior edge 0-1") && e.contains("missing its transition"), "{e}");
        let mut f: DomainFile = serde_json::from_str(&std::fs::read_to_string(repo_fixture("two_patch_explicit.json")).unwrap()).unwrap();
        f.facets.get_mut("0").unwrap().transition = None;
        let e = f.to_domain().unwrap_err().to_string();
        assert!(e.contains("interior edge 0 (between faces 0 and 1)"), "{e}");
        assert!(parse_domain_str(r#"{"n": 2, "r": 1}"#).is_err());
        assert!(parse_domain_str(r#"{"n": 2, "r": 1, "quads": [[0,1,2,3]], "bogus": 1}"#).is_err());
    }

    #[test]
    fn basis_file_round_trip() {
        let d = builtin("two_patch_34", 1).unwrap();
        let b = basis_algorithm1(&d, Grading::total(3), OrderChoice::Grevlex).unwrap();
        let back = parse_basis(&serialize_basis(&b).unwrap(), &d).unwrap();
        assert_eq!(back.splines, b.splines);
        assert_eq!(back.grading, b.grading);
    }

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(&rat(-1, 4)), "-0.25");
        assert_eq!(format_decimal(&rat(3, 1)), "3");
        assert_eq!(format_decimal(&rat(1, 80)), "0.0125");
        assert_eq!(format_decimal(&rat(2, 3)), "2/3");
    }

    #[test]
    fn export_shapes_and_constants() {
        let d = builtin("cube", 1).unwrap();
        let one = Spline::constant(&d, int(1));
        let zero = Spline::constant(&d, int(0));
        let mesh = export_surface(&d, &[zero.clone(), zero, one], 2).unwrap();
        assert_eq!(mesh.quads.len(), 24);
        assert_eq!(mesh.vertices.len(), 54);
        assert!(mesh.vertices.iter().all(|v| v[2] == int(1)));
        let (vs, fs) = Mesh::parse_text(&mesh.to_text("t")).unwrap();
        assert_eq!((vs, fs), (mesh.vertices.clone(), mesh.quads.clone()));
        assert!(export_surface(&d, &[], 0).is_err());
    }

    #[test]
    fn overdetermined_fit_is_inconsistent() {
        let d = builtin("cube", 1).unwrap();
        let b = basis_algorithm1(&d, Grading::bidegree(2), OrderChoice::Grevlex).unwrap();
        assert_eq!(b.len(), 6);
        let mut t = cube_center_targets();
        t.push(Target { face: 0, point: vec![rat(1, 4), rat(1, 4)], value: vec![int(5), int(5), int(5)] });
        let e = fit_interpolate(&d, &b, &t).unwrap_err().to_string();
        assert!(e.contains("inconsistent") && e.contains("7 targets"), "{e}");
        // a single constant target is always reachable
        let one = [Target { face: 2, point: vec![rat(1, 3), rat(1, 5)], value: vec![int(1)] }];
        let f = fit_interpolate(&d, &b, &one).unwrap();
        assert!(f.residual_is_zero() && f.underdetermined);
    }

    #[test]
    fn fitted_surface_is_continuous_across_edges() {
        let d = builtin("cube", 1).unwrap();
        let b = basis_algorithm1(&d, Grading::bidegree(2), OrderChoice::Grevlex).unwrap();
        let fit = fit_interpolate(&d, &b, &cube_center_targets()).unwrap();
        assert!(fit.residual_is_zero() && !fit.underdetermined);
        let v = Verifier::new(&d).unwrap();
        for c in &fit.coefficients {
            let s = b.combine(c).unwrap();
            assert!(v.verify(&s, Some(Grading::bidegree(2))).ok());
            assert!(interface_mismatches(&d, &s, 4).unwrap().is_empty());
        }
        let spec = SurfaceSpec::new(&b, &fit.coefficients, 3);
        let back: SurfaceSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        let mesh = export_from_spec(&d, &back).unwrap();
        assert_eq!(mesh.quads.len(), 6 * 9);
        let _: Vec<Rational> = back.coefficient_vectors().unwrap().concat();
    }
}
