//! Structure-identity sweeps over random points for every catalog frame.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use surflap::catalog;
use surflap::checks::structure_residuals;

#[test]
fn structure_identities_on_both_ellipsoid_frames() {
    for a in [0.5, 2.0] {
        let entry = catalog::get("paper-ellipsoid", &[("a", a)]).unwrap();
        for frame in ["kehys", "tilde"] {
            let geo = entry.geometry(frame).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(4242);
            let mut worst: (String, f64) = (String::new(), 0.0);
            for _ in 0..200 {
                let z = geo.domain.sample(&mut rng);
                let res = structure_residuals(&geo, z).unwrap();
                assert!(
                    res["structure.orthonormality"] < 1e-10,
                    "orthonormality at {z:?}"
                );
                assert!(res["structure.dtheta"] < 1e-8, "dtheta at {z:?}");
                assert!(res["structure.gauss"] < 1e-8, "gauss at {z:?}");
                assert!(res["structure.weingarten"] < 1e-9, "weingarten at {z:?}");
                assert!(res["structure.t12_sym"] < 1e-9, "t12 at {z:?}");
                assert!(res["structure.t_der"] < 1e-7, "t_der at {z:?}");
                assert!(
                    res["structure.intrinsic_gauss"] < 1e-8,
                    "gauss curvature route at {z:?}"
                );
                assert!(
                    res["structure.curvature_flat"] < 1e-8,
                    "flat curvature at {z:?}"
                );
                for (k, v) in res {
                    if v > worst.1 {
                        worst = (k, v);
                    }
                }
            }
            println!(
                "a = {a}, frame {frame}: worst residual {} = {:.3e}",
                worst.0, worst.1
            );
        }
    }
}

#[test]
fn structure_identities_with_normal_tube_frames() {
    for (name, params) in [
        ("torus", vec![("R", 2.0), ("r", 0.5)]),
        ("graph-surface", vec![("amp", 0.2)]),
        ("paper-ellipsoid", vec![("a", 1.5)]),
    ] {
        let entry = catalog::get(name, &params).unwrap();
        let geo = entry.geometry("normal-tube").unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(777);
        for _ in 0..40 {
            let z = geo.domain.sample(&mut rng);
            let res = structure_residuals(&geo, z).unwrap();
            assert!(
                res["structure.orthonormality"] < 1e-10,
                "{name} orthonormality at {z:?}"
            );
            assert!(
                res["structure.weingarten"] < 1e-9,
                "{name} weingarten at {z:?}"
            );
            assert!(res["structure.gauss"] < 1e-8, "{name} gauss at {z:?}");
            assert!(
                res["structure.curvature_flat"] < 1e-8,
                "{name} flat curvature at {z:?}: {}",
                res["structure.curvature_flat"]
            );
            assert!(
                res["structure.intrinsic_gauss"] < 1e-8,
                "{name} kappa routes at {z:?}"
            );
        }
    }
}

#[test]
fn tube_frame_on_ellipsoid_matches_closed_form_curvatures() {
    // the scalar curvatures are frame-independent: the automatic frame must
    // reproduce the printed closed forms
    let entry = catalog::get("paper-ellipsoid", &[("a", 2.0)]).unwrap();
    let geo = entry.geometry("normal-tube").unwrap();
    for z in geo.domain.grid(4, 4) {
        let (_, _, dev) = catalog::closed_form_check(&entry, &geo, "kappa", z).unwrap();
        assert!(dev < 1e-9, "kappa deviation {dev} at {z:?}");
        let (printed, computed, _) = catalog::closed_form_check(&entry, &geo, "mean2h", z).unwrap();
        // the tube normal may be the opposite orientation; |2H| must agree
        assert!(
            (printed.abs() - computed.abs()).abs() < 1e-9,
            "|2H| deviation at {z:?}: {printed} vs {computed}"
        );
    }
}

#[test]
fn kehys_and_tube_frames_agree_on_flat_plane() {
    let entry = catalog::get("flat-plane", &[]).unwrap();
    let cart = entry.geometry("cartesian").unwrap();
    let tube = entry.geometry("normal-tube").unwrap();
    for z in [[0.3, -0.5], [0.0, 0.0]] {
        let a = cart.surface_jets(z).unwrap();
        let b = tube.surface_jets(z).unwrap();
        for j in 0..3 {
            for m in 0..3 {
                assert!(
                    (a.amb.frame[j][m].value().abs() - b.amb.frame[j][m].value().abs()).abs()
                        < 1e-12
                );
            }
        }
    }
}

#[test]
fn non_orthonormal_closed_form_frame_is_rejected_with_gram_matrix() {
    use surflap::expr::SmoothMap;
    use surflap::geometry::{AmbientSpace, DomainBox, FrameSpec, Geometry, Surface};
    let yvars = ["y1", "y2", "y3"];
    let psi = SmoothMap::parse(&["y1", "y2", "y3"], &yvars, &[]).unwrap();
    let f = SmoothMap::parse(&["z1", "z2", "0"], &["z1", "z2"], &[]).unwrap();
    // b1 has length 2: not orthonormal
    let maps = [
        SmoothMap::parse(&["2", "0", "0"], &yvars, &[]).unwrap(),
        SmoothMap::parse(&["0", "1", "0"], &yvars, &[]).unwrap(),
        SmoothMap::parse(&["0", "0", "1"], &yvars, &[]).unwrap(),
    ];
    let err = Geometry::new(
        Surface {
            ambient: AmbientSpace::FlatPullback { psi },
            f,
        },
        FrameSpec::ClosedForm { maps },
        DomainBox {
            z1: (-1.0, 1.0),
            z2: (-1.0, 1.0),
            s_max: 0.1,
        },
        "stretched",
    )
    .unwrap_err();
    let msg = err.to_string();
    assert!(
        msg.contains("not orthonormal") && msg.contains("Gram"),
        "diagnostic should report the Gram matrix: {msg}"
    );
}

#[test]
fn tilde_e_closed_forms_hold_across_the_parameter_family() {
    // the printed E entries are generic in the axis ratio
    for a in [0.5, 1.7] {
        let entry = catalog::get("paper-ellipsoid", &[("a", a)]).unwrap();
        for frame in ["kehys", "tilde"] {
            let geo = entry.geometry(frame).unwrap();
            for k in 0..5 {
                let z2 = 0.7 + 0.15 * k as f64;
                for q in ["e11", "e12", "e21", "e22"] {
                    let (printed, computed, dev) =
                        catalog::closed_form_check(&entry, &geo, q, [0.1, z2]).unwrap();
                    let rel = dev / printed.abs().max(1e-6);
                    assert!(
                        rel < 1e-6,
                        "a = {a}, {frame}.{q} at z2 = {z2}: {printed} vs {computed}"
                    );
                }
            }
        }
    }
}
