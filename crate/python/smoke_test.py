#!/usr/bin/env python3
"""Smoke test for the surflap_py extension module.

Builds nothing itself: expects `cargo build -p surflap-py` (debug or release)
to have produced the cdylib. Copies it next to a temp dir under the importable
name and exercises the main entry points.
"""

import json
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_extension() -> pathlib.Path:
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libsurflap_py.so", "surflap_py.dll", "libsurflap_py.dylib")
    ]
    for cand in candidates:
        if cand.exists():
            return cand
    raise SystemExit("build the extension first: cargo build -p surflap-py")


def main() -> None:
    ext = locate_extension()
    staging = tempfile.mkdtemp(prefix="surflap_py_")
    suffix = ".so" if ext.suffix in (".so", ".dylib") else ".pyd"
    shutil.copy2(ext, pathlib.Path(staging) / f"surflap_py{suffix}")
    sys.path.insert(0, staging)

    import surflap_py as sp

    assert "paper-ellipsoid" in sp.catalog_names()

    # expression evaluation and jets
    v = sp.eval_expr("a*y3*cos(y1)*sin(y2)", ["y1", "y2", "y3"], [0.0, math.pi / 2, 1.0],
                     [("a", 2.0)])
    assert abs(v - 2.0) < 1e-14, v
    jets = dict()
    for idx, coeff in sp.jet_coefficients("x^2", ["x"], [2.0], 2):
        jets[tuple(idx)] = coeff
    assert jets[(0, 0, 0)] == 4.0 and jets[(1, 0, 0)] == 4.0 and jets[(2, 0, 0)] == 1.0

    # geometry of the unit sphere
    ws = sp.Workspace("unit-sphere", "kehys")
    curv = ws.curvature(0.3, 1.1)
    assert abs(curv["kappa"] - 1.0) < 1e-10, curv
    assert abs(curv["mean2h"] + 2.0) < 1e-10, curv

    # printed closed form vs computed value on the ellipsoid
    ws2 = sp.Workspace("paper-ellipsoid", "kehys", [("a", 2.0)])
    printed, computed, dev = ws2.closed_form_check("kappa", 0.5, 1.0)
    assert dev < 1e-9, (printed, computed, dev)

    # decomposition of the Bochner Laplacian with a divergence-free extension
    row = ws2.decompose("divergence-free", "0.4*z1^2 - 0.8*z2",
                        "sin(z1)*cos(z2) + 0.3", 0.3, 1.0)
    norm = math.sqrt(sum(c * c for c in row["direct"]))
    assert row["residual"] <= max(1e-7 * norm, 1e-8), row
    assert row["divfree_residual"] <= max(1e-7 * norm, 1e-8), row

    # frame dependence of the E tensor
    e_kehys = ws2.frame_scalars(0.3, 1.0)["e"]
    e_tilde = sp.Workspace("paper-ellipsoid", "tilde", [("a", 2.0)]).frame_scalars(0.3, 1.0)["e"]
    spread = max(abs(a - b) for ra, rb in zip(e_kehys, e_tilde) for a, b in zip(ra, rb))
    assert spread > 0.01, (e_kehys, e_tilde)

    # batch runner round trip
    report = json.loads(sp.run(json.dumps({
        "surface": {"catalog": "unit-sphere"},
        "frame": "kehys",
        "sampling": {"grid": [3, 3]},
    }), "curvature"))
    assert report["schema"] == 1 and report["pass"], report["identities"]

    print("surflap_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
