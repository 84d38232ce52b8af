"""Command-line front end: system definition files in, JSON/CSV reports out.

System files are JSON documents:

    {"schema": "mop-trees/1", "type": "angelesco",
     "mu1": {measure literal}, "mu2": {measure literal}, "precision_bits": 256}

    {"schema": "mop-trees/1", "type": "nikishin",
     "mu1": {measure literal}, "tau": {measure literal}, "precision_bits": 256}

where a measure literal is
``{"atoms": [[x, m], ...], "pieces": [{"a":, "b":, "density": {...}}], "quad_order": 200}``.

Exit codes: 0 success, 1 usage error, 2 assumption/validation failure.
Outputs are deterministic: JSON with sorted keys and shortest-roundtrip
floats, CSV through :func:`emit_plot_data`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import angelesco as ang
from . import nikishin as nik
from . import periodic_surface as psur
from .errors import MopTreesError
from .finite_spectral import full_basis, s_orthogonalize
from .measures import measure_from_json
from .mop_engine import MopSystem, consistency_residual, interlacing_check
from .tree_jacobi import assemble_finite, s_selfadjoint_check

SCHEMA = "mop-trees/1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MOP_TREES_THREADS", "1")))
    except ValueError:
        return 1


def _grid_map(fn, xs):
    workers = _worker_count()
    if workers == 1:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, xs))


def load_system(path: str, precision_bits: int | None = None) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    bits = precision_bits or int(doc.get("precision_bits", 256))
    kind = doc.get("type")
    if kind == "angelesco":
        asys = ang.angelesco_system(
            measure_from_json(doc["mu1"]), measure_from_json(doc["mu2"]), bits
        )
        return {"type": kind, "asys": asys, "sys": asys.sys}
    if kind == "nikishin":
        nsys = nik.nikishin_system(
            measure_from_json(doc["mu1"]), measure_from_json(doc["tau"]), bits
        )
        return {"type": kind, "nsys": nsys, "sys": nsys.sys}
    if kind == "pair":
        sysm = MopSystem(measure_from_json(doc["mu1"]), measure_from_json(doc["mu2"]), bits)
        return {"type": kind, "sys": sysm}
    raise ValueError(f"unknown system type {kind!r}")


def emit_plot_data(profile, path: str, masses=None) -> None:
    """Two-column CSV with a header; optional sidecar JSON for point masses."""
    rows = list(profile)
    if not rows:
        raise ValueError("empty grid: nothing to emit")
    with open(path, "w") as fh:
        fh.write("x,value\n")
        for x, y in rows:
            fh.write(f"{x:.12e},{y:.12e}\n")
    if masses:
        side = path + ".masses.json"
        with open(side, "w") as fh:
            json.dump(
                {"schema": SCHEMA, "point_masses": [[float(a), float(b)] for a, b in masses]},
                fh,
                sort_keys=True,
            )
            fh.write("\n")


def _emit(doc: dict, out: str | None) -> None:
    doc = {"schema": SCHEMA, **doc}
    text = json.dumps(doc, sort_keys=True, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _parse_pair(text, cast=float) -> tuple:
    parts = [cast(t) for t in str(text).split(",")]
    if len(parts) != 2:
        raise ValueError("expected two comma-separated values")
    return tuple(parts)


def _parse_word(text) -> tuple:
    if text in (None, "", "O"):
        return ()
    return tuple(int(t) for t in str(text).split(","))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_mop_coeffs(args):
    sysm = load_system(args.system, args.precision_bits)["sys"]
    n = _parse_pair(args.n, int)
    _emit({"command": "mop coeffs", "record": sysm.record_json(n)}, args.out)
    return 0


def cmd_tree_spectrum(args):
    sysm = load_system(args.system, args.precision_bits)["sys"]
    N = _parse_pair(args.N, int)
    kappa = _parse_pair(args.kappa)
    dec = full_basis(sysm, kappa, N)
    _emit(
        {
            "command": "tree spectrum",
            "N": list(N),
            "kappa": list(kappa),
            "n_vertices": dec.op.n_vertices,
            "eigenvalues": [
                {"E": ev.E, "g": ev.g} for ev in dec.eigenvalues
            ],
            "dense_gap": dec.report["dense_gap"],
        },
        args.out,
    )
    return 0


def cmd_tree_svec(args):
    sysm = load_system(args.system, args.precision_bits)["sys"]
    N = _parse_pair(args.N, int)
    kappa = _parse_pair(args.kappa)
    dec = full_basis(sysm, kappa, N)
    basis = s_orthogonalize(dec)
    doc = dec.to_json()
    doc["orthobasis"] = {
        "signs": [float(s) for s in basis.signs],
        "gram_offdiag": basis.gram_offdiag,
        "inertia": list(basis.inertia),
        "columns": [[float(v) for v in basis.matrix[:, j]] for j in range(basis.matrix.shape[1])],
    }
    _emit({"command": "tree svec", **doc}, args.out)
    return 0


def cmd_angelesco_green(args):
    asys = load_system(args.system, args.precision_bits)["asys"]
    kappa = _parse_pair(args.kappa)
    X, Y = _parse_word(args.X), _parse_word(args.Y)
    f, r = ang.green(asys, kappa, Y or X, X, complex(args.z), depth=args.depth)
    _emit(
        {
            "command": "angelesco green",
            "X": list(X),
            "Y": list(Y or X),
            "z": [complex(args.z).real, complex(args.z).imag],
            "formula": [f.real, f.imag],
            "resolvent": [r.real, r.imag],
            "rel_error": abs(f - r) / max(abs(f), 1e-300),
        },
        args.out,
    )
    return 0


def cmd_angelesco_rho(args):
    asys = load_system(args.system, args.precision_bits)["asys"]
    kappa = _parse_pair(args.kappa)
    rep = ang.rho_o(asys, kappa)
    doc = {
        "command": "angelesco rho",
        "kappa": list(kappa),
        "point_masses": [[float(a), float(b)] for a, b in rep.point_masses],
        "total_mass": rep.total_mass(),
        "first_moment": rep.first_moment(),
    }
    if args.grid:
        pts = rep.profile(args.grid)
        doc["profile"] = [[x, y] for x, y in pts]
    _emit(doc, args.out)
    return 0


def cmd_angelesco_dos_profile(args):
    asys = load_system(args.system, args.precision_bits)["asys"]
    kappa = _parse_pair(args.kappa)
    rep = ang.rho_o(asys, kappa)
    if not args.grid or args.grid < 1:
        raise ValueError("empty grid: pass --grid with a positive count")
    pts = rep.profile(args.grid)
    if args.format == "csv" or args.out:
        emit_plot_data(pts, args.out or "rho_profile.csv", masses=rep.point_masses)
        sys.stdout.write(f"wrote {len(pts)} points\n")
    else:
        _emit({"command": "angelesco dos-profile", "profile": [[x, y] for x, y in pts]}, None)
    return 0


def cmd_nikishin_signs(args):
    nsys = load_system(args.system, args.precision_bits)["nsys"]
    rep = nik.sign_pattern_check(nsys, args.nmax)
    hrep = nik.h_sign_check(nsys, args.nmax)
    _emit(
        {
            "command": "nikishin signs",
            "nmax": args.nmax,
            "sign_pattern": {"passed": rep["passed"], "violations": rep["violations"]},
            "h_signs": {"passed": hrep["passed"], "violations": hrep["violations"]},
            "verdict": "PASS" if rep["passed"] and hrep["passed"] else "FAIL",
        },
        args.out,
    )
    return 0 if rep["passed"] and hrep["passed"] else 2


def cmd_nikishin_blowup(args):
    nsys = load_system(args.system, args.precision_bits)["nsys"]
    scan = nik.diagonal_blowup_scan(nsys, args.nmax)
    if args.format == "csv":
        rows = [(d["n"], d["a1"]) for d in scan["diagonal"]]
        emit_plot_data(rows, args.out or "blowup_a1.csv")
        rows = [(d["n"], d["a2"]) for d in scan["diagonal"]]
        emit_plot_data(rows, (args.out or "blowup_a1.csv") + ".a2.csv")
        return 0
    _emit({"command": "nikishin blowup", **scan}, args.out)
    return 0


def _surface_from_args(args):
    A1, A2 = _parse_pair(args.A)
    B1, B2 = _parse_pair(args.B)
    return psur.from_params(A1, A2, B1, B2)


def cmd_periodic_surface(args):
    surf = _surface_from_args(args)
    _emit(
        {
            "command": "periodic surface",
            "params": {"A1": surf.A1, "A2": surf.A2, "B1": surf.B1, "B2": surf.B2},
            "critical_points": list(surf.critical_points),
            "branch_points": list(surf.branch_points),
            "cuts": [list(c) for c in surf.cuts],
        },
        args.out,
    )
    return 0


def cmd_periodic_dos(args):
    surf = _surface_from_args(args)
    if not args.grid or args.grid < 1:
        raise ValueError("empty grid: pass --grid with a positive count")
    pts = []
    for a, b in surf.cuts:
        pad = (b - a) * 1e-6
        xs = np.linspace(a + pad, b - pad, args.grid // 2)
        pts.extend(zip(map(float, xs), _grid_map(lambda x: psur.dos(surf, args.l, float(x)), xs)))
    if args.format == "csv" or args.out:
        emit_plot_data(pts, args.out or "dos.csv")
        sys.stdout.write(f"wrote {len(pts)} points\n")
    else:
        _emit({"command": "periodic dos", "profile": [[x, y] for x, y in pts]}, None)
    return 0


def cmd_periodic_raylimit(args):
    asys = load_system(args.system, args.precision_bits)["asys"]
    rep = psur.ray_limit_estimate(asys, args.c, args.nmax)
    _emit(
        {
            "command": "periodic raylimit",
            "c": rep.c,
            "A_hat": list(rep.A_hat),
            "B_hat": list(rep.B_hat),
            "diagonal_diffs": [list(d) for d in rep.diagonal_diffs],
            "fitted_cuts": [list(c) for c in rep.fitted_cuts] if rep.fitted_cuts else None,
        },
        args.out,
    )
    return 0


def cmd_verify_all(args):
    loaded = load_system(args.system, args.precision_bits)
    sysm = loaded["sys"]
    checks = []

    def record(name, passed, detail=""):
        checks.append({"check": name, "passed": bool(passed), "detail": detail})

    for n in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        r = consistency_residual(sysm, n)
        record(f"consistency {n}", max(float(x) for x in r) < 1e-25, f"max={max(float(x) for x in r):.3e}")
    if loaded["type"] == "angelesco":
        for n in [(1, 1), (2, 2), (3, 2)]:
            record(f"interlacing {n}", interlacing_check(sysm, n, 1) and interlacing_check(sysm, n, 2))
        dec = full_basis(sysm, (0.0, 1.0), (2, 1))
        record("finite spectral (2,1)", dec.report["dense_gap"] < 1e-9, f"gap={dec.report['dense_gap']:.3e}")
        op = assemble_finite(sysm, (0.0, 1.0), (2, 2))
        record("signature self-adjointness", s_selfadjoint_check(op) < 1e-13)
    if loaded["type"] == "nikishin":
        rep = nik.sign_pattern_check(loaded["nsys"], args.nmax)
        record(f"sign pattern nmax={args.nmax}", rep["passed"], f"{len(rep['violations'])} violations")
        hrep = nik.h_sign_check(loaded["nsys"], args.nmax)
        record(f"h signs nmax={args.nmax}", hrep["passed"], f"{len(hrep['violations'])} violations")
        op = assemble_finite(sysm, (0.0, 1.0), (2, 2))
        record("signature self-adjointness", s_selfadjoint_check(op) < 1e-13)
    passed = all(c["passed"] for c in checks)
    _emit(
        {"command": "verify all", "checks": checks, "verdict": "PASS" if passed else "FAIL"},
        args.out,
    )
    return 0 if passed else 2


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="mop-trees", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="group", required=True)

    def common(sp, system=True):
        if system:
            sp.add_argument("--system", required=True, help="system definition JSON")
        sp.add_argument("--precision-bits", type=int, default=None, dest="precision_bits")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    g = sub.add_parser("mop").add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("coeffs")
    common(sp)
    sp.add_argument("--n", required=True, help="multi-index n1,n2")
    sp.set_defaults(fn=cmd_mop_coeffs)

    g = sub.add_parser("tree").add_subparsers(dest="cmd", required=True)
    for name, fn in (("spectrum", cmd_tree_spectrum), ("svec", cmd_tree_svec)):
        sp = g.add_parser(name)
        common(sp)
        sp.add_argument("--N", required=True)
        sp.add_argument("--kappa", required=True)
        sp.set_defaults(fn=fn)

    g = sub.add_parser("angelesco").add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("green")
    common(sp)
    sp.add_argument("--kappa", required=True)
    sp.add_argument("--z", required=True, type=complex)
    sp.add_argument("--X", default="")
    sp.add_argument("--Y", default="")
    sp.add_argument("--depth", type=int, default=12)
    sp.set_defaults(fn=cmd_angelesco_green)
    for name, fn in (("rho", cmd_angelesco_rho), ("dos-profile", cmd_angelesco_dos_profile)):
        sp = g.add_parser(name)
        common(sp)
        sp.add_argument("--kappa", required=True)
        sp.add_argument("--grid", type=int, default=0)
        sp.set_defaults(fn=fn)

    g = sub.add_parser("nikishin").add_subparsers(dest="cmd", required=True)
    for name, fn in (("signs", cmd_nikishin_signs), ("blowup", cmd_nikishin_blowup)):
        sp = g.add_parser(name)
        common(sp)
        sp.add_argument("--nmax", type=int, default=4)
        sp.set_defaults(fn=fn)

    g = sub.add_parser("periodic").add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("surface")
    common(sp, system=False)
    sp.add_argument("--A", required=True, help="A1,A2")
    sp.add_argument("--B", required=True, help="B1,B2")
    sp.set_defaults(fn=cmd_periodic_surface)
    sp = g.add_parser("dos")
    common(sp, system=False)
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--l", type=int, choices=(1, 2), default=1)
    sp.add_argument("--grid", type=int, default=0)
    sp.set_defaults(fn=cmd_periodic_dos)
    sp = g.add_parser("raylimit")
    common(sp)
    sp.add_argument("--c", type=float, default=0.5)
    sp.add_argument("--nmax", type=int, default=8)
    sp.set_defaults(fn=cmd_periodic_raylimit)

    g = sub.add_parser("verify").add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("all")
    common(sp)
    sp.add_argument("--nmax", type=int, default=4)
    sp.set_defaults(fn=cmd_verify_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except MopTreesError as exc:
        # prefix the code with the module that raised it
        tb = exc.__traceback__
        module = "mop_trees"
        while tb is not None:
            mod = tb.tb_frame.f_globals.get("__name__", "")
            if mod.startswith("mop_trees."):
                module = mod.split(".")[-1]
            tb = tb.tb_next
        _emit({"error": {"code": f"{module}.{type(exc).__name__}", "message": str(exc)}}, None)
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"mop-trees: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
