"""Command-line front end: ``qhafinite {selftest, band-analyze, limitops, propa}``.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 refusal to
analyse a diagonal with an unstructured tail.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import limitops as lo
from . import opalg as oa
from . import propa as pr
from .group import FiniteAbelianGroup
from .heisenberg import Cocycle
from .selftest import DEFAULT_GROUPS, run_selftest
from .serialize import InputError, dumps, load_json

__all__ = ["RunConfig", "build_parser", "main", "cmd_selftest", "cmd_band_analyze", "cmd_limitops", "cmd_propa"]

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_UNSTRUCTURED = 0, 1, 2, 3


class RunConfig(argparse.Namespace):
    """Parsed arguments; ``tol`` defaults to ``1e-10`` and must be positive."""


def _orders(text: str) -> tuple:
    try:
        orders = tuple(int(v) for v in text.replace("x", ",").split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"group must look like '2,3', got {text!r}")
    if not orders or min(orders) < 1:
        raise argparse.ArgumentTypeError(f"group orders must be positive, got {text!r}")
    return orders


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _points(text: str) -> list:
    if text == "cross":
        return None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"probe set must be JSON, e.g. '[[1],[-1]]': {exc.msg}")
    return [tuple(np.atleast_1d(p).astype(int).tolist()) for p in data]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive, default=1e-10, help="check tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="qhafinite", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selftest", parents=[common], help="run every identity suite")
    p.add_argument("--group", type=_orders, action="append", help="group orders, repeatable (default Z2, Z4, Z2xZ3)")
    p.add_argument("--probes", type=int, default=20, help="random trials per check")
    p.add_argument("--no-windowed", action="store_true", help="skip the Z and Z^d suites")

    p = sub.add_parser("band-analyze", parents=[common], help="band structure and oscillation of a kernel")
    p.add_argument("kernel", help='kernel JSON {"group": {"orders": [...]}, "kernel": [[[re, im], ...], ...]}')
    p.add_argument("--group", type=_orders, default=None, help="group orders when the file omits them")
    p.add_argument("--probes", type=int, default=2, help="largest generator power used as oscillation probe")

    p = sub.add_parser("limitops", help="compactness diagnostics on windowed Z^d")
    lsub = p.add_subparsers(dest="action", required=True)
    a = lsub.add_parser("analyze", parents=[common])
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("banded", nargs="?", help="banded operator JSON")
    src.add_argument("--gallery", choices=("diag_decay", "identity", "laurent_shift", "periodic_sign",
                                           "mult_c0", "conv_L1", "product"))
    a.add_argument("--N", type=int, default=120, help="window radius for gallery operators")
    a.add_argument("--threshold", type=float, default=1e-6, help="tail level defining n*")
    a.add_argument("--probes", type=int, default=None, help="number of tail radii sampled")

    p = sub.add_parser("propa", parents=[common], help="Følner box and partition of unity in Z^d")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--probe", type=_points, default=None, help="JSON list of points, default the unit cross")
    return parser


def _emit(cfg, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list, header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(row[k]) if isinstance(row[k], float) else row[k] for k in header])
    return buf.getvalue()


def cmd_selftest(cfg) -> int:
    groups = tuple(cfg.group) if cfg.group else DEFAULT_GROUPS
    rep = run_selftest(tol=cfg.tol, seed=cfg.seed, trials=cfg.probes, groups=groups,
                       include_windowed=not cfg.no_windowed)
    fmt = cfg.format or "text"
    if fmt == "json":
        _emit(cfg, dumps(rep) + "\n")
    elif fmt == "csv":
        _emit(cfg, _csv([r.to_json() for r in rep.results], ["anchor", "check", "group", "residual", "tol", "passed"]))
    else:
        _emit(cfg, "\n".join(rep.lines()) + "\n")
    for r in rep.failures:
        print(f"failed: {r.anchor} ({r.check}, {r.group})", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_CHECK


def _nested_band_sets(g: FiniteAbelianGroup) -> list:
    """Balls ``{x : max_j |x_j| <= r}`` in circular distance, ``r = 0, 1, ...``."""
    n = np.asarray(g.orders)
    dist = np.minimum(g.elements, n - g.elements).max(axis=1)
    return [(r, oa.BandSet(g, frozenset(np.flatnonzero(dist <= r).tolist()))) for r in range(int(dist.max()) + 1)]


def analyze_kernel(A: oa.KernelOperator, tol: float = 1e-10, powers: int = 2) -> dict:
    """Band support, truncation distances, oscillation and smoothing profile of ``A``."""
    g = A.group
    c = Cocycle(g)
    probes = oa.default_probes(g, tuple(range(1, powers + 1)))
    K = oa.band_support(A, tol)
    osc = oa.oscillation(c, A, probes, probes)
    trunc = [{"radius": r, "size": len(Kr), "distance": oa.band_truncate(A, Kr)[1]}
             for r, Kr in _nested_band_sets(g)]
    profile = oa.c1_membership_profile(c, A)
    return {
        "group": g.to_json(),
        "band_support": [list(e) for e in K.elements()],
        "fourier_band_support": [list(e) for e in oa.band_support(oa.fourier_conjugate(A), tol).elements()],
        "truncation": trunc,
        "osc": osc.to_json(),
        "osc_bound_dual": [oa.band_oscillation_bound(A, nu, tol) for nu in probes],
        "c1_profile": profile.to_json(),
    }


def cmd_band_analyze(cfg) -> int:
    data = load_json(cfg.kernel)
    if not isinstance(data, dict) or "kernel" not in data:
        raise InputError(f"{cfg.kernel}: expected an object with a 'kernel' entry")
    if "group" not in data:
        if cfg.group is None:
            raise InputError(f"{cfg.kernel}: no 'group' entry and no --group given")
        data = dict(data, group={"orders": list(cfg.group)})
    try:
        A = oa.KernelOperator.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{cfg.kernel}: {exc}") from exc
    report = analyze_kernel(A, cfg.tol, cfg.probes)
    if (cfg.format or "json") == "csv":
        rows = report["c1_profile"]["rows"]
        _emit(cfg, _csv(rows, list(rows[0])))
    else:
        _emit(cfg, dumps(report) + "\n")
    return EXIT_OK if report["c1_profile"]["two_sided_ok"] else EXIT_CHECK


def cmd_limitops(cfg) -> int:
    if cfg.gallery:
        B = lo.example_gallery(cfg.gallery, N=cfg.N).operator
    else:
        data = load_json(cfg.banded)
        try:
            B = lo.BandedZOperator.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, lo.UnstructuredTailError):
                raise
            raise InputError(f"{cfg.banded}: {exc}") from exc
    ns = None
    if cfg.probes:
        ns = sorted(set(np.linspace(0, B.N - 1, cfg.probes).astype(int).tolist()))
    rep = lo.compactness_diagnostic(B, ns, cfg.threshold)
    if (cfg.format or "csv") == "json":
        _emit(cfg, dumps(rep) + "\n")
    else:
        head = f"# verdict: {rep.verdict}\n# n_star: {rep.n_star}\n"
        _emit(cfg, head + _csv([{"n": n, "sigma_max": s} for n, s in rep.tail], ["n", "sigma_max"]))
    return EXIT_OK


def cmd_propa(cfg) -> int:
    H = pr.unit_cross(cfg.dim) if cfg.probe is None else cfg.probe
    if any(len(h) != cfg.dim for h in H):
        raise InputError(f"probe points must have dimension {cfg.dim}")
    if not cfg.eps > 0:
        raise InputError("eps must be positive")
    K = pr.folner_for(cfg.eps, H, cfg.dim)
    span = max(max(abs(v) for v in h) for h in H)
    P = pr.build_partition(K, max(K.sides) - 1 + span + 1, H)
    rep = pr.verify_partition(P, H, cfg.eps)
    _emit(cfg, dumps(rep) + "\n")
    return EXIT_OK if rep.passed else EXIT_CHECK


COMMANDS = {"selftest": cmd_selftest, "band-analyze": cmd_band_analyze, "limitops": cmd_limitops, "propa": cmd_propa}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv, namespace=RunConfig())
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[cfg.command](cfg)
    except lo.UnstructuredTailError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_UNSTRUCTURED
    except (InputError, lo.TailConsistencyError, lo.WindowExhaustedError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
