"""Command-line front end: filter curves, error curves, success probabilities
and PDE solutions as CSV tables.

    cvpde filter-curve --variant arrazola --L 20 --delta 0 --d 20,60,140
    cvpde error-curve
    cvpde probability --fig9-scales
    cvpde solve --problem qho --alpha 2.5 --t 1,10
    cvpde coefficients --variant prop1 --M 1 --delta 0.01
"""

from __future__ import annotations

import argparse
import itertools
import sys

import numpy as np

from .ancilla import BarrierParams, barrier_coefficients, proposal1_coefficients, proposal2_coefficients
from .filters import FilterSpec, Variant, eval_filter, relative_error
from .numerics import QuadratureError
from .probability import success_probability
from .problems import (
    PoissonGaussianInstance,
    QhoCoherentInstance,
    poisson_approx,
    poisson_exact,
    qho_approx,
    qho_exact,
    qho_spectral,
)
from .tables import CurveTable, NonFiniteValueError, format_param

VARIANTS = [v.value for v in Variant]


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{flag}: {message}")


# ---------------------------------------------------------------------------
# flag parsing helpers
# ---------------------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_grid(text: str, flag: str, log: bool) -> np.ndarray:
    """``lo:hi:n`` -> n log-spaced (``log``) or linearly spaced points."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(flag, f"expected lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(flag, f"expected lo:hi:n, got {text!r}")
    if n < 1:
        raise UsageError(flag, "point count must be at least 1")
    if not lo <= hi or (n > 1 and lo == hi):
        raise UsageError(flag, "need lo < hi")
    if log:
        if lo <= 0:
            raise UsageError(flag, "log-spaced grid needs lo > 0")
        return np.logspace(np.log10(lo), np.log10(hi), n)
    return np.linspace(lo, hi, n)


def _pick(value, default):
    return default if value is None else value


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--variant", action="append", choices=VARIANTS, help="filter variant (repeatable)")
    p.add_argument("--delta", type=_float_list, help="momentum window width(s), comma separated")
    p.add_argument("--t", type=_float_list, help="evolution time(s)")
    p.add_argument("--L", type=_float_list, help="barrier length(s)")
    p.add_argument("--d", type=_int_list, help="Fock cutoff(s) of the barrier")
    p.add_argument("--M", type=_int_list, help="number of cancelled correction orders")
    p.add_argument("--a", help="eigenvalue grid lo:hi:n (log spaced)")
    p.add_argument("--x", help="position grid lo:hi:n (linear)")
    p.add_argument("--r", help="radial grid lo:hi:n (linear)")
    p.add_argument("--problem", choices=["poisson", "qho"])
    p.add_argument("--sigma", type=float, help="Gaussian charge width parameter")
    p.add_argument("--alpha", type=float, help="coherent amplitude")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--fig9-scales", action="store_true", help="scale Proposal 1 by 1e3 and the barrier by 10")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="cvpde", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("filter-curve", parents=[common], help="F(a) on a log grid")
    sub.add_parser("error-curve", parents=[common], help="relative error |1 - a F(a)|")
    prob = sub.add_parser("probability", parents=[common], help="success probability versus delta")
    prob.add_argument("--delta-grid", default="1e-3:1:100", help="delta grid lo:hi:n (log spaced)")
    sub.add_parser("solve", parents=[common], help="exact and approximate PDE solutions")
    sub.add_parser("coefficients", parents=[common], help="dump an ancilla state")
    return parser


# ---------------------------------------------------------------------------
# filter construction
# ---------------------------------------------------------------------------


def _validate(args) -> None:
    for flag in ("delta", "t", "L"):
        vals = getattr(args, flag) or []
        if flag == "delta" and any(v < 0 for v in vals):
            raise UsageError("--delta", "must be nonnegative")
        if flag in ("t", "L") and any(v <= 0 for v in vals):
            raise UsageError(f"--{flag}", "must be positive")
    for flag in ("d", "M"):
        if any(v < 0 for v in (getattr(args, flag) or [])):
            raise UsageError(f"--{flag}", "must be nonnegative")


def _specs(variant: str, params: dict) -> list[tuple[str, FilterSpec]]:
    """Expand one variant over the cartesian product of its parameters."""
    out = []
    if variant == "exact":
        return [("exact", FilterSpec.exact())]
    if variant == "arrazola-inf":
        for L, delta in itertools.product(params["L"], params["delta_arrazola"]):
            out.append((f"arrazola-inf_L={format_param(L)}_delta={format_param(delta)}", FilterSpec.arrazola_infinite(L, delta)))
    elif variant == "arrazola":
        for L, d, delta in itertools.product(params["L"], params["d"], params["delta_arrazola"]):
            name = f"arrazola_L={format_param(L)}_d={d}_delta={format_param(delta)}"
            out.append((name, FilterSpec.arrazola(L, d, delta)))
    else:
        make = FilterSpec.proposal1 if variant == "prop1" else FilterSpec.proposal2
        for M, delta, t in itertools.product(params["M"], params["delta_proposal"], params["t"]):
            name = f"{variant}_M={M}_delta={format_param(delta)}_t={format_param(t)}"
            out.append((name, make(M, delta, t)))
    return out


def _params(args, *, L, d, M, t, delta_arrazola, delta_proposal) -> dict:
    return {
        "L": _pick(args.L, L),
        "d": _pick(args.d, d),
        "M": _pick(args.M, M),
        "t": _pick(args.t, t),
        "delta_arrazola": _pick(args.delta, delta_arrazola),
        "delta_proposal": _pick(args.delta, delta_proposal),
    }


def _all_specs(variants, params) -> list[tuple[str, FilterSpec]]:
    specs = []
    for v in dict.fromkeys(variants):
        specs.extend(_specs(v, params))
    return specs


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_filter_curve(args) -> CurveTable:
    if not args.variant:
        raise UsageError("--variant", "at least one variant is required")
    a = parse_grid(args.a or "1e-2:1e2:200", "--a", log=True)
    params = _params(args, L=[20.0], d=[140], M=[0], t=[1.0], delta_arrazola=[0.01], delta_proposal=[0.01])
    table = CurveTable()
    table.add("a", a)
    for name, spec in _all_specs(args.variant, params):
        table.add(name, eval_filter(spec, a))
    return table


def cmd_error_curve(args) -> CurveTable:
    a = parse_grid(args.a or "1e-2:1e2:200", "--a", log=True)
    variants = args.variant or ["arrazola", "prop1", "prop2"]
    params = _params(args, L=[7.0], d=[20], M=[1], t=[10.0], delta_arrazola=[0.1], delta_proposal=[0.1])
    table = CurveTable()
    table.add("a", a)
    for name, spec in _all_specs(variants, params):
        table.add(f"eps_{name}", relative_error(spec, a))
    return table


FIG9_SCALES = {"prop1": 1e3, "arrazola": 10.0}


def cmd_probability(args) -> CurveTable:
    variants = args.variant or ["arrazola", "prop1", "prop2"]
    bad = [v for v in variants if v not in ("arrazola", "prop1", "prop2")]
    if bad:
        raise UsageError("--variant", f"success probability is defined only for arrazola, prop1, prop2 (got {bad[0]})")
    deltas = np.asarray(args.delta) if args.delta else parse_grid(args.delta_grid, "--delta-grid", log=True)
    if np.any(deltas <= 0):
        raise UsageError("--delta", "probabilities need delta > 0")
    inst = QhoCoherentInstance(_pick(args.alpha, 2.5))
    f = qho_spectral(inst)
    L, d, M, t = _pick(args.L, [20.0]), _pick(args.d, [140]), _pick(args.M, [0]), _pick(args.t, [5.0])

    table = CurveTable()
    table.add("delta", deltas)
    for v in dict.fromkeys(variants):
        if v == "arrazola":
            combos = [(f"L={format_param(Li)}_d={di}", lambda D, Li=Li, di=di: FilterSpec.arrazola(Li, di, D)) for Li in L for di in d]
        else:
            make = FilterSpec.proposal1 if v == "prop1" else FilterSpec.proposal2
            combos = [
                (f"M={Mi}_t={format_param(ti)}", lambda D, Mi=Mi, ti=ti, make=make: make(Mi, D, ti)) for Mi in M for ti in t
            ]
        for label, factory in combos:
            col = np.array([success_probability(factory(D), f) for D in deltas])
            name = f"P_{v}_{label}"
            if args.fig9_scales and v in FIG9_SCALES:
                col = col * FIG9_SCALES[v]
                name += f"_x{format_param(FIG9_SCALES[v])}"
            table.add(name, col)
    return table


def cmd_solve(args) -> CurveTable:
    if args.problem is None:
        raise UsageError("--problem", "choose poisson or qho")
    variants = args.variant or ["arrazola", "prop1", "prop2"]
    table = CurveTable()
    if args.problem == "poisson":
        if args.alpha is not None or args.x is not None:
            raise UsageError("--alpha" if args.alpha is not None else "--x", "not used by --problem poisson")
        inst = PoissonGaussianInstance(_pick(args.sigma, 4.0))
        grid = parse_grid(args.r or "0.1:10:100", "--r", log=False)
        if np.any(grid < 0):
            raise UsageError("--r", "radii must be nonnegative")
        t_default = [1.0, 10.0, 100.0]
        table.add("r", grid)
        table.add("exact", poisson_exact(inst, grid))
        solve = lambda spec: poisson_approx(inst, spec, grid)  # noqa: E731
    else:
        if args.sigma is not None or args.r is not None:
            raise UsageError("--sigma" if args.sigma is not None else "--r", "not used by --problem qho")
        inst = QhoCoherentInstance(_pick(args.alpha, 2.5))
        grid = parse_grid(args.x or "-1:5:121", "--x", log=False)
        t_default = [1.0, 5.0, 10.0]
        table.add("x", grid)
        table.add("exact", qho_exact(inst, grid))
        solve = lambda spec: qho_approx(inst, spec, grid)  # noqa: E731

    params = _params(args, L=[20.0], d=[140], M=[0], t=t_default, delta_arrazola=[0.01, 1.0], delta_proposal=[1.0])
    for name, spec in _all_specs([v for v in variants if v != "exact"], params):
        table.add(name, solve(spec))
    return table


def cmd_coefficients(args) -> CurveTable:
    if not args.variant or len(args.variant) != 1 or args.variant[0] not in ("arrazola", "prop1", "prop2"):
        raise UsageError("--variant", "give exactly one of arrazola, prop1, prop2")
    v = args.variant[0]
    for flag in ("L", "d", "M", "delta"):
        if getattr(args, flag) is not None and len(getattr(args, flag)) != 1:
            raise UsageError(f"--{flag}", "coefficients takes a single value")
    if v == "arrazola":
        state = barrier_coefficients(BarrierParams(_pick(args.L, [20.0])[0], _pick(args.d, [140])[0]))
    else:
        make = proposal1_coefficients if v == "prop1" else proposal2_coefficients
        state = make(_pick(args.M, [1])[0], _pick(args.delta, [0.01])[0])
    table = CurveTable()
    table.add("n", state.indices)
    table.add("coefficient", state.coefficients)
    return table


COMMANDS = {
    "filter-curve": cmd_filter_curve,
    "error-curve": cmd_error_curve,
    "probability": cmd_probability,
    "solve": cmd_solve,
    "coefficients": cmd_coefficients,
}


def run(argv=None) -> CurveTable:
    """Parse ``argv`` and build the table; raises UsageError on bad flags."""
    args = build_parser().parse_args(argv)
    _validate(args)
    return COMMANDS[args.command](args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        table = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (QuadratureError, NonFiniteValueError, ZeroDivisionError, ValueError) as exc:
        print(f"cvpde: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            table.write_csv(fh)
    else:
        table.write_csv(sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
