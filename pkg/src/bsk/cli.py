"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.
All output is a deterministic function of the arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import DomainError
from .grid import DiskGrid
from .janowski import (
    B_SPLIT,
    JanowskiPair,
    alpha0_residual,
    certify,
    evaluate_theorem1,
    evaluate_theorem2,
    hypothesis_gap,
    numeric_membership,
    records_to_csv,
    scan_region,
    solve_alpha0,
)
from .kernel import EvalConfig, KernelParams, eval_derivative, eval_integral, eval_series
from .targets import MobiusTarget, PolynomialTarget, identity_target
from .third_order import numeric_dominance
from .verify import IDENTITIES, verify_all

COMMANDS = ("eval", "verify", "janowski", "scan", "dominance", "alpha0")

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGENCE = 0, 2, 3


class UsageError(DomainError):
    pass


@dataclass
class RunConfig:
    command: str
    params: KernelParams | None = None
    pair: JanowskiPair | None = None
    grid_spec: tuple[int, int, float] = (64, 128, 1e-3)
    tol: EvalConfig = field(default_factory=EvalConfig)
    output: str = "json"
    out_path: str | None = None
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        n_r, n_t, _ = self.grid_spec
        if n_r < 4 or n_t < 4:
            raise UsageError("grid sizes must be at least 4")
        if self.output not in ("json", "csv"):
            raise UsageError(f"unknown output format {self.output!r}")

    @property
    def grid(self) -> DiskGrid:
        return DiskGrid(*self.grid_spec)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def _json_value(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        s = f"{v:.17g}"
        return s if any(c in s for c in ".en") else s + ".0"
    if isinstance(v, str):
        import json

        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{_json_value(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def dumps_json(obj) -> str:
    """JSON with every float printed to 17 significant digits."""
    return _json_value(obj) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_csv_cell(v) for v in r.values()])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _real_lambda(cfg: RunConfig) -> float:
    lam = cfg.params.lam
    if lam.imag != 0:
        raise UsageError("theorem predicates require a real lambda (--lambda-im must be 0)")
    return lam.real


def _cmd_eval(cfg: RunConfig):
    o = cfg.options
    z = complex(o["z_re"], o["z_im"])
    if o["method"] == "integral":
        if o["order"] != 0:
            raise UsageError("the integral method evaluates the kernel itself (order 0)")
        val = eval_integral(cfg.params, z, cfg.tol)
    else:
        val = eval_derivative(cfg.params, z, o["order"], cfg.tol)
    return {"value_re": val.real, "value_im": val.imag}


def _cmd_verify(cfg: RunConfig):
    report = verify_all(cfg.params, cfg.grid, cfg.tol, cfg.options.get("only"))
    if cfg.output == "csv":
        return [c.as_dict() for c in report.checks]
    return report.as_dict()


def _cmd_janowski(cfg: RunConfig):
    lam = _real_lambda(cfg)
    pair, a = cfg.pair, cfg.params.alpha
    out: dict[str, Any] = {"alpha": a, "lambda": lam, "A": pair.a_param, "B": pair.b_param}
    out["verdict"] = certify(pair, a, lam).value
    for name, fn, applies in (
        ("theorem1", evaluate_theorem1, pair.b_param <= B_SPLIT),
        ("theorem2", evaluate_theorem2, pair.b_param >= B_SPLIT),
    ):
        if applies:
            rep = fn(pair, a, lam)
            out[name] = {
                "verdict": rep.verdict.value,
                "hypothesis": rep.hypothesis,
                "branch1_applies": rep.branch1_applies,
                "branch1_holds": rep.branch1_holds,
                "branch2_applies": rep.branch2_applies,
                "branch2_holds": rep.branch2_holds,
            }
    mem = numeric_membership(cfg.params, pair, cfg.grid, cfg.tol)
    out.update(
        numeric_member=mem.member,
        min_margin=mem.min_margin,
        witness_re=mem.witness.real,
        witness_im=mem.witness.imag,
        hypothesis_gap=hypothesis_gap(cfg.params, pair, cfg.grid, cfg.tol),
    )
    if cfg.output == "csv":
        out = {k: v for k, v in out.items() if not isinstance(v, dict)}
    return out


def _cmd_scan(cfg: RunConfig):
    lam = _real_lambda(cfg)
    o = cfg.options
    records = scan_region(
        cfg.pair, (o["alpha_lo"], o["alpha_hi"], o["n"]), lam, cfg.grid, cfg.tol, workers=o["workers"]
    )
    if cfg.output == "csv":
        return records_to_csv(records)
    return [r.as_dict() for r in records]


def _build_target(o: dict):
    kind = o["target"]
    if kind == "identity":
        q = identity_target()
    elif kind == "scaled":
        q = identity_target(o["scale"])
    elif kind == "mobius":
        q = MobiusTarget(o["A"], o["B"])
    else:
        if not o["coeffs"]:
            raise UsageError("--coeffs is required for a polynomial target")
        q = PolynomialTarget(tuple(o["coeffs"]))
    if o["dilate"] is not None:
        q = q.dilated(o["dilate"])
    return q


def _cmd_dominance(cfg: RunConfig):
    q = _build_target(cfg.options)
    res = numeric_dominance(cfg.params.alpha, q, cfg.grid, cfg.tol)
    return {
        "alpha": cfg.params.alpha,
        "dominated": res.dominated,
        "min_margin": res.min_margin,
        "witness_re": res.witness.real,
        "witness_im": res.witness.imag,
    }


def _cmd_alpha0(cfg: RunConfig):
    a0 = solve_alpha0()
    return {"alpha0": a0, "residual": alpha0_residual(a0)}


_HANDLERS = {
    "eval": _cmd_eval,
    "verify": _cmd_verify,
    "janowski": _cmd_janowski,
    "scan": _cmd_scan,
    "dominance": _cmd_dominance,
    "alpha0": _cmd_alpha0,
}


def render(result, output: str) -> str:
    if output == "json":
        return dumps_json(result)
    if isinstance(result, str):
        return result
    return rows_to_csv(result if isinstance(result, list) else [result])


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        text = render(_HANDLERS[config.command](config), config.output)
    except ArithmeticError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NONCONVERGENCE
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    if config.out_path:
        with open(config.out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, kernel: bool = True) -> None:
    if kernel:
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--lambda-re", "--lambda", dest="lambda_re", type=float, default=1.0)
        p.add_argument("--lambda-im", dest="lambda_im", type=float, default=0.0)
    p.add_argument("--n-r", type=int, default=64)
    p.add_argument("--n-theta", type=int, default=128)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--rel-tol", type=float, default=EvalConfig.rel_tol)
    p.add_argument("--max-terms", type=int, default=EvalConfig.max_terms)
    p.add_argument("--quad-levels", type=int, default=EvalConfig.quad_levels)
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--out", dest="out_path", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsk", description="Bessel-Struve kernel toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate the kernel or a derivative at one point")
    _common(p)
    p.add_argument("--z-re", type=float, default=0.0)
    p.add_argument("--z-im", type=float, default=0.0)
    p.add_argument("--method", choices=("series", "integral"), default="series")
    p.add_argument("--order", type=int, choices=(0, 1, 2, 3), default=0)

    p = sub.add_parser("verify", help="check every kernel identity on a grid")
    _common(p)
    p.add_argument("--only", nargs="+", choices=IDENTITIES, default=None)

    p = sub.add_parser("janowski", help="theorem predicates plus sampled membership")
    _common(p)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)

    p = sub.add_parser("scan", help="classify a range of orders")
    _common(p, kernel=False)
    p.add_argument("--lambda-re", "--lambda", dest="lambda_re", type=float, default=1.0)
    p.add_argument("--lambda-im", dest="lambda_im", type=float, default=0.0)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--alpha-lo", type=float, required=True)
    p.add_argument("--alpha-hi", type=float, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("dominance", help="sampled check of g_{alpha+1} against a target q")
    _common(p)
    p.add_argument("--target", choices=("identity", "scaled", "mobius", "poly"), default="identity")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--B", type=float, default=-1.0)
    p.add_argument("--coeffs", type=lambda s: [float(x) for x in s.split(",")], default=None)
    p.add_argument("--dilate", type=float, default=None)

    p = sub.add_parser("alpha0", help="root of 4a G(a+1) = sqrt(pi) G(a+1/2)")
    _common(p, kernel=False)
    return parser


def _workers_from_env() -> int:
    raw = os.environ.get("BSK_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"BSK_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("BSK_THREADS must be >= 0")
    return n


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items()}
    params = None
    if hasattr(ns, "alpha"):
        params = KernelParams(ns.alpha, complex(ns.lambda_re, ns.lambda_im))
    elif ns.command == "scan":
        opts["workers"] = _workers_from_env()
        # kernel params are per scanned order; keep lambda here
        params = KernelParams(max(ns.alpha_lo, 0.0), complex(ns.lambda_re, ns.lambda_im))
    pair = None
    if ns.command in ("janowski", "scan"):
        pair = JanowskiPair(ns.A, ns.B)
    return RunConfig(
        command=ns.command,
        params=params,
        pair=pair,
        grid_spec=(ns.n_r, ns.n_theta, ns.eps),
        tol=EvalConfig(ns.rel_tol, ns.max_terms, ns.quad_levels),
        output=ns.output,
        out_path=ns.out_path,
        options=opts,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        config.grid  # validates the grid spec
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
