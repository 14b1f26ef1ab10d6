"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or validation
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .analysis import DEFAULT_TOL, default_grid, verify_bounds, verify_proposition
from .bounds import all_bounds
from .errors import DomainError
from .figures import FIGURE_IDS, OutputRecord, build_figure, write_csv
from .keyrate import KeyRateInputs, key_rate_lower_bound, scenario_inputs
from .scenario import HALF_PI, Scenario, conditional_sum

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

PROPOSITION_Q = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 10.0)
SWEEP_Q = (0.5, 1.0, 1.5, 2.0, 3.0, 5.0)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    points: int = 181
    sweep_points: int = 40
    tol: float = DEFAULT_TOL
    bound_tol: float = 1e-9
    bits: bool = False
    output: Optional[str] = None
    q_list: Optional[List[float]] = None
    strict_range: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("points", "sweep_points"):
            if getattr(self, name) < 2:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 2, got {getattr(self, name)}")
        for name in ("tol", "bound_tol"):
            value = getattr(self, name)
            if not 0 < value <= 1e-3:
                raise UsageError(f"--{name.replace('_', '-')} must lie in (0, 1e-3], got {value}")

    def provenance(self) -> dict:
        out = {"points": self.points, "tol": self.tol, "unit": "bits" if self.bits else "nats"}
        if self.q_list is not None:
            out["q_list"] = ",".join(f"{q:g}" for q in self.q_list)
        out.update(self.extra)
        return out


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; keys mirror long flag names."""
    cfg = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.lstrip("-").replace("-", "_")] = value
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropic-bounds",
        allow_abbrev=False,
        description="Conditional entropic uncertainty bounds for two-qubit Schmidt states.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="flat key=value file supplying defaults for flags")
    parser.add_argument("--bits", action="store_true", default=None,
                        help="report entropies in bits instead of nats")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", allow_abbrev=False,
                        help="exact conditional sum and all bounds for one scenario")
    ev.add_argument("--lambda", dest="lam", type=float, required=True)
    ev.add_argument("--theta", type=float, required=True)
    ev.add_argument("--epsilon", type=float, required=True)
    ev.add_argument("--q", type=float, default=1.0)
    ev.add_argument("--output", help="write the record here instead of stdout")

    fig = sub.add_parser("figure", allow_abbrev=False,
                         help="emit CSV data for one comparison figure")
    fig.add_argument("id", choices=FIGURE_IDS)
    fig.add_argument("--points", type=int, default=181, help="points along the x axis")
    fig.add_argument("--tol", type=float, default=DEFAULT_TOL, help="minimiser tolerance in theta")
    fig.add_argument("--lambda", dest="lam", type=float, help="override lambda (figures 2a/2b)")
    fig.add_argument("--epsilon", type=float, help="override epsilon (figures 2a/2b/3)")
    fig.add_argument("--q-list", type=_float_list, help="orders for figure 4, e.g. 0.5,1,2")
    fig.add_argument("--output", help="CSV path (default figure_<id>.csv, '-' for stdout)")

    ver = sub.add_parser("verify", allow_abbrev=False,
                         help="grid checks of the inequality and of the bounds")
    ver.add_argument("--points", type=int, default=201, help="alpha and p grid size")
    ver.add_argument("--sweep-points", type=int, default=40, help="lambda/epsilon/theta grid size")
    ver.add_argument("--q-list", type=_float_list, help="orders to check (overrides both defaults)")
    ver.add_argument("--tol", type=float, default=1e-10, help="allowed negative gap")
    ver.add_argument("--bound-tol", type=float, default=1e-9, help="allowed bound excess")
    ver.add_argument("--strict-range", action="store_true", default=None,
                     help="treat orders in (2, 3) like the others instead of only warning")
    ver.add_argument("--output", default="verify_report.txt", help="report path ('-' for stdout only)")

    kr = sub.add_parser("keyrate", allow_abbrev=False,
                        help="lower bound on the extractable key per state")
    kr.add_argument("--scenario", action="store_true", default=None,
                    help="derive c, S(B), S(A|B) from --lambda and --epsilon")
    kr.add_argument("--c", type=float)
    kr.add_argument("--sb", type=float)
    kr.add_argument("--sab", type=float)
    kr.add_argument("--lambda", dest="lam", type=float)
    kr.add_argument("--epsilon", type=float)
    kr.add_argument("--sx", type=float, required=False)
    kr.add_argument("--sy", type=float, required=False)
    kr.add_argument("--output")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]):
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for p in [parser, *subparsers.choices.values()]:
        dests = {a.dest: a for a in p._actions}
        # "lambda" is stored as "lam"
        values = {("lam" if k == "lambda" else k): v for k, v in cfg.items()}
        p.set_defaults(**{k: (_bool(v) if isinstance(dests[k], argparse._StoreTrueAction) else v)
                          for k, v in values.items() if k in dests})


def _emit(record: OutputRecord, output: Optional[str], bits: bool, config: Optional[dict] = None):
    record = record.in_bits() if bits else record
    if output in (None, "-"):
        write_csv(record, sys.stdout, config)
        return
    buf = io.StringIO()
    write_csv(record, buf, config)
    Path(output).write_text(buf.getvalue())


def cmd_evaluate(args) -> OutputRecord:
    try:
        s = Scenario(args.lam, args.theta, args.epsilon, args.q)
        exact = conditional_sum(s)
        b = all_bounds(s)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    record = OutputRecord(
        ["lambda", "theta", "epsilon", "q", "c", "exact", "b_deutsch", "b_mu", "b_maj2",
         "b_bccrr", "b_kpp", "b_theta", "analytic_min"],
        entropic=frozenset({"exact", "b_deutsch", "b_mu", "b_maj2", "b_bccrr", "b_kpp",
                            "b_theta", "analytic_min"}),
    )
    record.add(s.lam, s.theta, s.epsilon, s.q, s.c, exact, b.b_deutsch, b.b_mu, b.b_maj2,
               b.b_bccrr, b.b_kpp, b.b_theta, b.analytic_min)
    return record


def cmd_figure(args, config: RunConfig) -> OutputRecord:
    try:
        return build_figure(args.id, config.points, config.tol, lam=args.lam,
                            epsilon=args.epsilon, q_list=config.q_list)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_keyrate(args) -> OutputRecord:
    try:
        if args.scenario:
            missing = [f for f in ("lam", "epsilon", "sx", "sy") if getattr(args, f) is None]
            inputs = None if missing else scenario_inputs(args.lam, args.epsilon, args.sx, args.sy)
        else:
            missing = [f for f in ("c", "sb", "sab", "sx", "sy") if getattr(args, f) is None]
            inputs = None if missing else KeyRateInputs(args.c, args.sb, args.sab, args.sx, args.sy)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if missing:
        names = ", ".join("--" + ("lambda" if m == "lam" else m) for m in missing)
        raise UsageError(f"keyrate: missing {names}")
    k = key_rate_lower_bound(inputs)
    record = OutputRecord(["c", "s_b", "s_a_given_b", "s_x_given_xp", "s_y_given_yp",
                           "key_rate", "positive_key"],
                          entropic=frozenset({"s_b", "s_a_given_b", "s_x_given_xp",
                                              "s_y_given_yp", "key_rate"}))
    record.add(inputs.c, inputs.s_b, inputs.s_a_given_b, inputs.s_x_given_xp,
               inputs.s_y_given_yp, k, k > 0)
    return record


def cmd_verify(args, config: RunConfig):
    """Run both sweeps; return ``(exit_code, report_text)``."""
    grid = default_grid(config.points)
    sweep = np.linspace(0.0, 1.0, config.sweep_points)
    angles = np.linspace(0.0, HALF_PI, config.sweep_points)
    try:
        prop = verify_proposition(grid, grid, config.q_list or PROPOSITION_Q, args.tol,
                                  config.strict_range)
        bnd = verify_bounds(sweep, angles, angles, config.q_list or SWEEP_Q,
                            config.bound_tol, config.strict_range)
    except DomainError as exc:
        raise UsageError(str(exc)) from None

    lines = ["# entropic-bounds verification report",
             "# " + " ".join(f"{k}={v}" for k, v in sorted(config.provenance().items())),
             "", "[inequality]",
             f"q_values = {', '.join(f'{q:g}' for q in prop.q_values)}",
             f"grid = {config.points} x {config.points}",
             f"grid_min_gap = {prop.grid_min_gap:.6e}",
             f"equality_max_abs = {prop.equality_max_abs:.6e}",
             f"violations = {prop.violation_count}"]
    lines += [f"  alpha={a:.6g} p={p:.6g} q={q:g} gap={g:.6e}" for a, p, q, g in prop.violations]
    lines += ["", "[bounds]",
              f"q_values = {', '.join(f'{q:g}' for q in bnd.q_values)}",
              f"grid = {config.sweep_points}^3, points checked = {bnd.checked}",
              f"min(exact - b_kpp) = {bnd.kpp_min_margin:.6e}",
              f"min(exact - b_theta) = {bnd.theta_min_margin:.6e}",
              f"failures = {bnd.failure_count}"]
    lines += [f"  lambda={l:.6g} epsilon={e:.6g} theta={t:.6g} q={q:g} {n}: margin={m:.6e}"
              for l, e, t, q, n, m in bnd.failures]
    if prop.warning_count or bnd.warning_count:
        lines += ["", "[warnings]",
                  "orders in (2, 3) are outside the proven range; negative gaps there are expected",
                  f"inequality gaps below -tol: {prop.warning_count}",
                  f"bound excesses: {bnd.warning_count}"]
        lines += [f"  alpha={a:.6g} p={p:.6g} q={q:g} gap={g:.6e}" for a, p, q, g in prop.warnings[:10]]
    ok = prop.ok and bnd.ok
    lines += ["", f"result = {'PASS' if ok else 'FAIL'}"]
    return (EXIT_OK if ok else EXIT_FAIL), "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        bits = _bool(args.bits) if args.bits is not None else False
        if args.command == "evaluate":
            _emit(cmd_evaluate(args), args.output, bits)
            return EXIT_OK
        if args.command == "keyrate":
            _emit(cmd_keyrate(args), args.output, bits)
            return EXIT_OK

        config = RunConfig(
            points=args.points,
            sweep_points=getattr(args, "sweep_points", 40),
            tol=args.tol,
            bound_tol=getattr(args, "bound_tol", 1e-9),
            bits=bits,
            output=args.output,
            q_list=args.q_list,
            strict_range=bool(getattr(args, "strict_range", None)),
        )
        if args.command == "figure":
            config.extra = {"figure": args.id}
            if args.lam is not None:
                config.extra["lambda"] = args.lam
            if args.epsilon is not None:
                config.extra["epsilon"] = args.epsilon
            output = args.output or f"figure_{args.id}.csv"
            _emit(cmd_figure(args, config), output, bits, config.provenance())
            if output != "-":
                print(output)
            return EXIT_OK

        code, text = cmd_verify(args, config)
        sys.stdout.write(text)
        if args.output != "-":
            Path(args.output).write_text(text)
        return code
    except UsageError as exc:
        print(f"entropic-bounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"entropic-bounds: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:
        # argparse reports usage errors through SystemExit(2)
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
