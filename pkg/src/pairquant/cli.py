"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bcs import bcs_branches, solve_bcs
from .errors import ModelError, NumericalError, PairQuantError
from .exact import exact_rho, fock_oracle, fock_projected_bcs, fock_rho, solve_exact
from .model import PairType, params_from_mapping, read_config
from .projection import pbcs_energy, pbcs_rho
from .scan import EmitError, Method, ScanSpec, emit, run_scan
from .xstate import concurrence, wootters_concurrence

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3
SPIN_FLIP_TOL = 1e-7


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> tuple[int, ...]:
    """Inclusive integer range ``a:b`` or a single integer."""
    try:
        if ":" in text:
            a, b = (int(s) for s in text.split(":", 1))
        else:
            a = b = int(text)
    except ValueError:
        raise ModelError(f"expected 'a:b' or an integer, got {text!r}") from None
    if b < a:
        raise ModelError(f"empty range {text!r}")
    return tuple(range(a, b + 1))


def parse_g_values(values: str | None, grid: str | None) -> tuple[float, ...]:
    """Strengths from a comma list or an inclusive ``start:stop:step`` grid."""
    out: list[float] = []
    try:
        if values:
            out += [float(s) for s in values.split(",") if s.strip()]
        if grid:
            start, stop, step = (float(s) for s in grid.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            out += [round(start + k * step, 12) for k in range(count)]
    except ValueError:
        raise ModelError(f"bad strength list {values!r} / grid {grid!r}") from None
    if not out:
        raise ModelError("no pairing strengths given (use --g-values or --g-range)")
    return tuple(out)


def _model_options(parser: argparse.ArgumentParser) -> None:
    grp = parser.add_argument_group("model")
    grp.add_argument("--config", help="key = value file; flags override it")
    grp.add_argument("--omega", type=int, help="degeneracy of both levels")
    grp.add_argument("--omega1", type=int)
    grp.add_argument("--omega2", type=int)
    grp.add_argument("--eps1", type=float)
    grp.add_argument("--eps2", type=float)
    grp.add_argument("--g", type=float, help="uniform pairing strength")
    grp.add_argument("--g11", type=float)
    grp.add_argument("--g12", type=float)
    grp.add_argument("--g22", type=float)
    grp.add_argument("--convention", choices=["raw", "times-four"], help="strength convention")
    grp.add_argument("--no-hartree", action="store_true", help="drop the self-energy shift in the gap equations")


def _output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--output", "-o", help="output file (default: stdout)")
    parser.add_argument("--a-side", action="store_true", help="add the discord measured on qubit A")


def _resolve(args, defaults: dict | None = None):
    """Merge defaults, config file and flags into ``(model, p, pair_type, resolved)``."""
    values: dict[str, object] = dict(defaults or {})
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    if args.omega is not None:
        values["omega1"] = values["omega2"] = args.omega
    if args.g is not None:
        values["g11"] = values["g12"] = values["g22"] = args.g
    for key in ("omega1", "omega2", "eps1", "eps2", "g11", "g12", "g22"):
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    if args.convention is not None:
        values["strength_convention"] = args.convention
    if getattr(args, "p", None) is not None:
        values["p"] = args.p
    if getattr(args, "type", None) is not None:
        values["pair_type"] = args.type
    if args.no_hartree:
        values["hartree"] = "false"
    hartree = str(values.pop("hartree", "true")).strip().lower() not in ("false", "0", "no", "off")
    model, p, t = params_from_mapping(values)
    return model, p, t, hartree


def _p_values(args, model, p) -> tuple[int, ...]:
    if getattr(args, "p_range", None):
        return parse_range(args.p_range)
    if p is not None:
        return (p,)
    return tuple(range(0, model.n_modes + 1))


def _write(text: str) -> None:
    sys.stdout.write(text)


def _emit_scan(args, command: str, spec: ScanSpec) -> int:
    rows = run_scan(spec)
    meta = {"command": command, "format": args.format, "config_file": getattr(args, "config", None),
            "scan": spec.to_dict()}
    text = emit(rows, args.format, args.output, meta)
    if args.output is None:
        _write(text)
    return EXIT_OK


def cmd_scan(args, method: Method, command: str) -> int:
    model, p, t, hartree = _resolve(args)
    spec = ScanSpec(method, model, _p_values(args, model, p), t or PairType.CROSS,
                    hartree=hartree, a_side=args.a_side)
    return _emit_scan(args, command, spec)


def cmd_bcs(args) -> int:
    model, p, t, hartree = _resolve(args)
    if args.type is not None or args.p_range:
        spec = ScanSpec(Method.BCS, model, _p_values(args, model, p), t or PairType.CROSS,
                        hartree=hartree, a_side=args.a_side)
        return _emit_scan(args, "bcs", spec)
    if p is None:
        raise ModelError("bcs needs --p (or p in the config file)")
    if args.branch_report:
        payload = {"selected": solve_bcs(model, p, hartree=hartree).as_dict(),
                   "branches": [s.as_dict() if s is not None else None
                                for s in bcs_branches(model, p, hartree=hartree)]}
    else:
        payload = solve_bcs(model, p, hartree=hartree).as_dict()
    text = json.dumps(payload, indent=1) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise EmitError(f"cannot write {args.output}: {exc.strerror or exc}") from exc
    else:
        _write(text)
    return EXIT_OK


def cmd_one_level(args) -> int:
    p_values = parse_range(args.p_range) if args.p_range else tuple(range(0, args.omega + 1))
    spec = ScanSpec(Method.ONELEVEL, None, p_values, None, omega=args.omega, a_side=args.a_side)
    return _emit_scan(args, "one-level", spec)


def cmd_gscan(args) -> int:
    model, p, t, hartree = _resolve(args)
    g_values = parse_g_values(args.g_values, args.g_range)
    spec = ScanSpec(Method(args.method), model, _p_values(args, model, p), t or PairType.CROSS,
                    g_values=g_values, g_ref=args.g_ref, hartree=hartree, a_side=args.a_side)
    return _emit_scan(args, "gscan", spec)


def _checks(model, hartree, tol):
    """Yield ``(name, error, tolerance)`` for every oracle comparison on ``model``."""
    types = [t for t in PairType if (t is PairType.CROSS or model.omegas[t.levels[0]] >= 2)]
    for p in range(0, model.n_modes + 1):
        state = solve_exact(model, p)
        e_fock, _ = fock_oracle(model, p)
        yield f"exact energy p={p}", abs(state.energy - e_fock), tol
        sol = solve_bcs(model, p, hartree=hartree)
        e_proj = pbcs_energy(model, sol, p)
        yield f"variational order p={p}", max(0.0, state.energy - e_proj, e_proj - sol.energy), tol
        space, psi, _ = fock_projected_bcs(model, sol, p)
        h = space.hamiltonian()
        yield f"projected energy p={p}", abs(e_proj - float(psi @ (h @ psi))), tol
        e0, vec = space.ground_state()
        for t in types:
            a = np.array(exact_rho(state, t).as_tuple())
            b = np.array(fock_rho(space, vec, t).as_tuple())
            yield f"exact rho type={int(t)} p={p}", float(np.abs(a - b).max()), tol
            rho = pbcs_rho(model, sol, p, t)
            ref = fock_rho(space, psi, t)
            yield (f"projected rho type={int(t)} p={p}",
                   float(np.abs(np.array(rho.as_tuple()) - np.array(ref.as_tuple())).max()), tol)
            # square roots of near-zero spin-flip eigenvalues cap this route near sqrt(machine eps)
            yield (f"concurrence type={int(t)} p={p}",
                   abs(concurrence(rho) - wootters_concurrence(rho.matrix())), max(tol, SPIN_FLIP_TOL))


def cmd_validate(args) -> int:
    model, _, _, hartree = _resolve(args, {"omega1": 3, "omega2": 3})
    failures = total = 0
    for name, err, tol in _checks(model, hartree, args.tol):
        ok = err <= tol
        total += 1
        failures += not ok
        _write(f"{'PASS' if ok else 'FAIL'}  {name}  err={err:.3e}  tol={tol:.0e}\n")
    _write(f"{total - failures}/{total} checks passed\n")
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairquant", description="Two-level pairing model: BCS, projected BCS, "
                                                  "exact diagonalization and two-mode correlations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bcs", help="mean-field solution as JSON, or a BCS correlation table with --type")
    _model_options(p)
    _output_options(p)
    p.add_argument("--p", type=int, help="number of pairs")
    p.add_argument("--p-range", help="inclusive range a:b (table output)")
    p.add_argument("--type", type=int, choices=[1, 2, 3], help="pair type (table output)")
    p.add_argument("--branch-report", action="store_true", help="also dump both sign branches")
    p.set_defaults(func=cmd_bcs)

    for name, method in (("pbcs-scan", Method.PBCS), ("exact-scan", Method.EXACT)):
        p = sub.add_parser(name, help=f"{method.value} correlations over a range of pair numbers")
        _model_options(p)
        _output_options(p)
        p.add_argument("--p", type=int)
        p.add_argument("--p-range", help="inclusive range a:b (default: all pair numbers)")
        p.add_argument("--type", type=int, choices=[1, 2, 3], help="pair type (default 2)")
        p.set_defaults(func=lambda a, m=method, n=name: cmd_scan(a, m, n))

    p = sub.add_parser("one-level", help="closed-form single-level correlations")
    _output_options(p)
    p.add_argument("--omega", type=int, required=True)
    p.add_argument("--p-range", help="inclusive range a:b (default 0:omega)")
    p.set_defaults(func=cmd_one_level)

    p = sub.add_parser("gscan", help="correlations over a grid of uniform pairing strengths")
    _model_options(p)
    _output_options(p)
    p.add_argument("--method", choices=[m.value for m in (Method.PBCS, Method.EXACT, Method.BCS)],
                   default=Method.PBCS.value)
    p.add_argument("--p", type=int)
    p.add_argument("--p-range")
    p.add_argument("--type", type=int, choices=[1, 2, 3])
    p.add_argument("--g-values", help="comma-separated strengths")
    p.add_argument("--g-range", help="inclusive grid start:stop:step")
    p.add_argument("--g-ref", type=float, default=0.6, help="strength the discord_ratio column refers to")
    p.set_defaults(func=cmd_gscan)

    p = sub.add_parser("validate", help="cross-check against brute-force oracles on a small model")
    _model_options(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EmitError as exc:
        print(f"pairquant: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"pairquant: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ModelError, ValueError) as exc:
        print(f"pairquant: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"pairquant: {exc}", file=sys.stderr)
        return EXIT_IO
    except PairQuantError as exc:
        print(f"pairquant: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
