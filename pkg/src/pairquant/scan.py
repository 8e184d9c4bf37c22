"""Parameter scans over pair number and pairing strength, and table output."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from . import __version__
from .bcs import bcs_two_qubit_state, solve_bcs
from .errors import ModelError, PairQuantError
from .exact import exact_rho, solve_exact
from .model import PairingModel, PairType, check_pair_type
from .onelevel import OneLevelParams, one_level_limits, one_level_rho
from .projection import pbcs_energy, pbcs_rho
from .xstate import discord

__all__ = [
    "Method",
    "ScanSpec",
    "ScanRow",
    "run_scan",
    "emit",
    "render",
    "HEADER",
    "EmitError",
    "worker_count",
]

HEADER = ("p", "g", "energy", "rho11", "rho22", "rho33", "rho44", "rho23", "concurrence",
          "mutual_info", "classical", "discord", "s1", "s2", "theta", "branch")
_MEASURES = ("concurrence", "mutual_info", "classical", "discord", "s1", "s2", "theta")


class Method(str, enum.Enum):
    BCS = "bcs"
    PBCS = "pbcs"
    EXACT = "exact"
    ONELEVEL = "one-level"


class EmitError(OSError):
    pass


@dataclass(frozen=True)
class ScanSpec:
    method: Method
    model: PairingModel | None
    p_values: tuple[int, ...]
    pair_type: PairType | None = PairType.CROSS
    g_values: tuple[float, ...] | None = None
    g_ref: float | None = None
    hartree: bool = True
    a_side: bool = False
    omega: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.p_values:
            raise ModelError("empty pair-number range")
        if self.g_values is not None:
            if not self.g_values:
                raise ModelError("empty strength range")
            if any(not g >= 0.0 for g in self.g_values):
                raise ModelError("pairing strengths must be >= 0")
        if self.method is Method.ONELEVEL:
            if self.omega is None:
                raise ModelError("one-level scans need omega")
            for p in self.p_values:
                OneLevelParams(self.omega, p)
            return
        if self.model is None:
            raise ModelError(f"{self.method.value} scans need a model")
        if min(self.p_values) < 0 or max(self.p_values) > self.model.n_modes:
            raise ModelError(f"pair numbers must lie in [0, {self.model.n_modes}]")
        check_pair_type(self.model, self.pair_type)

    def points(self) -> list[tuple[int, float | None]]:
        """(p, g) in emission order: p ascending, then g ascending."""
        gs = sorted(set(self.g_values)) if self.g_values is not None else [None]
        return [(p, g) for p in sorted(set(self.p_values)) for g in gs]

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "model": self.model.to_dict() if self.model is not None else None,
            "p_values": list(self.p_values),
            "pair_type": int(self.pair_type) if self.pair_type is not None else None,
            "g_values": list(self.g_values) if self.g_values is not None else None,
            "g_ref": self.g_ref,
            "hartree": self.hartree,
            "a_side": self.a_side,
            "omega": self.omega,
        }


@dataclass(frozen=True)
class ScanRow:
    p: int
    g: float | None
    energy: float | None
    rho: tuple[float, float, float, float, float] | None
    measures: dict | None
    extras: dict = field(default_factory=dict)
    error: str | None = None

    def record(self, columns: Sequence[str]) -> dict:
        base = {"p": self.p, "g": self.g, "energy": self.energy}
        if self.rho is not None:
            base.update(zip(("rho11", "rho22", "rho33", "rho44", "rho23"), self.rho))
        if self.measures is not None:
            base.update(self.measures)
        base.update(self.extras)
        if self.error is not None:
            base["error"] = self.error
        return {c: base.get(c) for c in columns}


def _effective_g(model: PairingModel) -> float:
    return model.couplings[1]


def _evaluate(spec: ScanSpec, p: int, g: float | None) -> ScanRow:
    extras = {}
    if spec.method is Method.ONELEVEL:
        rho = one_level_rho(spec.omega, p)
        lim = one_level_limits(spec.omega) if spec.omega >= 3 else None
        energy, g_eff = None, None
        if lim is not None:
            extras = {
                "asym_concurrence": lim.concurrence_limit,
                "asym_mutual_info": lim.total(p),
                "asym_classical": lim.classical(p),
                "asym_discord": lim.discord(p),
            }
    else:
        model = spec.model if g is None else spec.model.scaled(g)
        g_eff = _effective_g(model)
        if spec.method is Method.EXACT:
            state = solve_exact(model, p)
            energy, rho = state.energy, exact_rho(state, spec.pair_type)
            extras["e0"] = energy
        else:
            sol = solve_bcs(model, p, hartree=spec.hartree)
            if spec.method is Method.BCS:
                energy, rho = sol.energy, bcs_two_qubit_state(sol, spec.pair_type)
            else:
                energy, rho = pbcs_energy(model, sol, p), pbcs_rho(model, sol, p, spec.pair_type)
    rho.check()
    cs = discord(rho)
    measures = {k: getattr(cs, k) for k in _MEASURES}
    measures["branch"] = cs.branch
    if spec.a_side:
        extras["discord_a"] = discord(rho, side="A").discord
    return ScanRow(p, g_eff, energy, rho.as_tuple(), measures, extras)


def _evaluate_safe(args) -> ScanRow:
    spec, p, g = args
    try:
        return _evaluate(spec, p, g)
    except PairQuantError as exc:
        model = spec.model if (g is None or spec.model is None) else spec.model.scaled(g)
        return ScanRow(p, _effective_g(model) if model is not None else None, None, None, None,
                       error=f"{type(exc).__name__}: {exc}")


def worker_count() -> int:
    """Worker bound from ``PAIRQUANT_THREADS``, defaulting to the logical CPU count."""
    raw = os.environ.get("PAIRQUANT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ModelError(f"PAIRQUANT_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def run_scan(spec: ScanSpec, workers: int | None = None) -> list[ScanRow]:
    """Evaluate every scan point; rows come back in ``spec.points()`` order."""
    tasks = [(spec, p, g) for p, g in spec.points()]
    workers = worker_count() if workers is None else max(1, workers)
    workers = min(workers, len(tasks))
    if workers <= 1 or len(tasks) < 8:
        rows = [_evaluate_safe(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_safe, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    if spec.g_ref is not None and spec.g_values is not None:
        rows = _with_ratios(spec, rows)
    return rows


def _with_ratios(spec: ScanSpec, rows: list[ScanRow]) -> list[ScanRow]:
    refs = {}
    for p in sorted(set(spec.p_values)):
        ref = _evaluate_safe((spec, p, spec.g_ref))
        refs[p] = ref.measures["discord"] if ref.measures else math.nan
    out = []
    for row in rows:
        d = row.measures["discord"] if row.measures else math.nan
        ratio = d / refs[row.p] if refs[row.p] else math.nan
        out.append(replace(row, extras={**row.extras, "discord_ratio": ratio}))
    return out


def columns_for(rows: Sequence[ScanRow]) -> list[str]:
    cols = list(HEADER)
    for row in rows:
        for key in row.extras:
            if key not in cols:
                cols.append(key)
    if any(row.error is not None for row in rows):
        cols.append("error")
    return cols


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value + 0.0, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return value + 0.0 if math.isfinite(value) else None
    return value


def render(rows: Sequence[ScanRow], fmt: str = "csv") -> str:
    """Serialize rows as CSV (fixed header, 17 significant digits) or a JSON array."""
    if not rows:
        raise ValueError("refusing to emit an empty table")
    cols = columns_for(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            rec = row.record(cols)
            writer.writerow([_fmt(rec[c]) for c in cols])
        return buf.getvalue()
    if fmt == "json":
        data = [{c: _json_value(v) for c, v in row.record(cols).items()} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(rows: Sequence[ScanRow], fmt: str = "csv", path=None, meta: dict | None = None) -> str:
    """Write the table to ``path`` (stdout when ``None``) and a ``.meta.json`` sidecar next to it."""
    text = render(rows, fmt)
    if path is None:
        return text
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
        if meta is not None:
            sidecar = path.with_name(path.name + ".meta.json")
            payload = {"pairquant_version": __version__, **meta}
            sidecar.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text
