"""Two-level pairing model and run parameters.

Each level ``i`` holds ``omega_i`` time-reversed pair states ("pair modes")
at single-particle energy ``eps_i``.  The Hamiltonian is

    H = sum_k eps_k (n_k + n_kbar) - sum_{k,k'} g_{l(k) l(k')} S+_k S-_k'

where ``g_ij`` is the effective coupling returned by :meth:`PairingModel.coupling`.
Levels are always stored with ``eps1 <= eps2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import DegeneracyTooSmall, ModelError, PairCountOutOfRange

__all__ = [
    "StrengthConvention",
    "PairType",
    "PairingModel",
    "Occupancy",
    "RunParams",
    "validate",
    "check_pair_type",
    "read_config",
    "params_from_mapping",
    "CONFIG_KEYS",
]


class StrengthConvention(str, enum.Enum):
    """How a strength ``G_ij`` enters the Hamiltonian coupling."""

    RAW = "raw"
    TIMES_FOUR = "times-four"

    @property
    def factor(self) -> float:
        return 4.0 if self is StrengthConvention.TIMES_FOUR else 1.0

    @classmethod
    def parse(cls, value) -> "StrengthConvention":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"raw": cls.RAW, "1": cls.RAW, "times-four": cls.TIMES_FOUR, "4": cls.TIMES_FOUR, "x4": cls.TIMES_FOUR}
        try:
            return aliases[key]
        except KeyError:
            raise ModelError(f"unknown strength convention {value!r}") from None


class PairType(enum.IntEnum):
    """Placement of the two qubits A and B on the levels."""

    SAME_LOWER = 1
    CROSS = 2
    SAME_UPPER = 3

    @property
    def levels(self) -> tuple[int, int]:
        """Level index (0 = lower, 1 = upper) of qubit A and qubit B."""
        return {1: (0, 0), 2: (0, 1), 3: (1, 1)}[int(self)]

    def mirrored(self) -> "PairType":
        """Type obtained by exchanging the two levels (1 <-> 3)."""
        return PairType(4 - int(self)) if self is not PairType.CROSS else self

    @classmethod
    def parse(cls, value) -> "PairType":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        names = {"1": 1, "2": 2, "3": 3, "same_lower": 1, "cross": 2, "same_upper": 3}
        try:
            return cls(names[text])
        except KeyError:
            raise ModelError(f"unknown pair type {value!r}") from None


@dataclass(frozen=True)
class PairingModel:
    omega1: int
    omega2: int
    eps1: float = 0.0
    eps2: float = 1.0
    g11: float = 0.6
    g12: float = 0.6
    g22: float = 0.6
    strength_convention: StrengthConvention = StrengthConvention.RAW
    # True when the caller listed the levels in descending energy order
    levels_swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        for name in ("omega1", "omega2"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ModelError(f"{name} must be a positive integer, got {value!r}")
            set_(self, name, int(value))
        for name in ("eps1", "eps2", "g11", "g12", "g22"):
            set_(self, name, float(getattr(self, name)))
        for name in ("g11", "g12", "g22"):
            if not getattr(self, name) >= 0.0:
                raise ModelError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        set_(self, "strength_convention", StrengthConvention.parse(self.strength_convention))
        if self.eps1 > self.eps2:
            d = self.__dict__
            d["omega1"], d["omega2"] = d["omega2"], d["omega1"]
            d["eps1"], d["eps2"] = d["eps2"], d["eps1"]
            d["g11"], d["g22"] = d["g22"], d["g11"]
            d["levels_swapped"] = True

    @classmethod
    def uniform(cls, omega1: int, omega2: int | None = None, g: float = 0.6, *, eps1: float = 0.0,
                eps2: float = 1.0, strength_convention=StrengthConvention.RAW) -> "PairingModel":
        """Model with one pairing strength for all three couplings."""
        return cls(omega1, omega1 if omega2 is None else omega2, eps1, eps2, g, g, g, strength_convention)

    @property
    def omegas(self) -> tuple[int, int]:
        return (self.omega1, self.omega2)

    @property
    def energies(self) -> tuple[float, float]:
        return (self.eps1, self.eps2)

    @property
    def n_modes(self) -> int:
        return self.omega1 + self.omega2

    def coupling(self, i: int, j: int) -> float:
        """Effective Hamiltonian coupling between levels ``i`` and ``j`` (0-based)."""
        g = (self.g11, self.g12, self.g22)[i + j]
        return g * self.strength_convention.factor

    @property
    def couplings(self) -> tuple[float, float, float]:
        """Effective (g11, g12, g22) after applying the strength convention."""
        f = self.strength_convention.factor
        return (self.g11 * f, self.g12 * f, self.g22 * f)

    def scaled(self, g: float) -> "PairingModel":
        """Copy with all three strengths set to ``g``."""
        return replace(self, g11=g, g12=g, g22=g)

    def to_dict(self) -> dict:
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "g11": self.g11,
            "g12": self.g12,
            "g22": self.g22,
            "strength_convention": self.strength_convention.value,
        }


@dataclass(frozen=True)
class Occupancy:
    """Number of particle pairs; the particle number is ``2 p``."""

    p: int

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise PairCountOutOfRange(f"pair number must be a non-negative integer, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def n_particles(self) -> int:
        return 2 * self.p

    def holes(self, model: PairingModel) -> int:
        return model.n_modes - self.p


@dataclass(frozen=True)
class RunParams:
    model: PairingModel
    p: int
    pair_type: PairType | None = None


def _as_pairs(occ) -> int:
    return occ.p if isinstance(occ, Occupancy) else Occupancy(occ).p


def validate(model: PairingModel, occ, pair_type=None) -> RunParams:
    """Check the pair number and qubit placement against the degeneracies.

    ``pair_type`` refers to the levels as the caller listed them; when the
    model reordered its levels on construction, types 1 and 3 are exchanged
    so that they keep pointing at the same physical level.
    """
    p = _as_pairs(occ)
    if p > model.n_modes:
        raise PairCountOutOfRange(f"p={p} exceeds omega1+omega2={model.n_modes}")
    if pair_type is None:
        return RunParams(model, p, None)
    t = PairType.parse(pair_type)
    if model.levels_swapped:
        t = t.mirrored()
    return RunParams(model, p, check_pair_type(model, t))


def check_pair_type(model: PairingModel, pair_type) -> PairType:
    """Parse ``pair_type`` (relative to the stored level order) and check the degeneracies."""
    t = PairType.parse(pair_type)
    if t is PairType.SAME_LOWER and model.omega1 < 2:
        raise DegeneracyTooSmall("type 1 needs two modes in the lower level (omega1 >= 2)")
    if t is PairType.SAME_UPPER and model.omega2 < 2:
        raise DegeneracyTooSmall("type 3 needs two modes in the upper level (omega2 >= 2)")
    return t


CONFIG_KEYS = ("omega1", "omega2", "eps1", "eps2", "g11", "g12", "g22", "p", "pair_type",
               "strength_convention", "hartree")


def read_config(path) -> dict[str, str]:
    """Read a ``key = value`` (or ``key: value``) file; ``#`` starts a comment."""
    out: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, value = line.split(sep, 1)
                break
        else:
            raise ModelError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key = key.strip().lower().replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ModelError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _to_int(key, value):
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise ModelError(f"{key}: expected an integer, got {value!r}") from None
    if f != int(f):
        raise ModelError(f"{key}: expected an integer, got {value!r}")
    return int(f)


def _to_float(key, value):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ModelError(f"{key}: expected a number, got {value!r}") from None


def params_from_mapping(values: Mapping[str, object]) -> tuple[PairingModel, int | None, PairType | None]:
    """Build ``(model, p, pair_type)`` from string or typed values; missing keys use defaults."""
    kw = {}
    for key in ("omega1", "omega2"):
        if key in values:
            kw[key] = _to_int(key, values[key])
    if "omega1" not in kw:
        raise ModelError("omega1 is required")
    kw.setdefault("omega2", kw["omega1"])
    for key in ("eps1", "eps2", "g11", "g12", "g22"):
        if key in values:
            kw[key] = _to_float(key, values[key])
    if "strength_convention" in values:
        kw["strength_convention"] = StrengthConvention.parse(values["strength_convention"])
    model = PairingModel(**kw)
    p = _to_int("p", values["p"]) if values.get("p") is not None else None
    t = PairType.parse(values["pair_type"]) if values.get("pair_type") is not None else None
    return model, p, t
