"""Parameter sets for the advanced equation

    u q'(u) = sum_j alpha_j q(u + v_j)

and its retarded partner

    (u p(u))' = -sum_j alpha_j p(u - v_j),

together with the named presets (Dickman, Buchstab, Iwaniec's kappa family).
"""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ValidationError
from .special import EULER_GAMMA

PRESET_NAMES = ("dickman", "buchstab", "iwaniec", "q1")


@dataclass(frozen=True)
class DdeParams:
    """Shifts ``0 = v_0 < ... < v_m`` and coefficients ``alpha_0..alpha_m``.

    Derived fields: ``beta`` (sum of the alphas), ``a = 1 + alpha_0``,
    ``b = (alpha_1, ..., alpha_m)`` and the boundary constant
    ``c0 = prod_{j>=1} (v_j e^gamma)^(-alpha_j)``.

    Build instances with :func:`make_params`, which validates the input.
    """

    alphas: tuple[complex, ...]
    shifts: tuple[float, ...]
    m: int = field(init=False)
    beta: complex = field(init=False)
    a: complex = field(init=False)
    b: tuple[complex, ...] = field(init=False)
    c0: complex = field(init=False)

    def __post_init__(self):
        alphas = self.alphas
        shifts = self.shifts
        object.__setattr__(self, "m", len(shifts) - 1)
        object.__setattr__(self, "beta", complex(sum(alphas)))
        object.__setattr__(self, "a", 1 + alphas[0])
        object.__setattr__(self, "b", tuple(alphas[1:]))
        log_c0 = -sum(al * (cmath.log(v) + EULER_GAMMA) for al, v in zip(alphas[1:], shifts[1:]))
        object.__setattr__(self, "c0", cmath.exp(log_c0))

    @property
    def alpha0(self) -> complex:
        return self.alphas[0]

    @property
    def v1(self) -> float:
        return self.shifts[1]

    @property
    def vm(self) -> float:
        return self.shifts[-1]

    def with_alpha0(self, alpha0: complex) -> "DdeParams":
        """Same shifts and ``b``, different ``alpha_0`` (used when lifting ``a``)."""
        return make_params((alpha0,) + self.b, self.shifts)

    def negated_b(self) -> "DdeParams":
        return make_params((self.alpha0,) + tuple(-x for x in self.b), self.shifts)

    def to_dict(self) -> dict:
        return {
            "alphas": [[z.real, z.imag] for z in self.alphas],
            "shifts": list(self.shifts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _as_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValidationError(f"complex value must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def make_params(alphas: Sequence, shifts: Sequence[float]) -> DdeParams:
    """Validate ``alphas``/``shifts`` and build a :class:`DdeParams`."""
    alphas = tuple(_as_complex(x) for x in alphas)
    shifts = tuple(float(v) for v in shifts)
    if not shifts:
        raise ValidationError("shift list is empty")
    if len(alphas) != len(shifts):
        raise ValidationError(
            f"alphas and shifts must have equal length, got {len(alphas)} and {len(shifts)}"
        )
    if shifts[0] != 0.0:
        raise ValidationError(f"shifts[0] must be 0, got {shifts[0]}")
    if len(shifts) == 1:
        raise ValidationError(
            "m = 0 is the plain Euler-Cauchy ODE (q* = u^beta); at least one nonzero shift is required"
        )
    for j in range(1, len(shifts)):
        if not shifts[j] > shifts[j - 1]:
            raise ValidationError(
                f"shifts must be strictly increasing: shifts[{j}] = {shifts[j]} <= shifts[{j - 1}] = {shifts[j - 1]}"
            )
    for j in range(1, len(alphas)):
        if alphas[j] == 0:
            raise ValidationError(f"alphas[{j}] is zero; drop that shift instead")
    return DdeParams(alphas, shifts)


@dataclass(frozen=True)
class Preset:
    name: str
    kappa: float | None = None


def preset(p: Preset | str, kappa: float | None = None) -> DdeParams:
    """Expand a named preset.

    ``dickman``: alphas (-1, 1), so that ``e^gamma p(u, 0, b)`` is Dickman's rho.
    ``buchstab``: alphas (0, -1).  ``iwaniec``: alphas (kappa - 1, -kappa).
    ``q1`` is ``iwaniec`` with kappa = 1.  All use the single shift v_1 = 1.
    """
    if isinstance(p, str):
        p = Preset(p, kappa)
    name = p.name.lower()
    if name == "dickman":
        return make_params((-1, 1), (0, 1))
    if name == "buchstab":
        return make_params((0, -1), (0, 1))
    if name == "q1":
        return make_params((0, -1), (0, 1))
    if name == "iwaniec":
        if p.kappa is None:
            raise ValidationError("iwaniec preset requires kappa")
        k = float(p.kappa)
        if not k > 0:
            raise ValidationError(f"kappa must be positive, got {k}")
        return make_params((k - 1, -k), (0, 1))
    raise ValidationError(f"unknown preset {p.name!r}; choose from {', '.join(PRESET_NAMES)}")


def params_from_dict(obj: dict) -> DdeParams:
    """Inverse of :meth:`DdeParams.to_dict`; also accepts ``{"preset": name, "kappa": k}``."""
    if "preset" in obj:
        return preset(obj["preset"], obj.get("kappa"))
    try:
        return make_params(obj["alphas"], obj["shifts"])
    except KeyError as exc:
        raise ValidationError(f"missing key {exc.args[0]!r}") from None


def params_from_json(text: str) -> DdeParams:
    return params_from_dict(json.loads(text))
