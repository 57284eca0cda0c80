"""Closed-form solution families on ]0,1] and the entropies they induce.

The float families cover the regular solution branches (power-affine and
x*log x for the first equation, power-difference and power-log for the
second); ``ExactDerivationAffine`` is the exact pathological family over Q(t)
built from the formal derivation. ``Custom`` wraps arbitrary evaluators so
checkers can be pointed at non-solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .exactfield import (
    DEFAULT_TAU,
    BigRational,
    FieldElement,
    approx_value,
    as_field_element,
    derivation_apply,
)

__all__ = [
    "DomainError",
    "PowerAffine",
    "XLogX",
    "PowerDiff",
    "PowerLog",
    "ExactDerivationAffine",
    "Custom",
    "SolutionFamily",
    "family_eval",
    "pos_pow",
    "ProbVector",
    "shannon_entropy",
    "tsallis_entropy",
    "parse_family_literal",
    "format_family_literal",
    "CUSTOM_REGISTRY",
]


class DomainError(ValueError):
    """Argument outside the required subset of ]0,1]."""


def pos_pow(x, p):
    """x**p for positive x, computed as exp(p*log x) for uniform treatment."""
    return np.exp(p * np.log(x))


@dataclass(frozen=True)
class PowerAffine:
    """f(x) = c_star*x + c*x**q with q != 1.

    q this close to 1 makes the two basis directions collapse onto one line,
    so construction rejects it outright.
    """

    c_star: float
    c: float
    q: float

    def __post_init__(self):
        if abs(self.q - 1.0) < 1e-12:
            raise ValueError("q = 1 collapses the basis; use XLogX")


@dataclass(frozen=True)
class XLogX:
    """f(x) = c*x*ln(x) + c_star*x."""

    c: float
    c_star: float


@dataclass(frozen=True)
class PowerDiff:
    """f(x) = c*(x**alpha - x**beta), stored canonically with alpha < beta."""

    c: float
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("alpha == beta is the power-log family; use PowerLog")
        if self.alpha > self.beta:
            object.__setattr__(self, "c", -self.c)
            a, b = self.beta, self.alpha
            object.__setattr__(self, "alpha", a)
            object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class PowerLog:
    """f(x) = c*x**alpha*ln(x)."""

    c: float
    alpha: float


@dataclass(frozen=True)
class ExactDerivationAffine:
    """f(x) = c_star*x + scale*d(x) over Q(t), d the formal derivation.

    Evaluated exactly; at any rational argument d vanishes, so the value is
    c_star*x on the nose.
    """

    c_star: BigRational
    scale: BigRational

    def __post_init__(self):
        object.__setattr__(self, "c_star", Fraction(self.c_star))
        object.__setattr__(self, "scale", Fraction(self.scale))


@dataclass(frozen=True)
class Custom:
    """User-supplied evaluator; `label` is used in reports."""

    evaluator: Callable
    label: str = "custom"


SolutionFamily = Union[PowerAffine, XLogX, PowerDiff, PowerLog, ExactDerivationAffine, Custom]


def _check_unit_interval(x, half_open: bool = True):
    arr = np.asarray(x, dtype=float)
    upper = arr <= 1.0 if half_open else arr < 1.0
    if not np.all((arr > 0.0) & upper):
        raise DomainError("argument outside ]0,1]")


def _call_evaluator(evaluator: Callable, x):
    if isinstance(x, np.ndarray):
        try:
            out = np.asarray(evaluator(x), dtype=float)
            if out.shape == x.shape:
                return out
        except DomainError:
            raise
        except Exception:
            pass
        flat = np.array([float(evaluator(float(v))) for v in x.ravel()])
        return flat.reshape(x.shape)
    return float(evaluator(x))


def family_eval(fam: SolutionFamily, x, tau: float = DEFAULT_TAU):
    """Evaluate a family at x in ]0,1].

    Float families accept scalars or numpy arrays. ExactDerivationAffine (and
    Custom evaluators over Q(t)) take FieldElement/Fraction/int arguments and
    return a FieldElement; admissibility is probed through approx_value at tau.
    """
    exact_arg = isinstance(x, (FieldElement, Fraction)) or (
        isinstance(x, int) and not isinstance(x, bool)
    )
    if isinstance(fam, ExactDerivationAffine):
        xe = as_field_element(x)
        v = approx_value(xe, tau)
        if not 0.0 < v <= 1.0:
            raise DomainError(f"argument value {v!r} at tau outside ]0,1]")
        return xe * fam.c_star + derivation_apply(xe, fam.scale)
    if isinstance(fam, Custom):
        if exact_arg:
            xe = as_field_element(x)
            v = approx_value(xe, tau)
            if not 0.0 < v <= 1.0:
                raise DomainError(f"argument value {v!r} at tau outside ]0,1]")
            return fam.evaluator(xe)
        _check_unit_interval(x)
        return _call_evaluator(fam.evaluator, x)
    if isinstance(x, FieldElement):
        raise TypeError(f"{type(fam).__name__} does not evaluate over Q(t)")
    _check_unit_interval(x)
    arr = np.asarray(x, dtype=float)
    if isinstance(fam, PowerAffine):
        val = fam.c_star * arr + fam.c * pos_pow(arr, fam.q)
    elif isinstance(fam, XLogX):
        val = fam.c * arr * np.log(arr) + fam.c_star * arr
    elif isinstance(fam, PowerDiff):
        val = fam.c * (pos_pow(arr, fam.alpha) - pos_pow(arr, fam.beta))
    elif isinstance(fam, PowerLog):
        val = fam.c * pos_pow(arr, fam.alpha) * np.log(arr)
    else:
        raise TypeError(f"unknown family {type(fam).__name__}")
    return val if isinstance(x, np.ndarray) else float(val)


@dataclass(frozen=True)
class ProbVector:
    """Finite probability vector: entries in ]0,1], summing to 1 within 1e-12."""

    probabilities: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if not probs:
            raise DomainError("empty probability vector")
        if any(not 0.0 < p <= 1.0 for p in probs):
            raise DomainError("probabilities must lie in ]0,1]")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {sum(probs)!r}, not 1")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=float)


def shannon_entropy(p: ProbVector) -> float:
    """-sum p_i ln p_i; equals sum of XLogX{c=-1, c_star=0} over the entries."""
    arr = p.as_array()
    return float(-(arr * np.log(arr)).sum())


def tsallis_entropy(p: ProbVector, q: float) -> float:
    """(1 - sum p_i**q)/(q - 1) for q != 1.

    Written through expm1 so each term keeps full relative precision; the
    raw form loses ~10 digits to cancellation as q approaches 1. q = 1 itself
    is an error (use shannon_entropy), not a limit taken here.
    """
    if abs(q - 1.0) < 1e-12:
        raise ValueError("q = 1 is the Shannon case; use shannon_entropy")
    arr = p.as_array()
    head = -(arr * np.expm1((q - 1.0) * np.log(arr))).sum()
    return float((head + (1.0 - arr.sum())) / (q - 1.0))


# --- family literals --------------------------------------------------------
#
# Compact one-line syntax for the CLI and reports, e.g.
#   power-affine:c_star=1,c=-1,q=2
#   exact-derivation:c_star=0,scale=1
# plus a few named custom maps for exercising the checkers.

CUSTOM_REGISTRY: dict[str, Custom] = {
    "custom-square": Custom(lambda x: x * x, "custom-square"),
    "custom-identity": Custom(lambda x: x, "custom-identity"),
    "custom-ln": Custom(np.log, "custom-ln"),
    "custom-zero": Custom(lambda x: 0.0 * x, "custom-zero"),
}

_FAMILY_FIELDS = {
    "power-affine": ("c_star", "c", "q"),
    "xlogx": ("c", "c_star"),
    "power-diff": ("c", "alpha", "beta"),
    "power-log": ("c", "alpha"),
    "exact-derivation": ("c_star", "scale"),
}


def parse_family_literal(text: str) -> SolutionFamily:
    """Parse a family literal; raises ValueError naming the bad column."""
    text = text.strip()
    if text in CUSTOM_REGISTRY:
        return CUSTOM_REGISTRY[text]
    name, sep, body = text.partition(":")
    if name not in _FAMILY_FIELDS:
        raise ValueError(
            f"column 1: unknown family {name!r} (expected one of "
            f"{sorted((*_FAMILY_FIELDS, *CUSTOM_REGISTRY))})"
        )
    fields = _FAMILY_FIELDS[name]
    if not sep or not body:
        raise ValueError(f"column {len(name) + 1}: expected ':' and parameters")
    exact = name == "exact-derivation"
    params = {}
    offset = len(name) + 1
    for chunk in body.split(","):
        key, eq, raw = chunk.partition("=")
        key = key.strip()
        if not eq or key not in fields:
            raise ValueError(f"column {offset + 1}: expected one of {fields} followed by '='")
        try:
            params[key] = Fraction(raw.strip()) if exact else float(raw)
        except (ValueError, ZeroDivisionError):
            raise ValueError(
                f"column {offset + len(key) + 2}: bad numeric value {raw.strip()!r}"
            ) from None
        offset += len(chunk) + 1
    missing = [f for f in fields if f not in params]
    if missing:
        raise ValueError(f"column {len(text) + 1}: missing parameters {missing}")
    cls = {
        "power-affine": PowerAffine,
        "xlogx": XLogX,
        "power-diff": PowerDiff,
        "power-log": PowerLog,
        "exact-derivation": ExactDerivationAffine,
    }[name]
    return cls(**params)


def format_family_literal(fam: SolutionFamily) -> str:
    if isinstance(fam, PowerAffine):
        return f"power-affine:c_star={fam.c_star!r},c={fam.c!r},q={fam.q!r}"
    if isinstance(fam, XLogX):
        return f"xlogx:c={fam.c!r},c_star={fam.c_star!r}"
    if isinstance(fam, PowerDiff):
        return f"power-diff:c={fam.c!r},alpha={fam.alpha!r},beta={fam.beta!r}"
    if isinstance(fam, PowerLog):
        return f"power-log:c={fam.c!r},alpha={fam.alpha!r}"
    if isinstance(fam, ExactDerivationAffine):
        return f"exact-derivation:c_star={fam.c_star},scale={fam.scale}"
    if isinstance(fam, Custom):
        return fam.label
    raise TypeError(f"unknown family {type(fam).__name__}")
