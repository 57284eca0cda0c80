"""Anchor-based reconstruction for the second functional equation.

With g(x) = (x**alpha + x**beta) / 2 and a pair of anchor points t1, t2 whose
generator gap g(t1*t2) - g(t1)*g(t2) is nonzero, every solution of

    f(x*y) = g(x)*f(y) + g(y)*f(x)

is pinned down by the single value f(t1):

    f(x) = (g(t2*x) - g(t2)*g(x)) * f(t1) / (g(t1*t2) - g(t1)*g(t2))

When alpha == beta the gap vanishes identically (g is then multiplicative,
x**alpha) and the solution branch switches to c * x**alpha * ln x, which no
anchor pair can reach; `find_anchors` reports that case as a
MultiplicativeVerdict instead of a usable anchor pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactfield import FieldElement
from .families import PowerDiff, PowerLog, pos_pow

__all__ = [
    "GeneratorFunction",
    "ReconstructionAnchors",
    "MultiplicativeVerdict",
    "AnchorError",
    "IllConditionedError",
    "anchor_gap",
    "find_anchors",
    "vincze_reconstruct",
    "classify_eq2_solution",
]


class AnchorError(ArithmeticError):
    """No usable anchor pair: the generator gap is below threshold."""


class IllConditionedError(ArithmeticError):
    """Requested coefficient extraction divides by a vanishing quantity."""


@dataclass(frozen=True)
class GeneratorFunction:
    """g(x) = (x**alpha + x**beta) / 2, exact when x and the exponents allow it."""

    alpha: float
    beta: float

    def __call__(self, x):
        if isinstance(x, (FieldElement, Fraction, int)) and not isinstance(x, bool):
            a, b = self.alpha, self.beta
            if a != int(a) or b != int(b):
                raise ValueError("exact generator evaluation needs integer exponents")
            if isinstance(x, int):
                x = Fraction(x)
            return (x ** int(a) + x ** int(b)) / 2
        return (pos_pow(x, self.alpha) + pos_pow(x, self.beta)) / 2.0


def anchor_gap(g: GeneratorFunction, t1, t2):
    """g(t1*t2) - g(t1)*g(t2); nonzero exactly when (t1, t2) can anchor f."""
    return g(t1 * t2) - g(t1) * g(t2)


@dataclass(frozen=True)
class ReconstructionAnchors:
    t1: float
    t2: float
    f_t1: Optional[float] = None


@dataclass(frozen=True)
class MultiplicativeVerdict:
    """All candidate gaps were below threshold: g behaves multiplicatively."""

    max_gap: float
    threshold: float


def find_anchors(
    g: GeneratorFunction,
    candidates: Sequence[float],
) -> Union[ReconstructionAnchors, MultiplicativeVerdict]:
    """Pick the ordered candidate pair (repeats allowed) maximizing |gap|.

    Every pair's gap is compared against a scale-aware threshold
    1e-9 * (1 + |g(t1)*g(t2)|); if none clears it the generator is reported
    multiplicative. The returned anchors carry f_t1=None, to be filled by the
    caller via dataclasses.replace.
    """
    if not candidates:
        raise ValueError("need at least one anchor candidate")
    best = None
    best_gap = -1.0
    max_gap = 0.0
    max_threshold = 0.0
    for t1 in candidates:
        for t2 in candidates:
            gap = abs(float(anchor_gap(g, t1, t2)))
            threshold = 1e-9 * (1.0 + abs(float(g(t1)) * float(g(t2))))
            max_gap = max(max_gap, gap)
            max_threshold = max(max_threshold, threshold)
            if gap > threshold and gap > best_gap:
                best_gap = gap
                best = (t1, t2)
    if best is None:
        return MultiplicativeVerdict(max_gap=max_gap, threshold=max_threshold)
    return ReconstructionAnchors(t1=best[0], t2=best[1], f_t1=None)


def vincze_reconstruct(g: GeneratorFunction, anchors: ReconstructionAnchors, x):
    """Evaluate the anchored solution at x.

    Exact inputs (Fraction, FieldElement, int) with integer exponents stay
    exact; float anchors are then lifted to their exact binary Fractions.
    Raises AnchorError when the anchors' gap is below its threshold and
    ValueError when anchors.f_t1 was never filled in.
    """
    if anchors.f_t1 is None:
        raise ValueError("anchors.f_t1 is unset; fill it via dataclasses.replace")
    exact = isinstance(x, (FieldElement, Fraction, int)) and not isinstance(x, bool)
    if exact:
        t1 = anchors.t1 if isinstance(anchors.t1, (Fraction, int)) else Fraction(anchors.t1)
        t2 = anchors.t2 if isinstance(anchors.t2, (Fraction, int)) else Fraction(anchors.t2)
        f_t1 = anchors.f_t1 if isinstance(anchors.f_t1, (Fraction, int)) else Fraction(anchors.f_t1)
    else:
        t1, t2, f_t1 = anchors.t1, anchors.t2, anchors.f_t1
    den = anchor_gap(g, t1, t2)
    threshold = 1e-9 * (1.0 + abs(float(g(t1)) * float(g(t2))))
    if abs(float(den)) <= threshold:
        raise AnchorError(
            f"anchor gap {float(den)!r} below threshold {threshold!r}; "
            "generator is multiplicative at these anchors"
        )
    num = g(t2 * x) - g(t2) * g(x)
    return num * f_t1 / den


def classify_eq2_solution(alpha: float, beta: float, f_t1: float, t1: float):
    """Name the solution branch from one sample f(t1).

    alpha == beta gives PowerLog with c = f(t1) / (t1**alpha * ln t1); distinct
    exponents give PowerDiff with c = f(t1) / (t1**alpha - t1**beta), guarded
    against a near-degenerate basis.
    """
    if not 0.0 < t1 < 1.0:
        raise ValueError(f"t1 must lie in ]0,1[, got {t1!r}")
    if alpha == beta:
        den = pos_pow(t1, alpha) * math.log(t1)
        return PowerLog(c=float(f_t1 / den), alpha=alpha)
    if abs(alpha - beta) * abs(math.log(t1)) < 1e-12:
        raise IllConditionedError(
            f"exponent gap {abs(alpha - beta)!r} too small at t1={t1!r} to split branches"
        )
    den = pos_pow(t1, alpha) - pos_pow(t1, beta)
    return PowerDiff(c=float(f_t1 / den), alpha=alpha, beta=beta)
