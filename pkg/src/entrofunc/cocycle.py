"""Two-place cocycle machinery for the first functional equation.

For f on ]0,1[ define on D2 = {(u, v) : u, v, u+v in ]0,1[}

    C_f(u, v) = f(u) + f(v) - f(u+v)
    R_f(u, v) = (f(u/(u+v)) + f(v/(u+v))) * (u+v)**q

The substitution x -> u/(u+v), y -> u+v (inverse u = xy, v = (1-x)y) carries
the original equation to C_f = R_f, so the pointwise equation-1 residual at
(x, y) equals (C_f - R_f) at the transformed point.

`check_cocycle_system` verifies the three structural properties a map G must
have to be a Cauchy difference of a q-homogeneous solution: symmetry, the
cocycle identity G(x,y) + G(x+y,z) = G(y,z) + G(x,y+z) on D3, and
q-homogeneity G(tx,ty) = t**q G(x,y). `ng_decomposition_check` compares G
against the closed decomposition c*(x**q + y**q - (x+y)**q) for q != 1, or
phi(x) + phi(y) - phi(x+y) for q = 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exactfield import DEFAULT_TAU, FieldElement, approx_value
from .families import Custom, DomainError, SolutionFamily, family_eval, pos_pow
from .equations import DomainDn, ResidualReport

__all__ = [
    "CocycleMap",
    "CocycleSystemReport",
    "BranchMismatchError",
    "cf_map",
    "rf_map",
    "check_cocycle_system",
    "ng_decomposition_check",
    "substitution_forward",
    "substitution_inverse",
]


class BranchMismatchError(ValueError):
    """Decomposition parameters do not match the q branch."""


@dataclass(frozen=True)
class CocycleMap:
    """Two-place map on D2 with a provenance tag ("derived-from-f" or "custom")."""

    evaluator: Callable
    provenance: str = "custom"

    def __call__(self, u, v):
        return self.evaluator(u, v)


def cf_map(f: SolutionFamily) -> CocycleMap:
    """Cauchy difference C_f(u, v) = f(u) + f(v) - f(u+v)."""

    def ev(u, v):
        return family_eval(f, u) + family_eval(f, v) - family_eval(f, u + v)

    return CocycleMap(ev, provenance="derived-from-f")


def rf_map(f: SolutionFamily, q: float) -> CocycleMap:
    """R_f(u, v) = (f(u/(u+v)) + f(v/(u+v))) * (u+v)**q.

    Over Q(t) arguments the power requires an integer q.
    """

    def ev(u, v):
        s = u + v
        inner = family_eval(f, u / s) + family_eval(f, v / s)
        if isinstance(s, FieldElement):
            if q != int(q):
                raise ValueError("exact R_f needs an integer q")
            return inner * s ** int(q)
        return inner * pos_pow(s, q)

    return CocycleMap(ev, provenance="derived-from-f")


def _pair_eval(G, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(G(x, y), dtype=float)
        if out.shape == x.shape:
            return out
    except DomainError:
        raise
    except Exception:
        pass
    return np.array([float(G(float(a), float(b))) for a, b in zip(x.ravel(), y.ravel())]).reshape(x.shape)


@dataclass(frozen=True)
class CocycleSystemReport:
    """Aggregate of the three sub-checks; pass iff all three pass."""

    symmetry: ResidualReport
    cocycle: ResidualReport
    homogeneity: ResidualReport

    @property
    def verdict(self) -> str:
        subs = (self.symmetry, self.cocycle, self.homogeneity)
        return "pass" if all(s.verdict == "pass" for s in subs) else "fail"

    @property
    def _worst(self) -> ResidualReport:
        return max(
            (self.symmetry, self.cocycle, self.homogeneity),
            key=lambda s: s.max_abs_residual,
        )

    @property
    def max_abs_residual(self) -> float:
        return self._worst.max_abs_residual

    @property
    def witness(self) -> tuple:
        return self._worst.witness

    @property
    def tolerance(self) -> float:
        return self._worst.tolerance


def check_cocycle_system(
    G,
    q: float,
    d2: DomainDn,
    d3: DomainDn,
    tol: float = 1e-12,
    seed: int = 0,
) -> CocycleSystemReport:
    """Check symmetry on D2, the cocycle identity on D3 and q-homogeneity.

    Homogeneity uses a fixed scale set {0.2, 1/3, 0.5, 2/3, 0.9} plus five
    seeded random scales, applied to every D2 point; the witness there is the
    triple (t, u, v).
    """
    if d2.n != 2 or d3.n != 3:
        raise ValueError("need a D2 grid and a D3 grid")
    x2, y2 = d2.points[:, 0], d2.points[:, 1]
    gxy = _pair_eval(G, x2, y2)
    gyx = _pair_eval(G, y2, x2)
    scale2 = tol * (1.0 + float(np.max(np.abs(gxy))))
    symmetry = ResidualReport.from_residuals(gxy - gyx, [x2, y2], scale2)

    x3, y3, z3 = d3.points[:, 0], d3.points[:, 1], d3.points[:, 2]
    vals3 = [
        _pair_eval(G, x3, y3),
        _pair_eval(G, x3 + y3, z3),
        _pair_eval(G, y3, z3),
        _pair_eval(G, x3, y3 + z3),
    ]
    r3 = vals3[0] + vals3[1] - vals3[2] - vals3[3]
    scale3 = tol * (1.0 + max(float(np.max(np.abs(v))) for v in vals3))
    cocycle = ResidualReport.from_residuals(r3, [x3, y3, z3], scale3)

    rng = random.Random(seed)
    ts = sorted([0.2, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9] + [rng.uniform(0.05, 0.95) for _ in range(5)])
    rows, peak = [], 0.0
    tw, uw, vw = [], [], []
    for t in ts:
        gt = _pair_eval(G, t * x2, t * y2)
        rows.append(gt - pos_pow(t, q) * gxy)
        peak = max(peak, float(np.max(np.abs(gt))))
        tw.append(np.full_like(x2, t))
        uw.append(x2)
        vw.append(y2)
    homogeneity = ResidualReport.from_residuals(
        np.concatenate(rows),
        [np.concatenate(tw), np.concatenate(uw), np.concatenate(vw)],
        tol * (1.0 + max(peak, float(np.max(np.abs(gxy))))),
    )
    return CocycleSystemReport(symmetry=symmetry, cocycle=cocycle, homogeneity=homogeneity)


def ng_decomposition_check(
    G,
    q: float,
    d2: DomainDn,
    c: Optional[float] = None,
    phi: Optional[SolutionFamily] = None,
    tol: float = 1e-10,
) -> ResidualReport:
    """Compare G with the closed cocycle decomposition for its q branch.

    q != 1 takes a scalar c and target c*(x**q + y**q - (x+y)**q); q = 1 takes
    a one-place family phi and target phi(x) + phi(y) - phi(x+y). Supplying
    the wrong parameter for the branch raises BranchMismatchError.
    """
    if d2.n != 2:
        raise ValueError("decomposition check needs a D2 grid")
    x, y = d2.points[:, 0], d2.points[:, 1]
    gv = _pair_eval(G, x, y)
    if q == 1:
        if phi is None or c is not None:
            raise BranchMismatchError("q = 1 takes phi (a one-place family), not c")
        fx = np.asarray(family_eval(phi, x), dtype=float)
        fy = np.asarray(family_eval(phi, y), dtype=float)
        fxy = np.asarray(family_eval(phi, x + y), dtype=float)
        target = fx + fy - fxy
    else:
        if c is None or phi is not None:
            raise BranchMismatchError("q != 1 takes a scalar c, not phi")
        target = c * (pos_pow(x, q) + pos_pow(y, q) - pos_pow(x + y, q))
    scale = tol * (1.0 + max(float(np.max(np.abs(gv))), float(np.max(np.abs(target)))))
    return ResidualReport.from_residuals(gv - target, [x, y], scale)


def _d2_check_scalar(u, v, tau: float):
    if isinstance(u, FieldElement) or isinstance(v, FieldElement):
        vu, vv = approx_value(u, tau), approx_value(v, tau)
    else:
        vu, vv = float(u), float(v)
    if not (0.0 < vu < 1.0 and 0.0 < vv < 1.0 and 0.0 < vu + vv < 1.0):
        raise DomainError(f"({vu!r}, {vv!r}) outside D2")


def substitution_forward(u, v, tau: float = DEFAULT_TAU):
    """(u, v) in D2 -> (x, y) = (u/(u+v), u+v). Works over floats and Q(t)."""
    _d2_check_scalar(u, v, tau)
    s = u + v
    return u / s, s


def substitution_inverse(x, y, tau: float = DEFAULT_TAU):
    """(x, y) with x, y in ]0,1[ -> (u, v) = (x*y, (1-x)*y)."""
    if isinstance(x, FieldElement) or isinstance(y, FieldElement):
        vx, vy = approx_value(x, tau), approx_value(y, tau)
    else:
        vx, vy = float(x), float(y)
    if not (0.0 < vx < 1.0 and 0.0 < vy < 1.0):
        raise DomainError(f"({vx!r}, {vy!r}) outside ]0,1[^2")
    return x * y, (1 - x) * y
