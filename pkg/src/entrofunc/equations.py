"""Residuals and grid scans for the two functional equations.

Equation 1 (parameter q), on x in ]0,1[, y in ]0,1]:

    f(x*y) + f((1-x)*y) - f(y) = (f(x) + f(1-x)) * y**q

Equation 2 (parameters alpha, beta), on x, y in ]0,1]:

    f(x*y) = g(x)*f(y) + g(y)*f(x),   g(x) = (x**alpha + x**beta)/2

plus restricted-domain checkers for the additive / multiplicative /
logarithmic identities on D2 = {(x, y) : x, y, x+y in ]0,1[}.

Scans run on uniform interior grids {k/(N+1)}; for Equation 1 the boundary
point y = 1 is appended as a dedicated probe (the residual there reduces to
-f(1) for any f). Tolerances are scale-aware: the effective tolerance is
tol * (1 + max |f| over all grid evaluations). Reductions are deterministic:
max |residual|, ties resolved to the lexicographically smallest witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .exactfield import DEFAULT_TAU, FieldElement, approx_value, as_field_element
from .families import (
    Custom,
    DomainError,
    ExactDerivationAffine,
    SolutionFamily,
    family_eval,
    pos_pow,
)

__all__ = [
    "DomainDn",
    "ResidualReport",
    "eq1_residual",
    "eq1_residual_exact",
    "eq2_residual",
    "generator_value",
    "check_additive_on_d2",
    "check_multiplicative",
    "check_logarithmic",
    "grid_scan",
    "parse_grid_spec",
]


@dataclass(frozen=True, eq=False)
class DomainDn:
    """Finite point set in D_n = {x in ]0,1[^n : sum(x) in ]0,1[}.

    `points` has shape (m, n); validation is vectorized so large grids stay
    cheap to construct.
    """

    n: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.n or self.n < 2:
            raise ValueError(f"expected shape (m, {self.n}) with n >= 2")
        if pts.shape[0] == 0:
            raise ValueError("empty domain grid")
        sums = pts.sum(axis=1)
        if not (np.all(pts > 0.0) and np.all(pts < 1.0) and np.all(sums > 0.0) and np.all(sums < 1.0)):
            raise ValueError("points must have all coordinates and their sum in ]0,1[")
        object.__setattr__(self, "points", pts)

    @staticmethod
    def uniform(n: int, per_axis: int) -> "DomainDn":
        """Uniform tuples (i_1,...,i_n)/(per_axis+1) filtered by sum < per_axis+1."""
        idx = np.arange(1, per_axis + 1)
        mesh = np.meshgrid(*([idx] * n), indexing="ij")
        grid = np.stack([m.ravel() for m in mesh], axis=-1)
        grid = grid[grid.sum(axis=1) <= per_axis]  # integer filter: strict sum < 1
        if grid.shape[0] == 0:
            raise ValueError(f"no D{n} points at {per_axis} per axis")
        return DomainDn(n, grid / (per_axis + 1))


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of a residual scan; verdict is pass iff max <= tolerance."""

    max_abs_residual: float
    mean_abs_residual: float
    witness: tuple
    tolerance: float
    verdict: str

    @staticmethod
    def from_residuals(residuals: np.ndarray, witnesses: list[np.ndarray], tolerance: float) -> "ResidualReport":
        absr = np.abs(np.asarray(residuals, dtype=float)).ravel()
        k = int(np.argmax(absr))  # first max in C order = lexicographically smallest witness
        witness = tuple(float(w.ravel()[k]) for w in witnesses)
        mx = float(absr[k])
        return ResidualReport(
            max_abs_residual=mx,
            mean_abs_residual=float(absr.mean()),
            witness=witness,
            tolerance=tolerance,
            verdict="pass" if mx <= tolerance else "fail",
        )


Value = Union[float, int]


def _check_open(x: float, name: str):
    if not 0.0 < x < 1.0:
        raise DomainError(f"{name} = {x!r} outside ]0,1[")


def _check_half_open(x: float, name: str):
    if not 0.0 < x <= 1.0:
        raise DomainError(f"{name} = {x!r} outside ]0,1]")


def eq1_residual(f: SolutionFamily, x: Value, y: Value, q: float) -> float:
    """f(xy) + f((1-x)y) - f(y) - (f(x) + f(1-x))*y**q at a single point.

    At y = 1 this reduces to -f(1) identically, which is the boundary probe.
    """
    x, y = float(x), float(y)
    _check_open(x, "x")
    _check_half_open(y, "y")
    fe = lambda v: family_eval(f, v)
    return float(
        fe(x * y) + fe((1.0 - x) * y) - fe(y) - (fe(x) + fe(1.0 - x)) * pos_pow(y, q)
    )


def eq1_residual_exact(
    f: SolutionFamily, x: FieldElement, y: FieldElement, tau: float = DEFAULT_TAU
) -> FieldElement:
    """Equation-1 residual with q = 1, computed wholly in Q(t).

    Admissibility of x (open interval) and y (half-open) is probed through
    approx_value at tau. f must evaluate over Q(t) (ExactDerivationAffine or
    a Custom with a field-element evaluator).
    """
    x, y = as_field_element(x), as_field_element(y)
    vx, vy = approx_value(x, tau), approx_value(y, tau)
    if not 0.0 < vx < 1.0:
        raise DomainError(f"x value {vx!r} at tau outside ]0,1[")
    if not 0.0 < vy <= 1.0:
        raise DomainError(f"y value {vy!r} at tau outside ]0,1]")
    if not isinstance(f, (ExactDerivationAffine, Custom)):
        raise TypeError(f"{type(f).__name__} does not evaluate over Q(t)")
    fe = lambda v: family_eval(f, v, tau)
    one = FieldElement(1)
    return fe(x * y) + fe((one - x) * y) - fe(y) - (fe(x) + fe(one - x)) * y


def generator_value(x, alpha: float, beta: float):
    """g(x) = (x**alpha + x**beta)/2 on positive arguments."""
    return (pos_pow(x, alpha) + pos_pow(x, beta)) / 2.0


def eq2_residual(f: SolutionFamily, x: Value, y: Value, alpha: float, beta: float) -> float:
    """f(xy) - g(x)f(y) - g(y)f(x) with g(x) = (x**alpha + x**beta)/2."""
    x, y = float(x), float(y)
    _check_half_open(x, "x")
    _check_half_open(y, "y")
    fe = lambda v: family_eval(f, v)
    return float(
        fe(x * y) - generator_value(x, alpha, beta) * fe(y) - generator_value(y, alpha, beta) * fe(x)
    )


def _eval_grid(f: SolutionFamily, arr: np.ndarray) -> np.ndarray:
    return np.asarray(family_eval(f, arr), dtype=float)


def _scale_aware(tol: float, values: list[np.ndarray]) -> float:
    peak = max(float(np.max(np.abs(v))) for v in values)
    return tol * (1.0 + peak)


def check_additive_on_d2(a: SolutionFamily, grid: DomainDn, tol: float = 1e-10) -> ResidualReport:
    """Scan a(x+y) - a(x) - a(y) over a D2 grid."""
    if grid.n != 2:
        raise ValueError("additivity check needs a D2 grid")
    x, y = grid.points[:, 0], grid.points[:, 1]
    ax, ay, axy = _eval_grid(a, x), _eval_grid(a, y), _eval_grid(a, x + y)
    return ResidualReport.from_residuals(
        axy - ax - ay, [x, y], _scale_aware(tol, [ax, ay, axy])
    )


def check_multiplicative(mu: SolutionFamily, grid: DomainDn, tol: float = 1e-10) -> ResidualReport:
    """Scan mu(xy) - mu(x)mu(y); for arguments in ]0,1[ the product stays inside."""
    if grid.n != 2:
        raise ValueError("multiplicativity check needs a pair grid")
    x, y = grid.points[:, 0], grid.points[:, 1]
    mx, my, mxy = _eval_grid(mu, x), _eval_grid(mu, y), _eval_grid(mu, x * y)
    return ResidualReport.from_residuals(
        mxy - mx * my, [x, y], _scale_aware(tol, [mx, my, mxy])
    )


def check_logarithmic(ell: SolutionFamily, grid: DomainDn, tol: float = 1e-10) -> ResidualReport:
    """Scan ell(xy) - ell(x) - ell(y)."""
    if grid.n != 2:
        raise ValueError("logarithmic check needs a pair grid")
    x, y = grid.points[:, 0], grid.points[:, 1]
    lx, ly, lxy = _eval_grid(ell, x), _eval_grid(ell, y), _eval_grid(ell, x * y)
    return ResidualReport.from_residuals(
        lxy - lx - ly, [x, y], _scale_aware(tol, [lx, ly, lxy])
    )


def parse_grid_spec(spec) -> tuple[int, int]:
    """Parse "NxM" (or a pair) into positive int grid dimensions."""
    if isinstance(spec, str):
        parts = spec.lower().split("x")
        if len(parts) != 2:
            raise ValueError(f"grid spec {spec!r} is not of the form 'NxM'")
        try:
            n, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"grid spec {spec!r} is not of the form 'NxM'") from None
    else:
        try:
            n, m = spec
        except (TypeError, ValueError):
            raise ValueError(f"grid spec {spec!r} is not of the form 'NxM'") from None
        n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise ValueError(f"grid dimensions must be positive, got {n}x{m}")
    return n, m


def _interior(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=float) / (n + 1)


def grid_scan(
    equation: str,
    f: SolutionFamily,
    *,
    q: float | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    grid="200x200",
    tol: float = 1e-10,
) -> ResidualReport:
    """Scan a residual over a uniform grid and report the worst point.

    `equation` selects among eq1 / eq2 / additive / multiplicative /
    logarithmic. Equation parameters are never inferred: eq1 requires q and
    eq2 requires alpha and beta. The grid spec is "NxM"; for eq1 the y axis
    additionally receives the y = 1 boundary probe.
    """
    nx, ny = parse_grid_spec(grid)
    if equation == "eq1":
        if q is None:
            raise ValueError("eq1 requires q (it is never inferred)")
        xs = _interior(nx)
        ys = np.append(_interior(ny), 1.0)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        vals = [
            _eval_grid(f, X * Y),
            _eval_grid(f, (1.0 - X) * Y),
            _eval_grid(f, Y),
            _eval_grid(f, X),
            _eval_grid(f, 1.0 - X),
        ]
        r = vals[0] + vals[1] - vals[2] - (vals[3] + vals[4]) * pos_pow(Y, q)
        return ResidualReport.from_residuals(r, [X, Y], _scale_aware(tol, vals))
    if equation == "eq2":
        if alpha is None or beta is None:
            raise ValueError("eq2 requires alpha and beta (they are never inferred)")
        xs, ys = _interior(nx), _interior(ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        vals = [_eval_grid(f, X * Y), _eval_grid(f, X), _eval_grid(f, Y)]
        r = vals[0] - generator_value(X, alpha, beta) * vals[2] - generator_value(Y, alpha, beta) * vals[1]
        return ResidualReport.from_residuals(r, [X, Y], _scale_aware(tol, vals))
    if equation in ("additive", "multiplicative", "logarithmic"):
        xs, ys = _interior(nx), _interior(ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        pairs = np.stack([X.ravel(), Y.ravel()], axis=-1)
        # all three restricted identities are checked on D2
        pairs = pairs[pairs.sum(axis=1) < 1.0 - 1e-12]
        if pairs.shape[0] == 0:
            raise ValueError("grid too coarse: no D2 points")
        dom = DomainDn(2, pairs)
        checker = {
            "additive": check_additive_on_d2,
            "multiplicative": check_multiplicative,
            "logarithmic": check_logarithmic,
        }[equation]
        return checker(f, dom, tol)
    raise ValueError(f"unknown equation {equation!r}")
