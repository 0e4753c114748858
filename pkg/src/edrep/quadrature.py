"""Integration on [0, inf) and the closed-form integral family.

Three pieces live here:

* ``integrate_semi_infinite`` maps [0, inf) onto [0, 1) with
  ``x = scale * t / (1 - t)`` and runs a globally adaptive 7/15-point
  Gauss-Kronrod scheme on the compact interval.
* ``integrate_oscillatory`` integrates ``envelope(k) * sin(k r)`` (or cos)
  half-period by half-period and accelerates the alternating partial sums
  by iterated averaging.
* ``closed_form_In`` / ``closed_form_Inm`` evaluate

      I_n(A)    = int_0^inf (z^2 + A)^-n dz
      I_nm(A,B) = int_0^inf (z^2 + A)^-n (z + B)^-m dz

  by differentiating the base cases with respect to A and B.  The
  derivatives are taken exactly with truncated bivariate Taylor arithmetic,
  never by finite differences.

Integrands are called with numpy arrays and must return arrays (or scalars,
which are broadcast).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DepthUnsupported, DomainError, NonConvergent, NonFiniteSample, ZeroFrequency

__all__ = [
    "QuadResult",
    "integrate_interval",
    "integrate_semi_infinite",
    "integrate_oscillatory",
    "compact_map_weights",
    "panel_rule",
    "closed_form_In",
    "closed_form_Inm",
    "closed_form_moment",
    "reduction_Inm",
    "MAX_N",
    "MAX_M",
]

DEFAULT_SMOOTH_REL = 1e-10
DEFAULT_OSCILLATORY_REL = 1e-8

# QUADPACK qk15 abscissae (descending, last one is the centre) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 13]] = _WG[0]
_WG15[[3, 11]] = _WG[1]
_WG15[[5, 9]] = _WG[2]
_WG15[7] = _WG[3]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    finite = np.isfinite(y)
    if not finite.all():
        i = np.flatnonzero(~finite.ravel())[0]
        raise NonFiniteSample(float(x.ravel()[i]), float(y.ravel()[i]))
    return y


def _kronrod(f, a, b):
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    y = _sample(f, x)
    k15 = half * (y @ _WK15)
    g7 = half * (y @ _WG15)
    resabs = np.abs(half) * (np.abs(y) @ _WK15)
    return k15, np.abs(k15 - g7), resabs


def _adaptive(f, edges, rel_tol, abs_tol, max_intervals):
    """Globally adaptive bisection over a partition; returns per-cell sums.

    The tolerance is applied to the total, measured against the sum of the
    absolute cell values so alternating partitions are not over-resolved.
    """
    edges = np.asarray(edges, dtype=float)
    ncell = edges.size - 1
    a, b = edges[:-1].copy(), edges[1:].copy()
    owner = np.arange(ncell)
    val, err, resabs = _kronrod(f, a, b)
    evaluations = 15 * ncell

    while True:
        cell_val = np.bincount(owner, weights=val, minlength=ncell)
        total_err = float(err.sum())
        scale_ref = float(np.abs(cell_val).sum())
        tol = max(abs_tol, rel_tol * scale_ref, 50 * _EPS * float(resabs.sum()))
        if total_err <= tol:
            cell_err = np.bincount(owner, weights=err, minlength=ncell)
            return cell_val, cell_err, evaluations
        if a.size >= max_intervals:
            raise NonConvergent(
                f"adaptive quadrature hit {max_intervals} intervals "
                f"(error {total_err:.3g} > tolerance {tol:.3g})"
            )
        width_ok = np.abs(b - a) > 64 * _EPS * np.maximum(np.abs(a), np.abs(b))
        candidates = np.flatnonzero(width_ok & (err > 0))
        if candidates.size == 0:
            raise NonConvergent(
                f"quadrature cannot resolve integrand below error {total_err:.3g}"
            )
        order = candidates[np.argsort(err[candidates])[::-1]]
        excess = total_err - 0.5 * tol
        cum = np.cumsum(err[order])
        take = int(np.searchsorted(cum, excess)) + 1
        take = max(1, min(take, 128, max_intervals - a.size, order.size))
        pick = order[:take]

        mid = 0.5 * (a[pick] + b[pick])
        na = np.concatenate([a[pick], mid])
        nb = np.concatenate([mid, b[pick]])
        nval, nerr, nres = _kronrod(f, na, nb)
        evaluations += 15 * na.size

        keep = np.ones(a.size, dtype=bool)
        keep[pick] = False
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], owner[pick], owner[pick]])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
        resabs = np.concatenate([resabs[keep], nres])


def integrate_interval(f: Callable, a: float, b: float, rel_tol: float = DEFAULT_SMOOTH_REL,
                       abs_tol: float = 0.0, max_intervals: int = 4000) -> QuadResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over the finite interval [a, b]."""
    if not rel_tol > 0 or abs_tol < 0:
        raise DomainError("need rel_tol > 0 and abs_tol >= 0")
    vals, errs, nev = _adaptive(f, [a, b], rel_tol, abs_tol, max_intervals)
    return QuadResult(float(vals[0]), float(errs[0]), nev)


def integrate_semi_infinite(f: Callable, rel_tol: float = DEFAULT_SMOOTH_REL, abs_tol: float = 0.0,
                            scale: float = 1.0, max_intervals: int = 4000) -> QuadResult:
    """Integral of ``f`` over [0, inf).

    ``scale`` is the point that the compact map sends to t = 1/2; choosing it
    near the bulk of the integrand saves subdivisions but never changes the
    answer.
    """
    if not rel_tol > 0 or abs_tol < 0:
        raise DomainError("need rel_tol > 0 and abs_tol >= 0")
    if not scale > 0:
        raise DomainError("scale must be positive")

    def mapped(t):
        s = 1.0 - t
        return f(scale * t / s) * (scale / (s * s))

    vals, errs, nev = _adaptive(mapped, [0.0, 1.0], rel_tol, abs_tol, max_intervals)
    return QuadResult(float(vals[0]), float(errs[0]), nev)


def compact_map_weights(nodes, scale: float = 1.0) -> np.ndarray:
    """Trapezoid weights for arbitrary nodes on [0, inf), built in the compact variable.

    The nodes are mapped to ``t = x / (x + scale)``, trapezoid weights are
    formed there, and each is multiplied by the Jacobian ``dx/dt`` at its node.
    """
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0) or x[0] < 0:
        raise DomainError("nodes must be a strictly increasing sequence of >= 2 non-negative values")
    t = x / (x + scale)
    wt = np.empty_like(t)
    wt[1:-1] = 0.5 * (t[2:] - t[:-2])
    wt[0] = 0.5 * (t[1] - t[0])
    wt[-1] = 0.5 * (t[-1] - t[-2])
    return wt * (x + scale) ** 2 / scale


def panel_rule(breaks, order: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights over consecutive break points."""
    breaks = np.asarray(breaks, dtype=float)
    u, w = np.polynomial.legendre.leggauss(order)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * u[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def _iterated_average(partial_sums: np.ndarray) -> float:
    s = np.array(partial_sums, dtype=float)
    while s.size > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def integrate_oscillatory(envelope: Callable, r: float, rel_tol: float = DEFAULT_OSCILLATORY_REL,
                          abs_tol: float = 0.0, weight: str = "sin", window: int = 16,
                          max_halfperiods: int = 200_000) -> QuadResult:
    """Integral of ``envelope(k) * sin(k r)`` over [0, inf) (``weight="cos"`` for cosine).

    The range is cut at the zeros of the weight; each half-period is
    integrated adaptively and the alternating partial sums are accelerated by
    averaging ``window`` consecutive sums repeatedly.  Converged when the
    accelerated value is stable across two successive doublings of the number
    of half-periods.
    """
    if not r > 0:
        raise ZeroFrequency(f"frequency must be positive, got {r!r}")
    if weight == "sin":
        trig, offset = np.sin, 0.0
    elif weight == "cos":
        trig, offset = np.cos, 0.5
    else:
        raise DomainError(f"unknown weight {weight!r}")

    half_period = math.pi / r

    def g(k):
        return envelope(k) * trig(k * r)

    def edges_for(j0, j1):
        e = (np.arange(j0, j1 + 1) + offset) * half_period
        if j0 == 0:
            e[0] = 0.0
        return e

    inner_rel = min(1e-12, 1e-3 * rel_tol)
    terms = np.empty(0)
    evaluations = 0
    quad_err = 0.0
    n = 0
    batch = 2 * window
    estimates = []
    while True:
        if n + batch > max_halfperiods:
            raise NonConvergent(f"oscillatory integral not converged after {n} half-periods")
        floor = 1e-4 * rel_tol * (float(np.abs(np.cumsum(terms)).max()) if terms.size else 0.0)
        vals, errs, nev = _adaptive(g, edges_for(n, n + batch), inner_rel, floor, 20 * batch + 4000)
        terms = np.concatenate([terms, vals])
        quad_err += float(errs.sum())
        evaluations += nev
        n += batch

        partial = np.cumsum(terms)
        estimates.append(_iterated_average(partial[-window:]))
        scale_ref = max(abs(estimates[-1]), abs_tol)
        if not np.any(terms):
            return QuadResult(0.0, 0.0, evaluations)
        if len(estimates) >= 3:
            d1 = abs(estimates[-1] - estimates[-2])
            d2 = abs(estimates[-2] - estimates[-3])
            tol = max(abs_tol, rel_tol * scale_ref)
            if d1 <= tol and d2 <= 10 * tol:
                return QuadResult(estimates[-1], d1 + quad_err, evaluations)
        batch = n


# ---------------------------------------------------------------------------
# closed-form family

MAX_N = 6
MAX_M = 4


def _check_positive(**kw):
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")


def _c_n(n: int) -> Fraction:
    # I_n(A) = pi/(2 sqrt A) * c_n / A^(n-1), c_{n+1} = c_n (2n-1)/(2n)
    c = Fraction(1)
    for k in range(1, n):
        c *= Fraction(2 * k - 1, 2 * k)
    return c


def closed_form_In(A: float, n: int) -> float:
    """``int_0^inf (z^2 + A)^-n dz``; raises DomainError for A <= 0 or n < 1."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    _check_positive(A=A)
    c = _c_n(int(n))
    return math.pi / (2.0 * math.sqrt(A)) * (c.numerator / c.denominator) / A ** (n - 1)


class _Taylor2:
    """Truncated series sum c[i, j] a^i b^j with a, b nilpotent beyond the shape."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    @classmethod
    def const(cls, v, shape):
        c = np.zeros(shape)
        c[0, 0] = v
        return cls(c)

    def __add__(self, other):
        if isinstance(other, _Taylor2):
            return _Taylor2(self.c + other.c)
        out = self.c.copy()
        out[0, 0] += other
        return _Taylor2(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        if not isinstance(other, _Taylor2):
            return _Taylor2(self.c * other)
        p, q = self.c.shape
        out = np.zeros((p, q))
        for i in range(p):
            for j in range(q):
                cij = self.c[i, j]
                if cij != 0.0:
                    out[i:, j:] += cij * other.c[: p - i, : q - j]
        return _Taylor2(out)

    __rmul__ = __mul__

    def compose(self, coeffs):
        """Apply a scalar function given its Taylor coefficients at the constant term."""
        u = _Taylor2(self.c.copy())
        u.c[0, 0] = 0.0
        out = _Taylor2.const(coeffs[0], self.c.shape)
        power = _Taylor2.const(1.0, self.c.shape)
        for ck in coeffs[1:]:
            power = power * u
            out = out + ck * power
        return out

    def order(self):
        return sum(self.c.shape) - 2


def _reciprocal(x: _Taylor2) -> _Taylor2:
    x0 = x.c[0, 0]
    return x.compose([(-1.0) ** k / x0 ** (k + 1) for k in range(x.order() + 1)])


def _inv_sqrt(x: _Taylor2) -> _Taylor2:
    x0 = x.c[0, 0]
    coeffs = []
    binom = 1.0
    for k in range(x.order() + 1):
        coeffs.append(binom * x0 ** (-0.5 - k))
        binom *= (-0.5 - k) / (k + 1)
    return x.compose(coeffs)


def _log(x: _Taylor2) -> _Taylor2:
    x0 = x.c[0, 0]
    coeffs = [math.log(x0)] + [(-1.0) ** (k + 1) / (k * x0 ** k) for k in range(1, x.order() + 1)]
    return x.compose(coeffs)


def _i11_series(A: float, B: float, n: int, m: int) -> _Taylor2:
    shape = (n, m)
    a = _Taylor2.const(A, shape)
    b = _Taylor2.const(B, shape)
    if n > 1:
        a.c[1, 0] = 1.0
    if m > 1:
        b.c[0, 1] = 1.0
    bracket = (0.5 * math.pi) * b * _inv_sqrt(a) + 0.5 * _log(a) - _log(b)
    return _reciprocal(a + b * b) * bracket


def closed_form_Inm(A: float, B: float, n: int, m: int) -> float:
    """``int_0^inf (z^2 + A)^-n (z + B)^-m dz`` for 1 <= n <= MAX_N, 1 <= m <= MAX_M.

    The base case ``I_11 = [pi B / (2 sqrt A) + ln(A)/2 - ln B] / (A + B^2)``
    is expanded as a Taylor series in (A, B); the coefficient of
    ``dA^(n-1) dB^(m-1)`` times ``(-1)^(n+m)`` is ``I_nm``, since the
    factorials of the derivative rule cancel against the Taylor ones.
    """
    for name, v in (("n", n), ("m", m)):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    _check_positive(A=A, B=B)
    if n > MAX_N or m > MAX_M:
        raise DepthUnsupported(f"(n, m) = ({n}, {m}) exceeds implemented depth ({MAX_N}, {MAX_M})")
    series = _i11_series(float(A), float(B), int(n), int(m))
    return (-1.0) ** (n + m) * float(series.c[n - 1, m - 1])


def reduction_Inm(A: float, B: float, n: int, m: int) -> float:
    """Same integral as ``closed_form_Inm`` via the partial-fraction recurrence.

    Uses ``z^2 + A = (z + B)(z - B) + (A + B^2)`` which gives

        I[n, m] = (I[n-1, m] - I[n, m-2] + 2 B I[n, m-1]) / (A + B^2)

    with ``I[n, 0] = I_n(A)``, ``I[0, m] = B^(1-m)/(m-1)`` and
    ``I[n, -1] = 1/(2 (n-1) A^(n-1)) + B I_n(A)``.  Independent of the Taylor
    route, so the two cross-check each other.
    """
    _check_positive(A=A, B=B)
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    memo = {}

    def I(p, q):
        key = (p, q)
        if key in memo:
            return memo[key]
        if q == 0:
            v = closed_form_In(A, p)
        elif p == 0:
            v = B ** (1 - q) / (q - 1)
        elif q == -1:
            v = 1.0 / (2 * (p - 1) * A ** (p - 1)) + B * closed_form_In(A, p)
        elif p == 1 and q == 1:
            v = (math.pi * B / (2 * math.sqrt(A)) + 0.5 * math.log(A) - math.log(B)) / (A + B * B)
        else:
            v = (I(p - 1, q) - I(p, q - 2) + 2 * B * I(p, q - 1)) / (A + B * B)
        memo[key] = v
        return v

    return I(int(n), int(m))


def closed_form_moment(p: int, n: int, m: int, A: float, B: float) -> float:
    """``int_0^inf z^p (z^2 + A)^-n (z + B)^-m dz`` for 0 <= p <= m.

    Expands ``z^p = sum_j C(p, j) (z + B)^j (-B)^(p-j)`` so every piece is an
    ``I_{n, m-j}`` (``I_{n, 0}`` meaning ``I_n``).
    """
    if not 0 <= p <= m:
        raise DomainError("need 0 <= p <= m")
    if 2 * n + m - p <= 1:
        raise DomainError("integral diverges")
    total = 0.0
    for j in range(p + 1):
        q = m - j
        piece = closed_form_In(A, n) if q == 0 else closed_form_Inm(A, B, n, q)
        total += math.comb(p, j) * (-B) ** (p - j) * piece
    return total
