"""Isotropic ground-state densities, their form factors and dipole moments.

Internal units: e = hbar = m = 1, lengths in Bohr radii, energies in e^2/a.
The Compton length is then equal to the fine-structure constant.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DivergentMoment, DomainError, IoError, NormalizationError
from .quadrature import integrate_oscillatory, integrate_semi_infinite, panel_rule

ALPHA = 1 / 137.035999
BOHR_RADIUS_CM = 5.29177e-9

NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class UnitSystem:
    alpha: float = ALPHA

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"fine-structure constant must lie in (0, 1), got {self.alpha!r}")

    @property
    def compton_length(self) -> float:
        return self.alpha

    @property
    def hbar_c(self) -> float:
        return 1.0 / self.alpha

    @property
    def speed_of_light(self) -> float:
        return 1.0 / self.alpha


def _sinc(x):
    # sin(x)/x with the removable point at 0
    return np.sinc(np.asarray(x) / np.pi)


def _one_minus_sinc(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-2
    x2 = x * x
    series = x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = 1.0 - np.sin(x) / np.where(small, 1.0, x)
    return np.where(small, series, direct)


@dataclass(frozen=True)
class DensityProfile:
    """Spherically symmetric electron density n(r) with unit total charge.

    Build with :meth:`hydrogen_1s`, :meth:`gaussian` or :meth:`tabulated`.
    ``normalization_check`` is 4 pi int r^2 n(r) dr of the density as given
    (for tables, before any rescaling).
    """

    kind: str
    width: float = 1.0
    samples: tuple[np.ndarray, np.ndarray] | None = None
    normalization_check: float = 1.0
    _table: "_Tabulated | None" = field(default=None, repr=False, compare=False)

    @classmethod
    def hydrogen_1s(cls) -> "DensityProfile":
        return cls(kind="hydrogen_1s")

    @classmethod
    def gaussian(cls, width: float = 1.0) -> "DensityProfile":
        """Density proportional to exp(-2 r^2 / width^2) (a Gaussian orbital exp(-r^2/width^2))."""
        if not width > 0:
            raise DomainError("gaussian width must be positive")
        return cls(kind="gaussian", width=float(width))

    @classmethod
    def tabulated(cls, r: Sequence[float], density: Sequence[float], normalize: bool = True,
                  panel_order: int = 12) -> "DensityProfile":
        """Density given on a radial grid.

        Interpolated with a monotone cubic (PCHIP) and continued past the last
        sample with an exponential fitted to the outer samples.  With
        ``normalize`` the table is rescaled to unit charge; otherwise it must
        already integrate to one within 1e-8.
        """
        r = np.asarray(r, dtype=float)
        n = np.asarray(density, dtype=float)
        if r.ndim != 1 or r.shape != n.shape or r.size < 4:
            raise DomainError("tabulated profile needs >= 4 matching (r, density) samples")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise DomainError("tabulated radii must be non-negative and strictly increasing")
        if np.any(n < 0) or not np.all(np.isfinite(n)):
            raise DomainError("tabulated density must be finite and non-negative")
        table = _Tabulated(r, n, panel_order)
        raw = table.moment(2)
        if not raw > 0:
            raise NormalizationError("tabulated density integrates to zero")
        if normalize:
            table = table.scaled(1.0 / raw)
        elif abs(raw - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"tabulated density has total charge {raw!r}, expected 1")
        return cls(kind="tabulated", samples=(r, n), normalization_check=raw, _table=table)

    # -- density --------------------------------------------------------

    def density(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "hydrogen_1s":
            return np.exp(-2.0 * r) / math.pi
        if self.kind == "gaussian":
            w2 = self.width ** 2
            return (2.0 / (math.pi * w2)) ** 1.5 * np.exp(-2.0 * r * r / w2)
        return self._table(r)

    @property
    def length_scale(self) -> float:
        if self.kind == "gaussian":
            return self.width
        if self.kind == "tabulated":
            return float(self._table.length_scale)
        return 1.0

    def radial_moment(self, power: int) -> float:
        """4 pi int r^power n(r) dr, by quadrature for every kind."""
        if self.kind == "tabulated":
            return self._table.moment(power)
        res = integrate_semi_infinite(lambda r: 4 * math.pi * r ** power * self.density(r),
                                      rel_tol=1e-12, scale=self.length_scale)
        return res.value

    def to_csv(self, r_max: float | None = None, count: int = 400) -> str:
        """CSV text with header ``r,density``; readable by :func:`read_profile_csv`."""
        if self.kind == "tabulated":
            r = self.samples[0]
            n = self._table(r)
        else:
            r_max = r_max or 30.0 * self.length_scale
            r = np.linspace(0.0, r_max, count)
            n = self.density(r)
        out = io.StringIO()
        out.write("r,density\n")
        for ri, ni in zip(r, n):
            out.write(f"{ri:.12g},{ni:.12g}\n")
        return out.getvalue()


class _Tabulated:
    """PCHIP interior plus exponential tail; all integrals by composite Gauss panels."""

    def __init__(self, r, n, panel_order, factor=1.0, tail=None):
        self.r = r
        self.n = n * factor
        self.factor = factor
        self.panel_order = panel_order
        self.interp = PchipInterpolator(r, self.n, extrapolate=True)
        breaks = r if r[0] == 0 else np.concatenate([[0.0], r])
        self.nodes, self.weights = panel_rule(breaks, panel_order)
        self.values = np.clip(self.interp(self.nodes), 0.0, None)
        self.r_end = float(r[-1])
        self.tail = tail if tail is not None else self._fit_tail()
        if tail is not None:
            self.tail = (tail[0] * factor, tail[1])

    @property
    def length_scale(self):
        return max(self.r_end / 10.0, 1e-6)

    def _fit_tail(self):
        k = max(3, self.r.size // 10)
        rr, nn = self.r[-k:], self.n[-k:]
        if self.n[-1] == 0.0:
            return (0.0, 1.0)
        if np.any(nn <= 0):
            raise DivergentMoment("cannot fit an exponential tail to non-positive outer samples")
        slope, _ = np.polyfit(rr, np.log(nn), 1)
        decay = -slope
        if not decay > 0:
            raise DivergentMoment("tabulated density does not decay at large r; moments diverge")
        return (float(self.n[-1]), float(decay))

    def scaled(self, factor):
        return _Tabulated(self.r, self.n, self.panel_order, factor=factor, tail=self.tail)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        amp, decay = self.tail
        inner = np.clip(self.interp(np.minimum(r, self.r_end)), 0.0, None)
        outer = amp * np.exp(-decay * (r - self.r_end))
        return np.where(r <= self.r_end, inner, outer)

    def _tail_moment(self, power):
        # int_R^inf r^p A e^{-b (r-R)} dr = A e^{bR} Gamma(p+1, bR) / b^(p+1)
        amp, decay = self.tail
        if amp == 0.0:
            return 0.0
        from scipy.special import gammaincc

        x = decay * self.r_end
        return amp * math.gamma(power + 1) * gammaincc(power + 1, x) * math.exp(x) / decay ** (power + 1)

    def moment(self, power):
        inner = float(np.sum(self.weights * self.nodes ** power * self.values))
        return 4 * math.pi * (inner + self._tail_moment(power))

    def _tail_sine(self, k):
        # 4 pi int_R^inf r A e^{-b (r-R)} sin(k r) dr, closed form
        amp, b = self.tail
        if amp == 0.0:
            return np.zeros_like(k)
        R = self.r_end
        d = b * b + k * k
        sR, cR = np.sin(k * R), np.cos(k * R)
        # int_R^inf e^{-b(r-R)} sin(kr) dr and int r e^{-b(r-R)} sin(kr) dr
        s0 = (b * sR + k * cR) / d
        c0 = (b * cR - k * sR) / d
        s1 = R * s0 + (b * s0 + k * c0) / d
        return 4 * math.pi * amp * s1

    def _panel_sum(self, kernel, k):
        w = self.weights * self.nodes ** 2 * self.values
        out = np.empty(k.size)
        for lo in range(0, k.size, 256):
            kk = k[lo:lo + 256]
            out[lo:lo + 256] = kernel(np.outer(kk, self.nodes)) @ w
        return 4 * math.pi * out

    def transform(self, k):
        k = np.atleast_1d(np.asarray(k, dtype=float))
        safe = np.where(k > 0, k, 1.0)
        tail = np.where(k > 0, self._tail_sine(k) / safe, 4 * math.pi * self._tail_moment(2))
        return self._panel_sum(_sinc, k) + tail

    def _tail_one_minus(self, k):
        # 4 pi int_R^inf r^2 n_tail(r) (1 - sinc(k r)) dr
        amp, b = self.tail
        if amp == 0.0:
            return np.zeros_like(k)
        R = self.r_end
        direct = 4 * math.pi * self._tail_moment(2) - np.where(k > 0, self._tail_sine(k) / np.where(k > 0, k, 1.0), 0.0)
        x, w = np.polynomial.laguerre.laggauss(64)
        r = R + x / b
        series = 4 * math.pi * amp / b * (_one_minus_sinc(np.outer(k, r)) @ (w * r * r))
        return np.where(k * (R + 60.0 / b) < 1.0, series, direct)

    def one_minus_transform(self, k):
        k = np.atleast_1d(np.asarray(k, dtype=float))
        # 1 - nhat = (1 - norm) + [norm - nhat], the bracket summed without cancellation
        return (1.0 - self.moment(2)) + self._panel_sum(_one_minus_sinc, k) + self._tail_one_minus(k)


@dataclass(frozen=True)
class FormFactor:
    """Fourier transform k -> nhat(k) of a density, with its small-k data.

    ``one_minus`` evaluates 1 - nhat(k) without cancellation, which is what
    the small-k curvature identity needs.  ``tail_power`` is the large-k
    power-law exponent of nhat (-inf for faster-than-power decay).
    """

    evaluator: Callable
    one_minus: Callable
    small_k_curvature: float
    tail_power: float

    def __call__(self, k):
        return self.evaluator(k)


def form_factor(profile: DensityProfile, method: str = "auto") -> FormFactor:
    """Form factor 4 pi/k int r n(r) sin(k r) dr of ``profile``.

    ``method="auto"`` uses the closed transform for hydrogen and Gaussian
    densities and composite panel quadrature for tables;
    ``method="quadrature"`` evaluates the defining integral for any kind
    (slow, used for cross-checks).
    """
    if profile.kind == "tabulated":
        norm = profile._table.moment(2)
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"profile has total charge {norm!r}")
    d2 = mean_square_dipole(profile)
    curvature = d2 / 6.0

    if method == "quadrature":
        def ev(k):
            return _quadrature_transform(profile, k)

        return FormFactor(ev, lambda k: 1.0 - ev(k), curvature, _tail_power(profile))
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")

    if profile.kind == "hydrogen_1s":
        def ev(k):
            return (1.0 + 0.25 * np.asarray(k, dtype=float) ** 2) ** -2

        def om(k):
            x = 0.25 * np.asarray(k, dtype=float) ** 2
            return (2.0 * x + x * x) / (1.0 + x) ** 2
    elif profile.kind == "gaussian":
        c = profile.width ** 2 / 8.0

        def ev(k):
            return np.exp(-c * np.asarray(k, dtype=float) ** 2)

        def om(k):
            return -np.expm1(-c * np.asarray(k, dtype=float) ** 2)
    else:
        table = profile._table

        def ev(k):
            k = np.asarray(k, dtype=float)
            return table.transform(k.ravel()).reshape(k.shape)

        def om(k):
            k = np.asarray(k, dtype=float)
            return table.one_minus_transform(k.ravel()).reshape(k.shape)

    return FormFactor(ev, om, curvature, _tail_power(profile))


def _tail_power(profile):
    if profile.kind == "gaussian":
        return -math.inf
    # densities with a cusp at the origin (hydrogenic, tabulated): nhat ~ k^-4
    return -4.0


def _quadrature_transform(profile, k):
    k = np.asarray(k, dtype=float)
    out = np.empty(k.shape)
    for idx, kv in np.ndenumerate(k):
        if kv == 0.0:
            out[idx] = 1.0
            continue
        res = integrate_oscillatory(lambda r: r * profile.density(r), kv, rel_tol=1e-12)
        out[idx] = 4 * math.pi / kv * res.value
    return out


def mean_square_dipole(profile: DensityProfile) -> float:
    """<d^2>/e^2 = 4 pi int r^4 n(r) dr in units of a^2."""
    if profile.kind == "hydrogen_1s":
        return 3.0
    if profile.kind == "gaussian":
        return 0.75 * profile.width ** 2
    value = profile._table.moment(4)
    if not math.isfinite(value):
        raise DivergentMoment("second radial moment diverges")
    return value


def read_profile_csv(path_or_text, normalize: bool = True) -> DensityProfile:
    """Read a ``r,density`` CSV (``#`` comments and blank lines ignored)."""
    rows = _read_csv_columns(path_or_text, ("r", "density"))
    return DensityProfile.tabulated(rows[0], rows[1], normalize=normalize)


def _read_csv_columns(path_or_text, header: tuple[str, ...]) -> list[np.ndarray]:
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text):
        try:
            text = Path(path_or_text).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read {path_or_text}: {exc}") from exc
    else:
        text = path_or_text
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise IoError("empty CSV input")
    reader = csv.reader(lines)
    head = [h.strip() for h in next(reader)]
    if tuple(head) != header:
        raise IoError(f"expected CSV header {','.join(header)!r}, got {','.join(head)!r}")
    cols = [[] for _ in header]
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise IoError(f"line {lineno}: expected {len(header)} fields")
        try:
            for c, v in zip(cols, row):
                c.append(float(v))
        except ValueError as exc:
            raise IoError(f"line {lineno}: {exc}") from exc
    return [np.array(c) for c in cols]
