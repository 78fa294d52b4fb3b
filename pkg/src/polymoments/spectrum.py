"""Roots, the singular set S and the sup norm of a polynomial on [0, 1].

S is the set of critical values of f together with the endpoint values
f(0) and f(1). Every floating value carries an error radius; values whose
discs overlap are merged, so S is a set in the numerical sense.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InputError, NoConvergenceError
from .polynomial import Polynomial

EPS = np.finfo(float).eps
ENDPOINT_0 = "endpoint-0"
ENDPOINT_1 = "endpoint-1"
CRITICAL = "critical-value"
MERGE_FLOOR = 1e-9


class Root(NamedTuple):
    value: complex
    radius: float


def horner_noise(coeffs: np.ndarray, z) -> np.ndarray:
    """Rounding-error bound for Horner evaluation of ``coeffs`` at ``z``."""
    d = max(len(coeffs) - 1, 1)
    az = np.abs(z)
    acc = np.zeros_like(az, dtype=float) + abs(coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * az + abs(c)
    return 2 * d * EPS * acc


def _polyval(coeffs: np.ndarray, z):
    return np.polynomial.polynomial.polyval(z, coeffs)


def taylor_coefficients(coeffs: np.ndarray, z: complex) -> np.ndarray:
    """Coefficients of p(z + w) in powers of w (repeated synthetic division)."""
    c = np.array(coeffs, dtype=complex)
    n = len(c)
    for k in range(n - 1):
        for j in range(n - 2, k - 1, -1):
            c[j] += z * c[j + 1]
    return c


def _root_radius(coeffs: np.ndarray, dcoeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    d = len(coeffs) - 1
    err = np.abs(_polyval(coeffs, z)) + horner_noise(coeffs, z)
    dp = np.abs(_polyval(dcoeffs, z))
    with np.errstate(divide="ignore", invalid="ignore"):
        newton = np.where(dp > 0, d * err / dp, np.inf)
    cluster = (err / abs(coeffs[-1])) ** (1.0 / d)
    return np.minimum(newton, cluster)


def _aberth(coeffs: np.ndarray, max_iter: int) -> np.ndarray | None:
    d = len(coeffs) - 1
    a = coeffs / coeffs[-1]
    da = np.polynomial.polynomial.polyder(a)
    center = -a[d - 1] / d
    scale = abs(_polyval(a, center)) ** (1.0 / d)
    if not np.isfinite(scale) or scale == 0:
        scale = 1.0
    z = center + scale * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.4))
    done = np.zeros(d, dtype=bool)
    for _ in range(max_iter):
        pz = _polyval(a, z)
        dpz = _polyval(da, z)
        done |= np.abs(pz) <= horner_noise(a, z)
        if done.all():
            return z
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        if np.any(diff == 0):
            z = z + 1e-8 * (1 + np.abs(z)) * np.exp(1j * np.arange(d))
            continue
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        w[done] = 0.0
        z = z - w
        small = np.abs(w) <= 4 * EPS * (1 + np.abs(z))
        done |= small
    return None


def _companion(coeffs: np.ndarray) -> np.ndarray:
    d = len(coeffs) - 1
    a = coeffs / coeffs[-1]
    comp = np.zeros((d, d), dtype=complex)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -a[:-1]
    z = np.linalg.eigvals(comp)
    da = np.polynomial.polynomial.polyder(a)
    for _ in range(3):
        pz, dpz = _polyval(a, z), _polyval(da, z)
        step = np.where(np.abs(dpz) > 0, pz / np.where(dpz == 0, 1, dpz), 0)
        cand = z - step
        better = np.abs(_polyval(a, cand)) < np.abs(pz)
        z = np.where(better, cand, z)
    return z


def residual_ok(coeffs: np.ndarray, z: np.ndarray, rel: float = 1e-8) -> bool:
    # large roots cannot beat the rounding floor of the evaluation itself
    tol = np.maximum(rel * (1 + np.max(np.abs(coeffs))), 64 * horner_noise(coeffs, z))
    return bool(np.all(np.abs(_polyval(coeffs, z)) <= tol))


def roots_of_coefficients(coeffs: Sequence[complex], method: str = "aberth", max_iter: int = 500) -> list[Root]:
    """All roots of a floating coefficient vector (low to high), with radii."""
    c = np.asarray(coeffs, dtype=complex)
    while len(c) and c[-1] == 0:
        c = c[:-1]
    if len(c) < 2:
        raise InputError("roots of a constant polynomial are undefined")
    if len(c) == 2:
        z = np.array([-c[0] / c[1]])
    else:
        z = None
        if method == "aberth":
            z = _aberth(c, max_iter)
            if z is not None and not residual_ok(c, z):
                z = None
        elif method != "companion":
            raise InputError(f"unknown root method {method!r}")
        if z is None:
            z = _companion(c)
            if not residual_ok(c, z):
                raise NoConvergenceError("root finder failed to reach the residual tolerance")
    radii = _root_radius(c, np.polynomial.polynomial.polyder(c), z)
    order = np.lexsort((z.imag, z.real))
    return [Root(complex(z[k]), float(radii[k])) for k in order]


def roots(p: Polynomial, method: str = "aberth", max_iter: int = 500) -> list[Root]:
    """Roots of p with multiplicity, each with an a-posteriori error radius.

    Aberth-Ehrlich iteration by default; falls back to companion-matrix
    eigenvalues when Aberth does not converge within ``max_iter`` sweeps.
    """
    if p.degree() < 1:
        raise InputError("roots() needs a polynomial of degree >= 1")
    return roots_of_coefficients(p.to_numpy(), method=method, max_iter=max_iter)


# singular set ------------------------------------------------------------

@dataclass(frozen=True)
class CriticalValue:
    value: complex
    radius: float
    kinds: tuple[str, ...]


@dataclass(frozen=True)
class CriticalSet:
    elements: tuple[CriticalValue, ...]
    max_modulus: float = field(init=False)

    def __post_init__(self):
        m = max((abs(e.value) for e in self.elements), default=0.0)
        object.__setattr__(self, "max_modulus", float(m))

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.elements], dtype=complex)

    def __len__(self):
        return len(self.elements)

    def distance(self, tau: complex) -> float:
        if not self.elements:
            return math.inf
        return float(np.min(np.abs(self.values - tau)))

    def min_gap(self) -> float:
        v = self.values
        gaps = [abs(v[i] - v[j]) for i in range(len(v)) for j in range(i + 1, len(v))]
        return float(min(gaps)) if gaps else math.inf

    def without(self, point: complex, tol: float = 1e-12) -> "CriticalSet":
        """Drop elements within ``tol`` (plus their radius) of ``point``."""
        keep = tuple(e for e in self.elements if abs(e.value - point) > tol + e.radius)
        return CriticalSet(keep)

    def to_dict(self) -> dict:
        return {
            "elements": [
                {"re": e.value.real, "im": e.value.imag, "radius": e.radius, "kinds": list(e.kinds)}
                for e in self.elements
            ],
            "max_modulus": self.max_modulus,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CriticalSet":
        return cls(tuple(
            CriticalValue(complex(e["re"], e["im"]), float(e["radius"]), tuple(e["kinds"]))
            for e in data["elements"]
        ))

    @classmethod
    def from_json(cls, text: str) -> "CriticalSet":
        return cls.from_dict(json.loads(text))


def _taylor_spread(coeffs: np.ndarray, z: complex, r: float) -> float:
    """Bound on |p(w) - p(z)| for |w - z| <= r."""
    t = taylor_coefficients(coeffs, z)
    return float(sum(abs(t[k]) * r**k for k in range(1, len(t))))


def merge_values(raw: Sequence[CriticalValue], floor: float) -> tuple[CriticalValue, ...]:
    """Merge values whose discs overlap (distance <= sum of radii, or <= floor)."""
    clusters = [[e] for e in raw]

    def summary(cl):
        rep = min(cl, key=lambda e: e.radius)
        radius = max(abs(e.value - rep.value) + e.radius for e in cl)
        kinds = []
        for e in cl:
            kinds.extend(k for k in e.kinds if k not in kinds)
        return CriticalValue(rep.value, float(radius), tuple(kinds))

    merged = True
    while merged:
        merged = False
        summ = [summary(cl) for cl in clusters]
        for i in range(len(summ)):
            for j in range(i + 1, len(summ)):
                if abs(summ[i].value - summ[j].value) <= max(summ[i].radius + summ[j].radius, floor):
                    clusters[i].extend(clusters.pop(j))
                    merged = True
                    break
            if merged:
                break
    return tuple(summary(cl) for cl in clusters)


def critical_set(f: Polynomial, method: str = "aberth") -> CriticalSet:
    """S = {f(z) : f'(z) = 0} united with {f(0), f(1)}, deduplicated.

    Endpoint values are computed exactly and then rounded. Constant f gives
    S = {f(0)}.
    """
    coeffs = f.to_numpy() if not f.is_zero() else np.zeros(1, dtype=complex)
    f0 = complex(f(0))
    f1 = complex(f(1))
    raw = [
        CriticalValue(f0, EPS * abs(f0), (ENDPOINT_0,)),
        CriticalValue(f1, 2 * EPS * abs(f1), (ENDPOINT_1,)),
    ]
    if f.degree() >= 2:
        for z, r in roots(f.derivative(), method=method):
            v = complex(f.eval(z))
            rad = _taylor_spread(coeffs, z, r) + float(horner_noise(coeffs, z))
            raw.append(CriticalValue(v, rad, (CRITICAL,)))
    floor = MERGE_FLOOR * (1 + max(abs(e.value) for e in raw))
    return CriticalSet(merge_values(raw, floor))


# sup norm ------------------------------------------------------------------

@dataclass(frozen=True)
class SupNorm:
    value: float
    argmax: float
    error: float


def sup_norm(f: Polynomial, method: str = "aberth") -> SupNorm:
    """M(f) = max |f| on [0, 1].

    For real x, |f(x)|^2 = q(x) with q = f * conj(f) an exact real polynomial;
    the maximum sits at 0, 1 or a real root of q' in [0, 1].
    """
    if f.is_zero():
        return SupNorm(0.0, 0.0, 0.0)
    q = f * f.conjugate()
    dq = q.derivative()
    candidates: list[tuple[float, float]] = [(0.0, 0.0), (1.0, 0.0)]
    if dq.degree() >= 1:
        for z, r in roots(dq, method=method):
            if abs(z.imag) <= max(2 * r, 1e-5) and -2 * r - 1e-9 <= z.real <= 1 + 2 * r + 1e-9:
                candidates.append((min(max(z.real, 0.0), 1.0), r))
    coeffs = f.to_numpy()
    lipschitz = float(sum(k * abs(c) for k, c in enumerate(coeffs)))
    best = (-1.0, 0.0, 0.0)
    for x, r in candidates:
        val = abs(f.eval(x))
        if val > best[0]:
            err = float(horner_noise(coeffs, x)) + lipschitz * min(r, 1.0)
            best = (float(val), x, err)
    return SupNorm(best[0], best[1], best[2])
