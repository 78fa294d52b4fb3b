"""The generating function F(t) = sum t^n M_n and its analytic continuation.

Three evaluators:

* :func:`f_series` -- the truncated power series, valid for |t| M(f) < 1.
* :func:`f_quadrature` -- adaptive quadrature of the integral of 1/(1 - t f(x))
  over [0, 1], valid while 1 - t f(x) has no zero on [0, 1].
* :func:`f_partial_fraction` -- with tau = 1/t and z_1..z_d the roots of
  f(z) = tau,

      F(t) = -(tau / a_d) * sum_k [ prod_{l != k} 1/(z_k - z_l) ] * L_k,

  where a_d is the leading coefficient and L_k a continuously tracked value
  of log((1 - z_k)/(-z_k)). Dividing f - tau by a_d gives a monic
  polynomial with the same roots, which is where the 1/a_d comes from.

Root tracking happens in the tau-plane along piecewise-linear paths that keep
a fixed clearance from the singular set S. Detours around elements of S are
counterclockwise circular arcs (the obstacle stays on the left of travel);
the value of the continued F depends on this convention.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import (
    BlockedPathError,
    CoincidentRootsError,
    DomainError,
    FitDegenerateError,
    InputError,
    NoConvergenceError,
    PoleOnContourError,
    RootResidualError,
    StepUnderflowError,
)
from .moments import MomentSequence, log_abs
from .polynomial import ComplexRational, Polynomial
from .spectrum import EPS, CriticalSet, critical_set, roots_of_coefficients, sup_norm

TWO_PI = 2 * math.pi
DETOUR_CONVENTION = "ccw-arc-radius-2c"
DEFAULT_MARGIN = 0.05
DEFAULT_DELTA_L = math.pi / 2
QUAD_RTOL = 1e-10


@dataclass(frozen=True)
class FValue:
    t: complex
    value: complex
    method: str
    error_estimate: float

    def to_dict(self) -> dict:
        return {
            "t": [self.t.real, self.t.imag],
            "value": [self.value.real, self.value.imag],
            "method": self.method,
            "error_estimate": self.error_estimate,
        }


# series ------------------------------------------------------------------

def _term(v: ComplexRational, t: complex, n: int) -> complex:
    """t^n * v without overflowing when v itself is outside float range."""
    if not v or (t == 0 and n > 0):
        return 0j
    la = log_abs(v)
    if abs(la) < 600:
        return complex(v) * t**n
    e = int(round(la / math.log(2)))
    scaled = v * ComplexRational(2) ** (-e)
    return complex(scaled) * cmath.exp(n * cmath.log(t) + e * math.log(2))


def f_series(
    f: Polynomial,
    seq: MomentSequence,
    t: complex,
    margin: float = DEFAULT_MARGIN,
    sup: Optional[float] = None,
) -> FValue:
    """Partial sum of F up to the sequence's n_max, with a geometric tail bound."""
    t = complex(t)
    m = sup_norm(f).value if sup is None else sup
    rho = abs(t) * m
    if rho >= 1 - margin:
        raise DomainError(f"|t| M(f) = {rho:.6g} is not below 1 - {margin}: outside the series disc")
    if t == 0:
        return FValue(t, complex(seq.values[0]), "series", 0.0)
    value = sum((_term(v, t, n) for n, v in seq.items()), 0j)
    tail = rho ** (seq.n_max + 1) / (1 - rho)
    return FValue(t, value, "series", float(tail + 4 * EPS * len(seq) * max(1.0, abs(value))))


# quadrature ----------------------------------------------------------------

def contour_poles(f: Polynomial, tau: complex, tol: float = 1e-9) -> list[float]:
    """Real x in [0, 1] (within ``tol``) where f(x) = tau."""
    c = np.array(f.to_numpy(), dtype=complex)
    if len(c) == 0:
        c = np.zeros(1, dtype=complex)
    c[0] -= tau
    if len(c) < 2 or np.all(c[1:] == 0):
        return [] if abs(c[0]) > tol else [0.0]
    hits = []
    for z, r in roots_of_coefficients(c):
        slack = max(r, tol * (1 + abs(z)))
        if abs(z.imag) <= slack and -slack <= z.real <= 1 + slack:
            hits.append(min(max(z.real, 0.0), 1.0))
    return hits


def f_quadrature(
    f: Polynomial,
    t: complex,
    S: Optional[CriticalSet] = None,
    clearance: float = 0.0,
    rtol: float = QUAD_RTOL,
    pole_tol: float = 1e-9,
) -> FValue:
    """Adaptive Gauss-Kronrod quadrature of the integral of 1/(1 - t f(x))."""
    t = complex(t)
    if t == 0:
        return FValue(t, 1 + 0j, "quadrature", 0.0)
    tau = 1 / t
    if S is not None:
        for e in S.elements:
            if abs(tau - e.value) <= max(clearance, e.radius):
                raise DomainError(f"1/t = {tau} lies on the singular set element {e.value}")
    poles = contour_poles(f, tau, pole_tol)
    if poles:
        raise PoleOnContourError(f"1 - t f(x) vanishes at x = {poles[0]:.12g} in [0, 1]")
    coeffs = f.to_numpy()

    def integrand(x):
        return 1.0 / (1.0 - t * np.polynomial.polynomial.polyval(x, coeffs))

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, err = quad(integrand, 0.0, 1.0, complex_func=True, epsrel=rtol, epsabs=1e-14, limit=1000)
        except IntegrationWarning as exc:
            raise NoConvergenceError(f"quadrature did not converge: {exc}") from None
    return FValue(t, complex(value), "quadrature", float(abs(err)))


# paths --------------------------------------------------------------------

def segment_distance(a: complex, b: complex, p: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    u = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    u = min(max(u, 0.0), 1.0)
    return abs(a + u * ab - p)


@dataclass(frozen=True)
class TauPath:
    """Polyline in the tau-plane keeping ``clearance`` away from S."""

    waypoints: tuple[complex, ...]
    clearance: float

    def segments(self):
        return zip(self.waypoints[:-1], self.waypoints[1:])

    def length(self) -> float:
        return float(sum(abs(b - a) for a, b in self.segments()))

    def reversed(self) -> "TauPath":
        return TauPath(tuple(reversed(self.waypoints)), self.clearance)

    def then(self, other: "TauPath") -> "TauPath":
        if abs(self.waypoints[-1] - other.waypoints[0]) > 1e-12 * (1 + abs(other.waypoints[0])):
            raise InputError("paths do not join")
        return TauPath(self.waypoints + other.waypoints[1:], min(self.clearance, other.clearance))

    def min_distance(self, points: Iterable[complex]) -> float:
        pts = list(points)
        if not pts:
            return math.inf
        if len(self.waypoints) == 1:
            return min(abs(self.waypoints[0] - p) for p in pts)
        return min(segment_distance(a, b, p) for a, b in self.segments() for p in pts)

    def clear_of(self, S: CriticalSet) -> bool:
        return self.min_distance(S.values) >= self.clearance * (1 - 1e-9)

    def starts_outside(self, S: CriticalSet) -> bool:
        return abs(self.waypoints[0]) > S.max_modulus


def default_clearance(S: CriticalSet) -> float:
    """0.1 times the smallest gap between S elements, floored at 1e-3."""
    gap = S.min_gap()
    if not math.isfinite(gap):
        return 0.1
    return max(0.1 * gap, 1e-3)


def _circle_hits(a: complex, b: complex, s: complex, radius: float) -> tuple[float, float]:
    ab = b - a
    A = abs(ab) ** 2
    B = 2 * ((a - s) * ab.conjugate()).real
    C = abs(a - s) ** 2 - radius**2
    disc = max(B * B - 4 * A * C, 0.0)
    root = math.sqrt(disc)
    return (-B - root) / (2 * A), (-B + root) / (2 * A)


def _route(a: complex, b: complex, obstacles: Sequence[complex], clearance: float, depth: int = 0) -> list[complex]:
    if depth > 64:
        raise BlockedPathError("path planning did not terminate; clearance too large for this S")
    ab = b - a
    hits = []
    for s in obstacles:
        if segment_distance(a, b, s) <= clearance:
            u = ((s - a) * ab.conjugate()).real / abs(ab) ** 2 if ab != 0 else 0.0
            hits.append((u, s))
    if not hits:
        return [b]
    _, s = min(hits, key=lambda h: h[0])
    radius = min(2 * clearance, abs(a - s), abs(b - s))
    u_in, u_out = _circle_hits(a, b, s, radius)
    u_in, u_out = max(u_in, 0.0), min(u_out, 1.0)
    p_in, p_out = a + u_in * ab, a + u_out * ab
    th_in = cmath.phase(p_in - s)
    sweep = (cmath.phase(p_out - s) - th_in) % TWO_PI
    if sweep == 0:
        sweep = TWO_PI
    n = max(2, math.ceil(sweep / (math.pi / 16)))
    arc = [s + radius * cmath.exp(1j * (th_in + sweep * k / n)) for k in range(1, n)] + [p_out]
    head = _route(a, p_in, obstacles, clearance, depth + 1) if abs(p_in - a) > 0 else []
    tail = _route(p_out, b, obstacles, clearance, depth + 1) if abs(b - p_out) > 0 else []
    return head + arc + tail


def plan_path(
    S: CriticalSet | Sequence[complex],
    tau_start: complex,
    tau_end: complex,
    clearance: Optional[float] = None,
) -> TauPath:
    """Straight path from tau_start to tau_end with arc detours around S.

    A segment passing within ``clearance`` of an element s is replaced, between
    its crossings of the circle of radius 2*clearance about s, by the
    counterclockwise arc of that circle.
    """
    if isinstance(S, CriticalSet):
        obstacles = list(S.values)
        if clearance is None:
            clearance = default_clearance(S)
    else:
        obstacles = [complex(s) for s in S]
        if clearance is None:
            raise InputError("clearance is required when S is given as plain points")
    if clearance <= 0:
        raise InputError("clearance must be positive")
    tau_start, tau_end = complex(tau_start), complex(tau_end)
    for label, tau in (("tau_end", tau_end), ("tau_start", tau_start)):
        near = [s for s in obstacles if abs(tau - s) <= clearance]
        if near:
            raise BlockedPathError(f"{label} = {tau} lies within clearance {clearance} of S element {near[0]}")
    if tau_start == tau_end:
        return TauPath((tau_start,), clearance)
    pts = [tau_start] + _route(tau_start, tau_end, obstacles, clearance)
    cleaned = [pts[0]]
    for p in pts[1:]:
        if abs(p - cleaned[-1]) > 1e-15 * (1 + abs(p)):
            cleaned.append(p)
    path = TauPath(tuple(cleaned), clearance)
    if path.min_distance(obstacles) < clearance * (1 - 1e-9):
        raise BlockedPathError("no detour keeps the requested clearance; reduce it")
    return path


def join_paths(S, taus: Sequence[complex], clearance: Optional[float] = None) -> TauPath:
    """Concatenate planned legs through the given sequence of points."""
    path = plan_path(S, taus[0], taus[1], clearance)
    for a, b in zip(taus[1:-1], taus[2:]):
        path = path.then(plan_path(S, a, b, path.clearance))
    return path


# root tracking -------------------------------------------------------------

@dataclass(frozen=True)
class RootBundle:
    tau: complex
    roots: tuple[complex, ...]
    logs: tuple[complex, ...]
    branch_offsets: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "tau": [self.tau.real, self.tau.imag],
            "roots": [[z.real, z.imag] for z in self.roots],
            "logs": [[z.real, z.imag] for z in self.logs],
            "branch_offsets": list(self.branch_offsets),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RootBundle":
        return cls(
            complex(*data["tau"]),
            tuple(complex(*z) for z in data["roots"]),
            tuple(complex(*z) for z in data["logs"]),
            tuple(int(k) for k in data["branch_offsets"]),
        )


def log_ratio(z):
    """Principal log((1 - z)/(-z))."""
    return np.log((1 - np.asarray(z)) / (-np.asarray(z)))


def initial_bundle(f: Polynomial, tau: complex) -> RootBundle:
    """Roots of f - tau from the global root finder, principal logarithms."""
    c = np.array(f.to_numpy(), dtype=complex)
    c[0] -= tau
    z = np.array([r.value for r in roots_of_coefficients(c)])
    if np.any(z == 0) or np.any(z == 1):
        raise BlockedPathError(f"tau = {tau} equals f(0) or f(1)")
    logs = log_ratio(z)
    return RootBundle(complex(tau), tuple(complex(v) for v in z), tuple(complex(v) for v in logs), (0,) * len(z))


class _Tracker:
    def __init__(self, f: Polynomial, residual_tol: float, delta_L: float):
        self.c = f.to_numpy()
        self.dc = np.polynomial.polynomial.polyder(self.c)
        self.residual_tol = residual_tol
        self.delta_L = delta_L

    def val(self, z):
        return np.polynomial.polynomial.polyval(z, self.c)

    def der(self, z):
        return np.polynomial.polynomial.polyval(z, self.dc)

    def step(self, z, logs, tau0, tau1):
        """Return (roots, logs, offsets) at tau1, or a failure reason string."""
        d = len(z)
        dz = self.der(z)
        if np.any(dz == 0):
            return "singular"
        w = z + (tau1 - tau0) / dz
        for _ in range(12):
            dw = self.der(w)
            if np.any(dw == 0):
                return "singular"
            corr = (self.val(w) - tau1) / dw
            w = w - corr
            if np.all(np.abs(corr) <= 4 * EPS * (1 + np.abs(w))):
                break
        if not np.all(np.isfinite(w)):
            return "residual"
        res = np.abs(self.val(w) - tau1)
        if np.any(res > self.residual_tol * (1 + abs(tau1))):
            return "residual"
        if d > 1:
            gaps = np.abs(z[:, None] - z[None, :])
            np.fill_diagonal(gaps, np.inf)
            delta_z = 0.25 * gaps.min()
            if np.any(np.abs(w - z) > delta_z):
                return "move"
            nearest = np.argmin(np.abs(w[:, None] - z[None, :]), axis=1)
            if len(set(nearest.tolist())) != d:
                return "collision"
            w = w[np.argsort(nearest)]
        if np.any(w == 0) or np.any(w == 1):
            return "singular"
        principal = log_ratio(w)
        k = np.round((logs - principal).imag / TWO_PI)
        new_logs = principal + 1j * TWO_PI * k
        if np.any(np.abs(new_logs - logs) > self.delta_L):
            return "log"
        return w, new_logs, k.astype(int)


def track_roots(
    f: Polynomial,
    path: TauPath,
    start: Optional[RootBundle] = None,
    *,
    delta_L: float = DEFAULT_DELTA_L,
    residual_tol: float = 1e-10,
    min_step: float = 1e-14,
    max_steps: int = 2_000_000,
) -> list[RootBundle]:
    """Predictor-corrector continuation of the roots of f(z) = tau along ``path``.

    Euler predictor dz = dtau / f'(z), Newton corrector. A step is rejected
    and halved when a root moves more than a quarter of the current minimum
    root separation, when nearest-neighbour matching is not a bijection, or
    when a logarithm jumps by more than ``delta_L``. The step doubles after
    four consecutive acceptances and never exceeds the path clearance.

    Returns one bundle per accepted step, the starting bundle first. Passing
    ``start`` continues an earlier trace (its tau must equal the path start).
    """
    if f.degree() < 1:
        raise InputError("root tracking needs deg(f) >= 1")
    tau0 = path.waypoints[0]
    if start is None:
        start = initial_bundle(f, tau0)
    elif abs(start.tau - tau0) > 1e-12 * (1 + abs(tau0)):
        raise InputError("start bundle does not sit at the path's first waypoint")
    tracker = _Tracker(f, residual_tol, delta_L)
    z = np.array(start.roots, dtype=complex)
    logs = np.array(start.logs, dtype=complex)
    bundles = [start]
    max_step = path.clearance
    h = path.clearance / 4
    streak = 0
    steps = 0
    tau = tau0
    for a, b in path.segments():
        seg_len = abs(b - a)
        if seg_len == 0:
            continue
        unit = (b - a) / seg_len
        pos = 0.0
        while pos < seg_len:
            steps += 1
            if steps > max_steps:
                raise StepUnderflowError("step budget exhausted")
            hh = min(h, seg_len - pos)
            last = pos + hh >= seg_len
            tau1 = b if last else a + unit * (pos + hh)
            out = tracker.step(z, logs, tau, tau1)
            if isinstance(out, str):
                h /= 2
                streak = 0
                if h < min_step * (1 + abs(tau)):
                    if out == "residual":
                        raise RootResidualError(f"Newton corrector failed near tau = {tau}")
                    raise StepUnderflowError(f"step size underflow near tau = {tau} ({out})")
                continue
            z, new_logs, offsets = out
            logs = new_logs
            tau = tau1
            pos = seg_len if last else pos + hh
            bundles.append(RootBundle(
                complex(tau),
                tuple(complex(v) for v in z),
                tuple(complex(v) for v in logs),
                tuple(int(k) for k in offsets),
            ))
            streak += 1
            if streak >= 4:
                h = min(2 * h, max_step)
                streak = 0
    return bundles


def monodromy(bundles: Sequence[RootBundle]) -> tuple[int, ...]:
    """Permutation p with end root k sitting at start root p[k] (closed loops)."""
    z0 = np.array(bundles[0].roots)
    z1 = np.array(bundles[-1].roots)
    return tuple(int(np.argmin(np.abs(z0 - w))) for w in z1)


def write_trace(bundles: Sequence[RootBundle], fh: IO[str], header: Optional[dict] = None) -> None:
    """JSON lines: an optional header record, then one bundle per line."""
    if header is not None:
        fh.write(json.dumps({"header": header}, sort_keys=True) + "\n")
    for b in bundles:
        fh.write(json.dumps(b.to_dict()) + "\n")


def read_trace(fh: IO[str]) -> tuple[Optional[dict], list[RootBundle]]:
    header, bundles = None, []
    for line in fh:
        if not line.strip():
            continue
        rec = json.loads(line)
        if "header" in rec:
            header = rec["header"]
        else:
            bundles.append(RootBundle.from_dict(rec))
    return header, bundles


# partial fractions -----------------------------------------------------------

def f_partial_fraction(f: Polynomial, bundle: RootBundle, coincide_tol: float = 1e-12) -> FValue:
    """Evaluate F at t = 1/bundle.tau from the tracked roots and logarithms."""
    d = f.degree()
    if d < 1:
        raise InputError("partial-fraction evaluation needs deg(f) >= 1")
    z = np.array(bundle.roots, dtype=complex)
    L = np.array(bundle.logs, dtype=complex)
    if len(z) != d:
        raise InputError(f"bundle carries {len(z)} roots for a degree-{d} polynomial")
    tau = bundle.tau
    lead = complex(f.leading)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    if d > 1:
        sep = np.abs(diff[~np.eye(d, dtype=bool)]).min()
        if sep < coincide_tol * (1 + np.abs(z).max()):
            raise CoincidentRootsError(f"roots coincide (separation {sep:.3g}); tau is too close to S")
    weights = 1.0 / np.prod(diff, axis=1)
    terms = weights * L
    scale = -tau / lead
    value = scale * terms.sum()

    c = f.to_numpy()
    dc = np.polynomial.polynomial.polyder(c)
    res = np.abs(np.polynomial.polynomial.polyval(z, c) - tau)
    dz = np.abs(np.polynomial.polynomial.polyval(z, dc))
    r = d * (res + EPS * (1 + abs(tau))) / np.where(dz > 0, dz, EPS)
    if d > 1:
        inv_gap = 1.0 / np.abs(diff)
        np.fill_diagonal(inv_gap, 0.0)
        weight_sens = np.abs(terms) * ((inv_gap * (r[:, None] + r[None, :])).sum(axis=1))
    else:
        weight_sens = np.zeros(1)
    log_sens = np.abs(weights) * r / np.abs(z * (1 - z))
    err = abs(scale) * float(np.sum(weight_sens + log_sens) + 8 * d * EPS * np.abs(terms).sum())
    return FValue(1 / tau, complex(value), "partial-fraction", err)


def _start_modulus(f: Polynomial, S: CriticalSet) -> float:
    return 2.0 * max(sup_norm(f).value, S.max_modulus) + 1.0


def continue_to(
    f: Polynomial,
    tau: complex,
    S: Optional[CriticalSet] = None,
    clearance: Optional[float] = None,
) -> list[RootBundle]:
    """Track from a large tau on the same ray (inside the series disc) to ``tau``.

    The start point has modulus above M(f), where f(x) = tau has no solution
    on [0, 1] and the principal logarithms are the right branches.
    """
    S = critical_set(f) if S is None else S
    tau = complex(tau)
    if tau == 0:
        raise DomainError("tau = 0 corresponds to t = infinity")
    m = sup_norm(f).value
    if abs(tau) > m * (1 + 1e-9):
        start = 1.25 * tau
    else:
        start = tau / abs(tau) * max(_start_modulus(f, S), 2 * abs(tau))
    path = plan_path(S, start, tau, clearance)
    return track_roots(f, path)


def evaluate_partial_fraction(
    f: Polynomial,
    t: complex,
    S: Optional[CriticalSet] = None,
    clearance: Optional[float] = None,
) -> FValue:
    """F(t) by root tracking plus partial fractions (t = 0 gives 1)."""
    t = complex(t)
    if t == 0:
        return FValue(t, 1 + 0j, "partial-fraction", 0.0)
    bundles = continue_to(f, 1 / t, S, clearance)
    return f_partial_fraction(f, bundles[-1])


# asymptotics ---------------------------------------------------------------

def probe_values(
    f: Polynomial,
    direction: complex,
    t_magnitudes: Sequence[float],
    clearance: Optional[float] = None,
) -> list[FValue]:
    """Partial-fraction values of F along the ray t = r * direction.

    One path is tracked from a large tau through every tau = 1/t in turn. The
    obstacle set is S without 0: the ray heads to tau = 0 but stops short.
    """
    if f.degree() < 1:
        raise InputError("decay probe needs deg(f) >= 1")
    mags = [float(r) for r in t_magnitudes]
    if not mags or mags[0] <= 0 or any(b <= a for a, b in zip(mags, mags[1:])):
        raise InputError("t magnitudes must be positive and increasing")
    u = complex(direction) / abs(direction)
    S = critical_set(f)
    clearance = clearance if clearance is not None else default_clearance(S)
    targets = [u.conjugate() / r for r in mags]
    start = u.conjugate() * max(_start_modulus(f, S), 2 * abs(targets[0]))
    path = join_paths(S.without(0), [start] + targets, clearance)
    bundles = track_roots(f, path)
    picked = [min(bundles, key=lambda b: abs(b.tau - target)) for target in targets]
    return [f_partial_fraction(f, b) for b in picked]


def decay_probe(
    f: Polynomial,
    direction: complex,
    t_magnitudes: Sequence[float],
    clearance: Optional[float] = None,
) -> list[tuple[float, float, float]]:
    """Rows (|t|, |F(t)|, |F| |t|^(1/d) / max(1, log|t|)) along a ray."""
    d = f.degree()
    rows = []
    for r, fv in zip(t_magnitudes, probe_values(f, direction, t_magnitudes, clearance)):
        r = float(r)
        rows.append((r, abs(fv.value), abs(fv.value) * r ** (1.0 / d) / max(1.0, math.log(r))))
    return rows


def ray_to_zero(
    f: Polynomial,
    tau_min: float,
    direction: complex = 1,
    clearance: Optional[float] = None,
) -> TauPath:
    """Path from a large tau down the ray toward tau = 0, ending at |tau| = tau_min."""
    S = critical_set(f)
    u = complex(direction) / abs(direction)
    clearance = clearance if clearance is not None else default_clearance(S)
    start = u * _start_modulus(f, S)
    return plan_path(S.without(0), start, u * tau_min, clearance)


def multiplicity_slope(
    f: Polynomial,
    z0: complex,
    n_mult: int,
    path: TauPath,
    tail_decades: float = 3.0,
) -> float:
    """Slope of log|z_k - z0| against log|tau| for the n_mult roots tending to z0.

    The tail is every tracked bundle with |tau| <= 10**tail_decades * |tau_end|.
    The expected slope is 1/n_mult.
    """
    if n_mult < 1:
        raise InputError("multiplicity must be >= 1")
    bundles = track_roots(f, path)
    tau_end = abs(bundles[-1].tau)
    tail = [b for b in bundles if abs(b.tau) <= 10**tail_decades * tau_end and b.tau != 0]
    if len(tail) < 5:
        raise FitDegenerateError(f"only {len(tail)} tail samples; need at least 5")
    final = np.array(bundles[-1].roots)
    idx = np.argsort(np.abs(final - z0))[:n_mult]
    x = np.log(np.abs([b.tau for b in tail]))
    slopes = []
    for k in idx:
        y = np.log(np.abs([b.roots[k] - z0 for b in tail]))
        slopes.append(np.polyfit(x, y, 1)[0])
    return float(np.mean(slopes))
