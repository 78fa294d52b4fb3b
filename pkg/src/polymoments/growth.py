"""Estimating limsup |M_n|^(1/n) from finitely many exact moments.

All estimators work on log|M_n| computed from the exact values, so moments far
outside double range are fine. Moments that vanish exactly are skipped: they
carry no information about the limsup.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, InsufficientDataError
from .moments import MomentSequence, moment_sequence
from .polynomial import Polynomial
from .spectrum import CriticalSet, sup_norm

SLOPE = "slope-fit"
ROOTMAX = "windowed-root-max"
RATIO = "ratio-subsequence"
METHOD_ALIASES = {"slope": SLOPE, "rootmax": ROOTMAX, "ratio": RATIO, SLOPE: SLOPE, ROOTMAX: ROOTMAX, RATIO: RATIO}
MIN_NONZERO = {SLOPE: 10, ROOTMAX: 1, RATIO: 2}
DEFAULT_TOL = 0.05


@dataclass(frozen=True)
class GrowthEstimate:
    estimate: float
    method: str
    window: tuple[int, int]
    nonzero_count: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def default_window(n_max: int) -> tuple[int, int]:
    return (n_max // 4, n_max)


def estimate_growth(
    seq: MomentSequence,
    method: str = SLOPE,
    window: Optional[tuple[int, int]] = None,
) -> GrowthEstimate:
    """Estimate limsup |M_n|^(1/n) over ``window`` (inclusive).

    slope-fit
        exp of the least-squares slope of log|M_n| against n.
    windowed-root-max
        max of |M_n|^(1/n) over the window.
    ratio-subsequence
        median of |M_{n+k}/M_n|^(1/k) over consecutive non-zero moments.
    """
    try:
        method = METHOD_ALIASES[method]
    except KeyError:
        raise InputError(f"unknown growth method {method!r}") from None
    lo, hi = window if window is not None else default_window(seq.n_max)
    if not 0 <= lo <= hi <= seq.n_max:
        raise InputError(f"window {(lo, hi)} outside 0..{seq.n_max}")
    pts = [(n, seq.log_abs(n)) for n in range(lo, hi + 1) if seq[n]]
    if method == ROOTMAX:
        pts_used = [(n, la) for n, la in pts if n >= 1]
    else:
        pts_used = pts
    if len(pts_used) < MIN_NONZERO[method]:
        raise InsufficientDataError(
            f"{method} needs {MIN_NONZERO[method]} non-zero moments in {(lo, hi)}, found {len(pts_used)}"
        )
    n = np.array([p[0] for p in pts_used], dtype=float)
    la = np.array([p[1] for p in pts_used])

    if method == SLOPE:
        slope, icept = np.polyfit(n, la, 1)
        resid = la - (slope * n + icept)
        est = math.exp(slope)
        diag = {"residual": float(np.sqrt(np.mean(resid**2))), "intercept": float(icept)}
    elif method == ROOTMAX:
        roots = la / n
        k = int(np.argmax(roots))
        est = math.exp(roots[k])
        diag = {"argmax_n": int(n[k])}
    else:
        rates = np.diff(la) / np.diff(n)
        est = math.exp(float(np.median(rates)))
        diag = {"pairs": int(len(rates)), "spread": float(np.ptp(rates)) if len(rates) else 0.0}
    return GrowthEstimate(float(est), method, (lo, hi), len(pts), diag)


def real_case_check(
    f: Polynomial,
    seq: Optional[MomentSequence] = None,
    window: tuple[int, int] = (50, 200),
) -> tuple[GrowthEstimate, float, float]:
    """(slope-fit estimate, M(f), |estimate - M(f)|) for real-coefficient f.

    For real f the limsup equals the sup norm, so the gap measures the
    estimator's finite-n bias.
    """
    if not f.is_real():
        raise InputError("real_case_check needs real coefficients")
    if seq is None:
        seq = moment_sequence(f, window[1])
    est = estimate_growth(seq, SLOPE, window)
    m = sup_norm(f).value
    return est, m, abs(est.estimate - m)


def bound_check(f: Polynomial, estimate: GrowthEstimate, S: CriticalSet, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """limsup <= max|S|, to relative tolerance ``tol``; returns (holds, slack)."""
    holds = estimate.estimate <= S.max_modulus * (1 + tol)
    return holds, S.max_modulus - estimate.estimate


def conjecture_check(f: Polynomial, estimate: GrowthEstimate, S: CriticalSet, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Does the estimate match max|S| within ``tol`` (relative)? Gap is estimate - max|S|."""
    gap = estimate.estimate - S.max_modulus
    return abs(gap) <= tol * max(S.max_modulus, 1e-6), gap
