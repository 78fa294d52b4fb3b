"""Seeded polynomial corpora and conjecture sweeps.

A sweep runs, for each polynomial, moments -> growth estimate -> singular
set -> upper-bound check -> conjecture check, and keeps going when one
polynomial fails: the failure becomes an error-tagged record.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from .errors import PolyMomentsError
from .growth import DEFAULT_TOL, SLOPE, GrowthEstimate, bound_check, conjecture_check, estimate_growth
from .moments import DEFAULT_BIT_CAP, first_nonzero_index, moment_sequence
from .polynomial import ComplexRational, Polynomial, parse_poly
from .spectrum import critical_set


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    degree_range: tuple[int, int] = (1, 5)
    numerator_bound: int = 5
    denominator_bound: int = 4
    allow_complex: bool = False
    count: int = 10

    def pool(self) -> list[Fraction]:
        """Distinct reduced fractions p/q, |p| <= numerator_bound, 1 <= q <= denominator_bound."""
        vals = {
            Fraction(p, q)
            for p in range(-self.numerator_bound, self.numerator_bound + 1)
            for q in range(1, self.denominator_bound + 1)
        }
        return sorted(vals)


def generate_corpus(cfg: GeneratorConfig) -> list[Polynomial]:
    """``cfg.count`` non-zero polynomials; identical configs give identical corpora."""
    lo, hi = cfg.degree_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad degree range {cfg.degree_range}")
    pool = cfg.pool()
    if len(pool) < 2:
        raise ValueError("coefficient pool has no non-zero element")
    rng = np.random.default_rng(cfg.seed)

    def draw() -> ComplexRational:
        re = pool[int(rng.integers(len(pool)))]
        im = pool[int(rng.integers(len(pool)))] if cfg.allow_complex else 0
        return ComplexRational(re, im)

    corpus = []
    for _ in range(cfg.count):
        deg = int(rng.integers(lo, hi + 1))
        coeffs = [draw() for _ in range(deg)]
        lead = draw()
        while not lead:
            lead = draw()
        corpus.append(Polynomial(coeffs + [lead]))
    return corpus


@dataclass
class ConjectureRecord:
    poly_text: str
    degree: int
    seed: Optional[int]
    n_max: int
    estimate: Optional[GrowthEstimate] = None
    max_modulus_S: Optional[float] = None
    bound_holds: Optional[bool] = None
    bound_slack: Optional[float] = None
    conjecture_holds: Optional[bool] = None
    conjecture_gap: Optional[float] = None
    first_nonzero_after: Optional[int] = None
    error: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "poly_text": self.poly_text,
            "degree": self.degree,
            "seed": self.seed,
            "n_max": self.n_max,
            "estimate": self.estimate.to_dict() if self.estimate else None,
            "max_modulus_S": self.max_modulus_S,
            "bound_holds": self.bound_holds,
            "bound_slack": self.bound_slack,
            "conjecture_holds": self.conjecture_holds,
            "conjecture_gap": self.conjecture_gap,
            "first_nonzero_after": self.first_nonzero_after,
            "error": self.error,
        }


def analyze(
    f: Polynomial,
    n_max: int,
    *,
    seed: Optional[int] = None,
    method: str = SLOPE,
    window: Optional[tuple[int, int]] = None,
    tol: float = DEFAULT_TOL,
    bit_cap: Optional[int] = DEFAULT_BIT_CAP,
) -> ConjectureRecord:
    rec = ConjectureRecord(f.to_text(), f.degree(), seed, n_max)
    try:
        seq = moment_sequence(f, n_max, bit_cap)
        rec.first_nonzero_after = first_nonzero_index(seq, 1)
        S = critical_set(f)
        rec.max_modulus_S = S.max_modulus
        rec.estimate = estimate_growth(seq, method, window)
        rec.bound_holds, rec.bound_slack = bound_check(f, rec.estimate, S, tol)
        rec.conjecture_holds, rec.conjecture_gap = conjecture_check(f, rec.estimate, S, tol)
    except (PolyMomentsError, ArithmeticError, np.linalg.LinAlgError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _analyze_text(args) -> ConjectureRecord:
    text, n_max, kwargs = args
    return analyze(parse_poly(text), n_max, **kwargs)


def run_sweep(
    corpus: GeneratorConfig | Iterable[Polynomial],
    n_max: int = 200,
    *,
    method: str = SLOPE,
    window: Optional[tuple[int, int]] = None,
    tol: float = DEFAULT_TOL,
    bit_cap: Optional[int] = DEFAULT_BIT_CAP,
    jobs: int = 1,
) -> list[ConjectureRecord]:
    """One record per polynomial, in corpus order whatever ``jobs`` is."""
    if n_max < 40:
        raise ValueError("sweeps need n_max >= 40")
    seed = None
    if isinstance(corpus, GeneratorConfig):
        seed = corpus.seed
        corpus = generate_corpus(corpus)
    kwargs = dict(seed=seed, method=method, window=window, tol=tol, bit_cap=bit_cap)
    polys = list(corpus)
    if jobs <= 1 or len(polys) < 2:
        return [analyze(f, n_max, **kwargs) for f in polys]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_analyze_text, [(f.to_text(), n_max, kwargs) for f in polys]))


# reports -------------------------------------------------------------------

CSV_COLUMNS = [
    "index", "poly_text", "degree", "estimate", "method", "max_modulus_S",
    "bound_holds", "conjecture_holds", "conjecture_gap", "first_nonzero_after", "error",
]


def write_report(records: Sequence[ConjectureRecord], fh: IO[str], header: Optional[dict] = None) -> None:
    """JSON lines: a header record (with a timestamp) then one record per polynomial."""
    head = dict(header or {})
    head.setdefault("timestamp", datetime.now(timezone.utc).isoformat())
    head["records"] = len(records)
    fh.write(json.dumps({"header": head}, sort_keys=True) + "\n")
    for rec in records:
        fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")


def read_report(fh: IO[str]) -> tuple[dict, list[dict]]:
    header, rows = {}, []
    for line in fh:
        if not line.strip():
            continue
        obj = json.loads(line)
        if "header" in obj:
            header = obj["header"]
        else:
            rows.append(obj)
    return header, rows


def summary_csv(records: Sequence[ConjectureRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for k, r in enumerate(records):
        w.writerow([
            k, r.poly_text, r.degree,
            "" if r.estimate is None else repr(r.estimate.estimate),
            "" if r.estimate is None else r.estimate.method,
            "" if r.max_modulus_S is None else repr(r.max_modulus_S),
            r.bound_holds, r.conjecture_holds,
            "" if r.conjecture_gap is None else repr(r.conjecture_gap),
            r.first_nonzero_after, r.error or "",
        ])
    return buf.getvalue()
