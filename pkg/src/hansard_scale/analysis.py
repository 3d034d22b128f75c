"""Validation statistics for estimated positions: OLS, Pearson r and its p-value.

The Student-t tail probability is computed from the regularised incomplete
beta function implemented here (power series for small arguments, Lentz
continued fraction otherwise), so results do not depend on a stats library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, EmptyResult, InsufficientOverlap, TooFewPoints, ZeroVariance

_EPS = 1e-16
_TINY = 1e-300
_MAX_TERMS = 10_000
SERIES_CUTOFF = 0.2


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betainc_series(x: float, a: float, b: float) -> float:
    # B(x; a, b) = x^a * sum_n (1-b)_n x^n / (n! (a+n))
    term, total = 1.0, 1.0 / a
    for n in range(1, _MAX_TERMS):
        term *= (n - b) * x / n
        contrib = term / (a + n)
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    else:
        raise ArithmeticError(f"incomplete beta series did not converge (x={x}, a={a}, b={b})")
    return math.exp(a * math.log(x) - _log_beta(a, b)) * total


def _betainc_cf(x: float, a: float, b: float) -> float:
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c, d = 1.0, 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, _MAX_TERMS):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})")
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b))
    return front * h / a


def betainc(x: float, a: float, b: float) -> float:
    """Regularised incomplete beta function I_x(a, b) for a, b > 0.

    Small ``x`` (below ``SERIES_CUTOFF``) uses the power series when it does
    not alternate badly, i.e. ``b <= 1`` or ``(b - 1) x < 0.5``. Otherwise
    the continued fraction is evaluated directly when
    ``x < (a + 1) / (a + b + 2)`` and through ``1 - I_{1-x}(b, a)`` beyond.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    if x < SERIES_CUTOFF and (b <= 1.0 or (b - 1.0) * x < 0.5):
        return _betainc_series(x, a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return _betainc_cf(x, a, b)
    return 1.0 - _betainc_cf(1.0 - x, b, a)


def student_t_sf2(t: float, df: float) -> float:
    """Two-sided tail probability P(|T| >= |t|) for ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    t2 = t * t
    # df / (df + t^2) rounds towards 1 for small t; use the complementary argument there
    inner = betainc(t2 / (df + t2), 0.5, df / 2.0)
    if inner < 0.5:
        return 1.0 - inner
    return betainc(df / (df + t2), df / 2.0, 0.5)


def student_t_cdf(t: float, df: float) -> float:
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    half = 0.5 * student_t_sf2(t, df)
    if half > 0.25:
        centre = 0.5 * betainc(t * t / (df + t * t), 0.5, df / 2.0)
        return 0.5 + centre if t > 0 else 0.5 - centre
    return 1.0 - half if t > 0 else half


def correlation_p_value(r: float, n: int) -> float:
    """Two-sided p for Pearson ``r`` from ``n`` pairs via t = r sqrt(n-2) / sqrt(1-r^2).

    Uses df / (df + t^2) = 1 - r^2 directly, which stays finite as |r| -> 1.
    """
    if n < 3:
        raise TooFewPoints(f"need at least 3 pairs, got {n}")
    if not -1.0 <= r <= 1.0:
        raise ValueError(f"correlation out of range: {r}")
    r2 = r * r
    if r2 >= 1.0:
        return 0.0
    # take whichever tail is small so neither branch subtracts from a value near 1
    inner = betainc(r2, 0.5, (n - 2) / 2.0)
    if inner < 0.5:
        return 1.0 - inner
    return betainc(1.0 - r2, (n - 2) / 2.0, 0.5)


@dataclass(frozen=True)
class PairedSeries:
    labels: tuple[str, ...]
    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if not len(self.labels) == len(self.x) == len(self.y):
            raise DataError("labels, x and y must have equal lengths")
        if len(set(self.labels)) != len(self.labels):
            raise DataError("labels must be unique")
        for name, values in (("x", self.x), ("y", self.y)):
            bad = [lab for lab, v in zip(self.labels, values) if not math.isfinite(v)]
            if bad:
                raise DataError(f"non-finite {name} for {bad}")

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class RegressionFit:
    beta0: float
    beta1: float
    r: float
    p_value: float
    n: int
    residuals: tuple[float, ...]
    series: PairedSeries
    unjoined: tuple[str, ...] = field(default=())

    @property
    def fitted(self) -> tuple[float, ...]:
        return tuple(self.beta0 + self.beta1 * x for x in self.series.x)

    def report_tsv(self) -> str:
        rows = [("n", self.n), ("beta0", self.beta0), ("beta1", self.beta1), ("r", self.r), ("p_value", self.p_value)]
        return "statistic\tvalue\n" + "".join(f"{k}\t{v:.12g}\n" for k, v in rows)

    def scatter_tsv(self) -> str:
        s = self.series
        lines = ["label\tx\ty\tfitted"]
        lines += [f"{lab}\t{x:.12g}\t{y:.12g}\t{f:.12g}" for lab, x, y, f in zip(s.labels, s.x, s.y, self.fitted)]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        text = (
            f"OLS on n={self.n}: y = {self.beta0:.4f} + {self.beta1:.4f} x\n"
            f"Pearson r = {self.r:.4f}, two-sided p = {self.p_value:.4g}\n"
        )
        if self.unjoined:
            text += f"unjoined labels: {', '.join(self.unjoined)}\n"
        return text


def ols(s: PairedSeries) -> RegressionFit:
    """Simple regression y = beta0 + beta1 x with Pearson r and its two-sided p."""
    n = len(s)
    if n < 3:
        raise TooFewPoints(f"need at least 3 points, got {n}")
    x = np.array(s.x)
    y = np.array(s.y)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy, sxy = float(dx @ dx), float(dy @ dy), float(dx @ dy)
    if sxx == 0:
        raise ZeroVariance("x has zero variance")
    beta1 = sxy / sxx
    beta0 = float(y.mean() - beta1 * x.mean())
    residuals = tuple(float(v) for v in dy - beta1 * dx)
    if syy == 0:
        r, p = 0.0, 1.0
    else:
        r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
        p = correlation_p_value(r, n)
    return RegressionFit(beta0, beta1, r, p, n, residuals, s)


def correlate_with_series(positions: Mapping[str, float], series: Mapping[str, float],
                          join: Mapping[str, str] | None = None) -> RegressionFit:
    """Inner-join positions to an outcome series by label, then run :func:`ols`.

    ``join`` maps position labels to series labels (identity when omitted).
    Labels left unpaired on either side are reported in ``unjoined``.
    """
    join = join or {}
    labels, xs, ys, used = [], [], [], set()
    unjoined = []
    for label, x in positions.items():
        key = join.get(label, label)
        if key in series:
            labels.append(label)
            xs.append(x)
            ys.append(series[key])
            used.add(key)
        else:
            unjoined.append(label)
    unjoined += [k for k in series if k not in used]
    if len(labels) < 3:
        raise InsufficientOverlap(f"only {len(labels)} labels joined; need at least 3")
    fit = ols(PairedSeries(labels, xs, ys))
    return RegressionFit(fit.beta0, fit.beta1, fit.r, fit.p_value, fit.n, fit.residuals, fit.series, tuple(unjoined))


def subset_filter(s: PairedSeries, keep: Iterable[str]) -> PairedSeries:
    """Rows whose label is in ``keep``, original order preserved."""
    keep = set(keep)
    unknown = keep - set(s.labels)
    if unknown:
        raise DataError(f"labels not in series: {sorted(unknown)}")
    rows = [(lab, x, y) for lab, x, y in zip(s.labels, s.x, s.y) if lab in keep]
    if not rows:
        raise EmptyResult("filter keeps no rows")
    labels, xs, ys = zip(*rows)
    return PairedSeries(labels, xs, ys)


def read_series(path: str | Path) -> dict[str, float]:
    """Two-column TSV ``label<TAB>value`` with a header row."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"series file not found: {path}")
    out = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        try:
            out[parts[0]] = float(parts[1])
        except (IndexError, ValueError):
            raise DataError(f"{path}:{lineno}: bad row {line!r}") from None
    return out


def write_series(values: Mapping[str, float] | Sequence[tuple[str, float]], path: str | Path,
                 header: tuple[str, str] = ("label", "value")) -> None:
    items = values.items() if isinstance(values, Mapping) else values
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for label, v in items:
            fh.write(f"{label}\t{v:.12g}\n")
