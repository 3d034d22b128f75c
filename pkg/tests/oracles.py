"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def brute_lcs_similarity(a: str, b: str, min_common_len: int = 2) -> Fraction:
    """Greedy repeated extraction by enumerating substrings of ``a`` longest first.

    Same canonical argument order and leftmost tie rule as the library, but
    no dynamic programming: every substring of ``a`` is tried against ``b``
    with ``str.find``.
    """
    if a == b:
        return Fraction(1)
    if (len(b), b) < (len(a), a):
        a, b = b, a
    total = len(a) + len(b)
    common = 0
    while True:
        hit = None
        for k in range(min(len(a), len(b)), min_common_len - 1, -1):
            for i in range(len(a) - k + 1):
                j = b.find(a[i:i + k])
                if j >= 0:
                    hit = (k, i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        k, i, j = hit
        common += k
        a, b = a[:i] + a[i + k:], b[:j] + b[j + k:]
    return Fraction(2 * common, total)


def central_difference(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    g = np.empty_like(x)
    for i in range(x.size):
        up, down = x.copy(), x.copy()
        up[i] += h
        down[i] -= h
        g[i] = (f(up) - f(down)) / (2 * h)
    return g


def exact_ols(x, y) -> tuple[float, float, float]:
    """(beta0, beta1, r) from exact rational sums; only r takes a float sqrt."""
    fx = [Fraction(float(v)) for v in x]
    fy = [Fraction(float(v)) for v in y]
    n = len(fx)
    mx, my = sum(fx) / n, sum(fy) / n
    sxx = sum((a - mx) ** 2 for a in fx)
    syy = sum((b - my) ** 2 for b in fy)
    sxy = sum((a - mx) * (b - my) for a, b in zip(fx, fy))
    beta1 = sxy / sxx
    beta0 = my - beta1 * mx
    r = float(sxy) / math.sqrt(float(sxx) * float(syy))
    return float(beta0), float(beta1), r


def poisson_loglik_direct(y, alpha, psi, beta, omega) -> float:
    """Cell-by-cell sum of y*log(lambda) - lambda."""
    total = 0.0
    for i in range(len(alpha)):
        for j in range(len(psi)):
            eta = alpha[i] + psi[j] + beta[j] * omega[i]
            total += y[i][j] * eta - math.exp(eta)
    return total


def wordscore_by_hand(refs: list[dict[str, int]], scores: list[float], virgin: dict[str, int]):
    """Spreadsheet-style Wordscore with exact fractions: (word scores, raw virgin score)."""
    rel = [{w: Fraction(c, sum(r.values())) for w, c in r.items()} for r in refs]
    words = sorted({w for r in refs for w in r})
    ws = {}
    for w in words:
        col = [f.get(w, Fraction(0)) for f in rel]
        ws[w] = sum(Fraction(s) * c / sum(col) for s, c in zip(map(Fraction, scores), col))
    scored = {w: c for w, c in virgin.items() if w in ws}
    total = sum(scored.values())
    raw = sum(Fraction(c, total) * ws[w] for w, c in scored.items())
    return ws, raw
