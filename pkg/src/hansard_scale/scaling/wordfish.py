"""Wordfish: Poisson scaling of word counts.

Counts are modelled as ``y_ij ~ Poisson(lambda_ij)`` with

    log lambda_ij = alpha_i + psi_j + beta_j * omega_i

where ``alpha`` absorbs document length, ``psi`` word frequency, ``beta``
is the word's discrimination weight and ``omega`` the document position.
Estimation alternates between the document block (alpha_i, omega_i) and the
word block (psi_j, beta_j), each solved by damped Newton steps; after every
sweep positions are standardised to mean 0 and standard deviation 1
(population sd), the anchor document keeps ``alpha = 0`` and the sign is
oriented by a pair of reference documents.

The log-likelihood omits the constant ``-sum(log y_ij!)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..dtm import CountMatrix
from ..errors import DataError, DimensionMismatch, NoConvergence, NoConvergenceWarning, NotIdentifiable

_RIDGE = 1e-10
_MAX_HALVINGS = 40


@dataclass
class WordfishParams:
    alpha: np.ndarray
    psi: np.ndarray
    beta: np.ndarray
    omega: np.ndarray

    def copy(self) -> "WordfishParams":
        return WordfishParams(self.alpha.copy(), self.psi.copy(), self.beta.copy(), self.omega.copy())


@dataclass
class WordfishFit(WordfishParams):
    docs: list[str] = field(default_factory=list)
    terms: list[str] = field(default_factory=list)
    log_likelihood: float = float("nan")
    iterations: int = 0
    converged: bool = False
    anchor: int = 0
    orientation: tuple[str, str] = ("", "")
    loglik_trace: list[float] = field(default_factory=list)

    def positions(self) -> dict[str, float]:
        return dict(zip(self.docs, map(float, self.omega)))

    def documents_tsv(self) -> str:
        rows = ["doc_label\tomega\talpha"]
        rows += [f"{d}\t{o:.12g}\t{a:.12g}" for d, o, a in zip(self.docs, self.omega, self.alpha)]
        return "\n".join(rows) + "\n"

    def terms_tsv(self) -> str:
        rows = ["term\tpsi\tbeta"]
        rows += [f"{t}\t{p:.12g}\t{b:.12g}" for t, p, b in zip(self.terms, self.psi, self.beta)]
        return "\n".join(rows) + "\n"


def _counts(m) -> np.ndarray:
    y = m.counts if isinstance(m, CountMatrix) else m
    return np.asarray(y, dtype=float)


def _check_dims(y: np.ndarray, p: WordfishParams) -> None:
    n, k = y.shape
    for name, arr, size in (("alpha", p.alpha, n), ("omega", p.omega, n), ("psi", p.psi, k), ("beta", p.beta, k)):
        if np.shape(arr) != (size,):
            raise DimensionMismatch(f"{name} has shape {np.shape(arr)}, expected ({size},) for a {n}x{k} matrix")


def _eta(p: WordfishParams) -> np.ndarray:
    return p.alpha[:, None] + p.psi[None, :] + np.outer(p.omega, p.beta)


def wordfish_loglik(m, params: WordfishParams) -> float:
    """Poisson log-likelihood ``sum(y * log(lambda) - lambda)`` without ``log y!``."""
    y = _counts(m)
    _check_dims(y, params)
    eta = _eta(params)
    with np.errstate(over="ignore"):
        return float(np.sum(y * eta - np.exp(eta)))


def wordfish_gradient(m, params: WordfishParams) -> WordfishParams:
    """Analytic gradient of :func:`wordfish_loglik` in each parameter block."""
    y = _counts(m)
    _check_dims(y, params)
    r = y - np.exp(_eta(params))
    return WordfishParams(
        alpha=r.sum(axis=1),
        psi=r.sum(axis=0),
        beta=r.T @ params.omega,
        omega=r @ params.beta,
    )


def _block_newton(y, offset, x, a, b, fix_a, max_inner=50, tol=1e-10):
    """Maximise, row by row, sum_k y_k*eta_k - exp(eta_k) with eta = offset + a + b*x.

    ``y`` and ``offset`` are (rows, k); ``x`` is the (k,) covariate shared by
    all rows; ``a`` and ``b`` are the per-row intercept and slope. Rows with
    ``fix_a`` set keep their intercept. Every accepted step is checked for
    ascent and halved until it improves the row's objective.
    """
    a, b = a.copy(), b.copy()
    free_a = ~fix_a

    def objective(a_, b_):
        eta = offset + a_[:, None] + b_[:, None] * x[None, :]
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.sum(y * eta - np.exp(eta), axis=1)
        return np.where(np.isfinite(val), val, -np.inf)

    current = objective(a, b)
    for _ in range(max_inner):
        eta = offset + a[:, None] + b[:, None] * x[None, :]
        lam = np.exp(eta)
        r = y - lam
        g_a = r.sum(axis=1)
        g_b = r @ x
        h_aa = lam.sum(axis=1)
        h_ab = lam @ x
        h_bb = lam @ (x * x)
        ridge = _RIDGE * (h_aa + h_bb) + 1e-300
        h_aa, h_bb = h_aa + ridge, h_bb + ridge
        det = h_aa * h_bb - h_ab * h_ab
        da = np.where(free_a, (h_bb * g_a - h_ab * g_b) / det, 0.0)
        db = np.where(free_a, (h_aa * g_b - h_ab * g_a) / det, g_b / h_bb)
        step = np.ones_like(a)
        trial = objective(a + da, b + db)
        pending = trial < current
        for _ in range(_MAX_HALVINGS):
            if not pending.any():
                break
            step = np.where(pending, step * 0.5, step)
            trial = np.where(pending, objective(a + step * da, b + step * db), trial)
            pending = trial < current
        accept = ~pending
        a = np.where(accept, a + step * da, a)
        b = np.where(accept, b + step * db, b)
        current = np.where(accept, trial, current)
        if np.max(np.abs(step * np.where(accept, np.maximum(np.abs(da), np.abs(db)), 0.0))) < tol:
            break
    return a, b


def _identify(p: WordfishParams, left: int, right: int) -> None:
    """Standardise omega in place, compensating beta and psi so lambda is unchanged."""
    mean = p.omega.mean()
    sd = p.omega.std()
    if not np.isfinite(sd) or sd <= 0:
        raise NotIdentifiable("document positions collapsed to a single point")
    p.psi = p.psi + p.beta * mean
    p.beta = p.beta * sd
    p.omega = (p.omega - mean) / sd
    if p.omega[left] > p.omega[right]:
        p.omega = -p.omega
        p.beta = -p.beta


def starting_values(y: np.ndarray, anchor: int = 0) -> WordfishParams:
    """Closed-form starting point.

    psi from log mean word counts, alpha from log length ratios to the
    anchor document, omega from the leading left singular vector of the
    doubly centred ``log(y + 1)``; beta starts at zero.
    """
    rowsum = y.sum(axis=1)
    psi = np.log(y.mean(axis=0) + 0.001)
    alpha = np.log(rowsum / rowsum[anchor])
    ly = np.log(y + 1.0)
    centred = ly - ly.mean(axis=1, keepdims=True) - ly.mean(axis=0, keepdims=True) + ly.mean()
    u, s, _ = np.linalg.svd(centred, full_matrices=False)
    if s[0] <= 1e-12 * max(1.0, np.abs(ly).max()):
        raise NotIdentifiable("word usage does not vary across documents")
    omega = u[:, 0].copy()
    return WordfishParams(alpha, psi, np.zeros(y.shape[1]), omega)


def _check_identifiable(y: np.ndarray) -> None:
    rel = y / y.sum(axis=1, keepdims=True)
    if np.allclose(rel, rel[0], rtol=0, atol=1e-12):
        raise NotIdentifiable("all documents have identical relative word frequencies")


def wordfish_fit(
    m: CountMatrix,
    anchors: tuple[str, str] | tuple[int, int],
    tol: float = 1e-6,
    max_iter: int = 500,
    seed: int | None = None,
    alpha_anchor: int = 0,
    jitter: float = 0.1,
    strict: bool = False,
) -> WordfishFit:
    """Fit Wordfish by alternating block maximisation.

    Parameters
    ----------
    m : CountMatrix
        Documents x terms counts; at least two documents and terms, no empty rows.
    anchors : (left, right)
        Document labels (or row indices). Orientation puts ``left`` below ``right``.
    tol : float
        Stop when the relative change in log-likelihood between sweeps is below this.
    max_iter : int
        Maximum number of sweeps.
    seed : int, optional
        When given, starting positions get Gaussian noise of scale ``jitter``
        from this seed. Without a seed the start is the closed-form one.
    alpha_anchor : int
        Row whose ``alpha`` is pinned to zero.
    strict : bool
        Raise :class:`NoConvergence` instead of warning when ``max_iter`` is hit.
    """
    y = _counts(m)
    docs = list(m.docs) if isinstance(m, CountMatrix) else [str(i) for i in range(y.shape[0])]
    terms = list(m.terms) if isinstance(m, CountMatrix) else [str(j) for j in range(y.shape[1])]
    n, k = y.shape
    if n < 2 or k < 2:
        raise DataError(f"need at least 2 documents and 2 terms, got {n}x{k}")
    if np.any(y < 0):
        raise DataError("negative counts")
    empty = np.flatnonzero(y.sum(axis=1) == 0)
    if empty.size:
        raise DataError(f"documents with no counted words: {[docs[i] for i in empty]}")
    left, right = (docs.index(a) if isinstance(a, str) else int(a) for a in anchors)
    if left == right:
        raise DataError("orientation anchors must be two different documents")
    _check_identifiable(y)

    p = starting_values(y, alpha_anchor)
    if seed is not None:
        p.omega = p.omega + np.random.default_rng(seed).normal(0.0, jitter * p.omega.std(), n)
    _identify(p, left, right)

    fix_alpha = np.zeros(n, dtype=bool)
    fix_alpha[alpha_anchor] = True
    fix_none = np.zeros(k, dtype=bool)

    trace = [wordfish_loglik(y, p)]
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        # documents: rows of y, covariate beta, offset psi
        p.alpha, p.omega = _block_newton(y, np.broadcast_to(p.psi, y.shape), p.beta,
                                         p.alpha, p.omega, fix_alpha)
        # words: rows of y.T, covariate omega, offset alpha
        p.psi, p.beta = _block_newton(y.T, np.broadcast_to(p.alpha, (k, n)), p.omega,
                                      p.psi, p.beta, fix_none)
        _identify(p, left, right)
        ll = wordfish_loglik(y, p)
        trace.append(ll)
        if abs(ll - trace[-2]) / max(abs(ll), 1e-300) < tol:
            converged = True
            break

    if np.max(np.abs(p.beta)) < 1e-8:
        raise NotIdentifiable("all word weights are numerically zero")

    fit = WordfishFit(
        alpha=p.alpha, psi=p.psi, beta=p.beta, omega=p.omega, docs=docs, terms=terms,
        log_likelihood=trace[-1], iterations=sweeps, converged=converged, anchor=alpha_anchor,
        orientation=(docs[left], docs[right]), loglik_trace=trace,
    )
    if not converged:
        msg = f"Wordfish did not converge in {max_iter} sweeps (tol={tol})"
        if strict:
            raise NoConvergence(msg, fit)
        warnings.warn(msg, NoConvergenceWarning, stacklevel=2)
    return fit
