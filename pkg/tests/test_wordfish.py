import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hansard_scale.dtm import CountMatrix
from hansard_scale.errors import DataError, DimensionMismatch, NoConvergence, NoConvergenceWarning, NotIdentifiable
from hansard_scale.fixtures import SyntheticSpec, generate_wordfish_corpus
from hansard_scale.scaling import (
    WordfishParams,
    starting_values,
    wordfish_fit,
    wordfish_gradient,
    wordfish_loglik,
)
from oracles import central_difference, poisson_loglik_direct


def random_params(rng, n, k, scale=0.5):
    return WordfishParams(*(rng.normal(0, scale, size) for size in (n, k, k, n)))


def flat(p):
    return np.concatenate([p.alpha, p.psi, p.beta, p.omega])


def unflat(x, n, k):
    return WordfishParams(x[:n], x[n:n + k], x[n + k:n + 2 * k], x[n + 2 * k:])


@pytest.fixture(scope="module")
def synthetic():
    return generate_wordfish_corpus(SyntheticSpec())


@pytest.fixture(scope="module")
def synthetic_fit(synthetic):
    m, _ = synthetic
    return wordfish_fit(m, ("doc000", "doc019"))


# -- likelihood -------------------------------------------------------------


def test_zero_matrix_closed_form():
    y = np.zeros((3, 4))
    p = WordfishParams(np.zeros(3), np.zeros(4), np.zeros(4), np.zeros(3))
    assert wordfish_loglik(y, p) == -12.0


def test_independence_model_direct_sum():
    y = np.array([[3, 0, 2, 5], [1, 1, 0, 2], [4, 2, 2, 0]], dtype=float)
    r, c, total = y.sum(1), y.sum(0), y.sum()
    alpha = np.log(r / r[0])
    psi = np.log(c * r[0] / total)
    p = WordfishParams(alpha, psi, np.zeros(4), np.zeros(3))
    expected = sum(y[i, j] * np.log(r[i] * c[j] / total) - r[i] * c[j] / total
                   for i in range(3) for j in range(4))
    assert wordfish_loglik(y, p) == pytest.approx(expected, rel=1e-12)
    assert wordfish_loglik(y, p) == pytest.approx(poisson_loglik_direct(y, alpha, psi, p.beta, p.omega), rel=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        wordfish_loglik(np.ones((2, 3)), WordfishParams(np.zeros(2), np.zeros(2), np.zeros(3), np.zeros(2)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    y = rng.poisson(2.0, (4, 6)).astype(float)
    p = random_params(rng, 4, 6)
    analytic = flat(wordfish_gradient(y, p))
    numeric = central_difference(lambda x: wordfish_loglik(y, unflat(x, 4, 6)), flat(p))
    assert np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic) < 1e-5


def test_shift_invariance_of_lambda():
    rng = np.random.default_rng(0)
    y = rng.poisson(3.0, (5, 8))
    p = random_params(rng, 5, 8)
    shifted = WordfishParams(p.alpha, p.psi - 0.7 * p.beta, p.beta, p.omega + 0.7)
    assert wordfish_loglik(y, shifted) == pytest.approx(wordfish_loglik(y, p), rel=1e-12)


# -- fitting ----------------------------------------------------------------


def test_recovery_on_synthetic(synthetic, synthetic_fit):
    _, truth = synthetic
    r = np.corrcoef(synthetic_fit.omega, truth.omega)[0, 1]
    assert r >= 0.95
    assert synthetic_fit.converged


def test_identification(synthetic_fit):
    f = synthetic_fit
    assert abs(f.omega.mean()) < 1e-8
    assert abs(f.omega.std() - 1) < 1e-8
    assert f.alpha[f.anchor] == 0.0
    assert f.omega[0] < f.omega[-1]


def test_orientation_follows_anchors(synthetic):
    m, _ = synthetic
    a = wordfish_fit(m, ("doc000", "doc019"))
    b = wordfish_fit(m, ("doc019", "doc000"))
    assert np.allclose(a.omega, -b.omega, atol=1e-8)
    assert np.allclose(a.beta, -b.beta, atol=1e-8)


def test_loglik_non_decreasing(synthetic_fit):
    trace = np.array(synthetic_fit.loglik_trace)
    assert (np.diff(trace) >= -1e-9 * np.abs(trace[1:])).all()


def test_seed_independence(synthetic):
    m, _ = synthetic
    fits = [wordfish_fit(m, (0, 19), seed=s, tol=1e-10) for s in (1, 2, 3)]
    for f in fits[1:]:
        assert np.max(np.abs(f.omega - fits[0].omega)) < 1e-4


def test_deterministic_given_seed(synthetic):
    m, _ = synthetic
    a = wordfish_fit(m, (0, 19), seed=5)
    b = wordfish_fit(m, (0, 19), seed=5)
    assert a.documents_tsv() == b.documents_tsv() and a.terms_tsv() == b.terms_tsv()


def test_runtime_single_threaded(synthetic):
    m, _ = synthetic
    t0 = time.perf_counter()
    wordfish_fit(m, (0, 19))
    assert time.perf_counter() - t0 < 10


def test_identical_documents_not_identifiable():
    m = CountMatrix([f"d{i}" for i in range(4)], list("abcde"), np.tile([3, 1, 4, 1, 5], (4, 1)))
    with pytest.raises(NotIdentifiable):
        wordfish_fit(m, ("d0", "d1"))


def test_proportional_documents_not_identifiable():
    row = np.array([3, 1, 4, 1, 5])
    m = CountMatrix(["a", "b", "c"], list("vwxyz"), np.stack([row, 2 * row, 3 * row]))
    with pytest.raises(NotIdentifiable):
        wordfish_fit(m, ("a", "c"))


@pytest.mark.parametrize("counts,anchors", [
    (np.array([[1, 2], [0, 0], [3, 1]]), (0, 2)),
    (np.array([[1, 2], [2, 1]]), (0, 0)),
    (np.array([[1, 2, 3]]), (0, 0)),
])
def test_bad_inputs(counts, anchors):
    with pytest.raises(DataError):
        wordfish_fit(counts, anchors)


def test_no_convergence_flagged(synthetic):
    m, _ = synthetic
    with pytest.warns(NoConvergenceWarning):
        fit = wordfish_fit(m, (0, 19), tol=1e-15, max_iter=2)
    assert not fit.converged and fit.iterations == 2
    with pytest.raises(NoConvergence) as err:
        wordfish_fit(m, (0, 19), tol=1e-15, max_iter=2, strict=True)
    assert err.value.fit is not None and not err.value.fit.converged


def test_starting_values_closed_form(synthetic):
    m, _ = synthetic
    y = m.counts.astype(float)
    p = starting_values(y)
    assert np.allclose(p.psi, np.log(y.mean(0) + 0.001))
    assert p.alpha[0] == 0.0 and not p.beta.any()


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_length_absorbed_by_alpha(seed):
    m, _ = generate_wordfish_corpus(SyntheticSpec(n_docs=10, n_terms=50, psi_mean=7.0, seed=seed))
    base = wordfish_fit(m, (0, 9), tol=1e-12)
    counts = m.counts.copy()
    counts[3] *= 2
    doubled = wordfish_fit(CountMatrix(m.docs, m.terms, counts), (0, 9), tol=1e-12)
    assert np.max(np.abs(doubled.omega - base.omega)) < 1e-3
    assert doubled.alpha[3] - base.alpha[3] > 0.5


def test_output_tables(synthetic_fit):
    docs = synthetic_fit.documents_tsv().splitlines()
    terms = synthetic_fit.terms_tsv().splitlines()
    assert docs[0] == "doc_label\tomega\talpha" and len(docs) == 21
    assert terms[0] == "term\tpsi\tbeta" and len(terms) == 101


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_identification_holds_for_random_corpora(seed):
    m, _ = generate_wordfish_corpus(SyntheticSpec(n_docs=8, n_terms=30, seed=seed))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoConvergenceWarning)
        f = wordfish_fit(m, (0, 7))
    assert abs(f.omega.mean()) < 1e-8 and abs(f.omega.std() - 1) < 1e-8
    assert f.omega[0] < f.omega[7]
