import itertools

import numpy as np
import pytest

from conftest import alg_for
from hamkac.l0rep import GENERATORS, build_l0, check_l0, l0_basis


def naive_span_dim(seed, mats, p):
    """Closure of one vector under the generators, by brute-force rank."""
    from test_gfp import naive_rank

    vecs = [seed % p]
    frontier = [seed % p]
    while frontier:
        new = []
        for v in frontier:
            for A in mats:
                w = A @ v % p
                if naive_rank([list(x) for x in vecs + [w]], p) > naive_rank([list(x) for x in vecs], p):
                    vecs.append(w)
                    new.append(w)
        frontier = new
    return naive_rank([list(x) for x in vecs], p)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_dimensions(p):
    for lam in range(p):
        assert build_l0(lam, p).dim == (1 if lam == 0 else 2 * lam + 1)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_module_law_and_simplicity(p):
    alg = alg_for(p)
    for lam in range(p):
        r = check_l0(build_l0(lam, p), alg)
        assert r["passed"], r["failures"]
        assert r["endo_dim"] == 1
        assert r["trace_h"] == r["trace_h_rule"]


def test_h_eigenvalues():
    p = 7
    for lam in range(1, p):
        M = build_l0(lam, p)
        h = M.dense("h")
        assert np.array_equal(h, np.diag(np.diag(h)))
        assert [int(x) for x in np.diag(h)] == [(lam - 2 * k - l) % p for k, l in M.basis]


def test_weights_of_l0_1():
    # v_{0,0}, v_{0,1}, v_{1,0} have weights 1, 0, -1
    M = build_l0(1, 5)
    assert M.basis == [(0, 0), (0, 1), (1, 0)]
    assert sorted(int(x) for x in np.diag(M.dense("h"))) == [0, 1, 4]
    assert list(M.parity) == [0, 1, 0]


def test_highest_vector_is_only_singular_line():
    p = 5
    for lam in range(1, p):
        M = build_l0(lam, p)
        up = np.vstack([M.dense("e"), M.dense("E")])
        from hamkac.gfp import kernel_array

        K = kernel_array(up, p)
        assert K.shape[0] == 1
        assert np.flatnonzero(K[0]).tolist() == [0]


@pytest.mark.parametrize("lam", [0, 1, 2])
def test_every_nonzero_vector_generates(lam):
    p = 5
    M = build_l0(lam, p)
    mats = [M.dense(g) for g in GENERATORS]
    for coeffs in itertools.product(range(p), repeat=M.dim):
        v = np.array(coeffs, dtype=np.int64)
        if v.any():
            assert naive_span_dim(v, mats, p) == M.dim


def test_lambda_reduced_mod_p():
    assert build_l0(8, 5).lam == 3
    assert l0_basis(0) == [(0, 0)]


def test_dump_mentions_every_generator():
    text = build_l0(1, 5).dump()
    for g in GENERATORS:
        assert "\n%s =" % g in text
