import random
import numpy as np
import pytest
from hypothesis import given, strategies as st

from _gen import random_unitary
from homeolab.rational import rat
from homeolab.spectral import (
    GenPermUnitary,
    OperatorError,
    SpectralData,
    bochner_atomic,
    bochner_coeff,
    bochner_direct,
    conjugate_decision_unitary,
    cyclic_shift,
    diagonal,
    identity_op,
    inverse,
    multiply,
    multishift_truncated,
    parse_operator,
    rotate,
    spectral_data,
)

seeds = st.integers(0, 2**32 - 1)


def atoms(*pairs):
    return SpectralData(tuple((rat(a), m) for a, m in pairs))


def dense(U):
    """U as a complex matrix: column j is exp(2 pi i phase_j) e_{perm[j]}."""
    M = np.zeros((U.dim, U.dim), dtype=complex)
    for j, (k, t) in enumerate(zip(U.perm, U.phases)):
        M[k, j] = np.exp(2j * np.pi * float(t))
    return M


def numeric_angles(U):
    ev = np.linalg.eigvals(dense(U))
    return sorted(float(np.angle(z) / (2 * np.pi)) % 1.0 for z in ev)


def test_examples():
    assert spectral_data(identity_op(5)) == atoms((0, 5))
    assert spectral_data(cyclic_shift(4)) == atoms((0, 1), ("1/4", 1), ("1/2", 1), ("3/4", 1))
    assert spectral_data(multishift_truncated(2, 3)) == atoms((0, 2), ("1/3", 2), ("2/3", 2))
    S = cyclic_shift(4)
    assert conjugate_decision_unitary(S, S)
    assert not conjugate_decision_unitary(S, identity_op(4))
    assert conjugate_decision_unitary(S, diagonal([0, rat(1, 4), rat(1, 2), rat(3, 4)]))
    assert rotate(S, 0) == S
    assert spectral_data(rotate(identity_op(3), rat(1, 3))) == atoms(("1/3", 3))
    assert spectral_data(rotate(S, rat(1, 8))) == atoms(("1/8", 1), ("3/8", 1), ("5/8", 1), ("7/8", 1))
    assert multishift_truncated(1, 1) == identity_op(1)
    assert spectral_data(multishift_truncated(3, 4)) == atoms((0, 3), ("1/4", 3), ("1/2", 3), ("3/4", 3))
    assert bochner_coeff(identity_op(3), 2, 7) == 0
    assert bochner_coeff(S, 0, 2) is None
    assert bochner_coeff(S, 0, 4) == 0


def test_errors():
    with pytest.raises(OperatorError):
        GenPermUnitary([0, 0])
    with pytest.raises(OperatorError):
        GenPermUnitary([1, 0], [0])
    with pytest.raises(OperatorError):
        conjugate_decision_unitary(identity_op(2), identity_op(3))
    with pytest.raises(IndexError):
        bochner_coeff(identity_op(2), 2, 1)
    with pytest.raises(ValueError):
        multishift_truncated(0, 2)
    with pytest.raises(OperatorError):
        parse_operator('{"dim": 3, "perm": [1, 0], "phases": ["0", "0"]}')
    with pytest.raises(OperatorError):
        parse_operator('{"dim": 2, "perm": [1, 0], "phases": [0.5, "0"]}')
    U = parse_operator('{"dim": 2, "perm": [1, 0], "phases": ["1/2", "3/2"]}')
    assert U.phases == (rat(1, 2), rat(1, 2))


@given(seeds, st.integers(1, 12))
def test_spectral_data_matches_eigensolver(seed, n):
    U = random_unitary(random.Random(seed), n)
    exact = [float(a) for a, m in spectral_data(U).atoms for _ in range(m)]
    num = numeric_angles(U)
    assert len(exact) == len(num)
    # greedy multiset match on the circle
    for a in exact:
        dist = [min(abs(a - c) % 1.0, 1 - abs(a - c) % 1.0) for c in num]
        j = int(np.argmin(dist))
        assert dist[j] < 1e-6
        num.pop(j)
    assert spectral_data(U).total == n


@given(seeds, st.integers(1, 10))
def test_group_laws(seed, n):
    rng = random.Random(seed)
    U, V = random_unitary(rng, n), random_unitary(rng, n)
    assert np.allclose(dense(multiply(U, V)), dense(U) @ dense(V))
    assert multiply(U, inverse(U)) == identity_op(n)
    W = multiply(multiply(V, U), inverse(V))
    assert spectral_data(W) == spectral_data(U)
    assert conjugate_decision_unitary(U, W)


@given(seeds, st.integers(1, 10))
def test_pushforward(seed, n):
    rng = random.Random(seed)
    U = random_unitary(rng, n)
    theta = rat(rng.randrange(97), 97)
    assert spectral_data(rotate(U, theta)) == spectral_data(U).shifted(theta)


@given(seeds, st.integers(1, 10))
def test_bochner_against_matrix_power(seed, n):
    rng = random.Random(seed)
    U = random_unitary(rng, n)
    M = dense(U)
    P = np.eye(n, dtype=complex)
    for k in range(2 * n + 1):
        for i in range(n):
            v = bochner_coeff(U, i, k)
            if v is None:
                assert abs(P[i, i]) < 1e-9
            else:
                assert abs(P[i, i] - np.exp(2j * np.pi * float(v))) < 1e-9
        P = M @ P


def test_multishift_constant_multiplicity():
    for k in range(1, 5):
        for M in range(1, 8):
            sd = spectral_data(multishift_truncated(k, M))
            assert [a for a, _ in sd.atoms] == [rat(j, M) for j in range(M)]
            assert all(m == k for _, m in sd.atoms)


def test_bochner_paths_separately():
    U = GenPermUnitary([1, 2, 0, 3], [rat(1, 5), rat(1, 3), 0, rat(2, 7)])
    for i in range(4):
        for n in range(13):
            assert bochner_direct(U, i, n) == bochner_atomic(U, i, n)
    assert bochner_direct(U, 0, 3) == rat(8, 15)
    assert bochner_direct(U, 3, 2) == rat(4, 7)
