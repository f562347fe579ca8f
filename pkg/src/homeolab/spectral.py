"""Exact spectral data of generalized permutation unitaries.

``U`` sends basis vector ``e_j`` to ``exp(2 pi i phase_j) e_{perm[j]}``.  Every
unimodular scalar is an :class:`Angle` in [0, 1), so spectra, rotations and
matrix coefficients are all computed without floating point.

On a cycle of length L whose phases sum to s, U^L acts as the scalar
e^{2 pi i s}; the cycle therefore carries the L atoms (s + j)/L, one each.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rational import ZERO, Rat, fmt, frac, rat


class OperatorError(ValueError):
    pass


def angle(x) -> Rat:
    """Reduce to [0, 1)."""
    return frac(rat(x))


@dataclass(frozen=True, init=False)
class GenPermUnitary:
    perm: tuple
    phases: tuple

    def __init__(self, perm: Sequence[int], phases: Iterable | None = None):
        perm = tuple(int(p) for p in perm)
        n = len(perm)
        if n < 1:
            raise OperatorError("dimension must be at least 1")
        if sorted(perm) != list(range(n)):
            raise OperatorError("perm is not a bijection of 0..N-1")
        phases = tuple(angle(t) for t in phases) if phases is not None else (ZERO,) * n
        if len(phases) != n:
            raise OperatorError(f"expected {n} phases, got {len(phases)}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phases", phases)

    @property
    def dim(self) -> int:
        return len(self.perm)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.dim
        out = []
        for start in range(self.dim):
            if seen[start]:
                continue
            cyc, j = [], start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.perm[j]
            out.append(tuple(cyc))
        return out

    def to_json(self) -> dict:
        return {"dim": self.dim, "perm": list(self.perm), "phases": [fmt(t) for t in self.phases]}


def identity_op(n: int) -> GenPermUnitary:
    return GenPermUnitary(range(n))


def cyclic_shift(n: int) -> GenPermUnitary:
    return GenPermUnitary([(j + 1) % n for j in range(n)])


def diagonal(phases: Sequence) -> GenPermUnitary:
    return GenPermUnitary(range(len(phases)), phases)


def multiply(U: GenPermUnitary, V: GenPermUnitary) -> GenPermUnitary:
    """The product U V (apply V first)."""
    if U.dim != V.dim:
        raise OperatorError("dimension mismatch")
    perm = [U.perm[V.perm[j]] for j in range(U.dim)]
    phases = [V.phases[j] + U.phases[V.perm[j]] for j in range(U.dim)]
    return GenPermUnitary(perm, phases)


def inverse(U: GenPermUnitary) -> GenPermUnitary:
    perm = [0] * U.dim
    phases = [ZERO] * U.dim
    for j, k in enumerate(U.perm):
        perm[k] = j
        phases[k] = -U.phases[j]
    return GenPermUnitary(perm, phases)


def operator_from_obj(obj) -> GenPermUnitary:
    if not isinstance(obj, dict):
        raise OperatorError("operator payload must be a JSON object")
    try:
        dim, perm, phases = obj["dim"], obj["perm"], obj["phases"]
    except KeyError as exc:
        raise OperatorError(f"missing field {exc}") from None
    if not isinstance(perm, list) or not all(isinstance(p, int) and not isinstance(p, bool) for p in perm):
        raise OperatorError("perm must be a list of integers")
    if not isinstance(phases, list) or not all(isinstance(t, str) for t in phases):
        raise OperatorError("phases must be a list of 'p/q' strings")
    if dim != len(perm):
        raise OperatorError(f"dim = {dim} but perm has {len(perm)} entries")
    try:
        return GenPermUnitary(perm, [rat(t) for t in phases])
    except (ValueError, ZeroDivisionError) as exc:
        raise OperatorError(str(exc)) from None


def parse_operator(text: str) -> GenPermUnitary:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperatorError(f"invalid JSON: {exc}") from None
    return operator_from_obj(obj)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectralData:
    atoms: tuple  # ((angle, multiplicity), ...) with strictly increasing angles

    @property
    def total(self) -> int:
        return sum(m for _, m in self.atoms)

    def shifted(self, theta) -> "SpectralData":
        theta = rat(theta)
        return _collect((angle(a + theta), m) for a, m in self.atoms)

    def to_json(self) -> list:
        return [[fmt(a), m] for a, m in self.atoms]


def _collect(pairs: Iterable[tuple[Rat, int]]) -> SpectralData:
    c: Counter = Counter()
    for a, m in pairs:
        c[a] += m
    return SpectralData(tuple(sorted(c.items())))


def cycle_phase(U: GenPermUnitary, cyc: Sequence[int]) -> Rat:
    return angle(sum((U.phases[j] for j in cyc), ZERO))


def spectral_data(U: GenPermUnitary) -> SpectralData:
    pairs = []
    for cyc in U.cycles():
        L = len(cyc)
        s = cycle_phase(U, cyc)
        pairs += [(angle((s + j) / L), 1) for j in range(L)]
    return _collect(pairs)


def conjugate_decision_unitary(U1: GenPermUnitary, U2: GenPermUnitary) -> bool:
    if U1.dim != U2.dim:
        raise OperatorError(f"dimension mismatch: {U1.dim} vs {U2.dim}")
    return spectral_data(U1) == spectral_data(U2)


def rotate(U: GenPermUnitary, theta) -> GenPermUnitary:
    """e^{2 pi i theta} U."""
    theta = rat(theta)
    return GenPermUnitary(U.perm, [t + theta for t in U.phases])


def multishift_truncated(k: int, M: int) -> GenPermUnitary:
    """k disjoint cyclic M-shifts: e_{i,j} -> e_{i,j+1 mod M}, index i*M + j."""
    if k < 1 or M < 1:
        raise ValueError("k and M must be at least 1")
    return GenPermUnitary([i * M + (j + 1) % M for i in range(k) for j in range(M)])


# ---------------------------------------------------------------------------
# matrix coefficients <U^n e_i, e_i>


def _check_index(U: GenPermUnitary, i: int) -> None:
    if not 0 <= i < U.dim:
        raise IndexError(f"basis index {i} out of range for dimension {U.dim}")


def bochner_direct(U: GenPermUnitary, i: int, n: int) -> Rat | None:
    """Apply U n times to e_i; None for a zero coefficient, else its angle."""
    _check_index(U, i)
    if n < 0:
        raise ValueError("n must be non-negative")
    j, phase = i, ZERO
    for _ in range(n):
        phase += U.phases[j]
        j = U.perm[j]
    return angle(phase) if j == i else None


def bochner_atomic(U: GenPermUnitary, i: int, n: int) -> Rat | None:
    """Integrate z^n against the spectral measure of e_i.

    That measure puts mass 1/L on each atom (s + j)/L of the cycle through i.
    The sum of e^{2 pi i n (s + j)/L} over j is a geometric series: it is
    L e^{2 pi i n s/L} when L divides n and 0 otherwise, so the integral is
    the angle n s / L or zero.
    """
    _check_index(U, i)
    if n < 0:
        raise ValueError("n must be non-negative")
    cyc = next(c for c in U.cycles() if i in c)
    L = len(cyc)
    if n % L:
        return None
    base = cycle_phase(U, cyc) / L  # the atom with j = 0
    return angle(n * base)


def bochner_coeff(U: GenPermUnitary, i: int, n: int) -> Rat | None:
    direct = bochner_direct(U, i, n)
    atomic = bochner_atomic(U, i, n)
    if direct != atomic:
        raise AssertionError(f"Bochner paths disagree at i={i}, n={n}: {direct} vs {atomic}")
    return direct
