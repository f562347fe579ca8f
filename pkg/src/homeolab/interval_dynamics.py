"""Conjugacy classes of PL homeomorphisms of [0, 1].

Two maps are conjugate exactly when some increasing homeomorphism ``h``
carries the sign pattern of ``f - id`` onto that of ``g - id``.  For PL maps
this reduces to comparing :class:`~homeolab.pl_core.IntervalInvariant` words,
and ``h`` can be written down explicitly and checked piece by piece.

Classes whose fixed sets accumulate at 0 and/or 1 cannot be realised by a
finite PL map.  They appear only as the labels in ``SYMBOLIC_CLASSES`` and are
never returned by :func:`classify`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .pl_core import (
    FixPoint,
    FixSegment,
    IntervalInvariant,
    Letter,
    PLMap,
    compose,
    fix_set,
    interp_sorted,
    invariant_of,
    invert,
    max_envelope,
    min_envelope,
    sign_word,
)
from .rational import ONE, ZERO, Rat, fmt, rat, sign

SYMBOLIC_CLASSES = (
    "accumulating-both-ends",
    "accumulating-at-0/+",
    "accumulating-at-0/-",
    "accumulating-at-1/+",
    "accumulating-at-1/-",
)


class HaarNullReason(str, Enum):
    INTERIOR_SEGMENT = "interior-segment"
    NON_CROSSING_POINT = "non-crossing-point"


@dataclass(frozen=True)
class NonHaarNull:
    n: int
    first_sign: Letter

    haar_null = False

    def to_json(self) -> dict:
        return {"verdict": "non-haar-null", "n": self.n, "first_sign": self.first_sign.value}


@dataclass(frozen=True)
class HaarNull:
    reason: HaarNullReason
    # offending component, kept for certificates; not part of the label
    witness: tuple = field(default=(), compare=False)

    haar_null = True

    def to_json(self) -> dict:
        out = {"verdict": "haar-null", "reason": self.reason.value}
        if self.witness:
            out["witness"] = [fmt(w) for w in self.witness]
        return out


IntervalClass = Union[NonHaarNull, HaarNull]


class PreconditionError(ValueError):
    pass


class CertificationError(AssertionError):
    pass


def classify(f: PLMap) -> IntervalClass:
    fs = fix_set(f)
    for c in fs.components:
        if isinstance(c, FixSegment):
            return HaarNull(HaarNullReason.INTERIOR_SEGMENT, (c.a, c.b))
    # all components are points; interior ones sit between gaps i-1 and i
    for i in range(1, len(fs.components) - 1):
        if fs.gap_signs[i - 1] == fs.gap_signs[i]:
            x = fs.components[i].x
            return HaarNull(HaarNullReason.NON_CROSSING_POINT, (x, x))
    return NonHaarNull(len(fs.components) - 2, fs.gap_signs[0])


# ---------------------------------------------------------------------------
# conjugacy


@dataclass(frozen=True)
class Conjugator:
    """A PL ``h`` with sign(f(x) - x) == sign(g(h(x)) - h(x)) everywhere.

    ``checked_points`` lists ``(x, s)`` for every point where the identity was
    evaluated exactly, ``s`` being the common sign.
    """

    h: PLMap
    checked_points: tuple


@dataclass(frozen=True)
class Decision:
    verdict: str
    word_f: IntervalInvariant
    word_g: IntervalInvariant
    conjugator: Conjugator | None = None
    mismatch_index: int | None = None

    @property
    def conjugate(self) -> bool:
        return self.verdict == "conjugate"

    def to_json(self) -> dict:
        from .formats import emit_map_obj

        out = {
            "verdict": self.verdict,
            "word_f": self.word_f.to_json(),
            "word_g": self.word_g.to_json(),
        }
        if self.conjugator is not None:
            out["conjugator"] = emit_map_obj(self.conjugator.h)
        if self.mismatch_index is not None:
            out["mismatch_index"] = self.mismatch_index
        return out


def _first_mismatch(a: Sequence, b: Sequence) -> int | None:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    if len(a) != len(b):
        return min(len(a), len(b))
    return None


def conjugate_decision(f: PLMap, g: PLMap) -> Decision:
    wf, wg = sign_word(f), sign_word(g)
    idx = _first_mismatch(wf.letters(), wg.letters())
    if idx is not None:
        return Decision("not-conjugate", wf, wg, mismatch_index=idx)
    return Decision("conjugate", wf, wg, conjugator=build_conjugator(f, g))


def build_conjugator(f: PLMap, g: PLMap) -> Conjugator:
    """Match fixed components in order; affine on every gap closure."""
    ff, fg = fix_set(f), fix_set(g)
    if invariant_of(ff) != invariant_of(fg):
        raise PreconditionError("sign words differ; maps are not conjugate")
    xs, ys = [], []
    for cf, cg in zip(ff.components, fg.components):
        if isinstance(cf, FixPoint):
            xs.append(cf.x)
            ys.append(cg.x)
        else:
            xs += [cf.a, cf.b]
            ys += [cg.a, cg.b]
    h = PLMap(xs, ys)
    return Conjugator(h, tuple(certify_conjugator(f, g, h)))


def certify_conjugator(f: PLMap, g: PLMap, h: PLMap) -> list[tuple[Rat, int]]:
    """Exact check of the sign identity on every common linear piece.

    Between consecutive points of the merged knot set both f - id and
    (g - id) o h are affine, so agreement at the ends plus, on a sign
    change, coincidence of the two roots proves agreement on the piece.
    """
    pre_g = interp_sorted(h.ys, h.xs, g.xs)
    pts = sorted(set(f.xs).union(h.xs, pre_g))
    hv = interp_sorted(h.xs, h.ys, pts)
    gv = interp_sorted(g.xs, g.ys, hv)
    fv = interp_sorted(f.xs, f.ys, pts)
    d1 = [y - x for x, y in zip(pts, fv)]
    d2 = [y - x for x, y in zip(hv, gv)]
    checked = []
    for i, x in enumerate(pts):
        s1, s2 = sign(d1[i]), sign(d2[i])
        if s1 != s2:
            raise CertificationError(f"sign mismatch at x = {x}: {s1} vs {s2}")
        checked.append((x, s1))
        if i + 1 == len(pts):
            break
        a, b = x, pts[i + 1]
        mid = (a + b) / 2
        m1 = (d1[i] + d1[i + 1]) / 2
        m2 = (d2[i] + d2[i + 1]) / 2
        if sign(m1) != sign(m2):
            raise CertificationError(f"sign mismatch at midpoint {mid}")
        checked.append((mid, sign(m1)))
        if d1[i] * d1[i + 1] < 0:
            r1 = a + d1[i] * (b - a) / (d1[i] - d1[i + 1])
            r2 = a + d2[i] * (b - a) / (d2[i] - d2[i + 1])
            if r1 != r2:
                raise CertificationError(f"roots differ on [{a}, {b}]: {r1} vs {r2}")
            checked.append((r1, 0))
    return checked


# ---------------------------------------------------------------------------
# constructions


def representative(n: int, first_sign: Letter | str) -> PLMap:
    """Zigzag with interior fixed points i/(n+1) and alternating bulges."""
    if n < 0:
        raise ValueError("n must be non-negative")
    s = Letter(first_sign)
    if s not in (Letter.POS, Letter.NEG):
        raise ValueError("first_sign must be '+' or '-'")
    w = rat(1, n + 1)
    xs, ys = [ZERO], [ZERO]
    up = s is Letter.POS
    for i in range(n + 1):
        m = (2 * i + 1) * w / 2
        xs += [m, (i + 1) * w]
        ys += [m + w / 4 if up else m - w / 4, (i + 1) * w]
        up = not up
    return PLMap(xs, ys)


def strict_minorant(family: Sequence[PLMap], x0, y0) -> PLMap:
    """PL ``g`` through (x0, y0) lying strictly below every map of the family on (0, 1).

    The envelope is scaled by a tent factor equal to y0/h(x0) on [0, x0] and
    rising linearly to 1 at x = 1; the product is interpolated at the
    envelope's knots, which keeps it PL and strictly below on each piece.
    """
    x0, y0 = rat(x0), rat(y0)
    if not (0 < x0 < 1 and 0 < y0 < 1):
        raise PreconditionError("x0 and y0 must lie in (0, 1)")
    h = min_envelope(family)
    hx0 = h(x0)
    if not y0 < hx0:
        raise PreconditionError(f"y0 = {y0} is not below the envelope value {hx0}")
    c = y0 / hx0
    pts = sorted(set(h.xs) | {x0})
    hv = interp_sorted(h.xs, h.ys, pts)
    ys = []
    for t, v in zip(pts, hv):
        scale = c if t <= x0 else c + (ONE - c) * (t - x0) / (ONE - x0)
        ys.append(scale * v)
    g = PLMap(pts, ys)
    for t, gt, ht in zip(pts, ys, hv):
        if 0 < t < 1 and not gt < ht:
            raise CertificationError(f"minorant not strict at {t}")
    return g


def _crossing_chain(lo: PLMap, hi: PLMap, lo_inv: PLMap, n: int, x0: Rat, eps: Rat):
    x = x0
    y = lo(x) / 2
    xs, ys = [x], [y]
    for _ in range(n):
        x1 = x + eps * (ONE - x)
        y1 = max(hi(x1), y)
        y1 = y1 + eps * (ONE - y1)
        x2 = lo_inv(y1)
        x2 = x2 + eps * (ONE - x2)
        y2 = y1 + (lo(x2) - y1) / 2
        xs += [x1, x2]
        ys += [y1, y2]
        x, y = x2, y2
    return xs, ys


@dataclass(frozen=True)
class CrossingChain:
    """Result of :func:`crossing_chain`: ``g`` and its alternating knots."""

    g: PLMap
    xs: tuple
    ys: tuple

    @property
    def window(self) -> tuple[Rat, Rat]:
        return self.xs[0], self.xs[-1]


def crossing_chain(family: Sequence[PLMap], n: int) -> CrossingChain:
    """``g`` meeting every family member at least 2n times, never near 0 or 1.

    Knots (x_k, y_k), k = 0..2n, alternate below the family's lower envelope
    (even k) and above its upper envelope (odd k).  The chain starts at
    x_0 = 1/8 with steps shrinking until x_2n <= 7/8; when the envelopes are
    too far apart for that, x_0 is halved until the chain ends before 1.
    Outside [x_0, x_2n] ``g`` is a strict minorant of the family.
    """
    if not family:
        raise ValueError("empty family")
    if n < 0:
        raise ValueError("n must be non-negative")
    lo = min_envelope(family)
    if n == 0:
        half = rat(1, 2)
        g = strict_minorant(family, half, lo(half) / 2)
        return CrossingChain(g, (half,), (g(half),))
    hi = max_envelope(family)
    lo_inv = invert(lo)
    x0, limit = rat(1, 8), rat(7, 8)
    chain = None
    for _ in range(64):
        for j in range(1, 21):
            xs, ys = _crossing_chain(lo, hi, lo_inv, n, x0, rat(1, 2**j))
            if xs[-1] <= limit:
                chain = xs, ys
                break
        if chain is not None:
            break
        x0 /= 2
    if chain is None:
        raise CertificationError("could not fit the crossing chain inside (0, 1)")
    xs, ys = chain
    left = strict_minorant(family, xs[0], ys[0])
    right = strict_minorant(family, xs[-1], ys[-1])
    kx = [x for x in left.xs if x < xs[0]] + xs + [x for x in right.xs if x > xs[-1]]
    ky = [y for x, y in zip(left.xs, left.ys) if x < xs[0]] + ys
    ky += [y for x, y in zip(right.xs, right.ys) if x > xs[-1]]
    return CrossingChain(PLMap(kx, ky), tuple(xs), tuple(ys))


def crossing_translate(family: Sequence[PLMap], n: int) -> PLMap:
    return crossing_chain(family, n).g


def conjugate_by(f: PLMap, h: PLMap) -> PLMap:
    """h^-1 o f o h."""
    return compose(invert(h), f, h)
