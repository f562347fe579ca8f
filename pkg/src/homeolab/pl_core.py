"""Increasing piecewise-linear homeomorphisms of [0, 1] with rational breakpoints.

A :class:`PLMap` is stored in canonical form: breakpoints sorted by x, no
interior breakpoint collinear with its neighbours.  Two maps are equal iff
their canonical breakpoint tuples are equal.
"""
from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

from .rational import ONE, ZERO, HALF, Rat, rat, sign

DEFAULT_CEILING = 10**6
CEILING_ENV = "HOMEOLAB_CEILING"

_ceiling_override: int | None = None


class MapError(ValueError):
    """Invalid map payload or violated map invariant."""

    kind = "invalid"


class MalformedMapError(MapError):
    kind = "malformed"


class MonotonicityError(MapError):
    kind = "monotonicity"


class DomainError(MapError):
    kind = "domain"


class LiftError(MapError):
    kind = "lift"


class CeilingExceeded(RuntimeError):
    """A construction would exceed the configured piece-count ceiling."""


def set_piece_ceiling(value: int | None) -> None:
    """Override the ceiling for this process (``None`` restores env/default)."""
    global _ceiling_override
    if value is not None and value < 1:
        raise ValueError("ceiling must be positive")
    _ceiling_override = value


def piece_ceiling() -> int:
    if _ceiling_override is not None:
        return _ceiling_override
    env = os.environ.get(CEILING_ENV)
    if env:
        return int(env)
    return DEFAULT_CEILING


def check_ceiling(pieces: int, what: str = "map") -> None:
    limit = piece_ceiling()
    if pieces > limit:
        raise CeilingExceeded(f"{what} has {pieces} pieces, ceiling is {limit}")


class Letter(str, Enum):
    POS = "+"
    NEG = "-"
    PT = "pt"
    SEG = "seg"

    def flipped(self) -> "Letter":
        if self is Letter.POS:
            return Letter.NEG
        if self is Letter.NEG:
            return Letter.POS
        return self


def sign_letter(value: int) -> Letter:
    if value > 0:
        return Letter.POS
    if value < 0:
        return Letter.NEG
    raise ValueError("zero has no sign letter")


# ---------------------------------------------------------------------------
# breakpoint helpers shared with circle_dynamics


def canonical_knots(xs: Sequence[Rat], ys: Sequence[Rat]) -> tuple[tuple, tuple]:
    """Drop interior knots that are collinear with their neighbours."""
    out_x = [xs[0]]
    out_y = [ys[0]]
    for x, y in zip(xs[1:], ys[1:]):
        while len(out_x) >= 2:
            x0, y0, x1, y1 = out_x[-2], out_y[-2], out_x[-1], out_y[-1]
            if (y1 - y0) * (x - x1) == (y - y1) * (x1 - x0):
                out_x.pop()
                out_y.pop()
            else:
                break
        out_x.append(x)
        out_y.append(y)
    return tuple(out_x), tuple(out_y)


def interp(xs: Sequence[Rat], ys: Sequence[Rat], x: Rat) -> Rat:
    """Linear interpolation; ``x`` must lie in [xs[0], xs[-1]]."""
    i = bisect_right(xs, x) - 1
    if i >= len(xs) - 1:
        return ys[-1]
    if i < 0:
        return ys[0]
    x0 = xs[i]
    if x == x0:
        return ys[i]
    return ys[i] + (ys[i + 1] - ys[i]) * (x - x0) / (xs[i + 1] - x0)


def interp_sorted(xs: Sequence[Rat], ys: Sequence[Rat], pts: Iterable[Rat]) -> list:
    """Interpolate at ascending points with a single forward sweep."""
    out = []
    i = 0
    last = len(xs) - 2
    for x in pts:
        while i < last and xs[i + 1] <= x:
            i += 1
        x0 = xs[i]
        if x == x0:
            out.append(ys[i])
        elif x == xs[i + 1]:
            out.append(ys[i + 1])
        else:
            out.append(ys[i] + (ys[i + 1] - ys[i]) * (x - x0) / (xs[i + 1] - x0))
    return out


def check_strict(values: Sequence[Rat], label: str) -> None:
    for i in range(len(values) - 1):
        if not values[i] < values[i + 1]:
            raise MonotonicityError(
                f"{label} not strictly increasing at index {i + 1}: "
                f"{values[i]} then {values[i + 1]}"
            )


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of a continuous PL function on a closed interval.

    ``components`` are closed intervals ``(a, b)`` (``a == b`` for points),
    ordered and pairwise disjoint.  ``gaps`` are ``(lo, hi, sign)`` for each
    maximal open interval without zeros, in order.
    """

    components: tuple
    gaps: tuple


def zero_structure(xs: Sequence[Rat], ds: Sequence[Rat]) -> ZeroSet:
    """Exact zero set of the PL function with knot values ``ds`` at ``xs``."""
    raw = []
    for i in range(len(xs) - 1):
        d0, d1 = ds[i], ds[i + 1]
        if d0 == 0 and d1 == 0:
            raw.append((xs[i], xs[i + 1]))
            continue
        if d0 == 0:
            raw.append((xs[i], xs[i]))
        if d1 == 0:
            raw.append((xs[i + 1], xs[i + 1]))
        if (d0 > 0 and d1 < 0) or (d0 < 0 and d1 > 0):
            r = xs[i] + d0 * (xs[i + 1] - xs[i]) / (d0 - d1)
            raw.append((r, r))
    raw.sort()
    comps: list[list] = []
    for a, b in raw:
        if comps and a <= comps[-1][1]:
            if b > comps[-1][1]:
                comps[-1][1] = b
        else:
            comps.append([a, b])

    # gap boundaries: start of domain, components, end of domain
    bounds = []
    lo = xs[0]
    for a, b in comps:
        if a > lo:
            bounds.append((lo, a))
        lo = b
    if lo < xs[-1]:
        bounds.append((lo, xs[-1]))
    gaps = tuple((a, b, _certified_gap_sign(xs, ds, a, b)) for a, b in bounds)
    return ZeroSet(tuple((a, b) for a, b in comps), gaps)


def _certified_gap_sign(xs, ds, a: Rat, b: Rat) -> int:
    # sign at the midpoint, cross-checked at quartiles and every knot inside
    probes = [a + (b - a) / 4, (a + b) / 2, a + 3 * (b - a) / 4]
    probes += [x for x in xs if a < x < b]
    signs = {sign(interp(xs, ds, p)) for p in probes}
    if len(signs) != 1 or 0 in signs:
        raise AssertionError(f"gap ({a}, {b}) failed sign certification: {signs}")
    return signs.pop()


# ---------------------------------------------------------------------------
# PLMap


@dataclass(frozen=True, init=False)
class PLMap:
    """Increasing PL homeomorphism of [0, 1] fixing both endpoints."""

    xs: tuple
    ys: tuple

    def __init__(self, xs: Iterable, ys: Iterable):
        xs = tuple(rat(x) for x in xs)
        ys = tuple(rat(y) for y in ys)
        if len(xs) != len(ys):
            raise MalformedMapError("x and y breakpoint lists differ in length")
        if len(xs) < 2:
            raise MalformedMapError("a map needs at least two breakpoints")
        if xs[0] != 0 or xs[-1] != 1:
            raise DomainError(f"breakpoints must span [0, 1], got [{xs[0]}, {xs[-1]}]")
        if ys[0] != 0 or ys[-1] != 1:
            raise DomainError(f"interval map must fix 0 and 1, got y0={ys[0]}, ym={ys[-1]}")
        check_strict(xs, "x breakpoints")
        check_strict(ys, "y breakpoints")
        xs, ys = canonical_knots(xs, ys)
        check_ceiling(len(xs) - 1)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "PLMap":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @property
    def pieces(self) -> int:
        return len(self.xs) - 1

    @property
    def breakpoints(self) -> list[tuple[Rat, Rat]]:
        return list(zip(self.xs, self.ys))

    def __call__(self, x) -> Rat:
        return eval_map(self, x)

    def __repr__(self) -> str:
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"PLMap[{pts}]"

    def is_identity(self) -> bool:
        return len(self.xs) == 2


def identity() -> PLMap:
    return PLMap((0, 1), (0, 1))


def tent(a) -> PLMap:
    """The witness map: slope 2a on [0, 1/2], then linear up to (1, 1)."""
    a = rat(a)
    if not 0 < a < 1:
        raise DomainError(f"tent parameter must lie in (0, 1), got {a}")
    return PLMap((ZERO, HALF, ONE), (ZERO, a, ONE))


def eval_map(f: PLMap, x) -> Rat:
    x = rat(x)
    if x < 0 or x > 1:
        raise DomainError(f"x = {x} outside [0, 1]")
    return interp(f.xs, f.ys, x)


def _compose2(f: PLMap, g: PLMap) -> PLMap:
    # knots: g's knots plus preimages under g of f's knots
    pre = interp_sorted(g.ys, g.xs, f.xs)
    pts = sorted(set(g.xs).union(pre))
    vals = interp_sorted(f.xs, f.ys, interp_sorted(g.xs, g.ys, pts))
    return PLMap(pts, vals)


def compose(*maps: PLMap) -> PLMap:
    """``compose(f, g, h)`` is the map x -> f(g(h(x)))."""
    if not maps:
        return identity()
    result = maps[-1]
    for f in reversed(maps[:-1]):
        result = _compose2(f, result)
    return result


def invert(f: PLMap) -> PLMap:
    return PLMap(f.ys, f.xs)


def sup_distance(f: PLMap, g: PLMap) -> Rat:
    """Uniform distance, attained at a breakpoint of f or g.  Diagnostics only."""
    pts = sorted(set(f.xs).union(g.xs))
    fv = interp_sorted(f.xs, f.ys, pts)
    gv = interp_sorted(g.xs, g.ys, pts)
    return max(abs(a - b) for a, b in zip(fv, gv))


# ---------------------------------------------------------------------------
# fixed sets and sign words


@dataclass(frozen=True)
class FixPoint:
    x: Rat

    @property
    def letter(self) -> Letter:
        return Letter.PT

    def contains(self, t: Rat) -> bool:
        return t == self.x


@dataclass(frozen=True)
class FixSegment:
    a: Rat
    b: Rat

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("degenerate segment")

    @property
    def letter(self) -> Letter:
        return Letter.SEG

    def contains(self, t: Rat) -> bool:
        return self.a <= t <= self.b


FixComponent = Union[FixPoint, FixSegment]


def component_bounds(c: FixComponent) -> tuple[Rat, Rat]:
    if isinstance(c, FixPoint):
        return c.x, c.x
    return c.a, c.b


@dataclass(frozen=True)
class FixSet:
    components: tuple
    gap_signs: tuple

    @property
    def gaps(self) -> list[tuple[Rat, Rat]]:
        """Open gaps between consecutive components."""
        return [
            (component_bounds(c0)[1], component_bounds(c1)[0])
            for c0, c1 in zip(self.components, self.components[1:])
        ]


def fix_set(f: PLMap) -> FixSet:
    ds = [y - x for x, y in zip(f.xs, f.ys)]
    zs = zero_structure(f.xs, ds)
    comps = tuple(FixPoint(a) if a == b else FixSegment(a, b) for a, b in zs.components)
    return FixSet(comps, tuple(sign_letter(s) for _, _, s in zs.gaps))


@dataclass(frozen=True)
class IntervalInvariant:
    """Alternating word of gap signs and interior fixed components.

    ``endpoint_flags`` records whether the components containing 0 and 1
    are points or segments; the identity (one component) has flags
    ``(SEG, SEG)`` and an empty word.
    """

    word: tuple
    endpoint_flags: tuple

    def flipped(self) -> "IntervalInvariant":
        return IntervalInvariant(tuple(c.flipped() for c in self.word), self.endpoint_flags)

    def letters(self) -> tuple:
        """Full comparison sequence: left flag, word, right flag."""
        return (self.endpoint_flags[0],) + tuple(self.word) + (self.endpoint_flags[1],)

    def to_json(self) -> dict:
        return {
            "word": [c.value for c in self.word],
            "endpoints": [c.value for c in self.endpoint_flags],
        }


def invariant_of(fs: FixSet) -> IntervalInvariant:
    comps = fs.components
    flags = (comps[0].letter, comps[-1].letter)
    word: list[Letter] = []
    for i, s in enumerate(fs.gap_signs):
        if i > 0:
            word.append(comps[i].letter)
        word.append(s)
    return IntervalInvariant(tuple(word), flags)


def sign_word(f: PLMap) -> IntervalInvariant:
    return invariant_of(fix_set(f))


# ---------------------------------------------------------------------------
# envelopes


def _envelope2(f: PLMap, g: PLMap, lower: bool) -> PLMap:
    pts = sorted(set(f.xs).union(g.xs))
    fv = interp_sorted(f.xs, f.ys, pts)
    gv = interp_sorted(g.xs, g.ys, pts)
    pick = min if lower else max
    xs = [pts[0]]
    ys = [pick(fv[0], gv[0])]
    for i in range(1, len(pts)):
        d0 = fv[i - 1] - gv[i - 1]
        d1 = fv[i] - gv[i]
        if (d0 > 0 and d1 < 0) or (d0 < 0 and d1 > 0):
            x0, x1 = pts[i - 1], pts[i]
            r = x0 + d0 * (x1 - x0) / (d0 - d1)
            xs.append(r)
            ys.append(fv[i - 1] + (fv[i] - fv[i - 1]) * (r - x0) / (x1 - x0))
        xs.append(pts[i])
        ys.append(pick(fv[i], gv[i]))
    return PLMap(xs, ys)


def min_envelope(family: Sequence[PLMap]) -> PLMap:
    """Pointwise minimum, with knots at every crossing abscissa."""
    if not family:
        raise ValueError("empty family")
    out = family[0]
    for f in family[1:]:
        out = _envelope2(out, f, lower=True)
    return out


def max_envelope(family: Sequence[PLMap]) -> PLMap:
    if not family:
        raise ValueError("empty family")
    out = family[0]
    for f in family[1:]:
        out = _envelope2(out, f, lower=False)
    return out
