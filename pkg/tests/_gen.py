"""Random generators shared by the test modules.

Maps are built from a prescribed fixed-set layout, so the expected sign
word of every generated map is known independently of the code under test.
"""
from __future__ import annotations

import random

from homeolab.circle_dynamics import CircleLift
from homeolab.pl_core import PLMap
from homeolab.rational import ONE, ZERO, rat
from homeolab.spectral import GenPermUnitary


def rand_unit(rng: random.Random, den: int = 997) -> "rat":
    """Rational in (0, 1)."""
    return rat(rng.randint(1, den - 1), den)


def sorted_points(rng: random.Random, k: int, lo=ZERO, hi=ONE, den: int = 4096) -> list:
    pts = set()
    while len(pts) < k:
        pts.add(lo + (hi - lo) * rat(rng.randint(1, den - 1), den))
    return sorted(pts)


def bulge(rng: random.Random, a, b, s: int, max_knots: int = 3) -> list:
    """Interior knots on (a, b) strictly above (s > 0) or below the diagonal."""
    r = rng.randint(1, max_knots)
    us = sorted_points(rng, r, a, b)
    if s > 0:
        nxt = us[1:] + [b]
        return [(u, u + rand_unit(rng, 17) * (v - u)) for u, v in zip(us, nxt)]
    prv = [a] + us[:-1]
    return [(u, u - rand_unit(rng, 17) * (u - v)) for u, v in zip(us, prv)]


def map_from_layout(rng: random.Random, comps: list, signs: list) -> PLMap:
    """Random PLMap whose fixed components have the given types.

    ``comps`` lists "pt"/"seg" for each fixed component (first contains 0,
    last contains 1) and ``signs`` gives the sign on each of the gaps.
    """
    return map_with_bounds(rng, comps, signs)[0]


def map_with_bounds(rng: random.Random, comps: list, signs: list):
    """As map_from_layout, also returning each component as (lo, hi)."""
    assert len(comps) == len(signs) + 1
    cuts = sorted_points(rng, 2 * len(comps) - 2)
    # component i occupies [l_i, r_i]; points collapse l_i = r_i
    bounds = []
    it = iter(cuts)
    for i, c in enumerate(comps):
        lo = ZERO if i == 0 else next(it)
        hi = ONE if i == len(comps) - 1 else next(it)
        if c == "pt":
            if i == 0:
                hi = ZERO
            elif i == len(comps) - 1:
                lo = ONE
            else:
                hi = lo
        bounds.append((lo, hi))
    if len(comps) == 1:
        return PLMap((0, 1), (0, 1)), [(ZERO, ONE)]
    knots = []
    for i, (lo, hi) in enumerate(bounds):
        knots.append((lo, lo))
        if hi != lo:
            knots.append((hi, hi))
        if i < len(signs):
            knots += bulge(rng, hi, bounds[i + 1][0], signs[i])
    return PLMap.from_pairs(knots), bounds


def random_layout(rng: random.Random, max_interior: int = 4):
    n = rng.randint(0, max_interior)
    comps = [rng.choice(["pt", "pt", "seg"]) for _ in range(n + 2)]
    signs = [rng.choice([1, -1]) for _ in range(n + 1)]
    return comps, signs


def layout_word(comps, signs):
    """Expected (left flag, word..., right flag) of a layout."""
    word = [comps[0]]
    for i, s in enumerate(signs):
        word.append("+" if s > 0 else "-")
        if i + 1 < len(signs):
            word.append(comps[i + 1])
    word.append(comps[-1])
    return tuple(word)


def class_layout(n: int, s: int):
    """Layout of the crossing class (n, s): n interior points, alternating signs."""
    return ["pt"] * (n + 2), [s * (-1) ** i for i in range(n + 1)]


def random_plmap(rng: random.Random, pieces: int) -> PLMap:
    xs = [ZERO] + sorted_points(rng, pieces - 1) + [ONE]
    ys = [ZERO] + sorted_points(rng, pieces - 1) + [ONE]
    return PLMap(xs, ys)


def random_lift(rng: random.Random, pieces: int, y0=None) -> CircleLift:
    xs = [ZERO] + sorted_points(rng, pieces - 1) + [ONE]
    y0 = rand_unit(rng, 64) if y0 is None else rat(y0)
    ys = [y0] + [y0 + t for t in sorted_points(rng, pieces - 1)] + [y0 + 1]
    return CircleLift(xs, ys)


def random_unitary(rng: random.Random, n: int, den: int = 12) -> GenPermUnitary:
    perm = list(range(n))
    rng.shuffle(perm)
    return GenPermUnitary(perm, [rat(rng.randrange(den), den) for _ in range(n)])
