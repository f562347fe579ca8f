"""PL circle homeomorphisms given by lifts, and their periodic structure.

A :class:`CircleLift` stores ``F`` on [0, 1]; it extends to the line by
``F(x + 1) = F(x) + 1``.  Rotation numbers are detected exactly by solving
``F^q(x) = x + p`` piece by piece for q up to a bound; past the bound only a
certified enclosure is reported.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterable, Sequence, Union

from .pl_core import (
    CeilingExceeded,
    LiftError,
    DomainError,
    MalformedMapError,
    Letter,
    canonical_knots,
    check_ceiling,
    check_strict,
    interp,
    sign_letter,
)
from .rational import ONE, ZERO, Rat, ceil, floor, fmt, frac, rat, sign

DEFAULT_QMAX = 12
DEFAULT_NITER = 1000


@dataclass(frozen=True, init=False)
class CircleLift:
    """Lift of a circle homeomorphism, stored on the fundamental domain [0, 1]."""

    xs: tuple
    ys: tuple

    def __init__(self, xs: Iterable, ys: Iterable):
        xs = tuple(rat(x) for x in xs)
        ys = tuple(rat(y) for y in ys)
        if len(xs) != len(ys):
            raise MalformedMapError("x and y breakpoint lists differ in length")
        if len(xs) < 2:
            raise MalformedMapError("a lift needs at least two breakpoints")
        if xs[0] != 0 or xs[-1] != 1:
            raise DomainError(f"breakpoints must span [0, 1], got [{xs[0]}, {xs[-1]}]")
        check_strict(xs, "x breakpoints")
        check_strict(ys, "y breakpoints")
        if ys[-1] != ys[0] + 1:
            raise LiftError(f"lift law violated: y_m = {ys[-1]} but y_0 + 1 = {ys[0] + 1}")
        xs, ys = canonical_knots(xs, ys)
        check_ceiling(len(xs) - 1, "lift")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "CircleLift":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @property
    def pieces(self) -> int:
        return len(self.xs) - 1

    @property
    def is_normalized(self) -> bool:
        return 0 <= self.ys[0] < 1

    def __call__(self, x) -> Rat:
        x = rat(x)
        n = floor(x)
        return interp(self.xs, self.ys, x - n) + n

    def inverse(self, y) -> Rat:
        y = rat(y)
        n = floor(y - self.ys[0])
        return interp(self.ys, self.xs, y - n) + n

    def shifted(self, alpha) -> "CircleLift":
        """The lift x -> F(x) + alpha."""
        alpha = rat(alpha)
        return CircleLift(self.xs, [y + alpha for y in self.ys])

    def normalized(self) -> "CircleLift":
        n = floor(self.ys[0])
        return self if n == 0 else self.shifted(-n)

    def displacement(self) -> list:
        return [y - x for x, y in zip(self.xs, self.ys)]

    def __repr__(self) -> str:
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"CircleLift[{pts}]"


def rigid(alpha) -> CircleLift:
    """Lift x -> x + alpha of the rotation by alpha."""
    alpha = rat(alpha)
    return CircleLift((ZERO, ONE), (alpha, alpha + 1))


def identity_lift() -> CircleLift:
    return rigid(0)


def compose_lifts(F: CircleLift, G: CircleLift) -> CircleLift:
    """x -> F(G(x))."""
    g0, g1 = G.ys[0], G.ys[-1]
    base = floor(g0)
    pre = set(G.xs)
    for j in (base - 1, base, base + 1):
        for t in F.xs:
            s = t + j
            if g0 <= s <= g1:
                pre.add(G.inverse(s))
    pts = sorted(p for p in pre if 0 <= p <= 1)
    return CircleLift(pts, [F(G(x)) for x in pts])


def invert_lift(F: CircleLift) -> CircleLift:
    return lift_from_knots(zip(F.ys, F.xs))


def power(F: CircleLift, q: int) -> CircleLift:
    if q < 1:
        raise ValueError("power must be positive")
    G = F
    for i in range(2, q + 1):
        try:
            G = compose_lifts(F, G)
        except CeilingExceeded as exc:
            raise CeilingExceeded(f"{exc} (while forming F^{i})") from None
    return G


def lift_from_knots(knots: Iterable[Sequence]) -> CircleLift:
    """Build a lift from knots (x, F(x)) anywhere on the line.

    Knots are folded into [0, 1) using F(x + 1) = F(x) + 1 and the value at 0
    is interpolated across the seam when 0 is not itself a knot.
    """
    folded = {}
    for x, y in knots:
        x, y = rat(x), rat(y)
        n = floor(x)
        folded[x - n] = y - n
    xs = sorted(folded)
    ys = [folded[x] for x in xs]
    if xs[0] != 0:
        # interpolate between (x_last - 1, y_last - 1) and (x_first, y_first)
        xa, ya = xs[-1] - 1, ys[-1] - 1
        xb, yb = xs[0], ys[0]
        y0 = ya + (yb - ya) * (0 - xa) / (xb - xa)
        xs.insert(0, ZERO)
        ys.insert(0, y0)
    xs.append(ONE)
    ys.append(ys[0] + 1)
    return CircleLift(xs, ys)


def conjugate_lift(F: CircleLift, H: CircleLift) -> CircleLift:
    """H^-1 o F o H."""
    return compose_lifts(invert_lift(H), compose_lifts(F, H))


# ---------------------------------------------------------------------------
# zeros of periodic PL functions


@dataclass(frozen=True)
class CircleZeros:
    """Zeros of a 1-periodic PL function, cyclically ordered.

    ``components[i]`` is ``(a, b)`` with ``a`` in [0, 1) (``b`` may exceed 1
    for a component straddling the seam); ``gap_signs[i]`` is the sign on the
    gap following component i.  ``full`` marks the identically-zero case.
    """

    components: tuple
    gap_signs: tuple
    full: bool = False


def _periodic_value(xs, ds, t: Rat) -> Rat:
    return interp(xs, ds, frac(t))


def circle_zeros(xs: Sequence[Rat], ds: Sequence[Rat]) -> CircleZeros:
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
    if not raw:
        return CircleZeros((), ())
    raw.sort()
    comps: list[list] = []
    for a, b in raw:
        if comps and a <= comps[-1][1]:
            comps[-1][1] = max(comps[-1][1], b)
        else:
            comps.append([a, b])
    if len(comps) == 1 and comps[0][0] == 0 and comps[0][1] == 1:
        return CircleZeros(((ZERO, ONE),), (), full=True)
    # glue across the seam; ds[0] == ds[-1], so a component ending at 1
    # always has a partner starting at 0
    if comps[-1][1] == 1:
        last = comps.pop()
        if last[0] != 1:
            first = comps.pop(0)
            comps.append([last[0], first[1] + 1])
    signs = []
    for i, (a, b) in enumerate(comps):
        na = comps[(i + 1) % len(comps)][0]
        if i + 1 == len(comps):
            na = na + 1
        signs.append(_certified_periodic_sign(xs, ds, b, na))
    return CircleZeros(tuple((a, b) for a, b in comps), tuple(signs))


def _certified_periodic_sign(xs, ds, a: Rat, b: Rat) -> int:
    probes = [a + (b - a) / 4, (a + b) / 2, a + 3 * (b - a) / 4]
    probes += [x + j for j in (0, 1) for x in xs if a < x + j < b]
    signs = {sign(_periodic_value(xs, ds, p)) for p in probes}
    if len(signs) != 1 or 0 in signs:
        raise AssertionError(f"gap ({a}, {b}) failed sign certification: {signs}")
    return signs.pop()


def _shifted_zeros(G: CircleLift):
    """First integer p with G(x) = x + p solvable, and the zero set; or None."""
    ds = G.displacement()
    for p in range(ceil(min(ds)), floor(max(ds)) + 1):
        zs = circle_zeros(G.xs, [d - p for d in ds])
        if zs.components:
            return p, zs
    return None


# ---------------------------------------------------------------------------
# rotation numbers and periodic structure


@dataclass(frozen=True)
class RationalRotation:
    p: int
    q: int

    def __post_init__(self):
        if not (self.q >= 1 and 0 <= self.p < self.q and gcd(self.p, self.q) == 1):
            raise ValueError(f"invalid rotation {self.p}/{self.q}")

    @property
    def value(self) -> Rat:
        return rat(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class RotationEnclosure:
    lo: Rat
    hi: Rat

    @property
    def width(self) -> Rat:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= rat(x) <= self.hi


RotationNumber = Union[RationalRotation, RotationEnclosure]


class PointKind(str, Enum):
    ATTRACTIVE = "attractive"
    REPULSIVE = "repulsive"
    NON_CROSSING = "non-crossing"


class NoPeriodicPoints(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicStructure:
    """Periodic points of minimal period q, as fixed points of F^q - p.

    ``degenerate`` is set when F^q(x) = x + p holds on a whole segment; then
    ``segments`` lists those arcs and orbit data is left empty.
    """

    q: int
    p: int
    points: tuple
    kinds: tuple
    orbits: tuple = ()
    ell: int | None = None
    segments: tuple = ()
    degenerate: bool = False

    @property
    def K(self) -> int:
        return len(self.points)

    @property
    def crossing_flags(self) -> tuple:
        return tuple(k is not PointKind.NON_CROSSING for k in self.kinds)

    @property
    def all_crossing(self) -> bool:
        return not self.degenerate and all(self.crossing_flags)


def _structure_from_zeros(F: CircleLift, q: int, p: int, zs: CircleZeros) -> PeriodicStructure:
    segs = tuple((a, b) for a, b in zs.components if a != b)
    if zs.full or segs:
        pts = tuple(a for a, b in zs.components if a == b)
        return PeriodicStructure(
            q, p, pts, (PointKind.NON_CROSSING,) * len(pts),
            segments=segs or ((ZERO, ONE),), degenerate=True,
        )
    pts = tuple(a for a, _ in zs.components)
    K = len(pts)
    kinds = []
    for i in range(K):
        left, right = zs.gap_signs[i - 1], zs.gap_signs[i]
        if left > 0 and right < 0:
            kinds.append(PointKind.ATTRACTIVE)
        elif left < 0 and right > 0:
            kinds.append(PointKind.REPULSIVE)
        else:
            kinds.append(PointKind.NON_CROSSING)
    index = {x: i for i, x in enumerate(pts)}
    succ = [index[frac(F(x))] for x in pts]
    ell = succ[0]
    for i, j in enumerate(succ):
        if j != (i + ell) % K:
            raise AssertionError("F does not rotate its periodic points rigidly")
    orbits, seen = [], set()
    for i in range(K):
        if i in seen:
            continue
        orb, j = [], i
        while j not in seen:
            seen.add(j)
            orb.append(pts[j])
            j = succ[j]
        orbits.append(tuple(orb))
    return PeriodicStructure(q, p, pts, tuple(kinds), tuple(orbits), ell)


def periodic_structure(F: CircleLift, q: int) -> PeriodicStructure:
    """Exact periodic structure at period q (F^q(x) = x + p for some integer p)."""
    F = F.normalized()
    found = _shifted_zeros(power(F, q))
    if found is None:
        raise NoPeriodicPoints(f"F^{q}(x) - x takes no integer value")
    p, zs = found
    return _structure_from_zeros(F, q, p, zs)


def rotation_number(
    F: CircleLift, q_max: int = DEFAULT_QMAX, n_iter: int = DEFAULT_NITER
) -> tuple[RotationNumber, PeriodicStructure | None]:
    """Exact rational rotation number when some q <= q_max has periodic points.

    Otherwise returns the enclosure of (F^j(0) - 1)/j .. (F^j(0) + 1)/j,
    intersected over j = 1..n_iter and with [0, 1].
    """
    if q_max < 1 or n_iter < 1:
        raise ValueError("q_max and n_iter must be positive")
    F = F.normalized()
    G = F
    for q in range(1, q_max + 1):
        if q > 1:
            try:
                G = compose_lifts(F, G)
            except CeilingExceeded as exc:
                raise CeilingExceeded(f"{exc} (reached q = {q})") from None
        found = _shifted_zeros(G)
        if found is not None:
            p, zs = found
            rot = RationalRotation(p % q, q)
            return rot, _structure_from_zeros(F, q, p, zs)
    return rotation_enclosure(F, n_iter), None


def rotation_enclosure(F: CircleLift, n_iter: int) -> RotationEnclosure:
    F = F.normalized()
    lo, hi = ZERO, ONE
    z = ZERO
    for j in range(1, n_iter + 1):
        z = F(z)
        lo = max(lo, (z - 1) / j)
        hi = min(hi, (z + 1) / j)
    return RotationEnclosure(lo, hi)


# ---------------------------------------------------------------------------
# classification


class CircleReason(str, Enum):
    INFINITE_PERIODIC = "infinite-periodic"
    NON_CROSSING = "non-crossing"


@dataclass(frozen=True)
class CircleNonHaarNull:
    rotation: RationalRotation
    k: int
    point_count: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "verdict": "non-haar-null",
            "rotation": str(self.rotation),
            "orbit_count": 2 * self.k,
            "crossing": True,
        }


@dataclass(frozen=True)
class CircleHaarNull:
    reason: CircleReason
    rotation: RationalRotation
    witness: tuple = field(default=(), compare=False)

    def to_json(self) -> dict:
        out = {
            "verdict": "haar-null",
            "reason": self.reason.value,
            "rotation": str(self.rotation),
            "orbit_count": None,
            "crossing": False,
        }
        if self.witness:
            out["witness"] = [fmt(w) for w in self.witness]
        return out


@dataclass(frozen=True)
class CircleUndetermined:
    enclosure: RotationEnclosure

    def to_json(self) -> dict:
        return {
            "verdict": "undetermined",
            "rotation": None,
            "orbit_count": None,
            "crossing": None,
            "enclosure": [fmt(self.enclosure.lo), fmt(self.enclosure.hi)],
        }


CircleClass = Union[CircleNonHaarNull, CircleHaarNull, CircleUndetermined]


def classify_from(rot: RotationNumber, st: PeriodicStructure | None) -> CircleClass:
    if isinstance(rot, RotationEnclosure):
        return CircleUndetermined(rot)
    if st.degenerate:
        return CircleHaarNull(CircleReason.INFINITE_PERIODIC, rot, st.segments[0])
    for x, kind in zip(st.points, st.kinds):
        if kind is PointKind.NON_CROSSING:
            return CircleHaarNull(CircleReason.NON_CROSSING, rot, (x,))
    # K is a multiple of 2q for every all-crossing structure; point_count keeps
    # the raw K so callers can audit that
    return CircleNonHaarNull(rot, st.K // (2 * st.q), st.K)


def classify_circle(
    F: CircleLift, q_max: int = DEFAULT_QMAX, n_iter: int = DEFAULT_NITER
) -> CircleClass:
    return classify_from(*rotation_number(F, q_max, n_iter))


# ---------------------------------------------------------------------------
# signatures and conjugacy


@dataclass(frozen=True, init=False)
class CyclicSignWord:
    """Cyclic word of fixed components and gap signs around the circle.

    Equality ignores the starting point: words are compared through their
    least rotation that starts on a component letter.
    """

    letters: tuple = field(compare=False)
    canonical: tuple

    def __init__(self, letters: Sequence[Letter]):
        letters = tuple(Letter(c) for c in letters)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "canonical", _least_rotation(letters))

    def to_json(self) -> list:
        return [c.value for c in self.letters]


def _least_rotation(letters: tuple) -> tuple:
    if len(letters) <= 1:
        return letters
    doubled = letters + letters
    n = len(letters)
    best = None
    for s in range(0, n, 2):
        cand = tuple(c.value for c in doubled[s : s + n])
        if best is None or cand < best:
            best = cand
    return best


def cyclic_equal(a: Sequence, b: Sequence) -> bool:
    """Doubling test: is ``b`` an even rotation of ``a``?"""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    return any(doubled[s : s + len(a)] == b for s in range(0, len(a), 2 if len(a) > 1 else 1))


def _word_from_zeros(zs: CircleZeros) -> CyclicSignWord:
    if zs.full:
        return CyclicSignWord((Letter.SEG,))
    out = []
    for (a, b), s in zip(zs.components, zs.gap_signs):
        out.append(Letter.PT if a == b else Letter.SEG)
        out.append(sign_letter(s))
    return CyclicSignWord(out)


def signature(F: CircleLift) -> CyclicSignWord:
    """Sign word of F(x) - x - k around the circle, for the k with fixed points."""
    found = _shifted_zeros(F)
    if found is None:
        raise NoPeriodicPoints("lift has no fixed points on the circle")
    return _word_from_zeros(found[1])


@dataclass(frozen=True)
class CircleDecision:
    verdict: str
    rotation_f: RotationNumber
    rotation_g: RotationNumber
    signature_f: CyclicSignWord | None = None
    signature_g: CyclicSignWord | None = None

    def to_json(self) -> dict:
        def rot(r):
            if isinstance(r, RationalRotation):
                return str(r)
            return {"enclosure": [fmt(r.lo), fmt(r.hi)]}

        out = {"verdict": self.verdict, "rotation_f": rot(self.rotation_f),
               "rotation_g": rot(self.rotation_g)}
        if self.signature_f is not None:
            out["signature_f"] = self.signature_f.to_json()
            out["signature_g"] = self.signature_g.to_json()
        return out


def conjugate_decision_circle(
    F: CircleLift, G: CircleLift, q_max: int = DEFAULT_QMAX, n_iter: int = DEFAULT_NITER
) -> CircleDecision:
    rf, _ = rotation_number(F, q_max, n_iter)
    rg, _ = rotation_number(G, q_max, n_iter)
    if isinstance(rf, RotationEnclosure) or isinstance(rg, RotationEnclosure):
        return CircleDecision("undetermined", rf, rg)
    if rf != rg:
        return CircleDecision("not-conjugate", rf, rg)
    sf = signature(power(F.normalized(), rf.q))
    sg = signature(power(G.normalized(), rg.q))
    verdict = "conjugate" if sf == sg else "not-conjugate"
    return CircleDecision(verdict, rf, rg, sf, sg)


# ---------------------------------------------------------------------------
# constructions


def representative_circle(p: int, q: int, k: int) -> CircleLift:
    """Lift with rotation p/q and exactly 2kq periodic points, all crossing.

    With n = 2kq, each [j/n, (j+1)/n] is carried onto its translate by p/q;
    on even j the graph bulges above the translation, on odd j below.
    """
    if q < 1 or not 0 <= p < q or gcd(p, q) != 1:
        raise ValueError(f"need gcd(p, q) = 1 and 0 <= p < q, got {p}/{q}")
    if k < 1:
        raise ValueError("k must be at least 1")
    n = 2 * k * q
    w = rat(1, n)
    shift = rat(p, q)
    xs, ys = [ZERO], [shift]
    for j in range(n):
        m = (2 * j + 1) * w / 2
        bulge = w / 4 if j % 2 == 0 else -w / 4
        xs += [m, (j + 1) * w]
        ys += [m + shift + bulge, (j + 1) * w + shift]
    return CircleLift(xs, ys)


class WindowSelectionError(ValueError):
    pass


def orbit_collapse(
    F: CircleLift, struct: PeriodicStructure | None = None, q_max: int = DEFAULT_QMAX
) -> tuple[CircleLift, CircleLift]:
    """Remove two periodic orbits from a map with 2(k+1) of them.

    Returns ``(H, F2)`` where H is identity off q windows and F2 is the
    normalized lift of h o f.  Each window runs from the gap after a
    repulsive point p_{il} to the gap after p_{il+2}; H stretches the first
    quarter-to-three-quarter span over p_{il+1} and p_{il+2}, pushing both
    past p_{il+2}.
    """
    F = F.normalized()
    cls = classify_circle(F, q_max)
    if not isinstance(cls, CircleNonHaarNull) or cls.k < 2:
        raise ValueError(f"orbit_collapse needs 2(k+1) >= 4 crossing orbits, got {cls}")
    if struct is None:
        struct = periodic_structure(F, cls.rotation.q)
    q, K = struct.q, struct.K
    if q != cls.rotation.q or K != 2 * q * cls.k or struct.degenerate:
        raise ValueError("periodic structure does not match the map")
    # relabel so that p_0 is repulsive
    offset = 0 if struct.kinds[0] is PointKind.REPULSIVE else 1
    if struct.kinds[offset] is not PointKind.REPULSIVE:
        raise ValueError("expected alternating attractive/repulsive points")
    ell = struct.ell

    def P(i: int) -> Rat:
        j = i + offset
        return struct.points[j % K] + j // K

    knots = []
    for i in range(q):
        b = i * ell
        lo, hi = P(b), P(b + 1)
        x_i, y_i = lo + (hi - lo) / 4, lo + 3 * (hi - lo) / 4
        lo, hi = P(b + 2), P(b + 3)
        u_i, v_i = lo + (hi - lo) / 4, lo + 3 * (hi - lo) / 4
        if not (x_i < y_i < u_i < v_i and v_i - x_i < 1):
            raise WindowSelectionError(f"window {i} collapsed in gap ({P(b)}, {P(b + 3)})")
        knots += [(x_i, x_i), (y_i, u_i), (v_i, v_i)]
    folded = sorted((frac(x), x) for x, _ in knots[::3])
    for (a, _), (b, _) in zip(folded, folded[1:]):
        if a == b:
            raise WindowSelectionError(f"windows overlap at {a}")
    H = lift_from_knots(knots)
    F2 = compose_lifts(H, F).normalized()
    return H, F2


# ---------------------------------------------------------------------------
# the level function psi


def _iterate_shifted(F: CircleLift, alpha: Rat, n: int, x: Rat) -> Rat:
    z = x
    for _ in range(n):
        z = F(z) + alpha
    return z


def psi(F: CircleLift, n: int, k: int, x) -> Rat:
    """The unique alpha with (F + alpha)^n(x) = x + k, solved exactly.

    alpha -> (F + alpha)^n(x) is increasing and PL.  Each iterate is carried
    as an affine function of alpha; whenever its range over the current
    alpha-bracket straddles a knot of F, the bracket is narrowed to the
    sub-interval that still contains the solution.
    """
    if n < 1:
        raise ValueError("n must be positive")
    x = rat(x)
    target = x + k
    ds = F.displacement()
    lo = rat(k, n) - max(ds)
    hi = rat(k, n) - min(ds)
    if lo == hi:
        return lo
    knots = F.xs[:-1]
    coef, const = ZERO, x  # z_0(alpha) = x
    for _ in range(n):
        z_lo, z_hi = coef * lo + const, coef * hi + const
        if coef != 0:
            cuts = []
            for j in range(floor(z_lo), floor(z_hi) + 1):
                for t in knots:
                    s = t + j
                    if z_lo < s < z_hi:
                        cuts.append((s - const) / coef)
            if cuts:
                bounds = [lo] + sorted(cuts) + [hi]
                a, b = 0, len(bounds) - 1
                # invariant: Phi(bounds[a]) <= target <= Phi(bounds[b])
                while b - a > 1:
                    mid = (a + b) // 2
                    v = _iterate_shifted(F, bounds[mid], n, x)
                    if v == target:
                        return bounds[mid]
                    if v < target:
                        a = mid
                    else:
                        b = mid
                lo, hi = bounds[a], bounds[b]
                z_lo, z_hi = coef * lo + const, coef * hi + const
        zm = (z_lo + z_hi) / 2
        j = floor(zm)
        i = bisect_right(F.xs, zm - j) - 1
        slope = (F.ys[i + 1] - F.ys[i]) / (F.xs[i + 1] - F.xs[i])
        intercept = F.ys[i] + j - slope * (F.xs[i] + j)
        coef, const = slope * coef + 1, slope * const + intercept
    return (target - const) / coef


def psi_variation(F: CircleLift, n: int, k: int, grid: int) -> Rat:
    """Total variation of psi over the uniform grid i/grid, i = 0..grid."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    vals = [psi(F, n, k, rat(i, grid)) for i in range(grid + 1)]
    return sum((abs(b - a) for a, b in zip(vals, vals[1:])), ZERO)
