"""Itinerary codes over the special-point partition.

The interval is cut at its special points; a code records which closed cut
interval each iterate lands in.  Orbits that avoid the special set forever
have a unique code; an iterate sitting exactly on a turning point (or shared
cut) admits both neighbouring indices, and each such orbit position is
expanded into a separate code.  Exactness matters twice: eventual periodicity
is detected by literal point repetition, and convergent but never-repeating
orbits are closed out through certified contraction balls whose images
provably keep a fixed itinerary.  A special point is regular when its image
orbit avoids the special set forever and one of its codes repeats from
position zero; such points sit on the boundary of the basin of a stable or
semi-stable non-trapped orbit, and both directions of that correspondence
are constructed and certified here.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .maps import (MINUS, PLUS, PiecewiseMap, PwdynError, RationalLike, Side,
                   as_fraction)
from .orbits import PeriodicOrbit, periodic_points
from .stability import SEMI_STABLE, STABLE, classify_point
from .taxonomy import (PreconditionError, _forward_images, _pull_back,
                       attraction_atlas, attracted, basin_adjacent_special,
                       restrict_power, taxonomy)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"

DEFAULT_CAP = 10**4
DEFAULT_BIT_CAP = 4096


class CodeUndefinedError(PwdynError):
    """The orbit reaches a jump point, so no code exists."""


class CertificationError(PwdynError):
    """An exact certification that should follow from the theory failed;
    this is surfaced loudly as a counterexample."""


@dataclass(frozen=True)
class Trivalent:
    value: str
    cap_used: Optional[int] = None

    def __bool__(self):  # pragma: no cover - guard against misuse
        raise TypeError("trivalent verdicts do not collapse to bool")


@dataclass(frozen=True)
class PartitionIntervals:
    """The cuts a = w_0 < ... < w_{N+1} = b at special points."""

    cuts: tuple[Fraction, ...]

    @classmethod
    def of(cls, f: PiecewiseMap) -> "PartitionIntervals":
        return cls((f.a, *f.special_points().points, f.b))

    @property
    def count(self) -> int:
        return len(self.cuts) - 1

    def indices_of(self, x: Fraction) -> tuple[int, ...]:
        """Indices of the closed cut intervals containing x (one or two)."""
        if x == self.cuts[0]:
            return (0,)
        if x == self.cuts[-1]:
            return (self.count - 1,)
        i = bisect_left(self.cuts, x)
        if self.cuts[i] == x:
            return (i - 1, i)
        return (i - 1,)

    def interval(self, k: int) -> tuple[Fraction, Fraction]:
        return self.cuts[k], self.cuts[k + 1]


@dataclass(frozen=True)
class Code:
    """An itinerary: prefix indices, then a repeating cycle (or truncation).

    strictly_periodic means the whole sequence repeats from position zero;
    an eventually periodic code whose prefix does not line up is not
    strictly periodic and its period is None.
    """

    prefix: tuple[int, ...]
    cycle: Optional[tuple[int, ...]]
    truncated: bool = False
    strictly_periodic: bool = False
    period: Optional[int] = None

    def head(self, count: int) -> tuple[int, ...]:
        out = list(self.prefix[:count])
        i = 0
        while self.cycle and len(out) < count:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return tuple(out[:count])


def _rotation_period(cycle: tuple[int, ...]) -> int:
    n = len(cycle)
    for r in range(1, n + 1):
        if n % r == 0 and all(cycle[i] == cycle[(i + r) % n] for i in range(n)):
            return r
    return n


def _finish_code(prefix: tuple[int, ...], cycle: tuple[int, ...]) -> Code:
    """Normalize: a strictly periodic code keeps only its period word,
    phased from position zero (the stored cycle may be a rotation)."""
    r = _rotation_period(cycle)
    reach = list(prefix) + list(cycle) + list(cycle)
    strict = all(reach[m] == reach[m + r] for m in range(len(prefix)))
    if strict:
        return Code((), tuple(reach[:r]), False, True, r)
    return Code(prefix, cycle, False, False, None)


# -- orbit skeletons with certified tails -------------------------------------

@dataclass(frozen=True)
class _Skeleton:
    prefix_points: tuple[Fraction, ...]
    cycle_points: Optional[tuple[Fraction, ...]]
    truncated: bool
    steps: int
    certified_tail: bool = False


class Certifier:
    """Entry test for certified convergence with a locked itinerary.

    A point inside a contraction ball of an enumerated orbit, and closer to
    its centre than the orbit's clearance from every cut and branch boundary
    divided by the worst intermediate stretch, keeps the exact cut interval
    of the matching orbit point at every future step.
    """

    def __init__(self, f: PiecewiseMap, horizon: int = 8):
        self.f = f
        enumerated = periodic_points(f, horizon, max_power=2 * horizon)
        self.atlas = attraction_atlas(f, enumerated)
        sset = set(f.special_points().points)
        boundaries = sorted({f.a, f.b, *(p.left for p in f.pieces),
                             *(p.right for p in f.pieces), *sset})
        self._entries = []
        for orb, balls in self.atlas.items():
            if any(p in sset for p in orb.points):
                continue
            clearance = min(min(abs(c - p) for c in boundaries if c != p)
                            for p in orb.points)
            stretch = worst = Fraction(1)
            for p in orb.points * 2:
                sides = []
                if p > f.a:
                    sides.append(abs(f.piece_left_of(p).slope))
                if p < f.b:
                    sides.append(abs(f.piece_right_of(p).slope))
                stretch *= max(sides)
                worst = max(worst, stretch)
            threshold = clearance / worst
            self._entries.append((orb, [(b, threshold) for b in balls]))

    def locked_orbit(self, y: Fraction
                     ) -> Optional[tuple[PeriodicOrbit, Fraction]]:
        for orb, balls in self._entries:
            for ball, threshold in balls:
                if ball.contains(y, threshold):
                    return orb, ball.center
        return None


def _skeleton(f: PiecewiseMap, x: Fraction, cap: int, bit_cap: int,
              certifier: Optional[Certifier]) -> _Skeleton:
    """Orbit of x as prefix plus cycle: an exact repetition, or a certified
    limit cycle whose itinerary the tail provably shares.  Raises at jumps."""
    jumps = set(f.special_points().discontinuities)
    special = set(f.special_points().points)
    seen: dict[Fraction, int] = {}
    trail: list[Fraction] = []
    current = x
    for step in range(cap):
        if current in seen:
            i = seen[current]
            return _Skeleton(tuple(trail[:i]), tuple(trail[i:]), False, step)
        if current.denominator.bit_length() > bit_cap:
            return _Skeleton(tuple(trail), None, True, step)
        if current in jumps:
            raise CodeUndefinedError(
                f"iterate {len(trail)} of {x} is a jump point")
        if certifier is not None and current not in special:
            locked = certifier.locked_orbit(current)
            if locked is not None:
                orb, center = locked
                k = orb.points.index(center)
                cycle = orb.points[k:] + orb.points[:k]
                return _Skeleton(tuple(trail), tuple(cycle), False, step,
                                 certified_tail=True)
        seen[current] = len(trail)
        trail.append(current)
        current = f.value(current)
    return _Skeleton(tuple(trail), None, True, cap)


MAX_CODES = 16


def codes(f: PiecewiseMap, x: RationalLike, cap: int = DEFAULT_CAP, *,
          bit_cap: int = DEFAULT_BIT_CAP,
          certifier: Optional[Certifier] = None) -> tuple[Code, ...]:
    """All codes of x, expanded per orbit position with a two-sided index.

    Raises CodeUndefinedError when the orbit hits a jump; returns truncated
    codes when neither an exact repetition nor a certified limit cycle
    appears within the caps.
    """
    x = as_fraction(x)
    part = PartitionIntervals.of(f)
    if certifier is None:
        certifier = Certifier(f)
    sk = _skeleton(f, x, cap, bit_cap, certifier)
    prefix_choices = [part.indices_of(p) for p in sk.prefix_points]
    if sk.cycle_points is None:
        out = {Code(head, None, True) for head in
               _expand(prefix_choices, limit=MAX_CODES)}
        return tuple(sorted(out, key=lambda c: c.prefix))
    cycle_choices = [part.indices_of(p) for p in sk.cycle_points]
    out = set()
    for pre in _expand(prefix_choices, limit=MAX_CODES):
        for cyc in _expand(cycle_choices, limit=MAX_CODES):
            out.add(_finish_code(pre, cyc))
    return tuple(sorted(out, key=lambda c: (c.prefix, c.cycle)))


def _expand(choices: list[tuple[int, ...]], limit: int
            ) -> list[tuple[int, ...]]:
    outs: list[tuple[int, ...]] = [()]
    for options in choices:
        outs = [prev + (o,) for prev in outs for o in options]
        if len(outs) > limit:
            outs = outs[:limit]
    return outs


def avoids_special_forever(f: PiecewiseMap, x: RationalLike,
                           cap: int = DEFAULT_CAP, *,
                           bit_cap: int = DEFAULT_BIT_CAP,
                           certifier: Optional[Certifier] = None) -> Trivalent:
    """Whether the whole forward orbit of x provably misses the special set.

    Yes through an exact cycle off the special set or through entry into a
    certified ball of a clear orbit; no as soon as an iterate is special;
    unknown when a cap gives out first.
    """
    x = as_fraction(x)
    special = set(f.special_points().points)
    if certifier is None:
        certifier = Certifier(f)
    seen: set[Fraction] = set()
    current = x
    for step in range(cap):
        if current in special:
            return Trivalent(NO)
        if current in seen:
            return Trivalent(YES)
        if current.denominator.bit_length() > bit_cap:
            return Trivalent(UNKNOWN, bit_cap)
        locked = certifier.locked_orbit(current)
        if locked is not None:
            return Trivalent(YES)
        seen.add(current)
        current = f.value(current)
    return Trivalent(UNKNOWN, cap)


# -- regular special points -----------------------------------------------------

@dataclass(frozen=True)
class RegularityCertificate:
    w: Fraction
    side: Optional[Side]
    code: Code
    image_in_good_set: Trivalent


def side_codes(f: PiecewiseMap, w: RationalLike, side: Optional[Side],
               cap: int = DEFAULT_CAP, *,
               certifier: Optional[Certifier] = None) -> tuple[Code, ...]:
    """Codes of a special point.

    A turning point has a defined orbit and admits both neighbouring first
    indices.  A jump point has no orbit of its own; its side code follows
    the one-sided limit and must start with that side's own interval index,
    since it stands for the codes of nearby points on that side.
    """
    w = as_fraction(w)
    part = PartitionIntervals.of(f)
    if w not in set(f.special_points().points):
        raise PreconditionError(f"{w} is not a special point")
    jumps = set(f.special_points().discontinuities)
    if certifier is None:
        certifier = Certifier(f)
    if w in jumps:
        if side is None:
            raise PreconditionError("jump points need a side")
        start = f.lateral(w, side)
        k = part.indices_of(w)
        firsts = (k[0],) if side == MINUS else (k[-1],)
    else:
        start = f.value(w)
        firsts = part.indices_of(w)
    tail = codes(f, start, cap, certifier=certifier)
    out = set()
    for first in firsts:
        for t in tail:
            if t.cycle is None:
                out.add(Code((first, *t.prefix), None, True))
            else:
                out.add(_finish_code((first, *t.prefix), t.cycle))
    return tuple(sorted(out, key=lambda c: (c.prefix, c.cycle or ())))


def is_regular(f: PiecewiseMap, w: RationalLike, cap: int = DEFAULT_CAP, *,
               side: Optional[Side] = None,
               certifier: Optional[Certifier] = None) -> Trivalent:
    """Regularity of a special point: its image orbit stays off the special
    set forever and some code of it repeats from position zero.  For a jump
    the verdict is per side; with no side given, the best side answers."""
    w = as_fraction(w)
    jumps = set(f.special_points().discontinuities)
    if w in jumps and side is None:
        verdicts = [is_regular(f, w, cap, side=s, certifier=certifier)
                    for s in (MINUS, PLUS)]
        if any(v.value == YES for v in verdicts):
            return Trivalent(YES)
        if any(v.value == UNKNOWN for v in verdicts):
            return Trivalent(UNKNOWN, cap)
        return Trivalent(NO)
    cert = regularity_certificate(f, w, cap, side=side, certifier=certifier)
    if isinstance(cert, Trivalent):
        return cert
    return Trivalent(YES)


def regularity_certificate(f: PiecewiseMap, w: RationalLike,
                           cap: int = DEFAULT_CAP, *,
                           side: Optional[Side] = None,
                           certifier: Optional[Certifier] = None):
    """The strictly periodic code behind a yes verdict, or the Trivalent
    no / unknown explaining its absence."""
    w = as_fraction(w)
    if certifier is None:
        certifier = Certifier(f)
    jumps = set(f.special_points().discontinuities)
    if w in jumps:
        if side is None:
            for s in (MINUS, PLUS):
                got = regularity_certificate(f, w, cap, side=s,
                                             certifier=certifier)
                if isinstance(got, RegularityCertificate):
                    return got
            return Trivalent(NO)
        start = f.lateral(w, side)
    else:
        start = f.value(w)
    good = avoids_special_forever(f, start, cap, certifier=certifier)
    if good.value != YES:
        return good
    try:
        all_codes = side_codes(f, w, side, cap, certifier=certifier)
    except CodeUndefinedError:
        return Trivalent(NO)
    periodic = [c for c in all_codes if c.strictly_periodic]
    if not periodic:
        if any(c.truncated for c in all_codes):
            return Trivalent(UNKNOWN, cap)
        return Trivalent(NO)
    return RegularityCertificate(w, side, periodic[0], good)


# -- the regular point / attractor correspondence --------------------------------

@dataclass(frozen=True)
class RegularAttractorResult:
    w: Fraction
    side: Optional[Side]
    code: Code
    interval: tuple[Fraction, Fraction]
    orbit: PeriodicOrbit
    stability: str
    attracted_verdict: str


def _lateral_image(f, lo, hi) -> tuple[Fraction, Fraction]:
    v1, v2 = f.lateral(lo, PLUS), f.lateral(hi, MINUS)
    return (v1, v2) if v1 <= v2 else (v2, v1)


def _constraint_interval(f: PiecewiseMap, code: Code, periods: int = 2
                         ) -> tuple[Fraction, Fraction]:
    """Closed interval of points satisfying the code constraints over the
    given number of periods (two keeps the doubled power inside monotone
    territory)."""
    part = PartitionIntervals.of(f)
    sigma = code.cycle
    images = [part.interval(sigma[0])]
    for m in range(1, periods * len(sigma)):
        img = _lateral_image(f, *images[-1])
        c_lo, c_hi = part.interval(sigma[m % len(sigma)])
        t = (max(img[0], c_lo), min(img[1], c_hi))
        if t[0] > t[1]:
            raise CertificationError(f"code constraints empty at position {m}")
        if t == img:
            images.append(img)
        else:
            lo, hi = _pull_back(f, images, m, t)
            images = _forward_images(f, lo, hi, m - 1)
            images.append(t)
    return images[0]


def _power_image(f, lo, hi, n) -> tuple[Fraction, Fraction]:
    for _ in range(n):
        lo, hi = _lateral_image(f, lo, hi)
    return lo, hi


def _stabilized_interval(f: PiecewiseMap, base: tuple[Fraction, Fraction],
                         n: int) -> Optional[tuple[Fraction, Fraction]]:
    """Refine the one-period constraint interval until the n-th power maps
    it into itself; geometric endpoint tails are closed out exactly."""
    lo, hi = base
    los, his = [lo], [hi]
    for _ in range(64):
        p, q = _power_image(f, lo, hi, n)
        if lo <= p and q <= hi:
            return lo, hi
        t = (max(p, lo), min(q, hi))
        if t[0] > t[1]:
            return None
        imgs = _forward_images(f, lo, hi, n - 1)
        lo, hi = _pull_back(f, imgs, n, t)
        los.append(lo)
        his.append(hi)
        guess = _geometric_limit(f, los, his, n)
        if guess is not None:
            return guess
    return None


def _geometric_limit(f, los, his, n) -> Optional[tuple[Fraction, Fraction]]:
    if len(los) < 3:
        return None

    def limit(seq):
        d1, d2 = seq[-2] - seq[-3], seq[-1] - seq[-2]
        if d1 == 0:
            return seq[-1] if d2 == 0 else None
        s = d2 / d1
        if not 0 <= s < 1:
            return None
        return seq[-1] + d2 * s / (1 - s)

    lo, hi = limit(los), limit(his)
    if lo is None or hi is None or lo > hi:
        return None
    p, q = _power_image(f, lo, hi, n)
    if lo <= p and q <= hi:
        return lo, hi
    return None


def regular_attractor(f: PiecewiseMap, w: RationalLike,
                      cap: int = DEFAULT_CAP, *,
                      side: Optional[Side] = None,
                      certifier: Optional[Certifier] = None
                      ) -> RegularAttractorResult:
    """From a regular special point to the orbit attracting it.

    Builds the closed interval of points sharing the periodic code, finds
    the extreme fixed point of the doubled power next to w inside it, and
    certifies the resulting orbit: stable or semi-stable, not trapped, and
    attracting w.  Certification failures raise CertificationError.
    """
    w = as_fraction(w)
    cert = regularity_certificate(f, w, cap, side=side, certifier=certifier)
    if not isinstance(cert, RegularityCertificate):
        raise PreconditionError(
            f"{w} is not certified regular (verdict {cert.value})")
    code = cert.code
    n = code.period
    base = _constraint_interval(f, code)
    if not base[0] <= w <= base[1]:
        raise CertificationError("regular point left its own code interval")
    part = PartitionIntervals.of(f)
    segs = restrict_power(f, base[0], base[1], 2 * n)
    fixed = [t for t in _fixed_points_of_segments(segs)
             if _conforms(f, t, code, part)]
    if w == base[1]:
        below = [t for t in fixed if t < w]
        if not below:
            raise CertificationError("no fixed point of the doubled power "
                                     "below the regular point")
        x_star = max(below)
    elif w == base[0]:
        above = [t for t in fixed if t > w]
        if not above:
            raise CertificationError("no fixed point of the doubled power "
                                     "above the regular point")
        x_star = min(above)
    else:
        raise CertificationError("regular point is not an endpoint of its "
                                 "code interval")
    chain = [x_star]
    for _ in range(2 * n):
        chain.append(f.value(chain[-1]))
        if chain[-1] is None:
            raise CertificationError("attracting orbit hit a jump")
    period = next(d for d in range(1, 2 * n + 1)
                  if chain[d] == x_star and (2 * n) % d == 0)
    orb = PeriodicOrbit(tuple(chain[:period]), period, None, True)
    interval = _stabilized_interval(f, base, n)
    if interval is None:
        partner = chain[n]
        interval = (min(x_star, partner), w) if w == base[1] \
            else (w, max(x_star, partner))
    p, q = _power_image(f, *interval, n)
    if not interval[0] <= p and q <= interval[1]:
        raise CertificationError("code interval is not forward invariant")
    stability = classify_point(f, x_star)
    if stability not in (STABLE, SEMI_STABLE):
        raise CertificationError(f"attracting orbit classified {stability}")
    tax = taxonomy(f, orb)
    if tax.trapped:
        raise CertificationError("attracting orbit is trapped")
    start = f.value(w)
    if start is None:
        start = f.lateral(w, side if side is not None else cert.side)
    verdict = attracted(f, start, orb, cap)
    if verdict == NO:
        raise CertificationError("regular point not attracted to the orbit")
    return RegularAttractorResult(w, cert.side, code, interval, orb,
                                  stability, verdict)


def _conforms(f: PiecewiseMap, t: Fraction, code: Code,
              part: PartitionIntervals) -> bool:
    """The periodic orbit of t follows the code's cycle of cut intervals."""
    sigma = code.cycle
    current = t
    for m in range(2 * len(sigma)):
        lo, hi = part.interval(sigma[m % len(sigma)])
        if not lo <= current <= hi:
            return False
        current = f.value(current)
        if current is None:
            return False
    return True


def _fixed_points_of_segments(segs) -> list[Fraction]:
    out = set()
    for seg in segs:
        if seg.slope == 1:
            if seg.intercept == 0:
                out.add(seg.left)
                out.add(seg.right)
            continue
        t = seg.intercept / (1 - seg.slope)
        if seg.left <= t <= seg.right:
            out.add(t)
    return sorted(out)


def attractor_regular_source(f: PiecewiseMap, orb: PeriodicOrbit, *,
                             horizon: int = 8, cap: int = DEFAULT_CAP,
                             certifier: Optional[Certifier] = None
                             ) -> tuple[Fraction, Trivalent]:
    """From a free non-exceptional stable-or-semi-stable orbit back to a
    regular special point inside its basin.

    Requires every enumerated critical orbit of the map to be stable, mirrors
    the basin edge push, and reports the landed special point with its
    regularity verdict (unknown propagates; a certified no raises)."""
    tax = taxonomy(f, orb)
    if not tax.free or tax.exceptional:
        raise PreconditionError("needs a free, non-exceptional orbit")
    cls = classify_point(f, orb.representative, require_confined=False)
    if cls not in (STABLE, SEMI_STABLE):
        raise PreconditionError("orbit is unstable")
    turns = set(f.special_points().turning)
    for other in periodic_points(f, horizon, max_power=2 * horizon):
        if not other.continuous or not any(p in turns for p in other.points):
            continue
        if classify_point(f, other.representative,
                          require_confined=False) != STABLE:
            raise PreconditionError("a critical orbit is not stable")
    witnesses = basin_adjacent_special(f, orb)
    w = witnesses[0].w
    verdict = is_regular(f, w, cap, certifier=certifier)
    if verdict.value == NO:
        raise CertificationError(
            f"basin edge landed on a non-regular special point {w}")
    return w, verdict
