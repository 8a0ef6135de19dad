"""Taxonomy of continuous periodic orbits: critical, trapped, free,
exceptional; basins near special points; and the orbit-count bound.

The workhorse is the monotone window of a point: the largest interval around
it on which every iterate up to a given depth stays continuous and monotone.
It is computed locally, by pushing the interval forward one step at a time
and pulling clips at special points back through the monotone steps, so no
global high power is ever materialized.  The restriction of a power to such
a window is a short list of affine segments, and trapped / free / basin
questions reduce to exact sign analysis of those segments against the
diagonal.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .maps import (MINUS, PLUS, PiecewiseMap, PwdynError, RationalLike,
                   as_fraction)
from .orbits import (Germ, HALF_POINT, INTERVAL_FAMILY, PeriodicOrbit,
                     germ_step, periodic_points)
from .stability import SEMI_STABLE, STABLE, classify_point

BOUNDARY_NONE = "none"
BOUNDARY_FIXED = "fixed_endpoint"
BOUNDARY_SWAP = "two_cycle_endpoints"


class DegenerateWindowError(PwdynError):
    """The base point itself obstructs every monotone window."""


class PreconditionError(PwdynError):
    """An operation was called outside its stated preconditions."""


class TaxonomyViolation(PwdynError):
    """A structural fact that should hold for every map failed; this always
    indicates an implementation bug and is surfaced loudly."""


def monotone_window(f: PiecewiseMap, x: RationalLike, depth: int
                    ) -> tuple[Fraction, Fraction]:
    """Largest [u, v] around x on which every iterate up to `depth` is
    continuous and monotone.

    The endpoints are special points of some iterate (equivalently, points
    whose orbit reaches the special set within `depth` steps) or the domain
    endpoints.
    """
    x = as_fraction(x)
    special = f.special_points().points
    sset = set(special)
    u, v = f.a, f.b
    images = [(u, v)]
    orbit_vals = [x]
    for j in range(depth):
        if orbit_vals[j] in sset:
            raise DegenerateWindowError(
                f"iterate {j} of {x} lands on a special point")
        lo, hi = images[j]
        xj = orbit_vals[j]
        inner = [s for s in special if lo < s < hi]
        left_clips = [s for s in inner if s < xj]
        right_clips = [s for s in inner if s > xj]
        if left_clips or right_clips:
            t_lo = max(left_clips) if left_clips else lo
            t_hi = min(right_clips) if right_clips else hi
            u, v = _pull_back(f, images, j, (t_lo, t_hi))
            images = _forward_images(f, u, v, j)
        lo, hi = images[j]
        nxt_lo, nxt_hi = f.lateral(lo, PLUS), f.lateral(hi, MINUS)
        images.append((nxt_lo, nxt_hi) if nxt_lo <= nxt_hi else (nxt_hi, nxt_lo))
        orbit_vals.append(f.value(xj))
    return u, v


def _forward_images(f, u, v, steps) -> list[tuple[Fraction, Fraction]]:
    out = [(u, v)]
    for _ in range(steps):
        lo, hi = out[-1]
        a, b = f.lateral(lo, PLUS), f.lateral(hi, MINUS)
        out.append((a, b) if a <= b else (b, a))
    return out


def _pull_back(f, images, j, target) -> tuple[Fraction, Fraction]:
    """Pull a sub-interval of the j-th image back to the base interval
    through the monotone continuous steps."""
    t_lo, t_hi = target
    for k in range(j - 1, -1, -1):
        lo, hi = images[k]
        a = _solve_in(f, lo, hi, t_lo)
        b = _solve_in(f, lo, hi, t_hi)
        t_lo, t_hi = (a, b) if a <= b else (b, a)
    return t_lo, t_hi


def _solve_in(f: PiecewiseMap, lo: Fraction, hi: Fraction,
              target: Fraction) -> Fraction:
    """The unique x in [lo, hi] with f(x) = target, where f is continuous
    and monotone there."""
    i0 = max(bisect_right(f._lefts, lo) - 1, 0)
    for piece in f.pieces[i0:]:
        if piece.left >= hi:
            break
        p, q = max(piece.left, lo), min(piece.right, hi)
        v1, v2 = piece.value_at(p), piece.value_at(q)
        if min(v1, v2) <= target <= max(v1, v2):
            return piece.solve(target)
    raise PwdynError(f"{target} not attained on [{lo}, {hi}]")


@dataclass(frozen=True)
class Segment:
    left: Fraction
    right: Fraction
    slope: Fraction
    intercept: Fraction

    def value_at(self, t: Fraction) -> Fraction:
        return self.slope * t + self.intercept


def restrict_power(f: PiecewiseMap, lo: Fraction, hi: Fraction, m: int
                   ) -> list[Segment]:
    """Affine segments of the m-th iterate on (lo, hi).

    Requires every iterate up to m to be continuous and monotone there (a
    monotone window), so images only ever cross removable breakpoints.
    """
    segs = [Segment(lo, hi, Fraction(1), Fraction(0))]
    cuts = [p.left for p in f.pieces[1:]]
    for _ in range(m):
        out = []
        for seg in segs:
            v1, v2 = seg.value_at(seg.left), seg.value_at(seg.right)
            ylo, yhi = (v1, v2) if v1 <= v2 else (v2, v1)
            inner = cuts[bisect_right(cuts, ylo):bisect_left(cuts, yhi)]
            xs = sorted((c - seg.intercept) / seg.slope for c in inner)
            bounds = [seg.left] + [x for x in xs
                                   if seg.left < x < seg.right] + [seg.right]
            for p, q in zip(bounds, bounds[1:]):
                if p >= q:
                    continue
                y = seg.value_at((p + q) / 2)
                piece = f.pieces[bisect_right(f._lefts, y) - 1]
                out.append(Segment(p, q, piece.slope * seg.slope,
                                   piece.slope * seg.intercept + piece.intercept))
        segs = sorted(out, key=lambda s: s.left)
    return segs


def _diagonal_gap(seg: Segment) -> tuple[Fraction, Fraction]:
    """Coefficients (s, c) of value(t) - t = s*t + c on the segment."""
    return seg.slope - 1, seg.intercept


def _segment_solution(seg: Segment, lo: Fraction, hi: Fraction, want_le: bool
                      ) -> Optional[tuple[Fraction, Fraction]]:
    """Closure of {t in (lo, hi) : gap(t) <= 0} (or >= 0), clipped to the
    segment, or None when empty."""
    p, q = max(seg.left, lo), min(seg.right, hi)
    if p >= q:
        return None
    s, c = _diagonal_gap(seg)
    if s == 0:
        ok = (c <= 0) if want_le else (c >= 0)
        return (p, q) if ok else None
    root = -c / s
    rising = s > 0
    if want_le:
        sol = (p, min(q, root)) if rising else (max(p, root), q)
    else:
        sol = (max(p, root), q) if rising else (p, min(q, root))
    lo2, hi2 = max(sol[0], p), min(sol[1], q)
    if lo2 > hi2:
        return None
    return (lo2, hi2)


def _gap_at(segs: list[Segment], t: Fraction) -> Fraction:
    for seg in segs:
        if seg.left <= t <= seg.right:
            return seg.value_at(t) - t
    raise PwdynError(f"{t} outside the restricted window")


def _pick_witness(segs, lo, hi, want_le, preferred) -> Optional[Fraction]:
    """A point of the open interval (lo, hi) where the diagonal gap has the
    requested sign (equality allowed); preferred candidates are tried first
    so witnesses are reproducible."""
    def ok(t):
        if not lo < t < hi:
            return False
        g = _gap_at(segs, t)
        return g <= 0 if want_le else g >= 0

    for cand in preferred:
        if ok(cand):
            return cand
    best = None
    for seg in segs:
        sol = _segment_solution(seg, lo, hi, want_le)
        if sol is None:
            continue
        a, b = sol
        mid = (a + b) / 2
        for t in (mid, a, b):
            if ok(t) and (best is None or abs(t - (lo + hi) / 2) < abs(best - (lo + hi) / 2)):
                best = t
                break
    return best


@dataclass(frozen=True)
class TrapResult:
    trapped: bool
    witness: Optional[tuple[Fraction, Fraction, Fraction]] = None


def is_trapped(f: PiecewiseMap, orb: PeriodicOrbit, *,
               at_point: Optional[Fraction] = None) -> TrapResult:
    """Decide trappedness by exact sign analysis of the 2n-th iterate
    against the diagonal inside the monotone window.

    A trapped orbit is bracketed by y < x < z strictly inside the window
    with the 2n-th iterate at most y at y and at least z at z (equalities
    allowed, so identity stretches count).  Returns exact witnesses and a
    margin delta when trapped.
    """
    if not orb.continuous:
        raise PreconditionError("trapped is defined for continuous orbits")
    if orb.kind == HALF_POINT:
        raise PreconditionError("trapped is defined for point orbits")
    turns = set(f.special_points().turning)
    if any(p in turns for p in orb.points):
        raise PreconditionError("trapped is defined for non-critical orbits")
    if any(p in (f.a, f.b) for p in orb.points):
        raise PreconditionError("trapped needs an interior orbit")
    x = as_fraction(at_point) if at_point is not None else orb.representative
    n = orb.period
    u, v = monotone_window(f, x, 2 * n)
    segs = restrict_power(f, u, v, 2 * n)
    y = _pick_witness(segs, u, x, True, [(u + 3 * x) / 4])
    if y is None:
        return TrapResult(False)
    z = _pick_witness(segs, x, v, False, [2 * x - y, (v + 3 * x) / 4])
    if z is None:
        return TrapResult(False)
    delta = min(y - u, v - z) / 2
    return TrapResult(True, (y, z, delta))


@dataclass(frozen=True)
class OrbitTaxonomy:
    orbit: PeriodicOrbit
    critical: bool
    trapped: bool
    free: bool
    exceptional: frozenset[str]
    boundary_case: str
    trap_witness: Optional[tuple[Fraction, Fraction, Fraction]] = None


def taxonomy(f: PiecewiseMap, orb: PeriodicOrbit) -> OrbitTaxonomy:
    """Full classification of a continuous periodic orbit.

    Trapped / free is evaluated at every orbit point and must agree; a
    disagreement, or a periodic endpoint that is neither fixed, critical,
    nor half of the endpoint swap, raises TaxonomyViolation.
    """
    if not orb.continuous:
        raise PreconditionError("taxonomy is defined for continuous orbits")
    turns = set(f.special_points().turning)
    critical = any(p in turns for p in orb.points)
    boundary = [p for p in orb.points if p in (f.a, f.b)]
    boundary_case = BOUNDARY_NONE
    if boundary:
        if orb.period == 1:
            boundary_case = BOUNDARY_FIXED
        elif (orb.period == 2 and set(orb.points) == {f.a, f.b}):
            boundary_case = BOUNDARY_SWAP
        elif not critical:
            raise TaxonomyViolation(
                f"periodic endpoint orbit {orb.points} is neither fixed, "
                "critical, nor the endpoint swap")
    trapped = False
    witness = None
    if not critical and not boundary:
        results = [is_trapped(f, orb, at_point=p) for p in orb.points]
        flags = {r.trapped for r in results}
        if len(flags) != 1:
            raise TaxonomyViolation(
                f"trapped flag not uniform along orbit {orb.points}")
        trapped = flags.pop()
        witness = results[0].witness
    free = not critical and not trapped and not boundary
    exceptional = exceptional_types(f, orb) if free else frozenset()
    return OrbitTaxonomy(orb, critical, trapped, free, exceptional,
                         boundary_case, witness)


def _monotone_on(f: PiecewiseMap, lo: Fraction, hi: Fraction,
                 increasing: bool) -> bool:
    """Continuous and strictly monotone on [lo, hi] in the given sense."""
    if lo >= hi:
        return True
    if any(lo < s < hi for s in f.special_points().points):
        return False
    i0 = max(bisect_right(f._lefts, lo) - 1, 0)
    for piece in f.pieces[i0:]:
        if piece.left >= hi:
            break
        if piece.right <= lo:
            continue
        if (piece.slope > 0) != increasing:
            return False
    return True


def _strict_gap_on(segs: list[Segment], lo: Fraction, hi: Fraction,
                   negative: bool) -> bool:
    """gap(t) < 0 (or > 0) for every t in the open interval (lo, hi)."""
    nodes = sorted({s.left for s in segs} | {s.right for s in segs})
    for t in nodes:
        if lo < t < hi:
            g = _gap_at(segs, t)
            if not (g < 0 if negative else g > 0):
                return False
    for seg in segs:
        p, q = max(seg.left, lo), min(seg.right, hi)
        if p >= q:
            continue
        s, c = _diagonal_gap(seg)
        gp, gq = s * p + c, s * q + c
        if negative:
            if gp > 0 or gq > 0 or (gp == 0 and gq == 0):
                return False
        else:
            if gp < 0 or gq < 0 or (gp == 0 and gq == 0):
                return False
    return True


def exceptional_types(f: PiecewiseMap, orb: PeriodicOrbit) -> frozenset[str]:
    """Which of the three boundary-monotone configurations the orbit
    realizes: increasing toward the right endpoint above the orbit (a), the
    mirror at the left endpoint (b), or the decreasing two-cycle hugging
    both endpoints (c)."""
    out = set()
    if orb.period == 1:
        x = orb.points[0]
        if f.a < x < f.b:
            if _monotone_on(f, x, f.b, True):
                segs = [Segment(p.left, p.right, p.slope, p.intercept)
                        for p in f.pieces]
                if _strict_gap_on(segs, x, f.b, True):
                    out.add("a")
            if _monotone_on(f, f.a, x, True):
                segs = [Segment(p.left, p.right, p.slope, p.intercept)
                        for p in f.pieces]
                if _strict_gap_on(segs, f.a, x, False):
                    out.add("b")
    if orb.period == 2:
        x = min(orb.points)
        fx = max(orb.points)
        if (f.a < x and fx < f.b and _monotone_on(f, f.a, x, False)
                and _monotone_on(f, fx, f.b, False)):
            segs2 = restrict_power(f, f.a, x, 2)
            if _strict_gap_on(segs2, f.a, x, False):
                out.add("c")
    return frozenset(out)


def exceptional_census(f: PiecewiseMap, orbits: list[PeriodicOrbit]
                       ) -> dict[str, list[PeriodicOrbit]]:
    """Exceptional orbits per type, with the global exclusion facts
    enforced: at most one orbit per type, and type c rules out a and b."""
    census: dict[str, list[PeriodicOrbit]] = {"a": [], "b": [], "c": []}
    for orb in orbits:
        if not orb.continuous or orb.kind == HALF_POINT:
            continue
        tax = taxonomy(f, orb)
        if not tax.free:
            continue
        for t in tax.exceptional:
            census[t].append(orb)
    for t, lst in census.items():
        if len(lst) > 1:
            raise TaxonomyViolation(f"two orbits of exceptional type {t}")
    if census["c"] and (census["a"] or census["b"]):
        raise TaxonomyViolation("type c coexists with type a or b")
    return census


# -- basins -----------------------------------------------------------------------

@dataclass(frozen=True)
class AttractionBall:
    """Certified contraction zone around a periodic point.

    side None: a symmetric interval on which the doubled power is affine
    with slope magnitude below one, so images nest around the centre.
    side minus / plus: a one-sided interval with slope in (0, 1); the
    doubled power is increasing on a monotone window, so the interval maps
    into itself and its points converge to the centre from that side.
    """

    center: Fraction
    radius: Fraction
    period: int
    slope: Fraction
    side: Optional[str] = None

    def contains(self, y: Fraction, radius: Optional[Fraction] = None) -> bool:
        if y == self.center:
            return True
        r = self.radius if radius is None else min(self.radius, radius)
        if self.side == MINUS:
            return self.center - r < y < self.center
        if self.side == PLUS:
            return self.center < y < self.center + r
        return abs(y - self.center) < r


def attraction_atlas(f: PiecewiseMap, orbits: list[PeriodicOrbit]
                     ) -> dict[PeriodicOrbit, list[AttractionBall]]:
    """Certified contraction zones around orbit points of the given orbits."""
    atlas: dict[PeriodicOrbit, list[AttractionBall]] = {}
    turns = set(f.special_points().turning)
    for orb in orbits:
        if not orb.continuous or orb.kind == HALF_POINT:
            continue
        if any(p in turns for p in orb.points):
            continue
        balls = []
        for p in orb.points:
            try:
                u, v = monotone_window(f, p, 2 * orb.period)
            except DegenerateWindowError:
                continue
            segs = restrict_power(f, u, v, 2 * orb.period)
            home = [s for s in segs if s.left < p < s.right]
            if home:
                seg = home[0]
                if abs(seg.slope) < 1 and seg.value_at(p) == p:
                    r = min(p - seg.left, seg.right - p)
                    balls.append(AttractionBall(p, r, orb.period, seg.slope))
                continue
            left = [s for s in segs if s.right == p]
            right = [s for s in segs if s.left == p]
            if left and 0 < left[0].slope < 1 and left[0].value_at(p) == p:
                balls.append(AttractionBall(p, p - left[0].left, orb.period,
                                            left[0].slope, MINUS))
            if right and 0 < right[0].slope < 1 and right[0].value_at(p) == p:
                balls.append(AttractionBall(p, right[0].right - p, orb.period,
                                            right[0].slope, PLUS))
        if balls:
            atlas[orb] = balls
    return atlas


def attracted(f: PiecewiseMap, y: RationalLike, orb: PeriodicOrbit,
              cap: int = 10**4, *, bit_cap: int = 4096,
              atlas: Optional[dict] = None,
              horizon: int = 8) -> str:
    """Whether the orbit of y converges to the given periodic orbit.

    Yes once the orbit enters a certified contraction ball of the target (or
    lands exactly on it); no when it hits a jump, lands exactly on a
    different cycle, or enters a certified ball of a different orbit;
    unknown when the step or denominator budget runs out first.
    """
    y = as_fraction(y)
    if atlas is None:
        enumerated = periodic_points(f, horizon, max_power=2 * horizon)
        atlas = attraction_atlas(f, enumerated)
    target_points = set(orb.points)
    seen: dict[Fraction, int] = {}
    trail: list[Fraction] = []
    current = y
    for _ in range(cap):
        if current in seen:
            cycle = set(trail[seen[current]:])
            return "yes" if cycle == target_points else "no"
        if current.denominator.bit_length() > bit_cap:
            return "unknown"
        for other, balls in atlas.items():
            for ball in balls:
                if ball.contains(current):
                    same = set(other.points) == target_points
                    return "yes" if same else "no"
        seen[current] = len(trail)
        trail.append(current)
        nxt = f.value(current)
        if nxt is None:
            return "no"
        current = nxt
    return "unknown"


@dataclass(frozen=True)
class BasinWitness:
    w: Fraction
    side: str
    delta: Fraction
    target: PeriodicOrbit
    w_attracted: bool
    iterates: int


def basin_adjacent_special(f: PiecewiseMap, orb: PeriodicOrbit
                           ) -> list[BasinWitness]:
    """Constructive one-sided basin intervals at a special point, for a
    free, non-exceptional orbit.

    Pushes a window edge where the 2n-th iterate stays on one side of the
    diagonal forward until it lands on a special point w; the image of the
    pushed interval is then a one-sided neighbourhood of w inside the basin.
    The w endpoint itself is attracted exactly when it is not a lateral
    fixed point of the 2n-th iterate.
    """
    if not f.special_points().points:
        raise PreconditionError("needs at least one special point")
    tax = taxonomy(f, orb)
    if not tax.free:
        raise PreconditionError("basin construction needs a free orbit")
    if tax.exceptional:
        raise PreconditionError("orbit is exceptional")
    n = orb.period
    turns = set(f.special_points().turning)
    witnesses = []
    for xk in orb.points:
        u, v = monotone_window(f, xk, 2 * n)
        segs = restrict_power(f, u, v, 2 * n)
        if u != f.a and _strict_gap_on(segs, u, xk, False):
            wit = _push_edge(f, orb, xk, u, side_right=False, turns=turns, n=n)
            if wit:
                witnesses.append(wit)
        if v != f.b and _strict_gap_on(segs, xk, v, True):
            wit = _push_edge(f, orb, xk, v, side_right=True, turns=turns, n=n)
            if wit:
                witnesses.append(wit)
    if not witnesses:
        raise TaxonomyViolation(
            f"no one-sided basin edge found for free orbit {orb.points}")
    return witnesses


def _push_edge(f, orb, xk, edge, side_right, turns, n) -> Optional[BasinWitness]:
    specials = set(f.special_points().points)
    current = edge
    inner = xk
    for j in range(2 * n + 1):
        if current in specials:
            return _make_witness(f, orb, current, inner, turns, n, j)
        nxt = f.value(current)
        if nxt is None:
            return None
        current = nxt
        inner = f.value(inner)
        lo, hi = (inner, current) if inner <= current else (current, inner)
        hit = [s for s in specials if lo < s < hi]
        if hit:
            # the pushed interval already covers a special point; shrink to it
            w = min(hit, key=lambda s: abs(s - current))
            return _make_witness(f, orb, w, inner, turns, n, j + 1)
    return None


def _make_witness(f, orb, w, inner, turns, n, iterates) -> BasinWitness:
    side = MINUS if inner < w else PLUS
    delta = abs(w - inner)
    lat = _lateral_power(f, w, side, 2 * n)
    w_attr = lat != w
    if w in turns:
        # the far side folds onto the constructed side; its image must nest
        # inside the constructed basin interval, and the fold formula only
        # holds within the branch adjacent to w, so clip to that branch
        if side == PLUS:
            here, far = f.piece_right_of(w), f.piece_left_of(w)
            far_room = w - far.left
        else:
            here, far = f.piece_left_of(w), f.piece_right_of(w)
            far_room = far.right - w
        delta = min(delta, delta * abs(here.slope) / abs(far.slope), far_room)
        return BasinWitness(w, "both", delta, orb, w_attr, iterates)
    return BasinWitness(w, side, delta, orb, w_attr, iterates)


def _lateral_power(f: PiecewiseMap, w: Fraction, side: str, m: int) -> Fraction:
    """One-sided limit of the m-th iterate at w, by germ transport."""
    g = Germ(w, side)
    for _ in range(m):
        g = germ_step(f, g).next
    return g.point


# -- counting bound -----------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    count_found: int
    horizon: int
    n_t: int
    n_d: int
    bound: int
    holds: bool
    orbits: tuple[PeriodicOrbit, ...]

    def to_dict(self) -> dict:
        return {"count": self.count_found, "horizon": self.horizon,
                "N_T": self.n_t, "N_D": self.n_d, "bound": self.bound,
                "holds": self.holds,
                "orbits": [[str(p) for p in o.points] for o in self.orbits]}


def count_bound(f: PiecewiseMap, horizon: int = 8, *,
                orbits: Optional[list[PeriodicOrbit]] = None) -> BoundReport:
    """Count continuous periodic orbits that are stable or semi-stable and
    not trapped, up to the period horizon, against N_T + 2 N_D + 2.

    The search horizon can only under-count, so a violated bound is a
    genuine counterexample.
    """
    special = f.special_points()
    if not special.points:
        raise PreconditionError("bound needs a nonempty special set")
    if orbits is None:
        orbits = periodic_points(f, horizon, max_power=2 * horizon)
    turns = set(special.turning)
    counted = []
    for orb in orbits:
        if not orb.continuous or orb.kind == HALF_POINT:
            continue
        cls = classify_point(f, orb.representative, require_confined=False)
        if cls not in (STABLE, SEMI_STABLE):
            continue
        critical = any(p in turns for p in orb.points)
        boundary = any(p in (f.a, f.b) for p in orb.points)
        if not critical and not boundary and orb.kind != INTERVAL_FAMILY:
            if is_trapped(f, orb).trapped:
                continue
        if orb.kind == INTERVAL_FAMILY:
            continue
        counted.append(orb)
    n_t, n_d = len(special.turning), len(special.discontinuities)
    bound = n_t + 2 * n_d + 2
    return BoundReport(len(counted), horizon, n_t, n_d, bound,
                       len(counted) <= bound, tuple(counted))
