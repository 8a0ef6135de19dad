"""Forward dynamics: variants, orbits, branching structures, germs.

A map is undefined at its jump points, so forward dynamics branch there: a
variant resolves every jump to one side, a structure is the union of all
variant orbits, and a germ (point plus side) transports one-sided
neighbourhoods exactly through the affine branches.  Periodic behaviour
splits into three kinds, all enumerated here: isolated cycles of points,
whole intervals of fixed points of a power (slope-1 pieces), and half-point
cycles anchored at a jump, detected through germ orbits because the map
itself has no value there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .maps import (MINUS, PLUS, PiecewiseMap, PwdynError, RationalLike, Side,
                   as_fraction, opposite)

DENOM_BIT_CAP = 4096
STRUCTURE_CAP = 10**4
VARIANT_BIT_LIMIT = 20


class VariantLimitError(PwdynError):
    """Too many jump points to enumerate all variants."""


def _bits(x: Fraction) -> int:
    return x.denominator.bit_length()


@dataclass(frozen=True)
class VariantSelector:
    """A side choice at every jump point, inducing a total map."""

    choice: tuple[tuple[Fraction, Side], ...]

    @classmethod
    def from_dict(cls, mapping: dict[Fraction, Side]) -> "VariantSelector":
        return cls(tuple(sorted(mapping.items())))

    def side_at(self, w: Fraction) -> Side:
        for point, side in self.choice:
            if point == w:
                return side
        raise KeyError(f"{w} is not a jump point of this selector")

    def bits(self) -> str:
        return "".join("1" if side == PLUS else "0" for _, side in self.choice)


def variants(f: PiecewiseMap, *, bit_limit: int = VARIANT_BIT_LIMIT
             ) -> list[VariantSelector]:
    """All side selectors, ordered lexicographically in (point, side)."""
    jumps = f.special_points().discontinuities
    if len(jumps) > bit_limit:
        raise VariantLimitError(
            f"{len(jumps)} jump points exceed the {bit_limit}-bit limit")
    out = []
    for sides in itertools.product((MINUS, PLUS), repeat=len(jumps)):
        out.append(VariantSelector(tuple(zip(jumps, sides))))
    return out


def variant_step(f: PiecewiseMap, x: Fraction, sel: VariantSelector) -> Fraction:
    v = f.value(x)
    if v is not None:
        return v
    return f.lateral(x, sel.side_at(x))


@dataclass(frozen=True)
class OrbitResult:
    prefix: tuple[Fraction, ...]
    cycle: Optional[tuple[Fraction, ...]]
    steps_used: int
    truncated: bool
    cap: Optional[int] = None

    @property
    def eventually_periodic(self) -> bool:
        return self.cycle is not None


def orbit(f: PiecewiseMap, x: RationalLike, sel: VariantSelector,
          cap: int = 10**4, *, bit_cap: int = DENOM_BIT_CAP) -> OrbitResult:
    """Exact forward orbit of one variant, with repetition detection."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    x = as_fraction(x)
    seen: dict[Fraction, int] = {}
    points: list[Fraction] = []
    current = x
    for step in range(cap):
        if current in seen:
            i = seen[current]
            return OrbitResult(tuple(points[:i]), tuple(points[i:]),
                               step, False)
        if _bits(current) > bit_cap:
            return OrbitResult(tuple(points), None, step, True, bit_cap)
        seen[current] = len(points)
        points.append(current)
        current = variant_step(f, current, sel)
    return OrbitResult(tuple(points), None, cap, True, cap)


@dataclass(frozen=True)
class StructureGraph:
    """The branching forward-orbit set of a point, with jump edges split."""

    root: Fraction
    nodes: tuple[Fraction, ...]
    edges: tuple[tuple[Fraction, Optional[Side], Fraction], ...]
    closed: bool
    truncated: bool

    def successors(self, x: Fraction) -> list[tuple[Optional[Side], Fraction]]:
        return [(side, dst) for src, side, dst in self.edges if src == x]

    def node_set(self) -> frozenset:
        cached = getattr(self, "_node_set", None)
        if cached is None:
            cached = frozenset(self.nodes)
            object.__setattr__(self, "_node_set", cached)
        return cached

    def __contains__(self, x) -> bool:
        return as_fraction(x) in self.node_set()


def structure(f: PiecewiseMap, x: RationalLike, cap: int = STRUCTURE_CAP, *,
              bit_cap: int = DENOM_BIT_CAP) -> StructureGraph:
    """Breadth-first expansion of all variant orbits from x.

    Closed means the expansion terminated with a finite node set; hitting
    the node cap or the denominator bit cap reports closed=False with the
    truncated flag set.
    """
    x = as_fraction(x)
    jumps = set(f.special_points().discontinuities)
    nodes = {x}
    edges = []
    frontier = [x]
    truncated = False
    while frontier:
        nxt = []
        for p in frontier:
            if p in jumps:
                succ = [(MINUS, f.lateral(p, MINUS)), (PLUS, f.lateral(p, PLUS))]
            else:
                succ = [(None, f.value(p))]
            for side, q in succ:
                edges.append((p, side, q))
                if q in nodes:
                    continue
                if len(nodes) >= cap or _bits(q) > bit_cap:
                    truncated = True
                    continue
                nodes.add(q)
                nxt.append(q)
        frontier = nxt
    return StructureGraph(x, tuple(sorted(nodes)), tuple(edges),
                          closed=not truncated, truncated=truncated)


# -- germ dynamics -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class Germ:
    """A point with a side: the stand-in for a one-sided neighbourhood."""

    point: Fraction
    side: Side

    def validate(self, f: PiecewiseMap) -> None:
        if not f.a <= self.point <= f.b:
            raise ValueError(f"{self.point} outside [{f.a}, {f.b}]")
        if self.point == f.a and self.side == MINUS:
            raise ValueError("no left-hand germ at the left endpoint")
        if self.point == f.b and self.side == PLUS:
            raise ValueError("no right-hand germ at the right endpoint")


@dataclass(frozen=True)
class GermStepResult:
    next: Germ
    slope_magnitude: Fraction


def germ_step(f: PiecewiseMap, g: Germ) -> GermStepResult:
    """Transport a one-sided neighbourhood through its adjacent branch.

    The side flips exactly when the branch decreases.
    """
    g = Germ(as_fraction(g.point), g.side)
    g.validate(f)
    if g.side == PLUS:
        branch = f.piece_right_of(g.point)
    else:
        branch = f.piece_left_of(g.point)
    point = branch.value_at(g.point)
    side = g.side if branch.slope > 0 else opposite(g.side)
    return GermStepResult(Germ(point, side), abs(branch.slope))


@dataclass(frozen=True)
class GermOrbit:
    """Germ orbit up to (and including) the first repeated germ.

    germs[preperiod + period] == germs[preperiod] when a cycle was found;
    slopes[i] is the branch slope magnitude of the step germs[i] ->
    germs[i+1].
    """

    germs: tuple[Germ, ...]
    slopes: tuple[Fraction, ...]
    preperiod: int
    period: int
    truncated: bool

    @property
    def cycle(self) -> tuple[Germ, ...]:
        return self.germs[self.preperiod:self.preperiod + self.period]

    @property
    def cycle_product(self) -> Fraction:
        prod = Fraction(1)
        for s in self.slopes[self.preperiod:self.preperiod + self.period]:
            prod *= s
        return prod


def germ_orbit(f: PiecewiseMap, g: Germ, cap: int = 10**4, *,
               bit_cap: int = DENOM_BIT_CAP) -> GermOrbit:
    """Iterate germ_step with exact (point, side) cycle detection."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    g = Germ(as_fraction(g.point), g.side)
    g.validate(f)
    seen: dict[Germ, int] = {}
    germs: list[Germ] = []
    slopes: list[Fraction] = []
    current = g
    for _ in range(cap):
        if current in seen:
            i = seen[current]
            germs.append(current)
            return GermOrbit(tuple(germs), tuple(slopes), i,
                             len(germs) - 1 - i, False)
        if _bits(current.point) > bit_cap:
            break
        seen[current] = len(germs)
        germs.append(current)
        step = germ_step(f, current)
        slopes.append(step.slope_magnitude)
        current = step.next
    return GermOrbit(tuple(germs), tuple(slopes), len(germs), 0, True)


# -- periodic orbits ---------------------------------------------------------

POINT = "point"
INTERVAL_FAMILY = "interval_family"
HALF_POINT = "half_point"


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit: an isolated cycle, a fixed-interval family of a
    power (represented by the midpoint orbit), or a half-point cycle
    anchored at a jump."""

    points: tuple[Fraction, ...]
    period: int
    selector: Optional[VariantSelector]
    continuous: bool
    kind: str = POINT
    intervals: tuple[tuple[Fraction, Fraction], ...] = ()
    interval_closed: tuple[bool, bool] = (False, False)
    anchor_side: Optional[Side] = None

    @property
    def representative(self) -> Fraction:
        return self.points[0]

    def key(self):
        return (self.kind, frozenset(self.points), frozenset(self.intervals))


def _stepwise_orbit(f: PiecewiseMap, x: Fraction, n: int
                    ) -> Optional[list[Fraction]]:
    """n forward values of x, or None if the chain hits a jump."""
    out = [x]
    for _ in range(n):
        v = f.value(out[-1])
        if v is None:
            return None
        out.append(v)
    return out


def _minimal_period(f: PiecewiseMap, x: Fraction, n: int) -> Optional[int]:
    """Minimal period of x if it is a genuine period-n point, else None."""
    chain = _stepwise_orbit(f, x, n)
    if chain is None or chain[-1] != x:
        return None
    for d in range(1, n):
        if n % d == 0 and chain[d] == x:
            return d
    return n


def _jump_hits(f: PiecewiseMap, lo: Fraction, hi: Fraction, n: int
               ) -> list[Fraction]:
    """Points of (lo, hi) whose first n-1 iterates (or themselves) land on
    a jump, i.e. where stepwise orbits of length n are undefined."""
    level = set(f.special_points().discontinuities)
    acc = {x for x in level if lo < x < hi}
    for _ in range(n - 1):
        level = {x for y in level for x in f.preimage(y)}
        acc |= {x for x in level if lo < x < hi}
    return sorted(acc)


def _family_intervals(f: PiecewiseMap, lo: Fraction, hi: Fraction, n: int
                      ) -> list[tuple[Fraction, Fraction]]:
    """Image chain of a fixed-interval family under single steps."""
    out = [(lo, hi)]
    for _ in range(n - 1):
        p, q = out[-1]
        v1 = f.lateral(p, PLUS)
        v2 = f.lateral(q, MINUS)
        out.append((v1, v2) if v1 <= v2 else (v2, v1))
    return out


def periodic_points(f: PiecewiseMap, max_period: int, *,
                    max_power: Optional[int] = None,
                    guard: int = 10**6,
                    include_half_points: bool = True) -> list[PeriodicOrbit]:
    """All periodic orbits of period <= max_period.

    Solves slope*x + intercept = x on each piece of each exact power:
    isolated points where the slope differs from 1, whole fixed intervals
    where a piece of the power is the identity (split at points whose
    stepwise orbits hit a jump), plus breakpoint and endpoint fixed points.
    Half-point cycles at jumps are found through germ orbits.  Each orbit is
    reported once, at its minimal period, with its continuity flag.
    """
    limit = max_power if max_power is not None else 12
    if not 1 <= max_period <= limit // 2:
        raise ValueError(
            f"max_period must lie in [1, {limit // 2}] (configured power limit)")
    jumps = set(f.special_points().discontinuities)
    turns = set(f.special_points().turning)
    found: dict = {}

    def add(orb: PeriodicOrbit) -> None:
        found.setdefault(orb.key(), orb)

    for n in range(1, max_period + 1):
        fn = f.power(n, max_power=limit, guard=guard, check=False)
        n_families: list[PeriodicOrbit] = []
        collect = lambda orb: (n_families.append(orb), add(orb))  # noqa: E731
        candidates = set()
        for piece in fn.pieces:
            if piece.slope == 1:
                if piece.intercept == 0:
                    _collect_families(f, n, piece.left, piece.right, collect)
                continue
            x = piece.intercept / (1 - piece.slope)
            if piece.left < x < piece.right:
                candidates.add(x)
        for w in (fn.a, fn.b, *fn.breakpoints):
            if fn.value(w) == w:
                candidates.add(w)
        for x in sorted(candidates):
            if _minimal_period(f, x, n) != n:
                continue
            if _inside_family(x, n_families, f):
                continue
            chain = _stepwise_orbit(f, x, n)
            cycle = tuple(chain[:n])
            continuous = not any(p in jumps for p in cycle)
            add(PeriodicOrbit(cycle, n, None, continuous, POINT))

    if include_half_points:
        for w in sorted(jumps):
            for side in (MINUS, PLUS):
                orb = _half_point_cycle(f, w, side, max_period, jumps)
                if orb is not None:
                    add(orb)

    return sorted(found.values(),
                  key=lambda o: (o.period, o.kind, o.points[0], o.points))


def _inside_family(x: Fraction, families: list[PeriodicOrbit],
                   f: PiecewiseMap) -> bool:
    """True if x is already represented by an interval family: strictly
    inside one of its intervals, or a domain endpoint closing one.  An
    interior family boundary stays a separate orbit because its stability
    can differ from the family's."""
    for fam in families:
        for lo, hi in fam.intervals:
            if lo < x < hi:
                return True
            if x in (lo, hi) and x in (f.a, f.b):
                return True
    return False


def _endpoint_fixed(f: PiecewiseMap, e: Fraction, n: int) -> bool:
    chain = _stepwise_orbit(f, e, n)
    return chain is not None and chain[-1] == e


def _collect_families(f, n, left, right, add) -> None:
    """Split an identity piece of the n-th power into interval families.

    The piece is cut at points whose stepwise orbits hit a jump and at every
    fixed point of a proper divisor power (isolated ones become cut points,
    identity pieces of the divisor become blocked sub-intervals), so every
    reported family has uniform minimal period n.
    """
    cuts = set(_jump_hits(f, left, right, n))
    blocked: list[tuple[Fraction, Fraction]] = []
    for d in range(1, n):
        if n % d != 0:
            continue
        fd = f.power(d, check=False)
        for piece in fd.pieces:
            if piece.right <= left or piece.left >= right:
                continue
            if piece.slope == 1 and piece.intercept == 0:
                blocked.append((max(left, piece.left), min(right, piece.right)))
            elif piece.slope != 1:
                x = piece.intercept / (1 - piece.slope)
                if piece.left < x < piece.right and left < x < right:
                    cuts.add(x)
        for w in (fd.a, fd.b, *fd.breakpoints):
            if left < w < right and fd.value(w) == w:
                cuts.add(w)
    bounds = sorted({left, right} | cuts
                    | {e for pair in blocked for e in pair if left < e < right})
    for lo, hi in zip(bounds, bounds[1:]):
        if lo >= hi:
            continue
        mid = (lo + hi) / 2
        if any(blo <= mid <= bhi for blo, bhi in blocked):
            continue
        if _minimal_period(f, mid, n) != n:
            continue
        intervals = _family_intervals(f, lo, hi, n)
        canon = min(intervals)
        rep = (canon[0] + canon[1]) / 2
        chain = _stepwise_orbit(f, rep, n)
        closed = (_endpoint_fixed(f, canon[0], n), _endpoint_fixed(f, canon[1], n))
        add(PeriodicOrbit(tuple(chain[:n]), n, None, True, INTERVAL_FAMILY,
                          tuple(sorted(set(intervals))), closed))


def _half_point_cycle(f, w, side, max_period, jumps) -> Optional[PeriodicOrbit]:
    """Half-point cycle at a jump: the germ orbit must return to the same
    germ with no preperiod, without revisiting the anchor point on the
    opposite side (which would not be a single-variant orbit)."""
    go = germ_orbit(f, Germ(w, side), cap=4 * max_period + 8)
    if go.truncated or go.preperiod != 0 or go.period > max_period:
        return None
    cycle = go.cycle
    pts = [g.point for g in cycle]
    if pts.count(w) != 1:
        return None
    choice: dict[Fraction, Side] = {}
    for g in cycle:
        if g.point in jumps:
            if g.point in choice and choice[g.point] != g.side:
                return None
            choice[g.point] = g.side
    for j in sorted(jumps):
        choice.setdefault(j, MINUS)
    return PeriodicOrbit(tuple(pts), go.period,
                         VariantSelector.from_dict(choice),
                         continuous=False, kind=HALF_POINT, anchor_side=side)
