"""Stability of confined points, lateral connections, and rule tables.

A confined point is classified through its two germ orbits: the product of
branch slope magnitudes around a germ cycle decides whether the one-sided
neighbourhood it stands for shrinks to nothing (product below one), keeps a
fixed length (exactly one), or grows until it escapes its branches (above
one).  An independent oracle cross-checks this by iterating an actual
one-sided interval, split exactly at breakpoints, and watching the total
length of the fragments.

Connections transport classification between points of a closed structure:
four levels, depending on whether one or both germs of the source reach one
or both germs of the target.  The rule tables below state every implication
the four levels support and report violations as replayable bundles.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .maps import (MINUS, PLUS, PiecewiseMap, PwdynError, RationalLike, Side,
                   as_fraction)
from .orbits import (Germ, GermOrbit, PeriodicOrbit, StructureGraph,
                     germ_orbit, structure)

STABLE = "stable"
SEMI_STABLE = "semi_stable"
UNSTABLE = "unstable"

CONTRACTING = "contracting"
NEUTRAL = "neutral"
EXPANDING = "expanding"


class NotConfinedError(PwdynError):
    """The point's structure is not closed, so germ cycles need not exist."""


@dataclass(frozen=True)
class SideClass:
    side: Side
    verdict: str
    cycle_product: Fraction


def germs_of(f: PiecewiseMap, x: Fraction) -> list[Germ]:
    out = []
    if x > f.a:
        out.append(Germ(x, MINUS))
    if x < f.b:
        out.append(Germ(x, PLUS))
    return out


def classify_side(f: PiecewiseMap, x: RationalLike, side: Side, *,
                  require_confined: bool = True,
                  cap: int = 10**4) -> SideClass:
    """Verdict for one lateral neighbourhood from its germ cycle product."""
    x = as_fraction(x)
    if require_confined and not structure(f, x).closed:
        raise NotConfinedError(f"structure of {x} is not closed")
    go = germ_orbit(f, Germ(x, side), cap=cap)
    if go.truncated:
        raise NotConfinedError(f"germ orbit of ({x}, {side}) found no cycle")
    product = go.cycle_product
    if product < 1:
        verdict = CONTRACTING
    elif product == 1:
        verdict = NEUTRAL
    else:
        verdict = EXPANDING
    return SideClass(side, verdict, product)


def combine_sides(left: Optional[SideClass], right: Optional[SideClass]) -> str:
    """Two-sided class from per-side verdicts.

    At an endpoint only the inward side exists and decides between stable
    and unstable; a single neutral or expanding side already rules out
    stability of any neighbourhood.
    """
    sides = [s for s in (left, right) if s is not None]
    contracting = sum(1 for s in sides if s.verdict == CONTRACTING)
    if contracting == len(sides):
        return STABLE
    if len(sides) == 2 and contracting == 1:
        return SEMI_STABLE
    return UNSTABLE


def classify_point(f: PiecewiseMap, x: RationalLike, *,
                   require_confined: bool = True) -> str:
    x = as_fraction(x)
    if require_confined and not structure(f, x).closed:
        raise NotConfinedError(f"structure of {x} is not closed")
    left = classify_side(f, x, MINUS, require_confined=False) if x > f.a else None
    right = classify_side(f, x, PLUS, require_confined=False) if x < f.b else None
    return combine_sides(left, right)


# -- interval-iteration oracle ------------------------------------------------

def _merge_intervals(parts: list[tuple[Fraction, Fraction]]
                     ) -> list[tuple[Fraction, Fraction]]:
    parts = sorted(p for p in parts if p[0] < p[1])
    out: list[tuple[Fraction, Fraction]] = []
    for lo, hi in parts:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _step_intervals(f: PiecewiseMap, parts: list[tuple[Fraction, Fraction]]
                    ) -> list[tuple[Fraction, Fraction]]:
    cuts = [p.left for p in f.pieces[1:]]
    out = []
    for lo, hi in parts:
        inner = cuts[bisect_right(cuts, lo):bisect_left(cuts, hi)]
        bounds = [lo] + inner + [hi]
        for p, q in zip(bounds, bounds[1:]):
            piece = f.pieces[bisect_right(f._lefts, (p + q) / 2) - 1]
            v1, v2 = piece.value_at(p), piece.value_at(q)
            out.append((v1, v2) if v1 <= v2 else (v2, v1))
    return _merge_intervals(out)


def _total_length(parts) -> Fraction:
    return sum((hi - lo for lo, hi in parts), Fraction(0))


def _gap_to_specials(f: PiecewiseMap, x: Fraction) -> Fraction:
    others = [p for p in (*f.special_points().points, f.a, f.b) if p != x]
    if not others:
        return f.b - f.a
    return min(abs(p - x) for p in others)


def lateral_oracle(f: PiecewiseMap, x: RationalLike, side: Side, *,
                   delta: Optional[Fraction] = None, max_steps: int = 10**4,
                   stride: int = 1) -> str:
    """Brute-force verdict for one lateral neighbourhood.

    Iterates the actual closed interval of width delta (default
    2^-20 * (b - a), clipped to a quarter of the distance to the nearest
    other special point so the witness interval starts inside a single
    branch).  Contracting once the total fragment length falls below
    2^-20 * delta, expanding once it exceeds 2^10 * delta, neutral on exact
    state repetition.  With stride > 1 the thresholds are only consulted
    every stride steps, which is the subsampled stability criterion.
    """
    x = as_fraction(x)
    base = delta if delta is not None else (f.b - f.a) * Fraction(1, 2**20)
    eff = min(base, _gap_to_specials(f, x) / 4)
    for _ in range(8):
        verdict = _run_oracle(f, x, side, eff, max_steps, stride, final=False)
        if verdict != "restart":
            return verdict
        eff = eff / 32
    return _run_oracle(f, x, side, eff, max_steps, stride, final=True)


def _run_oracle(f, x, side, delta, max_steps, stride, final) -> str:
    thresh = delta * Fraction(1, 2**20)
    floor = delta * 2**10
    if side == PLUS:
        state = [(x, min(x + delta, f.b))]
    else:
        state = [(max(x - delta, f.a), x)]
    start = _total_length(state)
    seen = {}
    for step in range(1, max_steps + 1):
        state = _step_intervals(f, state)
        if len(state) > 256:
            return EXPANDING
        length = _total_length(state)
        if not final and len(state) > 1 and length <= floor:
            return "restart"
        if step % stride:
            continue
        if length < thresh:
            return CONTRACTING
        if length > floor:
            return EXPANDING
        key = tuple(state)
        if key in seen:
            return NEUTRAL
        seen[key] = step
    return CONTRACTING if _total_length(state) < start / 2 else NEUTRAL


def oracle_classify(f: PiecewiseMap, x: RationalLike, *,
                    delta: Optional[Fraction] = None,
                    max_steps: int = 10**4, stride: int = 1) -> str:
    """Two-sided class from the interval oracle alone."""
    x = as_fraction(x)
    left = right = None
    if x > f.a:
        left = SideClass(MINUS, lateral_oracle(
            f, x, MINUS, delta=delta, max_steps=max_steps, stride=stride),
            Fraction(0))
    if x < f.b:
        right = SideClass(PLUS, lateral_oracle(
            f, x, PLUS, delta=delta, max_steps=max_steps, stride=stride),
            Fraction(0))
    return combine_sides(left, right)


# -- connections ---------------------------------------------------------------

@dataclass(frozen=True)
class Connection:
    source: Fraction
    target: Fraction
    level: int
    iterates: tuple[int, ...]
    germs: tuple[Germ, ...]


class _GermTable:
    """Cached germ orbits and landing indices for one map."""

    def __init__(self, f: PiecewiseMap):
        self.f = f
        self._orbits: dict[Germ, GermOrbit] = {}
        self._index: dict[Germ, dict[Fraction, dict[Side, int]]] = {}

    def orbit(self, g: Germ) -> GermOrbit:
        if g not in self._orbits:
            self._orbits[g] = germ_orbit(self.f, g)
        return self._orbits[g]

    def landings(self, g: Germ, z: Fraction) -> dict[Side, int]:
        """Earliest iterate count at which the germ orbit of g sits at z,
        per arrival side, within one full cycle."""
        if g not in self._index:
            idx: dict[Fraction, dict[Side, int]] = {}
            for k, gk in enumerate(self.orbit(g).germs):
                idx.setdefault(gk.point, {}).setdefault(gk.side, k)
            self._index[g] = idx
        return self._index[g].get(z, {})


def find_connection(f: PiecewiseMap, struct: StructureGraph, y: RationalLike,
                    z: RationalLike, level: int,
                    table: Optional[_GermTable] = None) -> Optional[Connection]:
    """Search germ orbits for a level 1..4 connection from y to z.

    Level 1: some germ of y reaches some germ of z.  Level 2: one germ of y
    reaches both germs of z.  Level 3: both germs of y reach the same germ
    of z.  Level 4: both germs of y reach opposite germs of z.
    """
    y, z = as_fraction(y), as_fraction(z)
    if y not in struct or z not in struct:
        raise ValueError("both points must be nodes of the structure")
    if not struct.closed:
        raise NotConfinedError("structure is not closed")
    table = table or _GermTable(f)
    ygerms = germs_of(f, y)
    if level == 1:
        for g in ygerms:
            lands = table.landings(g, z)
            if lands:
                side = min(lands, key=lambda s: lands[s])
                return Connection(y, z, 1, (lands[side],), (g,))
        return None
    if level == 2:
        if not f.a < z < f.b:
            return None
        for g in ygerms:
            lands = table.landings(g, z)
            if MINUS in lands and PLUS in lands:
                return Connection(y, z, 2, (lands[MINUS], lands[PLUS]), (g,))
        return None
    if len(ygerms) < 2:
        return None
    lminus = table.landings(ygerms[0], z)
    lplus = table.landings(ygerms[1], z)
    if level == 3:
        for side in (MINUS, PLUS):
            if side in lminus and side in lplus:
                return Connection(y, z, 3, (lminus[side], lplus[side]),
                                  tuple(ygerms))
        return None
    if level == 4:
        if not f.a < z < f.b:
            return None
        if MINUS in lminus and PLUS in lplus:
            return Connection(y, z, 4, (lminus[MINUS], lplus[PLUS]),
                              tuple(ygerms))
        if PLUS in lminus and MINUS in lplus:
            return Connection(y, z, 4, (lminus[PLUS], lplus[MINUS]),
                              tuple(ygerms))
        return None
    raise ValueError("level must be 1, 2, 3, or 4")


# -- rule tables ----------------------------------------------------------------

@dataclass(frozen=True)
class RuleViolation:
    rule: str
    x: Fraction
    y: Fraction
    detail: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "x": str(self.x), "y": str(self.y),
                "detail": self.detail}


@dataclass
class PropagationReport:
    root: Fraction
    verdicts: dict[Fraction, str]
    checked: int
    violations: list[RuleViolation] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


def _successors(struct: StructureGraph) -> dict[Fraction, list[Fraction]]:
    succ: dict[Fraction, list[Fraction]] = {}
    for src, _, dst in struct.edges:
        succ.setdefault(src, []).append(dst)
    return succ


def _reachable(struct: StructureGraph, x: Fraction,
               succ: Optional[dict] = None) -> set[Fraction]:
    succ = succ if succ is not None else _successors(struct)
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for p in frontier:
            for q in succ.get(p, []):
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def stability_propagation_report(f: PiecewiseMap, struct: StructureGraph
                                 ) -> PropagationReport:
    """Check every connection-based stability implication on a closed
    structure: fourteen clauses over all ordered node pairs."""
    if not struct.closed:
        raise NotConfinedError("structure is not closed")
    table = _GermTable(f)
    side_classes: dict[tuple[Fraction, Side], SideClass] = {}
    for p in struct.nodes:
        for g in germs_of(f, p):
            side_classes[(p, g.side)] = classify_side(
                f, p, g.side, require_confined=False)
    verdicts = {
        p: combine_sides(side_classes.get((p, MINUS)),
                         side_classes.get((p, PLUS)))
        for p in struct.nodes}
    conn: dict[tuple[Fraction, Fraction, int], Optional[Connection]] = {}

    def has(y, z, level):
        key = (y, z, level)
        if key not in conn:
            conn[key] = find_connection(f, struct, y, z, level, table)
        return conn[key] is not None

    report = PropagationReport(struct.root, verdicts, 0)

    def flag(rule, x, y, detail):
        report.violations.append(RuleViolation(rule, x, y, detail))

    succ = _successors(struct)
    for x in struct.nodes:
        cx = verdicts[x]
        inside = _reachable(struct, x, succ)
        for y in struct.nodes:
            if y not in inside:
                continue
            report.checked += 1
            cy = verdicts[y]
            strong = (has(y, x, 4) or has(y, x, 3) or has(x, y, 4)
                      or has(x, y, 2))
            weak = (has(y, x, 2) or has(y, x, 1) or has(x, y, 3)
                    or has(x, y, 1))
            if cx == STABLE:
                if strong and cy != STABLE:
                    flag("stable_strong", x, y, f"expected stable, got {cy}")
                if weak and cy == UNSTABLE:
                    flag("stable_weak", x, y, "expected not unstable")
            elif cx == UNSTABLE:
                if strong and cy != UNSTABLE:
                    flag("unstable_strong", x, y, f"expected unstable, got {cy}")
                if weak and cy == STABLE:
                    flag("unstable_weak", x, y, "expected not stable")
            else:
                sides = {s: side_classes[(x, s)] for s in (MINUS, PLUS)
                         if (x, s) in side_classes}
                _check_semi_clauses(f, table, x, y, cy, sides, has, flag)
    for (y, z, level), c in conn.items():
        if level == 4 and c is not None:
            # a full-neighbourhood witness implies a lateral one per germ
            if any(not table.landings(g, z) for g in germs_of(f, y)):
                flag("level_monotonicity", y, z,
                     "level 4 connection without level 1 from each germ")
    return report


def _check_semi_clauses(f, table, x, y, cy, sides, has, flag) -> None:
    if has(x, y, 4) and cy != SEMI_STABLE:
        flag("semi_x4y", x, y, f"expected semi_stable, got {cy}")
    if has(y, x, 4) and cy != SEMI_STABLE:
        flag("semi_y4x", x, y, f"expected semi_stable, got {cy}")
    if has(y, x, 3) and cy == SEMI_STABLE:
        flag("semi_y3x", x, y, "expected not semi_stable")
    if has(x, y, 2) and cy == SEMI_STABLE:
        flag("semi_x2y", x, y, "expected not semi_stable")
    if has(x, y, 3):
        flag("semi_x3y_impossible", x, y, "level 3 from a semi-stable point")
    if has(y, x, 2):
        flag("semi_y2x_impossible", x, y, "level 2 onto a semi-stable point")
    stable_sides = [s for s, c in sides.items() if c.verdict == CONTRACTING]
    unstable_sides = [s for s, c in sides.items() if c.verdict != CONTRACTING]
    for s in stable_sides:
        if table.landings(Germ(x, s), y) and cy == UNSTABLE:
            flag("semi_stable_side_forward", x, y,
                 "stable lateral neighbourhood reaches an unstable point")
    for s in unstable_sides:
        if table.landings(Germ(x, s), y) and cy == STABLE:
            flag("semi_unstable_side_forward", x, y,
                 "unstable lateral neighbourhood reaches a stable point")
    for g in germs_of(f, y):
        lands = table.landings(g, x)
        for s, cls in sides.items():
            if s in lands:
                if cls.verdict == CONTRACTING and cy == UNSTABLE:
                    flag("semi_stable_side_backward", x, y,
                         "a lateral neighbourhood of y lands on the stable side")
                if cls.verdict != CONTRACTING and cy == STABLE:
                    flag("semi_unstable_side_backward", x, y,
                         "a lateral neighbourhood of y lands on the unstable side")


# -- cycle-level rules -----------------------------------------------------------

@dataclass
class CycleRuleReport:
    root: Fraction
    verdicts: dict[Fraction, str]
    cycles: list[tuple[Fraction, ...]]
    completely_periodic: bool
    core: tuple[Fraction, ...]
    core_choice_matters: bool
    violations: list[RuleViolation] = field(default_factory=list)
    applied: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


class CycleBudgetError(PwdynError):
    """Cycle enumeration on a structure exceeded its budget."""


def _graph_cycles(struct: StructureGraph, limit: int = 4000
                  ) -> list[tuple[Fraction, ...]]:
    """All simple directed cycles, each rotated to start at its least point.

    Simple cycles can be exponentially many on branching structures, so the
    enumeration aborts past the limit instead of hanging.
    """
    succ: dict[Fraction, list[Fraction]] = {}
    for src, _, dst in struct.edges:
        succ.setdefault(src, []).append(dst)
    cycles = set()
    steps = [0]

    def dfs(path: list[Fraction], seen: set[Fraction]):
        steps[0] += 1
        if steps[0] > limit * 8 or len(cycles) > limit:
            raise CycleBudgetError(
                f"more than {limit} simple cycles or {limit * 8} steps")
        for q in succ.get(path[-1], []):
            if q == path[0]:
                i = path.index(min(path))
                cycles.add(tuple(path[i:] + path[:i]))
            elif q not in seen:
                dfs(path + [q], seen | {q})

    for start in struct.nodes:
        dfs([start], {start})
    return sorted(cycles)


def cycle_stability_report(f: PiecewiseMap, struct: StructureGraph, *,
                           max_nodes: int = 64) -> CycleRuleReport:
    """Verify the cycle-level propagation rules on a closed structure:
    single-jump cycles, twin half-point cycles at one jump, completely
    periodic structures with a nonempty core, and continuous cycles."""
    if not struct.closed:
        raise NotConfinedError("structure is not closed")
    if len(struct.nodes) > max_nodes:
        raise CycleBudgetError(
            f"structure has {len(struct.nodes)} nodes, over the "
            f"{max_nodes}-node cycle analysis budget")
    verdicts = {p: classify_point(f, p, require_confined=False)
                for p in struct.nodes}
    cycles = _graph_cycles(struct)
    on_cycle = {p for cyc in cycles for p in cyc}
    completely_periodic = set(struct.nodes) <= on_cycle
    core: tuple[Fraction, ...] = ()
    choice_matters = False
    if completely_periodic and cycles:
        inter = set(cycles[0])
        for cyc in cycles[1:]:
            inter &= set(cyc)
        core = tuple(sorted(inter))
        counts = {p: sum(p in cyc for cyc in cycles) for p in struct.nodes}
        choice_matters = any(c > 1 for c in counts.values())
    report = CycleRuleReport(struct.root, verdicts, cycles,
                             completely_periodic, core, choice_matters)
    jumps = set(f.special_points().discontinuities) & set(struct.nodes)
    turns = set(f.special_points().turning)

    def flag(rule, x, y, detail):
        report.violations.append(RuleViolation(rule, x, y, detail))

    for cyc in cycles:
        _check_single_jump_cycle(f, cyc, jumps, turns, verdicts, report, flag)
        if not any(p in jumps for p in cyc):
            report.applied.append("continuous_cycle")
            classes = {verdicts[p] for p in cyc}
            if len(classes) > 1:
                flag("continuous_cycle_uniform", cyc[0], cyc[0],
                     f"mixed classes {sorted(classes)} along a continuous cycle")

    if len(jumps) == 1:
        _check_twin_half_cycles(f, next(iter(jumps)), struct, verdicts,
                                report, flag)
    if completely_periodic and core:
        report.applied.append("core")
        for z in core:
            cz = verdicts[z]
            if cz == STABLE and any(verdicts[p] != STABLE for p in struct.nodes):
                flag("core_stable", z, z, "stable core with non-stable node")
            if cz == UNSTABLE and any(verdicts[p] != UNSTABLE
                                      for p in struct.nodes):
                flag("core_unstable", z, z, "unstable core with non-unstable node")
            if cz == SEMI_STABLE and any(verdicts[p] != SEMI_STABLE
                                         for p in core):
                flag("core_semi", z, z, "semi-stable core not uniform")
    if not any(p in turns for p in struct.nodes):
        report.applied.append("no_turns_uniform")
        classes = {verdicts[p] for p in struct.nodes}
        if len(classes) > 1:
            flag("no_turns_uniform", struct.root, struct.root,
                 f"mixed classes {sorted(classes)} without turning points")
    return report


def _check_single_jump_cycle(f, cyc, jumps, turns, verdicts, report, flag):
    in_cycle_jumps = [p for p in cyc if p in jumps]
    if len(in_cycle_jumps) != 1:
        return
    report.applied.append("single_jump_cycle")
    w = in_cycle_jumps[0]
    wi = cyc.index(w)
    n = len(cyc)
    for off in range(1, n):
        x = cyc[(wi + off) % n]
        # points strictly after w up to x are the b's, after x the a's
        bs = [cyc[(wi + j) % n] for j in range(1, off)]
        as_ = [cyc[(wi + off + j) % n] for j in range(1, n - off)]
        cx = verdicts[x]
        if cx == STABLE:
            for b in bs:
                if verdicts[b] != STABLE:
                    flag("single_jump_stable_b", x, b, "expected stable")
            for a in as_:
                if verdicts[a] == UNSTABLE:
                    flag("single_jump_stable_a", x, a, "expected not unstable")
            if verdicts[w] == UNSTABLE:
                flag("single_jump_stable_w", x, w, "expected not unstable")
        elif cx == UNSTABLE:
            for b in bs:
                if verdicts[b] != UNSTABLE:
                    flag("single_jump_unstable_b", x, b, "expected unstable")
            for a in as_:
                if verdicts[a] == STABLE:
                    flag("single_jump_unstable_a", x, a, "expected not stable")
            if verdicts[w] == STABLE:
                flag("single_jump_unstable_w", x, w, "expected not stable")
        else:
            for a in as_:
                if verdicts[a] != SEMI_STABLE:
                    flag("single_jump_semi_a", x, a, "expected semi_stable")
            if verdicts[w] != SEMI_STABLE:
                flag("single_jump_semi_w", x, w, "expected semi_stable")


def _check_twin_half_cycles(f, w, struct, verdicts, report, flag):
    from .orbits import _half_point_cycle  # shared detection logic
    jumps = set(f.special_points().discontinuities)
    plus_cyc = _half_point_cycle(f, w, PLUS, len(struct.nodes) + 2, jumps)
    minus_cyc = _half_point_cycle(f, w, MINUS, len(struct.nodes) + 2, jumps)
    if plus_cyc is None or minus_cyc is None:
        return
    report.applied.append("twin_half_cycles")
    inter = set(plus_cyc.points) & set(minus_cyc.points)
    nodes = struct.nodes
    for z in sorted(inter):
        cz = verdicts.get(z)
        if cz == STABLE and any(verdicts[p] != STABLE for p in nodes):
            flag("twin_stable", z, w, "stable intersection, non-stable node")
        if cz == UNSTABLE and any(verdicts[p] != UNSTABLE for p in nodes):
            flag("twin_unstable", z, w, "unstable intersection, non-unstable node")
        if cz == SEMI_STABLE:
            for y in sorted(inter):
                if verdicts[y] != SEMI_STABLE:
                    flag("twin_semi_intersection", z, y, "expected semi_stable")
            sides = {s: classify_side(f, w, s, require_confined=False).verdict
                     for s in (MINUS, PLUS)}
            stable_side = MINUS if sides[MINUS] == CONTRACTING else PLUS
            stable_cycle = minus_cyc if stable_side == MINUS else plus_cyc
            other_cycle = plus_cyc if stable_side == MINUS else minus_cyc
            ok_a = all(verdicts[p] != UNSTABLE for p in stable_cycle.points)
            ok_b = all(verdicts[p] != STABLE for p in other_cycle.points)
            if not (ok_a and ok_b):
                flag("twin_semi_split", z, w,
                     "side cycles not split into non-unstable / non-stable")


# -- subsampled stability ---------------------------------------------------------

@dataclass(frozen=True)
class SubsampleReport:
    orbit: PeriodicOrbit
    germ_class: str
    full_class: str
    subsampled_class: str

    @property
    def consistent(self) -> bool:
        return self.germ_class == self.full_class == self.subsampled_class


def subsampled_stability_report(f: PiecewiseMap, orbit: PeriodicOrbit, *,
                                max_steps: int = 10**4) -> SubsampleReport:
    """Check that watching lengths only every period-many steps gives the
    same class as watching every step, and that both match the germ verdict."""
    if not orbit.continuous:
        raise ValueError("subsampled stability needs a continuous orbit")
    x = orbit.representative
    return SubsampleReport(
        orbit,
        classify_point(f, x),
        oracle_classify(f, x, max_steps=max_steps, stride=1),
        oracle_classify(f, x, max_steps=max_steps, stride=orbit.period),
    )
