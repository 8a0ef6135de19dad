"""Seeded random map generation and the corpus-level property suite.

Every structural fact the library relies on is checked here against randomly
generated maps plus the pinned examples.  Generation is rejection sampling on
a rational grid, deterministic for a fixed seed down to the emitted map text.
Failures carry replayable bundles (map text plus a JSON context block) and a
greedy deterministic shrinker.  The slope palettes deliberately overweight
magnitude-one branches: the neutral regime is where the edge cases live.
"""

from __future__ import annotations

import json
import random
import time
import zlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .codes import (NO, UNKNOWN, YES, Certifier, CertificationError,
                    CodeUndefinedError, attractor_regular_source, codes,
                    avoids_special_forever, is_regular, regular_attractor,
                    regularity_certificate, RegularityCertificate)
from .maps import (MapInvariantError, PieceLimitError, PiecewiseMap,
                   PwdynError, AffinePiece, compose, parse_map)
from .orbits import (HALF_POINT, INTERVAL_FAMILY, Germ, germ_orbit, orbit,
                     periodic_points, structure, variants)
from .pinned import pinned_maps
from .stability import (UNSTABLE, classify_point, cycle_stability_report,
                        oracle_classify, stability_propagation_report,
                        subsampled_stability_report)
from .taxonomy import (DegenerateWindowError, PreconditionError,
                       TaxonomyViolation, attracted, attraction_atlas,
                       basin_adjacent_special, count_bound, taxonomy)


class GenerationError(PwdynError):
    """Rejection sampling ran out of budget for a pathological config."""


PALETTES = {
    "neutral-rich": [Fraction(1)] * 3 + [Fraction(-1)] * 3
    + [Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2)],
    "contracting-rich": [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3),
                         Fraction(-1, 3), Fraction(2, 3), Fraction(-2, 3),
                         Fraction(1), Fraction(-1), Fraction(3, 4),
                         Fraction(-3, 4)],
    "expanding-rich": [Fraction(2), Fraction(-2), Fraction(3), Fraction(-3),
                       Fraction(3, 2), Fraction(-3, 2), Fraction(1),
                       Fraction(-1), Fraction(5, 2), Fraction(-5, 2)],
}
PALETTES["mixed"] = sorted(set(PALETTES["neutral-rich"]
                               + PALETTES["contracting-rich"]
                               + PALETTES["expanding-rich"]))


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    max_pieces: int = 4
    denominator_bound: int = 16
    discontinuity_bias: float = 0.5
    slope_palette: str = "mixed"

    def sub(self, name: str, index: int) -> "GeneratorConfig":
        salt = zlib.crc32(name.encode())
        return replace(self, seed=self.seed * 1_000_003 + index * 7919 + salt)


def random_map(cfg: GeneratorConfig, *, budget: int = 400) -> PiecewiseMap:
    """Deterministic rejection-sampled well-behaved map on [0, 1]."""
    rng = random.Random(cfg.seed)
    palette = PALETTES[cfg.slope_palette]
    for _ in range(budget):
        f = _try_build(rng, cfg, palette)
        if f is not None:
            return f
    raise GenerationError(f"no valid map within {budget} attempts")


def _try_build(rng, cfg, palette) -> Optional[PiecewiseMap]:
    qb = cfg.denominator_bound
    npieces = rng.randint(1, max(1, cfg.max_pieces))
    npieces = min(npieces, qb - 1) or 1
    grid = [Fraction(i, qb) for i in range(1, qb)]
    cuts = sorted(rng.sample(grid, npieces - 1)) if npieces > 1 else []
    bounds = [Fraction(0)] + cuts + [Fraction(1)]
    fine = 2 * qb * qb
    pieces = []
    prev_value = None
    prev_slope = None
    for left, right in zip(bounds, bounds[1:]):
        piece = None
        for _ in range(16):
            slope = rng.choice(palette)
            span = abs(slope) * (right - left)
            if span > 1:
                continue
            lo = max(Fraction(0), -slope * (right - left))
            hi = min(Fraction(1), 1 - slope * (right - left))
            if lo > hi:
                continue
            jump = (prev_value is not None
                    and rng.random() < cfg.discontinuity_bias)
            if prev_value is not None and not jump:
                if slope == prev_slope:
                    continue
                v_left = prev_value
                if not lo <= v_left <= hi:
                    continue
            else:
                v_left = lo + (hi - lo) * Fraction(rng.randint(0, fine), fine)
                if jump and v_left == prev_value:
                    shifted = [lo + (hi - lo) * Fraction(k, 8)
                               for k in range(9)]
                    alts = [v for v in shifted if v != prev_value]
                    if not alts:
                        continue
                    v_left = rng.choice(alts)
            piece = AffinePiece(left, right, slope, v_left - slope * left)
            break
        if piece is None:
            return None
        pieces.append(piece)
        prev_value = piece.value_at(right)
        prev_slope = piece.slope
    try:
        return PiecewiseMap(Fraction(0), Fraction(1), pieces)
    except MapInvariantError:
        return None


# -- counterexample bundles and shrinking ---------------------------------------

@dataclass(frozen=True)
class Bundle:
    property_name: str
    map_text: str
    context: dict
    message: str

    def to_text(self) -> str:
        block = json.dumps({"property": self.property_name,
                            "message": self.message,
                            "context": self.context}, sort_keys=True)
        return f"{self.map_text}# bundle {block}\n"

    def to_dict(self) -> dict:
        return {"property": self.property_name, "message": self.message,
                "context": self.context, "map": self.map_text}


# Replayable predicates: name -> callable(map, context) -> bool (True = fails).
PREDICATES: dict[str, Callable[[PiecewiseMap, dict], bool]] = {}


def predicate(name):
    def register(fn):
        PREDICATES[name] = fn
        return fn
    return register


def _simpler_fractions(x: Fraction) -> list[Fraction]:
    out = []
    for q in (1, 2, 4, 8):
        if q < x.denominator:
            for num in (int(x * q), int(x * q) + 1):
                cand = Fraction(num, q)
                if cand != x:
                    out.append(cand)
    return out


def _reductions(f: PiecewiseMap) -> list[PiecewiseMap]:
    """Candidate simpler maps, in a fixed deterministic order."""
    out = []
    pieces = list(f.pieces)
    for i in range(len(pieces) - 1):
        merged = pieces[:i] + [AffinePiece(pieces[i].left, pieces[i + 1].right,
                                           pieces[i].slope,
                                           pieces[i].intercept)] + pieces[i + 2:]
        out.append(merged)
        merged_r = pieces[:i] + [AffinePiece(pieces[i].left,
                                             pieces[i + 1].right,
                                             pieces[i + 1].slope,
                                             pieces[i + 1].intercept)] + pieces[i + 2:]
        out.append(merged_r)
    for i, piece in enumerate(pieces):
        for field_name in ("slope", "intercept"):
            for cand in _simpler_fractions(getattr(piece, field_name)):
                alt = AffinePiece(piece.left, piece.right,
                                  cand if field_name == "slope" else piece.slope,
                                  cand if field_name == "intercept"
                                  else piece.intercept)
                out.append(pieces[:i] + [alt] + pieces[i + 1:])
    built = []
    for cand_pieces in out:
        try:
            built.append(PiecewiseMap(f.a, f.b, cand_pieces))
        except (MapInvariantError, PwdynError):
            continue
    return built


def shrink(bundle: Bundle) -> Bundle:
    """Greedy deterministic reduction preserving the failure."""
    pred = PREDICATES.get(bundle.property_name)
    if pred is None:
        raise ValueError(f"no replayable predicate {bundle.property_name!r}")
    current = parse_map(bundle.map_text)
    if not pred(current, bundle.context):
        raise ValueError("not failing")
    changed = True
    while changed:
        changed = False
        for cand in _reductions(current):
            try:
                still_failing = pred(cand, bundle.context)
            except PwdynError:
                continue
            if still_failing:
                current = cand
                changed = True
                break
    return Bundle(bundle.property_name, current.to_text(), bundle.context,
                  bundle.message)


# -- suite machinery --------------------------------------------------------------

@dataclass
class PropertyResult:
    name: str
    passes: int = 0
    fails: int = 0
    skips: int = 0
    seconds: float = 0.0
    bundles: list[Bundle] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def fail(self, f: PiecewiseMap, message: str, **context) -> None:
        self.fails += 1
        self.bundles.append(Bundle(self.name, f.to_text(),
                                   {k: str(v) for k, v in context.items()},
                                   message))

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {"name": self.name, "passes": self.passes, "fails": self.fails,
               "skips": self.skips,
               "bundles": [b.to_dict() for b in self.bundles],
               "extra": self.extra}
        if include_timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class SuiteReport:
    seed: int
    results: dict[str, PropertyResult]

    @property
    def total_fails(self) -> int:
        return sum(r.fails for r in self.results.values())

    def to_dict(self, include_timing: bool = True) -> dict:
        return {"seed": self.seed,
                "properties": {name: r.to_dict(include_timing)
                               for name, r in sorted(self.results.items())}}

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(include_timing=False), sort_keys=True)

    def summary(self) -> str:
        lines = []
        for name, r in sorted(self.results.items()):
            status = "FAIL" if r.fails else "ok"
            lines.append(f"{name:32s} pass={r.passes:5d} fail={r.fails:3d} "
                         f"skip={r.skips:3d} [{status}] {r.seconds:.2f}s")
        lines.append(f"total failures: {self.total_fails}")
        return "\n".join(lines)


PROPERTIES: dict[str, tuple[Callable[[GeneratorConfig, int, PropertyResult],
                                     None], int]] = {}


def suite_property(name, default_count):
    def register(fn):
        PROPERTIES[name] = (fn, default_count)
        return fn
    return register


def run_suite(cfg: GeneratorConfig, which: Optional[set[str]] = None, *,
              counts: Optional[dict[str, int]] = None) -> SuiteReport:
    names = sorted(PROPERTIES) if which is None else sorted(which)
    results = {}
    for name in names:
        runner, default_count = PROPERTIES[name]
        count = (counts or {}).get(name, default_count)
        result = PropertyResult(name)
        started = time.perf_counter()
        runner(cfg, count, result)
        result.seconds = time.perf_counter() - started
        results[name] = result
    return SuiteReport(cfg.seed, results)


def _corpus(cfg: GeneratorConfig, name: str, count: int, **overrides):
    base = replace(cfg, **overrides) if overrides else cfg
    for i in range(count):
        try:
            yield random_map(base.sub(name, i))
        except GenerationError:
            continue


def _rational(rng: random.Random, qb: int) -> Fraction:
    return Fraction(rng.randint(0, 4 * qb), 4 * qb)


def closed_structures(f: PiecewiseMap, *, cap: int = 72, bit_cap: int = 512):
    """Closed structures rooted at jump points and small periodic orbits.

    The node cap bounds the quadratic pair analysis downstream; structures
    past it report as not closed and are skipped by the corpus sweeps.
    """
    roots = list(f.special_points().discontinuities)
    try:
        for orb in periodic_points(f, 3, max_power=6, guard=20000):
            roots.append(orb.representative)
    except PwdynError:
        pass
    seen = set()
    out = []
    for root in roots:
        if root in seen:
            continue
        seen.add(root)
        st = structure(f, root, cap=cap, bit_cap=bit_cap)
        if st.closed:
            out.append(st)
    return out


# -- properties -------------------------------------------------------------------

@suite_property("preimage_finite_exact", 1000)
def _prop_preimage(cfg, count, result):
    rng = random.Random(cfg.seed ^ 0x9E3779B9)
    maps = list(_corpus(cfg, "preimage", max(1, count // 4)))
    for i in range(count):
        f = maps[i % len(maps)]
        y = _rational(rng, cfg.denominator_bound)
        roots = f.preimage(y)
        ok = all(f.value(x) == y for x in roots)
        if ok:
            result.passes += 1
        else:
            result.fail(f, "preimage root does not evaluate back", y=y)


@predicate("composition_sandwich")
def _sandwich_fails(f: PiecewiseMap, context: dict) -> bool:
    g = parse_map(context["second_map"])
    try:
        h = compose(f, g, check=False)
    except PwdynError:
        return False
    pulled = {x for w in f.special_points().points for x in g.preimage(w)}
    lower = {x for x in set(g.special_points().turning) | pulled
             if g.a < x < g.b}
    upper = set(g.special_points().points) | pulled
    got = set(h.special_points().points)
    return not (lower <= got <= upper)


@suite_property("composition_sandwich", 1000)
def _prop_sandwich(cfg, count, result):
    outers = list(_corpus(cfg, "sandwich_outer", max(1, count // 4)))
    inners = list(_corpus(cfg, "sandwich_inner", max(1, count // 4)))
    strict = 0
    for i in range(count):
        f = outers[i % len(outers)]
        g = inners[(i * 7 + 3) % len(inners)]
        try:
            h = compose(f, g, check=False)
        except PieceLimitError:
            result.skips += 1
            continue
        pulled = {x for w in f.special_points().points
                  for x in g.preimage(w)}
        lower = {x for x in set(g.special_points().turning) | pulled
                 if g.a < x < g.b}
        upper = set(g.special_points().points) | pulled
        got = set(h.special_points().points)
        if lower <= got <= upper:
            result.passes += 1
            if lower != got or got != upper:
                strict += 1
        else:
            result.fail(f, "sandwich inclusion failed",
                        second_map=g.to_text())
    result.extra["strict_gap_instances"] = strict


@suite_property("power_special_inclusion", 300)
def _prop_power(cfg, count, result):
    for f in _corpus(cfg, "power", count, max_pieces=4):
        try:
            ok = True
            prev_special: list[set] = []
            continuous = not f.special_points().discontinuities
            for n in range(1, 7):
                fn = f.power(n, guard=40000, check=False)
                sn = set(fn.special_points().points)
                mn = set(f.special_preimage_set(n))
                if not sn <= mn:
                    result.fail(f, "power special points escape preimage set",
                                n=n)
                    ok = False
                    break
                if continuous:
                    if sn != {y for y in mn if f.a < y < f.b}:
                        result.fail(f, "continuous power equality failed", n=n)
                        ok = False
                        break
                    if any(not prev <= sn for prev in prev_special):
                        result.fail(f, "continuous monotone inclusion failed",
                                    n=n)
                        ok = False
                        break
                    prev_special.append(sn)
            if ok:
                result.passes += 1
        except PieceLimitError:
            result.skips += 1


@suite_property("compose_associativity", 150)
def _prop_assoc(cfg, count, result):
    maps = list(_corpus(cfg, "assoc", max(3, count // 2), max_pieces=3))
    for i in range(count):
        f = maps[i % len(maps)]
        g = maps[(i * 5 + 1) % len(maps)]
        h = maps[(i * 11 + 2) % len(maps)]
        try:
            left = compose(compose(f, g, check=False), h, check=False)
            right = compose(f, compose(g, h, check=False), check=False)
        except PieceLimitError:
            result.skips += 1
            continue
        if left == right:
            result.passes += 1
        else:
            result.fail(f, "composition not associative",
                        second_map=g.to_text(), third_map=h.to_text())


@suite_property("eval_lateral_coherence", 200)
def _prop_coherence(cfg, count, result):
    for f in _corpus(cfg, "coherence", count):
        special = set(f.special_points().points)
        ok = True
        for w in f.breakpoints:
            if w in special:
                continue
            if not (f.lateral(w, "minus") == f.lateral(w, "plus")
                    == f.value(w)):
                result.fail(f, "laterals disagree at a plain breakpoint", w=w)
                ok = False
        if ok:
            result.passes += 1


@suite_property("orbit_invariants", 150)
def _prop_orbits(cfg, count, result):
    intersecting = 0
    for f in _corpus(cfg, "orbits", count, slope_palette="neutral-rich",
                     discontinuity_bias=0.8, denominator_bound=12):
        try:
            orbits = periodic_points(f, 4, max_power=8, guard=20000)
        except PwdynError:
            result.skips += 1
            continue
        ok = True
        if not f.special_points().discontinuities:
            point_sets = [frozenset(o.points) for o in orbits
                          if o.kind != HALF_POINT]
            if any(a != b and a & b for a in point_sets for b in point_sets):
                result.fail(f, "distinct orbits of a continuous map intersect")
                ok = False
        for orb in orbits:
            if orb.kind == HALF_POINT:
                sel = orb.selector
                pts = list(orb.points)
                closes = all(
                    _variant_value(f, pts[i], sel) == pts[(i + 1) % len(pts)]
                    for i in range(len(pts)))
            else:
                pts = list(orb.points)
                closes = all(f.value(pts[i]) == pts[(i + 1) % len(pts)]
                             for i in range(len(pts)))
            if not closes:
                result.fail(f, "periodic orbit does not close",
                            points=orb.points)
                ok = False
        sets = [frozenset(o.points) for o in orbits if o.kind == HALF_POINT]
        if any(a != b and a & b for a in sets for b in sets):
            intersecting += 1
        for st in closed_structures(f):
            node_set = set(st.nodes)
            for sel in variants(f)[:4]:
                res = orbit(f, st.root, sel, cap=4 * len(node_set) + 8)
                pts = set(res.prefix) | set(res.cycle or ())
                if not pts <= node_set:
                    result.fail(f, "variant orbit escapes its structure",
                                root=st.root)
                    ok = False
                if res.cycle is None:
                    result.fail(f, "confined orbit not eventually periodic",
                                root=st.root)
                    ok = False
            for p in st.nodes:
                for g in _germs_at(f, p):
                    go = germ_orbit(f, g, cap=2 * len(node_set) + 2)
                    if go.truncated:
                        result.fail(f, "germ cycle exceeded twice the node "
                                    "count", point=p)
                        ok = False
        if ok:
            result.passes += 1
    result.extra["intersecting_distinct_orbits"] = intersecting


def _variant_value(f, x, sel):
    v = f.value(x)
    if v is not None:
        return v
    return f.lateral(x, sel.side_at(x))


def _germs_at(f, p):
    out = []
    if p > f.a:
        out.append(Germ(p, "minus"))
    if p < f.b:
        out.append(Germ(p, "plus"))
    return out


@suite_property("stability_oracle_agreement", 200)
def _prop_oracle(cfg, count, result):
    corpus = list(_corpus(cfg, "oracle", count)) + list(pinned_maps().values())
    for f in corpus:
        points = set()
        for st in closed_structures(f):
            points |= set(st.nodes)
        checked = True
        for x in sorted(points):
            try:
                germ_view = classify_point(f, x, require_confined=False)
                oracle_view = oracle_classify(f, x)
            except PwdynError:
                result.skips += 1
                continue
            if germ_view != oracle_view:
                result.fail(f, "germ and oracle verdicts disagree", x=x,
                            germ=germ_view, oracle=oracle_view)
                checked = False
        if checked:
            result.passes += 1


@suite_property("propagation_table", 500)
def _prop_table(cfg, count, result):
    structures = 0
    for f in _corpus(cfg, "table", count):
        ok = True
        for st in closed_structures(f):
            structures += 1
            try:
                rep = stability_propagation_report(f, st)
            except PwdynError:
                result.skips += 1
                continue
            for v in rep.violations:
                result.fail(f, f"propagation violation {v.rule}",
                            **v.to_dict())
                ok = False
        if ok:
            result.passes += 1
    result.extra["structures_checked"] = structures


@suite_property("cycle_rules", 300)
def _prop_cycles(cfg, count, result):
    for f in _corpus(cfg, "cycles", count):
        ok = True
        for st in closed_structures(f):
            try:
                rep = cycle_stability_report(f, st)
            except PwdynError:
                result.skips += 1
                continue
            for v in rep.violations:
                result.fail(f, f"cycle rule violation {v.rule}", **v.to_dict())
                ok = False
        if ok:
            result.passes += 1


@suite_property("subsample_stability", 100)
def _prop_subsample(cfg, count, result):
    corpus = list(_corpus(cfg, "subsample", count)) + \
        [pinned_maps()[k] for k in ("contraction", "tent", "twocycle")]
    for f in corpus:
        try:
            orbits = [o for o in periodic_points(f, 3, max_power=6,
                                                 guard=20000)
                      if o.continuous and o.kind != INTERVAL_FAMILY]
        except PwdynError:
            result.skips += 1
            continue
        ok = True
        for orb in orbits[:4]:
            try:
                rep = subsampled_stability_report(f, orb)
            except PwdynError:
                result.skips += 1
                continue
            if not rep.consistent:
                result.fail(f, "subsampled class disagrees",
                            points=orb.points, germ=rep.germ_class,
                            full=rep.full_class, sub=rep.subsampled_class)
                ok = False
        if ok:
            result.passes += 1


@suite_property("taxonomy_rules", 300)
def _prop_taxonomy(cfg, count, result):
    for f in _corpus(cfg, "taxonomy", count, max_pieces=3):
        try:
            orbits = periodic_points(f, 8, max_power=16, guard=30000)
        except PwdynError:
            result.skips += 1
            continue
        ok = True
        for orb in orbits:
            if not orb.continuous or orb.kind == HALF_POINT:
                continue
            try:
                tax = taxonomy(f, orb)
            except PreconditionError:
                continue
            except TaxonomyViolation as exc:
                result.fail(f, f"taxonomy violation: {exc}", points=orb.points)
                ok = False
                continue
            interior = not any(p in (f.a, f.b) for p in orb.points)
            if interior and not tax.critical:
                cls = classify_point(f, orb.representative,
                                     require_confined=False)
                if cls == UNSTABLE and not tax.trapped:
                    result.fail(f, "unstable interior non-critical orbit "
                                "is not trapped", points=orb.points)
                    ok = False
        if ok:
            result.passes += 1


@suite_property("exceptional_exclusivity", 300)
def _prop_exceptional(cfg, count, result):
    from .taxonomy import exceptional_census
    for f in _corpus(cfg, "exceptional", count, max_pieces=3):
        try:
            orbits = periodic_points(f, 4, max_power=8, guard=20000)
            exceptional_census(f, orbits)
        except TaxonomyViolation as exc:
            result.fail(f, f"exclusivity violation: {exc}")
            continue
        except PwdynError:
            result.skips += 1
            continue
        result.passes += 1


@suite_property("basin_witnesses", 120)
def _prop_basins(cfg, count, result):
    corpus = list(_corpus(cfg, "basins", count, slope_palette="contracting-rich",
                          max_pieces=3)) + [pinned_maps()["hat"]]
    for f in corpus:
        if not f.special_points().points:
            result.skips += 1
            continue
        try:
            orbits = periodic_points(f, 4, max_power=8, guard=20000)
            atlas = attraction_atlas(f, orbits)
        except PwdynError:
            result.skips += 1
            continue
        found = False
        for orb in orbits:
            if not orb.continuous or orb.kind != "point":
                continue
            try:
                tax = taxonomy(f, orb)
            except (PreconditionError, DegenerateWindowError):
                continue
            if not tax.free or tax.exceptional:
                continue
            try:
                witnesses = basin_adjacent_special(f, orb)
            except PwdynError:
                result.skips += 1
                continue
            for wit in witnesses[:2]:
                sides = ["minus", "plus"] if wit.side == "both" else [wit.side]
                good = True
                for side in sides:
                    for i in range(1, 33):
                        offset = wit.delta * Fraction(i, 33)
                        y = wit.w - offset if side == "minus" else wit.w + offset
                        verdict = attracted(f, y, orb, atlas=atlas)
                        if verdict != YES:
                            result.fail(f, "sampled basin point not attracted",
                                        w=wit.w, side=side, y=y,
                                        verdict=verdict)
                            good = False
                            break
                    if not good:
                        break
                if good:
                    found = True
        if found:
            result.passes += 1
        else:
            result.skips += 1


@predicate("orbit_count_bound")
def _bound_fails(f: PiecewiseMap, context: dict) -> bool:
    if not f.special_points().points:
        return False
    try:
        return not count_bound(f, int(context.get("horizon", 8))).holds
    except PwdynError:
        return False


@suite_property("orbit_count_bound", 500)
def _prop_bound(cfg, count, result):
    for f in _corpus(cfg, "bound", count, max_pieces=3):
        if not f.special_points().points:
            result.skips += 1
            continue
        try:
            report = count_bound(f, 8)
        except (PieceLimitError, PwdynError):
            result.skips += 1
            continue
        if report.holds:
            result.passes += 1
        else:
            bundle = Bundle("orbit_count_bound", f.to_text(),
                            {"horizon": "8"}, "orbit count bound violated")
            result.fails += 1
            result.bundles.append(shrink(bundle))


@suite_property("attractor_duality", 100)
def _prop_duality(cfg, count, result):
    corpus = list(_corpus(cfg, "duality", count,
                          slope_palette="contracting-rich", max_pieces=3)) \
        + [pinned_maps()["hat"]]
    for f in corpus:
        special = f.special_points()
        if not special.points:
            result.skips += 1
            continue
        try:
            certifier = Certifier(f)
        except PwdynError:
            result.skips += 1
            continue
        ok = True
        for w in special.points:
            verdict = is_regular(f, w, certifier=certifier)
            if verdict.value == UNKNOWN:
                result.skips += 1
                continue
            if verdict.value == NO:
                continue
            try:
                regular_attractor(f, w, certifier=certifier)
            except CertificationError as exc:
                result.fail(f, f"forward construction failed: {exc}", w=w)
                ok = False
            except PwdynError:
                result.skips += 1
        try:
            orbits = periodic_points(f, 4, max_power=8, guard=20000)
        except PwdynError:
            orbits = []
        for orb in orbits:
            if not orb.continuous or orb.kind != "point":
                continue
            try:
                w, verdict = attractor_regular_source(f, orb, horizon=4,
                                                      certifier=certifier)
            except (PreconditionError, DegenerateWindowError):
                continue
            except CertificationError as exc:
                result.fail(f, f"reverse construction failed: {exc}",
                            points=orb.points)
                ok = False
                continue
            except PwdynError:
                result.skips += 1
                continue
            if verdict.value == UNKNOWN:
                result.skips += 1
        if ok:
            result.passes += 1


@suite_property("pinned_double_shift", 1)
def _prop_pinned_shift(cfg, count, result):
    f = pinned_maps()["shift"]
    f2 = f.power(2)
    expected = [(Fraction(0), Fraction(3, 8), Fraction(1), Fraction(1, 4)),
                (Fraction(3, 8), Fraction(5, 8), Fraction(1), Fraction(0)),
                (Fraction(5, 8), Fraction(1), Fraction(1), Fraction(-1, 4))]
    got = [(p.left, p.right, p.slope, p.intercept) for p in f2.pieces]
    checks = [
        got == expected,
        f2.special_points().points == (Fraction(3, 8), Fraction(5, 8)),
        f.special_preimage_set(2) == (Fraction(3, 8), Fraction(1, 2),
                                      Fraction(5, 8)),
        not set(f.special_points().points) <= set(f2.special_points().points),
    ]
    if all(checks):
        result.passes += 1
    else:
        result.fail(f, f"pinned double-shift reproduction failed: {checks}")


@suite_property("code_invariants", 120)
def _prop_codes(cfg, count, result):
    rng = random.Random(cfg.seed ^ 0x51ED270)
    corpus = list(_corpus(cfg, "codes", count, max_pieces=3)) \
        + [pinned_maps()[k] for k in ("hat", "shift")]
    for f in corpus:
        try:
            certifier = Certifier(f, horizon=4)
        except PwdynError:
            result.skips += 1
            continue
        ok = True
        samples = [_rational(rng, cfg.denominator_bound) for _ in range(6)]
        for x in samples:
            good = avoids_special_forever(f, x, 2000, certifier=certifier)
            if good.value == YES:
                try:
                    cs = codes(f, x, 2000, certifier=certifier)
                except CodeUndefinedError:
                    result.fail(f, "good point had no code", x=x)
                    ok = False
                    continue
                if len(cs) != 1:
                    result.fail(f, "good point code not unique", x=x,
                                count=len(cs))
                    ok = False
            elif good.value == NO:
                depth = 0
                probe = x
                hit = False
                for m in range(200):
                    if probe in set(f.special_points().points):
                        depth = m
                        hit = True
                        break
                    probe = f.value(probe)
                    if probe is None:
                        break
                # materializing the skeleton is exponential in depth, so the
                # independent cross-check only runs for shallow hits
                if hit and depth <= 8 and \
                        x not in set(f.special_preimage_set(depth + 1)):
                    result.fail(f, "special-hitting point outside the "
                                "preimage skeleton", x=x, depth=depth)
                    ok = False
        jumps = set(f.special_points().discontinuities)
        for w in f.special_points().points:
            cert = regularity_certificate(f, w, 2000, certifier=certifier)
            if isinstance(cert, RegularityCertificate):
                witnesses = [Germ(w, cert.side)] if w in jumps \
                    else _germs_at(f, w)
                for g in witnesses:
                    go = germ_orbit(f, g, cap=500)
                    if not go.truncated and go.preperiod == 0:
                        result.fail(f, "regular point has a periodic germ",
                                    w=w, side=g.side)
                        ok = False
        if ok:
            result.passes += 1
