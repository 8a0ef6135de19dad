"""Brute-force cross-validation of the exact algorithms.

Each test here re-derives an answer by a slower independent route (grid
enumeration, global powers, stepwise iteration) and compares it with the
production path on a seeded corpus.
"""

from fractions import Fraction as F

from pwdyn.harness import GeneratorConfig, GenerationError, random_map
from pwdyn.maps import PwdynError
from pwdyn.orbits import HALF_POINT, INTERVAL_FAMILY, periodic_points
from pwdyn.taxonomy import (DegenerateWindowError, monotone_window,
                            restrict_power)
from pwdyn.codes import Certifier, CodeUndefinedError, PartitionIntervals, codes


def corpus(tag, count, **overrides):
    cfg = GeneratorConfig(seed=987, **overrides)
    out = []
    for i in range(count):
        try:
            out.append(random_map(cfg.sub(tag, i)))
        except GenerationError:
            continue
    return out


def stepwise(f, x, n):
    chain = [x]
    for _ in range(n):
        v = f.value(chain[-1])
        if v is None:
            return None
        chain.append(v)
    return chain


def test_periodic_enumeration_complete_on_grid():
    # every grid point that closes up stepwise must be covered by some
    # reported orbit: inside a family interval, equal to an isolated orbit
    # point, or (as a family edge) a fixed endpoint of a closed family
    for f in corpus("enum", 40, max_pieces=3, denominator_bound=8,
                    slope_palette="neutral-rich"):
        try:
            orbits = periodic_points(f, 4, max_power=8, guard=20000)
        except PwdynError:
            continue
        isolated = {p for o in orbits if o.kind != HALF_POINT
                    for p in o.points}
        families = [iv for o in orbits if o.kind == INTERVAL_FAMILY
                    for iv in o.intervals]
        grid = [F(i, 48) for i in range(49)]
        for x in grid:
            chain = stepwise(f, x, 4)
            if chain is None:
                continue
            period = next((n for n in (1, 2, 3, 4) if chain[n] == x), None)
            if period is None:
                continue
            covered = (x in isolated
                       or any(lo <= x <= hi for lo, hi in families))
            assert covered, (f.to_text(), x, period)


def test_monotone_window_matches_global_powers():
    # the local pullback window must equal the gap between neighbouring
    # special points of the global powers
    for f in corpus("window", 30, max_pieces=3, denominator_bound=8):
        obstructions = set()
        try:
            for j in range(1, 5):
                obstructions |= set(f.power(j, guard=20000,
                                            check=False).special_points().points)
        except PwdynError:
            continue
        for x in (F(1, 5), F(1, 2), F(4, 5), F(3, 7)):
            if any(f.value(t) is None for t in (x,)):
                continue
            try:
                u, v = monotone_window(f, x, 4)
            except DegenerateWindowError:
                assert x in obstructions or any(
                    stepwise(f, x, k) is None or stepwise(f, x, k)[-1]
                    in set(f.special_points().points) for k in range(4))
                continue
            below = [o for o in obstructions if o < x]
            above = [o for o in obstructions if o > x]
            assert u == (max(below) if below else f.a), (f.to_text(), x)
            assert v == (min(above) if above else f.b), (f.to_text(), x)


def test_restrict_power_matches_global_power():
    for f in corpus("restrict", 30, max_pieces=3, denominator_bound=8):
        for x in (F(2, 7), F(1, 2), F(5, 8)):
            try:
                u, v = monotone_window(f, x, 4)
            except (DegenerateWindowError, PwdynError):
                continue
            segs = restrict_power(f, u, v, 4)
            try:
                f4 = f.power(4, guard=20000, check=False)
            except PwdynError:
                continue
            for i in range(1, 16):
                t = u + (v - u) * F(i, 16)
                expected = f4.value(t)
                if expected is None:
                    continue
                got = next(s.value_at(t) for s in segs
                           if s.left <= t <= s.right)
                assert got == expected, (f.to_text(), x, t)


def test_code_head_matches_stepwise_membership():
    for f in corpus("codehead", 25, max_pieces=3, denominator_bound=8):
        part = PartitionIntervals.of(f)
        try:
            certifier = Certifier(f, horizon=4)
        except PwdynError:
            continue
        for x in (F(1, 3), F(2, 5), F(7, 9)):
            try:
                out = codes(f, x, 600, certifier=certifier)
            except CodeUndefinedError:
                continue
            chain = stepwise(f, x, 12)
            if chain is None:
                continue
            for code in out:
                head = code.head(12)
                for m, idx in enumerate(head):
                    lo, hi = part.interval(idx)
                    assert lo <= chain[m] <= hi, (f.to_text(), x, m)


def test_count_bound_membership_oracle():
    # every counted orbit must be oracle-stable-or-semi-stable; every
    # uncounted continuous point orbit must be unstable, trapped, or a family
    from pwdyn.stability import oracle_classify
    from pwdyn.taxonomy import count_bound, is_trapped, PreconditionError

    for f in corpus("bound_oracle", 25, max_pieces=3, denominator_bound=8):
        if not f.special_points().points:
            continue
        try:
            orbits = periodic_points(f, 4, max_power=8, guard=20000)
            report = count_bound(f, 4, orbits=orbits)
        except PwdynError:
            continue
        counted = {frozenset(o.points) for o in report.orbits}
        for orb in orbits:
            if not orb.continuous or orb.kind == HALF_POINT:
                continue
            verdict = oracle_classify(f, orb.points[0])
            if frozenset(orb.points) in counted:
                assert verdict in ("stable", "semi_stable"), (f.to_text(),
                                                              orb.points)
            elif orb.kind != INTERVAL_FAMILY and verdict != "unstable":
                try:
                    assert is_trapped(f, orb).trapped, (f.to_text(), orb.points)
                except PreconditionError:
                    pass  # critical or endpoint orbits are counted directly


def test_strict_codes_replay_from_position_zero():
    for f in corpus("strict", 25, max_pieces=3, denominator_bound=8):
        try:
            certifier = Certifier(f, horizon=4)
        except PwdynError:
            continue
        for x in (F(1, 6), F(3, 8), F(5, 7)):
            try:
                out = codes(f, x, 600, certifier=certifier)
            except CodeUndefinedError:
                continue
            for code in out:
                if code.strictly_periodic:
                    word = code.cycle
                    assert code.prefix == ()
                    assert code.head(3 * len(word)) == word * 3
