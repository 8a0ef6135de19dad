from fractions import Fraction as F

import pytest

from pwdyn.codes import (Certifier, CodeUndefinedError, PartitionIntervals,
                         RegularityCertificate, attractor_regular_source,
                         avoids_special_forever, codes, is_regular,
                         regular_attractor, regularity_certificate,
                         side_codes)
from pwdyn.orbits import Germ, germ_orbit, periodic_points
from pwdyn.stability import STABLE
from pwdyn.taxonomy import PreconditionError, is_trapped


def test_partition(maps):
    part = PartitionIntervals.of(maps["shift"])
    assert part.cuts == (F(0), F(1, 2), F(1))
    assert part.indices_of(F(1, 4)) == (0,)
    assert part.indices_of(F(1, 2)) == (0, 1)
    assert part.indices_of(F(0)) == (0,)
    assert part.indices_of(F(1)) == (1,)


def test_code_shift(maps):
    f = maps["shift"]
    out = codes(f, F(1, 3))
    assert len(out) == 1
    code = out[0]
    assert code.prefix == (0,) and code.cycle == (0, 1)
    assert not code.strictly_periodic
    with pytest.raises(CodeUndefinedError):
        codes(f, F(1, 4))


def test_code_hat_turning_point(maps):
    h = maps["hat"]
    out = side_codes(h, F(1, 2), None)
    assert len(out) == 2
    by_first = {c.head(1)[0]: c for c in out}
    assert not by_first[0].strictly_periodic
    assert by_first[0].head(4) == (0, 1, 1, 1)
    assert by_first[1].strictly_periodic and by_first[1].period == 1
    assert by_first[1].head(3) == (1, 1, 1)


def test_good_set(maps):
    f = maps["shift"]
    assert avoids_special_forever(f, F(1, 4)).value == "no"
    assert avoids_special_forever(f, F(1, 3)).value == "yes"
    assert avoids_special_forever(maps["hat"], F(5, 8)).value == "yes"


def test_good_set_unknown_cap(maps):
    t = maps["tent"]
    verdict = avoids_special_forever(t, F(1, 7), cap=5)
    assert verdict.value == "unknown" and verdict.cap_used == 5


def test_unique_code_for_good_points(maps):
    f = maps["shift"]
    for x in (F(1, 3), F(11, 24), F(7, 12)):
        assert avoids_special_forever(f, x).value == "yes"
        assert len(codes(f, x)) == 1


def test_is_regular(maps):
    assert is_regular(maps["hat"], F(1, 2)).value == "yes"
    assert is_regular(maps["shift"], F(1, 2)).value == "no"
    for side in ("minus", "plus"):
        assert is_regular(maps["shift"], F(1, 2), side=side).value == "no"
    assert is_regular(maps["tent"], F(1, 2)).value == "unknown"
    with pytest.raises(PreconditionError):
        is_regular(maps["hat"], F(1, 3))


def test_regular_not_periodic(maps):
    h = maps["hat"]
    cert = regularity_certificate(h, F(1, 2))
    assert isinstance(cert, RegularityCertificate)
    for side in ("minus", "plus"):
        go = germ_orbit(h, Germ(F(1, 2), side), cap=100)
        assert go.preperiod > 0 or go.truncated


def test_forward_hat(maps):
    h = maps["hat"]
    res = regular_attractor(h, F(1, 2))
    assert res.orbit.points == (F(7, 12),)
    assert res.stability == STABLE
    assert not is_trapped(h, res.orbit).trapped
    assert res.attracted_verdict == "yes"
    assert res.interval == (F(1, 2), F(3, 4))


def test_forward_code_interval_invariants(maps):
    h = maps["hat"]
    res = regular_attractor(h, F(1, 2))
    lo, hi = res.interval
    part = PartitionIntervals.of(h)
    sigma = res.code.cycle
    for i in range(1, 8):
        x = lo + (hi - lo) * F(i, 8)
        for code in codes(h, x):
            assert code.head(len(sigma)) == sigma
    # forward invariance of J under the period power
    p, q = h.lateral(lo, "plus"), h.lateral(hi, "minus")
    lo2, hi2 = min(p, q), max(p, q)
    assert lo <= lo2 and hi2 <= hi


def test_forward_guard(maps):
    with pytest.raises(PreconditionError):
        regular_attractor(maps["shift"], F(1, 2))


def test_reverse_hat(maps):
    h = maps["hat"]
    orb = periodic_points(h, 1)[0]
    w, verdict = attractor_regular_source(h, orb)
    assert w == F(1, 2) and verdict.value == "yes"


def test_reverse_guard_trapped(maps):
    t = maps["tent"]
    orb = [o for o in periodic_points(t, 1) if o.points == (F(3, 5),)][0]
    with pytest.raises(PreconditionError):
        attractor_regular_source(t, orb)


def test_nongood_points_in_skeleton(maps):
    f = maps["shift"]
    certifier = Certifier(f)
    for x in (F(1, 4), F(3, 8), F(1, 2)):
        verdict = avoids_special_forever(f, x, certifier=certifier)
        assert verdict.value == "no"
        probe, depth = x, 0
        while probe not in set(f.special_points().points):
            probe = f.value(probe)
            depth += 1
        assert x in set(f.special_preimage_set(depth + 1))
