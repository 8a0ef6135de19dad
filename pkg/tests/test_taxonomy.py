from fractions import Fraction as F

import pytest

from pwdyn.orbits import INTERVAL_FAMILY, periodic_points
from pwdyn.taxonomy import (BOUNDARY_FIXED, DegenerateWindowError,
                            PreconditionError, attraction_atlas, attracted,
                            basin_adjacent_special, count_bound,
                            exceptional_census, is_trapped, monotone_window,
                            restrict_power, taxonomy)


def orbit_at(f, point, horizon=2):
    for orb in periodic_points(f, horizon, max_power=2 * horizon):
        if point in orb.points:
            return orb
    raise AssertionError(f"no orbit through {point}")


def test_monotone_window(maps):
    assert monotone_window(maps["tent"], F(3, 5), 2) == (F(1, 2), F(2, 3))
    assert monotone_window(maps["contraction"], F(1, 2), 2) == (F(0), F(1))
    assert monotone_window(maps["shift"], F(7, 16), 4) == (F(3, 8), F(1, 2))


def test_monotone_window_degenerate(maps):
    with pytest.raises(DegenerateWindowError):
        monotone_window(maps["tent"], F(1, 2), 1)
    with pytest.raises(DegenerateWindowError):
        monotone_window(maps["shift"], F(3, 8), 2)  # orbit hits the jump


def test_restrict_power(maps):
    segs = restrict_power(maps["tent"], F(1, 2), F(2, 3), 2)
    assert len(segs) == 1
    assert segs[0].slope == F(9, 4) and segs[0].intercept == F(-3, 4)


def test_trapped_tent(maps):
    res = is_trapped(maps["tent"], orbit_at(maps["tent"], F(3, 5), 1))
    assert res.trapped
    y, z, delta = res.witness
    assert (y, z) == (F(23, 40), F(5, 8))
    assert delta > 0


def test_trapped_contraction(maps):
    assert not is_trapped(maps["contraction"],
                          orbit_at(maps["contraction"], F(1, 2), 1)).trapped


def test_trapped_shift_family_equalities(maps):
    fam = [o for o in periodic_points(maps["shift"], 2)
           if o.kind == INTERVAL_FAMILY][0]
    res = is_trapped(maps["shift"], fam)
    assert res.trapped
    y, z, _ = res.witness
    segs = restrict_power(maps["shift"], *monotone_window(
        maps["shift"], fam.representative, 4), 4)
    gap = {t: next(s.value_at(t) - t for s in segs if s.left <= t <= s.right)
           for t in (y, z)}
    assert gap[y] == 0 and gap[z] == 0  # equality witnesses


def test_taxonomy_pinned(maps):
    tent_tax = taxonomy(maps["tent"], orbit_at(maps["tent"], F(3, 5), 1))
    assert (tent_tax.critical, tent_tax.trapped, tent_tax.free) == \
        (False, True, False)
    c_tax = taxonomy(maps["contraction"],
                     orbit_at(maps["contraction"], F(1, 2), 1))
    assert c_tax.free and c_tax.exceptional == frozenset({"a", "b"})
    h_tax = taxonomy(maps["hat"], orbit_at(maps["hat"], F(7, 12), 1))
    assert h_tax.free and not h_tax.exceptional
    zero_tax = taxonomy(maps["tent"], orbit_at(maps["tent"], F(0), 1))
    assert zero_tax.boundary_case == BOUNDARY_FIXED
    assert not zero_tax.free


def test_exceptional_type_c(maps):
    d2 = maps["decreasing2"]
    orb = orbit_at(d2, F(1, 4), 2)
    tax = taxonomy(d2, orb)
    assert tax.free and tax.exceptional == frozenset({"c"})
    census = exceptional_census(d2, periodic_points(d2, 4, max_power=8))
    assert [o.points for o in census["c"]] == [orb.points]
    assert not census["a"] and not census["b"]


def test_taxonomy_preconditions(maps):
    halves = [o for o in periodic_points(maps["shift"], 2)
              if o.kind == "half_point"]
    with pytest.raises(PreconditionError):
        taxonomy(maps["shift"], halves[0])
    critical_free_guard = orbit_at(maps["tent"], F(3, 5), 1)
    with pytest.raises(PreconditionError):
        # basin construction rejects trapped orbits
        basin_adjacent_special(maps["tent"], critical_free_guard)
    with pytest.raises(PreconditionError):
        basin_adjacent_special(maps["contraction"],
                               orbit_at(maps["contraction"], F(1, 2), 1))


def test_basin_hat(maps):
    h = maps["hat"]
    orb = orbit_at(h, F(7, 12), 1)
    wits = basin_adjacent_special(h, orb)
    assert wits
    wit = wits[0]
    assert wit.w == F(1, 2) and wit.side == "both"
    assert wit.delta <= F(1, 8)
    assert wit.w_attracted


def test_attracted(maps):
    h = maps["hat"]
    orb = orbit_at(h, F(7, 12), 1)
    assert attracted(h, F(5, 8), orb) == "yes"
    t = maps["tent"]
    assert attracted(t, F(3, 5), orbit_at(t, F(0), 1)) == "no"
    f = maps["shift"]
    half = [o for o in periodic_points(f, 2) if o.kind == "half_point"][0]
    assert attracted(f, F(1, 3), half) == "no"
    # hitting the jump point means no limit exists
    assert attracted(f, F(1, 4), half) == "no"


def test_attracted_unknown_budget(maps):
    t = maps["tent"]
    orb = orbit_at(t, F(3, 5), 1)
    assert attracted(t, F(1, 7), orb, cap=3) == "unknown"


def test_count_bound_pinned(maps):
    rep = count_bound(maps["hat"])
    assert (rep.count_found, rep.n_t, rep.n_d, rep.bound, rep.holds) == \
        (1, 1, 0, 3, True)
    rep = count_bound(maps["shift"])
    assert (rep.count_found, rep.n_t, rep.n_d, rep.bound, rep.holds) == \
        (0, 0, 1, 4, True)
    rep = count_bound(maps["tent"])
    assert (rep.count_found, rep.bound, rep.holds) == (0, 3, True)
    with pytest.raises(PreconditionError):
        count_bound(maps["contraction"])


def test_ball_atlas(maps):
    h = maps["hat"]
    atlas = attraction_atlas(h, periodic_points(h, 2))
    balls = next(iter(atlas.values()))
    assert balls[0].center == F(7, 12)
    assert balls[0].radius == F(1, 12)
    assert abs(balls[0].slope) < 1
