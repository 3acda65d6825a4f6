import random
from fractions import Fraction

import pytest

from curveinv.diagram import canonicalize, index_function, parse_diagram
from curveinv.errors import (
    ExhaustedRetries,
    PlanInvalid,
    PlanRequired,
    SiteError,
)
from curveinv.invariants import full_report
from curveinv.moves import (
    MoveSite,
    SplitPlan,
    bigon_death,
    birth_site,
    find_bigons,
    find_triangles,
    random_diagram,
    tangency_birth,
    triple_move,
)


def disk_regions(diagram):
    out = []
    for rid, region in enumerate(diagram.regions):
        if region.genus == 0 and len(region.cycles) == 1:
            out.append(rid)
    return out


def make_birth(diagram, rid, kind, rng):
    """A random birth site inside a disk region."""
    region = diagram.regions[rid]
    cycle = diagram.cycles[region.cycles[0]]
    d1 = rng.choice(cycle)
    d2 = rng.choice(cycle)
    t1 = Fraction(rng.randrange(1, 10), 10)
    t2 = Fraction(rng.randrange(1, 10), 10)
    return birth_site(rid, (d1, t1), (d2, t2), kind)


# -- bigon detection ---------------------------------------------------------


def test_find_bigons_circle_empty(fixtures):
    assert find_bigons(fixtures["circle_sphere"]) == []


def test_figure8_has_no_bigons(fixtures):
    # its only 2-corner face has both corners at the same crossing
    assert find_bigons(fixtures["figure8_sphere"]) == []


def test_opposite_birth_then_detect(fixtures):
    circle = fixtures["circle_sphere"]
    site = birth_site(0, (0, Fraction(1, 4)), (0, Fraction(3, 4)), "opposite")
    born = tangency_birth(circle, site)
    bigons = find_bigons(born)
    assert len(bigons) == 1
    assert bigons[0].kind == "bigon_opposite"


def test_direct_birth_then_detect(fixtures):
    # direct tangencies need an interleaving-breaking crossing, so the
    # smallest host is the figure eight's two-corner disk region; the move
    # also creates further direct lenses against the old crossing, so we
    # check the created lens (the appended region) is detected
    fig8 = fixtures["figure8_sphere"]
    site = birth_site(0, (0, Fraction(1, 2)), (3, Fraction(1, 2)), "direct")
    born = tangency_birth(fig8, site)
    lens_region = len(born.regions) - 1
    bigons = {s.region: s.kind for s in find_bigons(born)}
    assert bigons[lens_region] == "bigon_direct"


# -- births ------------------------------------------------------------------


def test_direct_birth_impossible_on_embedded_circle(fixtures):
    circle = fixtures["circle_sphere"]
    for positions in (
        ((0, Fraction(1, 4)), (0, Fraction(3, 4))),
        ((0, Fraction(1, 10)), (0, Fraction(2, 5))),
    ):
        site = birth_site(0, *positions, "direct")
        with pytest.raises(PlanInvalid):
            tangency_birth(circle, site)


def test_birth_jump_laws_on_fixtures(fixtures):
    fig8 = fixtures["figure8_sphere"]
    before = full_report(fig8)
    direct = tangency_birth(
        fig8, birth_site(0, (0, Fraction(1, 2)), (3, Fraction(1, 2)), "direct")
    )
    assert full_report(direct).jplus == before.jplus + 2

    opposite = tangency_birth(
        fig8, birth_site(0, (0, Fraction(1, 3)), (0, Fraction(2, 3)), "opposite")
    )
    assert full_report(opposite).jplus == before.jplus


def test_birth_positions_are_symmetric(fixtures):
    circle = fixtures["circle_sphere"]
    a = tangency_birth(
        circle, birth_site(0, (0, Fraction(1, 4)), (0, Fraction(3, 4)), "opposite")
    )
    b = tangency_birth(
        circle, birth_site(0, (0, Fraction(3, 4)), (0, Fraction(1, 4)), "opposite")
    )
    assert canonicalize(a) == canonicalize(b)


def test_birth_requires_plan_outside_disks(fixtures):
    torus = fixtures["circle_torus"]
    site = birth_site(1, (1, Fraction(1, 4)), (1, Fraction(3, 4)), "opposite")
    with pytest.raises(PlanRequired):
        tangency_birth(torus, site)


def test_birth_with_plan_in_genus_one_region(fixtures):
    torus = fixtures["circle_torus"]
    # opposite tangency splits the genus-1 region; the handle goes to one
    # piece, chosen by the plan
    for genera in ((0, 1), (1, 0)):
        plan = SplitPlan(pieces=((genera[0], frozenset()), (genera[1], frozenset())))
        site = birth_site(
            1, (1, Fraction(1, 4)), (1, Fraction(3, 4)), "opposite", plan
        )
        born = tangency_birth(torus, site)
        assert born.surface_chi == 0
        assert sorted(r.genus for r in born.regions) == [0, 0, 0, 1]
        handle = [r for r in born.regions if r.genus == 1]
        assert len(handle[0].cycles) == 1
        rep = full_report(born)
        assert rep.rotation == full_report(torus).rotation
    # a direct tangency there would carve its lens from the disk across the
    # curve, merging regions: not realizable on the fixed surface
    plan = SplitPlan(pieces=((0, frozenset()),))
    site = birth_site(1, (1, Fraction(1, 4)), (1, Fraction(3, 4)), "direct", plan)
    with pytest.raises(PlanInvalid):
        tangency_birth(torus, site)


def test_direct_birth_absorbed_by_handle(fixtures):
    # across the essential torus circle a direct tangency is carried by the
    # handle: the cut does not separate and the single piece loses no genus
    ess = fixtures["essential_torus_circle"]
    plan = SplitPlan(pieces=((0, frozenset()),))
    site = birth_site(0, (0, Fraction(1, 4)), (1, Fraction(1, 4)), "direct", plan)
    born = tangency_birth(ess, site)
    assert born.surface_chi == 0
    assert born.n == 2
    lens = [s for s in find_bigons(born) if s.region == len(born.regions) - 1]
    assert lens and lens[0].kind == "bigon_direct"
    back = bigon_death(born, lens[0])
    assert canonicalize(back) == canonicalize(ess)


def test_birth_rejects_wrong_plan(fixtures):
    torus = fixtures["circle_torus"]
    bad = SplitPlan(pieces=((0, frozenset()), (0, frozenset())))  # chi law fails
    site = birth_site(1, (1, Fraction(1, 4)), (1, Fraction(3, 4)), "opposite", bad)
    with pytest.raises(PlanInvalid):
        tangency_birth(torus, site)


def test_birth_site_errors(fixtures):
    circle = fixtures["circle_sphere"]
    with pytest.raises(SiteError):
        tangency_birth(
            circle, birth_site(0, (1, Fraction(1, 2)), (0, Fraction(1, 2)), "opposite")
        )  # dart 1 bounds region 1, not region 0
    with pytest.raises(SiteError):
        birth_site(0, (0, 0), (0, 0), "sideways")


# -- deaths ------------------------------------------------------------------


def test_death_restores_circle(fixtures):
    circle = fixtures["circle_sphere"]
    born = tangency_birth(
        circle, birth_site(0, (0, Fraction(1, 4)), (0, Fraction(3, 4)), "opposite")
    )
    back = bigon_death(born, find_bigons(born)[0])
    assert canonicalize(back) == canonicalize(circle)


def test_death_of_direct_lens_drops_jplus_by_two(fixtures):
    fig8 = fixtures["figure8_sphere"]
    born = tangency_birth(
        fig8, birth_site(0, (0, Fraction(1, 2)), (3, Fraction(1, 2)), "direct")
    )
    site = find_bigons(born)[0]
    dead = bigon_death(born, site)
    assert full_report(dead).jplus == full_report(born).jplus - 2
    assert canonicalize(dead) == canonicalize(fig8)


def test_death_requires_bigon(fixtures):
    with pytest.raises(SiteError):
        bigon_death(fixtures["figure8_sphere"], 0)


# -- triple moves ------------------------------------------------------------


def triple_host(fixtures):
    fig8 = fixtures["figure8_sphere"]
    return tangency_birth(
        fig8, birth_site(0, (0, Fraction(1, 2)), (3, Fraction(1, 2)), "direct")
    )


def test_triple_move_involution(fixtures):
    host = triple_host(fixtures)
    triangles = find_triangles(host)
    assert triangles
    for site in triangles:
        once = triple_move(host, site)
        twice = triple_move(once, site.region)
        assert canonicalize(twice) == canonicalize(host)


def test_triple_move_preserves_invariants(fixtures):
    host = triple_host(fixtures)
    before = full_report(host)
    for site in find_triangles(host):
        after = full_report(triple_move(host, site))
        assert after.jplus == before.jplus
        assert after.i1 == before.i1
        assert after.crossing_count == before.crossing_count


def test_triple_move_requires_triangle(fixtures):
    with pytest.raises(SiteError):
        triple_move(fixtures["figure8_sphere"], 0)


# -- random generator --------------------------------------------------------


def test_random_zero_crossings_is_circle(fixtures):
    d = random_diagram(0, 0, seed=5)
    # up to base choice this is the embedded circle on the sphere
    assert d.n == 0 and d.surface_chi == 2 and len(d.regions) == 2


def test_random_one_crossing_is_figure_eight(fixtures):
    d = random_diagram(1, 0, seed=5)
    fig8 = fixtures["figure8_sphere"]
    variants = {
        canonicalize(parse_diagram(f"curve 1{s} 1{s}\nbase {b}\n"))
        for s in "+-" for b in range(3)
    }
    assert canonicalize(d) in variants


def test_random_outputs_are_trivial(random_corpus):
    for d in random_corpus:
        index_function(d, d.base_region)   # must not raise


def test_random_deterministic():
    a = random_diagram(5, 2, seed=123)
    b = random_diagram(5, 2, seed=123)
    assert a == b
    assert random_diagram(5, 2, seed=124) != a


def test_random_exhausted_retries():
    with pytest.raises(ExhaustedRetries):
        random_diagram(5, 0, seed=0, max_tries=1)


# -- randomized move campaign -------------------------------------------------


def test_move_campaign_jump_laws(random_corpus):
    """Births and triangle moves across the corpus obey the jump laws."""
    rng = random.Random(20240601)
    applied = 0
    for d in random_corpus[::3]:
        if d.surface_chi == 0:
            continue
        before = full_report(d)
        disks = disk_regions(d)
        if not disks:
            continue
        rid = rng.choice(disks)
        for kind, jump in (("opposite", 0), ("direct", 2)):
            site = make_birth(d, rid, kind, rng)
            try:
                born = tangency_birth(d, site)
            except PlanInvalid:
                continue
            after = full_report(born)
            assert after.jplus - before.jplus == jump
            assert after.rotation[1] == before.rotation[1]
            m = before.rotation[1]
            if m:
                assert (after.rotation[0] - before.rotation[0]) % m == 0
            else:
                assert after.rotation[0] == before.rotation[0]
            # birth then death of the created lens is the identity
            lens = [s for s in find_bigons(born)
                    if s.region == len(born.regions) - 1]
            assert lens and lens[0].kind == f"bigon_{kind}"
            back = bigon_death(born, lens[0])
            assert canonicalize(back) == canonicalize(d)
            applied += 1
        for site in find_triangles(d)[:2]:
            after = full_report(triple_move(d, site))
            assert after.jplus == before.jplus
            m = before.rotation[1]
            if m:
                assert (after.rotation[0] - before.rotation[0]) % m == 0
            else:
                assert after.rotation[0] == before.rotation[0]
            if site.region != d.base_region:
                # away from the base the move is a regular homotopy of the
                # based curve, so the representative itself is unchanged
                assert after.i1 == before.i1
            else:
                # the strands sweep across a base point inside the triangle,
                # shifting its index; i1 moves by a multiple of chi(S)
                assert (after.i1 - before.i1) % d.surface_chi == 0
            applied += 1
    assert applied >= 40
