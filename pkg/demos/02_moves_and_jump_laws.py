"""Self-tangency and triple-point moves, and how the invariants jump.
====================================================================

J+ increases by exactly 2 under a direct self-tangency birth and is
unchanged by opposite births and triple-point moves; the rotation number
(mod |chi(S)|) never moves.  Births and deaths are mutually inverse up to
the canonical form of the diagram.
"""

from fractions import Fraction

from curveinv import canonicalize, parse_diagram, full_report
from curveinv.moves import (
    bigon_death,
    birth_site,
    find_bigons,
    find_triangles,
    tangency_birth,
    triple_move,
)

circle = parse_diagram("curve -\nbase 1\n")
before = full_report(circle)
print(f"embedded circle: J+ = {before.jplus}, rot = {before.rotation}")

# An opposite tangency pushes two antiparallel stretches of the circle
# together: positions are (dart, fraction along the boundary walk).
site = birth_site(0, (0, Fraction(1, 4)), (0, Fraction(3, 4)), "opposite")
peanut = tangency_birth(circle, site)
after = full_report(peanut)
print(f"\nopposite birth -> code {peanut.code.visits}")
print(f"  J+ {before.jplus} -> {after.jplus}  (unchanged)")

# The lens can die again; the round trip is the identity.
lens = [s for s in find_bigons(peanut) if s.region == len(peanut.regions) - 1][0]
restored = bigon_death(peanut, lens)
print(f"  death restores the circle: {canonicalize(restored) == canonicalize(circle)}")

# Direct tangencies need a crossing to route around: the smallest host is
# the figure-eight, whose two-corner region admits one.
figure8 = parse_diagram("curve 1+ 1+\nbase 0\n")
before = full_report(figure8)
site = birth_site(0, (0, Fraction(1, 2)), (3, Fraction(1, 2)), "direct")
born = tangency_birth(figure8, site)
after = full_report(born)
print(f"\ndirect birth on the figure-eight -> code {born.code.visits}")
print(f"  J+ {before.jplus} -> {after.jplus}  (+2)")
print(f"  J- {before.jminus} -> {after.jminus}  (unchanged)")

# The same move attempted on the embedded circle is not realizable on the
# sphere: the validator rejects it instead of fabricating a surface.
try:
    tangency_birth(circle, birth_site(0, (0, Fraction(1, 4)),
                                      (0, Fraction(3, 4)), "direct"))
except Exception as exc:
    print(f"\ndirect birth on the bare circle: {type(exc).__name__}: {exc}")

# The three-crossing diagram has triangles; flipping one twice is the
# identity and J+ never moves.
for site in find_triangles(born):
    flipped = triple_move(born, site)
    again = triple_move(flipped, site.region)
    print(f"\ntriangle at region {site.region}:"
          f" J+ {full_report(flipped).jplus} (unchanged),"
          f" involution restores: {canonicalize(again) == canonicalize(born)}")
