"""Exact invariants of curves on surfaces, from their Gauss-code diagrams.
=========================================================================

A generic closed curve on an oriented surface is recorded combinatorially:
the cyclic sequence of signed crossing visits, the traced complement
regions, and a base region.  From that data the library computes the
Laurent polynomial I_q, the rotation number, and the J-type invariants.
"""

from fractions import Fraction

from curveinv import parse_diagram, full_report
from curveinv.diagram import index_function
from curveinv.invariants import change_base, iq_rational_eval

# The figure-eight curve on the sphere: one crossing, visited twice with
# positive sign.  The base region is the two-corner region (the one a
# planar observer would call the outside).
figure8 = parse_diagram("""
curve 1+ 1+
base 0
""")

report = full_report(figure8)
print("figure-eight on the sphere")
print(f"  I_q      = {report.iq}")
print(f"  I_1      = {report.i1}   (rotation number mod {report.rotation[1]})")
print(f"  I_1'     = {report.i1_prime}")
print(f"  J+       = {report.jplus}")
print(f"  J-       = {report.jminus}")
print(f"  SJ+      = {report.sjplus}")

# Moving the base point multiplies I_q by q^C and adds a geometric-series
# correction weighted by chi(S).  Moving into the +1 lobe means C = -1.
ind = index_function(figure8)
plus_lobe = next(r for r, v in ind.values.items() if v == 1)
moved = full_report(figure8, plus_lobe)
print("\nbase moved into the +1 lobe")
print(f"  I_q      = {moved.iq}")
print(f"  via law  = {change_base(report.iq, -1, figure8.surface_chi)}")
print(f"  J+       = {moved.jplus}   (base independent)")

# Rational shifts leave the half-integer Laurent ring, so they are
# evaluated pointwise; at q = 4 the half-shift gives 17/6.
value = iq_rational_eval(report.iq, Fraction(1, 2), figure8.surface_chi, 4.0)
print(f"\nI_q at q = 4 after a half-integer index shift: {value:.9f} = 17/6")

# A contractible circle on the torus: the complement is a disk plus a
# genus-one region, chi(S) = 0, so the rotation number is exact and the
# J+ formula does not apply.
torus = parse_diagram("""
surface genus=1
curve -
region 0 genus=0 cycles=0
region 1 genus=1 cycles=1
base 1
""")
report = full_report(torus)
print("\ncontractible circle on the torus")
print(f"  I_q      = {report.iq}")
print(f"  rotation = {report.rotation[0]} (exact: chi = 0)")
print(f"  J+       = undefined ({report.jplus_reason})")
