"""
Deciding M0 fields from closed-form criteria
============================================

An M0 field is of type beta, yet no principal factor is a lattice minimum
of the maximal order.  The criteria work from the norm of one principal
factor; here they are traced for a square-part and a squarefree radicand
and checked against the maximal-order chain.
"""

from purecubic.classify import classify_with_mclass
from purecubic.cli import justify_rows
from purecubic.criteria import criterion_input, p2_value

for d in (833, 1430, 52417):
    c = classify_with_mclass(d, verify=True)
    mc = c.m_class
    print(f"d = {d}: {mc.kind.value}")
    for line in mc.trace:
        print("   ", line)
    for cc in c.verification.cosets:
        print(f"    coset of norm {cc.norm}: minimum in the maximal order? {cc.actual}")

# The fine criterion compares P2(u1 gamma, u2 gamma_bar) with 9, exactly in L.
inp = criterion_input(c.radicand, 22747)
print("P2 for d = 52417, n = 22747:", float(p2_value(inp)))

for row in justify_rows(33337):
    print(row)
