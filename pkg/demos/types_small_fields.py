"""
Principal factorization types for small radicands
=================================================

Classify every pure cubic field with d <= 40 and show which evidence
decided the type: a principal factor in the chain, or the index Q of the
subfield units.
"""

from collections import Counter

from purecubic.classify import PFWitness, classify
from purecubic.cli import radicands

counts = Counter()
for d in radicands(2, 40):
    c = classify(d)
    counts[c.type.value] += 1
    if isinstance(c.evidence, PFWitness):
        why = f"principal factor of norm {c.evidence.norm} at j = {c.evidence.index}"
    else:
        why = f"Q = {c.Q}"
    print(f"{d:>3}  species {c.radicand.species.value:<2}  {c.type.value:<5}  {why}")

print(dict(counts))
