"""Decide whether an algebraic set is fully characteristic, with certificates.

A yes comes with a family of subgroups whose union of powers is the set; a no
comes with a point and an endomorphism image that leaves the set.

Run: python demos/03_full_characteristic.py
"""
from grpgeom import (EquationSystem, WordContext, build_group, coordinate_group, decompose,
                     full_invariance_exact, marked_iso, relatively_free, solve)

S3 = build_group("symmetric(3)")
ctx = WordContext(2)

E = solve(S3, EquationSystem.parse(ctx, ["[x1,x2]"]))
verdict = decompose(S3, E)
print("commuting pairs:", verdict.outcome, "family orders",
      sorted(K.order for K in verdict.decomposition))

# The coordinate group matches the relatively free group of the family.
Q = coordinate_group(S3, E)
print("coordinate group order", Q.order, "marked iso to free object:",
      marked_iso(Q, relatively_free(verdict.decomposition, ctx)))

E = solve(S3, EquationSystem.parse(ctx, ["[x1,x2]", "x1^2", "x2^3"]))
verdict = decompose(S3, E)
w = verdict.witness
print("restricted system:", verdict.outcome,
      f"{tuple(S3.names[a] for a in w.point)} -> {tuple(S3.names[a] for a in w.image)}")
print("brute-force oracle agrees:", full_invariance_exact(S3, E).outcome)
