"""Automorphism invariance against endomorphism invariance in nilpotent groups.

When the n-th lower central term vanishes on E, the two notions coincide.
Quaternion8 with two variables shows the bound is sharp: class 2 alone is
not enough.

Run: python demos/04_characteristic_vs_full.py
"""
import itertools

from grpgeom import (AlgebraicSet, EquationSystem, WordContext, build_group, solve, subgroup_closure,
                     theorem2_report)

Q8 = build_group("quaternion8")

E = solve(Q8, EquationSystem.parse(WordContext(3), ["[x1,x2]"]))
r = theorem2_report(Q8, E)
print("Q8, n=3, [x1,x2]:", {k: r[k] for k in ("gamma_n_vanishes_on_E", "characteristic", "decomposable")})

gens = [p for p in itertools.product(range(8), repeat=2) if subgroup_closure(Q8, p).order == 8]
center = [a for a in range(8) if all(Q8.mul(a, b) == Q8.mul(b, a) for b in range(8))]
E = AlgebraicSet(Q8, 2, gens + list(itertools.product(center, repeat=2)))
r = theorem2_report(Q8, E)
print("Q8, n=2, generating pairs + centre:",
      {k: r[k] for k in ("class_at_most_n", "gamma_n_vanishes_on_E", "characteristic", "decomposable")})
