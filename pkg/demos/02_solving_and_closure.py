"""Solve a system, then look at radicals and Zariski closures.

Run: python demos/02_solving_and_closure.py
"""
from grpgeom import AlgebraicSet, EquationSystem, WordContext, build_group, closure, solve

S3 = build_group("symmetric(3)")
ctx = WordContext(1)

V = solve(S3, EquationSystem.parse(ctx, ["x1^2"]))
print("V(x1^2) =", [S3.names[p[0]] for p in V.tuples])

# A single transposition is not algebraic without constants: any equation
# it satisfies is also satisfied by the other transpositions.
t = 1
E = AlgebraicSet(S3, 1, [(0,), (t,)])
cl, algebraic = closure(S3, E)
print("cl({e, t}) =", [S3.names[p[0]] for p in cl.tuples], "algebraic:", algebraic)

# With constants, x1*t = t*x1 cuts out exactly {e, t}.
cctx = WordContext(1, S3)
cl, algebraic = closure(S3, E, cctx)
print("with constants:", [S3.names[p[0]] for p in cl.tuples], "algebraic:", algebraic)
