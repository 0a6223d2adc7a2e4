"""Groups as Cayley tables, words as reduced tuples.

Run: python demos/01_groups_and_words.py
"""
from grpgeom import (WordContext, build_group, evaluate, lower_central_series, nilpotency_class,
                     parse_word)

S3 = build_group("symmetric(3)")
print("symmetric(3) elements:", S3.names)

# Nilpotency shows up in the lower central series.
for spec in ["symmetric(3)", "dihedral(4)", "unitriangular(3,3)"]:
    G = build_group(spec)
    orders = [K.order for K in lower_central_series(G)]
    print(f"{spec:20s} series orders {orders}, class {nilpotency_class(G)}")

ctx = WordContext(2)
w = parse_word("x1*x2*x2^-1*[x1,x2]", ctx)
print("reduced:", w)

# Evaluate the commutator at every pair and count how often it vanishes.
comm = parse_word("[x1,x2]", ctx)
hits = sum(evaluate(comm, (a, b), S3) == S3.identity for a in range(6) for b in range(6))
print("commuting pairs in S3:", hits)
