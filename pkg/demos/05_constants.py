"""Equations with constants from G.

Run: python demos/05_constants.py
"""
from grpgeom import (EquationSystem, GTarget, WordContext, build_group, corollary2_check,
                     corollary3_check)

S3 = build_group("symmetric(3)")
ctx = WordContext(1, S3)

# x1^6 holds everywhere: the radical consists of G-identities.
r = corollary2_check(S3, EquationSystem.parse(ctx, ["x1^6"]))
print("x1^6:", r["status"], "verbal:", r["g_verbal"])

# Centralizer of a transposition: a proper set, with a replayable witness.
r = corollary2_check(S3, EquationSystem.parse(ctx, ["x1*g1 = g1*x1"]))
print("centralizer of g1:", r["points"], "points, witness verified:", r["witness_verified"])

# Over S3 x S3 with diagonal constants, the empty system decomposes.
r = corollary3_check(S3, GTarget(S3, 2), EquationSystem.parse(ctx, []))
print("over S3^2:", r["status"], "family orders", r["family_orders"], "marked iso", r["marked_iso"])
