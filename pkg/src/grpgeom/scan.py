"""Catalog scans: enumerate algebraic sets over small groups and run every oracle on each."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import AlgebraicSet, closure
from .groups import FiniteGroup, build_group, nilpotency_class
from .radical import (DEFAULT_BUDGET, check_verdict, decompose, full_invariance_exact,
                      gamma_vanishes, is_characteristic)

SCHEMA = "grpgeom.scan/1"


def enumerate_algebraic_sets(G: FiniteGroup, n: int, samples: int = 200, seed: int = 0,
                             max_subset: int = 3, singletons: Optional[int] = None) -> list[AlgebraicSet]:
    """Closures of singletons, then of ``samples`` random subsets of ``G^n``.

    Every singleton is used unless ``singletons`` caps them, in which case a
    seeded sample of that many is taken.  Random subsets have between 1 and
    ``max_subset`` points.  Duplicates are dropped, keeping first appearance,
    so the output depends only on the arguments.
    """
    N = G.order ** n
    seen: dict[bytes, AlgebraicSet] = {}

    def add(codes):
        E = AlgebraicSet.from_codes(G, n, codes)
        cl, _ = closure(G, E)
        seen.setdefault(cl.codes.tobytes(), cl)

    rng = np.random.default_rng(seed)
    if singletons is None or singletons >= N:
        points = range(N)
    else:
        points = np.sort(rng.choice(N, size=singletons, replace=False))
    for code in points:
        add([code])
    for _ in range(samples):
        k = int(rng.integers(1, max_subset + 1))
        add(rng.choice(N, size=min(k, N), replace=False))
    return list(seen.values())


def analyse_instance(G: FiniteGroup, E: AlgebraicSet, budget: int = DEFAULT_BUDGET) -> dict:
    """Run decompose, the exact oracle and the characteristic check on one set."""
    dec = decompose(G, E, strict=False)
    exact = full_invariance_exact(G, E, budget=budget)
    char = is_characteristic(G, E)
    certified = all(check_verdict(G, E, v) for v in (dec, exact, char))
    return {
        "size": len(E),
        "decompose": dec.outcome,
        "exact": exact.outcome,
        "characteristic": char.outcome,
        "gamma_vanishes": gamma_vanishes(G, E),
        "agree": exact.outcome == "budget" or exact.outcome == dec.outcome,
        "certified": certified,
    }


def _job(args) -> dict:
    spec, n, codes, budget = args
    G = build_group(spec)
    return analyse_instance(G, AlgebraicSet.from_codes(G, n, codes, "closure-of-set"), budget)


def scan_catalog(specs: Sequence[str], n: int, samples: int = 200, seed: int = 0, jobs: int = 1,
                 budget: int = DEFAULT_BUDGET) -> dict:
    """Per-group summary table; identical arguments give identical output for any ``jobs``."""
    rows = []
    for pos, spec in enumerate(specs):
        G = build_group(spec)
        sets = enumerate_algebraic_sets(G, n, samples, seed=_group_seed(seed, pos))
        tasks = [(spec, n, E.codes.tolist(), budget) for E in sets]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
        else:
            results = [_job(t) for t in tasks]
        rows.append(_summarise(G, spec, n, results))
    return {
        "schema": SCHEMA,
        "seed": seed,
        "vars": n,
        "samples": samples,
        "budget": budget,
        "groups": rows,
        "truncated": any(r["budget_skipped"] for r in rows),
        "flagged": any(r["flagged"] for r in rows),
    }


def _group_seed(seed: int, pos: int) -> int:
    return int(np.random.SeedSequence([seed & (2**64 - 1), pos]).generate_state(1, np.uint64)[0])


def _summarise(G: FiniteGroup, spec: str, n: int, results: list[dict]) -> dict:
    c = nilpotency_class(G)
    in_range = [r for r in results if c is not None and r["gamma_vanishes"]]
    char_not_fully = [r for r in results if r["characteristic"] == "yes" and r["decompose"] == "no"]
    flagged_hyp = [r for r in char_not_fully if c is not None and r["gamma_vanishes"]]
    disagreements = [r for r in results if not r["agree"]]
    uncertified = [r for r in results if not r["certified"]]
    return {
        "group": spec,
        "order": G.order,
        "nilpotency_class": c,
        "examined": len(results),
        "fully_characteristic": sum(r["decompose"] == "yes" for r in results),
        "characteristic": sum(r["characteristic"] == "yes" for r in results),
        "characteristic_not_fully": len(char_not_fully),
        "characteristic_not_fully_in_hypothesis": len(flagged_hyp),
        "hypothesis_instances": len(in_range),
        "oracle_agreement": sum(r["agree"] and r["exact"] != "budget" for r in results),
        "budget_skipped": sum(r["exact"] == "budget" for r in results),
        "disagreements": len(disagreements),
        "uncertified": len(uncertified),
        "flagged": bool(flagged_hyp or disagreements or uncertified),
    }
