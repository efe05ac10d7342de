"""
Seeded property runs over fixture and random polygraphs.

Each suite counts runs, skipped instances (random generation out of budget)
and failures, logging the first few failures at WARNING.
"""

import logging
from typing import Any, Callable, Dict, List, Optional

from precat.cells import MINUS, PLUS, BudgetExhausted, Polygraph, PrecatError
from precat.composition import boundary, compose, identity
from precat.functor import apply_free, conduche_factorize, enumerate_splittings, random_polymap
from precat.oracle import evaluate_expr, normalize_expr, random_equal_pair, random_expr, random_polygraph
from precat.presheaf import makkai_check

logger = logging.getLogger(__name__)


def _run(name: str, count: int, trial: Callable[[int], Optional[bool]]) -> Dict[str, Any]:
    result = {"runs": 0, "skipped": 0, "failures": 0}
    for n in range(count):
        try:
            ok = trial(n)
        except BudgetExhausted:
            result["skipped"] += 1
            continue
        except PrecatError as e:
            ok = False
            logger.warning(f"{name} run {n} raised {type(e).__name__}: {e}")
        result["runs"] += 1
        if not ok:
            result["failures"] += 1
            if result["failures"] <= 3:
                logger.warning(f"{name} run {n} failed")
    logger.info(f"Suite {name}: {result['runs']} runs, {result['failures']} failures, {result['skipped']} skipped")
    return result


def _units_hold(P: Polygraph, seed: int) -> bool:
    u = evaluate_expr(P, random_expr(P, seed))
    if boundary(identity(u), MINUS, u.dim) != u or boundary(identity(u), PLUS, u.dim) != u:
        return False
    for i in range(u.dim):
        left = identity(boundary(u, MINUS, i))
        right = identity(boundary(u, PLUS, i))
        if compose(left, i, u) != u or compose(u, i, right) != u:
            return False
    return True


def _conduche_holds(P: Polygraph, seed: int) -> bool:
    F = random_polymap(P, seed)
    u = evaluate_expr(P, random_expr(P, seed))
    image = apply_free(F, u)
    for i in range(image.dim):
        for v1, v2 in enumerate_splittings(image, i):
            u1, u2 = conduche_factorize(F, u, v1, v2, i)
            if compose(u1, i, u2) != u:
                return False
    return True


def selfcheck(seed: int, count: int, fixtures: List[Polygraph], random_polygraphs: int = 20) -> Dict[str, Any]:
    """
    Run the uniqueness, unit, Conduché and plex suites.

    Args:
        seed: Base seed; run n uses seed + n
        count: Runs per suite (the plex suite runs once per polygraph)
        fixtures: Fixed polygraphs to include in the pool
        random_polygraphs: Number of seeded random polygraphs added to the pool
    """
    pool = list(fixtures) + [random_polygraph(seed + k) for k in range(random_polygraphs)]
    logger.info(f"Self-check with seed {seed}, {count} runs per suite, {len(pool)} polygraphs")

    def uniqueness(n: int) -> bool:
        P = pool[n % len(pool)]
        first, second = random_equal_pair(P, seed + n)
        cell = normalize_expr(P, first)
        return cell == normalize_expr(P, second) and cell == evaluate_expr(P, first)

    suites = {
        "uniqueness": _run("uniqueness", count, uniqueness),
        "units": _run("units", count, lambda n: _units_hold(pool[n % len(pool)], seed + n)),
        "conduche": _run("conduche", count, lambda n: _conduche_holds(pool[n % len(pool)], seed + n)),
        "makkai": _run("makkai", len(pool), lambda n: makkai_check(pool[n])["valid"]),
    }
    return {
        "seed": seed,
        "count": count,
        "suites": suites,
        "valid": all(s["failures"] == 0 for s in suites.values()),
    }
