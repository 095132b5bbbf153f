import functools
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from krc.core import (  # noqa: E402
    BudgetExceeded,
    IsoMemo,
    UNDEF,
    builtin,
    generate_ts,
    is_aperiodic,
    is_inverse_semigroup,
)

NAMED = ["Z2", "Z3", "Z4", "flipflop", "T2", "SIS2", "Sym3", "constants3"]


def random_ts(rng, q, k, partial=False):
    lo = -1 if partial else 0
    gens = [tuple(rng.randint(lo, q - 1) for _ in range(q)) for _ in range(k)]
    gens = [tuple(UNDEF if x < 0 else x for x in g) for g in gens]
    return generate_ts(q, gens, budget=200)


@functools.lru_cache(maxsize=None)
def random_pool(seed=7, count=60, max_size=8):
    """Distinct (up to isomorphism) semigroups from random maps on 2-3 states."""
    rng = random.Random(seed)
    memo = IsoMemo()
    out = []
    tries = 0
    while len(out) < count and tries < 20_000:
        tries += 1
        q = rng.choice([2, 3])
        try:
            ts = random_ts(rng, q, rng.choice([1, 2, 2, 3]), partial=rng.random() < 0.3)
        except BudgetExceeded:
            continue
        S = ts.abstract
        if S.n > max_size or S in memo:
            continue
        memo.set(S, True)
        out.append(ts)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def aperiodic_pool(count=20, max_size=8):
    out = []
    memo = IsoMemo()
    seed = 11
    while len(out) < count:
        for ts in random_pool(seed, 80, max_size):
            S = ts.abstract
            if is_aperiodic(S) and S not in memo and len(out) < count:
                memo.set(S, True)
                out.append(ts)
        seed += 1
    return tuple(out)


@functools.lru_cache(maxsize=None)
def inverse_pool(seed=5, count=14):
    """Inverse subsemigroups of SIS3 generated by inverse-closed sets, plus groups."""
    rng = random.Random(seed)
    sis = builtin("SIS3")
    S = sis.abstract
    inv = {}
    t = S.table
    for s in range(S.n):
        inv[s] = next(x for x in range(S.n) if t[t[s][x]][s] == s and t[t[x][s]][x] == x)
    memo = IsoMemo()
    out = []
    for name in ["SIS2", "Z2", "Z3"]:
        T = builtin(name).abstract
        memo.set(T, True)
        out.append(T)
    tries = 0
    while len(out) < count and tries < 2_000:
        tries += 1
        gens = rng.sample(range(S.n), rng.choice([1, 2, 2, 3]))
        gens = sorted(set(gens) | {inv[g] for g in gens})
        T, _ = S.restrict(sorted(S.subsemigroup(gens)))
        if T.n > 20 or T in memo:
            continue
        assert is_inverse_semigroup(T)
        memo.set(T, True)
        out.append(T)
    return tuple(out)


def named(name):
    return builtin(name)


@pytest.fixture(scope="session")
def pool():
    return random_pool()


@pytest.fixture(scope="session")
def small_pool():
    return tuple(ts for ts in random_pool() if ts.abstract.n <= 6)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: int(k.split()[0])):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


# sandwich matrices C[b][a] over a cyclic group (None is zero); all regular
# and with pairwise distinct rows and columns
_SANDWICH = {
    "2x2 id": [[0, None], [None, 0]],
    "2x2 g": [[0, 0], [0, 1]],
    "2x2 full": [[0, 1], [1, 0]],
    "2x3": [[0, 0, None], [None, 0, 1]],
    "3x2": [[0, None], [0, 1], [None, 0]],
    "3x3": [[0, 0, None], [None, 0, 0], [0, None, 1]],
    "1x2": [[0, 1]],
}


@functools.lru_cache(maxsize=None)
def gm_fixtures():
    """Named GM semigroups: Rees matrix monoids, groups and GM images of T3."""
    from krc.structure import classify_transitivity, gm_images, rees_matrix_semigroup

    out = []
    for order in (2, 3):
        G = builtin(f"Z{order}").abstract
        gen = next(x for x in range(G.n) if x != G.identity)
        for name, C in _SANDWICH.items():
            C2 = [[None if c is None else (G.identity if c == 0 else gen) for c in row]
                  for row in C]
            S = rees_matrix_semigroup(G, len(C[0]), len(C), C2)
            out.append((f"M0(Z{order}, {name})", S))
    for name in ("Z2", "Z3", "Sym3"):
        out.append((name, builtin(name).abstract))
    for img in gm_images(builtin("T3").abstract):
        if img.group_nontrivial:
            out.append((f"T3 image of J{img.j_class}", img.quotient))
    return tuple((n, S) for n, S in out if classify_transitivity(S).is_gm)
