"""Wreath and direct products of transformation semigroups, and division."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from krc.core import (
    DEFAULT_ELEMENT_BUDGET,
    UNDEF,
    BudgetExceeded,
    TransformationSemigroup,
    close,
    compose,
    format_map,
    FiniteSemigroup,
)

# Above this many generator pairs the wreath uses constant and
# single-coordinate functions only.
FULL_FUNCTION_CAP = 4096
FULL_DIRECT_CAP = 4096


def _ts_from_closure(q, gens, budget, name=None):
    elems, table, gen_idx = close(gens, lambda x, i: compose(x, gens[i]), budget)
    S = FiniteSemigroup(table, generators=sorted(set(gen_idx)),
                        labels=[format_map(e) for e in elems], name=name)
    return TransformationSemigroup(q, tuple(elems), tuple(gen_idx), S)


def _ts_identity(X):
    ident = tuple(range(X.q))
    for i, e in enumerate(X.elements):
        if e == ident:
            return i
    return None


def wreath(X, Y, budget=DEFAULT_ELEMENT_BUDGET):
    """X wr Y acting on states(X) x states(Y).

    State (p, q) has index ``q * X.q + p``. A generator (f, t) with
    f: states(Y) -> S_X and t a generator of Y acts by
    (p, q) -> (p f(q), q t).
    """
    qx, qy = X.q, Y.q
    ygens = list(dict.fromkeys(Y.generator_indices))
    nx = len(X.elements)
    if nx ** qy * len(ygens) <= FULL_FUNCTION_CAP:
        funcs = list(itertools.product(range(nx), repeat=qy))
    else:
        xgens = list(dict.fromkeys(X.generator_indices))
        funcs = [(g,) * qy for g in xgens]
        one = _ts_identity(X)
        if one is not None:
            for q0 in range(qy):
                for g in xgens:
                    f = [one] * qy
                    f[q0] = g
                    funcs.append(tuple(f))
            funcs.append((one,) * qy)
        funcs = list(dict.fromkeys(funcs))
    gens = []
    for t in ygens:
        tm = Y.elements[t]
        for f in funcs:
            m = [UNDEF] * (qx * qy)
            for q in range(qy):
                q2 = tm[q]
                if q2 == UNDEF:
                    continue
                xm = X.elements[f[q]]
                for p in range(qx):
                    p2 = xm[p]
                    if p2 != UNDEF:
                        m[q * qx + p] = q2 * qx + p2
            gens.append(tuple(m))
    gens = list(dict.fromkeys(gens))
    return _ts_from_closure(qx * qy, gens, budget)


def direct(X, Y, budget=DEFAULT_ELEMENT_BUDGET):
    """Componentwise action on the disjoint union states(X) + states(Y)."""
    qx = X.q
    nx, ny = len(X.elements), len(Y.elements)
    if nx * ny <= FULL_DIRECT_CAP:
        pairs = list(itertools.product(range(nx), range(ny)))
    else:
        xg = list(dict.fromkeys(X.generator_indices))
        yg = list(dict.fromkeys(Y.generator_indices))
        pairs = list(itertools.product(xg, yg))
        ox, oy = _ts_identity(X), _ts_identity(Y)
        if oy is not None:
            pairs += [(a, oy) for a in xg]
        if ox is not None:
            pairs += [(ox, b) for b in yg]
    gens = []
    for a, b in pairs:
        xa, yb = X.elements[a], Y.elements[b]
        gens.append(tuple(xa) + tuple(v + qx if v != UNDEF else UNDEF for v in yb))
    gens = list(dict.fromkeys(gens))
    return _ts_from_closure(qx + Y.q, gens, budget)


def trivial_ts():
    return _ts_from_closure(1, [(0,)], None, name="trivial")


# ---------------------------------------------------------------------------
# division


@dataclass(frozen=True)
class DivisionWitness:
    subsemigroup: tuple      # sorted element indices of T
    surjection: dict         # element of T -> element of S

    def as_dict(self):
        return {"subsemigroup": [x + 1 for x in self.subsemigroup],
                "surjection": {str(k + 1): v + 1 for k, v in sorted(self.surjection.items())}}


@dataclass(frozen=True)
class DivisionResult:
    status: str              # "yes" | "no" | "unknown"
    witness: DivisionWitness | None = None
    explored: int = 0

    def __bool__(self):
        return self.status == "yes"


def _functional_closure(S, T, pairs):
    """Close generator pairs inside T x S; None if the T side is not functional."""
    phi = {}
    for t, s in pairs:
        if phi.setdefault(t, s) != s:
            return None
    frontier = list(phi)
    tt, st = T.table, S.table
    while frontier:
        nxt = []
        for x in frontier:
            sx = phi[x]
            for t, s in pairs:
                y, sy = tt[x][t], st[sx][s]
                old = phi.get(y)
                if old is None:
                    phi[y] = sy
                    nxt.append(y)
                elif old != sy:
                    return None
        frontier = nxt
    return phi


def verify_division(S, T, witness):
    sub = set(witness.subsemigroup)
    phi = witness.surjection
    if set(phi) != sub or set(phi.values()) != set(range(S.n)):
        return False
    for x in sub:
        for y in sub:
            z = T.table[x][y]
            if z not in sub or phi[z] != S.table[phi[x]][phi[y]]:
                return False
    return True


def divides(S, T, budget=2_000_000):
    """Decide whether S is a quotient of a subsemigroup of T.

    Every division restricts to one whose domain is generated by preimages
    u_1..u_k of a generating set s_1..s_k of S, so the search runs over
    tuples (u_i) in lexicographic order and checks that the subsemigroup of
    T x S generated by the pairs (u_i, s_i) is the graph of a function.
    The search is complete: "no" is returned only after exhausting it,
    "unknown" when ``budget`` closure steps run out.
    """
    gens = list(S.generating_set)
    cd_s, cd_t = S.cyclic_data, T.cyclic_data

    def compatible(u, s):
        (ia, pa), (ib, pb) = cd_t[u], cd_s[s]
        return ib <= ia and pa % pb == 0

    cands = [[u for u in range(T.n) if compatible(u, s)] for s in gens]
    explored = 0

    def search(i, chosen):
        nonlocal explored
        if i == len(gens):
            return chosen
        for u in cands[i]:
            explored += 1
            if budget is not None and explored > budget:
                raise BudgetExceeded("division search", budget)
            pairs = chosen + [(u, gens[i])]
            if _functional_closure(S, T, pairs) is None:
                continue
            res = search(i + 1, pairs)
            if res is not None:
                return res
        return None

    try:
        found = search(0, [])
    except BudgetExceeded:
        return DivisionResult("unknown", None, explored)
    if found is None:
        return DivisionResult("no", None, explored)
    phi = _functional_closure(S, T, found)
    w = DivisionWitness(tuple(sorted(phi)), dict(phi))
    assert verify_division(S, T, w)
    return DivisionResult("yes", w, explored)
