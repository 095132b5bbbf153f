"""Aperiodic pointlike sets by Henckell's closure, and the pointlike subgroup N_J."""
from __future__ import annotations

from dataclasses import dataclass

from krc.core import BudgetExceeded, KRCError

FAMILY_CAP = 50_000


def _bits(xs):
    m = 0
    for x in xs:
        m |= 1 << x
    return m


def _members(m):
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


class _SetOps:
    def __init__(self, S):
        self.table = S.table

    def product(self, a, b):
        t = self.table
        bs = _members(b)
        out = 0
        for x in _members(a):
            row = t[x]
            for y in bs:
                out |= 1 << row[y]
        return out

    def omega_operator(self, z):
        """Z^w (Z + Z^2 + ... + Z^w), with Z^w the idempotent power of Z in P(S)."""
        powers = [z]
        index = {z: 0}
        while True:
            nxt = self.product(powers[-1], z)
            if nxt in index:
                start = index[nxt]
                break
            index[nxt] = len(powers)
            powers.append(nxt)
        period = len(powers) - start
        # powers[k] = Z^(k+1); the idempotent is Z^m, m the multiple of period >= start+1
        m = period
        while m < start + 1:
            m += period
        w = powers[start + (m - 1 - start) % period]
        union = 0
        for k in range(min(m, len(powers))):
            union |= powers[k]
        return self.product(w, union)


@dataclass(frozen=True)
class PointlikeFamily:
    n: int
    maximal: tuple            # sorted tuple of frozensets

    def contains(self, subset):
        y = frozenset(subset)
        return any(y <= m for m in self.maximal)

    def all_sets(self):
        """The full downward-closed family of nonempty sets (small inputs only)."""
        out = set()
        for m in self.maximal:
            items = sorted(m)
            for mask in range(1, 1 << len(items)):
                out.add(frozenset(items[i] for i in range(len(items)) if mask >> i & 1))
        return out

    def as_dict(self):
        return {"maximal": [[x + 1 for x in sorted(m)] for m in self.maximal]}


def henckell_closure(S, cap=FAMILY_CAP, order=None):
    """Least family with the singletons, closed under subsets, products and the operator.

    Only the antichain of maximal sets is stored: all three rules are
    monotone, so applying them to maximal sets suffices. ``order``
    permutes the initial worklist (the result does not depend on it).
    """
    ops = _SetOps(S)
    maximal = set()
    work = []

    def insert(z):
        for m in maximal:
            if z & m == z:
                return
        for m in [m for m in maximal if m & z == m]:
            maximal.discard(m)
        maximal.add(z)
        work.append(z)
        if len(maximal) > cap:
            raise BudgetExceeded("pointlike family", cap)

    seeds = list(range(S.n)) if order is None else list(order)
    for x in seeds:
        insert(1 << x)
    while work:
        z = work.pop()
        if z not in maximal:
            continue
        insert(ops.omega_operator(z))
        for m in list(maximal):
            if z not in maximal:
                break
            insert(ops.product(z, m))
            insert(ops.product(m, z))
    sets = sorted((frozenset(_members(m)) for m in maximal), key=lambda s: (sorted(s)))
    return PointlikeFamily(S.n, tuple(sets))


def is_closed_family(S, family):
    """Re-applying every rule to the maximal sets adds nothing."""
    ops = _SetOps(S)
    mx = [_bits(m) for m in family.maximal]

    def inside(z):
        return any(z & m == z for m in mx)

    for x in range(S.n):
        if not inside(1 << x):
            return False
    for a in mx:
        if not inside(ops.omega_operator(a)):
            return False
        for b in mx:
            if not inside(ops.product(a, b)):
                return False
    return True


def is_pointlike(S, subset, family=None):
    family = family or henckell_closure(S)
    return family.contains(subset)


@dataclass(frozen=True)
class PointlikeSubgroup:
    j_class: int
    group: tuple              # elements of the maximal subgroup G_J
    subgroup: tuple           # elements of N_J
    normal: bool

    def as_dict(self):
        return {"group": [x + 1 for x in self.group],
                "pointlike_subgroup": [x + 1 for x in self.subgroup],
                "normal": self.normal}


def max_pointlike_subgroup(S, j_class, family=None):
    """Largest subgroup of G_J that is a pointlike set: {g : {e, g} pointlike}."""
    g = S.green
    if not g.regular_j[j_class]:
        raise KRCError("J-class is not regular")
    family = family or henckell_closure(S)
    e = min(x for x in g.j_members[j_class] if x in S.idempotents)
    G = g.h_members[g.h_class[e]]
    N = tuple(x for x in G if family.contains({e, x}))
    if not family.contains(N):
        raise KRCError("pointlike subgroup is not pointlike")
    t = S.table
    Nset = set(N)
    inv = {x: next(y for y in G if t[x][y] == e) for x in G}
    normal = all(t[t[inv[a]][n]][a] in Nset for a in G for n in N)
    return PointlikeSubgroup(j_class, tuple(G), N, normal)


__all__ = [
    "PointlikeFamily", "PointlikeSubgroup", "henckell_closure", "is_closed_family",
    "is_pointlike", "max_pointlike_subgroup",
]
