"""Brute-force reference implementations, written independently of krc.

Everything here works on plain multiplication tables (lists of lists) and
uses the textbook definitions directly, so it is slow but easy to trust.
"""
from __future__ import annotations

import itertools


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def labels_of(part, n):
    lab = [None] * n
    for i, blk in enumerate(part):
        for x in blk:
            lab[x] = i
    return lab


# ---------------------------------------------------------------------------
# Green's relations by ideal comparison


def ideals(t):
    n = len(t)
    right = [frozenset([x] + [t[x][s] for s in range(n)]) for x in range(n)]
    left = [frozenset([x] + [t[s][x] for s in range(n)]) for x in range(n)]
    two = [frozenset([x] + [t[a][x] for a in range(n)] + [t[x][b] for b in range(n)]
                     + [t[t[a][x]][b] for a in range(n) for b in range(n)]) for x in range(n)]
    return right, left, two


def green_partitions(t):
    right, left, two = ideals(t)
    n = len(t)
    r = [right.index(right[x]) for x in range(n)]
    r = [min(y for y in range(n) if right[y] == right[x]) for x in range(n)]
    l = [min(y for y in range(n) if left[y] == left[x]) for x in range(n)]
    j = [min(y for y in range(n) if two[y] == two[x]) for x in range(n)]
    return r, l, j, two


def same_partition(a, b):
    m1, m2 = {}, {}
    for x, y in zip(a, b):
        if m1.setdefault(x, y) != y or m2.setdefault(y, x) != x:
            return False
    return True


# ---------------------------------------------------------------------------
# elementwise facts


def idempotents(t):
    return {x for x in range(len(t)) if t[x][x] == x}


def power(t, x, k):
    y = x
    for _ in range(k - 1):
        y = t[y][x]
    return y


def is_aperiodic_by_powers(t):
    n = len(t)
    k = 1
    for i in range(2, n + 1):
        k *= i
    return all(power(t, x, k) == power(t, x, k + 1) for x in range(n))


def closure(t, gens):
    out = set(gens)
    while True:
        new = {t[a][b] for a in out for b in out} - out
        if not new:
            return out
        out |= new


def is_group_table(t):
    n = len(t)
    return all(sorted(row) == list(range(n)) for row in t) and all(
        sorted(t[i][j] for i in range(n)) == list(range(n)) for j in range(n))


def subgroup_orders(t):
    """Orders of the maximal subgroups (H-classes of idempotents)."""
    r, l, _, _ = green_partitions(t)
    out = []
    for e in idempotents(t):
        out.append(sum(1 for x in range(len(t)) if r[x] == r[e] and l[x] == l[e]))
    return out


# ---------------------------------------------------------------------------
# congruences, morphisms, isomorphism


def is_congruence(t, lab):
    n = len(t)
    for x in range(n):
        for y in range(n):
            if lab[x] != lab[y]:
                continue
            for z in range(n):
                if lab[t[x][z]] != lab[t[y][z]] or lab[t[z][x]] != lab[t[z][y]]:
                    return False
    return True


def all_congruences(t):
    n = len(t)
    return [labels_of(p, n) for p in set_partitions(range(n)) if is_congruence(t, labels_of(p, n))]


def quotient_table(t, lab):
    reps = {}
    for x, c in enumerate(lab):
        reps.setdefault(c, x)
    ids = sorted(reps)
    pos = {c: i for i, c in enumerate(ids)}
    return [[pos[lab[t[reps[a]][reps[b]]]] for b in ids] for a in ids]


def isomorphic(t1, t2):
    n = len(t1)
    if n != len(t2):
        return False
    for perm in itertools.permutations(range(n)):
        if all(perm[t1[a][b]] == t2[perm[a]][perm[b]] for a in range(n) for b in range(n)):
            return True
    return False


def divides(ts, tt):
    """S | T by trying every closed subset of T and every map onto S."""
    ns, nt = len(ts), len(tt)
    for k in range(ns, nt + 1):
        for sub in itertools.combinations(range(nt), k):
            if closure(tt, sub) != set(sub):
                continue
            for img in itertools.product(range(ns), repeat=k):
                if len(set(img)) != ns:
                    continue
                f = dict(zip(sub, img))
                if all(f[tt[a][b]] == ts[f[a]][f[b]] for a in sub for b in sub):
                    return True
    return False


# ---------------------------------------------------------------------------
# type II via its defining closure


def type_II(t):
    n = len(t)
    k = idempotents(t)
    pairs = [(x, y) for x in range(n) for y in range(n) if t[t[x][y]][x] == x]
    while True:
        new = {t[a][b] for a in k for b in k}
        for x, y in pairs:
            for z in k:
                new.add(t[t[x][z]][y])
                new.add(t[t[y][z]][x])
        if new <= k:
            return k
        k = k | new


# ---------------------------------------------------------------------------
# transformation semigroups


def ts_congruences(maps, q):
    out = []
    for p in set_partitions(range(q)):
        lab = labels_of(p, q)
        ok = True
        for m in maps:
            img = {}
            for s, y in enumerate(m):
                if y < 0:
                    continue
                if img.setdefault(lab[s], lab[y]) != lab[y]:
                    ok = False
        if ok:
            out.append(lab)
    return out


def is_injective_on_classes(maps, lab):
    for m in maps:
        pre = {}
        for s, y in enumerate(m):
            if y < 0:
                continue
            if pre.setdefault(lab[y], lab[s]) != lab[s]:
                return False
    return True


def least_injective_congruence(maps, q):
    cands = [lab for lab in ts_congruences(maps, q) if is_injective_on_classes(maps, lab)]
    least = [lab for lab in cands if all(refines(lab, other) for other in cands)]
    return least[0] if least else None


def refines(a, b):
    m = {}
    return all(m.setdefault(x, y) == y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# graphs


def simple_path_counts(edges, root):
    """edges[v] = list of targets (None allowed); counts edge-sequence simple paths."""
    counts = [0] * len(edges)

    def walk(v, seen):
        counts[v] += 1
        for w in edges[v]:
            if w is not None and w not in seen:
                walk(w, seen | {w})

    walk(root, {root})
    return counts


# ---------------------------------------------------------------------------
# pointlikes: relational morphisms into a fixed aperiodic T


def generated_relations(ts, tt, gens):
    """Every relational morphism S -> T generated by choosing images of ``gens``."""
    for choice in itertools.product(range(len(tt)), repeat=len(gens)):
        rel = set(zip(gens, choice))
        while True:
            new = {(ts[a][c], tt[b][d]) for a, b in rel for c, d in rel} - rel
            if not new:
                break
            rel |= new
        yield rel


def covered_by_all_relations(ts, tt, gens, Y):
    """For each generated relation, some t relates to all of Y."""
    for rel in generated_relations(ts, tt, gens):
        if not any(all((y, t) in rel for y in Y) for t in range(len(tt))):
            return False
    return True


# ---------------------------------------------------------------------------
# inverse semigroups


def least_group_congruence(t):
    groups = [lab for lab in all_congruences(t) if is_group_table(quotient_table(t, lab))]
    least = [lab for lab in groups if all(refines(lab, other) for other in groups)]
    return least[0]


def largest_congruence_in_h(t):
    r, l, _, _ = green_partitions(t)
    inside = [lab for lab in all_congruences(t)
              if all(r[x] == r[y] and l[x] == l[y]
                     for x in range(len(t)) for y in range(len(t)) if lab[x] == lab[y])]
    top = [lab for lab in inside if all(refines(other, lab) for other in inside)]
    return top[0]
