"""Finite semigroups, transformation semigroups and Green-Rees structure.

Elements are 0-based indices internally. The .smt/.tgen text formats are
1-based (0 marks an undefined image in .tgen).
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

UNDEF = -1

DEFAULT_ELEMENT_BUDGET = 6_000       # the full table is n x n
MAP_CELL_BUDGET = 20_000_000         # elements x states kept by generate_ts


class KRCError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KRCError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class AlgebraError(KRCError):
    """A table or map fails an algebraic requirement (e.g. associativity)."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class BudgetExceeded(KRCError):
    def __init__(self, what, limit, partial=None):
        self.what = what
        self.limit = limit
        self.partial = partial
        super().__init__(f"budget exceeded: {what} > {limit}")


# ---------------------------------------------------------------------------
# closure


def close(seeds, mul_gen, budget=DEFAULT_ELEMENT_BUDGET):
    """Close ``seeds`` under right multiplication by the seeds.

    ``mul_gen(x, i)`` must return ``x * seeds[i]`` as a hashable value.
    Returns ``(elements, table, gen_indices)`` where ``table`` is the full
    multiplication table, built column by column from the BFS words so only
    ``len(elements) * len(seeds)`` calls to ``mul_gen`` are made.
    """
    index = {}
    elems = []
    parent = []
    gen_indices = []
    for i, g in enumerate(seeds):
        if g not in index:
            index[g] = len(elems)
            elems.append(g)
            parent.append((-1, i))
        gen_indices.append(index[g])
    k = len(seeds)
    right = []
    pos = 0
    while pos < len(elems):
        x = elems[pos]
        row = []
        for i in range(k):
            y = mul_gen(x, i)
            j = index.get(y)
            if j is None:
                j = len(elems)
                if budget is not None and j >= budget:
                    raise BudgetExceeded("elements", budget)
                index[y] = j
                elems.append(y)
                parent.append((pos, i))
            row.append(j)
        right.append(row)
        pos += 1
    n = len(elems)
    right_arr = np.array(right, dtype=np.int64).reshape(n, k)
    table = np.empty((n, n), dtype=np.int64)
    for t in range(n):
        p, i = parent[t]
        if p < 0:
            table[:, t] = right_arr[:, i]
        else:
            table[:, t] = right_arr[table[:, p], i]
    return elems, table.tolist(), gen_indices


def compose(s, t):
    """Right action composition of partial maps: first ``s`` then ``t``."""
    return tuple(t[x] if x >= 0 else UNDEF for x in s)


# ---------------------------------------------------------------------------
# semigroups


class FiniteSemigroup:
    """A finite semigroup given by its multiplication table.

    Instances are treated as immutable; derived data (Green's relations,
    idempotents, ...) is cached on first use.
    """

    def __init__(self, table, identity=None, generators=None, labels=None,
                 check=False, name=None):
        rows = table.tolist() if isinstance(table, np.ndarray) else [list(map(int, r)) for r in table]
        self.n = len(rows)
        if self.n == 0:
            raise AlgebraError("a semigroup must have at least one element")
        for i, row in enumerate(rows):
            if len(row) != self.n:
                raise AlgebraError(f"row {i + 1} has {len(row)} entries, expected {self.n}")
            lo, hi = min(row), max(row)
            if lo < 0 or hi >= self.n:
                x = lo if lo < 0 else hi
                raise AlgebraError(f"entry {x + 1} in row {i + 1} out of range")
        # share one int object per value; large tables would otherwise hold n^2 ints
        ints = list(range(self.n))
        self.table = tuple(tuple(map(ints.__getitem__, row)) for row in rows)
        if check:
            bad = find_nonassociative_triple(self.table)
            if bad is not None:
                i, j, k = bad
                raise AlgebraError(
                    f"not associative at ({i + 1},{j + 1},{k + 1})", witness=bad)
        found = _find_identity(self.table)
        if identity is not None and identity != found:
            raise AlgebraError(f"element {identity + 1} is not an identity")
        self.identity = found
        self.generators = tuple(generators) if generators is not None else None
        self.labels = tuple(labels) if labels is not None else None
        self.name = name

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FiniteSemigroup{nm} n={self.n}>"

    def __len__(self):
        return self.n

    def mul(self, x, y):
        return self.table[x][y]

    def product(self, word):
        it = iter(word)
        x = next(it)
        for y in it:
            x = self.table[x][y]
        return x

    def label(self, x):
        if self.labels is None:
            return str(x + 1)
        return str(self.labels[x])

    @cached_property
    def array(self):
        return np.array(self.table, dtype=np.int64)

    @cached_property
    def idempotents(self):
        return frozenset(i for i in range(self.n) if self.table[i][i] == i)

    @cached_property
    def green(self):
        return green(self)

    @cached_property
    def cyclic_data(self):
        """Per element (index, period) of the monogenic subsemigroup."""
        out = []
        t = self.table
        for s in range(self.n):
            seen = {}
            x, k = s, 1
            while x not in seen:
                seen[x] = k
                x = t[x][s]
                k += 1
            out.append((seen[x], k - seen[x]))
        return tuple(out)

    def power_idempotent(self, s):
        """The unique idempotent power s^omega."""
        x = s
        t = self.table
        while t[x][x] != x:
            x = t[x][s]
        return x

    @cached_property
    def generating_set(self):
        """A small generating set, chosen top-down in the J-order."""
        if self.generators is not None:
            return tuple(self.generators)
        return tuple(small_generating_set(self))

    def subsemigroup(self, gens):
        """Element indices of the subsemigroup generated by ``gens``."""
        return frozenset(subsemigroup_closure(self.table, gens))

    def restrict(self, subset, name=None):
        """The subsemigroup on ``subset`` as a FiniteSemigroup plus the index list."""
        elems = sorted(subset)
        pos = {x: i for i, x in enumerate(elems)}
        try:
            table = [[pos[self.table[x][y]] for y in elems] for x in elems]
        except KeyError:
            raise AlgebraError("subset is not closed under multiplication") from None
        labels = [self.label(x) for x in elems] if self.labels is not None else None
        return FiniteSemigroup(table, labels=labels, name=name), elems

    def opposite(self):
        n = self.n
        return FiniteSemigroup([[self.table[j][i] for j in range(n)] for i in range(n)],
                               labels=self.labels)

    def quotient(self, classes):
        """Quotient by a congruence given as a class-id per element.

        Returns ``(quotient, class_of)`` where ``class_of[x]`` is the quotient
        element of ``x``. Class ids are renumbered by first occurrence.
        """
        class_of = canonical_labels(classes)
        k = max(class_of) + 1
        rep = [None] * k
        for x, c in enumerate(class_of):
            if rep[c] is None:
                rep[c] = x
        table = [[class_of[self.table[rep[a]][rep[b]]] for b in range(k)] for a in range(k)]
        return FiniteSemigroup(table), class_of

    def is_associative(self):
        return find_nonassociative_triple(self.table) is None


def canonical_labels(classes):
    """Relabel a class assignment so ids appear in order of first occurrence."""
    seen = {}
    return tuple(seen.setdefault(c, len(seen)) for c in classes)


def _find_identity(table):
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    return None


def find_nonassociative_triple(table):
    """Return the least (i, j, k) with (ij)k != i(jk), or None."""
    t = np.asarray(table, dtype=np.int64)
    n = len(t)
    for i in range(n):
        lhs = t[t[i]]            # lhs[j, k] = (i j) k
        rhs = t[i][t]            # rhs[j, k] = i (j k)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            j, k = bad[0]
            return (i, int(j), int(k))
    return None


def subsemigroup_closure(table, gens):
    gens = list(dict.fromkeys(gens))
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        new = []
        for x in frontier:
            row = table[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def small_generating_set(S):
    g = S.green
    # J-classes sorted from the top of the J-order down
    order = sorted(range(S.n), key=lambda x: (g.j_height[g.j_class[x]], x))
    gens = []
    have = set()
    for x in order:
        if x not in have:
            gens.append(x)
            have = subsemigroup_closure(S.table, gens)
    return gens


def adjoin_identity(S):
    """S^1: returns (monoid, index of identity). Reuses S's identity if present."""
    if S.identity is not None:
        return S, S.identity
    n = S.n
    table = [list(row) + [i] for i, row in enumerate(S.table)]
    table.append(list(range(n + 1)))
    labels = list(S.labels) + ["1"] if S.labels is not None else None
    return FiniteSemigroup(table, labels=labels), n


def direct_product_semigroup(A, B):
    """Abstract direct product; element (a, b) has index a * |B| + b."""
    nb = B.n
    n = A.n * nb
    table = [[0] * n for _ in range(n)]
    for a1 in range(A.n):
        for b1 in range(nb):
            row = table[a1 * nb + b1]
            for a2 in range(A.n):
                a = A.table[a1][a2] * nb
                for b2 in range(nb):
                    row[a2 * nb + b2] = a + B.table[b1][b2]
    return FiniteSemigroup(table)


# ---------------------------------------------------------------------------
# transformation semigroups


@dataclass(frozen=True, eq=False)
class TransformationSemigroup:
    """A faithful action of a semigroup by partial maps on ``range(q)``."""

    q: int
    elements: tuple
    generator_indices: tuple
    abstract: FiniteSemigroup = field(repr=False)

    def __len__(self):
        return len(self.elements)

    @property
    def n(self):
        return len(self.elements)

    def act(self, state, s):
        return self.elements[s][state]

    def element_index(self, mapping):
        return self._index[tuple(mapping)]

    @cached_property
    def _index(self):
        return {m: i for i, m in enumerate(self.elements)}

    @property
    def generators(self):
        return [self.elements[i] for i in self.generator_indices]


def generate_ts(q, gens, budget=DEFAULT_ELEMENT_BUDGET, name=None):
    """Close a list of partial maps on ``range(q)`` under composition.

    Maps use ``UNDEF`` (-1) or ``None`` for undefined images.
    """
    norm = []
    for m, g in enumerate(gens):
        g = tuple(UNDEF if x is None else int(x) for x in g)
        if len(g) != q:
            raise AlgebraError(f"generator {m + 1} has {len(g)} entries, expected {q}")
        if any(not (x == UNDEF or 0 <= x < q) for x in g):
            raise AlgebraError(f"generator {m + 1} has an image outside 1..{q}")
        norm.append(g)
    if not norm:
        raise AlgebraError("at least one generator is required")
    cells = max(1, MAP_CELL_BUDGET // q)
    if budget is None or cells < budget:
        try:
            elems, table, gen_idx = close(norm, lambda x, i: compose(x, norm[i]), cells)
        except BudgetExceeded:
            raise BudgetExceeded("elements x states", MAP_CELL_BUDGET) from None
    else:
        elems, table, gen_idx = close(norm, lambda x, i: compose(x, norm[i]), budget)
    labels = [format_map(e) for e in elems]
    S = FiniteSemigroup(table, generators=sorted(set(gen_idx)), labels=labels, name=name)
    return TransformationSemigroup(q, tuple(elems), tuple(gen_idx), S)


def ts_from_maps(q, maps, name=None):
    """Build a ts whose elements are exactly ``maps`` (must be closed)."""
    maps = [tuple(m) for m in maps]
    index = {m: i for i, m in enumerate(maps)}
    if len(index) != len(maps):
        raise AlgebraError("duplicate maps")
    try:
        table = [[index[compose(a, b)] for b in maps] for a in maps]
    except KeyError:
        raise AlgebraError("maps are not closed under composition") from None
    S = FiniteSemigroup(table, labels=[format_map(m) for m in maps], name=name)
    return TransformationSemigroup(q, tuple(maps), tuple(S.generating_set), S)


def image_semigroup(maps, compose_fn=compose):
    """Faithful image of a family of maps indexed by elements of some S.

    Returns ``(T, image_of)`` with ``T`` the semigroup of distinct maps and
    ``image_of[s]`` the index of ``maps[s]`` in ``T``. The family must be
    closed under ``compose_fn``.
    """
    distinct = list(dict.fromkeys(tuple(m) for m in maps))
    index = {m: i for i, m in enumerate(distinct)}
    table = [[index[tuple(compose_fn(a, b))] for b in distinct] for a in distinct]
    T = FiniteSemigroup(table, labels=[format_map(m) for m in distinct])
    return T, tuple(index[tuple(m)] for m in maps), distinct


def format_map(m):
    return "[" + " ".join("-" if x < 0 else str(x + 1) for x in m) + "]"


def right_regular(S):
    """The right regular representation (S^1, S); states are S then (maybe) 1."""
    M, one = adjoin_identity(S)
    q = M.n
    maps = [tuple(M.table[p][s] for p in range(q)) for s in range(S.n)]
    gens = S.generating_set
    return TransformationSemigroup(q, tuple(maps), tuple(gens), S)


# ---------------------------------------------------------------------------
# Green's relations


@dataclass(frozen=True, eq=False)
class GreenData:
    r_class: tuple
    l_class: tuple
    j_class: tuple
    h_class: tuple
    n_r: int
    n_l: int
    n_j: int
    n_h: int
    j_below: tuple          # j_below[J] = frozenset of J-classes strictly below J
    j_height: tuple         # longest chain of classes above (0 = maximal)
    regular_j: tuple
    idempotents: frozenset
    h_members: tuple
    j_members: tuple
    r_members: tuple
    l_members: tuple
    group_h: dict            # H-class id -> idempotent, for group H-classes

    def subgroup_of(self, S, h):
        """The maximal subgroup on group H-class ``h`` as a FiniteSemigroup."""
        G, _ = S.restrict(self.h_members[h])
        return G

    def j_leq(self, a, b):
        return a == b or a in self.j_below[b]

    def regular_elements(self):
        return frozenset(x for J in range(self.n_j) if self.regular_j[J]
                         for x in self.j_members[J])

    def is_regular(self, x):
        return self.regular_j[self.j_class[x]]

    def rank_profile(self):
        return [(len(self.j_members[J]),
                 len({self.r_class[x] for x in self.j_members[J]}),
                 len({self.l_class[x] for x in self.j_members[J]}),
                 len(self.h_members[self.h_class[self.j_members[J][0]]]),
                 self.regular_j[J]) for J in range(self.n_j)]


def _scc(n, src, dst):
    g = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(g, directed=True, connection="strong")
    return tuple(canonical_labels(labels.tolist()))


def _members(labels, k):
    out = [[] for _ in range(k)]
    for x, c in enumerate(labels):
        out[c].append(x)
    return tuple(tuple(m) for m in out)


# below this size ideal-membership matrices beat sparse SCC calls
DENSE_GREEN_MAX = 400


def _mutual_classes(m):
    both = m & m.T
    return tuple(canonical_labels(np.argmax(both, axis=1).tolist()))


def _dense_classes(t):
    n = len(t)
    idx = np.arange(n)
    right = np.eye(n, dtype=bool)
    right[np.repeat(idx, n), t.reshape(-1)] = True      # y in x S^1
    left = np.eye(n, dtype=bool)
    left[np.repeat(idx, n), t.T.reshape(-1)] = True     # y in S^1 x
    two = (left.astype(np.float32) @ right.astype(np.float32)) > 0
    return _mutual_classes(right), _mutual_classes(left), _mutual_classes(two)


def green(S):
    """Green's relations from principal ideals (strongly connected components when large)."""
    n = S.n
    t = S.array
    # multiplying by generators reaches every principal ideal; fall back to all of S
    cols = np.array(S.generators, dtype=np.int64) if S.generators else np.arange(n)
    rows = np.repeat(np.arange(n), len(cols))
    right_dst = t[:, cols].reshape(-1)     # x -> x*g
    left_dst = t[cols, :].T.reshape(-1)    # x -> g*x
    if n <= DENSE_GREEN_MAX:
        r, l, j = _dense_classes(t)
    else:
        r = _scc(n, rows, right_dst)
        l = _scc(n, rows, left_dst)
        j = _scc(n, np.concatenate([rows, rows]), np.concatenate([right_dst, left_dst]))
    hpairs = {}
    h = tuple(hpairs.setdefault((r[x], l[x]), len(hpairs)) for x in range(n))
    n_j = max(j) + 1
    # condensation of the two-sided Cayley graph
    succ = [set() for _ in range(n_j)]
    ja = np.array(j)
    cs, cd = ja[np.concatenate([rows, rows])], ja[np.concatenate([right_dst, left_dst])]
    mask = cs != cd
    pairs = np.unique(np.stack([cs[mask], cd[mask]], axis=1), axis=0)
    for a, b in pairs.tolist():
        succ[a].add(b)
    below = [None] * n_j

    def visit(v):
        stack = [(v, iter(succ[v]))]
        on_stack = {v}
        while stack:
            node, it = stack[-1]
            for w in it:
                if below[w] is None and w not in on_stack:
                    on_stack.add(w)
                    stack.append((w, iter(succ[w])))
                    break
            else:
                stack.pop()
                s = set()
                for w in succ[node]:
                    s.add(w)
                    s |= below[w]
                below[node] = frozenset(s)

    for v in range(n_j):
        if below[v] is None:
            visit(v)
    # strictly-below sets shrink along the order, so this is topological
    height = [0] * n_j
    for v in sorted(range(n_j), key=lambda v: -len(below[v])):
        for w in succ[v]:
            height[w] = max(height[w], height[v] + 1)
    idem = S.idempotents
    regular = [False] * n_j
    group_h = {}
    for e in idem:
        regular[j[e]] = True
        group_h[h[e]] = e
    return GreenData(
        r_class=r, l_class=l, j_class=j, h_class=h,
        n_r=max(r) + 1, n_l=max(l) + 1, n_j=n_j, n_h=len(hpairs),
        j_below=tuple(below), j_height=tuple(height), regular_j=tuple(regular),
        idempotents=idem, h_members=_members(h, len(hpairs)),
        j_members=_members(j, n_j), r_members=_members(r, max(r) + 1),
        l_members=_members(l, max(l) + 1), group_h=group_h)


def is_aperiodic(S):
    """True iff every element has period 1 (all maximal subgroups trivial)."""
    return all(p == 1 for _, p in S.cyclic_data)


def is_aperiodic_subset(S, subset):
    cd = S.cyclic_data
    return all(cd[x][1] == 1 for x in subset)


def is_group(S):
    if S.identity is None:
        return False
    e = S.identity
    return all(any(S.table[x][y] == e for y in range(S.n)) for x in range(S.n))


def normal_closure(S, gens):
    """Normal subgroup generated by ``gens`` inside the group S."""
    inv = group_inverses(S)
    t = S.table
    conj = {t[t[inv[g]][x]][g] for g in range(S.n) for x in gens}
    return subsemigroup_closure(t, conj | {S.identity})


def group_inverses(S):
    e = S.identity
    return [next(y for y in range(S.n) if S.table[x][y] == e) for x in range(S.n)]


def is_simple_group(S):
    if not is_group(S) or S.n == 1:
        return False
    return all(len(normal_closure(S, [x])) == S.n for x in range(S.n) if x != S.identity)


def is_regular_semigroup(S):
    return all(S.green.regular_j)


def is_inverse_semigroup(S):
    if not is_regular_semigroup(S):
        return False
    E = sorted(S.idempotents)
    t = S.table
    return all(t[e][f] == t[f][e] for e in E for f in E)


def is_completely_regular(S):
    return all(i == 1 for i, _ in S.cyclic_data)


def is_semilattice(S):
    t = S.table
    return all(t[x][x] == x for x in range(S.n)) and all(
        t[x][y] == t[y][x] for x in range(S.n) for y in range(x))


@dataclass(frozen=True)
class Classification:
    is_aperiodic: bool
    is_group: bool
    is_simple_group: bool
    is_inverse: bool
    is_completely_regular: bool
    is_semilattice: bool
    is_prime: bool

    def as_dict(self):
        return dict(self.__dict__)


def _flipflop_subsemigroups():
    ff = standard_semigroup("flipflop").abstract
    out = []
    for k in range(1, ff.n + 1):
        for sub in itertools.combinations(range(ff.n), k):
            if subsemigroup_closure(ff.table, sub) == set(sub):
                out.append(ff.restrict(sub)[0])
    return out


def classify(S):
    ap = is_aperiodic(S)
    grp = is_group(S)
    simple = is_simple_group(S)
    prime = simple
    if not prime and S.n <= 3 and ap:
        prime = any(isomorphism(S, F) is not None for F in _flipflop_subsemigroups())
    return Classification(
        is_aperiodic=ap, is_group=grp, is_simple_group=simple,
        is_inverse=is_inverse_semigroup(S),
        is_completely_regular=is_completely_regular(S),
        is_semilattice=is_semilattice(S), is_prime=prime)


# ---------------------------------------------------------------------------
# isomorphism


def element_invariants(S):
    g = S.green
    t = S.table
    roots = [0] * S.n
    for x in range(S.n):
        roots[t[x][x]] += 1
    return tuple(
        (x in S.idempotents, S.cyclic_data[x], len(g.r_members[g.r_class[x]]),
         len(g.l_members[g.l_class[x]]), len(g.j_members[g.j_class[x]]),
         g.j_height[g.j_class[x]], len(g.j_below[g.j_class[x]]), roots[x])
        for x in range(S.n))


def semigroup_invariant(S):
    """A cheap isomorphism invariant, used to bucket semigroups."""
    return (S.n, tuple(sorted(element_invariants(S))))


def isomorphism(S, T):
    """An isomorphism S -> T as a tuple, or None.

    Backtracks over images of a small generating set of S, pruned by
    element invariants and by extending the partial map along the closure
    of the generators assigned so far.
    """
    if S.n != T.n:
        return None
    inv_s, inv_t = element_invariants(S), element_invariants(T)
    if sorted(inv_s) != sorted(inv_t):
        return None
    gens = list(S.generating_set)
    cands = [[y for y in range(T.n) if inv_t[y] == inv_s[g]] for g in gens]
    order = sorted(range(len(gens)), key=lambda i: len(cands[i]))
    gens = [gens[i] for i in order]
    cands = [cands[i] for i in order]
    st, tt = S.table, T.table

    def extend(phi, used, assigned):
        # close the domain of phi under right multiplication by assigned gens
        frontier = list(phi)
        while frontier:
            nxt = []
            for x in frontier:
                for g in assigned:
                    y = st[x][g]
                    img = tt[phi[x]][phi[g]]
                    if y in phi:
                        if phi[y] != img:
                            return False
                    else:
                        if inv_t[img] != inv_s[y] or img in used:
                            return False
                        phi[y] = img
                        used.add(img)
                        nxt.append(y)
            frontier = nxt
        return True

    def search(i, phi, used):
        if i == len(gens):
            return phi
        g = gens[i]
        if g in phi:
            return search(i + 1, phi, used)
        assigned = [h for h in gens[:i + 1] if h in phi or h == g]
        for c in cands[i]:
            if c in used:
                continue
            phi2, used2 = dict(phi), set(used)
            phi2[g] = c
            used2.add(c)
            if extend(phi2, used2, assigned):
                res = search(i + 1, phi2, used2)
                if res is not None:
                    return res
        return None

    phi = search(0, {}, set())
    if phi is None or len(phi) != S.n:
        return None
    m = tuple(phi[x] for x in range(S.n))
    for x in range(S.n):
        for y in range(S.n):
            if tt[m[x]][m[y]] != m[st[x][y]]:
                return None
    return m


def is_isomorphic(S, T):
    return isomorphism(S, T) is not None


class IsoMemo:
    """A dictionary keyed by semigroups up to isomorphism."""

    def __init__(self):
        self._buckets = {}

    def _bucket(self, S):
        return self._buckets.setdefault(semigroup_invariant(S), [])

    def get(self, S, default=None):
        for T, v in self._bucket(S):
            if T is S or is_isomorphic(S, T):
                return v
        return default

    def __contains__(self, S):
        sentinel = object()
        return self.get(S, sentinel) is not sentinel

    def set(self, S, value):
        b = self._bucket(S)
        for i, (T, _) in enumerate(b):
            if T is S or is_isomorphic(S, T):
                b[i] = (T, value)
                return
        b.append((S, value))

    def __len__(self):
        return sum(len(b) for b in self._buckets.values())


# ---------------------------------------------------------------------------
# standard examples


def _cycle(n):
    return tuple((i + 1) % n for i in range(n))


def _transposition(n):
    return (1, 0) + tuple(range(2, n))


def standard_semigroup(name, n=None, budget=DEFAULT_ELEMENT_BUDGET):
    """Named transformation semigroups: T, SIS, Sym, Z, flipflop, constants."""
    key = name.lower()
    if key == "flipflop":
        return generate_ts(2, [(0, 0), (1, 1), (0, 1)], budget, name="flipflop")
    if n is None or n < 1:
        raise KRCError(f"{name} needs a positive size")
    if key == "t":
        gens = [tuple(range(n))] if n == 1 else [
            _cycle(n), _transposition(n), (0, 0) + tuple(range(2, n))]
        if n == 2:
            gens = gens[1:]
    elif key == "sis":
        partial_id = (UNDEF,) + tuple(range(1, n))
        gens = [partial_id] if n == 1 else [_cycle(n), _transposition(n), partial_id]
        gens = [tuple(range(n))] + gens
    elif key == "sym":
        gens = [tuple(range(n))] if n == 1 else [_cycle(n), _transposition(n)]
    elif key in ("z", "cyclic"):
        gens = [_cycle(n)]
    elif key == "constants":
        gens = [(c,) * n for c in range(n)]
    else:
        raise KRCError(f"unknown standard semigroup {name!r}")
    _check_size(key, n, budget)
    return generate_ts(n, gens, budget, name=f"{name}{n}")


def _check_size(key, n, budget):
    sizes = {"t": n ** n, "sym": math.factorial(n),
             "sis": sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))}
    if budget is not None and sizes.get(key, 0) > budget:
        raise BudgetExceeded("elements", budget)


_BUILTIN_RE = re.compile(r"^([A-Za-z]+?)(\d*)$")


def builtin(spec, budget=DEFAULT_ELEMENT_BUDGET):
    """Resolve names like ``T3``, ``SIS2``, ``Z2``, ``flipflop``, ``constants4``."""
    m = _BUILTIN_RE.match(spec.strip())
    if not m:
        raise KRCError(f"bad builtin name {spec!r}")
    name, num = m.group(1), m.group(2)
    if name.lower() == "flipflop":
        return standard_semigroup("flipflop")
    return standard_semigroup(name, int(num) if num else None, budget)


# ---------------------------------------------------------------------------
# text formats


def _strip_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _ints(line, lineno):
    out = []
    for col, tok in enumerate(line.split(), 1):
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None
    return out


def parse_semigroup(text):
    """Parse the .smt multiplication-table format (1-based entries)."""
    lines = list(_strip_lines(text))
    if not lines:
        raise ParseError("empty input")
    lineno, first = lines[0]
    head = _ints(first, lineno)
    if len(head) != 1 or head[0] < 1:
        raise ParseError("first line must be the element count", lineno)
    n = head[0]
    identity = None
    rows = []
    for lineno, line in lines[1:]:
        if line.lower().startswith("identity"):
            vals = _ints(line.split(None, 1)[1] if " " in line else "", lineno)
            if len(vals) != 1 or not 1 <= vals[0] <= n:
                raise ParseError("identity header needs one element in 1..n", lineno)
            identity = vals[0] - 1
            continue
        row = _ints(line, lineno)
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", lineno)
        for col, x in enumerate(row, 1):
            if not 1 <= x <= n:
                raise ParseError(f"entry {x} outside 1..{n}", lineno, col)
        rows.append([x - 1 for x in row])
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}")
    return FiniteSemigroup(rows, identity=identity, check=True)


def format_semigroup(S):
    lines = [str(S.n)]
    lines += [" ".join(str(x + 1) for x in row) for row in S.table]
    return "\n".join(lines) + "\n"


def parse_tgen(text, budget=DEFAULT_ELEMENT_BUDGET):
    """Parse the .tgen generator format and generate the ts."""
    lines = list(_strip_lines(text))
    if not lines:
        raise ParseError("empty input")
    lineno, first = lines[0]
    head = _ints(first, lineno)
    if len(head) != 2 or head[0] < 1 or head[1] < 1:
        raise ParseError("first line must be 'q m'", lineno)
    q, m = head
    gens = []
    for lineno, line in lines[1:]:
        row = _ints(line, lineno)
        if len(row) != q:
            raise ParseError(f"generator has {len(row)} entries, expected {q}", lineno)
        for col, x in enumerate(row, 1):
            if not 0 <= x <= q:
                raise ParseError(f"image {x} outside 0..{q}", lineno, col)
        gens.append(tuple(x - 1 for x in row))
    if len(gens) != m:
        raise ParseError(f"expected {m} generators, found {len(gens)}")
    return generate_ts(q, gens, budget)


def format_tgen(gens, q):
    lines = [f"{q} {len(gens)}"]
    lines += [" ".join(str(x + 1) for x in g) for g in gens]
    return "\n".join(lines) + "\n"
