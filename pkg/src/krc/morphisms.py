"""Morphisms, congruences, the maximal L' image and Ap-L' chain numbers."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from krc.core import (
    UNDEF,
    AlgebraError,
    BudgetExceeded,
    FiniteSemigroup,
    IsoMemo,
    KRCError,
    canonical_labels,
    compose,
    image_semigroup,
    is_aperiodic,
)

CONGRUENCE_CAP = 40
THETA_CAP = 34


class NotAMorphism(AlgebraError):
    pass


@dataclass(frozen=True, eq=False)
class Morphism:
    source: FiniteSemigroup
    target: FiniteSemigroup
    map: tuple

    def __post_init__(self):
        S, T, f = self.source, self.target, self.map
        if len(f) != S.n:
            raise NotAMorphism("map length does not match the source")
        for x in range(S.n):
            fx = f[x]
            row = S.table[x]
            trow = T.table[fx]
            for y in range(S.n):
                if f[row[y]] != trow[f[y]]:
                    raise NotAMorphism(f"f({x + 1}*{y + 1}) != f({x + 1})f({y + 1})")

    def __call__(self, x):
        return self.map[x]

    @property
    def is_surjective(self):
        return len(set(self.map)) == self.target.n

    @property
    def is_injective(self):
        return len(set(self.map)) == self.source.n

    def then(self, other):
        """Composite: first self, then other."""
        return Morphism(self.source, other.target, tuple(other.map[y] for y in self.map))

    def kernel(self):
        return Congruence(canonical_labels(self.map))


@dataclass(frozen=True)
class Congruence:
    """A partition given as canonical class labels per element."""

    classes: tuple

    @property
    def n_classes(self):
        return max(self.classes) + 1

    def blocks(self):
        out = [[] for _ in range(self.n_classes)]
        for x, c in enumerate(self.classes):
            out[c].append(x)
        return out

    def is_trivial(self):
        return self.n_classes == len(self.classes)

    def is_universal(self):
        return self.n_classes == 1

    def leq(self, other):
        """Refinement order: every class of self lies in a class of other."""
        m = {}
        return all(m.setdefault(a, b) == b for a, b in zip(self.classes, other.classes))


def is_congruence(S, classes):
    t = S.table
    blocks = {}
    for x, c in enumerate(classes):
        blocks.setdefault(c, x)
    for x in range(S.n):
        r = blocks[classes[x]]
        if r == x:
            continue
        for z in range(S.n):
            if classes[t[x][z]] != classes[t[r][z]] or classes[t[z][x]] != classes[t[z][r]]:
                return False
    return True


def quotient_morphism(S, classes):
    Q, class_of = S.quotient(classes)
    return Morphism(S, Q, class_of)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class MorphismKind:
    aperiodic: bool
    lprime: bool
    idempotent_pure: bool
    idempotent_separating: bool

    def as_dict(self):
        return dict(self.__dict__)


def kernel_is_aperiodic(S, classes):
    """Preimage of every idempotent of the image is an aperiodic subsemigroup."""
    t = S.table
    cd = S.cyclic_data
    rep = {}
    for x, c in enumerate(classes):
        rep.setdefault(c, x)
    idem_classes = {c for c, x in rep.items() if classes[t[x][x]] == c}
    return all(cd[x][1] == 1 for x, c in enumerate(classes) if c in idem_classes)


def kernel_is_lprime(S, classes):
    g = S.green
    seen = {}
    for x, c in enumerate(classes):
        if g.is_regular(x) and seen.setdefault(c, g.l_class[x]) != g.l_class[x]:
            return False
    return True


def classify_morphism(f):
    S, T = f.source, f.target
    classes = f.map
    pure = all(x in S.idempotents for x in range(S.n) if classes[x] in T.idempotents)
    idem_images = [classes[e] for e in S.idempotents]
    return MorphismKind(
        aperiodic=kernel_is_aperiodic(S, classes),
        lprime=kernel_is_lprime(S, classes),
        idempotent_pure=pure,
        idempotent_separating=len(set(idem_images)) == len(idem_images))


# ---------------------------------------------------------------------------
# the maximal L' image


@dataclass(frozen=True, eq=False)
class LPrimeAction:
    """Action of S on its regular L-classes (undefined when leaving the D-class)."""

    l_classes: tuple          # L-class ids of S, in state order
    maps: tuple               # per element of S, a partial map on the states


def lprime_action(S):
    g = S.green
    states = tuple(l for l in range(g.n_l) if g.is_regular(g.l_members[l][0]))
    pos = {l: i for i, l in enumerate(states)}
    t = S.table
    maps = []
    for s in range(S.n):
        m = []
        for l in states:
            x = g.l_members[l][0]
            y = t[x][s]
            m.append(pos[g.l_class[y]] if g.j_class[y] == g.j_class[x] else UNDEF)
        maps.append(tuple(m))
    return LPrimeAction(states, tuple(maps))


def lprime_image(S):
    """Return (S^L', sigma_L) for the faithful image of the L-class action."""
    act = lprime_action(S)
    T, image_of, _ = image_semigroup(act.maps, compose)
    return T, Morphism(S, T, image_of)


# ---------------------------------------------------------------------------
# congruence enumeration


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def congruence_closure(S, pairs, base=None, gens=None):
    """Least congruence containing ``base`` (class labels) and ``pairs``."""
    n = S.n
    parent = list(range(n))
    work = []
    if base is not None:
        first = {}
        for x, c in enumerate(base):
            r = first.setdefault(c, x)
            if r != x:
                parent[_find(parent, x)] = _find(parent, r)
    t = S.table
    if gens is None:
        gens = S.generating_set

    def union(a, b):
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            work.append((a, b))

    for a, b in pairs:
        union(a, b)
    while work:
        a, b = work.pop()
        ra, rb = t[a], t[b]
        for g in gens:
            union(ra[g], rb[g])
            union(t[g][a], t[g][b])
    return canonical_labels(_find(parent, x) for x in range(n))


def principal_congruences(S):
    """Distinct principal congruences theta(a, b), a < b, in (a, b) order."""
    seen = {}
    for a in range(S.n):
        for b in range(a + 1, S.n):
            c = congruence_closure(S, [(a, b)])
            if c not in seen:
                seen[c] = (a, b)
    return seen


def _join(c1, c2):
    n = len(c1)
    parent = list(range(n))
    for c in (c1, c2):
        first = {}
        for x, k in enumerate(c):
            r = first.setdefault(k, x)
            ra, rx = _find(parent, r), _find(parent, x)
            if ra != rx:
                parent[max(ra, rx)] = min(ra, rx)
    return canonical_labels(_find(parent, x) for x in range(n))


def congruences(S, cap=CONGRUENCE_CAP, limit=100_000):
    """All congruences of S as join-closure of the principal ones."""
    if cap is not None and S.n > cap:
        raise BudgetExceeded("congruence enumeration size", cap)
    principal = list(principal_congruences(S))
    trivial = tuple(range(S.n))
    found = {trivial: None}
    queue = deque([trivial])
    while queue:
        c = queue.popleft()
        for p in principal:
            j = _join(c, p)
            if j not in found:
                found[j] = None
                if len(found) > limit:
                    raise BudgetExceeded("congruences", limit)
                queue.append(j)
    return [Congruence(c) for c in sorted(found, key=lambda c: (-max(c), c))]


# ---------------------------------------------------------------------------
# theta


@dataclass
class ThetaResult:
    value: int
    exact: bool
    chain: list          # [(size, "aperiodic" | "lprime"), ...] from S down to 1

    def as_dict(self):
        return {"value": self.value, "exact": self.exact,
                "chain": [{"size": n, "step": k} for n, k in self.chain]}


def _step_kind(S, classes):
    if kernel_is_aperiodic(S, classes):
        return 0
    if kernel_is_lprime(S, classes):
        return 1
    return None


def theta_exact(S, cap=THETA_CAP, node_limit=20_000):
    """Minimal number of L' steps in an Ap-L' factorization of S -> 1.

    Shortest path (0-1 BFS) over quotients of S up to isomorphism, using
    every proper congruence of each quotient as a move.
    """
    if cap is not None and S.n > cap:
        raise BudgetExceeded("theta_exact size", cap)
    memo = IsoMemo()
    nodes = [S]
    dist = [0]
    back = [None]
    memo.set(S, 0)
    dq = deque([0])
    done = set()
    while dq:
        i = dq.popleft()
        if i in done:
            continue
        done.add(i)
        T = nodes[i]
        if is_aperiodic(T):
            return ThetaResult(dist[i], True, _trace(nodes, back, i))
        for c in congruences(T, cap=None):
            if c.is_trivial():
                continue
            kind = _step_kind(T, c.classes)
            if kind is None:
                continue
            Q, _ = T.quotient(c.classes)
            j = memo.get(Q)
            if j is None:
                j = len(nodes)
                if j > node_limit:
                    raise BudgetExceeded("theta search nodes", node_limit)
                nodes.append(Q)
                dist.append(dist[i] + kind)
                back.append((i, kind))
                memo.set(Q, j)
            elif dist[i] + kind < dist[j]:
                dist[j] = dist[i] + kind
                back[j] = (i, kind)
            else:
                continue
            if kind == 0:
                dq.appendleft(j)
            else:
                dq.append(j)
    raise KRCError("no Ap-L' factorization found")  # unreachable: sigma chains exist


def _trace(nodes, back, i):
    """Steps (source size, kind) from S down to 1; the last step is tau."""
    steps = [(nodes[i].n, "aperiodic")]
    while back[i] is not None:
        j, kind = back[i]
        steps.append((nodes[j].n, "lprime" if kind else "aperiodic"))
        i = j
    steps.reverse()
    return steps


def aperiodic_shrink(S, size_cap=256):
    """Greedily quotient S by principal congruences with aperiodic kernels.

    Returns ``(T, class_of)``; the composite S -> T is an aperiodic surjection,
    so T has the same complexity as S. No maximality is claimed.
    """
    current = S
    class_of = tuple(range(S.n))
    while current.n > 1 and current.n <= size_cap:
        c = _first_aperiodic_principal(current)
        if c is None:
            break
        Q, qmap = current.quotient(c)
        class_of = tuple(qmap[x] for x in class_of)
        current = Q
    return current, class_of


def _group_labels(S):
    """H-class index for elements of maximal subgroups, -1 elsewhere."""
    g = S.green
    groups = {g.h_class[e] for e in S.idempotents}
    return [g.h_class[x] if g.h_class[x] in groups else -1 for x in range(S.n)]


def _aperiodic_closure(S, a, b, glabel, gens):
    """Congruence generated by (a, b), or None once it merges two elements of
    one subgroup (an aperiodic kernel is the same as injective on subgroups)."""
    t = S.table
    parent = list(range(S.n))
    members = [{glabel[x]: x} if glabel[x] >= 0 else {} for x in range(S.n)]
    size = [1] * S.n
    work = []

    def union(x, y):
        rx, ry = _find(parent, x), _find(parent, y)
        if rx == ry:
            return True
        if size[rx] < size[ry]:
            rx, ry = ry, rx
        big = members[rx]
        for lab, z in members[ry].items():
            if big.setdefault(lab, z) != z:
                return False
        parent[ry] = rx
        size[rx] += size[ry]
        work.append((x, y))
        return True

    if not union(a, b):
        return None
    while work:
        x, y = work.pop()
        rx, ry = t[x], t[y]
        for g in gens:
            if not (union(rx[g], ry[g]) and union(t[g][x], t[g][y])):
                return None
    return canonical_labels(_find(parent, x) for x in range(S.n))


def _first_aperiodic_principal(S):
    glabel = _group_labels(S)
    gens = S.generating_set
    for a in range(S.n):
        for b in range(a + 1, S.n):
            if glabel[a] >= 0 and glabel[a] == glabel[b]:
                continue
            c = _aperiodic_closure(S, a, b, glabel, gens)
            if c is not None and kernel_is_aperiodic(S, c):
                return c
    return None


NO_PROGRESS = None


def theta_upper_greedy(S, max_rounds=64):
    """Alternate aperiodic shrinking with sigma_L, counting L' steps.

    Returns an upper bound on theta, or ``NO_PROGRESS`` (None) when sigma_L
    is injective on a non-aperiodic intermediate.
    """
    count = 0
    T = S
    for _ in range(max_rounds):
        T, _ = aperiodic_shrink(T)
        if is_aperiodic(T):
            return count
        U, sigma = lprime_image(T)
        if U.n == T.n:
            return NO_PROGRESS
        T = U
        count += 1
    return NO_PROGRESS
