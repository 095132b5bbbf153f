"""Inverse semigroups: maximal group image, E-unitary test, fundamental image, McRe."""
from __future__ import annotations

from dataclasses import dataclass

from krc.core import (
    UNDEF,
    AlgebraError,
    FiniteSemigroup,
    canonical_labels,
    compose,
    direct_product_semigroup,
    image_semigroup,
    is_group,
    is_inverse_semigroup,
    is_isomorphic,
    right_regular,
    standard_semigroup,
)
from krc.morphisms import Morphism, kernel_is_aperiodic, lprime_image

MCRE_DIVISION_CAP = 256


class NotInverse(AlgebraError):
    pass


def _require_inverse(S):
    if not is_inverse_semigroup(S):
        raise NotInverse("semigroup is not inverse")


def inverses(S):
    """s -> the unique t with sts = s and tst = t."""
    _require_inverse(S)
    t = S.table
    out = []
    for s in range(S.n):
        out.append(next(x for x in range(S.n) if t[t[s][x]][s] == s and t[t[x][s]][x] == x))
    return tuple(out)


def natural_leq(S, s, u):
    """s <= u in the natural partial order: s = e u for some idempotent e."""
    t = S.table
    return any(t[e][u] == s for e in S.idempotents)


def _union_classes(n, groups):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for members in groups:
        members = list(members)
        for y in members[1:]:
            a, b = find(members[0]), find(y)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return canonical_labels(find(x) for x in range(n))


def least_group_congruence(S):
    """s ~ t iff es = et for some idempotent e."""
    _require_inverse(S)
    t = S.table
    groups = []
    for e in sorted(S.idempotents):
        by_value = {}
        for s in range(S.n):
            by_value.setdefault(t[e][s], []).append(s)
        groups.extend(by_value.values())
    return _union_classes(S.n, groups)


def max_group_image(S):
    classes = least_group_congruence(S)
    G, class_of = S.quotient(classes)
    if not is_group(G):
        raise AlgebraError("least group congruence did not yield a group")
    return G, Morphism(S, G, class_of)


@dataclass(frozen=True)
class EUnitary:
    aperiodic: bool           # sigma is an aperiodic morphism
    idempotent_pure: bool     # E(S) is a single kernel class

    def __bool__(self):
        return self.idempotent_pure

    @property
    def agree(self):
        return self.aperiodic == self.idempotent_pure


def e_unitary(S):
    """Both tests on the maximal group image morphism.

    Idempotent-pure implies aperiodic, but not conversely: an aperiodic
    inverse semigroup that is not a semilattice (B2, say) has an aperiodic
    sigma that is not idempotent-pure. The verdict is the idempotent-pure one.
    """
    G, sigma = max_group_image(S)
    classes = sigma.map
    one = classes[next(iter(S.idempotents))]
    pure = {x for x in range(S.n) if classes[x] == one} == set(S.idempotents)
    ap = kernel_is_aperiodic(S, classes)
    if pure and not ap:
        raise AlgebraError("idempotent-pure group image morphism is not aperiodic")
    return EUnitary(ap, pure)


def is_e_unitary(S):
    return e_unitary(S).idempotent_pure


def munn_maps(S):
    """s acts on the idempotents below ss^-1 by e -> s^-1 e s."""
    inv = inverses(S)
    t = S.table
    E = sorted(S.idempotents)
    pos = {e: i for i, e in enumerate(E)}
    maps = []
    for s in range(S.n):
        top = t[s][inv[s]]
        m = []
        for e in E:
            if t[e][top] == e:
                m.append(pos[t[t[inv[s]][e]][s]])
            else:
                m.append(UNDEF)
        maps.append(tuple(m))
    return E, tuple(maps)


def munn_image(S):
    _, maps = munn_maps(S)
    T, image_of, _ = image_semigroup(maps, compose)
    return T, Morphism(S, T, image_of)


def fundamental_image(S):
    """The quotient by the largest congruence inside H, computed two ways.

    The Munn representation and the maximal L' image must have the same
    kernel; the Munn quotient is returned.
    """
    _require_inverse(S)
    T, mu = munn_image(S)
    L, sigma = lprime_image(S)
    if mu.kernel() != sigma.kernel():
        raise AlgebraError("Munn and L' kernels differ")
    if not is_isomorphic(T, L):
        raise AlgebraError("Munn and L' images are not isomorphic")
    g = S.green
    if any(g.h_class[x] != g.h_class[y] for b in mu.kernel().blocks() for x in b for y in b):
        raise AlgebraError("Munn kernel is not contained in H")
    return T, mu


def is_fundamental(S):
    _, mu = munn_image(S)
    return mu.is_injective


@dataclass(frozen=True, eq=False)
class McReComponents:
    H: FiniteSemigroup               # product of one maximal subgroup per D-class
    n_l: int                         # number of L-classes
    fundamental: FiniteSemigroup     # S^L'
    division: str                    # "yes" | "no" | "unknown" | "unverified"

    def as_dict(self):
        return {"H_order": self.H.n, "l_classes": self.n_l,
                "fundamental_size": self.fundamental.n, "division": self.division}


def mcalister_reilly_components(S, verify=True, cap=MCRE_DIVISION_CAP):
    from krc.products import direct, divides, wreath

    _require_inverse(S)
    g = S.green
    H = None
    for J in range(g.n_j):
        e = min(x for x in g.j_members[J] if x in S.idempotents)
        G = g.subgroup_of(S, g.h_class[e])
        H = G if H is None else direct_product_semigroup(H, G)
    H = _trivial_reduce(H)
    F, _ = lprime_image(S)
    status = "unverified"
    n_l = g.n_l
    if verify:
        import math
        bound = H.n ** n_l * math.factorial(n_l) * F.n
        if bound <= cap:
            X = wreath(right_regular(H), standard_semigroup("sym", n_l))
            T = direct(X, right_regular(F)).abstract
            status = divides(S, T).status
    return McReComponents(H, n_l, F, status)


def _trivial_reduce(H):
    """A product of trivial groups is the trivial group."""
    if H.n == 1:
        return FiniteSemigroup([[0]])
    return H


__all__ = [
    "EUnitary", "McReComponents", "NotInverse", "e_unitary", "fundamental_image",
    "inverses", "is_e_unitary", "is_fundamental", "least_group_congruence",
    "max_group_image", "mcalister_reilly_components", "munn_image", "munn_maps",
    "natural_leq",
]
