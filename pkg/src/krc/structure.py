"""Schutzenberger representations, GM/RLM machinery and ts congruences."""
from __future__ import annotations

from dataclasses import dataclass

from krc.core import (
    UNDEF,
    AlgebraError,
    FiniteSemigroup,
    KRCError,
    TransformationSemigroup,
    canonical_labels,
    compose,
    format_map,
    generate_ts,
    image_semigroup,
)
from krc.morphisms import Morphism


class NotCoordinatizable(KRCError):
    pass


class NotGM(KRCError):
    pass


def zero_element(S):
    t = S.table
    for z in range(S.n):
        if all(t[z][x] == z and t[x][z] == z for x in range(S.n)):
            return z
    return None


def ideal_j_class(S):
    """J-class of the unique 0-minimal regular ideal (the kernel if no zero)."""
    g = S.green
    z = zero_element(S)
    if z is None or S.n == 1:
        return next(J for J in range(g.n_j) if not g.j_below[J])
    zj = g.j_class[z]
    cands = [J for J in range(g.n_j)
             if J != zj and g.j_below[J] == {zj} and g.regular_j[J]]
    if len(cands) != 1:
        raise NotCoordinatizable(f"{len(cands)} 0-minimal regular ideals")
    return cands[0]


# ---------------------------------------------------------------------------
# Schutzenberger representations


@dataclass(frozen=True, eq=False)
class SchutzenbergerRep:
    side: str                 # "right" | "left"
    states: tuple             # elements of the R- (or L-) class
    maps: tuple               # per element of S, a partial map on states
    faithful: bool
    image: FiniteSemigroup
    image_of: tuple

    def as_ts(self):
        """The faithful image as a ts (right side only)."""
        if self.side != "right":
            raise KRCError("left representations act on the left")
        maps = list(dict.fromkeys(self.maps))
        return TransformationSemigroup(len(self.states), tuple(maps),
                                       tuple(self.image.generating_set), self.image)


def schutzenberger_right(S, r):
    """Action of S on the R-class ``r`` by x.s = xs if xs stays in the class."""
    g = S.green
    states = g.r_members[r]
    pos = {x: i for i, x in enumerate(states)}
    t = S.table
    maps = tuple(tuple(pos.get(t[x][s], UNDEF) for x in states) for s in range(S.n))
    image, image_of, _ = image_semigroup(maps, compose)
    return SchutzenbergerRep("right", states, maps, image.n == S.n, image, image_of)


def schutzenberger_left(S, l):
    g = S.green
    states = g.l_members[l]
    pos = {x: i for i, x in enumerate(states)}
    t = S.table
    maps = tuple(tuple(pos.get(t[s][x], UNDEF) for x in states) for s in range(S.n))
    image, image_of, _ = image_semigroup(maps, lambda a, b: compose(b, a))
    return SchutzenbergerRep("left", states, maps, image.n == S.n, image, image_of)


@dataclass(frozen=True)
class Transitivity:
    kind: str                 # "right" | "left" | "bi" | "none"
    is_gm: bool
    j_class: int | None
    group_order: int

    def as_dict(self):
        return dict(self.__dict__)


def classify_transitivity(S):
    try:
        J = ideal_j_class(S)
    except NotCoordinatizable:
        return Transitivity("none", False, None, 0)
    g = S.green
    x = g.j_members[J][0]
    right = schutzenberger_right(S, g.r_class[x]).faithful
    left = schutzenberger_left(S, g.l_class[x]).faithful
    kind = {(True, True): "bi", (True, False): "right",
            (False, True): "left", (False, False): "none"}[(right, left)]
    order = len(g.h_members[g.h_class[x]])
    return Transitivity(kind, kind == "bi" and order > 1, J, order)


# ---------------------------------------------------------------------------
# Rees coordinates


@dataclass(frozen=True, eq=False)
class ReesCoordinates:
    j_class: int
    idempotent: int
    A: tuple                  # R-class ids
    B: tuple                  # L-class ids
    G: FiniteSemigroup
    group_elements: tuple     # G index -> element of S
    C: tuple                  # C[b][a] = G index or None (zero)
    coords: dict              # element -> (a, g, b)
    element_at: dict          # (a, g, b) -> element

    def multiply(self, u, v):
        """Product of coordinates in M0(A, G, B, C); None is zero."""
        a, g, b = u
        a2, g2, b2 = v
        c = self.C[b][a2]
        if c is None:
            return None
        m = self.G.table
        return (a, m[m[g][c]][g2], b2)


def rees_coordinates(S, j_class=None):
    g = S.green
    J = ideal_j_class(S) if j_class is None else j_class
    if not g.regular_j[J]:
        raise NotCoordinatizable("J-class is not regular")
    members = g.j_members[J]
    e = min(x for x in members if x in S.idempotents)
    t = S.table
    A = tuple(sorted({g.r_class[x] for x in members}))
    B = tuple(sorted({g.l_class[x] for x in members}))
    H = g.h_members[g.h_class[e]]
    G, group_elements = S.restrict(H)
    gpos = {x: i for i, x in enumerate(group_elements)}
    # r_a in R_a and L_e ; q_b in R_e and L_b, with r_{A(e)} = q_{B(e)} = e
    r_rep = {}
    q_rep = {}
    for x in members:
        if g.l_class[x] == g.l_class[e]:
            r_rep.setdefault(g.r_class[x], x)
        if g.r_class[x] == g.r_class[e]:
            q_rep.setdefault(g.l_class[x], x)
    r_rep[g.r_class[e]] = e
    q_rep[g.l_class[e]] = e
    coords = {}
    element_at = {}
    for ai, a in enumerate(A):
        for bi, b in enumerate(B):
            for gi, h in enumerate(group_elements):
                x = t[t[r_rep[a]][h]][q_rep[b]]
                if g.r_class[x] != a or g.l_class[x] != b or x in coords:
                    raise NotCoordinatizable("Green's lemma bijection failed")
                coords[x] = (ai, gi, bi)
                element_at[(ai, gi, bi)] = x
    C = []
    for b in B:
        row = []
        for a in A:
            y = t[q_rep[b]][r_rep[a]]
            row.append(gpos.get(y))
        C.append(tuple(row))
    rc = ReesCoordinates(J, e, A, B, G, tuple(group_elements), tuple(C), coords, element_at)
    for x in members:
        for y in members:
            z = t[x][y]
            expect = rc.multiply(coords[x], coords[y])
            got = coords.get(z)
            if expect != got:
                raise NotCoordinatizable("coordinatization does not multiply correctly")
    for row in C:
        if all(c is None for c in row):
            raise NotCoordinatizable("structure matrix has a zero row")
    for ai in range(len(A)):
        if all(C[bi][ai] is None for bi in range(len(B))):
            raise NotCoordinatizable("structure matrix has a zero column")
    return rc


def rees_matrix_semigroup(G, n_a, n_b, C, adjoin_identity=True):
    """M0(A, G, B, C), optionally with an identity adjoined.

    Element (a, g, b) has index (a * |G| + g) * n_b + b; zero and the
    identity follow.
    """
    ng = G.n
    n = n_a * ng * n_b
    zero = n
    total = n + 1 + (1 if adjoin_identity else 0)

    def idx(a, g, b):
        return (a * ng + g) * n_b + b

    table = [[zero] * total for _ in range(total)]
    m = G.table
    for a in range(n_a):
        for g1 in range(ng):
            for b in range(n_b):
                x = idx(a, g1, b)
                for a2 in range(n_a):
                    c = C[b][a2]
                    if c is None:
                        continue
                    for g2 in range(ng):
                        mid = m[m[g1][c]][g2]
                        for b2 in range(n_b):
                            table[x][idx(a2, g2, b2)] = idx(a, mid, b2)
    if adjoin_identity:
        one = n + 1
        for x in range(total):
            table[one][x] = x
            table[x][one] = x
    labels = [f"({a + 1},{g + 1},{b + 1})" for a in range(n_a)
              for g in range(ng) for b in range(n_b)] + ["0"]
    if adjoin_identity:
        labels.append("1")
    return FiniteSemigroup(table, labels=labels)


# ---------------------------------------------------------------------------
# GM structure and RLM


@dataclass(frozen=True, eq=False)
class GMStructure:
    S: FiniteSemigroup
    rees: ReesCoordinates
    base: TransformationSemigroup     # (G x B, S); state (g, b) = b * |G| + g

    @property
    def n_g(self):
        return self.rees.G.n

    @property
    def n_b(self):
        return len(self.rees.B)

    def state(self, g, b):
        return b * self.n_g + g

    def point(self, state):
        return state % self.n_g, state // self.n_g


def gm_structure(S):
    tr = classify_transitivity(S)
    if not tr.is_gm:
        raise NotGM(f"semigroup is {tr.kind}-transitive with group order {tr.group_order}")
    rees = rees_coordinates(S, tr.j_class)
    ae = rees.coords[rees.idempotent][0]
    ng, nb = rees.G.n, len(rees.B)
    states = [rees.element_at[(ae, gi, bi)] for bi in range(nb) for gi in range(ng)]
    pos = {x: i for i, x in enumerate(states)}
    t = S.table
    maps = tuple(tuple(pos.get(t[x][s], UNDEF) for x in states) for s in range(S.n))
    if len(set(maps)) != S.n:
        raise NotGM("action on G x B is not faithful")
    base = TransformationSemigroup(ng * nb, maps, tuple(S.generating_set), S)
    return GMStructure(S, rees, base)


@dataclass(frozen=True, eq=False)
class RLM:
    ts: TransformationSemigroup       # (B, RLM(S))
    morphism: Morphism                # S -> RLM(S)


def rlm(gm):
    """Right letter mapping: the action induced on B, made faithful."""
    ng, nb = gm.n_g, gm.n_b
    maps = []
    for s, m in enumerate(gm.base.elements):
        bm = []
        for b in range(nb):
            imgs = {m[gm.state(g, b)] for g in range(ng)}
            blocks = {UNDEF if y == UNDEF else gm.point(y)[1] for y in imgs}
            if len(blocks) != 1:
                raise AlgebraError("action on G x B does not induce an action on B")
            bm.append(blocks.pop())
        maps.append(tuple(bm))
    T, image_of, distinct = image_semigroup(maps, compose)
    ts = TransformationSemigroup(nb, tuple(distinct), tuple(T.generating_set), T)
    return RLM(ts, Morphism(gm.S, T, image_of))


@dataclass(frozen=True, eq=False)
class GMImage:
    j_class: int
    quotient: FiniteSemigroup
    class_of: tuple
    group_order: int

    @property
    def group_nontrivial(self):
        return self.group_order > 1


def gm_images(S):
    """For each regular J-class, the quotient acting faithfully on both sides of J^0."""
    g = S.green
    t = S.table
    out = []
    for J in range(g.n_j):
        if not g.regular_j[J]:
            continue
        members = g.j_members[J]
        pos = {x: i for i, x in enumerate(members)}
        keys = []
        for s in range(S.n):
            right = tuple(pos.get(t[x][s], UNDEF) for x in members)
            left = tuple(pos.get(t[s][x], UNDEF) for x in members)
            keys.append((right, left))
        classes = canonical_labels(keys)
        Q, class_of = S.quotient(classes)
        order = len(g.h_members[g.h_class[members[0]]])
        out.append(GMImage(J, Q, class_of, order))
    return out


# ---------------------------------------------------------------------------
# ts congruences


@dataclass(frozen=True)
class TsCongruence:
    classes: tuple            # canonical class label per state

    @classmethod
    def from_labels(cls, labels):
        return cls(canonical_labels(labels))

    @property
    def n_classes(self):
        return max(self.classes) + 1 if self.classes else 0

    def blocks(self):
        out = [[] for _ in range(self.n_classes)]
        for q, c in enumerate(self.classes):
            out[c].append(q)
        return [tuple(b) for b in out]

    def is_trivial(self):
        return self.n_classes == len(self.classes)

    def meet(self, other):
        return TsCongruence.from_labels(list(zip(self.classes, other.classes)))


class InvalidCongruence(AlgebraError):
    pass


def _induced_maps(X, c):
    """Induced partial maps on classes; raises InvalidCongruence on a violation."""
    k = c.n_classes
    out = []
    for si, m in enumerate(X.elements):
        img = [UNDEF] * k
        witness = [None] * k
        for q, y in enumerate(m):
            if y == UNDEF:
                continue
            cq, cy = c.classes[q], c.classes[y]
            if img[cq] == UNDEF:
                img[cq] = cy
                witness[cq] = q
            elif img[cq] != cy:
                bad = (witness[cq], q, si)
                raise InvalidCongruence(
                    f"states {bad[0] + 1},{bad[1] + 1} are related but element "
                    f"{bad[2] + 1} separates them", witness=bad)
        out.append(tuple(img))
    return out


def is_ts_congruence(X, c):
    try:
        _induced_maps(X, c)
    except InvalidCongruence:
        return False
    return True


def is_injective_congruence(X, c):
    try:
        maps = _induced_maps(X, c)
    except InvalidCongruence:
        return False
    for m in maps:
        vals = [v for v in m if v != UNDEF]
        if len(vals) != len(set(vals)):
            return False
    return True


def quotient_ts(X, c):
    """Quotient ts: classes as states, generated by the induced maps of all elements."""
    if len(c.classes) != X.q:
        raise InvalidCongruence("congruence does not match the state count")
    maps = list(dict.fromkeys(_induced_maps(X, c)))
    return generate_ts(c.n_classes, maps)


def tilson_congruence(X):
    """Least injective congruence, by merging forced pairs to a fixed point."""
    parent = list(range(X.q))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    gens = [X.elements[i] for i in dict.fromkeys(X.generator_indices)]
    changed = True
    while changed:
        changed = False
        for m in gens:
            # congruence: one class -> one image class
            fwd = {}
            for q, y in enumerate(m):
                if y == UNDEF:
                    continue
                cq, cy = find(q), find(y)
                prev = fwd.setdefault(cq, cy)
                if find(prev) != cy:
                    a, b = find(prev), cy
                    parent[max(a, b)] = min(a, b)
                    changed = True
            # injectivity: one image class <- one source class
            back = {}
            for q, y in enumerate(m):
                if y == UNDEF:
                    continue
                cq, cy = find(q), find(y)
                prev = back.setdefault(cy, cq)
                if find(prev) != cq:
                    a, b = find(prev), cq
                    parent[max(a, b)] = min(a, b)
                    changed = True
    return TsCongruence.from_labels([find(q) for q in range(X.q)])


def tilson_via_typeII(gm):
    """States related iff they generate the same right coset of S_II."""
    from krc.bounds import type_II

    sii = sorted(type_II(gm.S))
    X = gm.base
    reach = []
    for q in range(X.q):
        reach.append({X.elements[s][q] for s in sii} - {UNDEF})
    labels = []
    for q in range(X.q):
        labels.append(min(p for p in range(X.q) if p in reach[q] and q in reach[p]))
    return TsCongruence.from_labels(labels)


# ---------------------------------------------------------------------------
# pictures


def eggbox_dot(S, j_class):
    """DOT table of the R x L grid of a J-class, group H-classes marked *."""
    g = S.green
    members = g.j_members[j_class]
    rs = sorted({g.r_class[x] for x in members})
    ls = sorted({g.l_class[x] for x in members})
    rows = []
    for r in rs:
        cells = []
        for l in ls:
            hx = [x for x in members if g.r_class[x] == r and g.l_class[x] == l]
            star = "*" if hx and g.h_class[hx[0]] in g.group_h else ""
            cells.append("<td>" + star + " ".join(S.label(x) for x in hx) + "</td>")
        rows.append("<tr>" + "".join(cells) + "</tr>")
    body = "".join(rows)
    return ("digraph eggbox {\n  node [shape=plaintext];\n"
            f"  J{j_class} [label=<<table border=\"0\" cellborder=\"1\">{body}</table>>];\n}}\n")


def gb_dot(gm):
    """DOT picture of the action on G x B, one cluster per b."""
    X = gm.base
    lines = ["digraph GxB {"]
    for b in range(gm.n_b):
        lines.append(f"  subgraph cluster_{b} {{ label=\"b{b + 1}\";")
        for g in range(gm.n_g):
            lines.append(f"    s{gm.state(g, b)} [label=\"({g + 1},{b + 1})\"];")
        lines.append("  }")
    for si in dict.fromkeys(X.generator_indices):
        m = X.elements[si]
        for q, y in enumerate(m):
            if y != UNDEF:
                lines.append(f"  s{q} -> s{y} [label=\"{X.abstract.label(si)}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "GMImage", "GMStructure", "NotCoordinatizable", "NotGM", "RLM", "ReesCoordinates",
    "SchutzenbergerRep", "Transitivity", "TsCongruence", "InvalidCongruence",
    "classify_transitivity", "eggbox_dot", "gb_dot", "gm_images", "gm_structure",
    "ideal_j_class", "is_injective_congruence", "is_ts_congruence", "quotient_ts",
    "rees_coordinates", "rees_matrix_semigroup", "rlm", "schutzenberger_left",
    "schutzenberger_right", "tilson_congruence", "tilson_via_typeII", "zero_element",
    "format_map",
]
