"""SP(G x B), the Rhodes lattice of SPCs, cross-sections and the up/down maps.

A point (g, b) of G x B is encoded as ``b * |G| + g``; G acts on the left
by g.(h, b) = (gh, b).
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from krc.core import AlgebraError, FiniteSemigroup, KRCError, group_inverses, is_group


class AmbientMismatch(KRCError):
    pass


class NotInvariantCrossSection(KRCError):
    pass


# ---------------------------------------------------------------------------
# SP(G x B)


@dataclass(frozen=True)
class SetPartitionElement:
    ng: int
    nb: int
    blocks: frozenset          # frozenset of frozensets of encoded points

    @classmethod
    def make(cls, ng, nb, blocks):
        bl = frozenset(frozenset(b) for b in blocks if b)
        seen = set()
        for b in bl:
            if seen & b:
                raise KRCError("blocks overlap")
            seen |= b
            if any(not 0 <= p < ng * nb for p in b):
                raise KRCError("point outside G x B")
        return cls(ng, nb, bl)

    @property
    def Y(self):
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    def point(self, p):
        return p % self.ng, p // self.ng

    def encode(self, g, b):
        return b * self.ng + g

    def block_of(self, p):
        for b in self.blocks:
            if p in b:
                return b
        return None

    def __str__(self):
        parts = []
        for blk in sorted(self.blocks, key=sorted):
            parts.append(", ".join(f"({g + 1},{b + 1})" for g, b in
                                   sorted(self.point(p) for p in blk)))
        return "{" + " | ".join(parts) + "}"


def _same_ambient(a, b):
    if (a.ng, a.nb) != (b.ng, b.nb):
        raise AmbientMismatch(f"G x B sizes differ: {a.ng}x{a.nb} vs {b.ng}x{b.nb}")


def sp_leq(a, b):
    _same_ambient(a, b)
    if not a.Y <= b.Y:
        return False
    return all(any(blk <= other for other in b.blocks) for blk in a.blocks)


def sp_meet(a, b):
    _same_ambient(a, b)
    return SetPartitionElement.make(a.ng, a.nb, [x & y for x in a.blocks for y in b.blocks])


def sp_join(a, b):
    _same_ambient(a, b)
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for blk in itertools.chain(a.blocks, b.blocks):
        items = sorted(blk)
        for p in items:
            parent.setdefault(p, p)
        for p in items[1:]:
            r1, r2 = find(items[0]), find(p)
            if r1 != r2:
                parent[max(r1, r2)] = min(r1, r2)
    groups = {}
    for p in parent:
        groups.setdefault(find(p), set()).add(p)
    return SetPartitionElement.make(a.ng, a.nb, groups.values())


def sp_bottom(ng, nb):
    return SetPartitionElement(ng, nb, frozenset())


def is_cross_section(a):
    """Every block meets each G x {b} at most once."""
    for blk in a.blocks:
        bs = [p // a.ng for p in blk]
        if len(bs) != len(set(bs)):
            return False
    return True


def translate(G, g, a):
    """The element g.(Y, Pi)."""
    return SetPartitionElement(a.ng, a.nb, frozenset(
        _translate_block(G, a.ng, blk, g) for blk in a.blocks))


def is_invariant(G, a):
    """g(Y, Pi) = (Y, Pi) for all g, and Y = G x B' with G-saturated orbits."""
    if G.n != a.ng:
        raise AmbientMismatch("group order does not match the ambient")
    if any(translate(G, g, a) != a for g in range(G.n)):
        return False
    Y = a.Y
    bs = {p // a.ng for p in Y}
    return Y == {b * a.ng + g for b in bs for g in range(a.ng)}


def all_sp_elements(ng, nb):
    """Every element of SP(G x B), by subset then set partition."""
    pts = list(range(ng * nb))
    out = []
    for k in range(len(pts) + 1):
        for Y in itertools.combinations(pts, k):
            for part in _set_partitions(list(Y)):
                out.append(SetPartitionElement.make(ng, nb, part))
    return out


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


# ---------------------------------------------------------------------------
# SPCs


@dataclass(frozen=True)
class SPC:
    """(I, Pi, f) with f normalized per block, or the contradiction."""

    nb: int
    blocks: tuple = ()          # sorted tuple of sorted ((b, g), ...) tuples
    contradiction: bool = False
    group: FiniteSemigroup = field(default=None, compare=False, hash=False, repr=False)

    @property
    def I(self):
        return frozenset(b for blk in self.blocks for b, _ in blk)

    def section(self, b):
        for blk in self.blocks:
            for c, g in blk:
                if c == b:
                    return g
        return None

    def __str__(self):
        if self.contradiction:
            return "CONTRADICTION"
        return "{" + " | ".join(", ".join(f"b{b + 1}↦g{g + 1}" for b, g in blk)
                                for blk in self.blocks) + "}"


def _group_data(G):
    if not is_group(G):
        raise AlgebraError("cross-sections need a group")
    return G.table, group_inverses(G), G.identity


def _normalize_block(G, items):
    """Left-translate so the least b maps to the identity."""
    t, inv, _ = _group_data(G)
    items = sorted(items)
    g0 = inv[items[0][1]]
    return tuple((b, t[g0][g]) for b, g in items)


def make_spc(G, nb, blocks):
    """``blocks``: iterable of dicts or pair lists b -> g."""
    norm = []
    seen = set()
    for blk in blocks:
        items = list(blk.items()) if isinstance(blk, dict) else list(blk)
        if not items:
            continue
        for b, _ in items:
            if b in seen or not 0 <= b < nb:
                raise KRCError(f"bad or repeated letter {b + 1}")
            seen.add(b)
        norm.append(_normalize_block(G, items))
    return SPC(nb, tuple(sorted(norm)), False, G)


def contradiction(G, nb):
    return SPC(nb, (), True, G)


def _check_spc(x, y):
    if x.nb != y.nb:
        raise AmbientMismatch("letter sets differ")


def spc_leq(x, y):
    """I within J, blocks refine, and sections agree modulo translation on each block."""
    _check_spc(x, y)
    if y.contradiction:
        return True
    if x.contradiction:
        return False
    G = x.group or y.group
    t, inv, _ = _group_data(G)
    for blk in x.blocks:
        target = None
        for other in y.blocks:
            if blk[0][0] in {b for b, _ in other}:
                target = dict(other)
        if target is None or any(b not in target for b, _ in blk):
            return False
        b0, f0 = blk[0]
        for b, f in blk:
            # f(b0)^-1 f(b) must equal h(b0)^-1 h(b)
            if t[inv[f0]][f] != t[inv[target[b0]]][target[b]]:
                return False
    return True


def spc_join(x, y):
    """Least upper bound, or the contradiction when sections clash."""
    _check_spc(x, y)
    if x.contradiction:
        return x
    if y.contradiction:
        return y
    G = x.group or y.group
    t, inv, e = _group_data(G)
    adj = {}
    for blk in itertools.chain(x.blocks, y.blocks):
        b0, f0 = blk[0]
        for b, f in blk:
            adj.setdefault(b, [])
            if b == b0:
                continue
            off = t[inv[f0]][f]         # h(b) = h(b0) * off
            adj[b0].append((b, off))
            adj[b].append((b0, inv[off]))
    h = {}
    out = []
    for root in sorted(adj):
        if root in h:
            continue
        h[root] = e
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, off in adj[u]:
                val = t[h[u]][off]
                if v not in h:
                    h[v] = val
                    comp.append(v)
                    queue.append(v)
                elif h[v] != val:
                    return contradiction(G, x.nb)
        out.append([(b, h[b]) for b in comp])
    return make_spc(G, x.nb, out)


def spc_meet(x, y):
    """Greatest lower bound: common refinement split where sections disagree."""
    _check_spc(x, y)
    if x.contradiction:
        return y
    if y.contradiction:
        return x
    G = x.group or y.group
    t, inv, _ = _group_data(G)
    out = []
    for bx in x.blocks:
        fx = dict(bx)
        for by in y.blocks:
            fy = dict(by)
            common = sorted(set(fx) & set(fy))
            classes = {}
            for b in common:
                classes.setdefault(t[fx[b]][inv[fy[b]]], []).append((b, fx[b]))
            out.extend(classes.values())
    return make_spc(G, x.nb, out)


def all_spcs(G, nb):
    """Every SPC over B = {0..nb-1} (without the contradiction)."""
    out = []
    for k in range(nb + 1):
        for I in itertools.combinations(range(nb), k):
            for part in _set_partitions(list(I)):
                choices = []
                for blk in part:
                    # least letter fixed to the identity, others free
                    choices.append([list(zip(blk, (G.identity,) + rest))
                                    for rest in itertools.product(range(G.n), repeat=len(blk) - 1)])
                for pick in itertools.product(*choices):
                    out.append(make_spc(G, nb, pick))
    return out


# ---------------------------------------------------------------------------
# up and down


def _translate_block(G, ng, blk, g):
    t = G.table
    return frozenset((p // ng) * ng + t[g][p % ng] for p in blk)


def to_rhodes(G, a):
    if not (is_cross_section(a) and is_invariant(G, a)):
        raise NotInvariantCrossSection("element is not an invariant cross-section")
    seen = set()
    blocks = []
    for blk in sorted(a.blocks, key=sorted):
        if blk in seen:
            continue
        seen.update(_translate_block(G, a.ng, blk, g) for g in range(G.n))
        blocks.append([(p // a.ng, p % a.ng) for p in blk])
    return make_spc(G, a.nb, blocks)


def from_rhodes(G, x):
    if x.contradiction:
        raise NotInvariantCrossSection("the contradiction has no set-partition image")
    t = G.table
    ng = G.n
    blocks = []
    for blk in x.blocks:
        for g in range(ng):
            blocks.append({b * ng + t[g][f] for b, f in blk})
    return SetPartitionElement.make(ng, x.nb, blocks)


def spc_as_dict(x):
    if x.contradiction:
        return {"contradiction": True}
    return {"contradiction": False,
            "blocks": [[{"b": b + 1, "g": g + 1} for b, g in blk] for blk in x.blocks]}


__all__ = [
    "AmbientMismatch", "NotInvariantCrossSection", "SPC", "SetPartitionElement",
    "all_sp_elements", "all_spcs", "contradiction", "from_rhodes", "is_cross_section",
    "is_invariant", "make_spc", "sp_bottom", "sp_join", "sp_leq", "sp_meet",
    "spc_as_dict", "spc_join", "spc_leq", "spc_meet", "to_rhodes", "translate",
]
