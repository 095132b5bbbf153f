"""Rooted Cayley graphs, Karnofsky-Rhodes and McCammond expansions, GST."""
from __future__ import annotations

from dataclasses import dataclass

from krc.core import (
    DEFAULT_ELEMENT_BUDGET,
    BudgetExceeded,
    FiniteSemigroup,
    KRCError,
    generate_ts,
    subsemigroup_closure,
)
from krc.morphisms import Morphism

MC_VERTEX_CAP = 50_000
PATH_COUNT_CAP = 200_000


class NotGenerating(KRCError):
    pass


@dataclass(frozen=True, eq=False)
class RootedLabeledGraph:
    """Deterministic labeled graph: ``edges[v][a]`` is the target or None."""

    n_vertices: int
    root: int
    edges: tuple
    transition: frozenset = frozenset()      # set of (v, a)
    letters: tuple = ()
    labels: tuple = ()
    ends: tuple = ()        # McCammond automata: underlying vertex each path ends at

    def target(self, v, a):
        return self.edges[v][a]

    def edge_list(self):
        return [(v, a, w) for v in range(self.n_vertices)
                for a, w in enumerate(self.edges[v]) if w is not None]

    def to_dot(self, name="G"):
        lines = [f"digraph {name} {{"]
        for v in range(self.n_vertices):
            lab = self.labels[v] if self.labels else str(v)
            shape = "doublecircle" if v == self.root else "circle"
            lines.append(f"  v{v} [label=\"{lab}\", shape={shape}];")
        for v, a, w in self.edge_list():
            style = ", style=bold, color=red" if (v, a) in self.transition else ""
            letter = self.letters[a] if self.letters else str(a)
            lines.append(f"  v{v} -> v{w} [label=\"{letter}\"{style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_generators(S, X):
    if not X:
        raise NotGenerating("empty generating set")
    if len(subsemigroup_closure(S.table, X)) != S.n:
        raise NotGenerating("letters do not generate the semigroup")


def _letter_names(X, S):
    return tuple(S.label(x) for x in X)


def right_cayley(S, X=None):
    """RCay(S, X) over S^I: vertices 0..n-1 are S, vertex n is the root I."""
    X = list(S.generating_set) if X is None else list(X)
    _check_generators(S, X)
    n = S.n
    t = S.table
    r = S.green.r_class
    edges = []
    trans = set()
    for v in range(n):
        row = tuple(t[v][a] for a in X)
        edges.append(row)
        for i, w in enumerate(row):
            if r[w] != r[v]:
                trans.add((v, i))
    edges.append(tuple(X))
    trans.update((n, i) for i in range(len(X)))
    labels = tuple(S.label(v) for v in range(n)) + ("I",)
    return RootedLabeledGraph(n + 1, n, tuple(edges), frozenset(trans),
                              _letter_names(X, S), labels)


def left_cayley(S, X=None):
    """LCay(S, X): edges v -> a v, transition when a v <_L v."""
    X = list(S.generating_set) if X is None else list(X)
    g = right_cayley(S.opposite(), X)
    return RootedLabeledGraph(g.n_vertices, g.root, g.edges, g.transition,
                              _letter_names(X, S), g.labels)


def strongly_connected_components(g):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    el = g.edge_list()
    src = [v for v, _, _ in el]
    dst = [w for _, _, w in el]
    m = csr_matrix(([1] * len(el), (src, dst)), shape=(g.n_vertices, g.n_vertices))
    k, labels = connected_components(m, directed=True, connection="strong")
    return k, labels.tolist()


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True, eq=False)
class ExpandedSemigroup:
    semigroup: FiniteSemigroup
    surjection: Morphism            # expansion -> original
    generators: tuple               # letter i -> element of the expansion
    letters: tuple                  # letter i -> element of the original
    automaton: RootedLabeledGraph | None = None
    stages: dict | None = None

    def audit(self):
        """Surjective morphism that sends each generator to its letter."""
        f = self.surjection
        return (f.is_surjective
                and all(f(g) == x for g, x in zip(self.generators, self.letters))
                and len(subsemigroup_closure(self.semigroup.table, self.generators))
                == self.semigroup.n)

    def as_dict(self):
        return {"size": self.semigroup.n, "original_size": self.surjection.target.n,
                "audit": self.audit()}


def transition_semigroup(a, budget=DEFAULT_ELEMENT_BUDGET):
    """The ts generated by the letter actions of a deterministic automaton."""
    maps = []
    for i in range(len(a.letters) or len(a.edges[0])):
        maps.append(tuple(-1 if a.edges[v][i] is None else a.edges[v][i]
                          for v in range(a.n_vertices)))
    return generate_ts(a.n_vertices, maps, budget)


def _from_automaton(S, X, auto, value_of_state, budget):
    """Expansion realized as the transition semigroup of ``auto``.

    The state reached from the root determines the element, and
    ``value_of_state`` maps that state to its image in S.
    """
    ts = transition_semigroup(auto, budget)
    E = ts.abstract
    root = auto.root
    surj = tuple(value_of_state(ts.elements[e][root]) for e in range(E.n))
    f = Morphism(E, S, surj)
    return ExpandedSemigroup(E, f, tuple(ts.generator_indices), tuple(X), auto)


def rkr(S, X=None, budget=DEFAULT_ELEMENT_BUDGET):
    """Right Karnofsky-Rhodes expansion: paths up to (value, transition edges used)."""
    X = list(S.generating_set) if X is None else list(X)
    g = right_cayley(S, X)
    root_state = (g.root, frozenset())
    index = {root_state: 0}
    states = [root_state]
    edges = []
    pos = 0
    while pos < len(states):
        v, used = states[pos]
        row = []
        for i in range(len(X)):
            w = g.edges[v][i]
            nu = used | {(v, i)} if (v, i) in g.transition else used
            key = (w, nu)
            j = index.get(key)
            if j is None:
                j = len(states)
                if budget is not None and j > budget:
                    raise BudgetExceeded("expansion states", budget)
                index[key] = j
                states.append(key)
            row.append(j)
        edges.append(tuple(row))
        pos += 1
    labels = tuple("I" if v == g.root else f"{S.label(v)}/{len(u)}" for v, u in states)
    auto = RootedLabeledGraph(len(states), 0, tuple(edges), frozenset(),
                              _letter_names(X, S), labels)
    return _from_automaton(S, X, auto, lambda st: states[st][0], budget)


def lkr(S, X=None, budget=DEFAULT_ELEMENT_BUDGET):
    """Left Karnofsky-Rhodes expansion, as the dual of the right one."""
    X = list(S.generating_set) if X is None else list(X)
    op = rkr(S.opposite(), X, budget)
    E = op.semigroup.opposite()
    f = Morphism(E, S, op.surjection.map)
    return ExpandedSemigroup(E, f, op.generators, tuple(X), None)


def mccammond(g, cap=MC_VERTEX_CAP):
    """Automaton on simple paths from the root, as edge sequences.

    Reading a from path p (ending at v) extends p when va is new, and
    otherwise cuts p back to its prefix ending at va. Parallel edges give
    distinct paths, so paths are keyed by their letter words.
    """
    k = len(g.edges[0]) if g.edges else 0
    index = {(): 0}
    words = [()]
    visits = [(g.root,)]          # vertices along each path, root first
    edges = []
    pos = 0
    while pos < len(words):
        w, vs = words[pos], visits[pos]
        row = []
        for a in range(k):
            v = g.edges[vs[-1]][a]
            if v is None:
                row.append(None)
                continue
            if v in vs:
                row.append(index[w[:vs.index(v)]])
                continue
            j = len(words)
            if cap is not None and j >= cap:
                raise BudgetExceeded("McCammond vertices", cap)
            index[w + (a,)] = j
            words.append(w + (a,))
            visits.append(vs + (v,))
            row.append(j)
        edges.append(tuple(row))
        pos += 1
    letters = g.letters or tuple(str(a) for a in range(k))
    labels = tuple("".join(letters[a] if len(letters[a]) == 1 else f"[{letters[a]}]"
                           for a in w) or "()" for w in words)
    return RootedLabeledGraph(len(words), 0, tuple(edges), frozenset(), letters, labels,
                              tuple(vs[-1] for vs in visits))


def path_end(auto, v):
    """Vertex of the underlying graph where McCammond vertex ``v`` ends."""
    return auto.ends[v]


def count_simple_paths(g, cap=PATH_COUNT_CAP):
    """Number of simple paths (as edge sequences) from the root to each vertex."""
    counts = [0] * g.n_vertices
    total = 0
    stack = [(g.root, frozenset([g.root]))]
    while stack:
        v, seen = stack.pop()
        counts[v] += 1
        total += 1
        if total > cap:
            raise BudgetExceeded("simple paths", cap)
        for w in g.edges[v]:
            if w is not None and w not in seen:
                stack.append((w, seen | {w}))
    return counts


def has_unique_simple_path(g, cap=PATH_COUNT_CAP):
    counts = count_simple_paths(g, cap)
    return all(c == 1 for c in counts if c)


def mc_rkr(S, X=None, budget=DEFAULT_ELEMENT_BUDGET, cap=MC_VERTEX_CAP):
    """Mc o RKR: the McCammond automaton of the RKR Cayley graph and its semigroup."""
    X = list(S.generating_set) if X is None else list(X)
    E = rkr(S, X, budget)
    return _mc_of(E, S, X, budget, cap)


def _mc_of(E, S, X, budget, cap):
    g = right_cayley(E.semigroup, E.generators)
    auto = mccammond(g, cap)
    root = g.root
    ts = transition_semigroup(auto, budget)
    M = ts.abstract
    to_e = tuple(path_end(auto, ts.elements[m][auto.root]) for m in range(M.n))
    if any(x == root for x in to_e):
        raise KRCError("McCammond element reads back to the root")
    down = Morphism(M, E.semigroup, to_e)
    mc = ExpandedSemigroup(M, down.then(E.surjection), tuple(ts.generator_indices),
                           tuple(X), auto)
    return mc, down


def gst(S, X=None, budget=DEFAULT_ELEMENT_BUDGET, cap=MC_VERTEX_CAP):
    """RKR o Mc o LKR, with the surjection chain E3 -> T2 -> E1 -> S."""
    X = list(S.generating_set) if X is None else list(X)
    e1 = lkr(S, X, budget)
    mc, _ = _mc_of(e1, S, X, budget, cap)
    e3 = rkr(mc.semigroup, list(mc.generators), budget)
    f = e3.surjection.then(mc.surjection)
    stages = {"lkr": e1.semigroup.n, "mc": mc.semigroup.n, "rkr": e3.semigroup.n}
    return ExpandedSemigroup(e3.semigroup, f, e3.generators, tuple(X), e3.automaton, stages)


__all__ = [
    "ExpandedSemigroup", "NotGenerating", "RootedLabeledGraph", "count_simple_paths",
    "gst", "has_unique_simple_path", "left_cayley", "lkr", "mc_rkr", "mccammond",
    "path_end", "right_cayley", "rkr", "strongly_connected_components",
    "transition_semigroup",
]
