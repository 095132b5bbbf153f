"""Complexity bounds: depth, degree, type II, the Sl chain bound, and their aggregation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from krc.core import (
    UNDEF,
    BudgetExceeded,
    FiniteSemigroup,
    IsoMemo,
    TransformationSemigroup,
    is_aperiodic,
    is_completely_regular,
    is_inverse_semigroup,
    subsemigroup_closure,
)
from krc.morphisms import (
    NO_PROGRESS,
    THETA_CAP,
    aperiodic_shrink,
    lprime_image,
    theta_exact,
    theta_upper_greedy,
)

SL_BUDGET = 20_000
GEN_CAP = 3
CHAIN_CAP = 2_000
THETA_UPPER_SIZE = 16


# ---------------------------------------------------------------------------
# depth and degree


def _nonaperiodic_j(S):
    g = S.green
    return [g.regular_j[J] and len(g.h_members[g.h_class[g.j_members[J][0]]]) > 1
            for J in range(g.n_j)]


def depth_chain(S):
    """A longest chain of non-aperiodic J-classes, top first."""
    g = S.green
    bad = _nonaperiodic_j(S)
    order = sorted(range(g.n_j), key=lambda J: len(g.j_below[J]))
    best = {}
    for J in order:
        below = [K for K in g.j_below[J] if best[K]]
        tail = max((best[K] for K in below), key=len, default=())
        best[J] = ((J,) + tail) if bad[J] else tail
    return max(best.values(), key=len, default=())


def depth(S):
    return len(depth_chain(S))


def degree(X):
    """Largest kernel class of any element, counted on its domain."""
    best = 0
    for m in X.elements:
        counts = {}
        for y in m:
            if y != UNDEF:
                counts[y] = counts.get(y, 0) + 1
        if counts:
            best = max(best, max(counts.values()))
    return best


# ---------------------------------------------------------------------------
# type II


def type_II(S):
    """Least subsemigroup containing E(S), closed under weak conjugation."""
    t = S.array
    n = S.n
    rows = np.arange(n)[:, None]
    xs, ys = np.nonzero(t[t, rows] == rows)     # pairs with x y x = x
    member = np.zeros(n, dtype=bool)
    member[list(S.idempotents)] = True
    while True:
        k = np.flatnonzero(member)
        new = np.zeros(n, dtype=bool)
        new[t[np.ix_(k, k)].reshape(-1)] = True
        if len(xs):
            xk = t[xs][:, k]
            new[t[xk, ys[:, None]].reshape(-1)] = True
            yk = t[ys][:, k]
            new[t[yk, xs[:, None]].reshape(-1)] = True
        grown = member | new
        if grown.sum() == member.sum():
            return frozenset(k.tolist())
        member = grown


def is_weakly_closed(S, subset):
    """Check the closure rules that define the type II subsemigroup."""
    t = S.table
    sub = set(subset)
    if not S.idempotents <= sub:
        return False
    if any(t[a][b] not in sub for a in sub for b in sub):
        return False
    for x in range(S.n):
        for y in range(S.n):
            if t[t[x][y]][x] != x:
                continue
            for z in sub:
                if t[t[x][z]][y] not in sub or t[t[y][z]][x] not in sub:
                    return False
    return True


# ---------------------------------------------------------------------------
# absolute type I


def _l_order(T):
    """L-class ids and the strict order: below[l] = L-classes strictly below l."""
    g = T.green
    t = T.table
    reps = [g.l_members[l][0] for l in range(g.n_l)]
    below = []
    for l, x in enumerate(reps):
        ideal = {t[s][x] for s in range(T.n)}
        below.append({g.l_class[y] for y in ideal} - {l})
    return below


def _maximal_chains(below, cap):
    n = len(below)
    above = [set() for _ in range(n)]
    for a in range(n):
        for b in below[a]:
            above[b].add(a)
    covers = [[b for b in below[a] if not any(b in below[c] for c in below[a])]
              for a in range(n)]
    tops = [a for a in range(n) if not above[a]]
    out = []
    stack = [(a,) for a in sorted(tops)]
    while stack:
        chain = stack.pop()
        nxt = covers[chain[-1]]
        if not nxt:
            out.append(chain)
            if len(out) >= cap:
                raise BudgetExceeded("L-class chains", cap, out)
            continue
        for b in sorted(nxt, reverse=True):
            stack.append(chain + (b,))
    return out


def is_absolute_type_I(T, cap=CHAIN_CAP):
    """Return (ok, chain): ``chain`` lists L-classes (member tuples), top first.

    Generation only grows along longer chains, so maximal chains of the
    L-order suffice.
    """
    g = T.green
    below = _l_order(T)
    for chain in _maximal_chains(below, cap):
        gens = [x for l in chain for x in g.l_members[l]]
        if len(subsemigroup_closure(T.table, gens)) == T.n:
            return True, [g.l_members[l] for l in chain]
    return False, None


# ---------------------------------------------------------------------------
# the Sl lower bound


@dataclass
class TypeISlChain:
    """Steps (T_i, (T_i)_II, L-chain of T_i) as element sets of the ambient S."""

    steps: list = field(default_factory=list)
    truncated: bool = False

    @property
    def value(self):
        return len(self.steps)

    @property
    def strict_value(self):
        """Count when the last (T_k)_II must itself be non-aperiodic."""
        return max(len(self.steps) - 1, 0)

    def as_dict(self):
        return {
            "value": self.value,
            "strict_value": self.strict_value,
            "truncated": self.truncated,
            "steps": [{"T": [x + 1 for x in sorted(T)],
                       "T_II": [x + 1 for x in sorted(tii)],
                       "l_chain": [[x + 1 for x in l] for l in chain]}
                      for T, tii, chain in self.steps],
        }


def verify_sl_chain(S, chain):
    container = frozenset(range(S.n))
    for T, tii, lchain in chain.steps:
        if not T <= container:
            return False
        sub, elems = S.restrict(sorted(T))
        if is_aperiodic(sub):
            return False
        pos = {x: i for i, x in enumerate(elems)}
        gens = [pos[x] for l in lchain for x in l]
        if len(subsemigroup_closure(sub.table, gens)) != sub.n:
            return False
        if frozenset(elems[i] for i in type_II(sub)) != tii:
            return False
        container = tii
    return True


def _candidates(S, C, sub, elems, gen_cap):
    yield C
    g = sub.green
    try:
        chains = _maximal_chains(_l_order(sub), CHAIN_CAP)
    except BudgetExceeded as exc:
        chains = exc.partial
    for chain in chains:
        gens = [x for l in chain for x in g.l_members[l]]
        yield frozenset(elems[i] for i in subsemigroup_closure(sub.table, gens))
    cd = sub.cyclic_data
    periodic = [x for x in range(sub.n) if cd[x][1] > 1]
    for x in periodic:
        yield frozenset(elems[i] for i in subsemigroup_closure(sub.table, [x]))
    for k in range(2, gen_cap + 1):
        for gens in itertools.combinations(range(sub.n), k):
            yield frozenset(elems[i] for i in subsemigroup_closure(sub.table, gens))


def lower_bound_l(S, budget=SL_BUDGET, gen_cap=GEN_CAP):
    """Longest verified chain of non-aperiodic absolute type I steps.

    Each T_{i+1} lies in (T_i)_II. The count includes the last step even
    when its type II part is aperiodic; ``strict_value`` drops it.
    Truncation by ``budget`` only shortens the chain.
    """
    memo = {}
    spent = [0]
    truncated = [False]

    def type_ii_of(T):
        sub, elems = S.restrict(sorted(T))
        return sub, elems, frozenset(elems[i] for i in type_II(sub))

    def search(C):
        if C in memo:
            return memo[C]
        memo[C] = []            # guards against re-entry
        sub, elems, cii = type_ii_of(C)
        if is_aperiodic(sub):
            return []
        cap = depth(sub)
        if cii != C:
            cap = min(cap, 1 + len(search(cii)))
        best = []
        seen = set()
        for T in _candidates(S, C, sub, elems, gen_cap):
            if len(best) >= cap:
                break
            if T in seen:
                continue
            seen.add(T)
            spent[0] += 1
            if budget is not None and spent[0] > budget:
                truncated[0] = True
                break
            tsub, telems, tii = type_ii_of(T)
            if is_aperiodic(tsub):
                continue
            try:
                ok, lchain = is_absolute_type_I(tsub)
            except BudgetExceeded:
                truncated[0] = True
                continue
            if not ok:
                continue
            lchain = [tuple(telems[i] for i in l) for l in lchain]
            rest = []
            if tii != T and len(best) < cap:
                rest = search(tii)
            cand = [(T, tii, lchain)] + rest
            if len(cand) > len(best):
                best = cand
        if len(best) < cap and gen_cap < sub.n:
            truncated[0] = True     # larger generating sets were never tried
        memo[C] = best
        return best

    steps = search(frozenset(range(S.n)))
    return len(steps), TypeISlChain(steps, truncated[0])


# ---------------------------------------------------------------------------
# the interval


@dataclass(frozen=True)
class Certificate:
    name: str
    side: str                 # "lower" | "upper"
    value: int
    witness: object = None

    def as_dict(self):
        return {"name": self.name, "side": self.side, "value": self.value,
                "witness": self.witness}


@dataclass
class ComplexityInterval:
    lower: int
    upper: int
    certificates: list = field(default_factory=list)
    truncated: bool = False

    @property
    def exact(self):
        return self.lower == self.upper

    def raise_lower(self, value, name, witness=None):
        self.certificates.append(Certificate(name, "lower", value, witness))
        self.lower = max(self.lower, value)

    def cut_upper(self, value, name, witness=None):
        self.certificates.append(Certificate(name, "upper", value, witness))
        self.upper = min(self.upper, value)

    def certificate(self, name):
        for c in self.certificates:
            if c.name == name:
                return c
        return None

    def as_dict(self):
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact,
                "truncated": self.truncated,
                "certificates": [c.as_dict() for c in self.certificates]}


def complexity_interval(S, ts=None, budget=SL_BUDGET, gen_cap=GEN_CAP, memo=None):
    """Certified [lower, upper] bounds on the complexity of S.

    ``ts`` (a TransformationSemigroup whose abstract semigroup is S) adds
    the degree bound. Quotient recursions are memoized up to isomorphism.
    """
    if isinstance(S, TransformationSemigroup):
        ts, S = S, S.abstract
    if memo is None:
        memo = IsoMemo()
    hit = memo.get(S)
    if hit is not None and ts is None:
        return _recalled(hit)
    iv = _interval(S, ts, budget, gen_cap, memo)
    if ts is None:
        memo.set(S, iv)
    return iv


def _recalled(iv):
    out = ComplexityInterval(iv.lower, iv.upper, truncated=iv.truncated)
    out.certificates.append(Certificate("memo", "lower", iv.lower, "isomorphic input"))
    return out


def _interval(S, ts, budget, gen_cap, memo):
    if is_aperiodic(S):
        iv = ComplexityInterval(0, 0)
        iv.certificates.append(Certificate("aperiodic", "upper", 0))
        return iv
    d = depth_chain(S)
    iv = ComplexityInterval(1, len(d))
    iv.certificates.append(Certificate("non-aperiodic", "lower", 1))
    iv.certificates.append(Certificate("depth", "upper", len(d),
                                       [[x + 1 for x in S.green.j_members[J]] for J in d]))
    if iv.exact:
        return iv
    sii = type_II(S)
    if is_aperiodic(S.restrict(sorted(sii))[0]):
        iv.cut_upper(1, "type-II-aperiodic", [x + 1 for x in sorted(sii)])
        return iv
    lp, sigma = lprime_image(S)
    if is_aperiodic(lp):
        iv.cut_upper(1, "lprime-aperiodic", {"size": lp.n})
        return iv
    if is_inverse_semigroup(S):
        iv.cut_upper(1, "inverse")
        return iv
    if ts is not None:
        iv.cut_upper(degree(ts), "degree")
        if iv.exact:
            return iv
    if is_completely_regular(S) and S.n <= THETA_CAP:
        try:
            th = theta_exact(S)
        except BudgetExceeded:
            iv.truncated = True
        else:
            iv.raise_lower(th.value, "completely-regular-theta", th.as_dict())
            iv.cut_upper(th.value, "theta", th.as_dict())
            return iv
    value, chain = lower_bound_l(S, budget, gen_cap)
    iv.truncated |= chain.truncated
    iv.raise_lower(value, "Sl", chain.as_dict())
    if iv.exact:
        return iv

    def sub_interval(Q):
        r = complexity_interval(Q, budget=budget, gen_cap=gen_cap, memo=memo)
        iv.truncated |= r.truncated
        return r

    # Fundamental Lemma: an aperiodic quotient has the same complexity
    T, _ = aperiodic_shrink(S)
    if T.n < S.n:
        r = sub_interval(T)
        iv.raise_lower(r.lower, "aperiodic-quotient", {"size": T.n})
        iv.cut_upper(r.upper, "aperiodic-quotient", {"size": T.n})
        if iv.exact:
            return iv
    if lp.n < S.n:
        r = sub_interval(lp)
        iv.raise_lower(r.lower, "lprime-quotient", {"size": lp.n})
        iv.cut_upper(r.upper + 1, "lprime-step", {"size": lp.n})
        if iv.exact:
            return iv
    from krc.structure import classify_transitivity, gm_images

    for img in gm_images(S):
        if not img.group_nontrivial or img.quotient.n >= S.n:
            continue
        r = sub_interval(img.quotient)
        iv.raise_lower(r.lower, "gm-image",
                       {"j_class": [x + 1 for x in S.green.j_members[img.j_class]],
                        "size": img.quotient.n})
        if iv.exact:
            return iv
    if classify_transitivity(S).is_gm and lp.n < S.n:
        r = sub_interval(lp)
        iv.raise_lower(r.lower, "rlm", {"size": lp.n})
        iv.cut_upper(r.upper + 1, "rlm", {"size": lp.n})
        if iv.exact:
            return iv
    greedy = theta_upper_greedy(S)
    if greedy is not NO_PROGRESS:
        iv.cut_upper(greedy, "theta-greedy")
        if iv.exact:
            return iv
    if S.n <= THETA_UPPER_SIZE:
        try:
            th = theta_exact(S)
        except BudgetExceeded:
            iv.truncated = True
        else:
            iv.cut_upper(th.value, "theta", th.as_dict())
    return iv


__all__ = [
    "Certificate", "ComplexityInterval", "TypeISlChain", "complexity_interval",
    "degree", "depth", "depth_chain", "is_absolute_type_I", "is_weakly_closed",
    "lower_bound_l", "type_II", "verify_sl_chain",
]
