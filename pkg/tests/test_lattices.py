import pytest

from krc.core import KRCError, builtin
from krc.lattices import (
    AmbientMismatch,
    NotInvariantCrossSection,
    SetPartitionElement,
    all_sp_elements,
    all_spcs,
    contradiction,
    from_rhodes,
    is_cross_section,
    is_invariant,
    make_spc,
    sp_bottom,
    sp_join,
    sp_leq,
    sp_meet,
    spc_as_dict,
    spc_join,
    spc_leq,
    spc_meet,
    to_rhodes,
)

GROUPS = ["Z1", "Z2"]


def group(name):
    return builtin(name).abstract


def cases():
    for name in GROUPS:
        for nb in (1, 2, 3):
            yield name, nb


def naive_join(a, b):
    """Finest partition of Y_a u Y_b coarser than both, by repeated merging."""
    blocks = [set(x) for x in a.blocks] + [set(x) for x in b.blocks]
    merged = True
    while merged:
        merged = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if blocks[i] & blocks[j]:
                    blocks[i] |= blocks.pop(j)
                    merged = True
                    break
            if merged:
                break
    return SetPartitionElement.make(a.ng, a.nb, blocks)


def test_sp_lattice_small():
    els = all_sp_elements(2, 2)
    for a in els:
        assert sp_leq(sp_bottom(2, 2), a)
        for b in els:
            m, j = sp_meet(a, b), sp_join(a, b)
            assert sp_leq(m, a) and sp_leq(m, b)
            assert sp_leq(a, j) and sp_leq(b, j)
            assert j == naive_join(a, b)


def test_sp_meet_is_greatest():
    els = all_sp_elements(1, 3)
    for a in els:
        for b in els:
            m = sp_meet(a, b)
            for c in els:
                if sp_leq(c, a) and sp_leq(c, b):
                    assert sp_leq(c, m)


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        sp_meet(sp_bottom(1, 2), sp_bottom(2, 2))


def test_make_rejects_overlap():
    with pytest.raises(KRCError):
        SetPartitionElement.make(2, 2, [{0, 1}, {1, 2}])


@pytest.mark.parametrize("name,nb", list(cases()))
def test_round_trip_both_ways(name, nb):
    G = group(name)
    ics = [a for a in all_sp_elements(G.n, nb) if is_cross_section(a) and is_invariant(G, a)]
    spcs = all_spcs(G, nb)
    assert len(ics) == len(spcs)
    for a in ics:
        assert from_rhodes(G, to_rhodes(G, a)) == a
    for x in spcs:
        assert to_rhodes(G, from_rhodes(G, x)) == x


@pytest.mark.parametrize("name,nb", list(cases()))
def test_meet_and_order_preserved(name, nb):
    G = group(name)
    spcs = all_spcs(G, nb)
    for x in spcs:
        for y in spcs:
            fx, fy = from_rhodes(G, x), from_rhodes(G, y)
            assert from_rhodes(G, spc_meet(x, y)) == sp_meet(fx, fy)
            assert spc_leq(x, y) == sp_leq(fx, fy)


@pytest.mark.parametrize("name,nb", list(cases()))
def test_join(name, nb):
    G = group(name)
    spcs = all_spcs(G, nb)
    for x in spcs:
        for y in spcs:
            j = spc_join(x, y)
            sj = sp_join(from_rhodes(G, x), from_rhodes(G, y))
            assert j.contradiction == (not is_cross_section(sj))
            if not j.contradiction:
                assert from_rhodes(G, j) == sj
            # least upper bound among SPCs
            assert spc_leq(x, j) and spc_leq(y, j)
            for z in spcs:
                if spc_leq(x, z) and spc_leq(y, z):
                    assert spc_leq(j, z)


def test_contradiction_example():
    G = group("Z2")
    e = G.identity
    g = 1 - e
    x = make_spc(G, 2, [{0: e, 1: e}])
    y = make_spc(G, 2, [{0: e, 1: g}])
    j = spc_join(x, y)
    assert j.contradiction and str(j) == "CONTRADICTION"
    assert spc_as_dict(j) == {"contradiction": True}
    assert spc_leq(x, contradiction(G, 2))


def test_normalization():
    G = group("Z2")
    e = G.identity
    g = 1 - e
    assert make_spc(G, 2, [{0: g, 1: e}]) == make_spc(G, 2, [{0: e, 1: g}])
    with pytest.raises(KRCError):
        make_spc(G, 2, [{0: e}, {0: g}])


def test_to_rhodes_rejects_non_invariant():
    G = group("Z2")
    a = SetPartitionElement.make(2, 1, [{0}])
    with pytest.raises(NotInvariantCrossSection):
        to_rhodes(G, a)
    with pytest.raises(NotInvariantCrossSection):
        from_rhodes(G, contradiction(G, 1))


def test_lattice_axioms_and_subsemilattices():
    els = all_sp_elements(2, 2)
    for a in els:
        assert sp_meet(a, a) == a and sp_join(a, a) == a
        for b in els:
            assert sp_meet(a, b) == sp_meet(b, a) and sp_join(a, b) == sp_join(b, a)
            assert sp_meet(a, sp_join(a, b)) == a and sp_join(a, sp_meet(a, b)) == a
            if is_cross_section(a) and is_cross_section(b):
                assert is_cross_section(sp_meet(a, b))
            if not is_cross_section(a) and not is_cross_section(b):
                assert not is_cross_section(sp_join(a, b))
    sample = els[::7]
    for a in sample:
        for b in sample:
            for c in sample:
                assert sp_meet(sp_meet(a, b), c) == sp_meet(a, sp_meet(b, c))
                assert sp_join(sp_join(a, b), c) == sp_join(a, sp_join(b, c))


def test_group_action_preserves_order():
    from krc.lattices import translate

    G = group("Z2")
    els = all_sp_elements(2, 2)
    for a in els:
        for b in els:
            if sp_leq(a, b):
                for g in range(2):
                    assert sp_leq(translate(G, g, a), translate(G, g, b))
