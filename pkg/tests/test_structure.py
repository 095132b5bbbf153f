import time

import pytest

import oracles
from conftest import gm_fixtures
from krc.core import builtin, is_isomorphic
from krc.morphisms import lprime_image
from krc.structure import (
    InvalidCongruence,
    NotGM,
    TsCongruence,
    classify_transitivity,
    eggbox_dot,
    gb_dot,
    gm_images,
    gm_structure,
    ideal_j_class,
    is_injective_congruence,
    is_ts_congruence,
    quotient_ts,
    rees_coordinates,
    rees_matrix_semigroup,
    rlm,
    schutzenberger_right,
    tilson_congruence,
    tilson_via_typeII,
    zero_element,
)


def test_zero_and_ideal():
    S = builtin("SIS2").abstract
    z = zero_element(S)
    assert z is not None
    J = ideal_j_class(S)
    assert len(S.green.j_members[J]) == 4
    assert zero_element(builtin("Z2").abstract) is None


@pytest.mark.parametrize("name,kind,gm", [
    ("Z2", "bi", True), ("T3", "right", False), ("SIS2", "bi", False),
])
def test_transitivity(name, kind, gm):
    tr = classify_transitivity(builtin(name).abstract)
    assert tr.kind == kind and tr.is_gm == gm


def test_rees_coordinates_multiply():
    for name, S in gm_fixtures():
        rc = rees_coordinates(S)
        members = S.green.j_members[rc.j_class]
        assert set(rc.coords) == set(members)
        for x in members:
            for y in members:
                got = rc.multiply(rc.coords[x], rc.coords[y])
                z = S.table[x][y]
                if got is None:
                    assert z not in rc.coords
                else:
                    assert rc.element_at[got] == z


def test_rees_round_trip():
    # coordinatizing M0(G; C) returns a group of the same order and the same shape
    G = builtin("Z3").abstract
    g = next(x for x in range(3) if x != G.identity)
    C = [[G.identity, G.identity], [G.identity, g]]
    S = rees_matrix_semigroup(G, 2, 2, C)
    rc = rees_coordinates(S)
    assert rc.G.n == 3 and len(rc.A) == 2 and len(rc.B) == 2
    assert is_isomorphic(rc.G, G)


def test_schutzenberger_group_order():
    S = builtin("T3").abstract
    g = S.green
    for J in range(g.n_j):
        x = g.j_members[J][0]
        rep = schutzenberger_right(S, g.r_class[x])
        assert len(rep.states) == len(g.r_members[g.r_class[x]])


def test_gm_structure_rejects_non_gm():
    with pytest.raises(NotGM):
        gm_structure(builtin("SIS2").abstract)


def test_gm_fixture_count():
    assert len(gm_fixtures()) >= 10


def test_rlm_is_lprime_image():
    for name, S in gm_fixtures():
        gm = gm_structure(S)
        r = rlm(gm)
        L, _ = lprime_image(S)
        assert is_isomorphic(r.ts.abstract, L), name
        assert r.morphism.is_surjective


def test_tilson_matches_partition_oracle():
    for name, S in gm_fixtures():
        if S.n > 20:
            continue
        X = gm_structure(S).base
        want = oracles.least_injective_congruence(X.elements, X.q)
        got = tilson_congruence(X)
        assert oracles.same_partition(got.classes, want), name


def test_tilson_via_type_II():
    for name, S in gm_fixtures():
        t0 = time.time()
        gm = gm_structure(S)
        assert tilson_via_typeII(gm) == tilson_congruence(gm.base), name
        assert time.time() - t0 < 5


def test_ts_congruences():
    X = gm_structure(gm_fixtures()[0][1]).base
    c = tilson_congruence(X)
    assert is_ts_congruence(X, c) and is_injective_congruence(X, c)
    Q = quotient_ts(X, c)
    assert Q.q == c.n_classes
    bad = TsCongruence.from_labels([0] * (X.q - 1) + [1])
    if not is_ts_congruence(X, bad):
        with pytest.raises(InvalidCongruence):
            quotient_ts(X, bad)
    top = TsCongruence.from_labels([0] * X.q)
    assert c.meet(top) == c


def test_gm_images_t3():
    imgs = gm_images(builtin("T3").abstract)
    assert sorted(i.quotient.n for i in imgs) == [7, 25, 27]
    assert sum(i.group_nontrivial for i in imgs) == 2


def test_dot_outputs():
    S = builtin("Z2").abstract
    assert eggbox_dot(S, 0).startswith("digraph eggbox")
    assert "cluster_0" in gb_dot(gm_structure(S))


def test_rlm_is_smaller():
    for name, S in gm_fixtures():
        assert rlm(gm_structure(S)).ts.n < S.n, name


def test_gm_divides_wreath_with_rlm():
    from krc.core import right_regular
    from krc.products import divides, wreath

    checked = 0
    for name, S in gm_fixtures():
        gm = gm_structure(S)
        r = rlm(gm)
        if gm.n_g ** gm.n_b * r.ts.n > 200:
            continue
        W = wreath(right_regular(gm.rees.G), r.ts).abstract
        assert divides(S, W).status == "yes", name
        checked += 1
    assert checked >= 3


def test_meet_of_injective_congruences():
    for name, S in gm_fixtures():
        X = gm_structure(S).base
        if X.q > 6:
            continue
        inj = [TsCongruence.from_labels(lab) for lab in oracles.ts_congruences(X.elements, X.q)
               if oracles.is_injective_on_classes(X.elements, lab)]
        for a in inj:
            for b in inj:
                assert is_injective_congruence(X, a.meet(b))
