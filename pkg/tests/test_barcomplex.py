import itertools

import pytest
from hypothesis import given, settings, strategies as st

from arcop.barcomplex import (BarElement, Correlator, Slot, WindowLabel, basis_tuples, casimir,
                              codifferential, compose_correlators, degeneracy, differential, element,
                              face, involution, pairing, self_compose)
from arcop.errors import DegreeMismatch, NotReduced, SlotError
from arcop.field import F2, Q
from arcop.fixtures import system_cp2cp1, system_pt, system_split

SYSTEMS = [system_pt, system_cp2cp1, system_split]
LABELS = [WindowLabel.closed(), WindowLabel.open("b", "b"), WindowLabel.open("", "b"),
          WindowLabel.open("b", ""), WindowLabel.open("", "")]


def basis_element(s, lab, n, key, reduced=False):
    return BarElement(s, lab, n, {key: 1}, reduced=reduced)


def all_labels(s):
    out = [WindowLabel.closed()]
    ends = [""] + list(s.labels)
    out += [WindowLabel.open(a, b) for a in ends for b in ends]
    return out


@pytest.mark.parametrize("make", SYSTEMS)
@pytest.mark.parametrize("field", [Q, F2], ids=["Q", "F2"])
def test_d_squared_vanishes(make, field):
    s = make(field)
    for lab in all_labels(s):
        for n in range(2, 5):
            for reduced in ([True, False] if lab.is_closed else [False]):
                for key in basis_tuples(s, lab, n, reduced=reduced):
                    x = basis_element(s, lab, n, key, reduced)
                    assert differential(differential(x)).is_zero(), (lab, key)


def test_multi_label_ends_are_zero():
    s = system_pt(labels=("b", "c"))
    lab = WindowLabel.open({"b", "c"}, "b")
    assert basis_tuples(s, lab, 2) == []
    assert BarElement(s, lab, 1, {(0, 0, 0): 1}).is_zero()


@pytest.mark.parametrize("lab", LABELS, ids=str)
def test_simplicial_identities(cp2cp1, lab):
    s = cp2cp1
    for n in range(0, 3):
        for key in basis_tuples(s, lab, n):
            x = basis_element(s, lab, n, key)
            for j in range(1, n + 2):
                y = degeneracy(j, x)
                assert face(j, y) == x
                assert face(j - 1, y) == x


def test_degeneracy_range(pt):
    x = element(pt, WindowLabel.open("b", "b"), "1", "x", "1")
    with pytest.raises(IndexError):
        degeneracy(0, x)
    with pytest.raises(IndexError):
        degeneracy(3, x)


def test_open_differential_by_hand(pt, cp2cp1):
    lab = WindowLabel.open("b", "b")
    # x restricts to 0 in K, so both end faces vanish and x*x = 0
    assert differential(element(pt, lab, "1", "x", "1")).is_zero()
    assert differential(element(pt, lab, "1", "1", "1")).is_zero()
    assert differential(element(pt, lab, "1", "x", "x", "1")).is_zero()
    # d(1|h|1) = r(h)|1 - 1|r(h)
    d = differential(element(cp2cp1, lab, "1", "h", "1"))
    assert d == element(cp2cp1, lab, "t", "1") - element(cp2cp1, lab, "1", "t")


def test_closed_differential_by_hand(pt):
    lab = WindowLabel.closed()
    x = BarElement.from_words(pt, lab, {("x", "x"): 1})
    # x*x - x*x = 0; and 1|x -> x - x
    assert differential(x).is_zero()
    y = BarElement.from_words(pt, lab, {("1", "x", "x"): 1})
    # faces: (1*x)|x - 1|(x*x) + (x*1)|x = 2 x|x
    assert differential(y) == BarElement.from_words(pt, lab, {("x", "x"): 2})


def test_reduced_rejects_units(pt):
    with pytest.raises(NotReduced):
        BarElement(pt, WindowLabel.closed(), 1, {(1, 0): 1})
    with pytest.raises(DegreeMismatch):
        BarElement(pt, WindowLabel.open("b", "b"), 1, {(0, 0): 1})


@pytest.mark.parametrize("lab", LABELS, ids=str)
def test_casimir_resolution_of_identity(system, lab):
    for n in (0, 1):
        cas = casimir(system, lab, n)
        for key in basis_tuples(system, lab, n):
            x = basis_element(system, lab, n, key)
            acc = BarElement(system, lab, n, {})
            for left, right, c in cas:
                p = pairing(x, basis_element(system, lab.bar(), n, right))
                acc = acc + basis_element(system, lab, n, left).scale(c * p)
            assert acc == x


@pytest.mark.parametrize("lab", LABELS, ids=str)
def test_codifferential_is_adjoint(cp2cp1, lab):
    s = cp2cp1
    for n in (0, 1):
        for kx in basis_tuples(s, lab, n):
            x = basis_element(s, lab, n, kx)
            dx = codifferential(x)
            for ky in basis_tuples(s, lab.bar(), n + 1):
                y = basis_element(s, lab.bar(), n + 1, ky)
                assert pairing(y, dx) == pairing(differential(y), x)


def test_pairing_symmetry_under_involution(cp2cp1):
    lab = WindowLabel.open("b", "")
    for n in (0, 1):
        for kx in basis_tuples(cp2cp1, lab, n):
            for ky in basis_tuples(cp2cp1, lab.bar(), n):
                x, y = basis_element(cp2cp1, lab, n, kx), basis_element(cp2cp1, lab.bar(), n, ky)
                assert pairing(x, y) == pairing(involution(y), involution(x))


def test_pairing_degree_mismatch(pt):
    lab = WindowLabel.open("b", "b")
    with pytest.raises(DegreeMismatch):
        pairing(element(pt, lab, "1", "1"), element(pt, lab, "1", "1", "1"))


words = st.lists(st.sampled_from(["1", "h", "h2"]), min_size=1, max_size=3)


@given(words, words)
@settings(max_examples=40, deadline=None)
def test_d_linear(w1, w2):
    s = system_cp2cp1()
    lab = WindowLabel.closed()
    if len(w1) != len(w2):
        return
    x = BarElement.from_words(s, lab, {tuple(w1): 1})
    y = BarElement.from_words(s, lab, {tuple(w2): 3})
    assert differential(x + y) == differential(x) + differential(y)


def _toy_correlator(s, lab, n, name):
    table = {(k,): i + 1 for i, k in enumerate(basis_tuples(s, lab, n))}
    return Correlator(s, [Slot(name, lab, n)], table)


def test_compose_contracts_dual_bases(pt):
    lab = WindowLabel.open("b", "b")
    Y = Correlator(pt, [Slot("a", lab, 1), Slot("o", lab, 0)],
                   {((0, 1, 0), (0, 0)): 1, ((0, 0, 0), (0, 0)): 2})
    Yp = _toy_correlator(pt, lab.bar(), 1, "p")
    Z = compose_correlators(Y, Yp, "a", "p")
    # the metric of K (x) S2 (x) K is antidiagonal in the middle factor
    assert Z.table == {((0, 0),): 1 * 1 + 2 * 2}


def test_self_compose_and_missing_slots(pt):
    lab = WindowLabel.closed()
    Y = Correlator(pt, [Slot("u", lab, 0), Slot("v", lab, 0)], {((0,), (1,)): 1, ((1,), (0,)): 1})
    Z = self_compose(Y, "u", "v")
    assert Z.slots == () and Z.table == {(): 2}
    with pytest.raises(SlotError):
        Y({"u": BarElement(pt, lab, 0, {(0,): 1})})


def test_correlator_slot_degree_mismatch(pt):
    lab = WindowLabel.closed()
    Y = Correlator(pt, [Slot("u", lab, 0)], {})
    Yp = Correlator(pt, [Slot("v", lab, 1)], {})
    with pytest.raises(DegreeMismatch):
        compose_correlators(Y, Yp, "u", "v")


def test_all_tuples_enumerated(cp2cp1):
    lab = WindowLabel.open("b", "b")
    assert len(basis_tuples(cp2cp1, lab, 2)) == 2 * 9 * 2
    assert len(basis_tuples(cp2cp1, WindowLabel.closed(), 2, reduced=True)) == 3 * 4
    assert len(list(itertools.islice(basis_tuples(cp2cp1, lab, 0), 10))) == 4
