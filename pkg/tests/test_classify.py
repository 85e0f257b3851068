from fractions import Fraction
import math

import pytest
from hypothesis import given, settings, strategies as st

from holder_lab import (
    SelfSimilar,
    VerdictKind,
    classify,
    classify_symbolic,
    classify_two_branch_holder,
    classify_two_branch_lipschitz,
    reduce_holder_to_lipschitz,
    verify_witness,
)
from holder_lab.arith import Exponent, Monomial
from holder_lab.cube import NotTotallyDisconnectedError
from holder_lab.symbolic import SymbolicSpace, dimension_moran

from instances import (
    CANTOR,
    CROSS,
    CUBE_TABLE,
    DIAGONAL_2,
    DUST_8,
    TWO_BRANCH_TABLE,
    cube_id,
)

K = VerdictKind
HALF, THIRD = Fraction(1, 2), Fraction(1, 3)


def q(*dens):
    return tuple(Fraction(1, d) for d in dens)


@pytest.mark.parametrize("E, F, lip, hol", CUBE_TABLE, ids=lambda x: cube_id(x) if hasattr(x, "digits") else str(x))
def test_cube_table(E, F, lip, hol):
    assert classify(E, F, "lipschitz").kind.value == lip
    assert classify(E, F, "holder").kind.value == hol


@pytest.mark.parametrize("r, t, lip, hol", TWO_BRANCH_TABLE, ids=str)
def test_two_branch_table(r, t, lip, hol):
    assert classify(SelfSimilar(r), SelfSimilar(t), "lipschitz").kind.value == lip
    assert classify(SelfSimilar(r), SelfSimilar(t), "holder").kind.value == hol


def test_symbolic_examples():
    a, b = SymbolicSpace.uniform(2, THIRD), SymbolicSpace.uniform(4, Fraction(1, 9))
    assert classify_symbolic(a, b, "lipschitz").kind is K.LIPSCHITZ
    c = SymbolicSpace.uniform(2, HALF)
    assert classify_symbolic(a, c, "lipschitz").kind is K.NOT_EQUIVALENT
    v = classify_symbolic(a, c, "holder")
    assert v.kind is K.HOLDER and v.witness is not None
    assert math.isclose(float(v.exponent), math.log(2) / math.log(3))  # d' = d**s, 2**-m = (3**-m)**s
    assert classify_symbolic(a, a, "lipschitz").kind is K.LIPSCHITZ


def test_cube_examples():
    v = classify(CANTOR, DUST_8, "holder")
    assert v.kind is K.HOLDER and v.theorem == "cube-holder"
    assert v.exponent == Exponent.of(THIRD)  # log 2 / log 8, same ratio 1/3
    same = classify(CANTOR, CANTOR, "holder")
    assert same.kind is K.HOLDER and same.exponent == Exponent.of(1)


def test_untrusted_cube_is_rejected():
    with pytest.raises(NotTotallyDisconnectedError):
        classify(CANTOR, DIAGONAL_2)
    with pytest.raises(NotTotallyDisconnectedError):
        classify(CANTOR, CROSS)
    assert classify(CANTOR, CROSS, assume_td=True).kind is K.NOT_EQUIVALENT  # log 2/log 20 irrational


def test_two_branch_examples():
    v = classify_two_branch_lipschitz(q(4, 8), q(2, 32))
    assert v.kind is K.LIPSCHITZ
    assert classify_two_branch_lipschitz(q(2, 4), q(3, 9)).kind is K.NOT_EQUIVALENT
    h = classify_two_branch_holder(q(4, 8), q(2, 32))
    assert h.kind is K.HOLDER and h.details["case"] == "exceptional-pattern"
    h2 = classify_two_branch_holder(q(2, 3), q(4, 9))
    assert h2.exponent == Exponent.of(2)
    assert verify_witness(h2.witness, 8).passed
    assert classify_two_branch_holder(q(2, 4), q(2, 3)).kind is K.NOT_EQUIVALENT
    assert classify_two_branch_holder(q(2, 3), q(5, 7)).kind is K.UNKNOWN


def test_exceptional_exponent_matches_dimensions():
    # r = (lam^4, lam^6), t = (lam, lam^5) with lam = 1/2: s = 1/2 exactly
    v = classify_two_branch_holder(q(16, 64), q(2, 32))
    assert v.exponent == Exponent.of(HALF)
    assert float(v.exponent) == pytest.approx(dimension_moran(q(16, 64)) / dimension_moran(q(2, 32)), abs=1e-11)


def test_same_guard_exponent_matches_dimensions():
    v = classify_two_branch_holder(q(4, 32), q(9, 243))
    assert not v.exponent.is_rational
    assert float(v.exponent) == pytest.approx(dimension_moran(q(4, 32)) / dimension_moran(q(9, 243)), abs=1e-11)
    assert verify_witness(v.witness, 8).passed


def test_opaque_bases():
    lam, mu = Monomial.base("lam"), Monomial.base("mu")
    assert classify_two_branch_lipschitz((lam**2, lam**3), (lam, lam**5)).kind is K.LIPSCHITZ
    assert classify_two_branch_holder((lam**2, lam**3), (mu, mu**5)).kind is K.HOLDER
    assert classify_two_branch_holder((lam**2, lam**3), (mu**2, mu**3)).kind is K.HOLDER
    assert classify_two_branch_holder((lam**2, lam**3), (mu, mu**4)).kind is K.NOT_EQUIVALENT


def test_reduction_examples():
    red = reduce_holder_to_lipschitz(q(4, 8), q(2, 32))
    assert red.s == Exponent.of(1) and red.verdict.kind is K.LIPSCHITZ
    assert red.s_numeric == pytest.approx(1.0, abs=1e-11)
    same = reduce_holder_to_lipschitz(q(2, 3), q(2, 3))
    assert same.s == Exponent.of(1) and same.verdict.kind is K.LIPSCHITZ
    three = reduce_holder_to_lipschitz(q(2, 3, 7), q(5, 5, 5))
    assert three.verdict.kind is K.UNKNOWN


def test_three_branch_same_ratios():
    E = SelfSimilar(q(2, 3, 7))
    assert classify(E, SelfSimilar(q(7, 2, 3)), "lipschitz").kind is K.LIPSCHITZ
    squared = classify(E, SelfSimilar(q(4, 9, 49)), "holder")
    assert squared.kind is K.HOLDER and squared.exponent == Exponent.of(2)
    assert classify(E, SelfSimilar(q(5, 5, 5)), "holder").kind is K.UNKNOWN


# -- invariants over generated instances --------------------------------------

bases = st.sampled_from([HALF, THIRD, Fraction(1, 5), Fraction(1, 6)])
two_branch = st.builds(
    lambda b1, e1, b2, e2: tuple(sorted((b1**e1, b2**e2), reverse=True)),
    bases, st.integers(1, 6), bases, st.integers(1, 6),
)
cubes = st.sampled_from([c for c, _, _, _ in CUBE_TABLE] + [f for _, f, _, _ in CUBE_TABLE])


def kind(E, F, mode):
    return classify(E, F, mode).kind


@settings(max_examples=300, deadline=None)
@given(two_branch, two_branch, st.sampled_from(["lipschitz", "holder"]))
def test_two_branch_symmetry(r, t, mode):
    assert kind(SelfSimilar(r), SelfSimilar(t), mode) == kind(SelfSimilar(t), SelfSimilar(r), mode)


@settings(max_examples=100, deadline=None)
@given(cubes, cubes, st.sampled_from(["lipschitz", "holder"]))
def test_cube_symmetry(E, F, mode):
    assert kind(E, F, mode) == kind(F, E, mode)


@settings(max_examples=200, deadline=None)
@given(two_branch)
def test_reflexivity(r):
    E = SelfSimilar(r)
    assert kind(E, E, "lipschitz") is K.LIPSCHITZ
    assert kind(E, E, "holder") is K.HOLDER


@settings(max_examples=300, deadline=None)
@given(two_branch, two_branch)
def test_lipschitz_implies_holder(r, t):
    E, F = SelfSimilar(r), SelfSimilar(t)
    if kind(E, F, "lipschitz") is K.LIPSCHITZ:
        assert kind(E, F, "holder") is K.HOLDER


@settings(max_examples=300, deadline=None)
@given(two_branch, two_branch)
def test_holder_verdict_agrees_with_reduction(r, t):
    hol = classify_two_branch_holder(r, t)
    red = reduce_holder_to_lipschitz(r, t)
    if hol.kind is K.UNKNOWN or red.verdict.kind is K.UNKNOWN:
        assert hol.kind is red.verdict.kind
    else:
        assert hol.equivalent == red.verdict.equivalent


@settings(max_examples=300, deadline=None)
@given(two_branch, two_branch)
def test_holder_exponent_is_dimension_ratio(r, t):
    v = classify_two_branch_holder(r, t)
    if v.kind is K.HOLDER:
        assert float(v.exponent) == pytest.approx(dimension_moran(r) / dimension_moran(t), rel=1e-9)


def test_verdict_json_shape():
    v = classify(SelfSimilar(q(2, 3)), SelfSimilar(q(4, 9)), "holder")
    doc = v.to_json()
    assert doc["kind"] == "StrictlyHolderEquivalent"
    assert doc["exponent"] == {"num": 2, "den": 1}
    assert doc["witness_available"] is True
