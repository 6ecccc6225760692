import itertools

import pytest

from conftest import tup
from polytriv.engine import PolymorphismTuple, classify_polymorphism, is_polymorphism
from polytriv.errors import DegenerateInputError, PreconditionError
from polytriv.functions import AND, NEGATION, OR, XNOR, XOR, FunctionTable
from polytriv.phi import phi_all_permutations, phi_const_id_neg, phi_identity, phi_negation, phi_uniform_negation
from polytriv.predicate import closed_under_setting, equality_predicate, symmetric_predicate
from polytriv.symmetric import non_degenerate_weight_sets
from polytriv.triviality import (
    check_trivial_for_n,
    conforms,
    decide_trivial,
    find_and_or_polymorphism,
    find_latin_square_polymorphism,
    reduction_report,
    unary_shape,
)


def _assert_neither_witness(P, Phi, report):
    assert not report.trivial and report.witnesses
    for w in report.witnesses:
        assert is_polymorphism(P, w)
        assert classify_polymorphism(P, Phi, w).is_neither


def test_nae_trivial_at_two(nae):
    report = check_trivial_for_n(nae, phi_negation(3), 2, census=True)
    assert report.trivial and report.checked_arity == 2
    assert sum(report.census.values()) == 94


def test_even_parity_not_trivial(even3):
    Phi = phi_negation(3)
    report = check_trivial_for_n(even3, Phi, 2)
    _assert_neither_witness(even3, Phi, report)
    assert report.witnesses[0].raw == (XOR().table,) * 3


def test_nae_identity_family_fails_at_one(nae):
    Phi = phi_identity((2, 2, 2))
    report = check_trivial_for_n(nae, Phi, 1)
    _assert_neither_witness(nae, Phi, report)
    assert report.witnesses[0].raw == (NEGATION.table,) * 3


def test_decide_trivial_examples(nae, atleast2):
    assert decide_trivial(nae, phi_negation(3)).trivial
    Phi = phi_negation(3)
    _assert_neither_witness(atleast2, Phi, decide_trivial(atleast2, Phi))
    assert classify_polymorphism(atleast2, Phi, tup(OR(), OR(), OR())).is_neither
    eq = equality_predicate(2)
    _assert_neither_witness(eq, phi_negation(2), decide_trivial(eq, phi_negation(2)))
    assert classify_polymorphism(eq, phi_negation(2), tup(XOR(), XOR())).is_neither


def test_degenerate_input_rejected(cube3):
    with pytest.raises(DegenerateInputError):
        decide_trivial(cube3, phi_negation(3))


def _and_or_space(P):
    return [tup(*c) for c in itertools.product((AND(), OR()), repeat=P.m)]


def test_and_or_detector(atmost1, even3, nae):
    assert find_and_or_polymorphism(atmost1).raw == (AND().table,) * 3
    for P in (even3, nae):
        assert find_and_or_polymorphism(P) is None
        assert not any(is_polymorphism(P, fs) for fs in _and_or_space(P))


def test_and_or_on_mixed_alphabet():
    # coordinate 0 is ternary and copies its first argument
    P = symmetric_predicate(2, {0, 1})
    fs = find_and_or_polymorphism(P)
    assert fs is not None
    assert fs.raw in {(AND().table, AND().table)}


def test_latin_detector(even3, nae):
    assert find_latin_square_polymorphism(even3, phi_negation(3)).raw == (XOR().table,) * 3
    assert find_latin_square_polymorphism(even3, phi_identity((2, 2, 2))) is None
    assert find_latin_square_polymorphism(nae, phi_negation(3)) is None
    space = [tup(*c) for c in itertools.product((XOR(), XNOR()), repeat=3)]
    assert not any(is_polymorphism(nae, fs) for fs in space)
    assert not any(conforms(even3, phi_identity((2, 2, 2)), fs) for fs in space if is_polymorphism(even3, fs))


def test_reduction_report_weight_at_most_one(atmost1):
    rep = reduction_report(atmost1, phi_negation(3))
    # (const0, id, id) keeps weight <= 1 yet x_0 = 0 alone is no certificate
    assert not rep.trivial_at_1
    assert rep.furthermore_shape == "const-or-id"
    # detectors only run once arity 1 is trivial
    assert rep.closed_settings == [] and not rep.any_case
    assert [(i, s) for i in range(3) for s in range(2) if closed_under_setting(atmost1, i, s)] == [(0, 0), (1, 0), (2, 0)]


def test_reduction_report_nae(nae):
    rep = reduction_report(nae, phi_negation(3), check_n2=True)
    assert rep.trivial_at_1 and not rep.any_case
    assert rep.trivial_at_2 is True


def test_reduction_report_even_parity_identity(even3):
    Phi = phi_identity((2, 2, 2))
    rep = reduction_report(even3, Phi)
    assert not rep.trivial_at_1
    w = rep.furthermore_witness
    assert is_polymorphism(even3, w)
    assert classify_polymorphism(even3, Phi, w).is_neither
    assert rep.furthermore_shape in {"const-or-id", "id-or-neg"}


def test_reduction_needs_permutations(nae):
    with pytest.raises(PreconditionError):
        reduction_report(nae, phi_const_id_neg(3))


def test_unary_shape():
    c0, c1, x, nx = (FunctionTable(2, 1, t) for t in [(0, 0), (1, 1), (0, 1), (1, 0)])
    assert unary_shape(tup(c0, c1, x)) == "const-or-id"
    assert unary_shape(tup(x, nx, nx)) == "id-or-neg"
    assert unary_shape(tup(c0, nx, x)) is None


def _cases(max_m):
    return [(m, W) for m in range(2, max_m + 1) for W in non_degenerate_weight_sets(m)]


@pytest.mark.parametrize("m,W", _cases(4))
def test_arity_consistency(m, W):
    P = symmetric_predicate(m, W)
    for Phi in (phi_negation(m), phi_identity((2,) * m)):
        t1 = check_trivial_for_n(P, Phi, 1).trivial
        t2 = check_trivial_for_n(P, Phi, 2).trivial
        if t2:
            assert t1
            if m <= 3:
                assert check_trivial_for_n(P, Phi, 3).trivial
        if not t1:
            assert not t2


@pytest.mark.parametrize("m,W", _cases(4))
def test_furthermore_shape(m, W):
    P = symmetric_predicate(m, W)
    for Phi in (phi_negation(m), phi_uniform_negation(m), phi_identity((2,) * m)):
        rep = reduction_report(P, Phi)
        if rep.trivial_at_1:
            continue
        w = rep.furthermore_witness
        assert rep.furthermore_shape in {"const-or-id", "id-or-neg"}
        assert is_polymorphism(P, w) and classify_polymorphism(P, Phi, w).is_neither


def test_non_dictatorial_uses_all_permutations(atmost1):
    fs = find_and_or_polymorphism(atmost1)
    assert not classify_polymorphism(atmost1, phi_all_permutations(atmost1.sizes), fs).dictatorial
