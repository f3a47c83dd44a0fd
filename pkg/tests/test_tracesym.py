from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fuchsian_forge.tracesym import (
    ATOMS,
    C_POLY,
    MIRRORS,
    NINV,
    NV,
    ONE,
    R,
    S,
    T,
    THEOREM_WORDS,
    TONE,
    TZERO,
    QMatrix,
    check_basic_traces,
    check_commutator_identities,
    check_theorem_2_3,
    closed_forms,
    commutator,
    generic_generators,
    half_trace_c,
    parse_word,
    qmul,
    rat,
    rho_sigma_closed_form,
    tower,
    trace_of,
    trace_of_product,
    word_name,
    word_trace,
)

from .conftest import small_fraction


def const_q(*cs) -> QMatrix:
    return QMatrix(*(tower(rat(Fraction(c))) for c in cs))


def evaluate_const(q):
    return q.base.evaluate(0, 0, 0)


def mat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def test_qmul_examples():
    one = const_q(1, 0, 0, 0)
    i = const_q(0, 1, 0, 0)
    jpk = const_q(0, 0, 1, 0)
    jmk = const_q(0, 0, 0, 1)
    assert qmul(one, one) == one
    assert qmul(i, i) == one
    assert qmul(jpk, jmk) == const_q(2, 2, 0, 0)
    a, b = const_q(1, 0, 1, 0), const_q(1, 0, 0, 1)
    assert trace_of_product(a, b) == tower(rat(6))
    assert trace_of(a * b) == trace_of_product(a, b)


quats = st.tuples(*(small_fraction() for _ in range(4))).map(lambda cs: const_q(*cs))


@given(quats, quats)
def test_qmul_matches_matrix_product(A, B):
    lhs = (A * B).as_2x2(evaluate_const)
    rhs = mat_mul(A.as_2x2(evaluate_const), B.as_2x2(evaluate_const))
    assert lhs == rhs


@given(quats, quats, quats)
def test_qmul_associative(A, B, C):
    assert (A * B) * C == A * (B * C)


@given(quats)
def test_adjugate_and_det(A):
    m = A.as_2x2(evaluate_const)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assert A.det_form() == tower(rat(det))
    assert A * A.adjugate() == QMatrix(A.det_form(), TZERO, TZERO, TZERO)


def test_tower_relation():
    C = tower(ext=rat(1))
    assert C * C == tower(rat((C_POLY - ONE) * (C_POLY + ONE)))
    # 1/(c-1) * C * C = c + 1: the atom cancels
    assert tower(ext=rat(1, 1)) * C == tower(rat(C_POLY + ONE))


def test_multirat_basics():
    x = rat(R, 1)
    assert x * rat(C_POLY - ONE) == rat(R)
    assert rat(ATOMS[0], 1) == rat(1)
    assert rat(1, 1) + rat(1, 0, 1) == rat(2 * C_POLY, 1, 1)
    assert not rat(R).is_zero() and (rat(R) - rat(R)).is_zero()
    assert rat(NV * NINV).n_free() and not rat(NV).n_free()
    assert rat(R * S, 1).evaluate(2, 2, 2) == Fraction(4, 8)
    assert half_trace_c(2, 2, 2) == 9


def test_poly_laurent():
    assert (NV ** 3) * (NINV ** 3) == ONE
    assert NINV.n_degrees() == {-1}
    assert (R + S).evaluate([1, 2, 3, 4]) == 3
    assert (NINV * 2).evaluate([0, 0, 0, Fraction(1, 2)]) == 4


def test_generator_traces_and_dets():
    report = check_basic_traces()
    assert all(report.values()) and len(report) == 9
    for g in generic_generators():
        assert g.det_form() == TONE


def test_rho_sigma_closed_form():
    rho, sigma, _, _ = generic_generators()
    prod = rho * sigma
    for a, b in zip(prod.coords, rho_sigma_closed_form().coords):
        assert a == b


def test_commutator_identities():
    report = check_commutator_identities()
    assert all(report.values())
    assert "tr[rho,sigma] = -2c" in report and "[rho sigma, sigma] = [rho, sigma]" in report
    rho, sigma, _, _ = generic_generators()
    assert trace_of(commutator(rho, sigma)) == tower(rat(-2 * C_POLY))


def test_theorem_table():
    table = check_theorem_2_3()
    assert [w for w, _ in table.rows] == list(THEOREM_WORDS)
    forms = closed_forms()
    assert len(forms) == 5
    assert len(table.closed_form_words) == 5 + len(MIRRORS)
    for w, v in table.rows:
        assert v.n_free()
        assert word_trace(w).in_base()
    d = table.as_dict()
    assert d["rho"] == rat(2 * R) and d["sigma"] == rat(2 * S) and d["rho sigma"] == rat(2 * T)
    assert d["rho' sigma'"] == rat(2 * T)


def test_mirror_words_match():
    forms = closed_forms()
    for w, mirror in MIRRORS.items():
        assert word_trace(w).base == forms[mirror]


SPOT = {
    "sigma sigma'": 22,
    "rho rho'": 22,
    "rho sigma'": -8,
    "rho sigma sigma'": -16,
    "rho sigma rho'": 24,
}


@pytest.mark.parametrize("word, value", sorted(SPOT.items()))
def test_spot_values(word, value):
    assert word_trace(word).base.evaluate(2, 2, 2) == value


def test_table_json_shape():
    table = check_theorem_2_3()
    data = json.loads(table.dumps())
    assert data["variables"] == ["r", "s", "t"]
    assert len(data["traces"]) == 14
    row = data["traces"][6]
    assert row["word"] == "rho rho'"
    assert set(row["trace"]) >= {"numerator", "denominator", "denominator_factored"}


def test_parse_word_aliases():
    assert parse_word("ρ σ′") == ("rho", "sigma'")
    assert parse_word("rho*sigma'") == ("rho", "sigma'")
    assert word_name(("rho", "sigma")) == "rho sigma"
    with pytest.raises(ValueError):
        parse_word("tau")
    with pytest.raises(ValueError):
        parse_word("")


def test_longer_word_has_no_closed_form_but_is_n_free():
    # longer words still satisfy the field-of-definition part
    table = check_theorem_2_3([("rho", "sigma", "rho'", "sigma'")])
    assert table.closed_form_words == []
    assert table.rows[0][1].n_free()


@given(st.tuples(*(st.fractions(Fraction(11, 10), 5, max_denominator=20) for _ in range(3))))
def test_word_traces_are_polynomial_identities(rst):
    # each closed form agrees with the computed trace at random points, with
    # no division by zero once c > 1
    r, s, t = rst
    c = half_trace_c(r, s, t)
    if c <= 1:
        return
    forms = closed_forms()
    for w, f in forms.items():
        assert word_trace(w).base.evaluate(r, s, t) == f.evaluate(r, s, t)
