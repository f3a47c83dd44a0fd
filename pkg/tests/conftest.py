from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fuchsian_forge.numberfield import make_field, rational_field

settings.register_profile(
    "forge",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("forge")

# curated test fields, all with irreducible moduli
FIELD_SPECS = [("x", 0), ("x^2-2", 1), ("x^2-2", 0), ("x^2-5", 1), ("x^3-x-1", 0), ("x^3-3*x+1", 2)]
FIELDS = {f"{p}@{i}": make_field(p, i) for p, i in FIELD_SPECS}


def small_fraction(max_num: int = 9, max_den: int = 6):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


def field_elements(K, max_num: int = 9, max_den: int = 6):
    return st.lists(small_fraction(max_num, max_den), min_size=K.degree, max_size=K.degree).map(K.element)


def nonzero_elements(K, **kw):
    return field_elements(K, **kw).filter(lambda e: not e.is_zero())


@st.composite
def field_and_element(draw, nonzero: bool = False):
    K = draw(st.sampled_from(list(FIELDS.values())))
    e = draw(nonzero_elements(K) if nonzero else field_elements(K))
    return K, e


@pytest.fixture(scope="session")
def Q():
    return rational_field()


@pytest.fixture(scope="session")
def Q2():
    return make_field("x^2-2", 1)


# end-to-end realization cases: (field polynomial, embedding index, a, b)
REALIZATION_CASES = [
    ("x", 0, "1", "1"),
    ("x", 0, "2", "3"),
    ("x^2-2", 1, "x", "x"),
    ("x^2-5", 1, "1", "2+x"),
    ("x^3-x-1", 0, "2", "x"),
]


def case_id(case) -> str:
    return f"{case[0]}@{case[1]}:({case[2]},{case[3]})"


_CERT_CACHE: dict = {}


def realized(case):
    """Certificate for a realization case, computed once per session."""
    if case not in _CERT_CACHE:
        from fuchsian_forge.realization import realize
        from fuchsian_forge.symbols import QuaternionSymbol

        poly, idx, a, b = case
        K = make_field(poly, idx)
        _CERT_CACHE[case] = (K, realize(K, QuaternionSymbol(K(a), K(b))))
    return _CERT_CACHE[case]
