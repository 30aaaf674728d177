import numpy as np
import pytest

from eichlerkit.errors import EnumerationOverflow, ParseError
from eichlerkit.presentation import (coset_enumerate, coset_table, evaluate_word, free_reduce,
                                     parse_presentation)
from eichlerkit.zoo import presentation_table


def test_parse_powers_inverses_and_equations():
    p = parse_presentation("x,y | x^4, x^2 = y^2, Y*x*y*x")
    assert p.generator_count == 2
    assert p.relators[0] == (1, 1, 1, 1)
    assert p.relators[1] == (1, 1, -2, -2)
    assert p.relators[2] == (-2, 1, 2, 1)


def test_negative_exponent_and_free_reduction():
    p = parse_presentation("a | a^3*a^-1")
    assert p.relators == ((1, 1),)
    assert free_reduce([1, 2, -2, -1, 3]) == [3]


@pytest.mark.parametrize("text, column", [("x,y x^2", 1), ("x | x^2, z", 8), ("x | x^2 * ^", 5)])
def test_parse_errors_report_position(text, column):
    with pytest.raises(ParseError) as err:
        parse_presentation(text, line=3)
    assert err.value.line == 3
    assert err.value.column is not None and err.value.column >= 1


@pytest.mark.parametrize("text, order", [
    ("x | x^5", 5),
    ("x,y | x^3, y^2, x*y*x*y", 6),
    ("x,y | x^4, y^2*X^2, Y*x*y*x", 8),
    ("r,s,t | r^2 = s^3, s^3 = t^4, t^4 = r*s*t", 48),
    ("a,b | a^3, b^3, a*b*a = b*a*b", 24),
    ("x,y | x, y", 1),
])
def test_coset_enumeration_orders(text, order):
    g = coset_enumerate(parse_presentation(text))
    assert g.order() == order
    assert g.bsgs.order() == order


def test_relators_hold_in_regular_representation():
    p = parse_presentation("r,s,t | r^2 = s^3, s^3 = t^4, t^4 = r*s*t")
    cols = coset_table(p)
    n = cols.shape[1]
    for rel in p.relators:
        assert np.array_equal(evaluate_word(rel, list(cols)), np.arange(n))


def test_overflow_is_reported():
    with pytest.raises(EnumerationOverflow):
        coset_table(parse_presentation("x,y | x^2"), max_cosets=50)


def test_shipped_presentations_have_declared_orders():
    for key, (order, text) in sorted(presentation_table().items()):
        if order > 1200:
            continue
        g = coset_enumerate(parse_presentation(text), 20 * order)
        assert g.order() == order, key
