import pytest

from eichlerkit.errors import ParseError, ValidationError
from eichlerkit.zoo import get_group, load_catalog, parse_catalog, parse_group_expr


def test_shipped_catalog_orders(catalog):
    assert len(catalog) == 38
    for g in catalog.values():
        if g.order() <= 20000:
            assert g.perm_group.order() == g.order() == g.declared_order
        else:
            assert g.order() == g.declared_order


def test_products_keep_their_factors(catalog):
    g = catalog["BTxBI^2"]
    assert [f.order() for f in g.factors] == [24, 120, 120]
    assert g.order() == 345600


@pytest.mark.parametrize("expr, order", [
    ("Q(24)", 24), ("C(7) x Q(8)", 56), ("BT x C(2)", 48), ("(BO x C(2))", 96),
    ("perm[4]: (0,1,2,3); (0,2)", 8), ("SG(32,14)", 32),
    ("SD(C(7), C(3), {g1^2})", 21),
])
def test_group_expressions(expr, order):
    assert get_group(expr, []).order() == order


def test_catalog_references_resolve(catalog):
    g = get_group("Q8:BT x C(2)", list(catalog.values()))
    assert g.order() == 384


@pytest.mark.parametrize("text, line, column", [
    ("A = Q(8)\nB = Q(7)\n", 2, 5),
    ("A = Q(8)\nA = C(2)\n", 2, 1),
    ("A = Q(8)\n\nB Q(8)\n", 3, 1),
    ("A = C(2) x Zed\n", 1, 12),
    ("A = perm[3]: (0,5)\n", 1, 14),
])
def test_catalog_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_catalog(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_declared_order_is_checked(tmp_path):
    path = tmp_path / "bad.catalog"
    path.write_text("X = Q(12)   # order=24\n")
    with pytest.raises(ValidationError):
        load_catalog(str(path))


def test_equal_expressions_give_equal_specs():
    assert parse_group_expr("BT x Q(12)") == parse_group_expr("BT  x  Q( 12 )")
    assert parse_group_expr("BT x Q(12)") != parse_group_expr("Q(12) x BT")
