import pytest
from fractions import Fraction

from contrex.atoms import EQ, LE, LT, LinearAtom, VarRef
from contrex.errors import (
    ConstraintSyntaxError,
    TypeMismatchError,
    UnknownNameError,
)
from contrex.parser import parse_constraint, parse_distance_spec
from contrex.schema import FeatureSchema, FeatureSpec


@pytest.fixture()
def schema():
    return FeatureSchema(
        [
            FeatureSpec("race", "categorical", values=("Black", "White")),
            FeatureSpec("age", "ordinal", min=Fraction(17), max=Fraction(90)),
            FeatureSpec("gain", "continuous", min=Fraction(0), max=Fraction(100)),
        ]
    )


INSTANCES = ["F", "CE"]


def one(text, schema):
    atoms = parse_constraint(text, schema, INSTANCES)
    assert len(atoms) == 1
    return atoms[0]


def test_simple_comparisons(schema):
    a = one("F.age <= 30", schema)
    assert a == LinearAtom.make({VarRef("F", "age"): 1}, LE, 30)
    a = one("F.age > 20", schema)
    assert a == LinearAtom.make({VarRef("F", "age"): 1}, ">", 20)
    a = one("CE.age = F.age", schema)
    assert a.rel == EQ and a.rhs == 0
    assert set(a.variables()) == {VarRef("CE", "age"), VarRef("F", "age")}


def test_arithmetic_both_sides(schema):
    a = one("2*CE.gain - F.gain <= F.age + 5", schema)
    assert a.coeff(VarRef("CE", "gain")) == 2
    assert a.coeff(VarRef("F", "gain")) == -1
    assert a.coeff(VarRef("F", "age")) == -1
    assert a.rhs == 5


def test_decimal_and_fraction_literals(schema):
    # canonical form scales to coprime integers
    a = one("F.gain <= 19.5", schema)
    assert a.coeff(VarRef("F", "gain")) == 2 and a.rhs == 39
    b = one("F.gain <= 1/3", schema)
    assert b.coeff(VarRef("F", "gain")) == 3 and b.rhs == 1


def test_leading_sign_and_constant_folding(schema):
    a = one("-F.gain + 2 <= 0", schema)
    assert a.coeff(VarRef("F", "gain")) == -1 and a.rhs == -2


def test_categorical_literal(schema):
    a = one("CE.race = Black", schema)
    assert a == LinearAtom.make({VarRef("CE", "race", "Black"): 1}, EQ, 1)
    # literal may appear on either side
    assert one("Black = CE.race", schema) == a


def test_categorical_cross_instance_expands_per_coordinate(schema):
    atoms = parse_constraint("CE.race = F.race", schema, INSTANCES)
    assert len(atoms) == 2
    for atom in atoms:
        assert atom.rel == EQ and atom.rhs == 0
    coords = {a.variables()[0].coord for a in atoms}
    assert coords == {"Black", "White"}


def test_coordinate_reference(schema):
    a = one("CE.race[White] = 0", schema)
    assert a == LinearAtom.make({VarRef("CE", "race", "White"): 1}, EQ, 0)


def test_categorical_self_equality_is_trivially_true(schema):
    # regression: the +1/-1 coordinate pair used to collapse into a
    # lone -1, producing contradictory pins F.race[v]=0
    atoms = parse_constraint("F.race = F.race", schema, INSTANCES)
    assert all(not a.terms and a.rel == EQ and a.rhs == 0 for a in atoms)


def test_syntax_errors_carry_position(schema):
    with pytest.raises(ConstraintSyntaxError) as err:
        parse_constraint("F.age <=", schema, INSTANCES)
    assert err.value.position == 8
    with pytest.raises(ConstraintSyntaxError) as err:
        parse_constraint("F.age ? 3", schema, INSTANCES)
    assert err.value.position == 6
    with pytest.raises(ConstraintSyntaxError):
        parse_constraint("F.age <= 3 extra", schema, INSTANCES)
    with pytest.raises(ConstraintSyntaxError):
        parse_constraint("", schema, INSTANCES)


def test_unknown_names(schema):
    with pytest.raises(UnknownNameError):
        parse_constraint("Q.age <= 3", schema, INSTANCES)
    with pytest.raises(UnknownNameError):
        parse_constraint("F.salary <= 3", schema, INSTANCES)
    with pytest.raises(UnknownNameError):
        parse_constraint("CE.race = Green", schema, INSTANCES)
    with pytest.raises(UnknownNameError):
        parse_constraint("CE.race[Green] = 1", schema, INSTANCES)


def test_type_mismatches(schema):
    with pytest.raises(TypeMismatchError):
        parse_constraint("CE.race <= 1", schema, INSTANCES)
    with pytest.raises(TypeMismatchError):
        parse_constraint("2*CE.race = Black", schema, INSTANCES)
    with pytest.raises(TypeMismatchError):
        parse_constraint("CE.race + F.age = 1", schema, INSTANCES)
    with pytest.raises(TypeMismatchError):
        parse_constraint("F.age[Black] = 1", schema, INSTANCES)


def test_division_by_zero_rejected(schema):
    with pytest.raises(ConstraintSyntaxError):
        parse_constraint("F.age <= 1/0", schema, INSTANCES)


def test_atom_text_reparses_to_itself(schema):
    texts = [
        "CE.age-F.age=0",
        "2*CE.gain+3*F.gain<7",
        "CE.race[Black]=1",
        "-F.age<=-17",
    ]
    for text in texts:
        (atom,) = parse_constraint(text, schema, INSTANCES)
        assert atom.text() == text
        (again,) = parse_constraint(atom.text(), schema, INSTANCES)
        assert again == atom


def test_distance_spec():
    assert parse_distance_spec("l1norm(F, CE)") == ("F", "CE")
    assert parse_distance_spec("l1norm(F,CE)") == ("F", "CE")
    with pytest.raises(ConstraintSyntaxError):
        parse_distance_spec("l2norm(F, CE)")
    with pytest.raises(ConstraintSyntaxError):
        parse_distance_spec("l1norm(F)")
