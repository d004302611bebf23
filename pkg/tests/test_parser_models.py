import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jordankit.algebra import GaussianRational, Poly, RatFun
from jordankit.errors import (
    DivisionByZeroFunctionError,
    ExpressionSyntaxError,
    FileError,
    NotPolynomialError,
    SchemaError,
)
from jordankit.jordan import Termination
from jordankit.models import (
    MatrixDocument,
    RecipSystemDocument,
    dump_json,
    load_candidate,
    load_chain,
    load_matrix,
    load_vector_function,
)
from jordankit.parser import parse_poly, parse_ratfun, parse_scalar, parse_vector, tokenize
from jordankit.ratmat import RatMat

from helpers import gr, poly, rf
from strategies import ratfuns


@pytest.mark.parametrize(
    "text, expected",
    [
        ("z", RatFun(poly(0, 1))),
        ("(z-2)/(z-3)", RatFun(poly(-2, 1), poly(-3, 1))),
        ("z^-1", RatFun(poly(1), poly(0, 1))),
        ("-z^2", RatFun(poly(0, 0, -1))),
        ("2/3^2", RatFun(poly(Fraction(4, 9)))),
        ("3/2i", RatFun(poly(GaussianRational(0, Fraction(3, 2))))),
        ("1 + i*z", RatFun(Poly((1, GaussianRational(0, 1))))),
        ("3/z", RatFun(poly(3), poly(0, 1))),
        ("  z  ", RatFun(poly(0, 1))),
    ],
)
def test_parse_ratfun(text, expected):
    assert parse_ratfun(text) == expected


def test_spaced_slash_is_division_not_literal():
    assert parse_ratfun("3 / 2i") == RatFun(poly(GaussianRational(0, Fraction(-3, 2))))


@pytest.mark.parametrize(
    "text, position", [("2z", 1), ("(z", 2), ("", 0), ("z +", 3), ("w", 0), ("z $ 1", 2), ("2/0", 2), ("z + 1/0i", 6)]
)
def test_parse_errors_report_position(text, position):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_ratfun(text)
    assert info.value.position == position
    assert f"at position {position}" in info.value.message


@pytest.mark.parametrize("text", ["1 / 0", "1/(z-z)", "0^-1"])
def test_parse_division_by_zero(text):
    with pytest.raises(DivisionByZeroFunctionError):
        parse_ratfun(text)


def test_custom_variable():
    assert parse_ratfun("t^2 - 1", var="t") == RatFun(poly(-1, 0, 1))
    with pytest.raises(ExpressionSyntaxError):
        parse_ratfun("z", var="t")


def test_tokenize_tracks_offsets():
    tokens = tokenize("3/2 + z")
    assert [(tok.kind, tok.pos) for tok in tokens] == [
        ("int", 0),
        ("op", 1),
        ("int", 2),
        ("op", 4),
        ("name", 6),
        ("end", 7),
    ]


def test_parse_poly_and_scalar():
    assert parse_poly("2*t+2") == poly(2, 2)
    with pytest.raises(NotPolynomialError):
        parse_poly("1/t")
    assert parse_scalar("-3/2") == gr(Fraction(-3, 2))
    assert parse_scalar("1 - 2i") == GaussianRational(1, -2)
    with pytest.raises(ExpressionSyntaxError):
        parse_scalar("z")


def test_parse_vector():
    assert parse_vector("1, 0,-1/2") == (gr(1), gr(0), gr(Fraction(-1, 2)))
    with pytest.raises(ExpressionSyntaxError):
        parse_vector("1,,2")
    with pytest.raises(ExpressionSyntaxError):
        parse_vector("")


# -- documents ---------------------------------------------------------------


def test_load_worked_matrix(worked_q):
    assert worked_q.rows == worked_q.cols == 3
    assert worked_q[0, 1] == rf("-1/(z-3)")


def test_matrix_document_round_trip(worked_q):
    document = MatrixDocument.from_ratmat(worked_q)
    again = MatrixDocument.from_json(json.loads(dump_json(document)))
    assert again.to_ratmat() == worked_q


@st.composite
def gaussian_ratmats(draw):
    rows = draw(st.integers(min_value=1, max_value=3))
    cols = draw(st.integers(min_value=1, max_value=3))
    return RatMat([[draw(ratfuns) for _ in range(cols)] for _ in range(rows)], cols=cols)


@given(gaussian_ratmats(), st.sampled_from(["z", "s", "lam"]))
def test_matrix_document_round_trips_any_matrix(matrix, var):
    document = MatrixDocument.from_ratmat(matrix, var)
    again = MatrixDocument.from_json(json.loads(dump_json(document)))
    assert again.var == var
    assert again.to_ratmat() == matrix


@pytest.mark.parametrize(
    "payload",
    [
        {"matrix": []},
        {"matrix": [["1", "z"], ["1"]]},
        {"matrix": [[1.5]]},
        {"var": "i", "matrix": [["1"]]},
        {"grid": [["1"]]},
        [["1"]],
    ],
)
def test_matrix_document_schema_errors(payload):
    with pytest.raises(SchemaError):
        MatrixDocument.from_json(payload)


def test_entry_syntax_error_names_the_entry():
    document = MatrixDocument.from_json({"matrix": [["1", "2z"]]})
    with pytest.raises(ExpressionSyntaxError) as info:
        document.to_ratmat()
    assert info.value.message.startswith("entry (1, 2):")
    assert info.value.position == 1


def test_recip_document_round_trip(recip_428):
    document = RecipSystemDocument.from_system(recip_428)
    assert RecipSystemDocument.from_json(document.to_json()).to_system() == recip_428


def test_recip_document_schema_errors():
    with pytest.raises(SchemaError):
        RecipSystemDocument.from_json({"n": 2, "equations": [[]]})
    with pytest.raises(SchemaError):
        RecipSystemDocument.from_json({"n": 0, "equations": []})
    with pytest.raises(SchemaError):
        RecipSystemDocument.from_json({"n": 1, "equations": [[{"m": 1, "a": "1"}]]})
    document = RecipSystemDocument.from_json({"n": 1, "equations": [[{"m": "1", "k": 0, "a": "1"}]]})
    with pytest.raises(SchemaError):
        document.to_system()


def test_load_vector_function_and_chain(data_file):
    assert load_vector_function(data_file("rootfn_worked.json")) == (rf("1"), rf("z-2"), rf("0"))
    chain = load_chain(data_file("chain_428.json"))
    assert chain.alpha == 1
    assert chain.vectors == ((gr(2), gr(1)), (gr(2), gr(2)))
    assert chain.termination is Termination.GIVEN


def test_load_candidate(data_file):
    candidate = load_candidate(data_file("candidate_428.json"))
    assert candidate.alpha == 1
    assert candidate.p == (poly(2, 2), poly(2, 1))


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(FileError):
        load_matrix(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_matrix(broken)
