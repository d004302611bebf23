"""
JSON documents read and written by the command line: matrices, reciprocal
systems, vector functions, chains and reciprocal candidates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .algebra import RatFun
from .errors import ExpressionSyntaxError, SchemaError
from .jordan import JordanChain, Termination
from .odes import ExpRationalSolution, RecipTerm, ReciprocalSystem
from .parser import parse_poly, parse_ratfun, parse_scalar
from .ratmat import MatPoly, RatMat
from .utils import get_logger, load_json, require_keys

logger = get_logger("models")


def _variable(payload: dict, default: str, where: str) -> str:
    var = payload.get("var", default)
    if not isinstance(var, str) or not var.isidentifier() or var == "i":
        raise SchemaError(f"{where}: invalid variable name {var!r}")
    return var


def _string(value: Any, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(f"{where}: expected an expression string, got {type(value).__name__}")
    return str(value)


def _parse_entry(text: str, var: str, where: str) -> RatFun:
    try:
        return parse_ratfun(text, var)
    except ExpressionSyntaxError as exc:
        raise ExpressionSyntaxError(f"{where}: {exc.reason}", exc.position, text) from exc


@dataclass(frozen=True)
class MatrixDocument:
    var: str
    entries: tuple[tuple[str, ...], ...]

    @classmethod
    def from_json(cls, payload: dict) -> "MatrixDocument":
        require_keys(payload, ["matrix"], "matrix document")
        var = _variable(payload, "z", "matrix document")
        grid = payload["matrix"]
        if not isinstance(grid, list) or not grid or not all(isinstance(row, list) for row in grid):
            raise SchemaError("matrix document: 'matrix' must be a non-empty list of rows")
        width = len(grid[0])
        if width == 0:
            raise SchemaError("matrix document: rows must not be empty")
        for index, row in enumerate(grid):
            if len(row) != width:
                raise SchemaError(f"matrix document: row {index + 1} has {len(row)} entries, expected {width}")
        entries = tuple(
            tuple(_string(cell, f"entry ({i + 1}, {j + 1})") for j, cell in enumerate(row))
            for i, row in enumerate(grid)
        )
        return cls(var, entries)

    @classmethod
    def from_ratmat(cls, matrix: RatMat, var: str = "z") -> "MatrixDocument":
        return cls(var, tuple(tuple(row) for row in matrix.format(var)))

    def to_ratmat(self) -> RatMat:
        return RatMat(
            [
                [_parse_entry(text, self.var, f"entry ({i + 1}, {j + 1})") for j, text in enumerate(row)]
                for i, row in enumerate(self.entries)
            ]
        )

    def to_json(self) -> dict:
        return {"var": self.var, "matrix": [list(row) for row in self.entries]}


@dataclass(frozen=True)
class RecipSystemDocument:
    n: int
    equations: tuple[tuple[dict, ...], ...]

    @classmethod
    def from_json(cls, payload: dict) -> "RecipSystemDocument":
        require_keys(payload, ["n", "equations"], "reciprocal system")
        n = payload["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise SchemaError("reciprocal system: 'n' must be a positive integer")
        equations = payload["equations"]
        if not isinstance(equations, list) or len(equations) != n:
            raise SchemaError(f"reciprocal system: expected {n} equations")
        for index, equation in enumerate(equations):
            if not isinstance(equation, list):
                raise SchemaError(f"reciprocal system: equation {index + 1} must be a list of terms")
            for term in equation:
                require_keys(term, ["m", "k", "a"], f"equation {index + 1} term")
        return cls(n, tuple(tuple(equation) for equation in equations))

    def to_system(self) -> ReciprocalSystem:
        terms = []
        for index, equation in enumerate(self.equations):
            for term in equation:
                m, k = term["m"], term["k"]
                if isinstance(m, bool) or not isinstance(m, int) or isinstance(k, bool) or not isinstance(k, int):
                    raise SchemaError(f"equation {index + 1}: 'm' and 'k' must be integers")
                a = parse_scalar(_string(term["a"], f"equation {index + 1} coefficient"))
                terms.append(RecipTerm(index + 1, m, k, a))
        return ReciprocalSystem(self.n, tuple(terms))

    @classmethod
    def from_system(cls, system: ReciprocalSystem) -> "RecipSystemDocument":
        equations = [[] for _ in range(system.n)]
        for term in system.terms:
            equations[term.equation - 1].append({"m": term.unknown, "k": term.order, "a": str(term.coefficient)})
        return cls(system.n, tuple(tuple(e) for e in equations))

    def to_json(self) -> dict:
        return {"n": self.n, "equations": [list(e) for e in self.equations]}


def _read(path: Path) -> Any:
    payload = load_json(path)
    logger.info("loaded %s", path)
    return payload


def load_matrix(path: Path) -> RatMat:
    return MatrixDocument.from_json(_read(path)).to_ratmat()


def load_matpoly(path: Path) -> MatPoly:
    return MatPoly.from_ratmat(load_matrix(path))


def load_recip_system(path: Path) -> ReciprocalSystem:
    return RecipSystemDocument.from_json(_read(path)).to_system()


def load_vector_function(path: Path) -> tuple[RatFun, ...]:
    payload = _read(path)
    require_keys(payload, ["vector"], "vector function")
    var = _variable(payload, "z", "vector function")
    vector = payload["vector"]
    if not isinstance(vector, list) or not vector:
        raise SchemaError("vector function: 'vector' must be a non-empty list")
    return tuple(_parse_entry(_string(text, f"component {i + 1}"), var, f"component {i + 1}") for i, text in enumerate(vector))


def load_chain(path: Path) -> JordanChain:
    payload = _read(path)
    require_keys(payload, ["alpha", "vectors"], "chain")
    vectors = payload["vectors"]
    if not isinstance(vectors, list) or not vectors or not all(isinstance(v, list) for v in vectors):
        raise SchemaError("chain: 'vectors' must be a non-empty list of vectors")
    alpha = parse_scalar(_string(payload["alpha"], "chain alpha"))
    parsed = tuple(tuple(parse_scalar(_string(x, "chain component")) for x in v) for v in vectors)
    if any(len(v) != len(parsed[0]) for v in parsed):
        raise SchemaError("chain: vectors have different lengths")
    return JordanChain(alpha, parsed, Termination.GIVEN)


def load_candidate(path: Path) -> ExpRationalSolution:
    payload = _read(path)
    require_keys(payload, ["alpha", "p"], "candidate")
    var = _variable(payload, "t", "candidate")
    components = payload["p"]
    if not isinstance(components, list) or not components:
        raise SchemaError("candidate: 'p' must be a non-empty list")
    alpha = parse_scalar(_string(payload["alpha"], "candidate alpha"))
    return ExpRationalSolution(alpha, tuple(parse_poly(_string(text, "candidate component"), var) for text in components))


def dump_json(document: "MatrixDocument | RecipSystemDocument") -> str:
    return json.dumps(document.to_json(), indent=2)
