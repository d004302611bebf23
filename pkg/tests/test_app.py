import hashlib
import json

import pytest

from jordankit import __version__
from jordankit.app import COMMANDS, create_parser, main, run
from jordankit.errors import InputError
from jordankit.report import SCHEMA


def structured(capsys, *argv):
    assert main([*argv, "--format", "structured"]) == 0
    return json.loads(capsys.readouterr().out)


def collect_floats(value):
    if isinstance(value, float):
        yield value
    elif isinstance(value, dict):
        for item in value.values():
            yield from collect_floats(item)
    elif isinstance(value, list):
        for item in value:
            yield from collect_floats(item)


def write_matrix(tmp_path, grid):
    path = tmp_path / "matrix.json"
    path.write_text(json.dumps({"var": "z", "matrix": grid}), encoding="utf-8")
    return str(path)


def test_every_command_is_registered():
    assert set(COMMANDS) == {"analyze", "chain", "rootfn", "verify", "ode-recip", "ode-linear"}


def test_analyze_human_report(capsys, data_file):
    assert main(["analyze", "-i", str(data_file("worked_3x3.json"))]) == 0
    out = capsys.readouterr().out
    assert out.startswith(f"jordankit {__version__}: analyze\n")
    assert "zeros:\n  2  order 2\n  -3  order 1\n" in out
    assert "poles:\n  3  order 3\n" in out
    assert "entry pole order 1" in out


def test_analyze_structured_report(capsys, data_file):
    path = data_file("worked_3x3.json")
    data = structured(capsys, "analyze", "-i", str(path))
    assert data["schema"] == SCHEMA
    assert data["command"] == "analyze"
    assert data["version"] == __version__
    assert data["provenance"] == ["exact"]
    assert data["input_digest"] == hashlib.sha256(path.read_bytes()).hexdigest()
    points = data["results"]["points"]
    assert [p["point"] for p in points] == ["2", "3", "-3"]
    assert [p["classification"] for p in points] == ["zero", "pole", "zero"]
    assert points[1]["chi_pole_order"] == 3
    assert points[1]["entry_pole_order"] == 1
    assert list(collect_floats(data["results"])) == []


def test_analyze_with_chains(capsys, data_file):
    data = structured(capsys, "analyze", "-i", str(data_file("worked_3x3.json")), "--chains")
    at_two = data["results"]["points"][0]
    assert at_two["chain"]["vectors"] == [["1", "0", "0"], ["0", "1", "0"]]
    assert at_two["chain"]["termination"] == "inconsistent"
    assert "chain" not in data["results"]["points"][1]


def test_analyze_mixed_point(capsys, data_file):
    assert main(["analyze", "-i", str(data_file("mixed_point.json"))]) == 0
    out = capsys.readouterr().out
    assert "mixed zero/pole candidates:\n  0  pole order 1, det N order 3" in out
    assert "no poles found" in out


def test_analyze_numeric_points(capsys, tmp_path):
    data = structured(capsys, "analyze", "-i", write_matrix(tmp_path, [["z^2-2"]]), "--chains")
    assert data["provenance"] == ["exact", "numeric"]
    points = data["results"]["points"]
    assert len(points) == 2
    for point in points:
        assert point["provenance"] == "numeric"
        assert abs(point["point"]["re"]) == pytest.approx(2**0.5)
        assert point["chain"]["provenance"] == "numeric"
    assert main(["analyze", "-i", write_matrix(tmp_path, [["z^2-2"]])]) == 0
    assert "[numeric]" in capsys.readouterr().out


def test_chain_command(capsys, data_file):
    data = structured(
        capsys, "chain", "-i", str(data_file("worked_3x3.json")), "--alpha", "2", "--exhaustive", "--phi0", "1,0,0"
    )
    results = data["results"]
    assert results["alpha"] == "2"
    assert results["greedy"]["vectors"] == [["1", "0", "0"], ["0", "1", "0"]]
    assert results["max_partial_multiplicity"] == 2
    assert len(results["maximal"]["vectors"]) == 2
    assert results["canonical"]["vectors"] == [["1", "0", "0"], ["0", "1", "0"]]


def test_chain_human_report(capsys, data_file):
    assert main(["chain", "-i", str(data_file("worked_3x3.json")), "--alpha", "2"]) == 0
    out = capsys.readouterr().out
    assert "greedy chain (length 2, inconsistent)" in out
    assert "  phi_0 = (1, 0, 0)\n  phi_1 = (0, 1, 0)\n" in out


def test_chain_at_pole_is_refused(capsys, data_file):
    assert main(["chain", "-i", str(data_file("worked_3x3.json")), "--alpha", "3"]) == 3
    assert capsys.readouterr().err.startswith("error[ENTRY_POLE]")


def test_chain_at_mixed_point_is_refused(capsys, data_file):
    assert main(["chain", "-i", str(data_file("mixed_point.json")), "--alpha", "0"]) == 3
    assert capsys.readouterr().err.startswith("error[MIXED_POINT]")


def test_chain_requires_alpha(capsys, data_file):
    assert main(["chain", "-i", str(data_file("worked_3x3.json"))]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error[MISSING_FLAG]")
    assert "--alpha" in err


def test_rootfn_command(capsys, data_file):
    data = structured(capsys, "rootfn", "-i", str(data_file("worked_3x3.json")), "--alpha", "2")
    results = data["results"]
    assert results["root_function"] == ["1", "-2 + z", "0"]
    assert results["ok"] is True
    assert results["exact_order"] == 2


def test_verify_at_holomorphic_point(capsys, data_file):
    argv = ["verify", "-i", str(data_file("worked_3x3.json")), "--alpha", "2"]
    argv += ["--rootfn", str(data_file("rootfn_worked.json")), "--order", "2"]
    assert main(argv) == 0
    assert "vanishes to order 2 at 2 (need 2): ok" in capsys.readouterr().out


@pytest.mark.parametrize("name", ["rootfn_mixed_1.json", "rootfn_mixed_2.json", "rootfn_mixed_3.json"])
def test_verify_at_mixed_point(capsys, data_file, name):
    data = structured(
        capsys,
        "verify",
        "-i",
        str(data_file("mixed_point.json")),
        "--alpha",
        "0",
        "--rootfn",
        str(data_file(name)),
        "--order",
        "1",
    )
    results = data["results"]
    assert results["classification"] == "mixed-candidate"
    assert results["ok"] is True
    assert results["exact_order"] == 1


def test_ode_recip_eigen_solution(capsys, data_file):
    data = structured(capsys, "ode-recip", "-i", str(data_file("recip_418.json")))
    results = data["results"]
    assert results["chi"] == "(4 - z)/z^4"
    (solution,) = results["eigen_solutions"]
    assert solution["alpha"] == "4"
    assert solution["u"] == ["-3", "1"]
    assert solution["solves"] is True
    assert solution["numeric_residual"] < 1e-6
    assert results["jordan_candidates"] == []
    assert data["provenance"] == ["exact", "numeric"]


def test_ode_recip_jordan_candidates(capsys, data_file):
    argv = ["ode-recip", "-i", str(data_file("recip_428.json")), "--candidate", str(data_file("candidate_428.json"))]
    data = structured(capsys, *argv)
    results = data["results"]
    assert [s["u"] for s in results["eigen_solutions"]] == [["1/2", "1"], ["-1", "1"]]
    (greedy,) = results["jordan_candidates"]
    assert greedy["p"] == ["-2 + 2*t", "t"]
    candidate = results["candidate"]
    assert candidate["p"] == ["2 + 2*t", "2 + t"]
    assert candidate["solves"] is False
    assert candidate["numeric_residual"] > 0.1


def test_ode_recip_skips_singular_samples(capsys, data_file):
    argv = ["ode-recip", "-i", str(data_file("recip_428.json")), "--samples", "1"]
    data = structured(capsys, *argv)
    (greedy,) = data["results"]["jordan_candidates"]
    assert greedy["numeric_residual"] is None


def test_ode_linear_from_chain(capsys, data_file):
    argv = ["ode-linear", "-i", str(data_file("jordan_block.json")), "--chain", str(data_file("chain_jordan_block.json"))]
    assert main(argv) == 0
    assert "u(t) = (t, 1) e^(2 t)" in capsys.readouterr().out
    data = structured(capsys, *argv)
    results = data["results"]
    assert results["P"] == ["t", "1"]
    assert results["solves"] is True
    assert results["chain_relations_hold"] is True


def test_ode_linear_from_alpha(capsys, data_file):
    data = structured(capsys, "ode-linear", "-i", str(data_file("jordan_block.json")), "--alpha", "2")
    assert data["results"]["chain"]["vectors"] == [["1", "0"], ["0", "1"]]
    assert data["results"]["solves"] is True


def test_ode_linear_needs_alpha_or_chain(capsys, data_file):
    assert main(["ode-linear", "-i", str(data_file("jordan_block.json"))]) == 2
    assert capsys.readouterr().err.startswith("error[MISSING_FLAG]")


def test_parse_error_exit_status(capsys, tmp_path):
    assert main(["analyze", "-i", write_matrix(tmp_path, [["2z"]])]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error[PARSE_ERROR]")
    assert "entry (1, 1)" in err


def test_missing_input_file(capsys, tmp_path):
    assert main(["analyze", "-i", str(tmp_path / "absent.json")]) == 2
    assert capsys.readouterr().err.startswith("error[FILE_ERROR]")


def test_output_file(capsys, data_file, tmp_path):
    target = tmp_path / "report.json"
    argv = ["analyze", "-i", str(data_file("worked_3x3.json")), "--format", "structured", "--output", str(target)]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["command"] == "analyze"


def test_invalid_numeric_setting(capsys, data_file):
    assert main(["analyze", "-i", str(data_file("worked_3x3.json")), "--tol", "0"]) == 2


def test_no_command_prints_help(capsys):
    assert main([]) == 2


def test_unknown_command_is_rejected(data_file):
    flags = create_parser().parse_args(["analyze", "-i", str(data_file("worked_3x3.json"))])
    with pytest.raises(InputError):
        run("factor", flags)
    with pytest.raises(SystemExit):
        main(["factor"])


def test_max_len_must_be_positive(capsys, data_file):
    assert main(["chain", "-i", str(data_file("worked_3x3.json")), "--alpha", "2", "--max-len", "0"]) == 2
    assert capsys.readouterr().err.startswith("error[INPUT_ERROR]")


def test_structured_error_report(capsys, data_file):
    argv = ["chain", "-i", str(data_file("worked_3x3.json")), "--alpha", "3", "--format", "structured"]
    assert main(argv) == 3
    captured = capsys.readouterr()
    assert captured.err.startswith("error[ENTRY_POLE]")
    data = json.loads(captured.out)
    assert data["schema"] == SCHEMA
    assert data["error"]["code"] == "ENTRY_POLE"
    assert data["results"] == {}
    assert data["flags"]["alpha"] == "3"


def test_report_echoes_flags(capsys, data_file):
    data = structured(capsys, "chain", "-i", str(data_file("worked_3x3.json")), "--alpha", "2", "--exhaustive")
    assert data["error"] is None
    assert data["flags"]["alpha"] == "2"
    assert data["flags"]["exhaustive"] == "true"
    assert data["flags"]["input"].endswith("worked_3x3.json")
    assert "format" not in data["flags"]
    assert "phi0" not in data["flags"]
