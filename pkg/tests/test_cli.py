"""Command-line behavior: exit codes, outputs, byte stability."""

import json

import pytest

from blochcert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_certify_pass(preset_dir, capsys):
    code, out, _ = run(capsys, "certify", str(preset_dir / "triangular_q23.toml"))
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "CERTIFIED_IRREDUCIBLE"


def test_certify_assumption_failure(preset_dir, capsys):
    code, out, _ = run(capsys, "certify", str(preset_dir / "ehm_q22.toml"))
    assert code == 2
    doc = json.loads(out)
    assert doc["verdict"] == "ASSUMPTION_A2_FAILS"
    assert doc["a2"]["witness"] == {"n": [0, 0], "n_prime": [1, 1]}


def test_certify_missing_file(capsys):
    code, out, err = run(capsys, "certify", "missing.toml")
    assert code == 1
    assert not out and "missing.toml" in err


def test_model_flag_alias(preset_dir, capsys):
    code, out, _ = run(capsys, "certify", "--model", str(preset_dir / "square2_q11.toml"))
    assert code == 0


def test_no_model_is_input_error(capsys):
    code, _, err = run(capsys, "certify")
    assert code == 1 and "model" in err


def test_dump_free_chain(preset_dir, capsys):
    code, out, _ = run(capsys, "dump", str(preset_dir / "free1d_q2.toml"))
    assert code == 0
    assert "# lifted characteristic polynomial\nlam^2\n- w^1\n- 2\n- w^-1" in out
    assert "# symbol\n- z^1\n- z^-1" in out
    assert "# lowest-degree component\n- z^-1" in out


def test_dump_square_lowest_section(preset_dir, capsys):
    code, out, _ = run(
        capsys, "dump", str(preset_dir / "square2_q22_zeroV.toml"),
        "--sections", "lowest",
    )
    assert code == 0
    assert out == "# lowest-degree component\n- z1^-1\n- z2^-1\n"


def test_dump_single_site_char_equals_lift(preset_dir, capsys):
    code, out, _ = run(
        capsys, "dump", str(preset_dir / "square2_q11.toml"),
        "--sections", "char,lifted",
    )
    assert code == 0
    char_part, lifted_part = out.split("# lifted characteristic polynomial")
    char_body = char_part.split("# characteristic polynomial")[1].strip()
    lifted_body = lifted_part.strip()
    assert char_body.replace("z1", "w1").replace("z2", "w2") == lifted_body


def test_dump_budget_warning(preset_dir, capsys):
    code, out, err = run(
        capsys, "dump", str(preset_dir / "square2_q22_zeroV.toml"), "--budget", "2"
    )
    assert code == 0
    assert "# symbol" in out and "# characteristic polynomial" not in out
    assert "warning" in err and "budget" in err


def test_dump_unknown_section(preset_dir, capsys):
    code, _, err = run(
        capsys, "dump", str(preset_dir / "square2_q11.toml"), "--sections", "spectrum"
    )
    assert code == 1 and "unknown dump sections" in err


def test_monodromy_cli(preset_dir, capsys):
    code, out, _ = run(
        capsys, "monodromy", str(preset_dir / "free1d_q2.toml"), "--seed", "7"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "TRANSITIVE"
    assert doc["seed"] == 7


def test_monodromy_exit_code_ignores_verdict(preset_dir, capsys):
    code, out, _ = run(
        capsys, "monodromy", str(preset_dir / "decoupled1d_q2.toml"), "--seed", "3"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "INTRANSITIVE_STABLE"
    assert doc["orbits"] == [[1], [2]]


def test_bands_cli(preset_dir, capsys):
    code, out, _ = run(
        capsys, "bands", str(preset_dir / "square2_q11.toml"),
        "--path", "0,0:0.5,0.5", "--samples", "3",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "t,k1,k2,re_lam_1,im_lam_1"
    assert len(lines) == 4


def test_bands_bad_path(preset_dir, capsys):
    code, _, err = run(
        capsys, "bands", str(preset_dir / "square2_q11.toml"),
        "--path", "0:0.5", "--samples", "3",
    )
    assert code == 1 and "k-path" in err


def test_fermi_empty(preset_dir, capsys):
    code, out, _ = run(
        capsys, "fermi", str(preset_dir / "square2_q11.toml"),
        "--lambda", "100", "--grid", "16",
    )
    assert code == 0
    assert out == "k1,k2,residual\n"


def test_fermi_complex_level(preset_dir, capsys):
    code, out, _ = run(
        capsys, "fermi", str(preset_dir / "square2_q11.toml"),
        "--lambda", "1+0.5j", "--grid", "8",
    )
    assert code == 0
    assert out.startswith("k1,k2,residual")


def test_out_flag_and_byte_stability(preset_dir, tmp_path, capsys):
    target_a = tmp_path / "a.json"
    target_b = tmp_path / "b.json"
    for target in (target_a, target_b):
        code, out, _ = run(
            capsys, "monodromy", str(preset_dir / "free1d_q2.toml"),
            "--seed", "5", "--out", str(target),
        )
        assert code == 0 and out == ""
    assert target_a.read_bytes() == target_b.read_bytes()


def test_unknown_flag_fails_fast(preset_dir):
    with pytest.raises(SystemExit) as exc:
        main(["certify", str(preset_dir / "square2_q11.toml"), "--frobnicate"])
    assert exc.value.code != 0


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in ("certify", "dump", "monodromy", "bands", "fermi"):
        assert name in out


def test_subcommand_help_lists_defaults(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fermi", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "--lambda" in out and "--grid" in out and "default 32" in out
