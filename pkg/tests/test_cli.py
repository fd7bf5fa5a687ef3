import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ncgrade.cli import main
from ncgrade.manifest import ManifestError, bundled_names, load_manifest

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*args):
    runner = CliRunner()
    return runner.invoke(main, list(args))


def test_bundled_names():
    assert bundled_names() == [
        "cubic_as3",
        "poly_x_deg3",
        "quadric_commutative",
        "quadric_sigma",
        "qvas_counterexample",
    ]


def test_load_rejects_unknown_keys(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('[algebra]\ngenerators=["x"]\nwhatever=1\n')
    with pytest.raises(ManifestError):
        load_manifest(str(bad))


def test_load_rejects_bad_polynomial(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('[algebra]\ngenerators=["x"]\nrelations=["x*q"]\n')
    with pytest.raises(ManifestError):
        load_manifest(str(bad))


def test_load_rejects_inhomogeneous(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('[algebra]\ngenerators=["x"]\nrelations=["x^2 - x"]\n')
    with pytest.raises(ManifestError):
        load_manifest(str(bad))


def test_unknown_manifest_exits_2():
    res = run_cli("hilbert", "no_such_manifest")
    assert res.exit_code == 2


def test_hilbert_report_shape():
    res = run_cli("hilbert", "quadric_commutative")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["results"]["series"] == [(i + 1) ** 2 for i in range(9)]
    assert payload["results"]["closed_form"] == "(1+t)/(1-t)^3"
    assert payload["results"]["bound"] == 8


def test_gb_command_counts():
    res = run_cli("gb", "quadric_commutative")
    payload = json.loads(res.output)
    assert payload["results"]["element_count"] == 7
    assert payload["results"]["normal_word_counts"][:4] == [1, 4, 9, 16]


def test_central_command_passes():
    res = run_cli("central", "quadric_sigma")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["results"]["central"] and payload["results"]["regular"]


def test_mf_verify_pass_and_fail(tmp_path):
    res = run_cli("mf-verify", "quadric_commutative")
    assert res.exit_code == 0
    # wrong pairing: non-split factorization over the twisted ambient fails
    src = (Path(__file__).parent.parent / "src/ncgrade/manifests/quadric_sigma.toml").read_text()
    bad = tmp_path / "sigma_badpair.toml"
    bad.write_text(src.replace("split = true", "split = false"))
    res2 = run_cli("mf-verify", str(bad))
    assert res2.exit_code == 1


def test_koszul_command():
    res = run_cli("koszul", "quadric_commutative")
    payload = json.loads(res.output)
    assert payload["results"]["series"] == [1, 4, 7, 8, 8, 8, 8, 8, 8]
    assert payload["results"]["koszul_identity"] is True


def test_qveronese_counterexample_dims():
    res = run_cli("qveronese", "poly_x_deg3", "-r", "2")
    payload = json.loads(res.output)
    assert payload["results"]["series"] == [2, 1, 1, 2, 1, 1]
    assert payload["results"]["degree0_blocks"] == [[1, 0], [0, 1]]


def test_beilinson_command():
    res = run_cli("beilinson", "cubic_as3", "-l", "4")
    payload = json.loads(res.output)
    assert payload["results"]["dimension"] == 24


def test_twist_command():
    res = run_cli("twist", "quadric_commutative")
    payload = json.loads(res.output)
    assert payload["results"]["series_preserved"] is True
    res2 = run_cli("twist", "cubic_as3")
    assert res2.exit_code == 2  # no [automorphism] section


def test_cofa_command():
    res = run_cli("cofa", "quadric_commutative")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    analysis = payload["results"]["analysis"]
    assert analysis["dimension"] == 8
    assert analysis["semisimple"] is True
    assert analysis["blocks"] == [4, 4]
    assert payload["results"]["quotient_matches_ambient_dual"] is True


def test_hom_ext_commands():
    res = run_cli("hom", "quadric_commutative", "X", "Y", "--window", "0..3")
    payload = json.loads(res.output)
    assert payload["results"]["hom"]["table"] == {"0": 0, "1": 3, "2": 8, "3": 15}
    res2 = run_cli("ext", "quadric_commutative", "X", "Y", "--q", "1", "--window", "-2..2")
    payload2 = json.loads(res2.output)
    assert payload2["results"]["ext"]["table"]["-1"] == 1


def test_mcm_command_negative_control():
    res = run_cli("mcm", "quadric_commutative", "k")
    assert res.exit_code == 1
    payload = json.loads(res.output)
    assert payload["results"]["mcm"] is False


def test_iso_command():
    res = run_cli("iso", "quadric_commutative", "X", "Y")
    payload = json.loads(res.output)
    assert payload["results"]["isomorphic"] is False


def test_mutate_commands():
    res = run_cli("mutate-left", "quadric_commutative", "A(1)", "Y(1)", "--expect", "X")
    payload = json.loads(res.output)
    assert payload["results"]["isomorphic_to_expect"] is True
    res2 = run_cli("mutate-right", "quadric_commutative", "A", "X(-1)", "--expect", "Y")
    payload2 = json.loads(res2.output)
    assert payload2["results"]["isomorphic_to_expect"] is True


def test_exceptional_command():
    res = run_cli("exceptional", "quadric_commutative")
    assert res.exit_code == 0
    res2 = run_cli("exceptional", "quadric_commutative", "X", "A")
    assert res2.exit_code == 1


def test_helix_commands():
    res = run_cli("helix", "quadric_commutative")
    assert res.exit_code == 0
    res2 = run_cli("helix", "quadric_commutative", "--blocked")
    assert res2.exit_code == 0


def test_helix_without_nu_is_usage_error():
    res = run_cli("helix", "quadric_sigma")
    assert res.exit_code == 2


def test_helix_window_override():
    res = run_cli("helix", "quadric_commutative", "--window", "0..4")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["results"]["window"] == [0, 4]


def test_stabilization_window_too_small_is_inconclusive():
    res = run_cli("--truncation", "4", "cofa", "quadric_commutative")
    assert res.exit_code == 3


def test_section_algebra_command():
    res = run_cli("section-algebra", "quadric_commutative")
    payload = json.loads(res.output)
    assert payload["results"]["series"][:3] == [4, 16, 36]
    assert payload["results"]["degree0_blocks"] == [[1, 2], [0, 1]]


def test_table_format_smoke():
    res = run_cli("--format", "table", "hilbert", "cubic_as3")
    assert res.exit_code == 0
    assert "series" in res.output


def test_field_override_runs():
    res = run_cli("--field", "p:101", "hilbert", "quadric_commutative")
    payload = json.loads(res.output)
    assert payload["field"] == "p:101"
    assert payload["results"]["series"] == [(i + 1) ** 2 for i in range(9)]


def test_truncation_override():
    res = run_cli("--truncation", "5", "hilbert", "quadric_commutative")
    payload = json.loads(res.output)
    assert payload["results"]["series"] == [1, 4, 9, 16, 25, 36]


GOLDEN_CASES = [
    ("quadric_commutative__classify-standard", ["classify-standard", "quadric_commutative"], 0),
    ("quadric_sigma__classify-standard", ["classify-standard", "quadric_sigma"], 0),
    ("cubic_as3__hilbert", ["hilbert", "cubic_as3"], 0),
    ("poly_x_deg3__hilbert", ["hilbert", "poly_x_deg3"], 0),
    ("qvas_counterexample__regularity", ["regularity", "qvas_counterexample"], 1),
]


@pytest.mark.parametrize("name,args,code", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden_reports_byte_exact(name, args, code):
    expect = (GOLDEN / (name + ".json")).read_text()
    res = run_cli(*args)
    assert res.exit_code == code
    assert res.output == expect


def test_determinism_repeated_runs():
    a = run_cli("classify-standard", "quadric_commutative").output
    b = run_cli("classify-standard", "quadric_commutative").output
    assert a == b and a
