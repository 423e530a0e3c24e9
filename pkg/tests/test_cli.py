"""Command-line behavior: subcommands, exit codes, report reproducibility."""

import json
import math

import pytest

from superselect.charges import save_registry
from superselect.cli import main
from superselect.scenarios import (
    build_scenario,
    electron_positron_registry,
    neutral_kaon_registry,
)
from superselect.states import inner_product, load_state, save_state


@pytest.fixture(autouse=True)
def plain_output(monkeypatch):
    monkeypatch.setenv("SUPERSELECT_NO_COLOR", "1")


@pytest.fixture
def workdir(tmp_path):
    save_registry(electron_positron_registry(1), str(tmp_path / "ep.json"))
    save_registry(neutral_kaon_registry(), str(tmp_path / "kaon.json"))
    for name in ("bell_plus", "forbidden_pm2e"):
        _, state, _ = build_scenario(name)
        save_state(state, str(tmp_path / f"{name}.json"))
    _, meson, _ = build_scenario("meson_superposition")
    save_state(meson, str(tmp_path / "meson.json"))
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_demo_bell_plus(capsys):
    code, out, _ = run(capsys, "demo", "bell_plus")
    assert code == 0
    assert "entropy_first_cut" in out and "0.693147" in out
    assert "verified: True" in out


def test_demo_json_report_structure(capsys):
    code, out, _ = run(capsys, "--json", "demo", "bell_minus")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["verified"] is True
    assert report["command"][:2] == ["superselect", "--json"]
    assert report["seed"] == 0
    assert "timestamp" in report


def test_validate_accepts_single_sector(capsys, workdir):
    code, out, _ = run(
        capsys, "validate",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "bell_plus.json"),
    )
    assert code == 0
    assert "single-sector" in out and "(0)" in out


def test_validate_rejects_cross_sector_with_exit_2(capsys, workdir):
    code, out, _ = run(
        capsys, "--json", "validate",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "forbidden_pm2e.json"),
    )
    assert code == 2
    sectors = json.loads(out)["results"]["sectors"]
    assert set(sectors) == {"(-2)", "(2)"}
    assert sectors["(-2)"] == pytest.approx(0.5, abs=1e-12)
    assert sectors["(2)"] == pytest.approx(0.5, abs=1e-12)


def test_validate_accepts_meson_flavor_superposition(capsys, workdir):
    code, out, _ = run(
        capsys, "validate",
        "--registry", str(workdir / "kaon.json"),
        "--state", str(workdir / "meson.json"),
    )
    assert code == 0 and "(0)" in out


def test_basis_writes_bell_pair_files(capsys, workdir):
    outdir = workdir / "basis"
    code, out, _ = run(
        capsys, "basis",
        "--registry", str(workdir / "ep.json"),
        "--registers", "2", "--charge", "0",
        "--out", str(outdir),
    )
    assert code == 0
    reg = electron_positron_registry(1)
    vectors = [
        load_state(str(outdir / f"basis_{k:03d}.json"), registry=reg) for k in range(2)
    ]
    _, plus, _ = build_scenario("bell_plus")
    _, minus, _ = build_scenario("bell_minus")
    for vec in vectors:
        best = max(abs(inner_product(vec, plus)), abs(inner_product(vec, minus)))
        assert best == pytest.approx(1.0, abs=1e-9)
    assert (outdir / "diagnostics.json").exists()


def test_entangle_reports_cuts(capsys, workdir):
    code, out, _ = run(
        capsys, "entangle",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "bell_plus.json"),
        "--cut", "0",
    )
    assert code == 0
    assert "{0}|{1}" in out and "rank: 2" in out


def test_entangle_exits_2_on_cross_sector_state(capsys, workdir):
    code, _, err = run(
        capsys, "entangle",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "forbidden_pm2e.json"),
    )
    assert code == 2
    assert "superselection" in err


def test_measure_distribution_and_sampling(capsys, workdir):
    args = (
        "measure",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "bell_plus.json"),
        "--register", "0",
    )
    code, out, _ = run(capsys, *args)
    assert code == 0 and "distribution" in out
    code, out, _ = run(capsys, "--seed", "7", *args, "--sample")
    assert code == 0 and "sample" in out


def test_conjugate_and_gauge_round_trip(capsys, workdir):
    conj_path = workdir / "conj.json"
    code, _, _ = run(
        capsys, "conjugate",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "bell_plus.json"),
        "--out", str(conj_path),
    )
    assert code == 0
    reg = electron_positron_registry(1)
    _, bell, _ = build_scenario("bell_plus")
    assert load_state(str(conj_path), registry=reg) == bell  # C|psi+> = |psi+>

    gauged_path = workdir / "gauged.json"
    code, _, _ = run(
        capsys, "gauge",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "bell_plus.json"),
        "--component", "electric", "--theta", str(math.pi / 3),
        "--out", str(gauged_path),
    )
    assert code == 0
    assert load_state(str(gauged_path)) == bell  # neutral sector: exact identity


def test_gauge_rejects_global_component(capsys, workdir):
    code, _, err = run(
        capsys, "gauge",
        "--registry", str(workdir / "kaon.json"),
        "--state", str(workdir / "meson.json"),
        "--component", "flavor", "--theta", "0.5",
    )
    assert code == 1 and "global" in err


def test_missing_file_exits_1(capsys, workdir):
    code, _, err = run(
        capsys, "validate",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "nope.json"),
    )
    assert code == 1 and "nope.json" in err


def test_schema_violation_names_the_field(capsys, workdir):
    bad = workdir / "bad_state.json"
    bad.write_text(json.dumps({"n": 2, "terms": [
        {"labels": [{"species": "e-", "spin": 0.5}, {"species": "e+", "spin": 0}],
         "re": 1.0, "im": 0.0}
    ]}))
    code, _, err = run(
        capsys, "validate",
        "--registry", str(workdir / "ep.json"), "--state", str(bad),
    )
    assert code == 1 and "spin" in err


def test_unknown_subcommand_exits_1():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 1


def test_state_round_trip_is_bit_exact(workdir):
    reg = electron_positron_registry(1)
    original = load_state(str(workdir / "bell_plus.json"), registry=reg)
    again = workdir / "copy.json"
    save_state(original, str(again))
    assert load_state(str(again), registry=reg) == original
    # byte-identical files for identical states
    assert (workdir / "bell_plus.json").read_bytes() == again.read_bytes()


def _strip_timestamp(text: str) -> str:
    return "\n".join(
        line for line in text.splitlines() if not line.lstrip().startswith(('"timestamp"', "timestamp:"))
    )


def test_reports_reproducible_modulo_timestamp(capsys, workdir):
    args = (
        "--json", "validate",
        "--registry", str(workdir / "ep.json"),
        "--state", str(workdir / "bell_plus.json"),
    )
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert _strip_timestamp(first) == _strip_timestamp(second)


def test_basis_reports_reproducible_across_runs(capsys, workdir):
    out1, out2 = workdir / "b1", workdir / "b2"
    argv = lambda out: (
        "--json", "--seed", "9", "basis",
        "--registry", str(workdir / "ep.json"),
        "--registers", "3", "--charge", "-1",
        "--out", str(out),
    )
    _, first, _ = run(capsys, *argv(out1))
    _, second, _ = run(capsys, *argv(out2))
    norm = lambda text, out: _strip_timestamp(text).replace(str(out), "OUT")
    assert norm(first, out1) == norm(second, out2)
    for k in range(3):
        assert (out1 / f"basis_{k:03d}.json").read_bytes() == (out2 / f"basis_{k:03d}.json").read_bytes()


def test_color_toggle(capsys, monkeypatch):
    monkeypatch.delenv("SUPERSELECT_NO_COLOR", raising=False)
    _, colored, _ = run(capsys, "demo", "bell_plus")
    assert "\x1b[32m" in colored
    monkeypatch.setenv("SUPERSELECT_NO_COLOR", "1")
    _, plain, _ = run(capsys, "demo", "bell_plus")
    assert "\x1b[" not in plain
