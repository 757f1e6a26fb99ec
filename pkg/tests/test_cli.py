"""Command-line interface: subcommands, exit codes, output files, determinism."""

import json

import pytest

from qffnn.cli import main
from qffnn.circuit_text import parse_circuit
from qffnn.experiments import CSV_HEADER, TARGET_LABELS
from qffnn.simulator import run_circuit_exact


def test_target_labels_are_the_four_lines():
    assert TARGET_LABELS == frozenset({3, 5, 10, 12})


def test_render_horizontal_line(capsys):
    assert main(["render", "12"]) == 0
    assert capsys.readouterr().out == "##\n..\n"


def test_render_blank_and_vertical(capsys):
    # all entries of label 15 are -1 (white), so the image is empty;
    # label 0 is the all-black image
    main(["render", "15"])
    assert capsys.readouterr().out == "..\n..\n"
    main(["render", "0"])
    assert capsys.readouterr().out == "##\n##\n"
    main(["render", "5"])
    assert capsys.readouterr().out == ".#\n.#\n"


def test_render_rejects_out_of_range_label():
    with pytest.raises(ValueError):
        main(["render", "16"])


def test_neuron_matched_input(capsys):
    assert main(["neuron", "--input", "12", "--weight", "12"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert abs(report["p"] - 1.0) < 1e-12


def test_neuron_sweep_values(capsys):
    main(["neuron", "--weight", "12", "--sweep"])
    lines = capsys.readouterr().out.strip().splitlines()
    values = {}
    for line in lines:
        parts = line.split()
        values[int(parts[0])] = float(parts[-1].split("=")[1])
    assert values[12] == 1.0 and values[3] == 1.0
    quarter = [n for n, p in values.items() if p == 0.25]
    assert sorted(quarter) == [1, 2, 4, 7, 8, 11, 13, 14]
    assert sorted(n for n, p in values.items() if p == 0.0) == [0, 5, 6, 9, 10, 15]


def test_neuron_conditional_sweep(capsys):
    main(["neuron", "--weight", "2", "--conditional"])
    out = capsys.readouterr().out
    assert "[00]  p=0.000000" in out
    assert "[01]  p=1.000000" in out
    assert "[10]  p=1.000000" in out
    assert "[11]  p=0.000000" in out


def test_neuron_sampled_reports_counts(capsys):
    assert main(["neuron", "--input", "12", "--weight", "12", "--eval", "sampled", "--shots", "500"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["counts"] == {"1": 500}
    assert report["shots"] == 500


def test_network_exact_writes_results_and_exits_zero(tmp_path, capsys):
    out = tmp_path / "results.json"
    code = main(["network", "--mode", "both", "--eval", "exact", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"config", "rows", "summary"}
    assert len(doc["rows"]) == 16
    for row in doc["rows"]:
        assert set(row) >= {"label", "pattern", "p1", "p2", "p_out", "verdict", "target"}
        assert row["verdict"] == (row["label"] in TARGET_LABELS)
        assert abs(row["p_out"]["hybrid"] - row["p_out"]["coherent"]) < 1e-12
    assert doc["summary"]["accuracy"] == 1.0
    assert abs(doc["summary"]["margin"] - 0.625) < 1e-12


def test_network_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["network", "--eval", "sampled", "--shots", "2048", "--seed", "5"]
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_network_csv_has_fixed_header(tmp_path):
    out = tmp_path / "results.csv"
    main(["network", "--eval", "exact", "--out", str(out), "--format", "csv"])
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 17


def test_network_bad_weights_exit_nonzero(capsys):
    # equal hidden weights cap the output law at 0.5, so no target passes
    assert main(["network", "--eval", "exact", "--weights", "12,12"]) == 1


def test_network_sampled_noise_mitigated_verdicts(tmp_path):
    out = tmp_path / "noisy.json"
    code = main(
        [
            "network",
            "--mode",
            "hybrid",
            "--eval",
            "sampled",
            "--shots",
            "8192",
            "--seed",
            "3",
            "--noise",
            "0.05,0.03",
            "--mitigate",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["noise"] == [0.05, 0.03]
    for row in doc["rows"]:
        assert "counts" in row


def test_dump_circuit_round_trip(tmp_path, capsys):
    main(["dump-circuit", "--mode", "hybrid", "--input", "13"])
    text = capsys.readouterr().out
    assert "Z 6 if c1=1" in text and "Z 6 if c2=1" in text
    parsed = parse_circuit(text)
    dist = run_circuit_exact(parsed)
    p_out = sum(p for key, p in dist.items() if key[-1] == "1")
    assert abs(p_out - 0.375) < 1e-12


def test_dump_circuit_to_file(tmp_path):
    out = tmp_path / "circuit.txt"
    main(["dump-circuit", "--mode", "coherent", "--input", "0", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert sum(1 for line in lines if line.startswith("MCX")) == 2
