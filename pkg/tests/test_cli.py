"""Command-line interface: each subcommand plus exit codes."""

import json

import pytest

from mutascan import __version__
from mutascan.cli import main
from mutascan.neural import load_net

from conftest import FAST_TRAIN


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert f"mutascan {__version__}" in capsys.readouterr().out


def test_no_command_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_stats_command(tmp_path, capsys):
    fasta = tmp_path / "x.fasta"
    fasta.write_text(">g1\n" + "G" * 19 + "A" * 31 + "\n>all_n\nNNN\n", encoding="utf-8")
    assert main(["stats", str(fasta)]) == 0
    out = capsys.readouterr().out
    assert ">g1 length 50" in out
    assert "GC% 38.0000" in out
    assert "gate: accepted" in out
    assert "all bases ambiguous" in out


def test_stats_custom_gate(tmp_path, capsys):
    fasta = tmp_path / "x.fasta"
    fasta.write_text(">g\n" + "G" * 47 + "A" * 53 + "\n", encoding="utf-8")
    assert main(["stats", str(fasta)]) == 0
    assert "rejected" in capsys.readouterr().out
    assert main(["stats", str(fasta), "--target", "47", "--tolerance", "1"]) == 0
    out = capsys.readouterr().out
    assert "gate: accepted" in out
    assert "[gene band 45-50%]" in out


def test_stats_missing_file_exits_1(tmp_path, capsys):
    assert main(["stats", str(tmp_path / "nope.fasta")]) == 1
    assert "error:" in capsys.readouterr().err


def test_search_command(corpus, capsys):
    rc = main(
        ["search", "--db", str(corpus["db_ncbi"]), "--query", str(corpus["patient_clean"])]
    )
    assert rc == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("Description | Max score")
    assert lines[1].startswith("BRCA1_ref | 1200 | ")
    assert "100%" in lines[1]


def test_search_json_output(corpus, capsys):
    rc = main(
        [
            "search", "--db", str(corpus["db_ncbi"]),
            "--query", str(corpus["patient_mutated"]), "--json",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    json_lines = [l for l in out.splitlines() if l.startswith("{")]
    assert json_lines
    top = json.loads(json_lines[0])
    assert top["subject_id"] == "BRCA1_ref"
    assert top["max_score"] > 1000


def test_align_command(tmp_path, capsys):
    ref = tmp_path / "ref.fasta"
    alt = tmp_path / "alt.fasta"
    ref.write_text(">r\nACGT\n", encoding="utf-8")
    alt.write_text(">a\nAGGT\n", encoding="utf-8")
    assert main(["align", "--ref", str(ref), "--alt", str(alt)]) == 0
    out = capsys.readouterr().out
    assert "score 5" in out
    assert "2 C>G" in out
    assert main(["align", "--ref", str(ref), "--alt", str(alt), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out.splitlines()[0])
    assert doc == {"position": 2, "kind": "substitution", "ref": "C", "alt": "G"}


def test_train_and_predict_commands(corpus, tmp_path, capsys):
    model = tmp_path / "model.json"
    rc = main(
        [
            "train", "--data", str(corpus["training_data"]), "--out", str(model),
            "--target-mse", str(FAST_TRAIN.target_mse),
            "--max-epochs", str(FAST_TRAIN.max_epochs),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "converged: epochs" in out
    assert load_net(model).topology.layer_sizes == (10, 4, 1)

    rc = main(["predict", "--model", str(model), "--features", str(corpus["training_data"])])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 18
    mal = [l for l in lines if l.startswith("mal-")]
    ben = [l for l in lines if l.startswith("ben-")]
    assert len(mal) == 9 and len(ben) == 9
    assert all(l.endswith("highly risk of breast cancer") for l in mal)
    assert all(l.endswith("Normal") for l in ben)


def test_predict_accepts_bare_arrays(tmp_path, capsys, trained_model):
    feats = tmp_path / "feats.jsonl"
    feats.write_text(json.dumps([0.5] * 10) + "\n", encoding="utf-8")
    assert main(["predict", "--model", str(trained_model), "--features", str(feats)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("line-1\t")


def test_diagnose_command_text_and_json(corpus, trained_model, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("MUTASCAN_WORKDIR", str(tmp_path / "wd"))
    rc = main(
        [
            "diagnose", "--patient", str(corpus["patient_mutated"]),
            "--manifest", str(corpus["manifest"]), "--model", str(trained_model),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "Diagnosis: highly risk of breast cancer" in out
    assert (tmp_path / "wd" / "report.json").exists()

    rc = main(
        [
            "diagnose", "--patient", str(corpus["patient_clean"]),
            "--manifest", str(corpus["manifest"]), "--model", str(trained_model),
            "--json",
        ]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["display"] == "Normal"
    assert doc["overall_label"] == "Normal"


def test_diagnose_missing_manifest_exits_1(corpus, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("MUTASCAN_WORKDIR", str(tmp_path / "wd"))
    rc = main(
        [
            "diagnose", "--patient", str(corpus["patient_clean"]),
            "--manifest", str(tmp_path / "missing.json"),
        ]
    )
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_gen_corpus_command(tmp_path, capsys):
    out_dir = tmp_path / "corpus"
    assert main(["gen-corpus", "--seed", "42", "--out", str(out_dir)]) == 0
    out = capsys.readouterr().out
    assert "manifest:" in out
    for name in (
        "manifest.json", "manifest_fallback.json", "db_ncbi.fasta", "db_ebi.fasta",
        "db_ensembl.fasta", "patient_clean.fasta", "patient_mutated.fasta",
        "training.jsonl",
    ):
        assert (out_dir / name).exists()
