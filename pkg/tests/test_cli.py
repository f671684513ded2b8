"""Command-line behavior: exit-code contract, output routing, and the
train/identify/eval loop against a generated corpus."""

from __future__ import annotations

import json
import socket

import pytest

from larch.cli import main
from larch.synthetic import make_synthetic_corpus, write_corpus


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in (
        "LARCH_LLM_ENDPOINT",
        "LARCH_LLM_MODEL",
        "LARCH_LLM_API_KEY",
        "LARCH_MAX_PROMPT_TOKENS",
        "LARCH_MAX_GEN_TOKENS",
    ):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture(scope="module")
def repo_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("repos")
    corpus = make_synthetic_corpus(6, seed=0)
    manifest_path = write_corpus(corpus, str(root))
    return root, manifest_path, corpus


class TestGenerate:
    def test_stub_generation_succeeds(self, repo_dir, capsys):
        root, _, corpus = repo_dir
        code = main(["generate", str(root / corpus[0].repo_id), "--name", "demoproj"])
        out = capsys.readouterr().out
        assert code == 0
        assert "# demoproj" in out

    def test_missing_path_is_usage_error(self, tmp_path, capsys):
        code = main(["generate", str(tmp_path / "missing")])
        err = capsys.readouterr().err
        assert code == 1
        assert "error" in err.lower()

    def test_show_prompt_prints_scaffold_only(self, repo_dir, capsys):
        root, _, corpus = repo_dir
        code = main(["generate", str(root / corpus[0].repo_id), "--show-prompt"])
        out = capsys.readouterr().out
        assert code == 0
        assert "Here is the entrypoint of a Python project" in out
        assert "Write a detailed readme in markdown:" in out
        assert "# Project" not in out

    def test_out_writes_file_instead_of_stdout(self, repo_dir, tmp_path, capsys):
        root, _, corpus = repo_dir
        target = tmp_path / "README.generated.md"
        code = main(
            [
                "generate",
                str(root / corpus[0].repo_id),
                "--name",
                "filed",
                "--out",
                str(target),
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert target.read_text().startswith("# filed")
        assert "# filed" not in captured.out
        assert "wrote" in captured.err


class TestIdentify:
    def test_json_candidates_sorted_by_score(self, repo_dir, capsys):
        root, _, corpus = repo_dir
        code = main(["identify", str(root / corpus[0].repo_id)])
        out = capsys.readouterr().out
        assert code == 0
        payload = json.loads(out)
        scores = [c["score"] for c in payload["candidates"]]
        assert scores == sorted(scores, reverse=True)
        assert payload["candidates"][0]["path"].endswith(".py")

    def test_top_limits_rows(self, repo_dir, capsys):
        root, _, corpus = repo_dir
        code = main(["identify", str(root / corpus[0].repo_id), "--top", "2"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert len(payload["candidates"]) == 2


class TestTrainEvalLoop:
    def test_train_then_identify_with_trained_model(self, repo_dir, tmp_path, capsys):
        _, manifest_path, corpus = repo_dir
        model_file = tmp_path / "model.json"
        code = main(["train", "--corpus", manifest_path, "--out", str(model_file)])
        out = capsys.readouterr().out
        assert code == 0
        assert model_file.exists()
        assert "trained on" in out

        root = repo_dir[0]
        hits = 0
        for repo in corpus:
            code = main(
                [
                    "identify",
                    str(root / repo.repo_id),
                    "--model-file",
                    str(model_file),
                    "--top",
                    "1",
                ]
            )
            assert code == 0
            payload = json.loads(capsys.readouterr().out)
            hits += int(payload["candidates"][0]["path"] == repo.planted_path)
        assert hits >= len(corpus) - 1

    def test_train_on_pairless_corpus_is_pipeline_error(self, tmp_path, capsys):
        # Repos whose only candidate is a single file yield no ranking pairs.
        for i in range(2):
            repo = tmp_path / f"solo{i}"
            repo.mkdir()
            (repo / "only.py").write_text("def main():\n    pass\n")
            (repo / "README.md").write_text("# solo\n")
        manifest = tmp_path / "manifest.json"
        manifest.write_text(
            json.dumps(
                {"repos": [{"id": f"solo{i}", "path": f"solo{i}"} for i in range(2)]}
            )
        )
        code = main(
            ["train", "--corpus", str(manifest), "--out", str(tmp_path / "m.json")]
        )
        err = capsys.readouterr().err
        assert code == 2
        assert "pair" in err.lower()

    def test_eval_writes_report_and_prints_table(self, repo_dir, tmp_path, capsys):
        _, manifest_path, _ = repo_dir
        out_dir = tmp_path / "evalout"
        code = main(
            [
                "eval",
                "--corpus",
                manifest_path,
                "--selector",
                "both",
                "--out-dir",
                str(out_dir),
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert "Mean f1 x100" in captured.out
        for name in ("report.json", "report.csv", "report.txt", "rouge_means.png"):
            assert (out_dir / name).exists()


class TestExitCodes:
    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_required_option_is_usage_error(self, capsys):
        assert main(["train"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "Usage" in capsys.readouterr().out

    def test_serve_refuses_occupied_port(self, capsys):
        blocker = socket.socket()
        try:
            blocker.bind(("127.0.0.1", 0))
            blocker.listen(1)
            port = blocker.getsockname()[1]
            code = main(["serve", "--port", str(port)])
            err = capsys.readouterr().err
            assert code == 1
            assert "cannot bind" in err
        finally:
            blocker.close()
