"""Generated training corpora: determinism, structural guarantees, round-trip
through the on-disk layout, and the planted vote sampler."""

from __future__ import annotations

import json

import numpy as np
import pytest

from larch.evaluation import load_manifest
from larch.repo import scan_repository, strip_held_out
from larch.synthetic import (
    make_synthetic_corpus,
    make_synthetic_repo,
    sample_vote_matrix,
    write_corpus,
)


class TestRepoGeneration:
    def test_deterministic_for_seed_and_id(self):
        a = make_synthetic_repo("demo42", seed=5)
        b = make_synthetic_repo("demo42", seed=5)
        assert a.files == b.files
        assert a.planted_path == b.planted_path

    def test_different_ids_differ(self):
        a = make_synthetic_repo("alpha", seed=5)
        b = make_synthetic_repo("beta", seed=5)
        assert a.files != b.files

    def test_different_seeds_differ(self):
        variants = {
            tuple(sorted(make_synthetic_repo("demo", seed=s).files)) for s in range(6)
        }
        assert len(variants) > 1

    def test_planted_file_is_a_candidate_after_stripping(self):
        for repo in make_synthetic_corpus(30, seed=0):
            stripped = strip_held_out(repo.snapshot)
            candidates = [f.path for f in stripped.python_candidates()]
            assert repo.planted_path in candidates, repo.repo_id

    def test_readme_always_present_and_held_out(self):
        for repo in make_synthetic_corpus(20, seed=1):
            assert repo.snapshot.get("README.md") is not None
            stripped = strip_held_out(repo.snapshot)
            assert stripped.reference_readme
            assert stripped.get("README.md") is None

    def test_repo_name_matches_id(self):
        repo = make_synthetic_repo("named01", seed=2)
        assert repo.snapshot.name == "named01"

    def test_planted_file_looks_like_an_entry_point(self):
        # The planted module always wires up an argument parser and a main().
        hits = 0
        for repo in make_synthetic_corpus(20, seed=3):
            content = repo.files[repo.planted_path]
            assert "def main" in content
            hits += int("ArgumentParser" in content)
        assert hits == 20

    def test_corpus_ids_are_unique_and_prefixed(self):
        corpus = make_synthetic_corpus(12, seed=0, prefix="train")
        ids = [r.repo_id for r in corpus]
        assert len(set(ids)) == 12
        assert all(i.startswith("train") for i in ids)


class TestWriteCorpus:
    def test_round_trip_through_disk(self, tmp_path):
        corpus = make_synthetic_corpus(4, seed=7)
        manifest_path = write_corpus(corpus, str(tmp_path))
        manifest = load_manifest(manifest_path)
        assert [e.repo_id for e in manifest.entries] == [r.repo_id for r in corpus]
        for entry, repo in zip(manifest.entries, corpus):
            rescanned = scan_repository(entry.root)
            assert rescanned.paths == repo.snapshot.paths
            for f in rescanned.files:
                assert f.content == repo.files[f.path]

    def test_manifest_is_valid_json_with_repo_list(self, tmp_path):
        corpus = make_synthetic_corpus(2, seed=0)
        manifest_path = write_corpus(corpus, str(tmp_path))
        with open(manifest_path) as fh:
            data = json.load(fh)
        assert {e["id"] for e in data["repos"]} == {r.repo_id for r in corpus}


class TestVoteSampler:
    def test_shapes_and_values(self):
        votes, y = sample_vote_matrix(
            theta=[0.9, 0.7], beta=[0.5, 0.3], pi=0.2, n=500, seed=0
        )
        assert votes.shape == (500, 2)
        assert y.shape == (500,)
        assert set(np.unique(votes)) <= {-1, 0, 1}
        assert set(np.unique(y)) <= {0, 1}

    def test_deterministic(self):
        a, ya = sample_vote_matrix([0.9], [0.5], 0.1, 200, seed=4)
        b, yb = sample_vote_matrix([0.9], [0.5], 0.1, 200, seed=4)
        assert np.array_equal(a, b)
        assert np.array_equal(ya, yb)

    def test_rates_match_planted_parameters(self):
        theta, beta, pi = 0.85, 0.4, 0.3
        votes, y = sample_vote_matrix([theta], [beta], pi, 20_000, seed=1)
        observed = votes[:, 0] != 0
        # 4-sigma binomial bounds on each estimated rate.
        assert abs(observed.mean() - beta) < 4 * np.sqrt(beta * (1 - beta) / 20_000)
        assert abs(y.mean() - pi) < 4 * np.sqrt(pi * (1 - pi) / 20_000)
        truthful = np.where(y == 1, 1, -1)
        agree = (votes[:, 0] == truthful)[observed]
        assert abs(agree.mean() - theta) < 4 * np.sqrt(theta * (1 - theta) / agree.size)
