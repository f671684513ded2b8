"""Seeded generators for synthetic repositories and vote matrices.

Every repository plants one known representative file (argument parsing, a
main function, entry-point-ish name, top of the import graph) among
utility modules, tests and distractors.  Because the ground truth is known
by construction, these generators serve as oracles for the label model,
the ranker and the end-to-end evaluation harness.
"""

from __future__ import annotations

import json
import os
import random
import zlib
from dataclasses import dataclass

import numpy as np

from .repo import RepoSnapshot, snapshot_from_contents

VOCAB = (
    "data pipeline stream batch record index cache merge filter token graph node "
    "config worker queue task report metric parse format load store sync shard "
    "retry probe trace audit schema field window buffer chunk digest"
).split()

MODULE_WORDS = (
    "core utils helpers models parser storage network engine tools common "
    "registry runtime session backend codec layout"
).split()

ENTRY_CHOICES = ("main.py", "cli.py", "app.py", "run.py")


@dataclass(frozen=True)
class SyntheticRepo:
    repo_id: str
    snapshot: RepoSnapshot  # includes README.md and setup.py when generated
    planted_path: str

    @property
    def files(self) -> dict[str, str]:
        return {f.path: f.content for f in self.snapshot.files}


def _stable_seed(seed: int, repo_id: str) -> int:
    return (seed * 1_000_003 + zlib.crc32(repo_id.encode("utf-8"))) & 0x7FFFFFFF


def _words(rng: random.Random, k: int) -> str:
    return " ".join(rng.choice(VOCAB) for _ in range(k))


def _helper_function(rng: random.Random) -> str:
    name = f"{rng.choice(VOCAB)}_{rng.choice(VOCAB)}"
    return (
        f"def {name}(items):\n"
        f"    \"\"\"Return {_words(rng, 4)}.\"\"\"\n"
        f"    out = []\n"
        f"    for item in items:\n"
        f"        out.append(item)\n"
        f"    return out\n"
    )


def _util_module(
    rng: random.Random, pkg: str, earlier: list[str], target_chars: int
) -> str:
    parts = [f'"""Support code for {_words(rng, 5)}."""\n']
    deps = rng.sample(earlier, min(len(earlier), rng.randint(0, 2))) if earlier else []
    if deps:
        parts.append(f"from . import {', '.join(sorted(deps))}\n")
    const = rng.choice(VOCAB).upper()
    parts.append(f"\nDEFAULT_{const} = {rng.randint(2, 99)}\n")
    parts.append(
        "\n\ndef run(value):\n"
        f"    \"\"\"Scale the input by the {const.lower()} default.\"\"\"\n"
        f"    return value * DEFAULT_{const}\n"
    )
    while sum(len(p) for p in parts) < target_chars:
        parts.append("\n\n" + _helper_function(rng))
    return "".join(parts)


def _base_module(rng: random.Random) -> str:
    return (
        f'"""Shared base types for {_words(rng, 3)}."""\n\n\n'
        "class Base:\n"
        f"    \"\"\"Common behaviour for {_words(rng, 3)}.\"\"\"\n\n"
        "    def setup(self):\n"
        "        return None\n\n"
        "    def teardown(self):\n"
        "        return None\n"
    )


def _subclass_block(rng: random.Random) -> str:
    name = rng.choice(VOCAB).title() + "Handler"
    return (
        "\nfrom .base import Base\n\n\n"
        f"class {name}(Base):\n"
        f"    \"\"\"Handle {_words(rng, 3)}.\"\"\"\n\n"
        "    def setup(self):\n"
        f"        return DEFAULT_{rng.choice(VOCAB).upper()} if False else 0\n"
    )


def _planted_module(
    rng: random.Random, pkg: str, utils: list[str], inside_pkg: bool
) -> str:
    used = rng.sample(utils, min(len(utils), max(2, rng.randint(2, 4))))
    if inside_pkg:
        imports = f"from . import {', '.join(sorted(used))}"
    else:
        imports = f"from {pkg} import {', '.join(sorted(used))}"
    calls = "\n".join(
        f"    print({u}.run(args.limit))" for u in used
    )
    doc = _words(rng, rng.randint(6, 14))
    return (
        f'"""Command line entry point: {doc}."""\n'
        "import argparse\n"
        "import sys\n\n"
        f"{imports}\n\n\n"
        "def build_parser():\n"
        f"    parser = argparse.ArgumentParser(description=\"{_words(rng, 5)}\")\n"
        f"    parser.add_argument(\"--input\", help=\"{_words(rng, 3)}\")\n"
        f"    parser.add_argument(\"--limit\", type=int, default={rng.randint(1, 50)})\n"
        "    return parser\n\n\n"
        "def main(argv=None):\n"
        f"    \"\"\"Run the {pkg} workflow end to end.\"\"\"\n"
        "    parser = build_parser()\n"
        "    args = parser.parse_args(argv)\n"
        f"{calls}\n"
        "    return 0\n\n\n"
        "if __name__ == \"__main__\":\n"
        "    sys.exit(main())\n"
    )


def _test_module(rng: random.Random, pkg: str, util: str) -> str:
    return (
        f"from {pkg} import {util}\n\n\n"
        f"def test_run():\n"
        f"    assert {util}.run(1) > 0\n\n\n"
        f"def test_run_scaling():\n"
        f"    assert {util}.run(2) == 2 * {util}.run(1)\n"
    )


def _setup_py(rng: random.Random, repo_id: str, entry_module: str) -> str:
    return (
        "from setuptools import setup, find_packages\n\n"
        "setup(\n"
        f"    name=\"{repo_id}\",\n"
        f"    version=\"0.{rng.randint(1, 9)}.{rng.randint(0, 9)}\",\n"
        "    packages=find_packages(),\n"
        "    entry_points={\n"
        "        \"console_scripts\": [\n"
        f"            \"{repo_id} = {entry_module}:main\",\n"
        "        ]\n"
        "    },\n"
        ")\n"
    )


def _readme(rng: random.Random, repo_id: str, pkg: str, entry_path: str) -> str:
    lines = [
        f"# {repo_id}",
        "",
        f"{repo_id.title()} is a tool for {_words(rng, 6)}.",
        "",
        "## Installation",
        "",
        "```bash",
        "pip install .",
        "```",
        "",
        "## Usage",
        "",
        "```python",
        f"import {pkg}",
        "```",
        "",
        "Run the command line interface:",
        "",
        "```bash",
        f"python {entry_path} --limit {rng.randint(1, 20)}",
        "```",
        "",
        f"The project handles {_words(rng, 8)}.",
    ]
    return "\n".join(lines) + "\n"


def make_synthetic_repo(repo_id: str, seed: int = 0) -> SyntheticRepo:
    """One deterministic repository with a planted representative file."""
    rng = random.Random(_stable_seed(seed, repo_id))
    pkg = repo_id.replace("-", "_")
    files: dict[str, str] = {}

    n_utils = rng.randint(3, 8)
    utils = rng.sample(MODULE_WORDS, n_utils)
    with_base = rng.random() < 0.5
    for i, name in enumerate(utils):
        target = rng.choice((120, 300, 800, 1800))
        body = _util_module(rng, pkg, utils[:i], target)
        if with_base and i > 0 and rng.random() < 0.5:
            body += _subclass_block(rng)
        files[f"{pkg}/{name}.py"] = body
    if with_base:
        files[f"{pkg}/base.py"] = _base_module(rng)
    files[f"{pkg}/__init__.py"] = (
        f'"""{pkg} package."""\n' + f"from . import {utils[0]}\n"
    )

    inside_pkg = rng.random() < 0.5
    if rng.random() < 0.15:
        # Same stem as the repository name; nested to keep its dotted module
        # path distinct from the package's own.
        entry_name = f"{pkg}.py"
        inside_pkg = True
    else:
        entry_name = rng.choice(ENTRY_CHOICES)
    planted_path = f"{pkg}/{entry_name}" if inside_pkg else entry_name
    files[planted_path] = _planted_module(rng, pkg, utils, inside_pkg)
    entry_module = planted_path[:-3].replace("/", ".")

    for util in rng.sample(utils, rng.randint(0, min(2, n_utils))):
        files[f"test_{util}.py"] = _test_module(rng, pkg, util)

    if rng.random() < 0.3:
        files["scripts/deploy.py"] = (
            "import argparse\n\n"
            f"parser = argparse.ArgumentParser(description=\"{_words(rng, 3)}\")\n"
            "parser.add_argument(\"--target\")\n"
            "args = parser.parse_args()\n"
            "print(args.target)\n"
        )
    if rng.random() < 0.3:
        files["conf.py"] = f"SETTING = \"{rng.choice(VOCAB)}\"\n"

    if rng.random() < 0.9:
        files["setup.py"] = _setup_py(rng, repo_id, entry_module)
    files["README.md"] = _readme(rng, repo_id, pkg, planted_path)

    snapshot = snapshot_from_contents(files, name=repo_id)
    return SyntheticRepo(repo_id=repo_id, snapshot=snapshot, planted_path=planted_path)


def make_synthetic_corpus(
    n: int, seed: int = 0, prefix: str = "repo"
) -> list[SyntheticRepo]:
    return [make_synthetic_repo(f"{prefix}{i:03d}", seed=seed) for i in range(n)]


def write_corpus(repos: list[SyntheticRepo], root_dir: str) -> str:
    """Write repositories plus a manifest file; returns the manifest path."""
    entries = []
    for repo in repos:
        repo_root = os.path.join(root_dir, repo.repo_id)
        for path, content in repo.files.items():
            full = os.path.join(repo_root, path)
            os.makedirs(os.path.dirname(full), exist_ok=True)
            with open(full, "w", encoding="utf-8") as fh:
                fh.write(content)
        entries.append({"id": repo.repo_id, "path": repo.repo_id})
    manifest_path = os.path.join(root_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump({"repos": entries}, fh, indent=2)
    return manifest_path


def sample_vote_matrix(
    theta, beta, pi: float, n: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Draw (votes, true_labels) from the label model's generative story."""
    rng = np.random.default_rng(seed)
    theta = np.asarray(theta, dtype=float)
    beta = np.asarray(beta, dtype=float)
    y = (rng.random(n) < pi).astype(np.int64)
    speaks = rng.random((n, theta.size)) < beta[None, :]
    correct = rng.random((n, theta.size)) < theta[None, :]
    truthful = np.where(y[:, None] == 1, 1, -1)
    votes = np.where(correct, truthful, -truthful)
    return np.where(speaks, votes, 0).astype(np.int8), y
