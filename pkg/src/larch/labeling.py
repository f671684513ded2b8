"""The 14 heuristic labeling functions and the vote matrix they produce.

Each function votes +1 (likely the representative file), -1 (unlikely), or 0
(abstain) for every candidate file.  The two oracle columns draw on material
that is only available at training time: console entry points declared in
setup.py and imports appearing in the held-out readme.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .analysis import CodeFacts, ImportGraph
from .errors import NoPythonFiles
from .repo import RepoSnapshot

LF_NAMES = (
    "lf1_main_fn",
    "lf2_argparser",
    "lf3_webframework",
    "lf4a_too_short",
    "lf5_main_in_name",
    "lf6_entrypointish_name",
    "lf7_dunder_init",
    "lf8_testish_name",
    "lf10a_import_top",
    "lf11_import_bottom",
    "lf14a_inherited_3x",
    "lf15_name_matches_repo",
    "lf16_setup_entrypoint",
    "lf17_imported_in_readme",
)

ENTRY_POINT_NAMES = frozenset(
    {"cli.py", "main.py", "__main__.py", "app.py", "run.py", "manage.py", "server.py"}
)

SHORT_FILE_CHARS = 200
INHERITED_THRESHOLD = 3

_ENTRY_SPEC_RE = re.compile(r"\s*[\w.-]+\s*=\s*([\w.]+)(?::[\w.]+)?\s*\Z")
_QUOTED_RE = re.compile(r"""['"]([^'"]+)['"]""")
_README_FROM_RE = re.compile(r"^\W*from\s+([\w.\-]+)\s+import\b")
_README_IMPORT_RE = re.compile(r"^\W*import\s+([\w.\-]+(?:\s*,\s*[\w.\-]+)*)")


@dataclass(frozen=True)
class OracleInputs:
    """Training-time-only evidence; both fields optional."""

    setup_py_content: str | None = None
    reference_readme: str | None = None


@dataclass
class LabelMatrix:
    repo_id: str
    rows: tuple[str, ...]
    votes: np.ndarray  # shape (n_files, 14), entries in {-1, 0, +1}
    lf_names: tuple[str, ...] = LF_NAMES

    def __post_init__(self):
        self.votes = np.asarray(self.votes, dtype=np.int8)
        if self.votes.shape != (len(self.rows), len(self.lf_names)):
            raise ValueError(f"votes shape {self.votes.shape} does not match rows/lf_names")
        if not np.isin(self.votes, (-1, 0, 1)).all():
            raise ValueError("votes must be -1, 0 or +1")

    def to_json(self) -> str:
        return json.dumps(
            {
                "repo_id": self.repo_id,
                "rows": list(self.rows),
                "lf_names": list(self.lf_names),
                "votes": self.votes.tolist(),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "LabelMatrix":
        data = json.loads(text)
        return cls(
            repo_id=data["repo_id"],
            rows=tuple(data["rows"]),
            votes=np.array(data["votes"], dtype=np.int8),
            lf_names=tuple(data["lf_names"]),
        )


def _normalize_name(name: str) -> str:
    return name.lower().replace("-", "_")


def parse_console_entry_points(text: str) -> list[str]:
    """Extract console entry-point module names from setup.py-style text.

    Textual on purpose (executing setup.py is unsafe): quoted
    ``name = module[:attr]`` strings near an ``entry_points`` declaration,
    plus ``[project.scripts]`` tables in pyproject-style files.
    """
    modules: list[str] = []
    if "entry_points" in text:
        for match in _QUOTED_RE.finditer(text):
            spec = _ENTRY_SPEC_RE.match(match.group(1))
            if spec:
                modules.append(spec.group(1))
    if "[project.scripts]" in text:
        in_table = False
        for line in text.splitlines():
            stripped = line.strip()
            if stripped.startswith("["):
                in_table = stripped == "[project.scripts]"
                continue
            if in_table and "=" in stripped:
                value = stripped.split("=", 1)[1].strip().strip("'\"")
                modules.append(value.split(":", 1)[0].strip())
    return modules


def parse_readme_imports(text: str) -> set[str]:
    """Module names imported by code lines appearing in a readme, normalized."""
    found: set[str] = set()
    for line in text.splitlines():
        m = _README_FROM_RE.match(line)
        if m:
            found.add(_normalize_name(m.group(1)))
            continue
        m = _README_IMPORT_RE.match(line)
        if m:
            for part in m.group(1).split(","):
                found.add(_normalize_name(part.strip()))
    return found


def _module_matches_import(module_path: str, imported: set[str]) -> bool:
    """True when an imported name is the module itself or an ancestor package."""
    norm = _normalize_name(module_path)
    for imp in imported:
        if norm == imp or norm.startswith(imp + "."):
            return True
    return False


def _oracle_column(positives: list[bool]) -> list[int]:
    # Footnote semantics: -1 when this file is not positive but another file
    # in the same repository is; abstain when no file is.
    if any(positives):
        return [1 if p else -1 for p in positives]
    return [0] * len(positives)


def apply_labeling_functions(
    snapshot: RepoSnapshot,
    facts: dict[str, CodeFacts],
    graph: ImportGraph,
    oracle: OracleInputs | None = None,
) -> LabelMatrix:
    """Vote every candidate file on all 14 labeling functions.

    Pure in its inputs; the oracle columns are all-0 whenever the
    corresponding oracle input is absent.
    """
    oracle = oracle or OracleInputs()
    candidates = snapshot.python_candidates()
    if not candidates:
        raise NoPythonFiles("no Python candidates to label")

    repo_name = _normalize_name(snapshot.name) if snapshot.name else None

    entry_modules = (
        parse_console_entry_points(oracle.setup_py_content)
        if oracle.setup_py_content is not None
        else None
    )
    readme_imports = (
        parse_readme_imports(oracle.reference_readme)
        if oracle.reference_readme is not None
        else None
    )

    rows = []
    votes = []
    setup_hits: list[bool] = []
    readme_hits: list[bool] = []
    for f in candidates:
        fact = facts[f.path]
        node = graph.node(f.path)
        base = f.base_name
        stem = base[:-3] if base.endswith(".py") else base

        row = [
            1 if any("main" in fn.lower() for fn in fact.function_names) else 0,
            1 if fact.has_arg_parser else 0,
            1 if fact.has_web_framework else 0,
            -1 if fact.char_length < SHORT_FILE_CHARS else 0,
            1 if "main" in base else 0,
            1 if base in ENTRY_POINT_NAMES else 0,
            -1 if base == "__init__.py" else 0,
            -1 if base.startswith("test_") else 0,
            1 if node.is_root else 0,
            -1 if node.is_leaf else 0,
            1 if node.max_class_inherit_count() >= INHERITED_THRESHOLD else 0,
            1 if repo_name is not None and _normalize_name(stem) == repo_name else 0,
        ]
        rows.append(f.path)
        votes.append(row)
        setup_hits.append(
            entry_modules is not None and fact.module_path in entry_modules
        )
        readme_hits.append(
            readme_imports is not None
            and _module_matches_import(fact.module_path, readme_imports)
        )

    lf16 = _oracle_column(setup_hits) if entry_modules is not None else [0] * len(rows)
    lf17 = _oracle_column(readme_hits) if readme_imports is not None else [0] * len(rows)
    matrix = np.array(
        [row + [a, b] for row, a, b in zip(votes, lf16, lf17)], dtype=np.int8
    )
    return LabelMatrix(repo_id=snapshot.name or "", rows=tuple(rows), votes=matrix)
