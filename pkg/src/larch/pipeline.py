"""End-to-end orchestration: analyze, identify, generate, train.

Ties the stages together: snapshot -> static analysis -> ranking ->
prompt -> backend call.  Training consumes full snapshots (readme and
setup.py still present), captures the oracle material, then strips it so
the candidate set matches what inference sees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from .analysis import CodeFacts, ImportGraph, build_import_graph, extract_all_facts
from .errors import NoPythonFiles
from .features import feature_matrix
from .gbrank import (
    RankedFile,
    RankerHyperparams,
    RankModel,
    RepoExamples,
    model_from_json,
    rank_files,
    select_random_file,
    train_ranker,
)
from .label_model import LabelModelConfig, LabelModelParams, fit_label_model, posteriors
from .labeling import LabelMatrix, OracleInputs, apply_labeling_functions
from .llm import CompletionBackend, backend_for
from .prompt import GenerationConfig, Prompt, build_prompt
from .repo import RepoSnapshot, strip_held_out

PRETRAINED_RESOURCE = "pretrained_model.json"


@dataclass(frozen=True)
class AnalyzedRepo:
    snapshot: RepoSnapshot
    facts: dict[str, CodeFacts]
    graph: ImportGraph


def analyze_snapshot(snapshot: RepoSnapshot) -> AnalyzedRepo:
    facts = extract_all_facts(snapshot)
    graph = build_import_graph(snapshot, facts)
    return AnalyzedRepo(snapshot=snapshot, facts=facts, graph=graph)


def load_default_model() -> RankModel:
    """The model shipped with the package, trained on the synthetic corpus."""
    text = (
        resources.files("larch").joinpath("data").joinpath(PRETRAINED_RESOURCE)
    ).read_text(encoding="utf-8")
    return model_from_json(text)


def identify_representative(
    snapshot: RepoSnapshot, model: RankModel | None = None
) -> list[RankedFile]:
    """Rank all Python candidates, best first."""
    model = model or load_default_model()
    analyzed = analyze_snapshot(snapshot)
    return rank_files(model, snapshot, analyzed.facts, analyzed.graph)


@dataclass(frozen=True)
class GenerationOutcome:
    readme: str
    representative_path: str
    prompt: Prompt
    usage: dict = field(default_factory=dict)
    attempts: int = 1


def generate_for_snapshot(
    snapshot: RepoSnapshot,
    cfg: GenerationConfig,
    model: RankModel | None = None,
    project_name: str | None = None,
    seed: int = 0,
    backend: CompletionBackend | None = None,
    representative_path: str | None = None,
) -> GenerationOutcome:
    """Select the representative file, build the prompt, call the backend."""
    if representative_path is None:
        path = identify_representative(snapshot, model)[0].path
    else:
        path = representative_path
    code = snapshot.get(path)
    if code is None:
        raise NoPythonFiles(f"selected path {path!r} is not in the snapshot")
    prompt = build_prompt(code, project_name, list(snapshot.paths), seed, cfg)
    backend = backend or backend_for(cfg)
    result = backend.complete(prompt.text, cfg)
    return GenerationOutcome(
        readme=result.readme_text,
        representative_path=path,
        prompt=prompt,
        usage=result.usage,
        attempts=result.attempts,
    )


@dataclass(frozen=True)
class TrainingRepoRecord:
    repo_id: str
    matrix: LabelMatrix
    paths: tuple[str, ...]
    features: np.ndarray


@dataclass(frozen=True)
class TrainingResult:
    rank_model: RankModel
    label_params: LabelModelParams
    n_repos: int
    n_files: int
    skipped: tuple[str, ...] = ()


def build_training_records(
    snapshots: Sequence[RepoSnapshot],
) -> tuple[list[TrainingRepoRecord], list[str]]:
    """Label matrices and feature rows per repo, oracles captured pre-strip."""
    records: list[TrainingRepoRecord] = []
    skipped: list[str] = []
    for full in snapshots:
        setup_file = full.get("setup.py")
        stripped = strip_held_out(full)
        oracle = OracleInputs(
            setup_py_content=setup_file.content if setup_file else None,
            reference_readme=stripped.reference_readme,
        )
        if not stripped.python_candidates():
            skipped.append(full.name or "<unnamed>")
            continue
        analyzed = analyze_snapshot(stripped)
        matrix = apply_labeling_functions(stripped, analyzed.facts, analyzed.graph, oracle)
        paths, feats = feature_matrix(stripped, analyzed.facts, analyzed.graph)
        records.append(
            TrainingRepoRecord(
                repo_id=full.name or "<unnamed>",
                matrix=matrix,
                paths=paths,
                features=feats,
            )
        )
    return records, skipped


def train_from_snapshots(
    snapshots: Sequence[RepoSnapshot],
    hp: RankerHyperparams | None = None,
    label_config: LabelModelConfig | None = None,
    seed: int = 0,
) -> TrainingResult:
    """Full training pass: labeling functions -> label model -> ranker."""
    records, skipped = build_training_records(snapshots)
    if not records:
        raise NoPythonFiles("no repository in the corpus has Python candidates")
    params = fit_label_model(
        [r.matrix for r in records], label_config or LabelModelConfig(seed=seed)
    )
    dataset = [
        RepoExamples(
            repo_id=r.repo_id,
            features=r.features,
            posteriors=posteriors(params, r.matrix),
            paths=r.paths,
        )
        for r in records
    ]
    model = train_ranker(dataset, hp, seed=seed)
    return TrainingResult(
        rank_model=model,
        label_params=params,
        n_repos=len(records),
        n_files=sum(len(r.paths) for r in records),
        skipped=tuple(skipped),
    )


def select_file(
    snapshot: RepoSnapshot,
    selector: str,
    model: RankModel | None = None,
    seed: int = 0,
) -> str:
    """Dispatch between the learned selector and the random baseline."""
    if selector == "representative":
        return identify_representative(snapshot, model)[0].path
    if selector == "random":
        return select_random_file(snapshot, seed)
    raise ValueError(f"unknown selector {selector!r}")
