"""Representative-file identification and readme drafting for Python repos.

The pipeline: scan a repository, extract per-file facts and the import
graph, vote with heuristic labeling functions, denoise the votes with a
probabilistic label model, rank files with gradient-boosted trees, build a
budgeted prompt from the winner, and ask an LLM backend for a readme.
"""

from .analysis import (
    CodeFacts,
    ImportGraph,
    MAX_DIST,
    build_import_graph,
    extract_all_facts,
    extract_code_facts,
)
from .errors import (
    BackendRejected,
    BackendUnreachable,
    BudgetTooSmall,
    DegenerateInput,
    EmptyCompletion,
    GenerationError,
    LarchError,
    MalformedModel,
    MissingAnalysis,
    MissingFacts,
    NoPythonFiles,
    NotPythonFile,
    NoUsablePairs,
    RepoTooLarge,
    RootNotFound,
    VersionMismatch,
)
from .evaluation import CorpusManifest, evaluate_corpus, load_manifest, write_report
from .features import FEATURE_NAMES, FeatureVector, extract_features, feature_matrix
from .gbrank import (
    RankModel,
    RankedFile,
    RankerHyperparams,
    RepoExamples,
    load_model,
    rank_files,
    save_model,
    select_random_file,
    train_ranker,
)
from .label_model import (
    LabelModelConfig,
    LabelModelParams,
    fit_label_model,
    posteriors,
)
from .labeling import LF_NAMES, LabelMatrix, OracleInputs, apply_labeling_functions
from .llm import StubBackend, backend_for, generate_readme
from .pipeline import (
    GenerationOutcome,
    TrainingResult,
    analyze_snapshot,
    generate_for_snapshot,
    identify_representative,
    load_default_model,
    train_from_snapshots,
)
from .prompt import GenerationConfig, Prompt, build_prompt, estimate_tokens
from .repo import (
    RepoSnapshot,
    ScanLimits,
    SourceFile,
    make_source_file,
    scan_repository,
    snapshot_from_contents,
    strip_held_out,
)
from .rouge import RougeScore, rouge_l, rouge_n, tokenize_for_rouge

__version__ = "0.1.0"

__all__ = [
    "BackendRejected",
    "BackendUnreachable",
    "BudgetTooSmall",
    "CodeFacts",
    "CorpusManifest",
    "DegenerateInput",
    "EmptyCompletion",
    "FEATURE_NAMES",
    "FeatureVector",
    "GenerationConfig",
    "GenerationError",
    "GenerationOutcome",
    "ImportGraph",
    "LF_NAMES",
    "LabelMatrix",
    "LabelModelConfig",
    "LabelModelParams",
    "LarchError",
    "MAX_DIST",
    "MalformedModel",
    "MissingAnalysis",
    "MissingFacts",
    "NoPythonFiles",
    "NotPythonFile",
    "NoUsablePairs",
    "OracleInputs",
    "Prompt",
    "RankModel",
    "RankedFile",
    "RankerHyperparams",
    "RepoExamples",
    "RepoSnapshot",
    "RepoTooLarge",
    "RootNotFound",
    "RougeScore",
    "ScanLimits",
    "SourceFile",
    "StubBackend",
    "TrainingResult",
    "VersionMismatch",
    "analyze_snapshot",
    "apply_labeling_functions",
    "backend_for",
    "build_import_graph",
    "build_prompt",
    "estimate_tokens",
    "evaluate_corpus",
    "extract_all_facts",
    "extract_code_facts",
    "extract_features",
    "feature_matrix",
    "fit_label_model",
    "generate_for_snapshot",
    "generate_readme",
    "identify_representative",
    "load_default_model",
    "load_manifest",
    "load_model",
    "make_source_file",
    "posteriors",
    "rank_files",
    "rouge_l",
    "rouge_n",
    "save_model",
    "scan_repository",
    "select_random_file",
    "snapshot_from_contents",
    "strip_held_out",
    "tokenize_for_rouge",
    "train_from_snapshots",
    "train_ranker",
    "write_report",
]
