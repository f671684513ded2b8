"""Corpus-level evaluation harness.

For each repository: hold out the readme, pick a file (learned selector or
random baseline), generate a readme, and score it against the held-out
reference with ROUGE-1/2/L.  Failures are recorded per row rather than
aborting the run.  Reports are written as JSON, CSV, an aligned text
table, and rendered bar-chart figures.
"""

from __future__ import annotations

import csv
import json
import os
import zlib
from dataclasses import dataclass

from .errors import LarchError
from .gbrank import RankModel
from .llm import backend_for
from .pipeline import generate_for_snapshot, load_default_model, select_file
from .prompt import GenerationConfig
from .repo import RepoSnapshot, ScanLimits, scan_repository, strip_held_out
from .rouge import RougeScore, rouge_l, rouge_n

SELECTORS = ("representative", "random")


@dataclass(frozen=True)
class CorpusEntry:
    repo_id: str
    root: str
    split: str | None = None


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[CorpusEntry, ...]

    def __post_init__(self):
        ids = [e.repo_id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("manifest repo ids must be unique")


def load_manifest(path: str) -> CorpusManifest:
    """Read {repos: [{id, path, split?}]}; paths resolve against the file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    for item in data["repos"]:
        root = item["path"]
        if not os.path.isabs(root):
            root = os.path.join(base, root)
        entries.append(
            CorpusEntry(repo_id=item["id"], root=root, split=item.get("split"))
        )
    return CorpusManifest(entries=tuple(entries))


@dataclass(frozen=True)
class EvalRow:
    repo_id: str
    selector: str
    status: str  # "ok", "skipped" or "error"
    reason: str = ""
    representative_path: str = ""
    rouge1: RougeScore | None = None
    rouge2: RougeScore | None = None
    rougeL: RougeScore | None = None


@dataclass(frozen=True)
class EvalReport:
    selectors: tuple[str, ...]
    seed: int
    rows: tuple[EvalRow, ...]
    means: dict


def _repo_seed(seed: int, repo_id: str) -> int:
    return (seed * 7_919 + zlib.crc32(repo_id.encode("utf-8"))) & 0x7FFFFFFF


def _evaluate_one(
    repo_id: str,
    snapshot: RepoSnapshot,
    selector: str,
    cfg: GenerationConfig,
    model: RankModel | None,
    seed: int,
    backend,
) -> EvalRow:
    stripped = strip_held_out(snapshot)
    if stripped.reference_readme is None:
        return EvalRow(repo_id, selector, "skipped", reason="no root readme to hold out")
    if not stripped.python_candidates():
        return EvalRow(repo_id, selector, "skipped", reason="no Python files")
    try:
        path = select_file(stripped, selector, model=model, seed=seed)
        outcome = generate_for_snapshot(
            stripped,
            cfg,
            model=model,
            project_name=repo_id,
            seed=seed,
            backend=backend,
            representative_path=path,
        )
    except LarchError as exc:
        return EvalRow(repo_id, selector, "error", reason=str(exc))
    reference = stripped.reference_readme
    return EvalRow(
        repo_id=repo_id,
        selector=selector,
        status="ok",
        representative_path=path,
        rouge1=rouge_n(outcome.readme, reference, 1),
        rouge2=rouge_n(outcome.readme, reference, 2),
        rougeL=rouge_l(outcome.readme, reference),
    )


def evaluate_corpus(
    manifest: CorpusManifest,
    selector: str = "both",
    cfg: GenerationConfig | None = None,
    model: RankModel | None = None,
    seed: int = 0,
    limits: ScanLimits | None = None,
) -> EvalReport:
    """Score every manifest repository under one or both selectors."""
    selectors = SELECTORS if selector == "both" else (selector,)
    for s in selectors:
        if s not in SELECTORS:
            raise ValueError(f"unknown selector {s!r}")
    cfg = cfg or GenerationConfig()
    if "representative" in selectors and model is None:
        model = load_default_model()
    backend = backend_for(cfg)

    rows: list[EvalRow] = []
    for entry in sorted(manifest.entries, key=lambda e: e.repo_id):
        try:
            snapshot = scan_repository(entry.root, limits=limits)
        except LarchError as exc:
            for s in selectors:
                rows.append(EvalRow(entry.repo_id, s, "error", reason=str(exc)))
            continue
        for s in selectors:
            rows.append(
                _evaluate_one(
                    entry.repo_id,
                    snapshot,
                    s,
                    cfg,
                    model,
                    _repo_seed(seed, entry.repo_id),
                    backend,
                )
            )

    means: dict = {}
    for s in selectors:
        ok = [r for r in rows if r.selector == s and r.status == "ok"]
        if ok:
            means[s] = {
                "rouge1_f1": sum(r.rouge1.f1 for r in ok) / len(ok),
                "rouge2_f1": sum(r.rouge2.f1 for r in ok) / len(ok),
                "rougeL_f1": sum(r.rougeL.f1 for r in ok) / len(ok),
                "n_ok": len(ok),
            }
        else:
            means[s] = {"rouge1_f1": 0.0, "rouge2_f1": 0.0, "rougeL_f1": 0.0, "n_ok": 0}
    rows.sort(key=lambda r: (r.repo_id, r.selector))
    return EvalReport(selectors=selectors, seed=seed, rows=tuple(rows), means=means)


def _display(value: float) -> str:
    return f"{value * 100:.1f}"


def _score_dict(score: RougeScore | None) -> dict | None:
    if score is None:
        return None
    return {"precision": score.precision, "recall": score.recall, "f1": score.f1}


def report_to_dict(report: EvalReport) -> dict:
    return {
        "seed": report.seed,
        "selectors": list(report.selectors),
        "rows": [
            {
                "repo_id": r.repo_id,
                "selector": r.selector,
                "status": r.status,
                "reason": r.reason,
                "representative_path": r.representative_path,
                "rouge": (
                    None
                    if r.rouge1 is None
                    else {
                        "rouge1": _score_dict(r.rouge1),
                        "rouge2": _score_dict(r.rouge2),
                        "rougeL": _score_dict(r.rougeL),
                    }
                ),
            }
            for r in report.rows
        ],
        "means": report.means,
        "display": {
            s: {
                "R-1": _display(report.means[s]["rouge1_f1"]),
                "R-2": _display(report.means[s]["rouge2_f1"]),
                "R-L": _display(report.means[s]["rougeL_f1"]),
                "n": report.means[s]["n_ok"],
            }
            for s in report.selectors
        },
    }


def _format_table(report: EvalReport) -> str:
    headers = ["repo", "selector", "status", "file", "R-1", "R-2", "R-L"]
    body = []
    for r in report.rows:
        body.append(
            [
                r.repo_id,
                r.selector,
                r.status,
                r.representative_path or "-",
                _display(r.rouge1.f1) if r.rouge1 else "-",
                _display(r.rouge2.f1) if r.rouge2 else "-",
                _display(r.rougeL.f1) if r.rougeL else "-",
            ]
        )
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in body)) if body else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row in body:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    lines.append("")
    lines.append("Mean f1 x100 over scored repositories:")
    for s in report.selectors:
        m = report.means[s]
        lines.append(
            f"  {s:<16} R-1 {_display(m['rouge1_f1']):>5}  "
            f"R-2 {_display(m['rouge2_f1']):>5}  "
            f"R-L {_display(m['rougeL_f1']):>5}  (n={m['n_ok']})"
        )
    return "\n".join(lines) + "\n"


def _render_figures(report: EvalReport, out_dir: str) -> list[str]:
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    written = []
    metrics = ("rouge1_f1", "rouge2_f1", "rougeL_f1")
    labels = ("R-1", "R-2", "R-L")

    fig = Figure(figsize=(6, 4))
    FigureCanvasAgg(fig)
    ax = fig.subplots()
    width = 0.8 / max(1, len(report.selectors))
    for i, s in enumerate(report.selectors):
        xs = [j + i * width for j in range(len(metrics))]
        ys = [report.means[s][m] * 100 for m in metrics]
        ax.bar(xs, ys, width=width, label=s)
    ax.set_xticks([j + width * (len(report.selectors) - 1) / 2 for j in range(len(metrics))])
    ax.set_xticklabels(labels)
    ax.set_ylabel("mean f1 x100")
    ax.set_title("ROUGE means by selector")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(out_dir, "rouge_means.png")
    fig.savefig(path, dpi=120)
    written.append(path)

    ok_rows = [r for r in report.rows if r.status == "ok"]
    repo_ids = sorted({r.repo_id for r in ok_rows})
    if repo_ids:
        fig = Figure(figsize=(7, max(3, 0.45 * len(repo_ids) + 1)))
        FigureCanvasAgg(fig)
        ax = fig.subplots()
        height = 0.8 / max(1, len(report.selectors))
        for i, s in enumerate(report.selectors):
            by_repo = {r.repo_id: r for r in ok_rows if r.selector == s}
            ys = [j + i * height for j in range(len(repo_ids))]
            xs = [
                by_repo[rid].rougeL.f1 * 100 if rid in by_repo else 0.0
                for rid in repo_ids
            ]
            ax.barh(ys, xs, height=height, label=s)
        ax.set_yticks([j + height * (len(report.selectors) - 1) / 2 for j in range(len(repo_ids))])
        ax.set_yticklabels(repo_ids)
        ax.invert_yaxis()
        ax.set_xlabel("R-L f1 x100")
        ax.set_title("Per-repository ROUGE-L")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, "per_repo_rouge_l.png")
        fig.savefig(path, dpi=120)
        written.append(path)
    return written


def write_report(report: EvalReport, out_dir: str) -> dict[str, object]:
    """Write report.json, report.csv, report.txt and figures; returns paths."""
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "report.json")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report_to_dict(report), fh, indent=2)
        fh.write("\n")

    csv_path = os.path.join(out_dir, "report.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "repo_id",
                "selector",
                "status",
                "reason",
                "representative_path",
                "rouge1_f1",
                "rouge2_f1",
                "rougeL_f1",
            ]
        )
        for r in report.rows:
            writer.writerow(
                [
                    r.repo_id,
                    r.selector,
                    r.status,
                    r.reason,
                    r.representative_path,
                    repr(r.rouge1.f1) if r.rouge1 else "",
                    repr(r.rouge2.f1) if r.rouge2 else "",
                    repr(r.rougeL.f1) if r.rougeL else "",
                ]
            )

    txt_path = os.path.join(out_dir, "report.txt")
    with open(txt_path, "w", encoding="utf-8") as fh:
        fh.write(_format_table(report))

    figures = _render_figures(report, out_dir)
    return {"json": json_path, "csv": csv_path, "txt": txt_path, "figures": figures}
