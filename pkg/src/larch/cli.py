"""Command line interface.

Exit codes: 0 success, 1 usage error (bad arguments, missing paths),
2 pipeline error (analysis, training or backend failure).
"""

from __future__ import annotations

import json
import socket
import sys

import click

from .config import generation_config_from_env
from .errors import LarchError, RootNotFound
from .evaluation import evaluate_corpus, load_manifest, write_report
from .gbrank import load_model, save_model
from .pipeline import (
    generate_for_snapshot,
    identify_representative,
    load_default_model,
    train_from_snapshots,
)
from .prompt import build_prompt
from .repo import scan_repository


def _resolve_model(model_file: str | None):
    return load_model(model_file) if model_file else load_default_model()


@click.group()
def cli():
    """Identify a repository's representative file and draft its readme."""


@cli.command()
@click.argument("path", type=click.Path())
@click.option("--name", default=None, help="Project name to include in the prompt.")
@click.option("--out", default=None, type=click.Path(), help="Write the readme here instead of stdout.")
@click.option("--endpoint", default=None, help="Completion endpoint URL, or 'stub:' for the offline backend.")
@click.option("--model", "model_name", default=None, help="Backend model name.")
@click.option("--model-file", default=None, type=click.Path(), help="Ranking model file (default: shipped model).")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--show-prompt", is_flag=True, help="Print the prompt and exit without calling the backend.")
def generate(path, name, out, endpoint, model_name, model_file, seed, show_prompt):
    """Generate a readme for the repository at PATH."""
    snapshot = scan_repository(path)
    rank_model = _resolve_model(model_file)
    cfg = generation_config_from_env(endpoint=endpoint, model=model_name)
    if show_prompt:
        top = identify_representative(snapshot, rank_model)[0]
        prompt = build_prompt(snapshot.get(top.path), name, list(snapshot.paths), seed, cfg)
        click.echo(prompt.text)
        return
    outcome = generate_for_snapshot(
        snapshot, cfg, model=rank_model, project_name=name, seed=seed
    )
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(outcome.readme)
        click.echo(f"wrote {out} (from {outcome.representative_path})", err=True)
    else:
        click.echo(outcome.readme)


@cli.command()
@click.argument("path", type=click.Path())
@click.option("--top", default=10, type=int, show_default=True, help="How many candidates to print.")
@click.option("--model-file", default=None, type=click.Path())
def identify(path, top, model_file):
    """Rank the Python files of the repository at PATH (JSON on stdout)."""
    snapshot = scan_repository(path)
    ranked = identify_representative(snapshot, _resolve_model(model_file))
    payload = {
        "candidates": [{"path": r.path, "score": r.score} for r in ranked[:top]]
    }
    click.echo(json.dumps(payload, indent=2))


@cli.command()
@click.option("--corpus", required=True, type=click.Path(), help="Corpus manifest JSON.")
@click.option("--out", required=True, type=click.Path(), help="Where to write the trained model.")
@click.option("--seed", default=0, type=int, show_default=True)
def train(corpus, out, seed):
    """Train the ranking model on a corpus of repositories."""
    manifest = load_manifest(corpus)
    snapshots = [scan_repository(e.root) for e in manifest.entries]
    result = train_from_snapshots(snapshots, seed=seed)
    save_model(result.rank_model, out)
    final_loss = result.rank_model.train_loss[-1] if result.rank_model.train_loss else float("nan")
    click.echo(
        f"trained on {result.n_repos} repos / {result.n_files} files; "
        f"{len(result.rank_model.trees)} trees, final pairwise loss {final_loss:.4f}; "
        f"wrote {out}"
    )
    if result.skipped:
        click.echo(f"skipped (no Python candidates): {', '.join(result.skipped)}", err=True)


@cli.command()
@click.option("--corpus", required=True, type=click.Path(), help="Corpus manifest JSON.")
@click.option(
    "--selector",
    default="both",
    show_default=True,
    type=click.Choice(["representative", "random", "both"]),
)
@click.option("--endpoint", default=None)
@click.option("--model", "model_name", default=None)
@click.option("--model-file", default=None, type=click.Path())
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out-dir", default="larch-eval", show_default=True, type=click.Path())
def eval(corpus, selector, endpoint, model_name, model_file, seed, out_dir):
    """Evaluate readme generation over a corpus with held-out readmes."""
    manifest = load_manifest(corpus)
    cfg = generation_config_from_env(endpoint=endpoint, model=model_name)
    model = load_model(model_file) if model_file else None
    report = evaluate_corpus(manifest, selector=selector, cfg=cfg, model=model, seed=seed)
    paths = write_report(report, out_dir)
    with open(paths["txt"], "r", encoding="utf-8") as fh:
        click.echo(fh.read().rstrip())
    click.echo(f"report written to {out_dir}/ (json, csv, txt, figures)", err=True)


@cli.command()
@click.option("--port", default=8000, type=int, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--model-file", default=None, type=click.Path())
@click.option("--endpoint", default=None)
@click.option("--model", "model_name", default=None)
def serve(port, host, model_file, endpoint, model_name):
    """Run the HTTP service."""
    import uvicorn

    from .server import ServiceConfig, create_app

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}")
    finally:
        probe.close()

    cfg = ServiceConfig(
        model_file=model_file,
        generation=generation_config_from_env(endpoint=endpoint, model=model_name),
    )
    uvicorn.run(create_app(cfg), host=host, port=port, log_level="info")


def main(argv=None) -> int:
    """Entry point returning the exit code instead of raising SystemExit."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except RootNotFound as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except LarchError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
