"""Repository snapshots: enumerate files on disk into an immutable, canonically
ordered form, and hold out reference material for training/evaluation."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .errors import RepoTooLarge, RootNotFound

DEFAULT_MAX_REPO_BYTES = 500 * 1024 * 1024
DEFAULT_MAX_FILE_COUNT = 1000
DEFAULT_MAX_FILE_BYTES = 4 * 1024 * 1024


@dataclass(frozen=True)
class ScanLimits:
    max_repo_bytes: int = DEFAULT_MAX_REPO_BYTES
    max_file_count: int = DEFAULT_MAX_FILE_COUNT
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES


@dataclass(frozen=True)
class SourceFile:
    """A single text file, addressed by its forward-slash relative path."""

    path: str
    content: str
    byte_size: int
    is_python: bool

    def __post_init__(self):
        if not self.path:
            raise ValueError("path must be non-empty")
        if self.path.startswith("/") or "\\" in self.path:
            raise ValueError(f"path must be relative with forward slashes: {self.path!r}")
        segments = self.path.split("/")
        if any(seg in ("", ".", "..") for seg in segments):
            raise ValueError(f"path contains empty/dot segments: {self.path!r}")
        if self.byte_size != len(self.content.encode("utf-8")):
            raise ValueError(f"byte_size does not match encoded content for {self.path!r}")
        if self.is_python != self.path.endswith(".py"):
            raise ValueError(f"is_python inconsistent with path {self.path!r}")

    @property
    def base_name(self) -> str:
        return self.path.rsplit("/", 1)[-1]


def make_source_file(path: str, content: str) -> SourceFile:
    return SourceFile(
        path=path,
        content=content,
        byte_size=len(content.encode("utf-8")),
        is_python=path.endswith(".py"),
    )


@dataclass(frozen=True)
class RepoSnapshot:
    """An immutable view of a repository: unique paths, sorted lexicographically.

    All downstream determinism (matrix row order, ranking tie-breaks) relies on
    the canonical file order established here.
    """

    name: str | None = None
    files: tuple[SourceFile, ...] = field(default_factory=tuple)
    reference_readme: str | None = None

    def __post_init__(self):
        paths = [f.path for f in self.files]
        if len(set(paths)) != len(paths):
            raise ValueError("duplicate file paths in snapshot")
        if paths != sorted(paths):
            object.__setattr__(self, "files", tuple(sorted(self.files, key=lambda f: f.path)))

    def get(self, path: str) -> SourceFile | None:
        for f in self.files:
            if f.path == path:
                return f
        return None

    def python_files(self) -> tuple[SourceFile, ...]:
        return tuple(f for f in self.files if f.is_python)

    def python_candidates(self) -> tuple[SourceFile, ...]:
        """Rankable candidates: Python files except a root-level setup.py."""
        return tuple(f for f in self.files if f.is_python and f.path != "setup.py")

    @property
    def paths(self) -> tuple[str, ...]:
        return tuple(f.path for f in self.files)


def snapshot_from_contents(
    contents: dict[str, str], name: str | None = None, reference_readme: str | None = None
) -> RepoSnapshot:
    """Build a snapshot directly from a path->content mapping (tests, uploads)."""
    files = tuple(make_source_file(p, c) for p, c in sorted(contents.items()))
    return RepoSnapshot(name=name, files=files, reference_readme=reference_readme)


def _is_binary(data: bytes) -> bool:
    return b"\x00" in data


def scan_repository(root: str | os.PathLike, limits: ScanLimits | None = None) -> RepoSnapshot:
    """Enumerate all regular files under ``root`` into a snapshot.

    VCS internals (".git") are skipped entirely and symlinks are never
    followed.  Binary files (NUL byte or invalid UTF-8) are excluded from the
    snapshot but still count toward the repo-level size/count limits, which
    describe the repository on disk.

    Raises RootNotFound or RepoTooLarge (naming the limit that tripped).
    """
    limits = limits or ScanLimits()
    root = os.fspath(root)
    if not os.path.isdir(root):
        raise RootNotFound(f"not a readable directory: {root}")

    files: list[SourceFile] = []
    total_bytes = 0
    total_count = 0
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames[:] = sorted(d for d in dirnames if d != ".git")
        for fname in sorted(filenames):
            if fname == ".git":
                continue
            full = os.path.join(dirpath, fname)
            if os.path.islink(full) or not os.path.isfile(full):
                continue
            size = os.path.getsize(full)
            total_count += 1
            total_bytes += size
            if total_count > limits.max_file_count:
                raise RepoTooLarge(
                    "max_file_count", f"more than {limits.max_file_count} files under {root}"
                )
            if total_bytes > limits.max_repo_bytes:
                raise RepoTooLarge(
                    "max_repo_bytes", f"repository exceeds {limits.max_repo_bytes} bytes"
                )
            if size > limits.max_file_bytes:
                raise RepoTooLarge(
                    "max_file_bytes", f"{full} exceeds {limits.max_file_bytes} bytes"
                )
            with open(full, "rb") as fh:
                data = fh.read()
            if _is_binary(data):
                continue
            try:
                text = data.decode("utf-8")
            except UnicodeDecodeError:
                continue
            rel = os.path.relpath(full, root).replace(os.sep, "/")
            files.append(SourceFile(rel, text, len(data), rel.endswith(".py")))

    name = os.path.basename(os.path.abspath(root))
    files.sort(key=lambda f: f.path)
    return RepoSnapshot(name=name, files=tuple(files))


def _is_root_readme(path: str) -> bool:
    if "/" in path:
        return False
    lowered = path.lower()
    return lowered == "readme" or lowered.startswith("readme.")


def strip_held_out(snapshot: RepoSnapshot) -> RepoSnapshot:
    """Hold out reference material: remove root-level readme files (first one,
    by sorted order, becomes ``reference_readme``) and the root-level setup.py.

    Idempotent; the input snapshot is never modified.
    """
    readmes = [f for f in snapshot.files if _is_root_readme(f.path)]
    kept = tuple(
        f for f in snapshot.files if not _is_root_readme(f.path) and f.path != "setup.py"
    )
    if len(kept) == len(snapshot.files):
        return snapshot
    reference = snapshot.reference_readme
    if readmes and reference is None:
        reference = readmes[0].content
    return replace(snapshot, files=kept, reference_readme=reference)
