"""Line-tolerant static analysis of Python sources.

Extraction works line by line with regular expressions rather than a grammar
parse: it stays robust to syntax errors in user code and needs only names and
import targets.  Lines inside triple-quoted strings are skipped with a
two-state scanner.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import MissingFacts, NotPythonFile
from .repo import RepoSnapshot, SourceFile

MAX_DIST = 1_000_000

ARG_PARSER_MODULES = frozenset({"argparse", "click", "fire", "typer", "optparse", "docopt"})
WEB_FRAMEWORK_MODULES = frozenset(
    {"flask", "django", "fastapi", "bottle", "tornado", "aiohttp", "sanic", "starlette"}
)

_DEF_RE = re.compile(r"^\s*(?:async\s+)?def\s+([A-Za-z_]\w*)\s*\(")
_CLASS_RE = re.compile(r"^\s*class\s+([A-Za-z_]\w*)\s*(?:\(([^)]*)\))?\s*:")
_IMPORT_RE = re.compile(r"^\s*import\s+(.+)$")
_FROM_RE = re.compile(r"^\s*from\s+([.\w]+)\s+import\s+(.+)$")
_TRIPLE_RE = re.compile(r"'''|\"\"\"")


@dataclass(frozen=True)
class ClassDef:
    name: str
    base_names: tuple[str, ...] = ()


@dataclass(frozen=True)
class CodeFacts:
    path: str
    module_path: str
    function_names: tuple[str, ...]
    class_defs: tuple[ClassDef, ...]
    import_targets: tuple[str, ...]
    has_arg_parser: bool
    has_web_framework: bool
    char_length: int


def module_path_for(path: str) -> str:
    """Dotted module name for a repo-relative .py path.

    "pkg/mod.py" -> "pkg.mod"; "pkg/__init__.py" -> "pkg".
    """
    parts = path[: -len(".py")].split("/") if path.endswith(".py") else path.split("/")
    if parts and parts[-1] == "__init__":
        parts = parts[:-1]
    return ".".join(parts)


def _containing_package(path: str, module_path: str) -> str:
    if path.rsplit("/", 1)[-1] == "__init__.py":
        return module_path
    return module_path.rsplit(".", 1)[0] if "." in module_path else ""


def _code_lines(content: str):
    """Yield lines that are not inside a triple-quoted string.

    Two-state scanner: a line with an odd number of (matching) triple-quote
    delimiters flips the state.  The flipping line itself is yielded, since it
    is at least partially code.
    """
    inside: str | None = None
    for line in content.splitlines():
        if inside is None:
            delims = _TRIPLE_RE.findall(line)
            yield line
            for d in delims:
                if inside is None:
                    inside = d
                elif inside == d:
                    inside = None
        else:
            delims = [d for d in _TRIPLE_RE.findall(line) if d == inside]
            if len(delims) % 2 == 1:
                inside = None


def _resolve_relative(dots: int, rest: str, containing_pkg: str) -> str | None:
    """Absolute form of a relative import base, or None when it escapes the repo."""
    parts = containing_pkg.split(".") if containing_pkg else []
    up = dots - 1
    if up > len(parts):
        return None
    base = parts[: len(parts) - up]
    if rest:
        base = base + rest.split(".")
    return ".".join(base)


def _parse_import_names(raw: str) -> list[str]:
    names = []
    for piece in raw.replace("(", " ").replace(")", " ").split(","):
        token = piece.strip()
        if not token or token == "*" or token == "\\":
            continue
        token = token.split()[0]
        if token and token != "*":
            names.append(token)
    return names


def extract_code_facts(file: SourceFile) -> CodeFacts:
    """Scan one Python file for definition names, import targets and framework
    markers.

    Total over arbitrary UTF-8 text: malformed lines simply contribute
    nothing.  Relative imports are resolved against the file's module path;
    ``from X import a`` also records ``X.a`` so that submodule imports resolve
    to their file later.
    """
    if not file.is_python:
        raise NotPythonFile(file.path)

    module_path = module_path_for(file.path)
    containing_pkg = _containing_package(file.path, module_path)

    functions: list[str] = []
    classes: list[ClassDef] = []
    targets: list[str] = []
    seen_targets: set[str] = set()

    def add_target(t: str | None):
        if t and t not in seen_targets:
            seen_targets.add(t)
            targets.append(t)

    for line in _code_lines(file.content):
        m = _DEF_RE.match(line)
        if m:
            functions.append(m.group(1))
            continue
        m = _CLASS_RE.match(line)
        if m:
            bases = []
            for chunk in (m.group(2) or "").split(","):
                base = chunk.strip()
                if not base or "=" in base or base.startswith("*"):
                    continue
                base = base.split("[", 1)[0].strip()
                if base:
                    bases.append(base)
            classes.append(ClassDef(m.group(1), tuple(bases)))
            continue
        m = _FROM_RE.match(line)
        if m:
            source, names_raw = m.group(1), m.group(2)
            names = _parse_import_names(names_raw)
            if source.startswith("."):
                dots = len(source) - len(source.lstrip("."))
                rest = source[dots:]
                base = _resolve_relative(dots, rest, containing_pkg)
                if base is None:
                    continue
                add_target(base)
                for n in names:
                    add_target(f"{base}.{n}" if base else n)
            else:
                add_target(source)
                for n in names:
                    add_target(f"{source}.{n}")
            continue
        m = _IMPORT_RE.match(line)
        if m:
            for name in _parse_import_names(m.group(1)):
                if not name.startswith("."):
                    add_target(name)

    first_segments = {t.split(".", 1)[0] for t in targets}
    has_arg_parser = bool(first_segments & ARG_PARSER_MODULES) or "ArgumentParser(" in file.content
    has_web_framework = bool(first_segments & WEB_FRAMEWORK_MODULES)

    return CodeFacts(
        path=file.path,
        module_path=module_path,
        function_names=tuple(functions),
        class_defs=tuple(classes),
        import_targets=tuple(targets),
        has_arg_parser=has_arg_parser,
        has_web_framework=has_web_framework,
        char_length=len(file.content),
    )


@dataclass(frozen=True)
class NodeStats:
    import_count: int
    importer_count: int
    is_root: bool
    is_leaf: bool
    dist_from_root: int
    inherited_count: int
    class_inherit_counts: tuple[tuple[str, int], ...] = ()

    def max_class_inherit_count(self) -> int:
        return max((c for _, c in self.class_inherit_counts), default=0)


@dataclass(frozen=True)
class ImportGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    stats: dict[str, NodeStats] = field(default_factory=dict)

    def node(self, path: str) -> NodeStats:
        return self.stats[path]


def extract_all_facts(snapshot: RepoSnapshot) -> dict[str, CodeFacts]:
    return {f.path: extract_code_facts(f) for f in snapshot.python_files()}


def build_import_graph(snapshot: RepoSnapshot, facts: dict[str, CodeFacts]) -> ImportGraph:
    """Aggregate per-file facts into the repo-wide import/inheritance graph.

    An edge A->B exists when an import target of A names B's module (packages
    resolve to their __init__.py).  Distance from the top is a multi-source
    BFS from all in-degree-0 nodes; nodes only reachable through cycles keep
    the MAX_DIST sentinel.
    """
    nodes = [f.path for f in snapshot.python_files()]
    node_set = set(nodes)
    for path in nodes:
        if path not in facts:
            raise MissingFacts(path)

    by_module: dict[str, list[str]] = {}
    for path in nodes:
        by_module.setdefault(facts[path].module_path, []).append(path)

    out_adj: dict[str, set[str]] = {p: set() for p in nodes}
    in_adj: dict[str, set[str]] = {p: set() for p in nodes}
    for path in nodes:
        for target in facts[path].import_targets:
            for dest in by_module.get(target, ()):
                if dest != path and dest in node_set:
                    out_adj[path].add(dest)
                    in_adj[dest].add(path)

    edges = tuple(sorted((a, b) for a, outs in out_adj.items() for b in outs))

    roots = [p for p in nodes if not in_adj[p]]
    dist = {p: MAX_DIST for p in nodes}
    frontier = sorted(roots)
    for p in frontier:
        dist[p] = 0
    while frontier:
        nxt = []
        for p in frontier:
            for q in sorted(out_adj[p]):
                if dist[q] == MAX_DIST:
                    dist[q] = dist[p] + 1
                    nxt.append(q)
        frontier = nxt

    # Inheritance: a base name resolves to file F when F defines a class of
    # that name and the inheriting file imports F's module (or the base is
    # dotted and its module prefix equals F's module path).
    class_files: dict[str, list[str]] = {}
    for path in nodes:
        for cdef in facts[path].class_defs:
            class_files.setdefault(cdef.name, []).append(path)

    inherit: dict[str, dict[str, int]] = {p: {} for p in nodes}
    for path in nodes:
        imported = set(facts[path].import_targets)
        for cdef in facts[path].class_defs:
            resolved: set[tuple[str, str]] = set()
            for base in cdef.base_names:
                if "." in base:
                    prefix, cls = base.rsplit(".", 1)
                    for dest in by_module.get(prefix, ()):
                        if any(c.name == cls for c in facts[dest].class_defs):
                            resolved.add((dest, cls))
                else:
                    for dest in class_files.get(base, ()):
                        if facts[dest].module_path in imported:
                            resolved.add((dest, base))
            for dest, cls in resolved:
                inherit[dest][cls] = inherit[dest].get(cls, 0) + 1

    stats = {}
    for p in nodes:
        counts = tuple(sorted(inherit[p].items()))
        stats[p] = NodeStats(
            import_count=len(out_adj[p]),
            importer_count=len(in_adj[p]),
            is_root=not in_adj[p],
            is_leaf=not out_adj[p],
            dist_from_root=dist[p],
            inherited_count=sum(c for _, c in counts),
            class_inherit_counts=counts,
        )
    return ImportGraph(nodes=tuple(nodes), edges=edges, stats=stats)
