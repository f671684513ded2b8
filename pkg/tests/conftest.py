"""Shared fixtures: hand-derived oracle repositories used across test modules.

The import-graph fixture and the labeling-function table repo are written
here once, with their expected values derived by hand in comments, so both
the module tests and the acceptance tests assert against the same oracle.
"""

from __future__ import annotations

import pytest

from larch.repo import RepoSnapshot, snapshot_from_contents

# Six files, one two-node cycle.  Hand-derived expectations:
#
#   edges: app->core, app->helpers, core->helpers, core->base,
#          cycle_a->cycle_b, cycle_a->base, cycle_b->cycle_a   (7 total)
#   in-degree:  app 0, core 1, helpers 2, base 2, cycle_a 1, cycle_b 1
#   out-degree: app 2, core 2, helpers 0, base 0, cycle_a 2, cycle_b 1
#   roots: app (only in-degree-0 node); leaves: helpers, base
#   BFS dist from roots: app 0, core 1, helpers 1, base 2; the cycle pair
#   is unreachable from any root -> MAX_DIST sentinel
#   class Base (base.py) is subclassed by core.Engine and cycle_a.A -> 2
GRAPH_FIXTURE_FILES = {
    "app.py": (
        "from core import run_all\n"
        "import helpers\n"
        "\n"
        "\n"
        "def main():\n"
        "    run_all(helpers.load())\n"
    ),
    "core.py": (
        "import helpers\n"
        "from base import Base\n"
        "\n"
        "\n"
        "class Engine(Base):\n"
        "    def run(self):\n"
        "        return helpers.load()\n"
        "\n"
        "\n"
        "def run_all(items):\n"
        "    return list(items)\n"
    ),
    "helpers.py": (
        "def load():\n"
        "    return [1, 2, 3]\n"
    ),
    "base.py": (
        "class Base:\n"
        "    def setup(self):\n"
        "        return None\n"
    ),
    "cycle_a.py": (
        "import cycle_b\n"
        "from base import Base\n"
        "\n"
        "\n"
        "class A(Base):\n"
        "    pass\n"
    ),
    "cycle_b.py": (
        "import cycle_a\n"
    ),
}

GRAPH_FIXTURE_EXPECTED = {
    # path: (import_count, importer_count, is_root, is_leaf, dist, inherited)
    "app.py": (2, 0, True, False, 0, 0),
    "base.py": (0, 2, False, True, 2, 2),
    "core.py": (2, 1, False, False, 1, 0),
    "cycle_a.py": (2, 1, False, False, None, 0),  # None -> MAX_DIST
    "cycle_b.py": (1, 1, False, False, None, 0),
    "helpers.py": (0, 2, False, True, 1, 0),
}

GRAPH_FIXTURE_EDGES = {
    ("app.py", "core.py"),
    ("app.py", "helpers.py"),
    ("core.py", "helpers.py"),
    ("core.py", "base.py"),
    ("cycle_a.py", "cycle_b.py"),
    ("cycle_a.py", "base.py"),
    ("cycle_b.py", "cycle_a.py"),
}


@pytest.fixture
def graph_fixture_snapshot() -> RepoSnapshot:
    return snapshot_from_contents(GRAPH_FIXTURE_FILES, name="graphfix")


# A repository designed so every labeling function fires somewhere.
# pkg/base.py's Base is subclassed three times (pkg/a.py, pkg/b.py,
# pkg/c.py); main.py is the console entry point and the only import root
# besides the self-contained distractors; the readme imports pkg.
_LONG_PAD = "".join(f"VALUE_{i} = {i}\n" for i in range(30))  # ~300 chars of filler

LF_FIXTURE_FILES = {
    "main.py": (
        '"""Entry point."""\n'
        "import argparse\n"
        "\n"
        "import helpers\n"
        "\n"
        "\n"
        "def main():\n"
        '    parser = argparse.ArgumentParser(description="run")\n'
        '    parser.add_argument("--limit", type=int)\n'
        "    args = parser.parse_args()\n"
        "    return helpers.load(args.limit)\n"
        "\n" + _LONG_PAD
    ),
    "webapp.py": (
        "import flask\n"
        "\n"
        "app = flask.Flask(__name__)\n"
        "\n"
        "\n"
        "def handle():\n"
        "    return app\n"
        "\n" + _LONG_PAD
    ),
    "tiny.py": "X = 1\n",
    "helpers.py": (
        "def load(limit):\n"
        "    return list(range(limit))\n"
        "\n" + _LONG_PAD
    ),
    "test_units.py": (
        "import helpers\n"
        "\n"
        "\n"
        "def test_load():\n"
        "    assert helpers.load(3) == [0, 1, 2]\n"
        "\n" + _LONG_PAD
    ),
    "lfrepo.py": (
        '"""Facade named after the project."""\n'
        "import helpers\n"
        "\n"
        "\n"
        "def facade(limit):\n"
        "    return helpers.load(limit)\n"
        "\n" + _LONG_PAD
    ),
    "pkg/__init__.py": '"""pkg."""\nfrom . import base\n' + _LONG_PAD,
    "pkg/base.py": (
        "class Base:\n"
        "    def setup(self):\n"
        "        return None\n"
        "\n" + _LONG_PAD
    ),
    "pkg/a.py": (
        "from .base import Base\n"
        "\n"
        "\n"
        "class AThing(Base):\n"
        "    pass\n"
        "\n" + _LONG_PAD
    ),
    "pkg/b.py": (
        "from .base import Base\n"
        "\n"
        "\n"
        "class BThing(Base):\n"
        "    pass\n"
        "\n" + _LONG_PAD
    ),
    "pkg/c.py": (
        "from .base import Base\n"
        "\n"
        "\n"
        "class CThing(Base):\n"
        "    pass\n"
        "\n" + _LONG_PAD
    ),
    "setup.py": "from setuptools import setup\n\nsetup(name='lfrepo')\n",
}

LF_FIXTURE_SETUP_PY = (
    "from setuptools import setup\n"
    "\n"
    "setup(\n"
    "    name='lfrepo',\n"
    "    install_requires=['requests>=2.0'],\n"
    "    entry_points={\n"
    "        'console_scripts': ['lfrepo = main:main'],\n"
    "    },\n"
    ")\n"
)

LF_FIXTURE_README = (
    "# lfrepo\n"
    "\n"
    "Usage:\n"
    "\n"
    "```python\n"
    "import pkg\n"
    "```\n"
)

# Candidate rows are the sorted Python files minus root setup.py:
#   helpers.py, lfrepo.py, main.py, pkg/__init__.py, pkg/a.py, pkg/b.py,
#   pkg/c.py, pkg/base.py, test_units.py, tiny.py, webapp.py
#
# Hand-derived graph facts: main.py and test_units.py import helpers;
# lfrepo.py imports helpers; pkg/__init__.py imports pkg.base; pkg/a|b|c
# import pkg.base (so base has importer_count 4, inherited 3 by distinct
# subclasses).  Roots (in-degree 0): main.py, lfrepo.py?? no - lfrepo
# imports helpers so it is a root (nothing imports lfrepo) -> is_root,
# same for main.py, test_units.py, tiny.py, webapp.py, pkg/a|b|c.
# Leaves (out-degree 0): helpers.py, pkg/base.py, tiny.py, webapp.py.
LF_FIXTURE_EXPECTED_VOTES = {
    #                 lf1 lf2 lf3 lf4a lf5 lf6 lf7 lf8 lf10a lf11 lf14a lf15 lf16 lf17
    "helpers.py": [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, -1, -1],
    "lfrepo.py": [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, -1, -1],
    "main.py": [1, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, -1],
    "pkg/__init__.py": [0, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1, 1],
    "pkg/a.py": [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 1],
    "pkg/b.py": [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 1],
    "pkg/c.py": [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 1],
    "pkg/base.py": [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 1, 0, -1, 1],
    "test_units.py": [0, 0, 0, 0, 0, 0, 0, -1, 1, 0, 0, 0, -1, -1],
    "tiny.py": [0, 0, 0, -1, 0, 0, 0, 0, 1, -1, 0, 0, -1, -1],
    "webapp.py": [0, 0, 1, 0, 0, 0, 0, 0, 1, -1, 0, 0, -1, -1],
}


@pytest.fixture
def lf_fixture_snapshot() -> RepoSnapshot:
    return snapshot_from_contents(LF_FIXTURE_FILES, name="lfrepo")


_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call":
        _acceptance_results.append(
            (report.nodeid, "PASS" if report.passed else "FAIL")
        )
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_results.append(
            (report.nodeid, "SKIP" if report.skipped else "FAIL")
        )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid, outcome in _acceptance_results:
        terminalreporter.write_line(f"{outcome}: {nodeid.split('::')[-1]}")
