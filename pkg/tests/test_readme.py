"""The console examples in README.md, run through the CLI and compared verbatim."""

import io
import re
import shlex
from pathlib import Path

import pytest

from conlab.cli import main

README = Path(__file__).parent.parent / "README.md"


def console_examples():
    out = []
    for block in re.findall(r"```console\n(.*?)```", README.read_text(), re.S):
        cmd, lines = None, []
        for line in block.splitlines():
            if line.startswith("$ "):
                if cmd is not None:
                    out.append((cmd, lines))
                cmd, lines = line[2:], []
            else:
                lines.append(line)
        out.append((cmd, lines))
    return out


EXAMPLES = console_examples()


def test_readme_has_examples():
    assert len(EXAMPLES) >= 10


@pytest.mark.parametrize("cmd,expected", EXAMPLES, ids=[c for c, _ in EXAMPLES])
def test_readme_example(cmd, expected, monkeypatch):
    monkeypatch.delenv("CONLAB_SEED", raising=False)
    argv = shlex.split(cmd)
    assert argv[0] == "conlab"
    out, err = io.StringIO(), io.StringIO()
    code = main(argv[1:], out=out, err=err)
    assert code == 0, err.getvalue()
    assert out.getvalue().splitlines() == expected
