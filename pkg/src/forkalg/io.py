"""Plain-text frame files.

::

    # a fork
    points: u v w
    rel: u v
    rel: u w

``points: 3`` names the points ``0 1 2``. Every ``rel`` line adds one pair;
reflexive pairs are always added. With ``close=True`` the reflexive and
transitive closure is taken before validation.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .builtins import NAMED_FRAMES
from .errors import ParseError
from .frame import Frame, reflexive_transitive_closure, require_quasiorder


def loads(text: str, *, close: bool = False) -> Frame:
    labels: list[str] | None = None
    pairs: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        col = len(line) - len(line.lstrip()) + 1
        if not sep:
            raise ParseError("expected 'points:' or 'rel:'", lineno, col)
        key = key.strip()
        words = rest.split()
        if key == "points":
            if labels is not None:
                raise ParseError("points declared twice", lineno, col)
            if len(words) == 1 and words[0].isdigit():
                labels = [str(i) for i in range(int(words[0]))]
            else:
                labels = words
            if len(set(labels)) != len(labels):
                raise ParseError("duplicate point name", lineno, col)
        elif key == "rel":
            if len(words) != 2:
                raise ParseError("rel takes exactly two points", lineno, line.index(":") + 2)
            pairs.append((words[0], words[1], lineno))
        else:
            raise ParseError(f"unknown key {key!r}", lineno, col)
    if labels is None:
        raise ParseError("missing points declaration", 1, 1)
    index = {name: i for i, name in enumerate(labels)}
    rows = [1 << i for i in range(len(labels))]
    for x, y, lineno in pairs:
        for name in (x, y):
            if name not in index:
                raise ParseError(f"unknown point {name!r}", lineno, 1)
        rows[index[x]] |= 1 << index[y]
    fr = Frame(len(labels), tuple(rows), tuple(labels))
    if close:
        fr = reflexive_transitive_closure(fr)
    require_quasiorder(fr)
    return fr


def dumps(fr: Frame) -> str:
    names = fr.labels
    if names == tuple(str(i) for i in range(fr.n)):
        lines = [f"points: {fr.n}"]
    else:
        lines = ["points: " + " ".join(names)]
    for x, y in fr.pairs():
        if x != y:
            lines.append(f"rel: {names[x]} {names[y]}")
    return "\n".join(lines) + "\n"


def loads_many(text: str, *, close: bool = False) -> list[Frame]:
    """Frames separated by ``---`` lines, as written by ``catalog dump``."""
    chunks, current = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            chunks.append("\n".join(current))
            current = []
        else:
            current.append(line)
    chunks.append("\n".join(current))
    return [loads(c, close=close) for c in chunks if c.strip()]


def load(source: str, *, close: bool = False) -> Frame:
    """Read a frame from a path, ``-`` for stdin, or ``@name`` for a built-in."""
    if source.startswith("@"):
        name = source[1:]
        if name not in NAMED_FRAMES:
            raise ParseError(f"unknown built-in frame {source!r}", 1, 1)
        return NAMED_FRAMES[name]()
    if source == "-":
        return loads(sys.stdin.read(), close=close)
    return loads(Path(source).read_text(), close=close)


def to_json(fr: Frame) -> dict:
    names = fr.labels
    return {
        "points": list(names),
        "relation": [[names[x], names[y]] for x, y in fr.pairs() if x != y],
    }


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
