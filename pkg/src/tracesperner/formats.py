"""Text formats: family files, poset files, and CLI shorthands.

Family file::

    # comment
    n=3
    -          # the empty set
    1
    1,2

Poset file::

    nodes=3
    parent(1)=0
    parent(2)=0
"""

from __future__ import annotations

import re

from . import constructions as cons
from .family import SetFamily, check_ground, elements_of
from .poset import TreePoset, build_chain_poset, build_complete_tree_poset


class FormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


_N_LINE = re.compile(r"n\s*=\s*(\d+)$")


def parse_family(text: str) -> SetFamily:
    lines = _content_lines(text)
    try:
        lineno, first = next(lines)
    except StopIteration:
        raise FormatError("missing 'n=<int>' header") from None
    m = _N_LINE.match(first)
    if not m:
        raise FormatError(f"expected 'n=<int>', got {first!r}", lineno)
    n = int(m.group(1))
    try:
        check_ground(n)
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from None
    seen = {}
    for lineno, line in lines:
        if line == "-":
            mask = 0
        else:
            try:
                elems = [int(tok) for tok in line.split(",")]
            except ValueError:
                raise FormatError(f"not a comma-separated list of integers: {line!r}", lineno) from None
            if any(b <= a for a, b in zip(elems, elems[1:])):
                raise FormatError("elements must be strictly increasing", lineno)
            if elems[0] < 1 or elems[-1] > n:
                raise FormatError(f"elements must lie in 1..{n}", lineno)
            mask = 0
            for e in elems:
                mask |= 1 << (e - 1)
        if mask in seen:
            raise FormatError(f"duplicate set (first seen on line {seen[mask]})", lineno)
        seen[mask] = lineno
    return SetFamily.of(n, seen)


def format_set(mask: int) -> str:
    return ",".join(map(str, elements_of(mask))) if mask else "-"


def format_family(family: SetFamily) -> str:
    lines = [f"n={family.n}"]
    lines.extend(format_set(m) for m in family.members)
    return "\n".join(lines) + "\n"


_NODES = re.compile(r"nodes\s*=\s*(\d+)$")
_PARENT = re.compile(r"parent\(\s*(\d+)\s*\)\s*=\s*(\d+)$")


def parse_poset(text: str) -> TreePoset:
    lines = _content_lines(text)
    try:
        lineno, first = next(lines)
    except StopIteration:
        raise FormatError("missing 'nodes=<int>' header") from None
    m = _NODES.match(first)
    if not m or int(m.group(1)) < 1:
        raise FormatError(f"expected 'nodes=<positive int>', got {first!r}", lineno)
    count = int(m.group(1))
    parents = [None] * count
    given = set()
    for lineno, line in lines:
        m = _PARENT.match(line)
        if not m:
            raise FormatError(f"expected 'parent(<i>)=<j>', got {line!r}", lineno)
        i, j = int(m.group(1)), int(m.group(2))
        if not 1 <= i < count or not 0 <= j < count or i == j:
            raise FormatError(f"node indices out of range: {line!r}", lineno)
        if i in given:
            raise FormatError(f"parent of node {i} given twice", lineno)
        given.add(i)
        parents[i] = j
    if len(given) != count - 1:
        missing = sorted(set(range(1, count)) - given)
        raise FormatError(f"missing parent lines for nodes {missing}")
    try:
        return TreePoset.from_parents(parents)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_poset(poset: TreePoset) -> str:
    lines = [f"nodes={poset.node_count}"]
    lines.extend(f"parent({i})={p}" for i, p in enumerate(poset.parent) if p is not None)
    return "\n".join(lines) + "\n"


def _kv(body: str, keys: tuple, shorthand: str) -> dict:
    out = {}
    for part in body.split(","):
        if "=" not in part:
            raise FormatError(f"bad shorthand {shorthand!r}: expected key=value pairs")
        key, val = (s.strip() for s in part.split("=", 1))
        if key not in keys or key in out:
            raise FormatError(f"bad shorthand {shorthand!r}: unexpected key {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise FormatError(f"bad shorthand {shorthand!r}: {key} is not an integer") from None
    if set(out) != set(keys):
        raise FormatError(f"bad shorthand {shorthand!r}: need keys {', '.join(keys)}")
    return out


def parse_poset_shorthand(text: str) -> TreePoset:
    """``chain:<k>`` or ``tree:h=<h>,c=<c>``."""
    kind, _, body = text.strip().partition(":")
    try:
        if kind == "chain":
            return build_chain_poset(int(body))
        if kind == "tree":
            kv = _kv(body, ("h", "c"), text)
            return build_complete_tree_poset(kv["h"], kv["c"])
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"bad poset shorthand {text!r}: {exc}") from None
    raise FormatError(f"unknown poset shorthand {text!r}")


_CONSTRUCTIONS = {
    "level": (("n", "i"), lambda a: cons.level(a["n"], a["i"])),
    "band": (("n", "lo", "hi"), lambda a: cons.band(cons.BandSpec(a["n"], a["lo"], a["hi"]))),
    "low": (("n", "l"), lambda a: cons.low_levels(a["n"], a["l"])),
    "high": (("n", "l"), lambda a: cons.high_levels(a["n"], a["l"])),
    "midband": (("n", "k", "lp"), lambda a: cons.midband(a["n"], a["k"], a["lp"])),
}


def parse_construction(text: str) -> SetFamily:
    """``level:n=..,i=..``, ``band:n=..,lo=..,hi=..``, ``low:n=..,l=..``, ``high:n=..,l=..``
    or ``midband:n=..,k=..,lp=..``."""
    kind, _, body = text.strip().partition(":")
    if kind not in _CONSTRUCTIONS:
        raise FormatError(f"unknown construction {text!r}")
    keys, build = _CONSTRUCTIONS[kind]
    args = _kv(body, keys, text)
    try:
        return build(args)
    except ValueError as exc:
        raise FormatError(f"bad construction {text!r}: {exc}") from None
