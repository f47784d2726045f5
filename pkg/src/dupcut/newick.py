"""Newick reader producing nested tuples.

A leaf is its name (``str``); an internal node is a tuple of children.
Branch lengths, internal node names and ``[...]`` comments are skipped.
The parser is iterative so caterpillars with thousands of leaves are fine.
"""

from __future__ import annotations

import re

_NAME = re.compile(r"[A-Za-z0-9_.\-]+")
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class NewickError(ValueError):
    """Malformed Newick input; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.reason = message
        self.position = position


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        text, n = self.text, len(self.text)
        while self.pos < n:
            c = text[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "[":
                end = text.find("]", self.pos + 1)
                if end < 0:
                    raise NewickError("unterminated comment", self.pos)
                self.pos = end + 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def name(self) -> str | None:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if m is None:
            return None
        self.pos = m.end()
        return m.group()

    def branch_length(self) -> None:
        if self.peek() != ":":
            return
        self.pos += 1
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if m is None:
            raise NewickError("expected a number after ':'", self.pos)
        self.pos = m.end()


def _subtree(sc: _Scanner, binary: bool):
    # stack entries: (position of '(', children collected so far)
    stack: list[tuple[int, list]] = []
    while True:
        c = sc.peek()
        if c == "(":
            stack.append((sc.pos, []))
            sc.pos += 1
            continue
        start = sc.pos
        node = sc.name()
        if node is None:
            what = repr(c) if c else "end of input"
            raise NewickError(f"expected a leaf name, found {what}", start)
        sc.branch_length()
        while True:
            if not stack:
                return node
            c = sc.peek()
            if c == ",":
                stack[-1][1].append(node)
                sc.pos += 1
                break
            if c == ")":
                open_pos, children = stack.pop()
                children.append(node)
                sc.pos += 1
                if binary and len(children) != 2:
                    raise NewickError(
                        f"non-binary gene-tree vertex with {len(children)} children",
                        open_pos,
                    )
                if len(children) < 2:
                    raise NewickError("internal vertex with a single child", open_pos)
                sc.name()
                sc.branch_length()
                node = tuple(children)
                continue
            what = repr(c) if c else "end of input"
            raise NewickError(f"expected ',' or ')', found {what}", sc.pos)


def parse_trees(text: str, binary: bool = True) -> list:
    """Parse every ``;``-terminated tree in ``text``."""
    sc = _Scanner(text)
    trees = []
    while sc.peek():
        tree = _subtree(sc, binary)
        if sc.peek() != ";":
            raise NewickError("expected ';'", sc.pos)
        sc.pos += 1
        trees.append(tree)
    if not trees:
        raise NewickError("empty input", 0)
    return trees


def to_newick(nested) -> str:
    """Serialize a nested tuple tree, children in stored order."""
    parts: list[str] = []
    # pending subtrees and punctuation, popped in output order
    stack: list = [nested]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif isinstance(item, _Token):
            parts.append(item.text)
        else:
            stack.append(_CLOSE)
            for i, child in enumerate(reversed(item)):
                if i:
                    stack.append(_COMMA)
                stack.append(child)
            stack.append(_OPEN)
    return "".join(parts) + ";"


class _Token:
    __slots__ = ("text",)

    def __init__(self, text: str):
        self.text = text


_OPEN, _CLOSE, _COMMA = _Token("("), _Token(")"), _Token(",")
