"""Reader and writer for the derivation s-expression format.

A node is ``(RULE "sequent text" child*)``.  The reader returns nested
``(rule, sequent_text, children)`` tuples and leaves sequent parsing to the
caller, so the same format serves natural-deduction and atomic derivations.
"""

from __future__ import annotations

import re

from .syntax import ParseError

_TOK = re.compile(r'\s*(?:(?P<open>\()|(?P<close>\))|"(?P<str>[^"]*)"|(?P<sym>[^\s()"]+))')

Node = tuple  # (rule: str, sequent: str, children: list[Node])


def _tokens(text: str):
    pos = 0
    while True:
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip():
                raise ParseError("malformed s-expression", text, pos + len(rest) - len(rest.lstrip()))
            return
        kind = m.lastgroup
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()


def read(text: str) -> Node:
    toks = list(_tokens(text))
    i = 0

    def node():
        nonlocal i
        if i >= len(toks) or toks[i][0] != "open":
            raise ParseError("expected '('", text, toks[i][2] if i < len(toks) else len(text))
        i += 1
        if i >= len(toks) or toks[i][0] != "sym":
            raise ParseError("expected rule name", text, toks[i][2] if i < len(toks) else len(text))
        rule = toks[i][1]
        i += 1
        if i >= len(toks) or toks[i][0] != "str":
            raise ParseError("expected quoted sequent", text, toks[i][2] if i < len(toks) else len(text))
        seq = toks[i][1]
        i += 1
        children = []
        while i < len(toks) and toks[i][0] == "open":
            children.append(node())
        if i >= len(toks) or toks[i][0] != "close":
            raise ParseError("expected ')'", text, toks[i][2] if i < len(toks) else len(text))
        i += 1
        return (rule, seq, children)

    root = node()
    if i != len(toks):
        raise ParseError("trailing input after derivation", text, toks[i][2])
    return root


def write(rule: str, seq: str, children: list[str], indent: int = 0, pretty: bool = True) -> str:
    """Render one node whose children are already rendered at ``indent + 1``."""
    head = f'({rule} "{seq}"'
    if not children:
        return head + ")"
    if not pretty:
        return head + " " + " ".join(children) + ")"
    pad = "\n" + "  " * (indent + 1)
    return head + "".join(pad + c for c in children) + ")"
