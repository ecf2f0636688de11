from __future__ import annotations

from typing import Iterator, Protocol, Union

import frontend.ast.node as node
from utils.error import ConfigLexError

from . import lex
from .ply_lexer import lexer as _ply_lexer


class LexToken(Protocol):
    type: str
    value: Union[str, node.Node]
    lineno: int
    lexpos: int


class Lexer(Protocol):
    """What the config parser needs from a lexer: ply's interface plus an error stack."""

    lexdata: str
    lexpos: int
    lineno: int
    error_stack: list[ConfigLexError]

    def input(self, s: str) -> None:
        ...

    def token(self) -> LexToken:
        ...

    def __iter__(self) -> Iterator[LexToken]:
        ...


def reset(lx: Lexer) -> Lexer:
    """Forget the errors and line count of the previous document."""
    lx.error_stack.clear()
    lx.lineno = 1
    return lx


lexer: Lexer = _ply_lexer

__all__ = [
    "lexer",
    "lex",
    "reset",
    "LexToken",
    "Lexer",
]
