import json
from typing import Any, Optional, Protocol, cast

from frontend.ast.tree import Document
from frontend.lexer import Lexer, lexer, reset
from utils.error import ConfigDuplicateKeyError, ConfigParseError, ConfigSyntaxError, ConfigTypeError

from .ply_parser import parser as _parser


class Parser(Protocol):
    def __init__(self) -> None:
        self.error_stack: list[ConfigSyntaxError]

    def parse(self, input: str, lexer: Optional[Lexer] = None) -> Document:
        ...


parser = cast(Parser, _parser)


def parse_config(text: str) -> Document:
    """Lex and parse a config document; every lex and syntax error is reported together."""
    reset(lexer)
    parser.error_stack.clear()
    doc = parser.parse(text, lexer=lexer)
    errors = [*lexer.error_stack, *parser.error_stack]
    if errors:
        raise ConfigParseError(errors)
    return doc


def _no_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    d: dict[str, Any] = {}
    for k, v in pairs:
        if k in d:
            raise ConfigDuplicateKeyError(k)
        d[k] = v
    return d


def parse_json(text: str) -> dict[str, Any]:
    """The JSON form of a config: one object, nested objects for tables."""
    try:
        tree = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise ConfigParseError([ConfigSyntaxError(None, "%s (line %d, column %d)" % (e.msg, e.lineno, e.colno))]) from None
    if not isinstance(tree, dict):
        raise ConfigTypeError("<document>", "a JSON object", tree)
    return tree


__all__ = [
    "parser",
    "parse_config",
    "parse_json",
]
