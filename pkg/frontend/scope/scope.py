from __future__ import annotations

from enum import Enum, auto, unique
from typing import Any, Optional

from frontend.symbol.symbol import Symbol
from frontend.symbol.tablesymbol import TableSymbol
from frontend.symbol.valuesymbol import ValueSymbol

"""
A scope stores the mapping from keys to symbols of one table. There are three kinds:
    root scope: the top level of the document
    table scope: a nested table, reached through a key
    element scope: a table written as an array element
"""


@unique
class ScopeKind(Enum):
    ROOT = auto()
    TABLE = auto()
    ELEMENT = auto()


class Scope:
    def __init__(self, kind: ScopeKind, path: str = "") -> None:
        self.kind = kind
        self.path = path
        self.symbols: dict[str, Symbol] = {}

    # To check if a key is bound in the scope.
    def containsKey(self, key: str) -> bool:
        return key in self.symbols

    # To get a symbol via its key.
    def get(self, key: str) -> Symbol:
        return self.symbols[key]

    # To bind a symbol, replacing any previous binding of the key.
    def declare(self, symbol: Symbol) -> None:
        self.symbols[symbol.name] = symbol
        symbol.setDomain(self)

    def isRootScope(self) -> bool:
        return self.kind == ScopeKind.ROOT

    # To get a symbol if declared in the scope
    def lookup(self, name: str) -> Optional[Symbol]:
        if self.containsKey(name):
            return self.get(name)
        return None

    def child_path(self, name: str) -> str:
        return "%s.%s" % (self.path, name) if self.path else name

    def to_dict(self) -> dict[str, Any]:
        return {
            name: sym.scope.to_dict() if isinstance(sym, TableSymbol) else sym.value
            for name, sym in self.symbols.items()
        }

    @classmethod
    def from_dict(cls, tree: dict[str, Any], kind: ScopeKind = ScopeKind.ROOT, path: str = "") -> Scope:
        scope = cls(kind, path)
        for name, value in tree.items():
            if isinstance(value, dict):
                sub = cls.from_dict(value, ScopeKind.TABLE, scope.child_path(name))
                scope.declare(TableSymbol(name, sub))
            else:
                scope.declare(ValueSymbol(name, value))
        return scope
