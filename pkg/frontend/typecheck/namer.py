from __future__ import annotations

from typing import Any, Iterable, Sequence, Union

from frontend.ast.tree import *
from frontend.ast.visitor import Visitor
from frontend.parser import parse_config
from frontend.scope.scope import Scope, ScopeKind
from frontend.scope.scopestack import ScopeStack
from frontend.symbol.tablesymbol import TableSymbol
from frontend.symbol.valuesymbol import ValueSymbol
from utils.error import ConfigDuplicateKeyError, ConfigParseError

"""
The namer phase: fold dotted keys and nested blocks of the document into one key tree
(a tree of scopes), rejecting any key bound twice. Overrides are applied last and are
allowed to rebind keys.

The result is a plain nested dict; values are Python scalars and lists.
"""


class Namer(Visitor[ScopeStack, Any]):
    def __init__(self) -> None:
        self.overriding = False

    # Entry of this phase
    def transform(self, source: Union[Document, dict], overrides: Sequence[Entry] = ()) -> dict[str, Any]:
        if isinstance(source, Document):
            root = Scope(ScopeKind.ROOT)
            ctx = ScopeStack(root)
            source.accept(self, ctx)
        else:
            root = Scope.from_dict(source)
            ctx = ScopeStack(root)

        self.overriding = True
        for entry in overrides:
            entry.accept(self, ctx)
        self.overriding = False
        return root.to_dict()

    def visitDocument(self, doc: Document, ctx: ScopeStack) -> None:
        for entry in doc:
            entry.accept(self, ctx)

    def _open(self, name: str, lineno: int, ctx: ScopeStack) -> None:
        # enter the table bound to `name`, creating it when absent
        scope = ctx.top()
        sym = scope.lookup(name)
        if sym is None or (not sym.isTable and self.overriding):
            sym = TableSymbol(name, Scope(ScopeKind.TABLE, scope.child_path(name)), lineno, self._origin())
            scope.declare(sym)
        elif not sym.isTable:
            raise ConfigDuplicateKeyError(scope.child_path(name))
        ctx.push(sym.scope)

    def _origin(self) -> str:
        return "override" if self.overriding else "file"

    def visitEntry(self, entry: Entry, ctx: ScopeStack) -> None:
        depth = ctx.depth()
        *heads, last = entry.key.parts
        for name in heads:
            self._open(name, entry.lineno, ctx)

        if isinstance(entry.value, Table):
            if self.overriding:
                # an override table replaces what was there
                ctx.top().declare(
                    TableSymbol(last, Scope(ScopeKind.TABLE, ctx.top().child_path(last)), entry.lineno, "override")
                )
            self._open(last, entry.lineno, ctx)
            for child in entry.value:
                child.accept(self, ctx)
        else:
            scope = ctx.top()
            if scope.containsKey(last) and not self.overriding:
                raise ConfigDuplicateKeyError(scope.child_path(last))
            ctx.key = scope.child_path(last)
            value = entry.value.accept(self, ctx)
            scope.declare(ValueSymbol(last, value, entry.lineno, self._origin()))

        ctx.unwind(depth)

    def visitTable(self, table: Table, ctx: ScopeStack) -> dict[str, Any]:
        # only reached for tables written as array elements
        scope = Scope(ScopeKind.ELEMENT, ctx.key or "")
        inner = ScopeStack(scope)
        overriding, self.overriding = self.overriding, False
        for child in table:
            child.accept(self, inner)
        self.overriding = overriding
        return scope.to_dict()

    def visitArray(self, array: Array, ctx: ScopeStack) -> list[Any]:
        key = ctx.key
        values = []
        for i, child in enumerate(array):
            ctx.key = "%s[%d]" % (key, i)
            values.append(child.accept(self, ctx))
        ctx.key = key
        return values

    def visitIntLiteral(self, lit: IntLiteral, ctx: ScopeStack) -> int:
        return lit.value

    def visitFloatLiteral(self, lit: FloatLiteral, ctx: ScopeStack) -> float:
        return lit.value

    def visitStringLiteral(self, lit: StringLiteral, ctx: ScopeStack) -> str:
        return lit.value

    def visitBoolLiteral(self, lit: BoolLiteral, ctx: ScopeStack) -> bool:
        return lit.value

    def visitIdentifier(self, ident: Identifier, ctx: ScopeStack) -> str:
        return ident.value


def parse_override(key: str, text: str) -> Entry:
    """
    Turn `--a.b.c VALUE` into an entry. VALUE is read with the config grammar; text the
    grammar rejects (paths, for instance) is taken as a plain string.
    """
    try:
        doc = parse_config("%s = %s" % (key, text))
    except ConfigParseError:
        doc = None
    if doc is not None and len(doc) == 1:
        return doc[0]
    return Entry(KeyPath(*key.split(".")), StringLiteral(text))


def parse_overrides(pairs: Iterable[tuple[str, str]]) -> list[Entry]:
    return [parse_override(k, v) for k, v in pairs]
