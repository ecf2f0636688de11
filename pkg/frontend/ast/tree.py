"""
Module that defines all config AST nodes.

    document    sequence of entries
    entry       key path bound to a value
    table       `{ entries }`
    array       `[ values ]`
    literals    int, float, string, bool, bare identifier
"""

from __future__ import annotations

from typing import Any, Generic, TypeVar, Union

from utils import T, U

from .node import Node
from .visitor import Visitor, accept

_T = TypeVar("_T", bound=Node)


def _index_len_err(i: int, node: Node):
    return IndexError(
        f"you are trying to index the #{i} child of node {node.name}, which has only {len(node)} children"
    )


class ListNode(Node, Generic[_T]):
    """
    Abstract node type that represents a node sequence.
    """

    def __init__(self, name: str, children: list[_T]) -> None:
        super().__init__(name)
        self.children = children

    def __getitem__(self, key: int) -> Node:
        return self.children.__getitem__(key)

    def __len__(self) -> int:
        return len(self.children)

    def accept(self, v: Visitor[T, U], ctx: T):
        ret = tuple(map(accept(v, ctx), self))
        return None if ret.count(None) == len(ret) else ret


class Document(ListNode["Entry"]):
    """
    AST root.
    """

    def __init__(self, *children: Entry) -> None:
        super().__init__("document", list(children))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitDocument(self, ctx)


class KeyPath(Node):
    """
    Dotted key such as `train.zap.enabled`.
    """

    def __init__(self, *parts: str) -> None:
        super().__init__("key")
        self.parts = list(parts)

    def __getitem__(self, key: int) -> Node:
        raise _index_len_err(key, self)

    def __len__(self) -> int:
        return 0

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitKeyPath(self, ctx)

    def __str__(self) -> str:
        return ".".join(self.parts)

    def is_leaf(self):
        return True


class Entry(Node):
    """
    AST node of `key = value` and `key { ... }`.
    """

    def __init__(self, key: KeyPath, value: Value) -> None:
        super().__init__("entry")
        self.key = key
        self.value = value

    def __getitem__(self, key: int) -> Node:
        return (self.key, self.value)[key]

    def __len__(self) -> int:
        return 2

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitEntry(self, ctx)


class Table(ListNode[Entry]):
    def __init__(self, *children: Entry) -> None:
        super().__init__("table", list(children))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitTable(self, ctx)


class Array(ListNode["Value"]):
    def __init__(self, *children: Value) -> None:
        super().__init__("array", list(children))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitArray(self, ctx)


class Literal(Node):
    """
    Abstract leaf node holding a Python scalar.
    """

    def __init__(self, name: str, value: Any) -> None:
        super().__init__(name)
        self.value = value

    def __getitem__(self, key: int) -> Node:
        raise _index_len_err(key, self)

    def __len__(self) -> int:
        return 0

    def __str__(self) -> str:
        return f"{self.name}({self.value!r})"

    def is_leaf(self):
        return True


class IntLiteral(Literal):
    def __init__(self, value: Union[int, str]) -> None:
        super().__init__("int", int(value))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitIntLiteral(self, ctx)


class FloatLiteral(Literal):
    def __init__(self, value: Union[float, str]) -> None:
        super().__init__("float", float(value))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitFloatLiteral(self, ctx)


class StringLiteral(Literal):
    def __init__(self, value: str) -> None:
        super().__init__("string", value)

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitStringLiteral(self, ctx)


class BoolLiteral(Literal):
    def __init__(self, value: bool) -> None:
        super().__init__("bool", bool(value))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitBoolLiteral(self, ctx)


class Identifier(Literal):
    """
    Bare word in value position; read as a string.
    """

    def __init__(self, value: str) -> None:
        super().__init__("identifier", value)

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitIdentifier(self, ctx)


Value = Union[Table, Array, Literal]
