from .symbol import *

"""
Table symbol: a key bound to a nested table, which owns its own scope.
"""


class TableSymbol(Symbol):
    def __init__(self, name: str, scope, lineno: int = 0, origin: str = "file") -> None:
        super().__init__(name, lineno, origin)
        self.scope = scope

    def __str__(self) -> str:
        return "table %s" % self.name

    @property
    def isTable(self) -> bool:
        return True
