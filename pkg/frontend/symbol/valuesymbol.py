from typing import Any

from .symbol import *

"""
Value symbol: a key bound to a scalar or an array.
"""


class ValueSymbol(Symbol):
    def __init__(self, name: str, value: Any, lineno: int = 0, origin: str = "file") -> None:
        super().__init__(name, lineno, origin)
        self.value = value

    def __str__(self) -> str:
        return "value %s = %r" % (self.name, self.value)
