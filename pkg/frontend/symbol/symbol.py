from __future__ import annotations

from abc import ABC, abstractmethod

"""
A symbol is created when a key is bound in a table of the config.

Symbols are stored in the scope of the table that holds them. A key binds either a
value (scalar or array) or a nested table.
"""


class Symbol(ABC):
    def __init__(self, name: str, lineno: int = 0, origin: str = "file") -> None:
        self.name = name
        self.lineno = lineno
        # "file" for keys from the config document, "override" for command-line keys
        self.origin = origin

    @abstractmethod
    def __str__(self) -> str:
        raise NotImplementedError()

    # To set which scope is this symbol belonged to.
    def setDomain(self, scope) -> None:
        self.definedIn = scope

    # To get which scope is this symbol defined in.
    @property
    def domain(self):
        return self.definedIn

    @property
    def path(self) -> str:
        return self.definedIn.child_path(self.name)

    # To check if this is a table symbol.
    @property
    def isTable(self) -> bool:
        return False
