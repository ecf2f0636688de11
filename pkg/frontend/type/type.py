from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from frontend.typecheck.typer import Typer

"""
There are three kinds of config types:
    built-in types: int, float, bool, str (and string enumerations)
    array types: homogeneous arrays of one element type
    table types: fixed sets of named fields, optionally selected by a `kind` tag
"""


class ConfigType(ABC):
    def is_base(self):
        return False

    def is_array(self):
        return False

    def is_table(self):
        return False

    @abstractmethod
    def check(self, value: Any, path: str, typer: Typer) -> Any:
        """Validate `value` found at `path` and return it coerced to this type."""
        raise NotImplementedError

    @abstractmethod
    def __str__(self) -> str:
        raise NotImplementedError
