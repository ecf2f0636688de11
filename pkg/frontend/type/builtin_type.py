from __future__ import annotations

import math
from typing import Any

from utils.error import ConfigTypeError

from .type import ConfigType

"""
Built-in types: int, float, bool, str, and enumerations over str.

Coercions: an int field takes a float when it is integral (so `2e4` reads as 20000);
a float field takes an int. Booleans are never numbers.
"""


class BuiltinType(ConfigType):
    def __init__(self, name: str) -> None:
        super().__init__()
        self.name = name

    def is_base(self):
        return True

    def check(self, value: Any, path: str, typer) -> Any:
        if isinstance(value, bool):
            if self.name == "bool":
                return value
        elif self.name == "int":
            if isinstance(value, int):
                return value
            if isinstance(value, float) and math.isfinite(value) and value == int(value):
                return int(value)
        elif self.name == "float":
            if isinstance(value, (int, float)):
                return float(value)
        elif self.name == "str":
            if isinstance(value, str):
                return value
        raise ConfigTypeError(path, self.name, value)

    def __eq__(self, o: object) -> bool:
        return isinstance(o, BuiltinType) and self.name == o.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        return self.name


class EnumType(BuiltinType):
    def __init__(self, *choices: str) -> None:
        super().__init__("str")
        self.choices = choices

    def check(self, value: Any, path: str, typer) -> Any:
        value = super().check(value, path, typer)
        if value not in self.choices:
            raise ConfigTypeError(path, str(self), value)
        return value

    def __str__(self) -> str:
        return "one of " + "|".join(self.choices)


class UnionType(ConfigType):
    """First alternative that accepts the value wins."""

    def __init__(self, *alternatives: ConfigType) -> None:
        self.alternatives = alternatives

    def is_base(self):
        return all(t.is_base() for t in self.alternatives)

    def check(self, value: Any, path: str, typer) -> Any:
        for t in self.alternatives:
            try:
                return t.check(value, path, typer)
            except ConfigTypeError:
                continue
        raise ConfigTypeError(path, str(self), value)

    def __str__(self) -> str:
        return " or ".join(map(str, self.alternatives))


INT = BuiltinType("int")
FLOAT = BuiltinType("float")
BOOL = BuiltinType("bool")
STR = BuiltinType("str")
