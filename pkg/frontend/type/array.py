from __future__ import annotations

from typing import Any, Optional

from utils.error import ConfigTypeError, ConfigValueError

from .type import ConfigType

"""
Array type: every element has the same element type; the length may be bounded below.
"""


class ArrayType(ConfigType):
    def __init__(self, base: ConfigType, min_length: int = 0) -> None:
        super().__init__()
        self.base = base
        self.min_length = min_length

    def is_array(self):
        return True

    @property
    def indexed(self) -> Optional[ConfigType]:
        return self.base

    def check(self, value: Any, path: str, typer) -> list[Any]:
        if not isinstance(value, (list, tuple)):
            raise ConfigTypeError(path, str(self), value)
        if len(value) < self.min_length:
            raise ConfigValueError(path, "needs at least %d elements" % self.min_length)
        return [self.base.check(v, "%s[%d]" % (path, i), typer) for i, v in enumerate(value)]

    def __eq__(self, o: object) -> bool:
        return isinstance(o, ArrayType) and o.base == self.base

    def __str__(self) -> str:
        return f"{self.base}[]"
