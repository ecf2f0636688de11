from typing import Any, Iterable, Optional

from frontend.type import ConfigType
from utils.error import ConfigMissingKeyError, ConfigUnknownKeyError

from .schema import EXPERIMENT

"""
The typer phase: check the key tree against the schema.

Scalars are coerced and defaults filled. Unknown keys anywhere in the tree are
collected and reported together, ahead of missing required keys, so a typo never
hides behind a silent default.
"""


class Typer:
    def __init__(self, schema: Optional[ConfigType] = None) -> None:
        self.schema = EXPERIMENT if schema is None else schema
        self._unknown: list[str] = []
        self._missing: list[str] = []

    # Entry of this phase
    def transform(self, tree: dict[str, Any]) -> dict[str, Any]:
        self._unknown, self._missing = [], []
        resolved = self.schema.check(tree, "", self)
        if self._unknown:
            raise ConfigUnknownKeyError(self._unknown)
        if self._missing:
            raise ConfigMissingKeyError(self._missing[0])
        return resolved

    def unknown(self, paths: Iterable[str]) -> None:
        self._unknown.extend(paths)

    def missing(self, path: str) -> None:
        self._missing.append(path)
