from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from utils.error import ConfigTypeError

from .type import ConfigType

"""
Table types.

`TableType` has a fixed set of fields. A field is required, optional (absent reads as
None) or defaulted. `VariantType` is a table `{ kind = ...; params { ... } }` whose
params table depends on the kind.
"""

REQUIRED = object()


@dataclass(frozen=True)
class Field:
    type: ConfigType
    default: Any = REQUIRED

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


def opt(t: ConfigType) -> Field:
    return Field(t, None)


class TableType(ConfigType):
    def __init__(self, name: str, fields: Mapping[str, Field]) -> None:
        super().__init__()
        self.name = name
        self.fields = dict(fields)

    def is_table(self):
        return True

    def check(self, value: Any, path: str, typer) -> dict[str, Any]:
        if value is None:
            value = {}
        if not isinstance(value, Mapping):
            raise ConfigTypeError(path, str(self), value)
        sub = lambda k: "%s.%s" % (path, k) if path else k
        typer.unknown(sub(k) for k in value if k not in self.fields)
        out: dict[str, Any] = {}
        for name, field in self.fields.items():
            if name in value and value[name] is not None:
                out[name] = field.type.check(value[name], sub(name), typer)
            elif field.required:
                typer.missing(sub(name))
                out[name] = None
            elif field.default is not None and not field.type.is_base():
                out[name] = field.type.check(field.default, sub(name), typer)
            else:
                out[name] = field.default
        return out

    def __str__(self) -> str:
        return "table " + self.name


class VariantType(ConfigType):
    def __init__(self, name: str, variants: Mapping[str, TableType], default_kind: Any = None) -> None:
        super().__init__()
        self.name = name
        self.variants = dict(variants)
        self.default_kind = default_kind

    def is_table(self):
        return True

    def check(self, value: Any, path: str, typer) -> dict[str, Any]:
        if not isinstance(value, Mapping):
            raise ConfigTypeError(path, str(self), value)
        sub = lambda k: "%s.%s" % (path, k) if path else k
        typer.unknown(sub(k) for k in value if k not in ("kind", "params"))
        kind = value.get("kind", self.default_kind)
        if kind is None:
            typer.missing(sub("kind"))
            return {"kind": None, "params": {}}
        if kind not in self.variants:
            raise ConfigTypeError(sub("kind"), "one of " + "|".join(self.variants), kind)
        params = self.variants[kind].check(value.get("params"), sub("params"), typer)
        return {"kind": kind, "params": params}

    def __str__(self) -> str:
        return "%s {kind: %s}" % (self.name, "|".join(self.variants))
