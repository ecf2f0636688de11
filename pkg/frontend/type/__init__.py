from .array import ArrayType
from .builtin_type import BOOL, FLOAT, INT, STR, BuiltinType, EnumType, UnionType
from .table import REQUIRED, Field, TableType, VariantType, opt
from .type import ConfigType

__all__ = [
    "ConfigType",
    "BuiltinType",
    "EnumType",
    "UnionType",
    "ArrayType",
    "TableType",
    "VariantType",
    "Field",
    "opt",
    "REQUIRED",
    "INT",
    "FLOAT",
    "BOOL",
    "STR",
]
