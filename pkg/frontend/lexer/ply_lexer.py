"""
Module that defines the config lexer using `ply.lex`.
Literal tokens carry AST leaf nodes as their values.
"""

from functools import wraps
from typing import List

import ply.lex as lex

from frontend.ast import tree
from utils.error import ConfigLexError

from .lex import *

error_stack: List[ConfigLexError] = []


@lex.TOKEN(t_ignore_Newline)
def t_ANY_Newline(t):
    t.lexer.lineno += 1


def t_ANY_error(t):
    error_stack.append(ConfigLexError(t))
    t.lexer.skip(1)


def _float_into_node(f):
    @wraps(f)
    def wrapped(t):
        t = f(t)
        t.value = tree.FloatLiteral(t.value)
        return t

    return wrapped


t_Float = _float_into_node(t_Float)


def _intlit_into_node(f):
    @wraps(f)
    def wrapped(t):
        t = f(t)
        t.value = tree.IntLiteral(t.value)
        return t

    return wrapped


t_Integer = _intlit_into_node(t_Integer)


def _string_into_node(f):
    @wraps(f)
    def wrapped(t):
        t = f(t)
        t.value = tree.StringLiteral(t.value)
        return t

    return wrapped


t_String = _string_into_node(t_String)


def _identifier_into_node(f):
    # true/false come through here as reserved words
    @wraps(f)
    def wrapped(t):
        t = f(t)
        if t.type == "Identifier":
            t.value = tree.Identifier(t.value)
        else:
            t.value = tree.BoolLiteral(t.type == "True")
        return t

    return wrapped


t_Identifier = _identifier_into_node(t_Identifier)

lexer = lex.lex()
lexer.error_stack = error_stack  # type: ignore
