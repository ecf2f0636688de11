"""
Module that lists out all lex tokens of the experiment-config language.

A keyword is added to the `reserved` dictionary (key: the word, value: token name).
Any other token is a global variable or function named "t_" followed by the token name.
Function tokens are tried in definition order, so `Float` must precede `Integer`.
"""

import re

# Reserved words
reserved = {
    "true": "True",
    "false": "False",
}

t_Semi = ";"
t_Comma = ","
t_Dot = "."
t_Assign = "="

t_LBrace = "{"
t_RBrace = "}"
t_LBracket = "["
t_RBracket = "]"


def t_Float(t):
    r"[-+]?(?:(?:[0-9]+\.[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?|[0-9]+[eE][-+]?[0-9]+)"
    t.value = float(t.value)
    return t


def t_Integer(t):
    r"[-+]?[0-9]+"
    t.value = int(t.value)
    return t


def t_String(t):
    r'"(?:[^"\\\n]|\\.)*"'
    t.value = re.sub(r"\\(.)", r"\1", t.value[1:-1])
    return t


def t_Identifier(t):
    r"[a-zA-Z_][0-9a-zA-Z_]*"
    t.type = reserved.get(t.value, "Identifier")
    return t


# String patterns that should be ignored by the lexer.
t_ignore_Newline = r"(?:\r\n?|\n)"

t_ignore_Whitespace = r"[ \t]+"
t_ignore_LineComment = r"\#[^\r\n]*"


# Collection of all tokens.
tokens = tuple(
    name.removeprefix("t_")
    for name in globals()
    if name.startswith("t_") and not name.startswith("t_ignore_")
) + tuple(reserved.values())


def _escape():
    import re

    token_dict = globals()
    for name in tokens:
        name = f"t_{name}"
        original = token_dict.get(name, name)
        if isinstance(original, str):
            token_dict[name] = re.escape(original)


_escape()
