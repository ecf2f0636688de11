"""
Module that defines the config parser using `ply.yacc`.
Each "p_" function carries its grammar rule(s) in its docstring and builds the AST.

    document : entries
    entry    : keypath = value [;]  |  keypath { entries } [;]
    value    : table | array | scalar
"""


import ply.yacc as yacc

from frontend.ast.tree import *
from frontend.lexer import lex
from utils.error import ConfigSyntaxError

tokens = lex.tokens
error_stack = list[ConfigSyntaxError]()


def p_empty(p: yacc.YaccProduction):
    """
    empty :
    """
    pass


def p_document(p):
    """
    document : entries
    """
    p[0] = Document(*p[1])


def p_entries(p):
    """
    entries : entries entry
    """
    p[1].append(p[2])
    p[0] = p[1]


def p_entries_empty(p):
    """
    entries : empty
    """
    p[0] = []


def p_entry_assign(p):
    """
    entry : keypath Assign value opt_semi
    """
    p[0] = Entry(p[1], p[3])
    p[0].lineno = p[1].lineno


def p_entry_block(p):
    """
    entry : keypath table opt_semi
    """
    p[0] = Entry(p[1], p[2])
    p[0].lineno = p[1].lineno


def p_opt_semi(p):
    """
    opt_semi : Semi
        | empty
    """
    pass


def p_keypath(p):
    """
    keypath : Identifier
    """
    p[0] = KeyPath(p[1].value)
    p[0].lineno = p.lineno(1)


def p_keypath_dotted(p):
    """
    keypath : keypath Dot Identifier
    """
    p[1].parts.append(p[3].value)
    p[0] = p[1]


def p_value(p):
    """
    value : table
        | array
        | scalar
    """
    p[0] = p[1]


def p_table(p):
    """
    table : LBrace entries RBrace
    """
    p[0] = Table(*p[2])
    p[0].lineno = p.lineno(1)


def p_array_empty(p):
    """
    array : LBracket RBracket
    """
    p[0] = Array()
    p[0].lineno = p.lineno(1)


def p_array(p):
    """
    array : LBracket values opt_comma RBracket
    """
    p[0] = Array(*p[2])
    p[0].lineno = p.lineno(1)


def p_values(p):
    """
    values : value
    """
    p[0] = [p[1]]


def p_values_more(p):
    """
    values : values Comma value
    """
    p[1].append(p[3])
    p[0] = p[1]


def p_opt_comma(p):
    """
    opt_comma : Comma
        | empty
    """
    pass


def p_scalar(p):
    """
    scalar : Integer
        | Float
        | String
        | True
        | False
        | Identifier
    """
    p[0] = p[1]
    p[0].lineno = p.lineno(1)


def p_error(t):
    if not t:
        error_stack.append(ConfigSyntaxError(t, "unexpected end of input"))
        return

    inp = t.lexer.lexdata
    error_stack.append(ConfigSyntaxError(t, f", unexpected {t.type}\n{inp.splitlines()[t.lineno - 1]}"))

    parser.errok()
    return parser.token()


parser = yacc.yacc(start="document", debug=False, write_tables=False)
parser.error_stack = error_stack  # type: ignore
