"""
Symbol DSL: text <-> expression tree.

    symbol := term (("+"|"-") term)* ;
    term   := factor ("*" factor)* ;
    factor := base ("^" natural)? ;
    base   := "z" | complex | "(" symbol ")"
            | "blaschke" "[" complex ("," complex)* "]"
            | "compose" "(" symbol "," symbol ")" ;

Complex literals are ``a``, ``ai``, ``a+bi`` or ``a-bi`` with decimal reals.
"""

import logging

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from .exceptions import SymbolSyntaxError
from .symbolcore import (
    DEFAULT_ORDER, Add, Blaschke, Compose, Lit, Mul, Power, Sub, Var, format_complex, lower,
)

logger = logging.getLogger(__name__)

_DEC = r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'

GRAMMAR = r"""
?symbol: term
       | symbol "+" term   -> add
       | symbol "-" term   -> sub

?term: factor
     | term "*" factor     -> mul

?factor: base
       | base "^" NATURAL  -> power

?base: "z"                                  -> var
     | COMPLEX                              -> literal
     | "(" symbol ")"
     | "blaschke" "[" COMPLEX ("," COMPLEX)* "]"  -> blaschke
     | "compose" "(" symbol "," symbol ")"  -> compose

NATURAL: /\d+/
COMPLEX: /[+-]?DEC[+-]DECi|[+-]?DECi|[+-]?DEC/

%import common.WS
%ignore WS
""".replace('DEC', _DEC)

_parser = Lark(GRAMMAR, start='symbol', parser='lalr')


def parse_complex(text):
    """Parse ``a``, ``ai``, ``a+bi`` or ``a-bi``"""
    if not text.endswith('i'):
        return complex(float(text), 0.0)
    body = text[:-1]
    for position in range(len(body) - 1, 0, -1):
        if body[position] in '+-' and body[position - 1] not in 'eE':
            return complex(float(body[:position]), float(body[position:]))
    return complex(0.0, float(body))


@v_args(inline=True)
class _SymbolBuilder(Transformer):

    def var(self):
        return Var()

    def literal(self, token):
        return Lit(parse_complex(str(token)))

    def add(self, left, right):
        return Add(left, right)

    def sub(self, left, right):
        return Sub(left, right)

    def mul(self, left, right):
        return Mul(left, right)

    def power(self, base, exponent):
        return Power(base, int(exponent))

    def compose(self, outer, inner):
        return Compose(outer, inner)

    def blaschke(self, *tokens):
        zeros = []
        for token in tokens:
            a = parse_complex(str(token))
            if abs(a) >= 1:
                raise SymbolSyntaxError(f"Blaschke zero {token} is not inside the unit disk", token.column)
            zeros.append(a)
        return Blaschke(tuple(zeros))


def parse_symbol(text):
    """Parse symbol DSL text into an expression tree"""
    try:
        tree = _parser.parse(text)
        return _SymbolBuilder().transform(tree)
    except VisitError as err:
        raise err.orig_exc from None
    except UnexpectedEOF:
        raise SymbolSyntaxError("unexpected end of input", len(text) + 1) from None
    except UnexpectedInput as err:
        column = getattr(err, 'column', -1)
        at_end = isinstance(err, UnexpectedToken) and err.token.type == '$END'
        position = len(text) + 1 if at_end or column < 1 else column
        logger.debug("parse failure in %r: %s", text, err)
        raise SymbolSyntaxError("unexpected input", position) from None


def render(expr):
    """Fully parenthesized DSL text; parse(render(e)) == e"""
    if isinstance(expr, Var):
        return 'z'
    if isinstance(expr, Lit):
        return f"({format_complex(expr.value)})"
    if isinstance(expr, Add):
        return f"({render(expr.left)}+{render(expr.right)})"
    if isinstance(expr, Sub):
        return f"({render(expr.left)}-{render(expr.right)})"
    if isinstance(expr, Mul):
        return f"({render(expr.left)}*{render(expr.right)})"
    if isinstance(expr, Power):
        return f"({render(expr.base)}^{expr.exponent})"
    if isinstance(expr, Compose):
        return f"compose({render(expr.outer)},{render(expr.inner)})"
    if isinstance(expr, Blaschke):
        return f"blaschke[{','.join(format_complex(a) for a in expr.zeros)}]"
    raise TypeError(f"unknown expression node {expr!r}")


def symbol_from_text(text, N=DEFAULT_ORDER):
    """Parse and lower DSL text, labelling the symbol with the text"""
    return lower(parse_symbol(text), N).relabel(' '.join(text.split()))
