"""
Expressions polynomiales : lexer, arbre syntaxique, parseur de Pratt et
impression canonique.

Le même lexer sert aux instructions de session (cli.parser) ; les positions
(ligne, colonne) sont conservées pour les messages d'erreur.
"""

import re
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Union

from .exceptions import ParseError

logger = logging.getLogger(__name__)

# ==================== TOKENS ====================

TOKEN_SPEC = [
    ('COMMENT', r'#[^\n]*'),
    ('NEWLINE', r'\n'),
    ('SKIP', r'[ \t\r]+'),
    ('NUMBER', r'\d+'),
    ('IDENT', r'[A-Za-z_][A-Za-z0-9_]*'),
    ('OP', r'[-+*/^()\[\],;=:?<>]'),
    ('MISMATCH', r'.'),
]
TOKEN_RE = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_SPEC))


class Token(NamedTuple):
    type: str
    value: str
    line: int
    column: int
    offset: int

    @property
    def end(self) -> int:
        return self.offset + len(self.value)


def tokenize(text: str, first_line: int = 1) -> List[Token]:
    """Découpe le texte en tokens ; le dernier token est toujours EOF"""
    tokens = []
    line = first_line
    line_start = 0
    for match in TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() - line_start + 1
        if kind == 'NEWLINE':
            line += 1
            line_start = match.end()
            continue
        if kind in ('SKIP', 'COMMENT'):
            continue
        if kind == 'MISMATCH':
            raise ParseError(f"Unexpected character {value!r}", line, column, "a token")
        tokens.append(Token(kind, value, line, column, match.start()))
    column = len(text) - line_start + 1
    tokens.append(Token('EOF', '', line, column, len(text)))
    return tokens


# ==================== SYNTAX TREE ====================

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: 'Expr'


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'Expr'
    right: 'Expr'


@dataclass(frozen=True)
class Pow:
    base: 'Expr'
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]

# Puissances de liaison
BINDING = {'+': 10, '-': 10, '*': 20, '/': 20, '^': 40}
PREFIX_BINDING = 30
ATOM = 100


def precedence(node: Expr) -> int:
    if isinstance(node, BinOp):
        return BINDING[node.op]
    if isinstance(node, Neg):
        return PREFIX_BINDING
    if isinstance(node, Pow):
        return BINDING['^']
    return ATOM


# ==================== PARSER ====================

class TokenStream:
    """Curseur sur une liste de tokens, partagé avec le parseur d'instructions"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def peek(self, ahead: int = 1) -> Token:
        index = min(self.position + ahead, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.current
        if token.type != 'EOF':
            self.position += 1
        return token

    def at(self, value: str) -> bool:
        token = self.current
        return token.type in ('OP', 'IDENT') and token.value == value

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.fail(f"'{value}'")
        return self.advance()

    def expect_type(self, kind: str, description: str) -> Token:
        if self.current.type != kind:
            self.fail(description)
        return self.advance()

    def fail(self, expected: str):
        token = self.current
        found = token.value if token.type != 'EOF' else 'end of input'
        raise ParseError(f"Unexpected {found!r}", token.line, token.column, expected)


class ExpressionParser:
    """Parseur de Pratt pour les expressions polynomiales"""

    def __init__(self, stream: TokenStream):
        self.stream = stream

    def expression(self, rbp: int = 0) -> Expr:
        left = self._nud(self.stream.advance())
        while rbp < self._lbp(self.stream.current):
            left = self._led(self.stream.advance(), left)
        return left

    def _lbp(self, token: Token) -> int:
        if token.type == 'OP' and token.value in BINDING:
            return BINDING[token.value]
        return 0

    def _nud(self, token: Token) -> Expr:
        if token.type == 'NUMBER':
            return Num(int(token.value))
        if token.type == 'IDENT':
            return Var(token.value)
        if token.type == 'OP' and token.value == '-':
            return Neg(self.expression(PREFIX_BINDING))
        if token.type == 'OP' and token.value == '(':
            inner = self.expression(0)
            self.stream.expect(')')
            return inner
        found = token.value if token.type != 'EOF' else 'end of input'
        raise ParseError(f"Unexpected {found!r}", token.line, token.column, "a number, a variable, '-' or '('")

    def _led(self, token: Token, left: Expr) -> Expr:
        if token.value == '^':
            exponent = self.stream.expect_type('NUMBER', "an integer exponent")
            return Pow(left, int(exponent.value))
        return BinOp(token.value, left, self.expression(BINDING[token.value]))

    def expression_list(self, closing: str) -> List[Expr]:
        """Liste d'expressions séparées par des virgules, jusqu'au délimiteur fermant"""
        items = []
        if self.stream.at(closing):
            self.stream.advance()
            return items
        while True:
            items.append(self.expression(0))
            if self.stream.at(','):
                self.stream.advance()
                continue
            self.stream.expect(closing)
            return items


def parse_expression(text: str) -> Expr:
    """Analyse un polynôme isolé, par exemple 'x^2 + y^2 - 1'"""
    stream = TokenStream(tokenize(text))
    node = ExpressionParser(stream).expression(0)
    if stream.current.type != 'EOF':
        stream.fail("end of expression")
    return node


# ==================== PRINTER ====================

def print_expression(node: Expr) -> str:
    """Impression avec le minimum de parenthèses ; parse(print(e)) == e"""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = print_expression(node.operand)
        if precedence(node.operand) < PREFIX_BINDING:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = print_expression(node.base)
        if precedence(node.base) < ATOM:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    strength = BINDING[node.op]
    left = print_expression(node.left)
    if precedence(node.left) < strength:
        left = f"({left})"
    right = print_expression(node.right)
    if precedence(node.right) <= strength:
        right = f"({right})"
    if node.op in ('+', '-'):
        return f"{left} {node.op} {right}"
    return f"{left}{node.op}{right}"


def variables_of(node: Expr) -> Iterator[str]:
    if isinstance(node, Var):
        yield node.name
    elif isinstance(node, Neg):
        yield from variables_of(node.operand)
    elif isinstance(node, Pow):
        yield from variables_of(node.base)
    elif isinstance(node, BinOp):
        yield from variables_of(node.left)
        yield from variables_of(node.right)


# ==================== EVALUATION ====================

def evaluate(node: Expr, ring) -> 'RingElement':
    """Évalue l'arbre dans un PresentedRing ; renvoie un RingElement"""
    if isinstance(node, Num):
        return ring(node.value)
    if isinstance(node, Var):
        return ring.var(node.name)
    if isinstance(node, Neg):
        return -evaluate(node.operand, ring)
    if isinstance(node, Pow):
        return evaluate(node.base, ring) ** node.exponent
    left = evaluate(node.left, ring)
    right = evaluate(node.right, ring)
    if node.op == '+':
        return left + right
    if node.op == '-':
        return left - right
    if node.op == '*':
        return left * right
    divisor: Optional[Fraction] = right.constant_value()
    if divisor is None or divisor == 0:
        raise ParseError(f"Division by a non-constant or zero expression: {print_expression(node.right)}")
    return left * ring(1 / divisor)
