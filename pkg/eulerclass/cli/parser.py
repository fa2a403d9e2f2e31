"""
Grammaire des sessions.

    ring A = QQ[x, y] / (x^2 + y^2 - 1) order lex;
    ideal I = (x, y) in A;
    point v : Q4(A) = ([x, y], [0, 0], 0);
    row r = (x, y, 1) in A;
    compose h = v * w;
    assert equal v w;

Une instruction se termine par ';' ou par la fin de sa ligne. Chaque
instruction s'imprime sous une forme canonique, et parse(print(s)) == s.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from ..exceptions import ParseError
from ..expr import Expr, ExpressionParser, Token, TokenStream, print_expression, tokenize

logger = logging.getLogger(__name__)

# ==================== STATEMENTS ====================


@dataclass(frozen=True)
class RingDecl:
    name: str
    field: str
    variables: Tuple[str, ...]
    relations: Tuple[Expr, ...] = ()
    order: Optional[str] = None


@dataclass(frozen=True)
class IdealDecl:
    name: str
    generators: Tuple[Expr, ...]
    ring: str


@dataclass(frozen=True)
class PointDecl:
    name: str
    n: int
    ring: str
    a: Tuple[Expr, ...]
    b: Tuple[Expr, ...]
    s: Expr


@dataclass(frozen=True)
class RowDecl:
    name: str
    entries: Tuple[Expr, ...]
    ring: str


@dataclass(frozen=True)
class Assertion:
    """assert equal v w ; assert valid v ; assert ideal v = J"""

    kind: str
    names: Tuple[str, ...]


# Arguments de commande


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Word:
    value: str


@dataclass(frozen=True)
class Exprs:
    items: Tuple[Expr, ...]


@dataclass(frozen=True)
class Term:
    coefficient: int
    name: str


@dataclass(frozen=True)
class Factor:
    i: int
    j: int
    coefficient: Expr


Argument = Union[Ref, Int, Word, Exprs, Term, Factor]


@dataclass(frozen=True)
class Command:
    verb: str
    outputs: Tuple[str, ...]
    args: Tuple[Argument, ...]


Statement = Union[RingDecl, IdealDecl, PointDecl, RowDecl, Assertion, Command]

KEYWORDS = ('ring', 'ideal', 'point', 'row', 'assert')
ORDER_NAMES = ('degrevlex', 'lex')
ASSERTION_KINDS = ('equal', 'valid', 'ideal')

# Forme des arguments de chaque verbe
UNARY = 'unary'          # verb OUT = NAME
CHECK = 'check'          # verb NAME
PAIR = 'pair'            # verb NAME, NAME
PRODUCT = 'product'      # verb OUT = NAME * NAME
SUM = 'sum'              # verb OUT = 2*O1 - O2
ORIENT = 'orient'        # verb OUT = NAME, [exprs]
MOVE = 'move'            # verb OUT = NAME [avoid NAME, ...]
RELATION = 'relation'    # verb OUT = lift NAME | elementary NAME (i, j, expr)
SPLIT = 'split'          # verb OUT, OUT = NAME by NAME * NAME
SIZE = 'size'            # verb OUT = INT [over FIELD]

VERBS = {
    'validate': CHECK,
    'ideal-of': UNARY,
    'orient': ORIENT,
    'segre': UNARY,
    'move': MOVE,
    'compose': PRODUCT,
    'inverse': UNARY,
    'equal?': PAIR,
    'euler-reduce': SUM,
    'segre-hom': SUM,
    'weak-class': SUM,
    'phi': UNARY,
    'relation': RELATION,
    'merge': PRODUCT,
    'split': SPLIT,
    'fold-map': SIZE,
    'jouanolou': SIZE,
}

PRODUCT_OPERATOR = {'compose': '*', 'merge': '+'}

# ==================== PARSER ====================


class StatementParser:
    """Descente récursive sur le flux de tokens partagé avec les expressions"""

    def __init__(self, tokens: List[Token]):
        self.stream = TokenStream(tokens)
        self.expressions = ExpressionParser(self.stream)

    # --- briques ---

    def name(self, description: str = "a name") -> str:
        return self.stream.expect_type('IDENT', description).value

    def integer(self, description: str = "an integer") -> int:
        return int(self.stream.expect_type('NUMBER', description).value)

    def expression(self) -> Expr:
        return self.expressions.expression(0)

    def expression_list(self, opening: str, closing: str) -> Tuple[Expr, ...]:
        self.stream.expect(opening)
        return tuple(self.expressions.expression_list(closing))

    def name_list(self) -> Tuple[str, ...]:
        names = [self.name()]
        while self.stream.at(','):
            self.stream.advance()
            names.append(self.name())
        return tuple(names)

    def verb(self) -> str:
        """Identifiants reliés par '-' sans espace, '?' final éventuel"""
        token = self.stream.expect_type('IDENT', "a keyword or a command")
        text, end = token.value, token.end
        while True:
            current, following = self.stream.current, self.stream.peek()
            if (current.value == '-' and current.offset == end
                    and following.type == 'IDENT' and following.offset == current.end):
                self.stream.advance()
                self.stream.advance()
                text += '-' + following.value
                end = following.end
                continue
            if current.value == '?' and current.offset == end:
                self.stream.advance()
                text += '?'
            return text

    # --- instructions ---

    def statement(self) -> Statement:
        head = self.stream.current
        following = self.stream.peek()
        verb_like = following.value == '-' and following.offset == head.end
        if head.type == 'IDENT' and head.value in KEYWORDS and not verb_like:
            self.stream.advance()
            result = getattr(self, f"_{head.value}")()
        else:
            result = self._command()
        if self.stream.at(';'):
            self.stream.advance()
        if self.stream.current.type != 'EOF':
            self.stream.fail("';' or end of statement")
        return result

    def _ring(self) -> RingDecl:
        name = self.name("a ring name")
        self.stream.expect('=')
        token = self.stream.expect_type('IDENT', "a field (QQ or Fp)")
        field = token.value
        if field != 'QQ' and not (field.startswith('F') and field[1:].isdigit()):
            raise ParseError(f"Unknown field {field!r}", token.line, token.column, "QQ or Fp")
        self.stream.expect('[')
        variables = self.name_list()
        self.stream.expect(']')
        relations: Tuple[Expr, ...] = ()
        if self.stream.at('/'):
            self.stream.advance()
            relations = self.expression_list('(', ')')
        order = None
        if self.stream.at('order'):
            self.stream.advance()
            token = self.stream.expect_type('IDENT', "degrevlex or lex")
            if token.value not in ORDER_NAMES:
                raise ParseError(f"Unknown monomial order {token.value!r}", token.line, token.column,
                                 "degrevlex or lex")
            order = token.value
        return RingDecl(name, field, variables, relations, order)

    def _ideal(self) -> IdealDecl:
        name = self.name("an ideal name")
        self.stream.expect('=')
        generators = self.expression_list('(', ')')
        self.stream.expect('in')
        return IdealDecl(name, generators, self.name("a ring name"))

    def _row(self) -> RowDecl:
        name = self.name("a row name")
        self.stream.expect('=')
        entries = self.expression_list('(', ')')
        self.stream.expect('in')
        return RowDecl(name, entries, self.name("a ring name"))

    def _point(self) -> PointDecl:
        name = self.name("a point name")
        self.stream.expect(':')
        token = self.stream.expect_type('IDENT', "a quadric Q2n")
        size = token.value[1:]
        if not token.value.startswith('Q') or not size.isdigit() or int(size) < 2 or int(size) % 2:
            raise ParseError(f"Unknown quadric {token.value!r}", token.line, token.column, "Q2n with n >= 1")
        self.stream.expect('(')
        ring = self.name("a ring name")
        self.stream.expect(')')
        self.stream.expect('=')
        self.stream.expect('(')
        a = self.expression_list('[', ']')
        self.stream.expect(',')
        b = self.expression_list('[', ']')
        self.stream.expect(',')
        s = self.expression()
        self.stream.expect(')')
        return PointDecl(name, int(size) // 2, ring, a, b, s)

    def _assert(self) -> Assertion:
        token = self.stream.expect_type('IDENT', "equal, valid or ideal")
        kind = token.value
        if kind not in ASSERTION_KINDS:
            raise ParseError(f"Unknown assertion {kind!r}", token.line, token.column, "equal, valid or ideal")
        if kind == 'equal':
            return Assertion(kind, (self.name(), self.name()))
        if kind == 'valid':
            return Assertion(kind, (self.name(),))
        left = self.name()
        self.stream.expect('=')
        return Assertion(kind, (left, self.name()))

    def _command(self) -> Command:
        head = self.stream.current
        verb = self.verb()
        shape = VERBS.get(verb)
        if shape is None:
            raise ParseError(f"Unknown command {verb!r}", head.line, head.column, "a command")
        if shape == CHECK:
            return Command(verb, (), (Ref(self.name()),))
        if shape == PAIR:
            left = self.name()
            self.stream.expect(',')
            return Command(verb, (), (Ref(left), Ref(self.name())))

        outputs = self.name_list() if shape == SPLIT else (self.name("an output name"),)
        self.stream.expect('=')
        return Command(verb, outputs, getattr(self, f"_args_{shape}")(verb))

    def _args_unary(self, verb):
        return (Ref(self.name()),)

    def _args_product(self, verb):
        left = self.name()
        self.stream.expect(PRODUCT_OPERATOR[verb])
        return (Ref(left), Ref(self.name()))

    def _args_orient(self, verb):
        ideal = self.name("an ideal name")
        self.stream.expect(',')
        return (Ref(ideal), Exprs(self.expression_list('[', ']')))

    def _args_move(self, verb):
        args = [Ref(self.name("a point name"))]
        if self.stream.at('avoid'):
            self.stream.advance()
            args.append(Word('avoid'))
            args.extend(Ref(n) for n in self.name_list())
        return tuple(args)

    def _args_relation(self, verb):
        token = self.stream.expect_type('IDENT', "lift or elementary")
        if token.value == 'lift':
            return (Word('lift'), Ref(self.name("a symbol name")))
        if token.value != 'elementary':
            raise ParseError(f"Unknown relation {token.value!r}", token.line, token.column, "lift or elementary")
        symbol = self.name("a symbol name")
        self.stream.expect('(')
        i = self.integer("a row index")
        self.stream.expect(',')
        j = self.integer("a column index")
        self.stream.expect(',')
        coefficient = self.expression()
        self.stream.expect(')')
        return (Word('elementary'), Ref(symbol), Factor(i, j, coefficient))

    def _args_split(self, verb):
        symbol = self.name("a symbol name")
        self.stream.expect('by')
        left = self.name("an ideal name")
        self.stream.expect('*')
        return (Ref(symbol), Ref(left), Ref(self.name("an ideal name")))

    def _args_size(self, verb):
        args = [Int(self.integer("n"))]
        if self.stream.at('over'):
            self.stream.advance()
            args.append(Word(self.name("a field")))
        return tuple(args)

    def _args_sum(self, verb):
        terms = []
        sign = 1
        if self.stream.at('-'):
            self.stream.advance()
            sign = -1
        while True:
            coefficient = 1
            if self.stream.current.type == 'NUMBER':
                coefficient = self.integer()
                self.stream.expect('*')
            terms.append(Term(sign * coefficient, self.name("a symbol name")))
            if self.stream.at('+'):
                sign = 1
            elif self.stream.at('-'):
                sign = -1
            else:
                return tuple(terms)
            self.stream.advance()


def parse_statement(text: str, first_line: int = 1) -> Statement:
    """Analyse une instruction ; ParseError porte la ligne et la colonne"""
    tokens = tokenize(text, first_line)
    if tokens[0].type == 'EOF':
        raise ParseError("Empty statement", tokens[0].line, tokens[0].column, "a statement")
    return StatementParser(tokens).statement()


# ==================== SESSION SPLITTING ====================

# Un de ces tokens en fin de ligne prolonge l'instruction
CONTINUATION = {'=', ',', '/', '+', '-', '*', '^', ':', '(', '['}


@dataclass(frozen=True)
class SourceStatement:
    text: str
    line: int
    statement: Statement


def split_statements(text: str) -> List[Tuple[str, int, int]]:
    """Découpe un fichier de session en (texte, ligne, position de début)"""
    tokens = tokenize(text)
    pieces = []
    start: Optional[Token] = None
    depth = 0
    for index, token in enumerate(tokens[:-1]):
        if start is None:
            if token.value == ';':
                continue
            start = token
        if token.value in ('(', '['):
            depth += 1
        elif token.value in (')', ']'):
            depth = max(0, depth - 1)
        following = tokens[index + 1]
        ends = token.value == ';' and depth == 0
        if not ends and depth == 0 and token.value not in CONTINUATION:
            ends = following.type == 'EOF' or following.line > token.line
        if ends:
            pieces.append((text[start.offset:token.end], start.line, start.offset))
            start = None
    if start is not None:
        pieces.append((text[start.offset:], start.line, start.offset))
    return pieces


def parse_session(text: str) -> List[SourceStatement]:
    """Toutes les instructions d'un fichier ; s'arrête à la première erreur"""
    statements = []
    for piece, line, offset in split_statements(text):
        # colonnes exactes : on recolle le début de la ligne
        padding = ' ' * (offset - (text.rfind('\n', 0, offset) + 1))
        statements.append(SourceStatement(piece, line, parse_statement(padding + piece, line)))
    logger.debug(f"parse_session: {len(statements)} statements")
    return statements


# ==================== PRINTER ====================

def _expressions(items) -> str:
    return ', '.join(print_expression(e) for e in items)


def _sum(terms) -> str:
    text = ''
    for index, term in enumerate(terms):
        magnitude = abs(term.coefficient)
        factor = f"{magnitude}*{term.name}" if magnitude != 1 else term.name
        if index == 0:
            text = f"-{factor}" if term.coefficient < 0 else factor
        else:
            text += f" - {factor}" if term.coefficient < 0 else f" + {factor}"
    return text


def _arguments(command: Command) -> str:
    shape = VERBS[command.verb]
    args = command.args
    if shape in (UNARY, CHECK):
        return args[0].name
    if shape == PAIR:
        return f"{args[0].name}, {args[1].name}"
    if shape == PRODUCT:
        return f"{args[0].name} {PRODUCT_OPERATOR[command.verb]} {args[1].name}"
    if shape == ORIENT:
        return f"{args[0].name}, [{_expressions(args[1].items)}]"
    if shape == MOVE:
        text = args[0].name
        if len(args) > 1:
            text += " avoid " + ', '.join(a.name for a in args[2:])
        return text
    if shape == RELATION:
        if args[0].value == 'lift':
            return f"lift {args[1].name}"
        factor = args[2]
        return f"elementary {args[1].name} ({factor.i}, {factor.j}, {print_expression(factor.coefficient)})"
    if shape == SPLIT:
        return f"{args[0].name} by {args[1].name} * {args[2].name}"
    if shape == SIZE:
        text = str(args[0].value)
        if len(args) > 1:
            text += f" over {args[1].value}"
        return text
    return _sum(args)


def print_statement(statement: Statement) -> str:
    """Forme canonique, terminée par ';'"""
    if isinstance(statement, RingDecl):
        text = f"ring {statement.name} = {statement.field}[{', '.join(statement.variables)}]"
        if statement.relations:
            text += f" / ({_expressions(statement.relations)})"
        if statement.order:
            text += f" order {statement.order}"
    elif isinstance(statement, IdealDecl):
        text = f"ideal {statement.name} = ({_expressions(statement.generators)}) in {statement.ring}"
    elif isinstance(statement, RowDecl):
        text = f"row {statement.name} = ({_expressions(statement.entries)}) in {statement.ring}"
    elif isinstance(statement, PointDecl):
        text = (f"point {statement.name} : Q{2 * statement.n}({statement.ring}) = "
                f"([{_expressions(statement.a)}], [{_expressions(statement.b)}], "
                f"{print_expression(statement.s)})")
    elif isinstance(statement, Assertion):
        if statement.kind == 'ideal':
            text = f"assert ideal {statement.names[0]} = {statement.names[1]}"
        else:
            text = f"assert {statement.kind} {' '.join(statement.names)}"
    else:
        target = f"{', '.join(statement.outputs)} = " if statement.outputs else ''
        text = f"{statement.verb} {target}{_arguments(statement)}"
    return text + ';'
