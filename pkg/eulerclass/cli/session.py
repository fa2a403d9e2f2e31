"""
Exécution des sessions : espace de noms, drapeaux, registre de témoins.

Chaque instruction reçoit son propre générateur aléatoire, dérivé de la
graine et de son rang dans la session ; rejouer une session avec les mêmes
drapeaux reproduit la même transcription octet pour octet.
"""

import logging
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Type, Union

from ..cohomotopy import Ledger, MoveConstraints, provably_equal
from ..euler import EulerSymbol, UnimodularRow
from ..exceptions import AssertionFailedError, EquationViolated, EulerError, NameResolutionError
from ..expr import evaluate
from ..groebner import IdealHandle, dimension_height, ideal_equal
from ..quadric import QuadricPoint, validate, vanishing_ideal
from ..ring import DEFAULT_ORDER, PresentedRing, make_ring
from .commands import CommandRegistry
from .formatter import OutputFormatter as fmt
from .parser import (
    Assertion,
    Command,
    IdealDecl,
    PointDecl,
    RingDecl,
    RowDecl,
    SourceStatement,
    Statement,
    parse_session,
    print_statement,
)

logger = logging.getLogger(__name__)

# Décorrèle les graines d'instructions voisines
SEED_STRIDE = 1_000_003


@dataclass(frozen=True)
class SessionFlags:
    seed: int = 0
    degree_cap: int = 2
    attempt_cap: int = 60
    witnesses: bool = False
    order: str = DEFAULT_ORDER

    @classmethod
    def from_config(cls, config, **overrides) -> 'SessionFlags':
        """Drapeaux CLI > configuration (qui inclut déjà EULER_SEED)"""
        values = dict(
            seed=config.get('seed', 0),
            degree_cap=config.get('degree_cap', 2),
            attempt_cap=config.get('attempt_cap', 60),
            witnesses=config.get('witnesses', False),
            order=config.get('order', DEFAULT_ORDER),
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class Session:
    """Espace de noms et registre de témoins partagés par les instructions"""

    def __init__(self, flags: Optional[SessionFlags] = None):
        self.flags = flags or SessionFlags()
        self.namespace: Dict[str, object] = {}
        self.ledger = Ledger()
        self.registry = CommandRegistry()
        self.accepted: List[str] = []
        self.index = 0

    # ---------- espace de noms ----------

    def bind(self, name: str, value):
        if name in self.namespace:
            logger.debug(f"Rebinding {name}")
        self.namespace[name] = value
        return value

    def lookup(self, name: str, kinds: Union[Type, Tuple[Type, ...]], description: str):
        if name not in self.namespace:
            raise NameResolutionError("Undefined name", name=name, kind=description)
        value = self.namespace[name]
        if not isinstance(value, kinds):
            raise NameResolutionError("Wrong kind of value for", name=name, kind=description)
        return value

    def ring(self, name: str) -> PresentedRing:
        return self.lookup(name, PresentedRing, "a ring")

    def point(self, name: str) -> QuadricPoint:
        return self.lookup(name, QuadricPoint, "a point")

    def symbol(self, name: str) -> EulerSymbol:
        return self.lookup(name, EulerSymbol, "an Euler symbol")

    def constraints(self, avoid: Sequence[IdealHandle] = ()) -> MoveConstraints:
        return MoveConstraints(tuple(avoid), self.flags.seed, self.flags.degree_cap, self.flags.attempt_cap)

    # ---------- exécution ----------

    def execute_statement(self, statement: Statement) -> List[str]:
        rng = random.Random(self.flags.seed * SEED_STRIDE + self.index)
        self.index += 1
        if isinstance(statement, Command):
            lines = self.registry.execute(self, statement, rng)
        else:
            handler = getattr(self, f"_{type(statement).__name__}")
            lines = handler(statement)
        self.accepted.append(print_statement(statement))
        return lines

    def run(self, text: str, emit: Callable[[str], None]) -> int:
        """
        Exécute toutes les instructions de text et transmet chaque ligne à
        emit. Une erreur reçoit la ligne et le texte de l'instruction fautive.
        """
        statements = parse_session(text)
        for source in statements:
            try:
                for line in self.execute_statement(source.statement):
                    emit(line)
            except EulerError as e:
                e.line = source.line
                e.statement = source.text
                raise
        return len(statements)

    # ---------- déclarations ----------

    def _RingDecl(self, decl: RingDecl) -> List[str]:
        ring = make_ring(decl.field, decl.variables, decl.relations,
                         order=decl.order or self.flags.order, name=decl.name)
        self.bind(decl.name, ring)
        return [f"{decl.name} = {ring}, dimension {ring.dimension()}"]

    def _IdealDecl(self, decl: IdealDecl) -> List[str]:
        ring = self.ring(decl.ring)
        I = self.bind(decl.name, IdealHandle(ring, [evaluate(g, ring) for g in decl.generators]))
        info = dimension_height(I)
        return [f"{decl.name} = {fmt.ideal(I)}, dimension {info.dimension}, height {info.height}"]

    def _PointDecl(self, decl: PointDecl) -> List[str]:
        ring = self.ring(decl.ring)
        point = QuadricPoint.of(ring, [evaluate(x, ring) for x in decl.a],
                                [evaluate(x, ring) for x in decl.b], evaluate(decl.s, ring))
        validate(point, decl.n)
        self.bind(decl.name, point)
        return [f"{decl.name} = {fmt.point(point)} on Q{2 * decl.n}"]

    def _RowDecl(self, decl: RowDecl) -> List[str]:
        ring = self.ring(decl.ring)
        row = self.bind(decl.name, UnimodularRow.build(ring, [evaluate(x, ring) for x in decl.entries]))
        return [f"{decl.name} = {row}, unimodular"]

    def _Assertion(self, assertion: Assertion) -> List[str]:
        text = print_statement(assertion)[:-1]
        if assertion.kind == 'valid':
            try:
                validate(self.point(assertion.names[0]))
            except EquationViolated:
                raise AssertionFailedError("point is not on the quadric", statement=text)
            return [f"{text}: ok"]
        if assertion.kind == 'ideal':
            point = self.point(assertion.names[0])
            J = self.lookup(assertion.names[1], IdealHandle, "an ideal")
            if not ideal_equal(vanishing_ideal(point), J):
                raise AssertionFailedError("vanishing ideals differ", statement=text)
            return [f"{text}: ok"]
        left, right = (self.point(name) for name in assertion.names)
        verdict = provably_equal(left, right, self.ledger)
        if not verdict:
            raise AssertionFailedError(statement=text)
        lines = [f"{text}: ok"]
        if self.flags.witnesses:
            lines.extend(fmt.chain(verdict))
        return lines


def execute(text: str, flags: Optional[SessionFlags] = None) -> str:
    """Transcription complète d'une session ; propage la première erreur"""
    lines: List[str] = []
    Session(flags).run(text, lines.append)
    return ''.join(line + '\n' for line in lines)


def check(text: str) -> List[SourceStatement]:
    """Analyse seule (euler check)"""
    return parse_session(text)
