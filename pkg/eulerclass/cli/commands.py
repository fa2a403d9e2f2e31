"""
Verbes de session : nom -> fonction de traitement.

Chaque fonction reçoit la session, la commande analysée et le générateur
aléatoire propre à l'instruction, et renvoie les lignes de transcription.
"""

import logging
from typing import Callable, Dict, List

from ..cohomotopy import (
    Witness,
    compose_detailed,
    inverse_detailed,
    move,
    provably_equal,
)
from ..euler import (
    EulerSum,
    EulerSymbol,
    UnimodularRow,
    merge,
    phi_detailed,
    reduce_to_single,
    relation_witness,
    segre_hom,
    split,
    weak_class,
)
from ..exceptions import ArityMismatch, EquationViolated, UnknownCommand
from ..expr import evaluate
from ..groebner import IdealHandle
from ..quadric import QuadricPoint, fold_map, jouanolou_device, validate, vanishing_ideal
from ..ring import CoefficientField
from ..segre import segre_class
from .formatter import INDENT, OutputFormatter as fmt
from .parser import Command

logger = logging.getLogger(__name__)

Handler = Callable[['Session', Command, object], List[str]]

# ==================== HANDLERS ====================


def cmd_validate(session, command, rng) -> List[str]:
    name = command.args[0].name
    value = session.lookup(name, (QuadricPoint, Witness), "a point or a relation")
    target = value.homotopy if isinstance(value, Witness) else value
    try:
        validate(target)
    except EquationViolated as e:
        return [f"validate {name}: invalid, residual {e.residual}"]
    return [f"validate {name}: valid"]


def cmd_ideal_of(session, command, rng) -> List[str]:
    (output,) = command.outputs
    v = session.point(command.args[0].name)
    I = session.bind(output, vanishing_ideal(v))
    return [f"{output} = {fmt.ideal(I)}"]


def cmd_orient(session, command, rng) -> List[str]:
    (output,) = command.outputs
    I = session.lookup(command.args[0].name, IdealHandle, "an ideal")
    a = [evaluate(e, I.ring) for e in command.args[1].items]
    symbol = session.bind(output, EulerSymbol.build(I, a))
    return [f"{output} = {fmt.symbol(symbol)}"]


def cmd_segre(session, command, rng) -> List[str]:
    (output,) = command.outputs
    symbol = session.symbol(command.args[0].name)
    v = session.bind(output, segre_class(symbol.oriented))
    return [f"{output} = {fmt.point(v)}"]


def cmd_move(session, command, rng) -> List[str]:
    (output,) = command.outputs
    v = session.point(command.args[0].name)
    avoid = []
    for arg in command.args[2:]:
        value = session.lookup(arg.name, (IdealHandle, QuadricPoint), "an ideal or a point")
        avoid.append(vanishing_ideal(value) if isinstance(value, QuadricPoint) else value)
    result = move(v, session.constraints(avoid), rng)
    session.ledger = session.ledger.record_homotopy(result.homotopy, f"move {output}")
    session.bind(output, result.point)
    lines = [f"{output} = {fmt.point(result.point)}"]
    if session.flags.witnesses:
        lines.extend(fmt.move(result))
    return lines


def cmd_compose(session, command, rng) -> List[str]:
    (output,) = command.outputs
    u = session.point(command.args[0].name)
    w = session.point(command.args[1].name)
    result = compose_detailed(u, w, session.ledger, session.constraints(), rng)
    session.ledger = result.ledger
    session.bind(output, result.point)
    lines = [f"{output} = {fmt.point(result.point)}",
             f"{INDENT}ideal({output}) = {fmt.ideal(vanishing_ideal(result.point))}"]
    if session.flags.witnesses:
        lines.extend(fmt.composition(result))
    return lines


def cmd_inverse(session, command, rng) -> List[str]:
    (output,) = command.outputs
    v = session.point(command.args[0].name)
    result = inverse_detailed(v, session.ledger, session.constraints(), rng)
    session.ledger = result.ledger
    session.bind(output, result.point)
    lines = [f"{output} = {fmt.point(result.point)}"]
    if session.flags.witnesses:
        lines.extend(fmt.inversion(result))
    return lines


def cmd_equal(session, command, rng) -> List[str]:
    left, right = (arg.name for arg in command.args)
    verdict = provably_equal(session.point(left), session.point(right), session.ledger)
    lines = [f"equal? {left}, {right}: {verdict}"]
    if session.flags.witnesses:
        lines.extend(fmt.chain(verdict))
    return lines


def _euler_sum(session, command) -> EulerSum:
    return EulerSum.of(*((term.coefficient, session.symbol(term.name)) for term in command.args))


def cmd_euler_reduce(session, command, rng) -> List[str]:
    (output,) = command.outputs
    flags = session.flags
    result = reduce_to_single(_euler_sum(session, command), rng, flags.degree_cap, flags.attempt_cap)
    session.ledger = session.ledger.extend(result.ledger)
    session.bind(output, result.symbol)
    lines = [f"{output} = {fmt.symbol(result.symbol)}"]
    if flags.witnesses:
        lines.extend(fmt.reduction(result))
    return lines


def cmd_segre_hom(session, command, rng) -> List[str]:
    (output,) = command.outputs
    result = segre_hom(_euler_sum(session, command), session.ledger, session.constraints(), rng)
    session.ledger = result.ledger
    session.bind(output, result.representative)
    return [f"{output} = {fmt.point(result.representative)}",
            f"{INDENT}ideal({output}) = {fmt.ideal(vanishing_ideal(result.representative))}"]


def cmd_weak_class(session, command, rng) -> List[str]:
    (output,) = command.outputs
    result = session.bind(output, weak_class(_euler_sum(session, command)))
    return [f"{output} = {fmt.weak(result)}"]


def cmd_phi(session, command, rng) -> List[str]:
    (output,) = command.outputs
    row = session.lookup(command.args[0].name, UnimodularRow, "a unimodular row")
    flags = session.flags
    result = phi_detailed(row, rng, flags.degree_cap, flags.attempt_cap)
    session.bind(output, result.symbol)
    lines = [f"{output} = {fmt.symbol(result.symbol)}"]
    if flags.witnesses:
        lines.extend(fmt.phi(result))
    return lines


def cmd_relation(session, command, rng) -> List[str]:
    (output,) = command.outputs
    kind = command.args[0].value
    symbol = session.symbol(command.args[1].name)
    factor = None
    if kind == 'elementary':
        raw = command.args[2]
        factor = (raw.i, raw.j, evaluate(raw.coefficient, symbol.ring))
    witness = relation_witness(kind, symbol, factor)
    session.ledger = session.ledger.record(witness)
    session.bind(output, witness)
    return [f"{output} = {witness.homotopy}",
            f"{INDENT}T=0: {witness.source}",
            f"{INDENT}T=1: {witness.target}"]


def cmd_merge(session, command, rng) -> List[str]:
    (output,) = command.outputs
    left, right = (session.symbol(arg.name) for arg in command.args)
    symbol = session.bind(output, merge(left, right))
    return [f"{output} = {fmt.symbol(symbol)}"]


def cmd_split(session, command, rng) -> List[str]:
    if len(command.outputs) != 2:
        raise ArityMismatch("split produces two symbols", expected=2, found=len(command.outputs))
    symbol = session.symbol(command.args[0].name)
    J, K = (session.lookup(arg.name, IdealHandle, "an ideal") for arg in command.args[1:])
    pieces = split(symbol, J, K)
    lines = []
    for output, piece in zip(command.outputs, pieces):
        session.bind(output, piece)
        lines.append(f"{output} = {fmt.symbol(piece)}")
    return lines


def _field(command) -> CoefficientField:
    if len(command.args) > 1:
        return CoefficientField.from_name(command.args[1].value)
    return CoefficientField.rationals()


def cmd_fold_map(session, command, rng) -> List[str]:
    (output,) = command.outputs
    result = session.bind(output, fold_map(command.args[0].value, _field(command)))
    status = "certified" if result.certified else "NOT certified"
    lines = [f"{output} = fold map on {result.device.ring.label}, {status}"]
    lines.extend(fmt.fold(result))
    if session.flags.witnesses:
        lines.extend(fmt.fold_witnesses(result))
    return lines


def cmd_jouanolou(session, command, rng) -> List[str]:
    (output,) = command.outputs
    device = session.bind(output, jouanolou_device(command.args[0].value, _field(command)))
    lines = fmt.device(device)
    lines[0] = f"{output} = {lines[0]}"
    return lines


# ==================== REGISTRY ====================


class CommandRegistry:
    """Table des verbes disponibles dans une session"""

    def __init__(self):
        self.handlers: Dict[str, Handler] = {}
        self._register_builtins()

    def _register_builtins(self):
        self.register('validate', cmd_validate)
        self.register('ideal-of', cmd_ideal_of)
        self.register('orient', cmd_orient)
        self.register('segre', cmd_segre)
        self.register('move', cmd_move)
        self.register('compose', cmd_compose)
        self.register('inverse', cmd_inverse)
        self.register('equal?', cmd_equal)
        self.register('euler-reduce', cmd_euler_reduce)
        self.register('segre-hom', cmd_segre_hom)
        self.register('weak-class', cmd_weak_class)
        self.register('phi', cmd_phi)
        self.register('relation', cmd_relation)
        self.register('merge', cmd_merge)
        self.register('split', cmd_split)
        self.register('fold-map', cmd_fold_map)
        self.register('jouanolou', cmd_jouanolou)

    def register(self, verb: str, handler: Handler):
        self.handlers[verb] = handler
        logger.debug(f"Registered command {verb}")

    def verbs(self) -> List[str]:
        return sorted(self.handlers)

    def execute(self, session, command: Command, rng) -> List[str]:
        handler = self.handlers.get(command.verb)
        if handler is None:
            raise UnknownCommand(verb=command.verb)
        return handler(session, command, rng)
