#!/usr/bin/env python3
"""
Rendu déterministe des résultats pour les transcriptions
"""

from typing import Iterable, List

from ..cohomotopy import Composition, Equal, Inversion, MoveResult, Witness
from ..euler import EulerSymbol, PhiResult, Reduction, WeakClass
from ..groebner import IdealHandle, groebner_basis
from ..quadric import FoldMap, QuadricPoint, SpacePresentation
from ..segre import OrientedIdeal

INDENT = '  '


class OutputFormatter:
    """Formate les objets en lignes de texte stables d'une exécution à l'autre"""

    @staticmethod
    def ideal(I: IdealHandle) -> str:
        """Base de Gröbner réduite dans l'ordre de l'anneau"""
        basis = groebner_basis(I)
        if not basis:
            return "(0)"
        return "(" + ', '.join(str(g) for g in basis) + ")"

    @staticmethod
    def elements(items: Iterable) -> str:
        return "[" + ', '.join(str(x) for x in items) + "]"

    @staticmethod
    def point(v: QuadricPoint) -> str:
        return str(v)

    @staticmethod
    def oriented(O: OrientedIdeal) -> str:
        return f"({OutputFormatter.ideal(O.ideal)}, {OutputFormatter.elements(O.a)})"

    @staticmethod
    def symbol(symbol: EulerSymbol) -> str:
        if symbol.is_zero:
            return "0"
        return OutputFormatter.oriented(symbol.oriented)

    @staticmethod
    def witness(w: Witness) -> List[str]:
        lines = [f"{INDENT}{w.kind}: {w.source} ~ {w.target}"]
        if w.homotopy is not None:
            lines.append(f"{INDENT * 2}H = {w.homotopy.point}")
        if w.note:
            lines.append(f"{INDENT * 2}{w.note}")
        return lines

    @staticmethod
    def chain(verdict) -> List[str]:
        if not isinstance(verdict, Equal):
            return []
        lines = []
        for w in verdict.chain:
            lines.extend(OutputFormatter.witness(w))
        return lines

    @staticmethod
    def move(result: MoveResult) -> List[str]:
        return [f"{INDENT}mu = {OutputFormatter.elements(result.mu)} ({result.attempts} attempts)",
                f"{INDENT}H = {result.homotopy.point}"]

    @staticmethod
    def composition(result: Composition) -> List[str]:
        lines = []
        for moved in result.moves:
            lines.append(f"{INDENT}moved {moved.homotopy.endpoints()[0]}")
            lines.extend(INDENT + line for line in OutputFormatter.move(moved))
        if result.witness is not None:
            lines.append(f"{INDENT}e = {result.witness.e}")
            lines.append(f"{INDENT}e' = {result.witness.e_prime}")
        if not result.in_range:
            lines.append(f"{INDENT}outside d <= 2n - 2")
        return lines

    @staticmethod
    def inversion(result: Inversion) -> List[str]:
        lines = [f"{INDENT}K = {OutputFormatter.ideal(result.residual_ideal)}",
                 f"{INDENT}f = {OutputFormatter.elements(result.f)}",
                 f"{INDENT}v * w = {result.composite}"]
        lines.extend(OutputFormatter.chain(result.certificate))
        return lines

    @staticmethod
    def reduction(result: Reduction) -> List[str]:
        lines = []
        for step in result.steps:
            lines.append(f"{INDENT}{step}")
            for residual in step.residuals:
                lines.append(f"{INDENT * 2}K = {OutputFormatter.ideal(residual.K)}, "
                             f"f = {OutputFormatter.elements(residual.f)}")
            if step.crt is not None and step.crt.comaximality is not None:
                lines.append(f"{INDENT * 2}e = {step.crt.comaximality.e}, e' = {step.crt.comaximality.e_prime}")
            for w in step.witnesses:
                lines.extend(INDENT + line for line in OutputFormatter.witness(w))
        return lines

    @staticmethod
    def weak(result: WeakClass) -> str:
        pieces = [f"{m}*{OutputFormatter.ideal(I)}" for I, m in result.terms]
        return f"{' + '.join(pieces) or '0'}, degree {result.degree}"

    @staticmethod
    def phi(result: PhiResult) -> List[str]:
        return [f"{INDENT}word = {result.word}", f"{INDENT}special row = {result.row}"]

    @staticmethod
    def device(device: SpacePresentation) -> List[str]:
        ring = device.ring
        lines = [f"{ring.label}: {ring.field}[{', '.join(ring.variables)}]"]
        lines.extend(f"{INDENT}{ring.format(r)} = 0" for r in ring.relations)
        return lines

    @staticmethod
    def fold(result: FoldMap) -> List[str]:
        lines = [f"{INDENT}{name}: {'ok' if passed else 'FAILED'}" for name, passed in result.checks.items()]
        return lines

    @staticmethod
    def fold_witnesses(result: FoldMap) -> List[str]:
        return [f"{INDENT}c = {OutputFormatter.elements(result.c)}",
                f"{INDENT}delta = {OutputFormatter.elements(result.delta)}",
                f"{INDENT}w = {result.w}",
                f"{INDENT}w' = {result.w_prime}",
                f"{INDENT}i_l^* = {result.left_restriction}",
                f"{INDENT}i_r^* = {result.right_restriction}"]
