"""
Exceptions pour eulerclass

Chaque erreur porte un code (affiché entre crochets) et le statut de sortie
que la commande `euler` renvoie lorsqu'elle remonte jusqu'au CLI.
"""

from typing import Any, Optional, Sequence


class EulerError(Exception):
    """Erreur générale d'eulerclass"""

    exit_status = 3

    def __init__(self, message="Euler error", error_code=None):
        self.message = message
        self.error_code = error_code
        super().__init__(self.message)

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


# ==================== PARSING ====================

class ParseError(EulerError):
    """Erreur de syntaxe dans une instruction ou un polynôme"""

    exit_status = 2

    def __init__(self, message="Parse error", line=None, column=None, expected=None):
        self.line = line
        self.column = column
        self.expected = expected
        full_message = message
        if line is not None:
            full_message += f" at line {line}, column {column}"
        if expected:
            full_message += f" (expected {expected})"
        super().__init__(full_message, "PARSE_ERROR")


class NameResolutionError(EulerError):
    """Nom non déclaré ou de mauvais type dans une session"""

    def __init__(self, message="Unresolved name", name=None, kind=None):
        self.name = name
        self.kind = kind
        full_message = message
        if name:
            full_message += f" '{name}'"
        if kind:
            full_message += f" (expected {kind})"
        super().__init__(full_message, "NAME_ERROR")


class UnknownCommand(EulerError):
    """Verbe absent du registre des commandes"""

    exit_status = 2

    def __init__(self, message="Unknown command", verb=None):
        self.verb = verb
        full_message = f"{message} '{verb}'" if verb else message
        super().__init__(full_message, "UNKNOWN_COMMAND")


# ==================== RINGS ====================

class DuplicateVariable(EulerError):
    """Variable déclarée deux fois"""

    def __init__(self, message="Duplicate variable", variable=None):
        self.variable = variable
        full_message = f"{message} '{variable}'" if variable else message
        super().__init__(full_message, "DUPLICATE_VARIABLE")


class CharacteristicTwo(EulerError):
    """Corps de caractéristique 2"""

    def __init__(self, message="Characteristic 2 is not supported", characteristic=None):
        self.characteristic = characteristic
        full_message = f"{message} (p = {characteristic})" if characteristic is not None else message
        super().__init__(full_message, "CHARACTERISTIC_TWO")


class NonPrimeCharacteristic(EulerError):
    """Caractéristique ni nulle ni première"""

    def __init__(self, message="Characteristic must be 0 or an odd prime", characteristic=None):
        self.characteristic = characteristic
        full_message = f"{message} (p = {characteristic})" if characteristic is not None else message
        super().__init__(full_message, "NON_PRIME_CHARACTERISTIC")


class UnknownField(EulerError):
    """Nom de corps autre que QQ ou Fp"""

    exit_status = 2

    def __init__(self, message="Unknown coefficient field", name=None):
        self.name = name
        full_message = f"{message} {name!r} (expected QQ or Fp)" if name is not None else message
        super().__init__(full_message, "UNKNOWN_FIELD")


class UnknownOrder(EulerError):
    """Ordre monomial non supporté"""

    exit_status = 2

    def __init__(self, message="Unknown monomial order", order=None):
        self.order = order
        full_message = f"{message} {order!r} (expected degrevlex or lex)" if order is not None else message
        super().__init__(full_message, "UNKNOWN_ORDER")


class UnknownVariable(EulerError):
    """Variable absente de la présentation"""

    def __init__(self, message="Unknown variable", variable=None):
        self.variable = variable
        full_message = f"{message} '{variable}'" if variable else message
        super().__init__(full_message, "UNKNOWN_VARIABLE")


class RingMismatch(EulerError):
    """Opérandes définis sur des anneaux différents"""

    def __init__(self, message="Operands live in different rings", left=None, right=None):
        self.left = left
        self.right = right
        full_message = message
        if left is not None and right is not None:
            full_message += f" ({left} vs {right})"
        super().__init__(full_message, "RING_MISMATCH")


# ==================== IDEALS ====================

class NotMember(EulerError):
    """Élément hors de l'idéal"""

    def __init__(self, message="Element is not in the ideal", element=None):
        self.element = element
        full_message = f"{message}: {element}" if element is not None else message
        super().__init__(full_message, "NOT_MEMBER")


class NotComaximal(EulerError):
    """Idéaux non comaximaux"""

    def __init__(self, message="Ideals are not comaximal"):
        super().__init__(message, "NOT_COMAXIMAL")


class NotZeroDimensional(EulerError):
    """Quotient de dimension positive"""

    def __init__(self, message="Quotient is not zero-dimensional", dimension=None):
        self.dimension = dimension
        full_message = f"{message} (dim {dimension})" if dimension is not None else message
        super().__init__(full_message, "NOT_ZERO_DIMENSIONAL")


# ==================== QUADRIC POINTS ====================

class ArityMismatch(EulerError):
    """Nombre de composantes incompatible avec n"""

    def __init__(self, message="Component count does not match n", expected=None, found=None):
        self.expected = expected
        self.found = found
        full_message = message
        if expected is not None:
            full_message += f" (expected {expected}, found {found})"
        super().__init__(full_message, "ARITY_MISMATCH")


class EquationViolated(EulerError):
    """a·bᵗ ≠ s(1−s) ; le résidu non nul est conservé"""

    def __init__(self, message="Quadric equation violated", residual: Any = None, where: Optional[str] = None):
        self.residual = residual
        self.where = where
        full_message = message
        if where:
            full_message += f" at {where}"
        if residual is not None:
            full_message += f": residual {residual}"
        super().__init__(full_message, "EQUATION_VIOLATED")


class UnsupportedN(EulerError):
    """Valeur de n hors des bornes supportées"""

    def __init__(self, message="Unsupported n", n=None, supported: Sequence[int] = ()):
        self.n = n
        full_message = message
        if n is not None:
            full_message += f" ({n}; supported: {', '.join(map(str, supported))})"
        super().__init__(full_message, "UNSUPPORTED_N")


# ==================== ORIENTATIONS & SYMBOLS ====================

class NotOriented(EulerError):
    """Les représentants n'engendrent pas I/I²"""

    def __init__(self, message="Representatives do not orient the ideal", reason=None):
        self.reason = reason
        full_message = f"{message}: {reason}" if reason else message
        super().__init__(full_message, "NOT_ORIENTED")


class NotCompleteIntersection(EulerError):
    """⟨a⟩ ≠ I pour un témoin de relation de levée"""

    def __init__(self, message="Orientation does not generate the ideal"):
        super().__init__(message, "NOT_COMPLETE_INTERSECTION")


class HeightViolation(EulerError):
    """Hauteur différente de n"""

    def __init__(self, message="Ideal height differs from n", height=None, n=None):
        self.height = height
        self.n = n
        full_message = message
        if n is not None:
            full_message += f" (height {height}, n = {n})"
        super().__init__(full_message, "HEIGHT_VIOLATION")


class RangeViolation(EulerError):
    """Dimension de l'anneau hors de la plage certifiée"""

    def __init__(self, message="Ring dimension outside the supported range", dimension=None, bound=None):
        self.dimension = dimension
        self.bound = bound
        full_message = message
        if bound is not None:
            full_message += f" (dim {dimension} > {bound})"
        super().__init__(full_message, "RANGE_VIOLATION")


# ==================== RANDOMIZED CONSTRUCTIONS ====================

class MoveFailed(EulerError):
    """Recherche aléatoire épuisée"""

    def __init__(self, message="Randomized search exhausted", last_candidate=None,
                 failed_condition=None, attempts=None):
        self.last_candidate = last_candidate
        self.failed_condition = failed_condition
        self.attempts = attempts
        full_message = message
        if attempts is not None:
            full_message += f" after {attempts} attempts"
        if failed_condition:
            full_message += f"; last failure: {failed_condition}"
        super().__init__(full_message, "MOVE_FAILED")


class ConstructionFailed(EulerError):
    """Une postcondition vérifiée d'une construction a échoué"""

    def __init__(self, message="Construction failed", stage=None):
        self.stage = stage
        full_message = f"{message} ({stage})" if stage else message
        super().__init__(full_message, "CONSTRUCTION_FAILED")


# ==================== SESSIONS ====================

class AssertionFailedError(EulerError):
    """Assertion de session non certifiée"""

    exit_status = 1

    def __init__(self, message="equality not certified", statement=None):
        self.statement = statement
        super().__init__(message, "ASSERTION_FAILED")


__all__ = [
    'EulerError', 'ParseError', 'NameResolutionError', 'UnknownCommand', 'DuplicateVariable',
    'CharacteristicTwo', 'NonPrimeCharacteristic', 'UnknownField', 'UnknownOrder', 'UnknownVariable', 'RingMismatch', 'NotMember',
    'NotComaximal', 'NotZeroDimensional', 'ArityMismatch', 'EquationViolated',
    'UnsupportedN', 'NotOriented', 'NotCompleteIntersection', 'HeightViolation',
    'RangeViolation', 'MoveFailed', 'ConstructionFailed', 'AssertionFailedError',
]
