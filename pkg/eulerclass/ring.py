"""
Anneaux présentés k[x₁..x_m]/Q et leurs éléments en forme normale.

Les polynômes sont des PolyElement de sympy ; chaque RingElement stocke la
forme normale de son représentant modulo la base de Gröbner réduite des
relations, calculée une fois à la construction de l'anneau.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from .exceptions import (
    CharacteristicTwo,
    DuplicateVariable,
    NonPrimeCharacteristic,
    RingMismatch,
    UnknownField,
    UnknownOrder,
    UnknownVariable,
)

logger = logging.getLogger(__name__)

ORDERS = {'degrevlex': grevlex, 'lex': lex}
DEFAULT_ORDER = 'degrevlex'
HOMOTOPY_VARIABLE = 'T'

# ==================== COEFFICIENT FIELDS ====================


class CoefficientField:
    """ℚ ou 𝔽_p avec p premier impair ; arithmétique exacte"""

    __slots__ = ('characteristic', 'domain')

    def __init__(self, characteristic: int = 0):
        if characteristic == 2:
            raise CharacteristicTwo(characteristic=2)
        if characteristic != 0 and not isprime(characteristic):
            raise NonPrimeCharacteristic(characteristic=characteristic)
        self.characteristic = characteristic
        self.domain = QQ if characteristic == 0 else GF(characteristic)

    @classmethod
    def rationals(cls) -> 'CoefficientField':
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> 'CoefficientField':
        return cls(p)

    @classmethod
    def from_name(cls, name: str) -> 'CoefficientField':
        """'QQ' ou 'F<p>'"""
        if name == 'QQ':
            return cls(0)
        if name.startswith('F') and name[1:].isdigit():
            return cls(int(name[1:]))
        raise UnknownField(name=name)

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def convert(self, value) -> object:
        """int, Fraction ou élément du domaine -> élément du domaine"""
        domain = self.domain
        if isinstance(value, Fraction):
            return domain.quo(domain(value.numerator), domain(value.denominator))
        if isinstance(value, int):
            return domain(value)
        return domain.convert(value)

    def to_fraction(self, coeff) -> Fraction:
        """Représentant canonique : fraction réduite, ou entier dans [0, p)"""
        if self.characteristic == 0:
            return Fraction(int(coeff.numerator), int(coeff.denominator))
        return Fraction(int(self.domain.to_int(coeff)) % self.characteristic)

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(('field', self.characteristic))

    def __str__(self):
        return 'QQ' if self.characteristic == 0 else f"F{self.characteristic}"

    __repr__ = __str__


# ==================== MONOMIAL HELPERS ====================

def monomials_up_to(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    """Tous les monômes de degré total ≤ degree, par degré croissant"""
    result = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            exponents = [0] * nvars
            for index in combo:
                exponents[index] += 1
            result.append(tuple(exponents))
    return result


def format_polynomial(poly: PolyElement, variables: Sequence[str], field: CoefficientField) -> str:
    """Termes dans l'ordre monomial actif ; coefficients en fractions exactes"""
    if not poly:
        return '0'
    pieces = []
    for monom, coeff in poly.terms():
        value = field.to_fraction(coeff)
        negative = value < 0
        value = abs(value)
        factors = []
        for name, exponent in zip(variables, monom):
            if exponent == 1:
                factors.append(name)
            elif exponent > 1:
                factors.append(f"{name}^{exponent}")
        if not factors:
            body = str(value)
        elif value == 1:
            body = '*'.join(factors)
        else:
            body = f"{value}*" + '*'.join(factors)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return ' '.join(pieces)


# ==================== PRESENTED RINGS ====================


class PresentedRing:
    """k[variables]/⟨relations⟩ avec une base de Gröbner réduite en cache"""

    def __init__(self, field: CoefficientField, variables: Sequence[str],
                 relations: Iterable[PolyElement] = (), order: str = DEFAULT_ORDER,
                 name: Optional[str] = None, base: Optional['PresentedRing'] = None,
                 known_basis: Optional[Sequence[PolyElement]] = None):
        variables = tuple(variables)
        seen = set()
        for variable in variables:
            if variable in seen:
                raise DuplicateVariable(variable=variable)
            seen.add(variable)
        if order not in ORDERS:
            raise UnknownOrder(order=order)

        self.field = field
        self.variables = variables
        self.order_name = order
        self.name = name
        self.base = base
        self.poly_ring = PolyRing(list(variables) if variables else ['_'], field.domain, ORDERS[order])
        self._index = {v: i for i, v in enumerate(variables)}
        self.relations = tuple(self.poly_ring(r) if not isinstance(r, PolyElement) else r
                               for r in relations)
        self.relations = tuple(r for r in self.relations if r)

        from .groebner import buchberger
        if known_basis is not None:
            self.relation_basis = tuple(known_basis)
        else:
            self.relation_basis = tuple(buchberger(list(self.relations), self.poly_ring).basis)

        self._extensions: Dict[str, 'PresentedRing'] = {}
        self._reorderings: Dict[str, 'PresentedRing'] = {}
        self._dimension = None
        logger.debug(f"Ring {self} created ({len(self.relation_basis)} relation basis elements)")

    # ---------- construction ----------

    def extend(self, variable: str = HOMOTOPY_VARIABLE) -> 'PresentedRing':
        """R[T] : une variable ajoutée en dernière position dans l'ordre"""
        if variable in self._extensions:
            return self._extensions[variable]
        if variable in self._index:
            raise DuplicateVariable(variable=variable)
        extended_vars = self.variables + (variable,)
        target = PolyRing(list(extended_vars), self.field.domain, ORDERS[self.order_name])
        lift = lambda p: target.from_dict({m + (0,): c for m, c in p.items()})
        extension = PresentedRing(
            self.field, extended_vars, [lift(r) for r in self.relations],
            order=self.order_name, name=f"{self.label}[{variable}]", base=self,
            known_basis=[lift(g) for g in self.relation_basis])
        self._extensions[variable] = extension
        return extension

    def reordered(self, order: str) -> 'PresentedRing':
        """Même présentation sous un autre ordre monomial"""
        if order not in ORDERS:
            raise UnknownOrder(order=order)
        if order == self.order_name:
            return self
        if order not in self._reorderings:
            target = PolyRing(list(self.variables), self.field.domain, ORDERS[order])
            relations = [target.from_dict(dict(r)) for r in self.relations]
            self._reorderings[order] = PresentedRing(
                self.field, self.variables, relations, order=order, name=self.name)
        return self._reorderings[order]

    # ---------- elements ----------

    def reduce(self, poly: PolyElement) -> PolyElement:
        from .groebner import normal_form
        return normal_form(poly, self.relation_basis, self.poly_ring)

    def element(self, poly: PolyElement) -> 'RingElement':
        return RingElement(self, self.reduce(poly))

    def __call__(self, value) -> 'RingElement':
        if isinstance(value, RingElement):
            if value.ring is self:
                return value
            return self.element(transfer(value.poly, value.ring, self))
        if isinstance(value, PolyElement):
            return self.element(value)
        if isinstance(value, str):
            from .expr import evaluate, parse_expression
            return evaluate(parse_expression(value), self)
        return RingElement(self, self.reduce(self.poly_ring.ground_new(self.field.convert(value))))

    def var(self, name: str) -> 'RingElement':
        if name not in self._index:
            raise UnknownVariable(variable=name)
        return self.element(self.poly_ring.gens[self._index[name]])

    def index(self, name: str) -> int:
        if name not in self._index:
            raise UnknownVariable(variable=name)
        return self._index[name]

    @property
    def gens(self) -> Tuple['RingElement', ...]:
        return tuple(self.var(v) for v in self.variables)

    @property
    def zero(self) -> 'RingElement':
        return RingElement(self, self.poly_ring.zero)

    @property
    def one(self) -> 'RingElement':
        return RingElement(self, self.reduce(self.poly_ring.one))

    @property
    def is_zero_ring(self) -> bool:
        return any(g == self.poly_ring.one for g in self.relation_basis)

    def dimension(self) -> int:
        """Dimension de Krull de R (cache) ; −1 pour l'anneau nul"""
        if self._dimension is None:
            from .groebner import IdealHandle, quotient_dimension
            dim = quotient_dimension(IdealHandle(self, ()))
            self._dimension = -1 if dim is None else dim
        return self._dimension

    def random_element(self, rng, degree: int, box: int) -> 'RingElement':
        """Polynôme aléatoire de degré ≤ degree, coefficients dans [-box, box]"""
        variables = [v for v in self.variables if v != HOMOTOPY_VARIABLE or self.base is None]
        terms = {}
        for monom in monomials_up_to(len(variables), degree):
            coeff = rng.randint(-box, box)
            if coeff:
                full = [0] * len(self.variables)
                for name, exponent in zip(variables, monom):
                    full[self._index[name]] = exponent
                terms[tuple(full)] = self.field.convert(coeff)
        return self.element(self.poly_ring.from_dict(terms))

    # ---------- identity ----------

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return f"{self.field}[{', '.join(self.variables)}]"

    def _signature(self):
        return (self.field, self.variables, self.order_name,
                tuple(frozenset(g.items()) for g in self.relation_basis))

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, PresentedRing) and self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())

    def check_same(self, other: 'PresentedRing'):
        if self != other:
            raise RingMismatch(left=self.label, right=other.label)

    def format(self, poly: PolyElement) -> str:
        return format_polynomial(poly, self.variables, self.field)

    def __str__(self):
        text = f"{self.field}[{', '.join(self.variables)}]"
        if self.relations:
            text += " / (" + ', '.join(self.format(r) for r in self.relations) + ")"
        return text

    def __repr__(self):
        return f"PresentedRing({self})"


# ==================== ELEMENTS ====================


class RingElement:
    """Élément d'un anneau présenté, toujours en forme normale"""

    __slots__ = ('ring', 'poly')

    def __init__(self, ring: PresentedRing, poly: PolyElement):
        self.ring = ring
        self.poly = poly

    def _coerce(self, other) -> Optional['RingElement']:
        if isinstance(other, RingElement):
            self.ring.check_same(other.ring)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring, self.poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring, self.poly - other.poly)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring, other.poly - self.poly)

    def __neg__(self):
        return RingElement(self.ring, -self.poly)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.ring.element(self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("Negative exponent")
        result = self.ring.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base if exponent > 1 else base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.poly == other.poly

    def __hash__(self):
        return hash(frozenset(self.poly.items()))

    def __bool__(self):
        return bool(self.poly)

    @property
    def is_zero(self) -> bool:
        return not self.poly

    def constant_value(self) -> Optional[Fraction]:
        """La valeur si l'élément est constant, sinon None"""
        if not self.poly:
            return Fraction(0)
        if len(self.poly) == 1:
            monom, coeff = next(iter(self.poly.items()))
            if not any(monom):
                return self.ring.field.to_fraction(coeff)
        return None

    def degree(self) -> int:
        """Degré total (−1 pour zéro)"""
        if not self.poly:
            return -1
        return max(sum(m) for m in self.poly.keys())

    def __len__(self):
        return len(self.poly)

    def __str__(self):
        return self.ring.format(self.poly)

    def __repr__(self):
        return f"RingElement({self})"


# ==================== RING-CORE OPERATIONS ====================

def make_ring(field: Union[CoefficientField, str, int], variables: Sequence[str],
              relations: Iterable = (), order: str = DEFAULT_ORDER,
              name: Optional[str] = None) -> PresentedRing:
    """
    Construit un anneau présenté.

    Les relations peuvent être des chaînes ('x^2 + y^2 - 1'), des arbres
    d'expression ou des PolyElement ; la base de Gröbner des relations est
    calculée et mise en cache.
    """
    if isinstance(field, str):
        field = CoefficientField.from_name(field)
    elif isinstance(field, int):
        field = CoefficientField(field)
    free = PresentedRing(field, variables, (), order=order, name=name)
    polys = [to_polynomial(r, free) for r in relations]
    ring = PresentedRing(field, variables, polys, order=order, name=name)
    logger.info(f"make_ring: {ring}")
    return ring


def to_polynomial(value, ring: PresentedRing) -> PolyElement:
    """Chaîne, arbre ou élément -> PolyElement de l'anneau ambiant (non réduit)"""
    from .expr import evaluate, parse_expression, Num, Var, Neg, BinOp, Pow
    if isinstance(value, PolyElement):
        return value
    if isinstance(value, RingElement):
        return transfer(value.poly, value.ring, ring)
    if isinstance(value, str):
        value = parse_expression(value)
    if isinstance(value, (Num, Var, Neg, BinOp, Pow)):
        return evaluate(value, ring).poly
    return ring.poly_ring.ground_new(ring.field.convert(value))


def normal_form(p, ring: PresentedRing) -> RingElement:
    """Reste unique de p modulo la base réduite des relations"""
    if isinstance(p, RingElement) and p.ring is ring:
        return p
    if isinstance(p, RingElement):
        return ring(p)
    return ring.element(to_polynomial(p, ring))


def transfer(poly: PolyElement, source: PresentedRing, target: PresentedRing) -> PolyElement:
    """Renomme les monômes de source vers target (variables appariées par nom)"""
    if source.variables == target.variables and source.field == target.field:
        if source.poly_ring == target.poly_ring:
            return poly
        return target.poly_ring.from_dict(dict(poly))
    if source.field != target.field:
        raise RingMismatch(left=source.label, right=target.label)
    mapping = []
    for i, name in enumerate(source.variables):
        mapping.append(target._index.get(name))
    width = len(target.variables)
    terms = {}
    for monom, coeff in poly.items():
        new = [0] * width
        for i, exponent in enumerate(monom):
            if exponent:
                j = mapping[i]
                if j is None:
                    raise UnknownVariable("Variable missing in target ring", source.variables[i])
                new[j] = exponent
        terms[tuple(new)] = coeff
    return target.poly_ring.from_dict(terms)


def embed(element: RingElement, target: PresentedRing) -> RingElement:
    """Image de element dans un anneau contenant ses variables (R -> R[T])"""
    return target.element(transfer(element.poly, element.ring, target))


def substitute(p: RingElement, assignment: Mapping[str, object],
               target: Optional[PresentedRing] = None) -> RingElement:
    """
    Évalue des variables de p puis renormalise.

    Les valeurs sont des constantes du corps ou des RingElement de l'anneau
    cible. Par défaut la cible est l'anneau de base pour R[T], sinon l'anneau
    de p lui-même.
    """
    source = p.ring
    for name in assignment:
        if name not in source._index:
            raise UnknownVariable(variable=name)
    if target is None:
        target = source.base if source.base is not None and set(assignment) >= {source.variables[-1]} else source

    field = source.field
    constants: Dict[int, object] = {}
    symbolic: Dict[int, RingElement] = {}
    for name, value in assignment.items():
        index = source._index[name]
        if isinstance(value, RingElement):
            constant = value.constant_value()
            if constant is None:
                target.check_same(value.ring)
                symbolic[index] = value
                continue
            value = constant
        constants[index] = field.convert(value)

    keep = [(i, target._index.get(name)) for i, name in enumerate(source.variables)
            if i not in constants and i not in symbolic]
    width = len(target.variables)
    domain = field.domain
    grouped: Dict[Tuple, Dict[Tuple[int, ...], object]] = {}
    for monom, coeff in p.poly.items():
        for i, value in constants.items():
            if monom[i]:
                coeff = coeff * value ** monom[i]
        if not coeff:
            continue
        new = [0] * width
        for i, j in keep:
            if monom[i]:
                if j is None:
                    raise UnknownVariable("Variable missing in target ring", source.variables[i])
                new[j] = monom[i]
        key = tuple(monom[i] for i in symbolic)
        bucket = grouped.setdefault(key, {})
        new = tuple(new)
        total = bucket.get(new, domain.zero) + coeff
        if total:
            bucket[new] = total
        else:
            bucket.pop(new, None)

    result = target.poly_ring.zero
    indices = list(symbolic)
    for key, terms in grouped.items():
        part = target.poly_ring.from_dict(terms)
        for i, exponent in zip(indices, key):
            if exponent:
                part = part * symbolic[i].poly ** exponent
        result += part
    return target.element(result)
