"""
Groupe d'Euler : symboles (I, ω), relations avec témoins, réduction d'une
somme formelle à un seul symbole, homomorphisme de Segre, classes faibles
et l'application φ des lignes unimodulaires.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .cohomotopy import (
    CohomotopyClass,
    Ledger,
    MoveConstraints,
    Witness,
    compose_detailed,
    homotopy_witness,
    inverse_detailed,
    relation_one_homotopy,
)
from .exceptions import (
    ArityMismatch,
    ConstructionFailed,
    HeightViolation,
    MoveFailed,
    NotComaximal,
    NotCompleteIntersection,
    NotMember,
    RangeViolation,
)
from .groebner import (
    INFINITE,
    ComaximalityWitness,
    IdealHandle,
    comaximal_witness,
    contains,
    dimension_height,
    express,
    ideal_equal,
    ideal_intersection,
    ideal_power,
    ideal_product,
    ideal_quotient,
    ideal_sum,
    quotient_dimension,
    reduce_modulo,
    unit_ideal,
    vector_space_dimension,
)
from .quadric import HomotopyPoint, QuadricPoint, base_point, homotopy_ring, is_valid
from .ring import HOMOTOPY_VARIABLE, PresentedRing, RingElement, embed
from .segre import OrientedIdeal, segre_class

logger = logging.getLogger(__name__)

# ==================== TYPES ====================


@dataclass(frozen=True)
class EulerSymbol:
    """(I, ω) avec ht(I) = n, ou l'idéal unité pour le symbole nul"""

    oriented: OrientedIdeal
    n: int

    @classmethod
    def build(cls, ideal: IdealHandle, a: Sequence, n: Optional[int] = None,
              check: bool = True) -> 'EulerSymbol':
        n = len(a) if n is None else n
        if ideal.is_unit:
            return cls.zero(ideal.ring, n)
        if len(a) != n:
            raise ArityMismatch(expected=n, found=len(a))
        oriented = OrientedIdeal.build(ideal, a, check=check)
        if check:
            height = dimension_height(ideal).height
            if height != n:
                raise HeightViolation(height=height, n=n)
        return cls(oriented, n)

    @classmethod
    def zero(cls, ring: PresentedRing, n: int) -> 'EulerSymbol':
        return cls(OrientedIdeal(unit_ideal(ring), ()), n)

    @property
    def ideal(self) -> IdealHandle:
        return self.oriented.ideal

    @property
    def a(self) -> Tuple[RingElement, ...]:
        return self.oriented.a

    @property
    def ring(self) -> PresentedRing:
        return self.oriented.ring

    @property
    def is_zero(self) -> bool:
        return self.ideal.is_unit

    def __str__(self):
        if self.is_zero:
            return "0"
        return str(self.oriented)


@dataclass(frozen=True)
class EulerSum:
    """Combinaison entière formelle de symboles de même anneau et même n"""

    ring: PresentedRing
    n: int
    terms: Tuple[Tuple[int, EulerSymbol], ...] = ()

    @classmethod
    def of(cls, *terms: Tuple[int, EulerSymbol]) -> 'EulerSum':
        if not terms:
            raise ValueError("EulerSum.of needs at least one term")
        first = terms[0][1]
        result = cls(first.ring, first.n)
        for coeff, symbol in terms:
            result = result.add(symbol, coeff)
        return result

    def add(self, symbol: EulerSymbol, coeff: int = 1) -> 'EulerSum':
        self.ring.check_same(symbol.ring)
        if symbol.n != self.n:
            raise ArityMismatch(expected=self.n, found=symbol.n)
        return EulerSum(self.ring, self.n, self.terms + ((coeff, symbol),))

    def __add__(self, other: 'EulerSum') -> 'EulerSum':
        result = self
        for coeff, symbol in other.terms:
            result = result.add(symbol, coeff)
        return result

    def __neg__(self) -> 'EulerSum':
        return EulerSum(self.ring, self.n, tuple((-c, s) for c, s in self.terms))

    def __sub__(self, other: 'EulerSum') -> 'EulerSum':
        return self + (-other)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for coeff, symbol in self.terms:
            sign = '-' if coeff < 0 else '+'
            factor = f"{abs(coeff)}*" if abs(coeff) != 1 else ''
            pieces.append(f"{sign} {factor}{symbol}")
        text = ' '.join(pieces)
        return text[2:] if text.startswith('+ ') else text


@dataclass(frozen=True)
class UnimodularRow:
    """Ligne (a₁..a_{d+1}) engendrant l'idéal unité"""

    ring: PresentedRing
    entries: Tuple[RingElement, ...]

    @classmethod
    def build(cls, ring: PresentedRing, entries: Sequence) -> 'UnimodularRow':
        entries = tuple(ring(x) for x in entries)
        if not IdealHandle(ring, entries).is_unit:
            raise NotComaximal("Row is not unimodular")
        return cls(ring, entries)

    @property
    def d(self) -> int:
        return len(self.entries) - 1

    def __str__(self):
        return "(" + ', '.join(str(x) for x in self.entries) + ")"


@dataclass(frozen=True)
class ElementaryWord:
    """Produit de facteurs Id + λE_ij (indices à partir de 1), appliqués dans l'ordre"""

    factors: Tuple[Tuple[int, int, RingElement], ...] = ()

    def __post_init__(self):
        for i, j, _ in self.factors:
            if i == j:
                raise ValueError(f"Elementary factor needs i != j, got ({i}, {j})")

    def then(self, i: int, j: int, coefficient: RingElement) -> 'ElementaryWord':
        return ElementaryWord(self.factors + ((i, j, coefficient),))

    def apply(self, vector: Sequence[RingElement]) -> Tuple[RingElement, ...]:
        """σ·a : aᵢ ← aᵢ + λaⱼ pour chaque facteur"""
        result = list(vector)
        for i, j, coefficient in self.factors:
            result[i - 1] = result[i - 1] + coefficient * result[j - 1]
        return tuple(result)

    def apply_dual(self, vector: Sequence[RingElement]) -> Tuple[RingElement, ...]:
        """σ⁻ᵗ·b : bⱼ ← bⱼ − λbᵢ ; préserve a·bᵗ"""
        result = list(vector)
        for i, j, coefficient in self.factors:
            result[j - 1] = result[j - 1] - coefficient * result[i - 1]
        return tuple(result)

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        return ' '.join(f"E({i},{j};{c})" for i, j, c in self.factors) or "Id"


# ==================== RELATIONS ====================

def _elementary_homotopy(v: QuadricPoint, i: int, j: int, coefficient: RingElement) -> HomotopyPoint:
    """σ(T) = Id + λT·E_ij appliqué à (a, b) ; s constant"""
    extended = homotopy_ring(v.ring)
    T = extended.var(HOMOTOPY_VARIABLE)
    lift = lambda x: embed(x, extended)
    scaled = T * lift(coefficient)
    a = [lift(x) for x in v.a]
    b = [lift(x) for x in v.b]
    a[i - 1] = a[i - 1] + scaled * a[j - 1]
    b[j - 1] = b[j - 1] - scaled * b[i - 1]
    return HomotopyPoint(QuadricPoint(extended, tuple(a), tuple(b), lift(v.s)))


def relation_witness(kind: str, symbol: EulerSymbol, factor: Optional[Tuple[int, int, object]] = None) -> Witness:
    """
    kind='lift' : homotopie (aT, 0, 0) du point nul vers (a, 0, 0), pour ⟨a⟩ = I.
    kind='elementary' : homotopie σ(T) entre s(I, ω) et s(σ·(I, ω)).
    """
    ring = symbol.ring
    if kind == 'lift':
        if symbol.is_zero or not is_complete_intersection(symbol):
            raise NotCompleteIntersection(f"Orientation of {symbol} does not generate its ideal")
        return homotopy_witness(relation_one_homotopy(ring, symbol.a), "relation: complete intersection")
    if kind == 'elementary':
        if factor is None:
            raise ValueError("An elementary relation needs a factor (i, j, lambda)")
        i, j, coefficient = factor
        n = symbol.n
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise ArityMismatch(f"Invalid elementary factor ({i}, {j})", expected=n, found=max(i, j))
        v = segre_class(symbol.oriented)
        h = _elementary_homotopy(v, i, j, ring(coefficient))
        return homotopy_witness(h, f"relation: elementary E({i},{j})")
    raise ValueError(f"Unknown relation kind {kind!r}")


def is_complete_intersection(symbol: EulerSymbol) -> bool:
    """Certificat positif de nullité : a engendre exactement I"""
    if symbol.is_zero:
        return True
    return ideal_equal(IdealHandle(symbol.ring, symbol.a), symbol.ideal)


def act(word: ElementaryWord, symbol: EulerSymbol) -> EulerSymbol:
    """σ·(I, ω)"""
    if symbol.is_zero:
        return symbol
    return EulerSymbol.build(symbol.ideal, word.apply(symbol.a), symbol.n)


@dataclass(frozen=True)
class MergeCertificate:
    """Fusion de deux symboles comaximaux : e ∈ J, e′ ∈ K, e + e′ = 1"""

    left: EulerSymbol
    right: EulerSymbol
    comaximality: Optional[ComaximalityWitness]
    merged: EulerSymbol

    def verify(self) -> bool:
        """Rejoue la fusion : témoin de comaximalité, idéal JK, représentants CRT"""
        if self.left.is_zero or self.right.is_zero:
            return self.merged == (self.right if self.left.is_zero else self.left)
        if self.comaximality is None:
            return False
        J, K = self.left.ideal, self.right.ideal
        e, e_prime = self.comaximality.e, self.comaximality.e_prime
        if e + e_prime != J.ring.one or not contains(J, e) or not contains(K, e_prime):
            return False
        product = ideal_product(J, K)
        if not ideal_equal(self.merged.ideal, product):
            return False
        square = ideal_power(product, 2)
        return all(contains(square, m - (e_prime * e_prime * x + e * e * y))
                   for m, x, y in zip(self.merged.a, self.left.a, self.right.a))


def merge_detailed(left: EulerSymbol, right: EulerSymbol) -> MergeCertificate:
    """(J, ω_J) + (K, ω_K) = (JK, e_K²·a_J + e_J²·a_K mod (JK)²)"""
    left.ring.check_same(right.ring)
    if left.is_zero or right.is_zero:
        return MergeCertificate(left, right, None, right if left.is_zero else left)
    witness = comaximal_witness(left.ideal, right.ideal)
    e_left, e_right = witness.e, witness.e_prime
    product = ideal_product(left.ideal, right.ideal).simplified()
    square = ideal_power(product, 2)
    reps = tuple(reduce_modulo(e_right * e_right * x + e_left * e_left * y, square)
                 for x, y in zip(left.a, right.a))
    return MergeCertificate(left, right, witness, EulerSymbol.build(product, reps, left.n))


def merge(left: EulerSymbol, right: EulerSymbol) -> EulerSymbol:
    return merge_detailed(left, right).merged


def split(symbol: EulerSymbol, J: IdealHandle, K: IdealHandle) -> Tuple[EulerSymbol, EulerSymbol]:
    """Orientations induites sur J et K par réduction modulo J² et K²"""
    if not ideal_sum(J, K).is_unit:
        raise NotComaximal(f"Ideals {J} and {K} are not comaximal")
    if not ideal_equal(ideal_product(J, K), symbol.ideal):
        raise ConstructionFailed(stage=f"split: {J} * {K} differs from {symbol.ideal}")
    pieces = []
    for factor in (J, K):
        square = ideal_power(factor, 2)
        reps = tuple(reduce_modulo(x, square) for x in symbol.a)
        pieces.append(EulerSymbol.build(factor, reps, symbol.n))
    return pieces[0], pieces[1]


def split_merge(direction: str, *data):
    if direction == 'merge':
        return merge(*data)
    if direction == 'split':
        return split(*data)
    raise ValueError(f"Unknown direction {direction!r}")


# ==================== MOVING LEMMA ====================

def _moving_failure(I, I_square, a, f, K, avoid, n) -> Optional[str]:
    if not all(contains(I_square, fi - ai) for fi, ai in zip(f, a)):
        return "f - a not in I^2"
    if not ideal_sum(I_square, K).is_unit:
        return "I^2 + K is not the unit ideal"
    height = dimension_height(K).height
    if height != INFINITE and height < n:
        return f"ht(K) = {height} < {n}"
    for J, dim_J in avoid:
        dim = quotient_dimension(ideal_sum(J, K))
        if dim is not None and (dim_J is None or dim > dim_J - n):
            return f"dim(R/(J + K)) = {dim} for J = {J}"
    if not ideal_equal(IdealHandle(I.ring, f), ideal_intersection(I, K)):
        return "<f> differs from I and K intersected"
    return None


def moving_euler(oriented: OrientedIdeal, avoid: Sequence[IdealHandle] = (), rng=None,
                 degree_cap: int = 2, attempt_cap: int = 60) -> Tuple[IdealHandle, Tuple[RingElement, ...]]:
    """
    K et f avec f ⊆ I ∩ K, f ≡ a mod I², I² + K = R, ht(K) ≥ n, et K en
    position générale par rapport aux idéaux évités. fᵢ = aᵢ + εᵢ avec
    εᵢ ∈ I² aléatoire (ε = 0 d'abord) et K = ⟨f⟩ : I.
    """
    rng = rng or random.Random(0)
    ring, n = oriented.ring, oriented.n
    I = oriented.ideal
    height = dimension_height(I).height
    if height != n:
        raise HeightViolation(height=height, n=n)
    I_square = ideal_power(I, 2).simplified()
    squares = [g for g in I_square.generators if g]
    avoid = [(J, quotient_dimension(J)) for J in avoid]

    failed, last = "no attempt", None
    for attempt in range(attempt_cap):
        if attempt == 0:
            epsilon = (ring.zero,) * n
        else:
            box = 1 + attempt // 10
            degree = rng.randint(0, degree_cap)
            epsilon = tuple(
                sum((ring.random_element(rng, degree, box) * g for g in squares), ring.zero)
                for _ in range(n))
        f = tuple(ai + ei for ai, ei in zip(oriented.a, epsilon))
        K = ideal_quotient(IdealHandle(ring, f), I)
        failed = _moving_failure(I, I_square, oriented.a, f, K, avoid, n)
        if failed is None:
            logger.info(f"moving_euler: K = {K.simplified()} after {attempt + 1} attempts")
            return K.simplified(), f
        last = f
        logger.debug(f"moving_euler: rejected f = {[str(x) for x in f]}: {failed}")
    raise MoveFailed(last_candidate=[str(x) for x in last] if last else None,
                     failed_condition=failed, attempts=attempt_cap)


@dataclass(frozen=True)
class ResidualCertificate:
    """
    (I, ω) + (K, ω_K) = 0 : les données (K, f) du lemme de déplacement, le
    témoin I + K = R, et l'homotopie de levée (f·T, 0, 0) du symbole
    (IK, f), intersection complète.
    """

    symbol: EulerSymbol
    partner: EulerSymbol
    K: IdealHandle
    f: Tuple[RingElement, ...]
    comaximality: ComaximalityWitness
    witness: Witness

    @property
    def complete_intersection(self) -> IdealHandle:
        return IdealHandle(self.symbol.ring, self.f)

    def degree(self) -> int:
        """dim_k(R/⟨f⟩)"""
        return vector_space_dimension(self.complete_intersection)

    def verify(self) -> bool:
        ring, I, K = self.symbol.ring, self.symbol.ideal, self.K
        e, e_prime = self.comaximality.e, self.comaximality.e_prime
        if e + e_prime != ring.one or not contains(I, e) or not contains(K, e_prime):
            return False
        square = ideal_power(I, 2)
        if not all(contains(square, fi - ai) for fi, ai in zip(self.f, self.symbol.a)):
            return False
        if not ideal_equal(self.complete_intersection, ideal_product(I, K)):
            return False
        if K.is_unit != self.partner.is_zero:
            return False
        if not self.partner.is_zero and not (ideal_equal(self.partner.ideal, K) and self.partner.a == self.f):
            return False
        lifted = QuadricPoint(ring, self.f, (ring.zero,) * len(self.f), ring.zero)
        return self.witness.target == lifted and is_valid(self.witness.homotopy)


def residual_certificate(symbol: EulerSymbol, avoid: Sequence[IdealHandle] = (), rng=None,
                         degree_cap: int = 2, attempt_cap: int = 60) -> ResidualCertificate:
    """Partenaire résiduel d'un symbole non nul, avec ses certificats"""
    K, f = moving_euler(symbol.oriented, avoid, rng, degree_cap, attempt_cap)
    if K.is_unit:
        partner = EulerSymbol.zero(symbol.ring, symbol.n)
    else:
        partner = EulerSymbol.build(K, f, symbol.n)
    comaximality = comaximal_witness(symbol.ideal, K)
    witness = homotopy_witness(relation_one_homotopy(symbol.ring, f), "relation: residual complete intersection")
    return ResidualCertificate(symbol, partner, K, f, comaximality, witness)


def residual_symbol(symbol: EulerSymbol, avoid: Sequence[IdealHandle] = (), rng=None,
                    degree_cap: int = 2, attempt_cap: int = 60) -> EulerSymbol:
    """(K, ω_K) avec (I, ω) + (K, ω_K) = 0"""
    if symbol.is_zero:
        return symbol
    return residual_certificate(symbol, avoid, rng, degree_cap, attempt_cap).partner


# ==================== REDUCTION ====================


@dataclass(frozen=True)
class ReductionStep:
    """
    Un pas de réécriture et son certificat :
    cancel : deux occurrences d'un même symbole regroupées ;
    negate : −multiplicity·S remplacé par multiplicity fois son partenaire résiduel ;
    separate : S = −(−S) par deux partenaires résiduels évitant la somme courante ;
    merge : fusion de deux symboles comaximaux.
    """

    kind: str
    detail: str
    combined: Tuple[EulerSymbol, ...] = ()
    residuals: Tuple[ResidualCertificate, ...] = ()
    crt: Optional[MergeCertificate] = None
    multiplicity: int = 1

    @property
    def witnesses(self) -> Tuple[Witness, ...]:
        return tuple(r.witness for r in self.residuals)

    def verify(self) -> bool:
        if self.kind == 'cancel':
            return len(self.combined) == 2 and _same_symbol(*self.combined)
        if self.kind == 'merge':
            return self.crt is not None and self.crt.verify()
        if not self.residuals or not all(r.verify() for r in self.residuals):
            return False
        if self.kind == 'negate':
            return len(self.residuals) == 1
        if self.kind == 'separate':
            first = self.residuals[0]
            if len(self.residuals) == 1:
                return first.partner.is_zero
            return len(self.residuals) == 2 and self.residuals[1].symbol == first.partner
        return False

    def degree_shift(self) -> int:
        """Degré signé des intersections complètes ⟨f⟩ introduites par le pas"""
        if self.kind == 'negate':
            return self.multiplicity * self.residuals[0].degree()
        if self.kind == 'separate':
            return sum(r.degree() for r in self.residuals[1:]) - self.residuals[0].degree()
        return 0

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class Reduction:
    symbol: EulerSymbol
    steps: Tuple[ReductionStep, ...]
    ledger: Ledger = field(default_factory=Ledger)

    def verify(self) -> bool:
        """Rejoue la chaîne : chaque certificat, l'enchaînement des fusions, le symbole final"""
        if not all(step.verify() for step in self.steps):
            return False
        previous = None
        for step in self.steps:
            if step.kind != 'merge':
                continue
            if previous is not None and step.crt.left != previous:
                return False
            previous = step.crt.merged
        if previous is not None and previous != self.symbol:
            return False
        return all(w in self.ledger.entries for step in self.steps for w in step.witnesses)

    def degree_shift(self) -> int:
        """
        deg(symbole final) − deg(somme) : nul pour une somme positive de
        termes comaximaux, sinon la somme des degrés des intersections
        complètes ⟨f⟩ traversées, nulles dans le groupe d'Euler faible.
        """
        return sum(step.degree_shift() for step in self.steps)


def _same_symbol(left: EulerSymbol, right: EulerSymbol) -> bool:
    return left.a == right.a and ideal_equal(left.ideal, right.ideal)


def _check_dimension(ring: PresentedRing, n: int, bound: int):
    dimension = ring.dimension()
    if dimension > bound:
        raise RangeViolation(dimension=dimension, bound=bound)


def reduce_to_single(S: EulerSum, rng=None, degree_cap: int = 2, attempt_cap: int = 60) -> Reduction:
    """
    Réécrit S en un seul symbole : les coefficients négatifs passent par
    l'idéal résiduel, les termes non comaximaux sont séparés par deux pas
    du lemme de déplacement, puis tout est fusionné. Chaque pas garde ses
    certificats ; les homotopies de levée vont dans le ledger.
    """
    rng = rng or random.Random(0)
    _check_dimension(S.ring, S.n, 2 * S.n - 1)
    options = dict(rng=rng, degree_cap=degree_cap, attempt_cap=attempt_cap)
    steps: List[ReductionStep] = []

    collected: List[List] = []
    for coeff, symbol in S.terms:
        if symbol.is_zero or coeff == 0:
            continue
        for entry in collected:
            if _same_symbol(entry[0], symbol):
                entry[1] += coeff
                steps.append(ReductionStep("cancel", f"{coeff:+d} {symbol} combined", combined=(entry[0], symbol)))
                break
        else:
            collected.append([symbol, coeff])

    positives: List[EulerSymbol] = []
    for symbol, coeff in collected:
        if coeff >= 0:
            positives.extend([symbol] * coeff)
            continue
        certificate = residual_certificate(symbol, **options)
        partner = certificate.partner
        steps.append(ReductionStep("negate", f"-{symbol} = {partner}",
                                   residuals=(certificate,), multiplicity=-coeff))
        if not partner.is_zero:
            positives.extend([partner] * -coeff)

    current = EulerSymbol.zero(S.ring, S.n)
    for symbol in positives:
        if not current.is_zero and not ideal_sum(current.ideal, symbol.ideal).is_unit:
            first = residual_certificate(symbol, (current.ideal,), **options)
            residuals = (first,)
            if not first.partner.is_zero:
                residuals += (residual_certificate(first.partner, (current.ideal,), **options),)
            moved = residuals[-1].partner
            steps.append(ReductionStep("separate", f"{symbol} = -{first.partner} = {moved}", residuals=residuals))
            symbol = moved
        if symbol.is_zero:
            continue
        certificate = merge_detailed(current, symbol)
        if not current.is_zero:
            steps.append(ReductionStep("merge", f"{current} + {symbol} = {certificate.merged}", crt=certificate))
        current = certificate.merged
    ledger = Ledger().record(*(w for step in steps for w in step.witnesses))
    logger.info(f"reduce_to_single: {current} in {len(steps)} steps, {len(ledger)} witnesses")
    return Reduction(current, tuple(steps), ledger)


# ==================== SEGRE HOMOMORPHISM ====================

def segre_hom(S: EulerSum, ledger: Optional[Ledger] = None,
              constraints: Optional[MoveConstraints] = None, rng=None) -> CohomotopyClass:
    """Σ cᵢ(Iᵢ, ωᵢ) ↦ composée des classes de Segre (inverses pour cᵢ < 0)"""
    _check_dimension(S.ring, S.n, 2 * S.n - 2)
    ledger = ledger or Ledger()
    constraints = constraints or MoveConstraints()
    rng = rng or random.Random(constraints.seed)
    current = base_point(S.ring, S.n)
    for coeff, symbol in S.terms:
        point = segre_class(symbol.oriented) if not symbol.is_zero else base_point(S.ring, S.n)
        if coeff < 0:
            inversion = inverse_detailed(point, ledger, constraints, rng)
            point, ledger = inversion.point, inversion.ledger
        for _ in range(abs(coeff)):
            composition = compose_detailed(current, point, ledger, constraints, rng)
            current, ledger = composition.point, composition.ledger
    return CohomotopyClass(current, ledger, in_range=True)


# ==================== WEAK CLASSES ====================


@dataclass(frozen=True)
class WeakClass:
    terms: Tuple[Tuple[IdealHandle, int], ...]
    degree: int

    def __str__(self):
        pieces = [f"{m}*{I}" for I, m in self.terms]
        return f"{' + '.join(pieces) or '0'} (degree {self.degree})"


def weak_class(S: EulerSum) -> WeakClass:
    """Oublie les orientations ; degré = Σ cᵢ·dim_k(R/Iᵢ)"""
    grouped: List[List] = []
    for coeff, symbol in S.terms:
        if symbol.is_zero:
            continue
        for entry in grouped:
            if ideal_equal(entry[0], symbol.ideal):
                entry[1] += coeff
                break
        else:
            grouped.append([symbol.ideal, coeff])
    degree = sum(m * vector_space_dimension(I) for I, m in grouped)
    terms = tuple((I, m) for I, m in grouped if m)
    return WeakClass(terms, degree)


# ==================== UNIMODULAR ROWS ====================

def row_section(row: UnimodularRow) -> Tuple[RingElement, ...]:
    """b avec a·bᵗ = 1 : le point de Q_{2n−1} associé à la ligne"""
    try:
        return tuple(express(row.ring.one, IdealHandle(row.ring, row.entries)))
    except NotMember:
        raise NotComaximal("Row is not unimodular")


@dataclass(frozen=True)
class PhiResult:
    symbol: EulerSymbol
    word: ElementaryWord
    row: UnimodularRow


def phi_detailed(row: UnimodularRow, rng=None, degree_cap: int = 2, attempt_cap: int = 60) -> PhiResult:
    """
    φ(a₁..a_{d+1}) = (⟨a₁..a_d⟩, a_{d+1}·(a₁..a_d) mod I²) pour une ligne
    spéciale ; sinon on ajoute des multiples aléatoires de a_{d+1} aux
    a₁..a_d, chaque pas étant enregistré dans un mot élémentaire.
    """
    rng = rng or random.Random(0)
    ring, d = row.ring, row.d
    entries = list(row.entries)
    word = ElementaryWord()
    last_height = None
    for attempt in range(attempt_cap):
        I = IdealHandle(ring, entries[:d])
        current = UnimodularRow(ring, tuple(entries))
        if I.is_unit:
            return PhiResult(EulerSymbol.zero(ring, d), word, current)
        last_height = dimension_height(I).height
        if last_height == d:
            square = ideal_power(I, 2)
            reps = tuple(reduce_modulo(entries[d] * x, square) for x in entries[:d])
            symbol = EulerSymbol.build(I, reps, d)
            logger.info(f"phi: {symbol} after {len(word)} elementary moves")
            return PhiResult(symbol, word, current)
        box = 1 + attempt // 10
        degree = rng.randint(0, degree_cap)
        for i in range(d):
            coefficient = ring.random_element(rng, degree, box)
            if coefficient:
                entries[i] = entries[i] + coefficient * entries[d]
                word = word.then(i + 1, d + 1, coefficient)
        logger.debug(f"phi: row not special (height {last_height}), moved to {[str(x) for x in entries]}")
    raise MoveFailed(last_candidate=[str(x) for x in entries],
                     failed_condition=f"height {last_height} != {d}", attempts=attempt_cap)


def phi(row: UnimodularRow, rng=None, degree_cap: int = 2, attempt_cap: int = 60) -> EulerSymbol:
    return phi_detailed(row, rng, degree_cap, attempt_cap).symbol
