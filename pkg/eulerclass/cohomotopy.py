"""
Loi de groupe sur les classes d'homotopie naïve vers Q_2n.

Chaque égalité affirmée est adossée à un témoin enregistré dans un Ledger :
une homotopie explicite (point sur R[T]), le critère idéal, ou l'idéal unité.
Le Ledger est une valeur : record() renvoie un nouveau ledger.
"""

import logging
import random
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exceptions import ArityMismatch, ConstructionFailed, MoveFailed
from .groebner import (
    INFINITE,
    ComaximalityWitness,
    IdealHandle,
    comaximal_witness,
    contains,
    dimension_height,
    ideal_equal,
    ideal_power,
    ideal_product,
    ideal_sum,
    quotient_dimension,
)
from .quadric import (
    HomotopyPoint,
    QuadricPoint,
    base_point,
    homotopy_ring,
    trivial_homotopies,
    validate,
    vanishing_ideal,
)
from .ring import HOMOTOPY_VARIABLE, embed
from .segre import check_orientation, crt_lift

logger = logging.getLogger(__name__)

HOMOTOPY = 'homotopy'
IDEAL = 'ideal'
UNIT = 'unit'
IDENTITY = 'identity'

# ==================== WITNESSES & LEDGER ====================


@dataclass(frozen=True)
class Witness:
    """Arête certifiée source ~ target"""

    kind: str
    source: QuadricPoint
    target: QuadricPoint
    homotopy: Optional[HomotopyPoint] = None
    note: str = ''

    def reversed(self) -> 'Witness':
        return replace(self, source=self.target, target=self.source)

    def __str__(self):
        text = f"{self.kind}: {self.source} ~ {self.target}"
        if self.homotopy is not None:
            text += f" via {self.homotopy}"
        if self.note:
            text += f" [{self.note}]"
        return text


def homotopy_witness(h: HomotopyPoint, note: str = '') -> Witness:
    """Valide h puis l'enregistre entre ses spécialisations T=0 et T=1"""
    validate(h)
    start, end = h.endpoints()
    return Witness(HOMOTOPY, start, end, h, note)


@dataclass(frozen=True)
class Ledger:
    """Suite de témoins, en ajout seul"""

    entries: Tuple[Witness, ...] = ()

    def record(self, *witnesses: Witness) -> 'Ledger':
        return Ledger(self.entries + tuple(witnesses))

    def record_homotopy(self, h: HomotopyPoint, note: str = '') -> 'Ledger':
        return self.record(homotopy_witness(h, note))

    def extend(self, other: 'Ledger') -> 'Ledger':
        return Ledger(self.entries + tuple(w for w in other.entries if w not in self.entries))

    def points(self) -> List[QuadricPoint]:
        seen = {}
        for w in self.entries:
            seen.setdefault(w.source, None)
            seen.setdefault(w.target, None)
        return list(seen)

    def __iter__(self) -> Iterator[Witness]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class CohomotopyClass:
    """Représentant, témoins accumulés, et le drapeau d ≤ 2n − 2"""

    representative: QuadricPoint
    ledger: Ledger = field(default_factory=Ledger)
    in_range: bool = True

    def __str__(self):
        return f"[{self.representative}]"


def in_range(ring, n: int) -> bool:
    return ring.dimension() <= 2 * n - 2


# ==================== MOVING ====================


@dataclass(frozen=True)
class MoveConstraints:
    avoid: Tuple[IdealHandle, ...] = ()
    seed: int = 0
    degree_cap: int = 2
    attempt_cap: int = 60

    def with_avoid(self, *ideals: IdealHandle) -> 'MoveConstraints':
        return replace(self, avoid=tuple(ideals))


@dataclass(frozen=True)
class MoveResult:
    point: QuadricPoint
    mu: Tuple
    homotopy: HomotopyPoint
    attempts: int


def moved_point(v: QuadricPoint, mu: Sequence) -> QuadricPoint:
    """(a + μ(1−s)², b(1 − μ·bᵗ), s + μ·bᵗ(1 − s))"""
    one_minus_s = 1 - v.s
    square = one_minus_s * one_minus_s
    mb = v.ring.zero
    for mi, bi in zip(mu, v.b):
        mb = mb + mi * bi
    a = tuple(ai + square * mi for ai, mi in zip(v.a, mu))
    b = tuple(bi * (1 - mb) for bi in v.b)
    return QuadricPoint(v.ring, a, b, v.s + mb * one_minus_s)


def move_homotopy(v: QuadricPoint, mu: Sequence) -> HomotopyPoint:
    """Insertion linéaire de Tμ : relie v (T=0) au point déplacé (T=1)"""
    extended = homotopy_ring(v.ring)
    T = extended.var(HOMOTOPY_VARIABLE)
    lift = lambda x: embed(x, extended)
    return HomotopyPoint(moved_point(
        QuadricPoint(extended, tuple(map(lift, v.a)), tuple(map(lift, v.b)), lift(v.s)),
        [T * lift(m) for m in mu]))


def _move_failure(candidate: QuadricPoint, avoid: Sequence[IdealHandle]) -> Optional[str]:
    N = vanishing_ideal(candidate)
    height = dimension_height(N).height
    if height != INFINITE and height < candidate.n:
        return f"ht(N) = {height} < {candidate.n}"
    for J in avoid:
        if not ideal_sum(N, J).is_unit:
            return f"N + {J} is not the unit ideal"
    return None


def move(v: QuadricPoint, constraints: Optional[MoveConstraints] = None, rng=None,
         skip_identity: bool = False) -> MoveResult:
    """
    Met v en position générale : ht(I(v′)) ≥ n et I(v′) + Jᵢ = R.

    μ = 0 est essayé d'abord, puis des μ aléatoires de degré ≤ degree_cap à
    coefficients dans une boîte qui grandit avec les essais.
    """
    constraints = constraints or MoveConstraints()
    rng = rng or random.Random(constraints.seed)
    ring, n = v.ring, v.n
    validate(v)
    for J in constraints.avoid:
        ring.check_same(J.ring)
        dim = quotient_dimension(J)
        if dim is not None and dim > n - 1:
            logger.warning(f"move: avoided ideal {J} has dim(R/J) = {dim} > n - 1 = {n - 1}")

    last, failed = None, "no attempt"
    for attempt in range(constraints.attempt_cap):
        if attempt == 0 and not skip_identity:
            mu = (ring.zero,) * n
        else:
            box = 1 + attempt // 10
            degree = rng.randint(0, constraints.degree_cap)
            mu = tuple(ring.random_element(rng, degree, box) for _ in range(n))
        candidate = moved_point(v, mu)
        failed = _move_failure(candidate, constraints.avoid)
        if failed is None:
            result = MoveResult(candidate, mu, move_homotopy(v, mu), attempt + 1)
            logger.info(f"move: accepted mu = {[str(m) for m in mu]} after {attempt + 1} attempts")
            return result
        last = mu
        logger.debug(f"move: rejected mu = {[str(m) for m in mu]}: {failed}")
    raise MoveFailed(last_candidate=[str(m) for m in last] if last else None,
                     failed_condition=failed, attempts=constraints.attempt_cap)


# ==================== IDEAL CRITERION ====================

def ideal_criterion(u: QuadricPoint, w: QuadricPoint) -> bool:
    """
    Même idéal I, aᵢ − a′ᵢ ∈ I², et a, a′ engendrent I/I².
    Deux points d'idéal unité passent toujours.
    """
    u.ring.check_same(w.ring)
    if u.n != w.n:
        raise ArityMismatch(expected=u.n, found=w.n)
    I = vanishing_ideal(u)
    if not ideal_equal(I, vanishing_ideal(w)):
        return False
    if I.is_unit:
        return True
    square = ideal_power(I, 2)
    if not all(contains(square, x - y) for x, y in zip(u.a, w.a)):
        return False
    return check_orientation(I, u.a) and check_orientation(I, w.a)


@dataclass(frozen=True)
class Equal:
    chain: Tuple[Witness, ...]

    def __bool__(self):
        return True

    def __str__(self):
        return f"equal ({len(self.chain)} step{'s' if len(self.chain) != 1 else ''})"


@dataclass(frozen=True)
class Unknown:
    def __bool__(self):
        return False

    def __str__(self):
        return "unknown"


def _criterion_witness(u: QuadricPoint, w: QuadricPoint) -> Optional[Witness]:
    if u == w:
        return Witness(IDENTITY, u, w)
    if not ideal_criterion(u, w):
        return None
    kind = UNIT if vanishing_ideal(u).is_unit else IDEAL
    return Witness(kind, u, w)


def provably_equal(u: QuadricPoint, w: QuadricPoint, ledger: Optional[Ledger] = None):
    """
    Equal(chaîne) si une chaîne de témoins relie u à w, sinon Unknown.
    Jamais de verdict d'inégalité.
    """
    u.ring.check_same(w.ring)
    if u.n != w.n:
        raise ArityMismatch(expected=u.n, found=w.n)
    direct = _criterion_witness(u, w)
    if direct is not None:
        return Equal((direct,))

    edges: Dict[QuadricPoint, List[Witness]] = {}
    entries = list(ledger or ())
    entries += [homotopy_witness(h, "trivial class") for h in trivial_homotopies(u.ring, u.n)]
    for witness in entries:
        if witness.source.n != u.n or witness.source.ring != u.ring:
            continue
        edges.setdefault(witness.source, []).append(witness)
        edges.setdefault(witness.target, []).append(witness.reversed())
    nodes = list(edges)

    visited = {u}
    queue = deque([(u, ())])
    criterion_cache: Dict[Tuple[str, str], bool] = {}

    def criterion(x, y):
        key = (x.sort_key(), y.sort_key())
        if key not in criterion_cache:
            criterion_cache[key] = x == y or ideal_criterion(x, y)
        return criterion_cache[key]

    while queue:
        node, chain = queue.popleft()
        if node != u and criterion(node, w):
            final = _criterion_witness(node, w)
            return Equal(chain + (final,))
        for witness in edges.get(node, ()):
            if witness.target not in visited:
                visited.add(witness.target)
                queue.append((witness.target, chain + (witness,)))
        for other in nodes:
            if other not in visited and criterion(node, other):
                visited.add(other)
                queue.append((other, chain + (_criterion_witness(node, other),)))
    return Unknown()


# ==================== COMPOSITION ====================


@dataclass(frozen=True)
class Composition:
    point: QuadricPoint
    left: QuadricPoint
    right: QuadricPoint
    witness: Optional[ComaximalityWitness]
    moves: Tuple[MoveResult, ...]
    in_range: bool
    ledger: Ledger


def _crt_compose(left: QuadricPoint, right: QuadricPoint) -> Tuple[QuadricPoint, ComaximalityWitness]:
    ring = left.ring
    # témoin calculé dans un ordre canonique : compose(u, w) == compose(w, u)
    swap = right.sort_key() < left.sort_key()
    first, second = (right, left) if swap else (left, right)
    witness = comaximal_witness(vanishing_ideal(first), vanishing_ideal(second))
    e_left = witness.e_prime if swap else witness.e
    e_right = 1 - e_left

    lift_left = crt_lift(left, e_left, None, right.a)
    lift_right = crt_lift(right, e_right, None, left.a)
    if not (lift_left.verified and lift_right.verified) or lift_left.c != lift_right.c:
        raise ConstructionFailed(stage="CRT lift")

    w1, d1 = lift_left.w, lift_left.d
    w2, d2 = lift_right.w, lift_right.d
    half = ring(Fraction(1, 2))
    k1 = w2 + w2 * w2
    k2 = w1 + w1 * w1
    delta = tuple(half * (k1 * x + k2 * y) for x, y in zip(d1, d2))
    point = QuadricPoint(ring, lift_left.c, delta, w1 * w2)

    if point.residual():
        raise ConstructionFailed(stage="composition equation")
    product = ideal_product(vanishing_ideal(left), vanishing_ideal(right))
    if not ideal_equal(vanishing_ideal(point), product):
        raise ConstructionFailed(stage="composition vanishing ideal")
    return point, ComaximalityWitness(e_left, e_right)


def _general_position(u: QuadricPoint, w: QuadricPoint, constraints: MoveConstraints,
                      rng, force: bool) -> Tuple[QuadricPoint, QuadricPoint, List[MoveResult]]:
    """Déplace u (et w si nécessaire) jusqu'à des idéaux comaximaux"""
    moves = []
    if not force and ideal_sum(vanishing_ideal(u), vanishing_ideal(w)).is_unit:
        return u, w, moves
    free = replace(constraints, avoid=())
    n = u.n
    points = [u, w]
    for index, point in enumerate(points):
        height = dimension_height(vanishing_ideal(point)).height
        if height != INFINITE and height < n:
            result = move(point, free, rng)
            moves.append(result)
            points[index] = result.point
    u, w = points
    if force or not ideal_sum(vanishing_ideal(u), vanishing_ideal(w)).is_unit:
        result = move(u, constraints.with_avoid(vanishing_ideal(w)), rng, skip_identity=force)
        moves.append(result)
        u = result.point
    return u, w, moves


def compose_detailed(u: QuadricPoint, w: QuadricPoint, ledger: Optional[Ledger] = None,
                     constraints: Optional[MoveConstraints] = None, rng=None) -> Composition:
    """
    h = (c, δ, w₁w₂) avec c = e′²a + e²a′ et
    δ = ½[(w₂ + w₂²)d₁ + (w₁ + w₁²)d₂] ; I(h) = I(u)·I(w).
    """
    u.ring.check_same(w.ring)
    if u.n != w.n:
        raise ArityMismatch(expected=u.n, found=w.n)
    ledger = ledger or Ledger()
    constraints = constraints or MoveConstraints()
    rng = rng or random.Random(constraints.seed)
    ring, n = u.ring, u.n
    validate(u)
    validate(w)
    flag = in_range(ring, n)

    unit_u = vanishing_ideal(u).is_unit
    unit_w = vanishing_ideal(w).is_unit
    if unit_u or unit_w:
        point = base_point(ring, n) if unit_u and unit_w else (u if unit_w else w)
        return Composition(point, u, w, None, (), flag, ledger)

    for attempt in range(2):
        left, right, moves = _general_position(u, w, constraints, rng, force=attempt > 0)
        try:
            point, witness = _crt_compose(left, right)
        except ConstructionFailed as e:
            if attempt:
                raise
            logger.warning(f"compose: {e}; retrying after a fresh move")
            rng = random.Random(rng.getrandbits(32))
            continue
        for m in moves:
            ledger = ledger.record_homotopy(m.homotopy, "general position move")
        logger.info(f"compose: {point}")
        return Composition(point, left, right, witness, tuple(moves), flag, ledger)
    raise ConstructionFailed(stage="compose")


def compose(u: QuadricPoint, w: QuadricPoint, ledger: Optional[Ledger] = None,
            constraints: Optional[MoveConstraints] = None, rng=None) -> QuadricPoint:
    return compose_detailed(u, w, ledger, constraints, rng).point


# ==================== INVERSE ====================


@dataclass(frozen=True)
class Inversion:
    point: QuadricPoint
    residual_ideal: IdealHandle
    f: Tuple
    composite: QuadricPoint
    ledger: Ledger
    certificate: object


def relation_one_homotopy(ring, a: Sequence) -> HomotopyPoint:
    """(a·T, 0, 0) : relie (a, 0, 0) en T=1 au point nul en T=0"""
    extended = homotopy_ring(ring)
    T = extended.var(HOMOTOPY_VARIABLE)
    zeros = (extended.zero,) * len(a)
    return HomotopyPoint(QuadricPoint(extended, tuple(T * embed(x, extended) for x in a), zeros, extended.zero))


def inverse_detailed(v: QuadricPoint, ledger: Optional[Ledger] = None,
                     constraints: Optional[MoveConstraints] = None, rng=None) -> Inversion:
    """
    Inverse par l'idéal résiduel : K et f avec ⟨f⟩ = I ∩ K, I² + K = R, puis
    w = s(K, f). compose(v, w) ~ (f, 0, 0) ~ (0, 0, 0) ~ point de base.
    """
    from .euler import moving_euler
    from .segre import OrientedIdeal, segre_class

    ledger = ledger or Ledger()
    constraints = constraints or MoveConstraints()
    rng = rng or random.Random(constraints.seed)
    ring, n = v.ring, v.n
    validate(v)
    I = vanishing_ideal(v)
    base = base_point(ring, n)
    if I.is_unit:
        return Inversion(base, I, (), base, ledger, Equal((Witness(UNIT, base, base),)))

    oriented = OrientedIdeal.build(I, v.a, check=False)
    K, f = moving_euler(oriented, (), rng=rng, degree_cap=constraints.degree_cap,
                        attempt_cap=constraints.attempt_cap)
    w = segre_class(OrientedIdeal.build(K, f, check=False))
    composition = compose_detailed(v, w, ledger, constraints, rng)
    h = composition.point

    ledger = composition.ledger
    target = QuadricPoint(ring, tuple(f), (ring.zero,) * n, ring.zero)
    if ideal_criterion(h, target):
        ledger = ledger.record(Witness(IDEAL, h, target, note="I K = <f>"))
    ledger = ledger.record_homotopy(relation_one_homotopy(ring, f), "complete intersection <f>")
    certificate = provably_equal(h, base, ledger)
    if not certificate:
        raise ConstructionFailed(stage="inverse certificate")
    logger.info(f"inverse: {w}")
    return Inversion(w, K, tuple(f), h, ledger, certificate)


def inverse(v: QuadricPoint, ledger: Optional[Ledger] = None,
            constraints: Optional[MoveConstraints] = None, rng=None) -> QuadricPoint:
    return inverse_detailed(v, ledger, constraints, rng).point
