"""
Idéaux orientés (I, ω) et classe de Segre universelle.

Le relèvement idempotent suit l'astuce du déterminant : dans R/⟨a⟩ l'image
de I est idempotente, donc (Id − M)·g ≡ 0 pour une matrice M à coefficients
dans I, et s = 1 − det(Id − M) convient.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .exceptions import ConstructionFailed, NotMember, NotOriented
from .groebner import (
    IdealHandle,
    certificate_search,
    contains,
    express,
    ideal_equal,
    ideal_power,
    ideal_sum,
)
from .quadric import QuadricPoint, base_point, vanishing_ideal
from .ring import PresentedRing, RingElement

logger = logging.getLogger(__name__)

# Au-delà, la recherche de certificats par algèbre linéaire devient trop large
CERTIFICATE_MAX_VARIABLES = 4
CERTIFICATE_MAX_DEGREE = 2

# ==================== ORIENTATIONS ====================


def check_orientation(I: IdealHandle, a: Sequence[RingElement]) -> bool:
    """aᵢ ∈ I pour tout i et I = ⟨a⟩ + I²"""
    ring = I.ring
    for ai in a:
        ring.check_same(ai.ring)
        if not contains(I, ai):
            return False
    generated = ideal_sum(IdealHandle(ring, a), ideal_power(I, 2))
    return ideal_equal(generated, I)


@dataclass(frozen=True)
class OrientedIdeal:
    """(I, ω) avec ω représentée par a₁..a_n engendrant I/I²"""

    ideal: IdealHandle
    a: Tuple[RingElement, ...]

    @classmethod
    def build(cls, ideal: IdealHandle, a: Sequence, check: bool = True) -> 'OrientedIdeal':
        a = tuple(ideal.ring(x) for x in a)
        if check and not check_orientation(ideal, a):
            raise NotOriented(reason=f"{tuple(str(x) for x in a)} does not generate {ideal} modulo its square")
        return cls(ideal, a)

    @property
    def ring(self) -> PresentedRing:
        return self.ideal.ring

    @property
    def n(self) -> int:
        return len(self.a)

    def __str__(self):
        return f"({self.ideal}, [{', '.join(str(x) for x in self.a)}])"


# ==================== DETERMINANT LIFT ====================


@dataclass(frozen=True)
class LiftCertificate:
    """Générateurs g de I et matrice M ⊆ I avec (Id − M)·g ∈ ⟨a⟩"""

    generators: Tuple[RingElement, ...]
    matrix: Tuple[Tuple[RingElement, ...], ...]

    def residues(self) -> List[RingElement]:
        """Composantes de (Id − M)·g"""
        result = []
        for i, gi in enumerate(self.generators):
            total = gi
            for mij, gj in zip(self.matrix[i], self.generators):
                total = total - mij * gj
            result.append(total)
        return result

    def verify(self, oriented: OrientedIdeal) -> bool:
        span = IdealHandle(oriented.ring, oriented.a)
        entries_ok = all(contains(oriented.ideal, m) for row in self.matrix for m in row)
        return entries_ok and all(contains(span, r) for r in self.residues())


def _lowest_certificate(f: RingElement, span: Sequence[RingElement]) -> List[RingElement]:
    """Cofacteurs de f sur span, au plus bas degré quand l'anneau est petit"""
    ring = f.ring
    if len(ring.variables) <= CERTIFICATE_MAX_VARIABLES:
        for degree in range(CERTIFICATE_MAX_DEGREE + 1):
            found = certificate_search(f, span, degree)
            if found is not None:
                return found
    return express(f, IdealHandle(ring, span))


def find_certificate(oriented: OrientedIdeal, rng=None) -> LiftCertificate:
    """
    Exprime chaque générateur gᵢ de I sur a et les produits gⱼgₗ, puis range
    les coefficients des produits dans la matrice M.
    """
    ring = oriented.ring
    generators = [g for g in oriented.ideal.generators if g]
    if rng is not None:
        rng.shuffle(generators)
    m = len(generators)
    pairs = [(j, l) for j in range(m) for l in range(j, m)]
    span = list(oriented.a) + [generators[j] * generators[l] for j, l in pairs]

    matrix = [[ring.zero] * m for _ in range(m)]
    for i, gi in enumerate(generators):
        try:
            coefficients = _lowest_certificate(gi, span)
        except NotMember:
            raise NotOriented(reason=f"generator {gi} is not in <a> + I^2")
        for (j, l), q in zip(pairs, coefficients[oriented.n:]):
            if q:
                matrix[i][j] = matrix[i][j] + q * generators[l]
    return LiftCertificate(tuple(generators), tuple(tuple(row) for row in matrix))


def _determinant(rows: Sequence[Sequence[RingElement]], ring: PresentedRing) -> RingElement:
    size = len(rows)
    if size == 0:
        return ring.one
    domain = ring.poly_ring.to_domain()
    matrix = DomainMatrix([[entry.poly for entry in row] for row in rows], (size, size), domain)
    return ring.element(matrix.det())


def idempotent_lift(oriented: OrientedIdeal, certificate: Optional[LiftCertificate] = None,
                    rng=None) -> Tuple[RingElement, Tuple[RingElement, ...]]:
    """
    (s, b) avec s ∈ I, I = ⟨a, s⟩ et s(1 − s) = Σ aᵢbᵢ.

    Si a engendre déjà I, s = 0 et b = 0 ; pour l'idéal unité, s = 1.
    """
    ring = oriented.ring
    I = oriented.ideal
    zeros = (ring.zero,) * oriented.n
    span = IdealHandle(ring, oriented.a)
    if ideal_equal(span, I):
        return ring.zero, zeros
    if I.is_unit:
        return ring.one, zeros

    if certificate is None:
        certificate = find_certificate(oriented, rng)
    size = len(certificate.generators)
    identity_minus = [[(ring.one if i == j else ring.zero) - certificate.matrix[i][j] for j in range(size)]
                      for i in range(size)]
    s = ring.one - _determinant(identity_minus, ring)

    try:
        b = tuple(express(s * (1 - s), span))
    except NotMember:
        raise ConstructionFailed(stage="idempotent lift: s(1-s) not in <a>")

    if not contains(I, s) or not ideal_equal(IdealHandle(ring, oriented.a + (s,)), I):
        raise ConstructionFailed(stage="idempotent lift: <a, s> differs from I")
    logger.debug(f"idempotent_lift: s = {s}")
    return s, b


def segre_class(oriented: OrientedIdeal, certificate: Optional[LiftCertificate] = None,
                rng=None) -> QuadricPoint:
    """Le point (a, b, s) de Q_2n ; le point de base pour l'idéal unité"""
    ring = oriented.ring
    if oriented.ideal.is_unit:
        return base_point(ring, oriented.n)
    s, b = idempotent_lift(oriented, certificate, rng)
    point = QuadricPoint(ring, oriented.a, b, s)
    if point.residual():
        raise ConstructionFailed(stage="segre class equation")
    if not ideal_equal(vanishing_ideal(point), oriented.ideal):
        raise ConstructionFailed(stage="segre class vanishing ideal")
    logger.info(f"segre_class: {point}")
    return point


# ==================== CLOSED-FORM CRT LIFT ====================


@dataclass(frozen=True)
class CrtLift:
    """c = E²a + e²a′ et (w, d) avec w(1 − w) = c·dᵗ, w ∈ I(v), ⟨c, w⟩ = I(v)"""

    c: Tuple[RingElement, ...]
    w: RingElement
    d: Tuple[RingElement, ...]
    verified: bool


def _dot(left, right, ring) -> RingElement:
    total = ring.zero
    for x, y in zip(left, right):
        total = total + x * y
    return total


def crt_lift(point: QuadricPoint, e: RingElement, cofactors=None,
             other: Sequence[RingElement] = ()) -> CrtLift:
    """
    Relèvement fermé pour l'orientation c = (1 − e)²a + e²a′ de I(v).

    e ∈ I(v) s'écrit u·a + u₀s ; cofactors = (u, u₀) si déjà connus, sinon
    calculés par express. Évite tout calcul de base sur des anneaux larges.
    """
    ring = point.ring
    a, b, s = point.a, point.b, point.s
    if cofactors is None:
        coefficients = express(e, vanishing_ideal(point))
        u, u0 = tuple(coefficients[:-1]), coefficients[-1]
    else:
        u, u0 = tuple(cofactors[0]), cofactors[1]

    E = 1 - e
    E2, e2 = E * E, e * e
    c = tuple(E2 * ai + e2 * api for ai, api in zip(a, other))
    one_minus_s = 1 - s
    phi = tuple(one_minus_s * ui + u0 * bi for ui, bi in zip(u, b))
    p = _dot(other, phi, ring)
    w = 1 - one_minus_s * E2 - e * p
    g = tuple(e * (ai + api) - 2 * ai for ai, api in zip(a, other))
    A = 1 + E - p
    alpha = u0 * A + E2
    ug = _dot(u, g, ring)
    gb = _dot(g, b, ring)
    one_minus_w = 1 - w
    d = tuple(A * (one_minus_w * ui - ug * phii) + alpha * ((1 + ug) * bi - gb * ui)
              for ui, phii, bi in zip(u, phi, b))
    verified = w * one_minus_w == _dot(c, d, ring)
    if not verified:
        logger.warning("crt_lift: w(1-w) != c.d")
    return CrtLift(c, w, d, verified)
