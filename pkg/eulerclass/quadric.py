"""
Points de la quadrique Q_2n : triplets (a, b, s) avec a·bᵗ = s(1 − s).

Contient aussi les homotopies (points sur R[T]), le dispositif de Jouanolou
du produit de deux quadriques et la construction du pli (fold map).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exceptions import ArityMismatch, EquationViolated, UnsupportedN
from .groebner import IdealHandle
from .ring import (
    HOMOTOPY_VARIABLE,
    CoefficientField,
    PresentedRing,
    RingElement,
    embed,
    make_ring,
    substitute,
    transfer,
)

logger = logging.getLogger(__name__)

SUPPORTED_FOLD = (1, 2)

# ==================== POINTS ====================


def _coerce_all(ring: PresentedRing, values) -> Tuple[RingElement, ...]:
    return tuple(ring(v) for v in values)


@dataclass(frozen=True)
class QuadricPoint:
    """(a, b, s) sur un anneau présenté ; n = len(a)"""

    ring: PresentedRing
    a: Tuple[RingElement, ...]
    b: Tuple[RingElement, ...]
    s: RingElement

    @classmethod
    def of(cls, ring: PresentedRing, a: Sequence, b: Sequence, s) -> 'QuadricPoint':
        """Construit un point à partir de chaînes, d'entiers ou d'éléments"""
        a = _coerce_all(ring, a)
        b = _coerce_all(ring, b)
        if len(a) != len(b):
            raise ArityMismatch(expected=len(a), found=len(b))
        return cls(ring, a, b, ring(s))

    @property
    def n(self) -> int:
        return len(self.a)

    def residual(self) -> RingElement:
        """a·bᵗ − s(1 − s), en forme normale"""
        total = self.ring.zero
        for ai, bi in zip(self.a, self.b):
            total = total + ai * bi
        return total - self.s * (1 - self.s)

    def sort_key(self) -> str:
        return str(self)

    def __str__(self):
        a = ', '.join(str(x) for x in self.a)
        b = ', '.join(str(x) for x in self.b)
        return f"([{a}], [{b}], {self.s})"


@dataclass(frozen=True)
class HomotopyPoint:
    """Point de Q_2n(R[T]) ; ses spécialisations T = 0 et T = 1 sont homotopes"""

    point: QuadricPoint
    variable: str = HOMOTOPY_VARIABLE

    @property
    def base_ring(self) -> PresentedRing:
        return self.point.ring.base

    @property
    def n(self) -> int:
        return self.point.n

    def at(self, value) -> QuadricPoint:
        """Évaluation en T = value"""
        return restrict(self, value)

    def endpoints(self) -> Tuple[QuadricPoint, QuadricPoint]:
        return self.at(0), self.at(1)

    def __str__(self):
        return f"H{self.point}"


def homotopy_ring(ring: PresentedRing) -> PresentedRing:
    return ring.extend(HOMOTOPY_VARIABLE)


def homotopy(ring: PresentedRing, a: Sequence, b: Sequence, s) -> HomotopyPoint:
    """Homotopie donnée par ses composantes, en chaînes ou éléments de R[T]"""
    extended = homotopy_ring(ring)
    lift = lambda value: embed(value, extended) if isinstance(value, RingElement) and value.ring is ring else extended(value)
    a = tuple(lift(x) for x in a)
    b = tuple(lift(x) for x in b)
    if len(a) != len(b):
        raise ArityMismatch(expected=len(a), found=len(b))
    return HomotopyPoint(QuadricPoint(extended, a, b, lift(s)))


def restrict(h: HomotopyPoint, value) -> QuadricPoint:
    """Spécialise T en une constante du corps"""
    base = h.base_ring
    assignment = {h.variable: value}
    evaluate = lambda p: substitute(p, assignment, target=base)
    p = h.point
    return QuadricPoint(base, tuple(evaluate(x) for x in p.a), tuple(evaluate(x) for x in p.b), evaluate(p.s))


# ==================== VALIDATION ====================

def validate(value, n: Optional[int] = None) -> bool:
    """
    Vérifie l'équation de la quadrique ; pour une homotopie, vérifie aussi
    les deux extrémités. Lève EquationViolated avec le résidu sinon.
    """
    if isinstance(value, HomotopyPoint):
        validate(value.point, n)
        start, end = value.endpoints()
        validate(start, n)
        validate(end, n)
        return True
    if len(value.a) != len(value.b):
        raise ArityMismatch(expected=len(value.a), found=len(value.b))
    if n is not None and value.n != n:
        raise ArityMismatch(expected=n, found=value.n)
    residual = value.residual()
    if residual:
        raise EquationViolated(residual=str(residual), where=str(value))
    return True


def is_valid(value) -> bool:
    try:
        return validate(value)
    except (EquationViolated, ArityMismatch):
        return False


def vanishing_ideal(v: QuadricPoint) -> IdealHandle:
    """I(v) = ⟨a₁..a_n, s⟩"""
    return IdealHandle(v.ring, v.a + (v.s,))


# ==================== TRIVIAL CLASS ====================

def base_point(ring: PresentedRing, n: int) -> QuadricPoint:
    """(0..0, 0..0, 1)"""
    zeros = (ring.zero,) * n
    return QuadricPoint(ring, zeros, zeros, ring.one)


def zero_point(ring: PresentedRing, n: int) -> QuadricPoint:
    zeros = (ring.zero,) * n
    return QuadricPoint(ring, zeros, zeros, ring.zero)


def trivial_homotopies(ring: PresentedRing, n: int) -> List[HomotopyPoint]:
    """
    Chaîne reliant le point nul au point de base :
    (0, 0, 0) ~ (0, e₁, 0) ~ (0, e₁, 1) ~ (0, 0, 1).
    """
    extended = homotopy_ring(ring)
    T = extended.var(HOMOTOPY_VARIABLE)
    zeros = [extended.zero] * n

    def unit_vector(value):
        vector = list(zeros)
        vector[0] = value
        return tuple(vector)

    chain = [
        QuadricPoint(extended, tuple(zeros), unit_vector(T), extended.zero),
        QuadricPoint(extended, unit_vector(T * (1 - T)), unit_vector(extended.one), T),
        QuadricPoint(extended, tuple(zeros), unit_vector(1 - T), extended.one),
    ]
    return [HomotopyPoint(p) for p in chain]


# ==================== JOUANOLOU DEVICES ====================


@dataclass(frozen=True)
class SpacePresentation:
    """Anneau du dispositif avec le rôle de chaque bloc de variables"""

    ring: PresentedRing
    n: int
    roles: Mapping[str, Tuple[str, ...]]

    def block(self, role: str) -> Tuple[RingElement, ...]:
        return tuple(self.ring.var(name) for name in self.roles[role])

    def one(self, role: str) -> RingElement:
        (name,) = self.roles[role]
        return self.ring.var(name)


def quadric_ring(n: int, field=None, prime: bool = False) -> PresentedRing:
    """k[z, x, y]/(x·yᵗ − z + z²), coordonnées de Q_2n ; variables primées si prime"""
    field = field or CoefficientField.rationals()
    tag = 'p' if prime else ''
    z = f"z{tag}"
    xs = [f"x{tag}{i}" for i in range(1, n + 1)]
    ys = [f"y{tag}{i}" for i in range(1, n + 1)]
    equation = ' + '.join(f"{x}*{y}" for x, y in zip(xs, ys)) + f" - {z} + {z}^2"
    return make_ring(field, [z] + xs + ys, [equation], name=f"Q{2 * n}{tag}")


def jouanolou_complement(ring: PresentedRing, f: Sequence[RingElement],
                         names: Sequence[str], name: Optional[str] = None) -> PresentedRing:
    """R[w₁..w_m]/(Σ fᵢwᵢ − 1) : coordonnées du complémentaire de V(f)"""
    if len(names) != len(f):
        raise ArityMismatch(expected=len(f), found=len(names))
    variables = list(ring.variables) + list(names)
    target = PresentedRing(ring.field, variables, (), order=ring.order_name)
    relations = [transfer(r, ring, target) for r in ring.relations]
    total = target.poly_ring.zero
    for fi, wi in zip(f, names):
        total += transfer(fi.poly, ring, target) * target.poly_ring.gens[target.index(wi)]
    relations.append(total - target.poly_ring.one)
    return PresentedRing(ring.field, variables, relations, order=ring.order_name, name=name)


def jouanolou_device(n: int, field=None) -> SpacePresentation:
    """
    Dispositif de Jouanolou de Q_2n × Q_2n privé du lieu x = z = x′ = z′ = 0.

    Variables : z, x, y, z′, x′, y′, puis u, u_{n+1}, v, v_{n+1} ; z précède
    son bloc pour que les trois relations forment déjà une base de Gröbner.
    """
    if n < 1:
        raise UnsupportedN(n=n, supported=("n >= 1",))
    field = field or CoefficientField.rationals()
    roles = {
        'z': ('z',),
        'x': tuple(f"x{i}" for i in range(1, n + 1)),
        'y': tuple(f"y{i}" for i in range(1, n + 1)),
        'zp': ('zp',),
        'xp': tuple(f"xp{i}" for i in range(1, n + 1)),
        'yp': tuple(f"yp{i}" for i in range(1, n + 1)),
        'u': tuple(f"u{i}" for i in range(1, n + 1)),
        'u_last': (f"u{n + 1}",),
        'v': tuple(f"v{i}" for i in range(1, n + 1)),
        'v_last': (f"v{n + 1}",),
    }
    base_vars = list(roles['z'] + roles['x'] + roles['y'] + roles['zp'] + roles['xp'] + roles['yp'])
    equations = []
    for (z, xs, ys) in ((roles['z'][0], roles['x'], roles['y']), (roles['zp'][0], roles['xp'], roles['yp'])):
        equations.append(' + '.join(f"{x}*{y}" for x, y in zip(xs, ys)) + f" - {z} + {z}^2")
    product = make_ring(field, base_vars, equations)

    f = [product.var(v) for v in roles['x'] + roles['z'] + roles['xp'] + roles['zp']]
    names = roles['u'] + roles['u_last'] + roles['v'] + roles['v_last']
    ring = jouanolou_complement(product, f, names, name=f"J{2 * n}")
    logger.info(f"jouanolou_device: n={n}, {len(ring.variables)} variables")
    return SpacePresentation(ring, n, roles)


# ==================== FOLD MAP ====================


@dataclass(frozen=True)
class FoldMap:
    """Le morphisme (c, δ, ww′) du dispositif vers Q_2n et ses certificats"""

    device: SpacePresentation
    c: Tuple[RingElement, ...]
    displayed_c: Tuple[RingElement, ...]
    delta: Tuple[RingElement, ...]
    w: RingElement
    w_prime: RingElement
    d: Tuple[RingElement, ...]
    d_prime: Tuple[RingElement, ...]
    left_restriction: QuadricPoint
    right_restriction: QuadricPoint
    checks: Mapping[str, bool] = field(default_factory=dict)

    @property
    def point(self) -> QuadricPoint:
        return QuadricPoint(self.device.ring, self.c, self.delta, self.w * self.w_prime)

    @property
    def certified(self) -> bool:
        return all(self.checks.values())


def _section(device: SpacePresentation, side: str) -> Dict[str, int]:
    """Valeurs de la section i_l (side='left') ou i_r (side='right')"""
    roles = device.roles
    if side == 'left':
        kill, unit_point = ('xp', 'yp'), 'zp'
        zero_blocks, one_var = ('u', 'u_last', 'v'), 'v_last'
    else:
        kill, unit_point = ('x', 'y'), 'z'
        zero_blocks, one_var = ('v', 'v_last', 'u'), 'u_last'
    assignment = {name: 0 for role in kill + zero_blocks for name in roles[role]}
    assignment[roles[unit_point][0]] = 1
    assignment[roles[one_var][0]] = 1
    return assignment


def fold_map(n: int, field=None) -> FoldMap:
    """
    Construit le pli ∇ sur le dispositif de Jouanolou pour n ∈ {1, 2}.

    Avec e = u·x + u_{n+1}z et e′ = v·x′ + v_{n+1}z′ (e + e′ = 1), on pose
    c = e′²x + e²x′, on relève (⟨x, z⟩, c) et (⟨x′, z′⟩, c) par la formule
    fermée de segre.crt_lift, puis δ = w′d + w²d′.

    La forme affichée x′e + xe′ diffère de c par −ee′(x + x′), nul sur les
    deux sections ; seule c vérifie c ≡ x mod ⟨x, z⟩², ce que crt_lift exige.
    """
    from .segre import crt_lift

    if n not in SUPPORTED_FOLD:
        raise UnsupportedN(n=n, supported=SUPPORTED_FOLD)
    device = jouanolou_device(n, field)
    R = device.ring
    x, y, z = device.block('x'), device.block('y'), device.one('z')
    xp, yp, zp = device.block('xp'), device.block('yp'), device.one('zp')
    u, u_last = device.block('u'), device.one('u_last')
    v, v_last = device.block('v'), device.one('v_last')

    e = sum((ui * xi for ui, xi in zip(u, x)), R.zero) + u_last * z
    e_prime = sum((vi * xi for vi, xi in zip(v, xp)), R.zero) + v_last * zp

    left = QuadricPoint(R, x, y, z)
    right = QuadricPoint(R, xp, yp, zp)
    lift_left = crt_lift(left, e, (u, u_last), xp)
    lift_right = crt_lift(right, e_prime, (v, v_last), x)

    c = lift_left.c
    w, d = lift_left.w, lift_left.d
    w_prime, d_prime = lift_right.w, lift_right.d
    w_squared = w * w
    delta = tuple(w_prime * di + w_squared * dpi for di, dpi in zip(d, d_prime))
    displayed_c = tuple(xpi * e + xi * e_prime for xi, xpi in zip(x, xp))

    checks = {
        'partition_of_unity': (e + e_prime) == R.one,
        'same_c': lift_right.c == c,
        'left_lift': lift_left.verified,
        'right_lift': lift_right.verified,
        'displayed_c_difference': all(
            ci - dci == -(e * e_prime) * (xi + xpi)
            for ci, dci, xi, xpi in zip(c, displayed_c, x, xp)),
    }

    results = {}
    for side, prime in (('left', False), ('right', True)):
        target = quadric_ring(n, device.ring.field, prime=prime)
        assignment = _section(device, side)
        restricted = QuadricPoint(
            target,
            tuple(substitute(ci, assignment, target) for ci in c),
            tuple(substitute(di, assignment, target) for di in delta),
            substitute(w * w_prime, assignment, target))
        tag = 'p' if prime else ''
        identity = QuadricPoint(
            target,
            tuple(target.var(f"x{tag}{i}") for i in range(1, n + 1)),
            tuple(target.var(f"y{tag}{i}") for i in range(1, n + 1)),
            target.var(f"z{tag}"))
        checks[f"{side}_section_identity"] = restricted == identity
        results[side] = restricted

    fold = FoldMap(device, c, displayed_c, delta, w, w_prime, d, d_prime,
                   results['left'], results['right'], checks)
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        logger.warning(f"fold_map(n={n}): failed checks {failed}")
    else:
        logger.info(f"fold_map(n={n}): all checks passed")
    return fold
