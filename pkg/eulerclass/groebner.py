"""
Algèbre des idéaux par bases de Gröbner (algorithme de Buchberger).

Un IdealHandle de R = k[x]/Q est calculé dans l'anneau ambiant k[x] sur
Q + I. Les bases réduites sont mises en cache par ordre monomial, une seule
fois par handle.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import Dummy, Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import monomial_div, monomial_lcm, monomial_mul
from sympy.polys.orderings import ProductOrder, grevlex
from sympy.polys.rings import PolyElement, PolyRing

from .exceptions import ConstructionFailed, NotComaximal, NotMember, NotZeroDimensional, RingMismatch
from .ring import PresentedRing, RingElement, monomials_up_to, transfer

logger = logging.getLogger(__name__)

EMPTY = "empty"
INFINITE = "infinite"

# ==================== NORMAL FORMS ====================


class _Desc:
    """Clé de tas inversée : le plus grand monôme sort en premier"""

    __slots__ = ('key', 'monom')

    def __init__(self, key, monom):
        self.key = key
        self.monom = monom

    def __lt__(self, other):
        return self.key > other.key


def divide(p: PolyElement, divisors: Sequence[PolyElement], poly_ring: PolyRing,
           quotients: bool = False) -> Tuple[Optional[List[PolyElement]], PolyElement]:
    """
    Division multivariée complète de p par divisors.

    Renvoie (quotients, reste) ; le reste n'a aucun monôme divisible par un
    monôme dominant. Les quotients ne sont construits que sur demande.
    """
    if not p:
        return ([poly_ring.zero] * len(divisors) if quotients else None), poly_ring.zero
    order = poly_ring.order
    domain = poly_ring.domain
    leads = [(g.LM, g.LC, g) for g in divisors if g]
    index_of = [i for i, g in enumerate(divisors) if g]

    work = dict(p)
    heap = [_Desc(order(m), m) for m in work]
    heapq.heapify(heap)
    remainder = {}
    parts = [dict() for _ in divisors] if quotients else None

    while heap:
        monom = heapq.heappop(heap).monom
        coeff = work.pop(monom)
        if not coeff:
            continue
        for position, (lm, lc, g) in enumerate(leads):
            q = monomial_div(monom, lm)
            if q is not None:
                break
        else:
            remainder[monom] = coeff
            continue
        factor = domain.quo(coeff, lc)
        if parts is not None:
            bucket = parts[index_of[position]]
            bucket[q] = bucket.get(q, domain.zero) + factor
        for gm, gc in g.items():
            if gm == lm:
                continue
            target = monomial_mul(gm, q)
            old = work.get(target)
            if old is None:
                work[target] = -factor * gc
                heapq.heappush(heap, _Desc(order(target), target))
            else:
                work[target] = old - factor * gc

    rest = poly_ring.from_dict(remainder) if remainder else poly_ring.zero
    if parts is None:
        return None, rest
    return [poly_ring.from_dict({m: c for m, c in part.items() if c}) for part in parts], rest


def normal_form(p: PolyElement, basis: Sequence[PolyElement], poly_ring: PolyRing) -> PolyElement:
    return divide(p, basis, poly_ring)[1]


# ==================== BUCHBERGER ====================


class GroebnerResult(NamedTuple):
    basis: List[PolyElement]
    cofactors: Optional[List[List[PolyElement]]]


def _combine(vectors, weights, poly_ring):
    """Σ wᵢ·vᵢ pour des vecteurs de cofacteurs"""
    width = len(vectors[0]) if vectors else 0
    result = [poly_ring.zero] * width
    for vector, weight in zip(vectors, weights):
        if weight:
            for k in range(width):
                if vector[k]:
                    result[k] += weight * vector[k]
    return result


def buchberger(polys: Sequence[PolyElement], poly_ring: PolyRing, track: bool = False) -> GroebnerResult:
    """
    Base de Gröbner réduite (monique, triée par monôme dominant décroissant).

    Stratégie du sucre pour le choix des paires, critères de Gebauer-Möller.
    Avec track=True chaque élément de la base porte ses cofacteurs sur les
    polynômes d'entrée.
    """
    order = poly_ring.order
    domain = poly_ring.domain
    width = len(polys)

    def unit(i):
        vector = [poly_ring.zero] * width
        vector[i] = poly_ring.one
        return vector

    def degree(p):
        return max(sum(m) for m in p.keys())

    def monic(p, cof):
        lc = p.LC
        if lc == domain.one:
            return p, cof
        if cof is not None:
            cof = [c.quo_ground(lc) for c in cof]
        return p.monic(), cof

    def reduce_tracked(p, cof, divisors, divisor_cofs):
        qs, r = divide(p, divisors, poly_ring, quotients=track)
        if track and r:
            cof = [c for c in cof]
            for q, dc in zip(qs, divisor_cofs):
                if q:
                    for k in range(width):
                        if dc[k]:
                            cof[k] -= q * dc[k]
        return r, cof

    current = [(p, unit(i) if track else None) for i, p in enumerate(polys) if p]
    if not current:
        return GroebnerResult([], [] if track else None)

    # réduction initiale de la liste d'entrée
    while True:
        reduced = []
        for i, (p, cof) in enumerate(current):
            earlier = current[:i]
            r, rcof = reduce_tracked(p, cof, [e[0] for e in earlier], [e[1] for e in earlier])
            if r:
                reduced.append(monic(r, rcof))
        if [e[0] for e in reduced] == [e[0] for e in current]:
            current = reduced
            break
        current = reduced

    f = [e[0] for e in current]
    cofs = [e[1] for e in current]
    sugar = [degree(p) for p in f]
    index = {}
    for i, p in enumerate(f):
        index.setdefault(p, i)

    def pair_sugar(pair):
        i, j = pair
        lcm = monomial_lcm(f[i].LM, f[j].LM)
        total = sum(lcm)
        return max(sugar[i] + total - sum(f[i].LM), sugar[j] + total - sum(f[j].LM))

    def select(pairs):
        return min(pairs, key=lambda pr: (pair_sugar(pr), order(monomial_lcm(f[pr[0]].LM, f[pr[1]].LM)), pr))

    def normal(g, cof, G, s):
        divisors = sorted(G, key=lambda i: order(f[i].LM))
        h, hcof = reduce_tracked(g, cof, [f[i] for i in divisors], [cofs[i] for i in divisors] if track else [])
        if not h:
            return None
        h, hcof = monic(h, hcof)
        if h not in index:
            index[h] = len(f)
            f.append(h)
            cofs.append(hcof)
            sugar.append(max(s, degree(h)))
        return index[h]

    def update(G, B, ih):
        h = f[ih]
        mh = h.LM
        C = set(G)
        D = set()
        while C:
            ig = C.pop()
            mg = f[ig].LM
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip):
                return monomial_div(lcm_hg, monomial_lcm(mh, f[ip].LM)) is not None

            if monomial_mul(mh, mg) == lcm_hg or (
                    not any(lcm_divides(ipx) for ipx in C) and
                    not any(lcm_divides(pr[1]) for pr in D)):
                D.add((ih, ig))

        E = set()
        while D:
            ih_, ig = D.pop()
            mg = f[ig].LM
            if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
                E.add((ih_, ig))

        B_new = set()
        while B:
            ig1, ig2 = B.pop()
            mg1 = f[ig1].LM
            mg2 = f[ig2].LM
            lcm12 = monomial_lcm(mg1, mg2)
            if (monomial_div(lcm12, mh) is None or
                    monomial_lcm(mg1, mh) == lcm12 or
                    monomial_lcm(mg2, mh) == lcm12):
                B_new.add((ig1, ig2))
        B_new |= E

        G_new = {ig for ig in G if monomial_div(f[ig].LM, mh) is None}
        G_new.add(ih)
        return G_new, B_new

    G = set()
    pairs = set()
    for ih in sorted(range(len(f)), key=lambda i: order(f[i].LM)):
        G, pairs = update(G, pairs, ih)

    zero_reductions = 0
    while pairs:
        i, j = select(pairs)
        pairs.remove((i, j))
        lcm = monomial_lcm(f[i].LM, f[j].LM)
        mi = monomial_div(lcm, f[i].LM)
        mj = monomial_div(lcm, f[j].LM)
        spoly = f[i].mul_monom(mi) - f[j].mul_monom(mj)
        scof = None
        if track:
            left = poly_ring.from_dict({mi: domain.one})
            right = poly_ring.from_dict({mj: domain.one})
            scof = [left * a - right * b for a, b in zip(cofs[i], cofs[j])]
        ih = normal(spoly, scof, G, pair_sugar((i, j)))
        if ih is None:
            zero_reductions += 1
        else:
            G, pairs = update(G, pairs, ih)

    reduced = set()
    for ig in G:
        ih = normal(f[ig], cofs[ig], G - {ig}, sugar[ig])
        if ih is not None:
            reduced.add(ih)

    ordered = sorted(reduced, key=lambda i: order(f[i].LM), reverse=True)
    logger.debug(f"buchberger: {len(ordered)} basis elements, {zero_reductions} pairs reduced to zero")
    return GroebnerResult([f[i] for i in ordered], [cofs[i] for i in ordered] if track else None)


# ==================== IDEAL HANDLES ====================


class IdealHandle:
    """Idéal de type fini de R ; bases réduites en cache par ordre"""

    def __init__(self, ring: PresentedRing, generators: Sequence = ()):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, RingElement):
                ring.check_same(g.ring)
                gens.append(g if g.ring is ring else ring(g))
            else:
                gens.append(ring(g))
        self.generators = tuple(gens)
        self._bases: Dict[str, Tuple[PolyElement, ...]] = {}
        self._tracked: Optional[GroebnerResult] = None

    def basis_polys(self, order: Optional[str] = None) -> Tuple[PolyElement, ...]:
        """Base réduite de Q + I dans l'anneau ambiant (pour l'ordre donné)"""
        order = order or self.ring.order_name
        if order not in self._bases:
            target = self.ring.reordered(order)
            polys = list(target.relation_basis)
            polys += [transfer(g.poly, self.ring, target) for g in self.generators if g]
            self._bases[order] = tuple(buchberger(polys, target.poly_ring).basis)
        return self._bases[order]

    def tracked(self) -> GroebnerResult:
        """Base de ⟨générateurs⟩ + Q avec cofacteurs sur (générateurs, relations)"""
        if self._tracked is None:
            polys = [g.poly for g in self.generators] + list(self.ring.relation_basis)
            self._tracked = buchberger(polys, self.ring.poly_ring, track=True)
        return self._tracked

    @property
    def is_unit(self) -> bool:
        basis = self.basis_polys()
        return len(basis) == 1 and basis[0] == self.ring.poly_ring.one

    @property
    def is_zero(self) -> bool:
        return all(g.is_zero for g in self.generators)

    def simplified(self) -> 'IdealHandle':
        """Même idéal, engendré par sa base réduite"""
        return IdealHandle(self.ring, groebner_basis(self))

    def __contains__(self, element) -> bool:
        return contains(self, element)

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ring, self.basis_polys()))

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ', '.join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"IdealHandle{self}"


def unit_ideal(ring: PresentedRing) -> IdealHandle:
    return IdealHandle(ring, [ring.one])


def principal(element: RingElement) -> IdealHandle:
    return IdealHandle(element.ring, [element])


def _same_ring(I: IdealHandle, J: IdealHandle):
    if I.ring is not J.ring:
        I.ring.check_same(J.ring)


# ==================== OPERATIONS ====================

def groebner_basis(I: IdealHandle, order: Optional[str] = None) -> List[RingElement]:
    """
    Images dans R de la base réduite de Q + I.

    ⟨x², x − y⟩ en ordre lex donne (x - y, y^2) ; la base de l'idéal unité
    est (1), celle de l'idéal nul est vide.
    """
    target = I.ring.reordered(order or I.ring.order_name)
    result = []
    seen = set()
    for poly in I.basis_polys(target.order_name):
        element = target.element(poly)
        if element and element.poly not in seen:
            seen.add(element.poly)
            result.append(element)
    return result


def contains(I: IdealHandle, f) -> bool:
    if isinstance(f, RingElement):
        if f.ring is not I.ring:
            raise RingMismatch(left=I.ring.label, right=f.ring.label)
    else:
        f = I.ring(f)
    if f.is_zero:
        return True
    return not normal_form(f.poly, I.basis_polys(), I.ring.poly_ring)


def reduce_modulo(f: RingElement, I: IdealHandle) -> RingElement:
    """Représentant canonique de f dans R/I"""
    if f.ring is not I.ring:
        raise RingMismatch(left=I.ring.label, right=f.ring.label)
    # la base de Q + I contient Q : le reste est déjà réduit modulo les relations
    return RingElement(I.ring, normal_form(f.poly, I.basis_polys(), I.ring.poly_ring))


def ideal_equal(I: IdealHandle, J: IdealHandle) -> bool:
    _same_ring(I, J)
    return I.basis_polys() == J.basis_polys()


def is_unit(I: IdealHandle) -> bool:
    return I.is_unit


def is_subideal(I: IdealHandle, J: IdealHandle) -> bool:
    """I ⊆ J"""
    _same_ring(I, J)
    return all(contains(J, g) for g in I.generators)


def ideal_sum(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _same_ring(I, J)
    return IdealHandle(I.ring, I.generators + J.generators)


def ideal_product(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _same_ring(I, J)
    if I.is_unit:
        return IdealHandle(J.ring, J.generators)
    if J.is_unit:
        return IdealHandle(I.ring, I.generators)
    products = []
    seen = set()
    for g, h in itertools.product(I.generators, J.generators):
        p = g * h
        if p and p.poly not in seen:
            seen.add(p.poly)
            products.append(p)
    return IdealHandle(I.ring, products)


def ideal_power(I: IdealHandle, k: int) -> IdealHandle:
    if k < 0:
        raise ValueError("Negative ideal power")
    result = unit_ideal(I.ring)
    for _ in range(k):
        result = ideal_product(result, I)
    return result


def _elimination_ring(ring: PresentedRing) -> PolyRing:
    """k[t, x] avec un ordre par blocs t ≫ x"""
    cached = getattr(ring, '_elimination_ring', None)
    if cached is None:
        symbols = [Dummy('t')] + [Symbol(v) for v in ring.variables]
        order = ProductOrder((grevlex, lambda m: m[:1]), (grevlex, lambda m: m[1:]))
        cached = PolyRing(symbols, ring.field.domain, order)
        ring._elimination_ring = cached
    return cached


def _intersect_polys(left: Sequence[PolyElement], right: Sequence[PolyElement],
                     ring: PresentedRing) -> List[PolyElement]:
    """⟨left⟩ ∩ ⟨right⟩ dans l'anneau ambiant, par élimination de t"""
    elim = _elimination_ring(ring)
    t = elim.gens[0]
    lift = lambda p: elim.from_dict({(0,) + m: c for m, c in p.items()})
    polys = [t * lift(p) for p in left] + [(elim.one - t) * lift(p) for p in right]
    basis = buchberger(polys, elim).basis
    result = []
    for p in basis:
        if all(m[0] == 0 for m in p.keys()):
            result.append(ring.poly_ring.from_dict({m[1:]: c for m, c in p.items()}))
    return result


def ideal_intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _same_ring(I, J)
    if I.is_unit:
        return IdealHandle(J.ring, J.generators)
    if J.is_unit:
        return IdealHandle(I.ring, I.generators)
    polys = _intersect_polys(I.basis_polys(), J.basis_polys(), I.ring)
    elements = [I.ring.element(p) for p in polys]
    return IdealHandle(I.ring, [e for e in elements if e])


def _colon_element(I: IdealHandle, g: RingElement) -> List[PolyElement]:
    """Générateurs ambiants de (Q + I) : g"""
    ring = I.ring
    if contains(I, g):
        return [ring.poly_ring.one]
    meet = _intersect_polys(I.basis_polys(), [g.poly], ring)
    return [h.exquo(g.poly) for h in meet]


def ideal_quotient(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I : J = ⋂ I : g pour g générateur de J ; I : 0 = R"""
    _same_ring(I, J)
    ring = I.ring
    result = None
    for g in J.generators:
        if g.is_zero:
            continue
        polys = _colon_element(I, g)
        if result is None:
            result = polys
        else:
            result = _intersect_polys(result, polys, ring)
    if result is None:
        return unit_ideal(ring)
    elements = [ring.element(p) for p in result]
    return IdealHandle(ring, [e for e in elements if e])


IDEAL_OPERATIONS = {
    'sum': ideal_sum,
    'product': ideal_product,
    'intersection': ideal_intersection,
    'quotient': ideal_quotient,
}


def ideal_algebra(op: str, I: IdealHandle, J: IdealHandle) -> IdealHandle:
    if op not in IDEAL_OPERATIONS:
        raise ValueError(f"Unknown ideal operation {op!r}")
    return IDEAL_OPERATIONS[op](I, J)


# ==================== EXPRESSION & COMAXIMALITY ====================

def express(f: RingElement, I: IdealHandle) -> List[RingElement]:
    """
    Cofacteurs c₁..c_k avec f = Σ cᵢgᵢ dans R sur les générateurs listés.

    Les cofacteurs sont suivis à travers Buchberger ; la part portée par
    les relations de R disparaît dans le quotient.
    """
    ring = I.ring
    if f.ring is not ring:
        ring.check_same(f.ring)
        f = ring(f)
    k = len(I.generators)
    if f.is_zero:
        return [ring.zero] * k
    result = I.tracked()
    quotients, remainder = divide(f.poly, result.basis, ring.poly_ring, quotients=True)
    if remainder:
        raise NotMember(element=str(f))
    coefficients = _combine(result.cofactors, quotients, ring.poly_ring)[:k]
    elements = [ring.element(c) for c in coefficients]
    check = ring.zero
    for c, g in zip(elements, I.generators):
        check = check + c * g
    if check != f:
        raise ConstructionFailed(stage="express")
    return elements


@dataclass(frozen=True)
class ComaximalityWitness:
    """e ∈ I, e′ ∈ J, e + e′ = 1"""
    e: RingElement
    e_prime: RingElement


def comaximal_witness(I: IdealHandle, J: IdealHandle) -> ComaximalityWitness:
    _same_ring(I, J)
    ring = I.ring
    joint = IdealHandle(ring, I.generators + J.generators)
    try:
        coefficients = express(ring.one, joint)
    except NotMember:
        raise NotComaximal(f"Ideals {I} and {J} are not comaximal")
    e = ring.zero
    for c, g in zip(coefficients, I.generators):
        e = e + c * g
    return ComaximalityWitness(e, ring.one - e)


def certificate_search(f: RingElement, generators: Sequence[RingElement],
                       degree: int) -> Optional[List[RingElement]]:
    """
    Certificat de degré borné : cherche cᵢ avec deg(cᵢ) ≤ degree et
    f = Σ cᵢgᵢ dans R, par algèbre linéaire sur les coefficients.

    Les relations de R entrent comme colonnes supplémentaires. Renvoie None
    si aucun certificat de ce degré n'existe.
    """
    ring = f.ring
    poly_ring = ring.poly_ring
    domain = ring.field.domain
    columns = [g.poly for g in generators] + list(ring.relation_basis)
    multipliers = monomials_up_to(len(ring.variables), degree)

    vectors = []
    for h in columns:
        for m in multipliers:
            vectors.append(h.mul_monom(m) if h else poly_ring.zero)
    rows = {}
    for vector in vectors:
        for m in vector.keys():
            rows.setdefault(m, len(rows))
    for m in f.poly.keys():
        rows.setdefault(m, len(rows))

    width = len(vectors) + 1
    matrix = [[domain.zero] * width for _ in rows]
    for col, vector in enumerate(vectors):
        for m, c in vector.items():
            matrix[rows[m]][col] = c
    for m, c in f.poly.items():
        matrix[rows[m]][width - 1] = c
    if not rows:
        return [ring.zero] * len(generators)

    reduced, pivots = DomainMatrix(matrix, (len(rows), width), domain).rref()
    if width - 1 in pivots:
        return None
    entries = reduced.to_list()
    solution = [domain.zero] * (width - 1)
    for r, col in enumerate(pivots):
        solution[col] = entries[r][width - 1]

    result = []
    for g_index in range(len(generators)):
        terms = {}
        for m_index, m in enumerate(multipliers):
            c = solution[g_index * len(multipliers) + m_index]
            if c:
                terms[m] = c
        result.append(ring.element(poly_ring.from_dict(terms)))
    return result


# ==================== DIMENSION ====================


class DimensionHeight(NamedTuple):
    dimension: Union[int, str]
    height: Union[int, str]


def _independent_dimension(basis: Sequence[PolyElement], nvars: int) -> Optional[int]:
    """Cardinal maximal d'un ensemble de variables indépendant modulo les monômes dominants"""
    supports = [frozenset(i for i, e in enumerate(g.LM) if e) for g in basis]
    if any(not s for s in supports):
        return None
    for size in range(nvars, -1, -1):
        for subset in itertools.combinations(range(nvars), size):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0


def quotient_dimension(I: IdealHandle) -> Optional[int]:
    """dim(R/I), ou None pour l'anneau nul"""
    basis = I.basis_polys()
    return _independent_dimension(basis, len(I.ring.variables))


def dimension_height(I: IdealHandle) -> DimensionHeight:
    """(dim R/I, ht I) avec ht I = dim R − dim R/I (R supposé équidimensionnel)"""
    dim = quotient_dimension(I)
    if dim is None:
        return DimensionHeight(EMPTY, INFINITE)
    return DimensionHeight(dim, I.ring.dimension() - dim)


def height(I: IdealHandle) -> Union[int, float]:
    """Hauteur numérique ; l'idéal unité a une hauteur infinie"""
    ht = dimension_height(I).height
    return float('inf') if ht == INFINITE else ht


def standard_monomials(I: IdealHandle) -> List[Tuple[int, ...]]:
    """Monômes hors de l'escalier ; NotZeroDimensional si l'escalier est infini"""
    if I.is_unit:
        return []
    dim = quotient_dimension(I)
    if dim != 0:
        raise NotZeroDimensional(dimension=dim)
    leads = [g.LM for g in I.basis_polys()]
    nvars = len(I.ring.variables)

    def standard(m):
        return all(monomial_div(m, lm) is None for lm in leads)

    start = (0,) * nvars
    seen = {start}
    queue = [start]
    for monom in queue:
        for i in range(nvars):
            step = monom[:i] + (monom[i] + 1,) + monom[i + 1:]
            if step not in seen and standard(step):
                seen.add(step)
                queue.append(step)
    return queue


def vector_space_dimension(I: IdealHandle) -> int:
    """dim_k(R/I) pour un idéal de dimension zéro"""
    return len(standard_monomials(I))
