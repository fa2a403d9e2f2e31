"""
Tests du groupe d'Euler : symboles, relations, fusion et séparation,
lemme de déplacement, réduction, homomorphisme de Segre et lignes unimodulaires
"""

import random
import unittest
from dataclasses import replace

import pytest

from eulerclass.cohomotopy import Equal, Ledger, provably_equal
from eulerclass.euler import (
    ElementaryWord,
    EulerSum,
    EulerSymbol,
    UnimodularRow,
    act,
    is_complete_intersection,
    merge,
    merge_detailed,
    moving_euler,
    phi,
    phi_detailed,
    reduce_to_single,
    relation_witness,
    residual_certificate,
    residual_symbol,
    row_section,
    segre_hom,
    split,
    split_merge,
    weak_class,
)
from eulerclass.exceptions import (
    ArityMismatch,
    HeightViolation,
    MoveFailed,
    NotComaximal,
    NotCompleteIntersection,
    RangeViolation,
)
from eulerclass.groebner import (
    ComaximalityWitness,
    IdealHandle,
    contains,
    ideal_power,
    ideal_product,
    reduce_modulo,
    vector_space_dimension,
)
from eulerclass.quadric import QuadricPoint, base_point, validate, zero_point
from eulerclass.ring import make_ring
from eulerclass.segre import OrientedIdeal, segre_class

QXY = make_ring('QQ', ['x', 'y'])
QX = make_ring('QQ', ['x'])


def symbol(ring, generators, a, n=None):
    return EulerSymbol.build(IdealHandle(ring, generators), [ring(x) for x in a], n)


def complete(ring, a, b):
    u, v = ring('x') - ring(a), ring('y') - ring(b)
    return EulerSymbol.build(IdealHandle(ring, [u, v]), [u, v])


def twisted(ring, a, b):
    """(⟨x − a, y − b⟩, (u + 2u², v)) ; son idéal résiduel est le point x = a − 1/2"""
    u, v = ring('x') - ring(a), ring('y') - ring(b)
    return EulerSymbol.build(IdealHandle(ring, [u, v]), [u * (ring.one + ring(2) * u), v])


ORIGIN = symbol(QXY, ['x', 'y'], ['x', 'y'])
SHIFTED = symbol(QXY, ['x - 1', 'y'], ['x - 1', 'y'])
LEFT = symbol(QXY, ['x + 1', 'y'], ['x + 1', 'y'])


class TestSymbols(unittest.TestCase):

    def test_unit_ideal_is_zero(self):
        zero = EulerSymbol.build(IdealHandle(QXY, [1]), [0, 0])
        self.assertTrue(zero.is_zero)
        self.assertEqual(str(zero), "0")
        self.assertTrue(EulerSymbol.zero(QXY, 2).is_zero)

    def test_height_violation(self):
        with self.assertRaises(HeightViolation):
            symbol(QXY, ['x'], ['x', '0'])

    def test_arity(self):
        with self.assertRaises(ArityMismatch):
            symbol(QXY, ['x', 'y'], ['x', 'y'], n=3)

    def test_sum_arithmetic(self):
        S = EulerSum.of((1, ORIGIN), (2, SHIFTED))
        self.assertEqual(len(S.terms), 2)
        self.assertEqual([c for c, _ in (-S).terms], [-1, -2])
        self.assertEqual(len((S - S).terms), 4)
        with self.assertRaises(ArityMismatch):
            S.add(symbol(QXY, ['x'], ['x']))

    def test_row_needs_unit_ideal(self):
        with self.assertRaises(NotComaximal):
            UnimodularRow.build(QXY, ['x', 'y', '0'])


class TestElementaryWord(unittest.TestCase):

    def test_rejects_diagonal(self):
        with self.assertRaises(ValueError):
            ElementaryWord(((1, 1, QXY.one),))

    def test_apply_and_dual(self):
        word = ElementaryWord().then(1, 2, QXY('x')).then(2, 1, QXY(3))
        a = (QXY('x'), QXY('y'))
        b = (QXY('1 - y'), QXY('x^2'))
        a2, b2 = word.apply(a), word.apply_dual(b)
        self.assertEqual(a2[0], QXY('x + x*y'))
        self.assertEqual(a2[0] * b2[0] + a2[1] * b2[1], a[0] * b[0] + a[1] * b[1])
        self.assertEqual(len(word), 2)

    def test_act(self):
        word = ElementaryWord().then(1, 2, QXY.one)
        moved = act(word, ORIGIN)
        self.assertEqual(moved.a, (QXY('x + y'), QXY('y')))
        self.assertEqual(moved.ideal, ORIGIN.ideal)


class TestRelations(unittest.TestCase):

    def test_lift(self):
        witness = relation_witness('lift', ORIGIN)
        self.assertEqual(witness.source, zero_point(QXY, 2))
        self.assertEqual(witness.target, QuadricPoint.of(QXY, ['x', 'y'], [0, 0], 0))
        self.assertEqual(witness.homotopy.point.a, (QXY.extend()('x*T'), QXY.extend()('y*T')))

    def test_lift_needs_complete_intersection(self):
        folded = symbol(QX, ['x'], ['x + x^2'])
        self.assertFalse(is_complete_intersection(folded))
        with self.assertRaises(NotCompleteIntersection):
            relation_witness('lift', folded)

    def test_elementary(self):
        witness = relation_witness('elementary', ORIGIN, (1, 2, 1))
        self.assertEqual(witness.source, QuadricPoint.of(QXY, ['x', 'y'], [0, 0], 0))
        self.assertEqual(witness.target, QuadricPoint.of(QXY, ['x + y', 'y'], [0, 0], 0))
        self.assertTrue(validate(witness.homotopy))

    def test_elementary_zero_coefficient(self):
        witness = relation_witness('elementary', ORIGIN, (2, 1, 0))
        self.assertEqual(witness.source, witness.target)

    def test_bad_factor(self):
        for factor in ((1, 1, 1), (1, 3, 1), (0, 2, 1)):
            with self.subTest(factor=factor):
                with self.assertRaises(ArityMismatch):
                    relation_witness('elementary', ORIGIN, factor)
        with self.assertRaises(ValueError):
            relation_witness('elementary', ORIGIN)
        with self.assertRaises(ValueError):
            relation_witness('twist', ORIGIN)


class TestMergeSplit(unittest.TestCase):

    def test_merge_is_canonical(self):
        merged = merge(ORIGIN, SHIFTED)
        square = ideal_power(ideal_product(ORIGIN.ideal, SHIFTED.ideal), 2)
        self.assertEqual(merged.ideal, IdealHandle(QXY, ['x^2 - x', 'y']))
        self.assertEqual(merged.a, (
            reduce_modulo(QXY('x*(2*x - 1)*(x - 1)'), square),
            reduce_modulo(QXY('y*(2*x^2 - 2*x + 1)'), square),
        ))

    def test_merge_with_zero(self):
        zero = EulerSymbol.zero(QXY, 2)
        self.assertIs(merge(zero, ORIGIN), ORIGIN)
        self.assertIs(merge(ORIGIN, zero), ORIGIN)
        certificate = merge_detailed(zero, ORIGIN)
        self.assertIsNone(certificate.comaximality)
        self.assertTrue(certificate.verify())

    def test_merge_certificate(self):
        certificate = merge_detailed(ORIGIN, SHIFTED)
        e, e_prime = certificate.comaximality.e, certificate.comaximality.e_prime
        self.assertEqual(e + e_prime, QXY.one)
        self.assertTrue(contains(ORIGIN.ideal, e))
        self.assertTrue(contains(SHIFTED.ideal, e_prime))
        self.assertTrue(certificate.verify())
        swapped = replace(certificate, comaximality=ComaximalityWitness(e_prime, e))
        self.assertFalse(swapped.verify())
        self.assertFalse(replace(certificate, merged=LEFT).verify())

    def test_split_recovers_orientations(self):
        merged = merge(ORIGIN, SHIFTED)
        left, right = split(merged, ORIGIN.ideal, SHIFTED.ideal)
        for piece, original in ((left, ORIGIN), (right, SHIFTED)):
            with self.subTest(ideal=str(original.ideal)):
                square = ideal_power(original.ideal, 2)
                self.assertEqual(piece.ideal, original.ideal)
                for x, y in zip(piece.a, original.a):
                    self.assertTrue(contains(square, x - y))

    def test_not_comaximal(self):
        with self.assertRaises(NotComaximal):
            merge(ORIGIN, ORIGIN)
        with self.assertRaises(NotComaximal):
            split(ORIGIN, ORIGIN.ideal, ORIGIN.ideal)

    def test_dispatch(self):
        self.assertEqual(split_merge('merge', ORIGIN, SHIFTED).ideal, IdealHandle(QXY, ['x^2 - x', 'y']))
        with self.assertRaises(ValueError):
            split_merge('fold', ORIGIN)


class TestMovingLemma(unittest.TestCase):

    def test_complete_intersection(self):
        K, f = moving_euler(ORIGIN.oriented)
        self.assertTrue(K.is_unit)
        self.assertEqual(f, (QXY('x'), QXY('y')))

    def test_residual_ideal(self):
        oriented = OrientedIdeal.build(IdealHandle(QX, ['x']), ['x + x^2'])
        K, f = moving_euler(oriented)
        self.assertEqual(K, IdealHandle(QX, ['x + 1']))
        self.assertEqual(f, (QX('x + x^2'),))

    def test_residual_symbol(self):
        partner = residual_symbol(symbol(QX, ['x'], ['x + x^2']))
        self.assertEqual(partner.ideal, IdealHandle(QX, ['x + 1']))
        self.assertEqual(partner.a, (QX('x + x^2'),))
        self.assertTrue(residual_symbol(ORIGIN).is_zero)

    def test_residual_certificate(self):
        certificate = residual_certificate(symbol(QX, ['x'], ['x + x^2']))
        self.assertEqual(certificate.K, IdealHandle(QX, ['x + 1']))
        self.assertEqual(certificate.f, (QX('x + x^2'),))
        self.assertEqual(certificate.complete_intersection, IdealHandle(QX, ['x^2 + x']))
        self.assertEqual(certificate.degree(), 2)
        self.assertEqual(certificate.witness.source, zero_point(QX, 1))
        self.assertEqual(certificate.witness.target, QuadricPoint.of(QX, ['x + x^2'], [0], 0))
        self.assertTrue(certificate.verify())

    def test_tampered_residual_is_rejected(self):
        certificate = residual_certificate(symbol(QX, ['x'], ['x + x^2']))
        cases = {
            'K': replace(certificate, K=IdealHandle(QX, ['x - 1'])),
            'f': replace(certificate, f=(QX('x + x^3'),)),
            'partner': replace(certificate, partner=EulerSymbol.zero(QX, 1)),
            'witness': replace(certificate, witness=relation_witness('lift', symbol(QX, ['x'], ['x']))),
        }
        for name, tampered in cases.items():
            with self.subTest(field=name):
                self.assertFalse(tampered.verify())

    def test_avoid_exhausts_attempts(self):
        F3 = make_ring('F3', ['x'])
        oriented = OrientedIdeal.build(IdealHandle(F3, ['x']), ['x + x^2'])
        with self.assertRaises(MoveFailed):
            moving_euler(oriented, [IdealHandle(F3, ['x + 1'])], attempt_cap=1)

    def test_height_violation(self):
        oriented = OrientedIdeal.build(IdealHandle(QXY, ['x']), ['x', '0'])
        with self.assertRaises(HeightViolation):
            moving_euler(oriented)


class TestReduction(unittest.TestCase):

    def test_single_term(self):
        reduction = reduce_to_single(EulerSum.of((1, ORIGIN)))
        self.assertIs(reduction.symbol, ORIGIN)
        self.assertEqual(reduction.steps, ())

    def test_comaximal_sum(self):
        reduction = reduce_to_single(EulerSum.of((1, ORIGIN), (1, SHIFTED)))
        self.assertEqual(reduction.symbol.ideal, IdealHandle(QXY, ['x^2 - x', 'y']))
        self.assertEqual([step.kind for step in reduction.steps], ['merge'])
        crt = reduction.steps[0].crt
        self.assertEqual((crt.left, crt.right), (ORIGIN, SHIFTED))
        self.assertEqual(crt.comaximality.e + crt.comaximality.e_prime, QXY.one)
        self.assertIs(crt.merged, reduction.symbol)
        self.assertTrue(reduction.verify())
        self.assertEqual(reduction.degree_shift(), 0)

    def test_cancellation(self):
        S = EulerSum.of((1, ORIGIN)) - EulerSum.of((1, ORIGIN))
        reduction = reduce_to_single(S)
        self.assertTrue(reduction.symbol.is_zero)
        self.assertEqual(reduction.steps[0].kind, 'cancel')
        self.assertEqual(reduction.steps[0].combined, (ORIGIN, ORIGIN))
        self.assertTrue(reduction.verify())

    def test_negative_term(self):
        folded = symbol(QX, ['x'], ['x + x^2'])
        reduction = reduce_to_single(EulerSum.of((-1, folded)))
        self.assertEqual(reduction.symbol.ideal, IdealHandle(QX, ['x + 1']))
        step = reduction.steps[0]
        self.assertEqual(step.kind, 'negate')
        certificate = step.residuals[0]
        self.assertIs(certificate.symbol, folded)
        self.assertEqual(certificate.K, IdealHandle(QX, ['x + 1']))
        self.assertEqual(certificate.f, (QX('x + x^2'),))
        self.assertEqual(certificate.witness.target, QuadricPoint.of(QX, ['x + x^2'], [0], 0))
        self.assertEqual(len(reduction.ledger), 1)
        self.assertTrue(reduction.verify())
        self.assertEqual(reduction.degree_shift(), 2)

    def test_negated_complete_intersection_shifts_degree(self):
        # −(⟨x, y⟩, (x, y)) se réduit au symbole nul : degré faible −1, degré final 0
        S = EulerSum.of((-1, ORIGIN))
        reduction = reduce_to_single(S)
        self.assertTrue(reduction.symbol.is_zero)
        self.assertTrue(reduction.verify())
        self.assertEqual(weak_class(S).degree, -1)
        self.assertEqual(vector_space_dimension(reduction.symbol.ideal), 0)
        self.assertEqual(reduction.degree_shift(), 1)

    def test_replay_rejects_tampering(self):
        reduction = reduce_to_single(EulerSum.of((1, ORIGIN), (1, SHIFTED)))
        step = reduction.steps[0]
        witness = step.crt.comaximality
        swapped = replace(step, crt=replace(step.crt, comaximality=ComaximalityWitness(witness.e_prime, witness.e)))
        cases = {
            'symbol': replace(reduction, symbol=LEFT),
            'comaximality': replace(reduction, steps=(swapped,)),
            'kind': replace(reduction, steps=(replace(step, kind='negate'),)),
        }
        for name, tampered in cases.items():
            with self.subTest(tampered=name):
                self.assertFalse(tampered.verify())

    def test_replay_needs_recorded_witnesses(self):
        reduction = reduce_to_single(EulerSum.of((-1, symbol(QX, ['x'], ['x + x^2']))))
        self.assertTrue(reduction.verify())
        self.assertFalse(replace(reduction, ledger=Ledger()).verify())
        self.assertTrue(replace(reduction, ledger=Ledger().extend(reduction.ledger)).verify())

    def test_dimension_bound(self):
        with self.assertRaises(RangeViolation):
            reduce_to_single(EulerSum(QXY, 1))


class TestWeakClass(unittest.TestCase):

    def test_degrees(self):
        cases = [
            (EulerSum.of((1, ORIGIN)), 1),
            (EulerSum.of((1, merge(ORIGIN, SHIFTED))), 2),
            (EulerSum.of((1, ORIGIN), (1, SHIFTED), (1, LEFT)), 3),
            (EulerSum(QXY, 2), 0),
            (EulerSum.of((2, ORIGIN), (-1, SHIFTED)), 1),
        ]
        for S, degree in cases:
            with self.subTest(sum=str(S)):
                self.assertEqual(weak_class(S).degree, degree)

    def test_forgets_orientation(self):
        flipped = symbol(QXY, ['x', 'y'], ['y', 'x'])
        self.assertEqual(weak_class(EulerSum.of((1, flipped))), weak_class(EulerSum.of((1, ORIGIN))))

    def test_degree_matches_reduction(self):
        S = EulerSum.of((1, ORIGIN), (1, SHIFTED), (1, LEFT))
        reduced = reduce_to_single(S).symbol
        self.assertEqual(vector_space_dimension(reduced.ideal), weak_class(S).degree)

    def test_degree_shift_accounts_for_residuals(self):
        cases = [
            EulerSum.of((2, ORIGIN), (-1, SHIFTED)),
            EulerSum.of((1, twisted(QXY, 0, 0)), (-1, twisted(QXY, 1, 0))),
            EulerSum.of((-2, LEFT), (1, SHIFTED)),
        ]
        for S in cases:
            with self.subTest(sum=str(S)):
                reduction = reduce_to_single(S)
                self.assertTrue(reduction.verify())
                self.assertEqual(weak_class(S).degree + reduction.degree_shift(),
                                 vector_space_dimension(reduction.symbol.ideal))

    def test_empty_text(self):
        self.assertEqual(str(weak_class(EulerSum(QXY, 2))), "0 (degree 0)")


class TestSegreHom(unittest.TestCase):

    def test_zero_sum(self):
        self.assertEqual(segre_hom(EulerSum(QXY, 2)).representative, base_point(QXY, 2))

    def test_sum_of_two(self):
        result = segre_hom(EulerSum.of((1, ORIGIN), (1, SHIFTED)))
        representative = result.representative
        self.assertTrue(validate(representative))
        self.assertEqual(IdealHandle(QXY, representative.a + (representative.s,)),
                         IdealHandle(QXY, ['x^2 - x', 'y']))
        expected = segre_class(merge(ORIGIN, SHIFTED).oriented)
        self.assertTrue(provably_equal(representative, expected, result.ledger))

    def test_negative_complete_intersection(self):
        result = segre_hom(EulerSum.of((-1, ORIGIN)))
        self.assertEqual(result.representative, base_point(QXY, 2))

    def test_independent_of_monomial_order(self):
        lex = make_ring('QQ', ['x', 'y'], order='lex')
        terms = [(1, symbol(lex, ['x', 'y'], ['x', 'y'])), (1, symbol(lex, ['x - 1', 'y'], ['x - 1', 'y']))]
        expected = segre_hom(EulerSum.of((1, ORIGIN), (1, SHIFTED))).representative
        found = segre_hom(EulerSum.of(*terms)).representative
        carried = QuadricPoint(QXY, tuple(map(QXY, found.a)), tuple(map(QXY, found.b)), QXY(found.s))
        self.assertTrue(validate(carried))
        self.assertIsInstance(provably_equal(carried, expected), Equal)

    def test_dimension_bound(self):
        with self.assertRaises(RangeViolation):
            segre_hom(EulerSum(make_ring('QQ', ['x', 'y', 'z']), 2))


class TestUnimodularRows(unittest.TestCase):

    def test_unit_first_entries(self):
        self.assertTrue(phi(UnimodularRow.build(QXY, ['1', '0', '0'])).is_zero)

    def test_special_rows(self):
        for last in ('1', '1 + x'):
            with self.subTest(last=last):
                result = phi_detailed(UnimodularRow.build(QXY, ['x', 'y', last]))
                self.assertEqual(result.symbol.a, (QXY('x'), QXY('y')))
                self.assertEqual(len(result.word), 0)

    def test_general_row(self):
        row = UnimodularRow.build(QXY, ['x', 'x', '1 - x'])
        result = phi_detailed(row, random.Random(4))
        self.assertGreater(len(result.word), 0)
        self.assertEqual(result.word.apply(row.entries), result.row.entries)
        self.assertEqual(result.symbol.n, 2)

    def test_invariant_under_elementary_word(self):
        row = UnimodularRow.build(QXY, ['x', 'y', '1 + x'])
        word = ElementaryWord().then(1, 2, QXY.one)
        moved = UnimodularRow.build(QXY, word.apply(row.entries))
        self.assertEqual(moved.entries, (QXY('x + y'), QXY('y'), QXY('1 + x')))
        before, after = phi(row), phi(moved)
        self.assertEqual(after.a, (QXY('x + y'), QXY('y')))
        ledger = Ledger().record(relation_witness('elementary', before, (1, 2, 1)))
        verdict = provably_equal(segre_class(before.oriented), segre_class(after.oriented), ledger)
        self.assertIsInstance(verdict, Equal)

    def test_section(self):
        row = UnimodularRow.build(QXY, ['x', 'y', '1 - x'])
        b = row_section(row)
        self.assertEqual(sum((x * y for x, y in zip(row.entries, b)), QXY.zero), QXY.one)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(4))
def test_separating_non_comaximal_terms(seed):
    reduction = reduce_to_single(EulerSum.of((1, ORIGIN), (1, ORIGIN)), rng=random.Random(seed))
    kinds = [step.kind for step in reduction.steps]
    assert 'cancel' in kinds
    assert 'separate' in kinds
    assert reduction.symbol.n == 2
    assert reduction.verify()
    assert 2 + reduction.degree_shift() == vector_space_dimension(reduction.symbol.ideal)


# ==================== RANDOMIZED SUITES ====================

GRID = [(a, b) for a in range(-2, 3) for b in range(-1, 2)]


def random_sum(rng, positive=False):
    """Somme de symboles en des points entiers distincts, orientations tordues ou non"""
    terms = []
    for a, b in rng.sample(GRID, rng.randint(1, 4)):
        if rng.random() < 0.5:
            coeff = 1 if positive else rng.choice([-1, 1])
            terms.append((coeff, twisted(QXY, a, b)))
        else:
            coeff = 1 if positive else rng.choice([-2, -1, 1, 2])
            terms.append((coeff, complete(QXY, a, b)))
    return EulerSum.of(*terms)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_weak_degree_of_random_sums(seed):
    S = random_sum(random.Random(seed))
    reduction = reduce_to_single(S, rng=random.Random(seed))
    assert reduction.verify()
    degree = vector_space_dimension(reduction.symbol.ideal)
    assert weak_class(S).degree + reduction.degree_shift() == degree
    if all(coeff == 1 for coeff, _ in S.terms):
        assert reduction.degree_shift() == 0


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_weak_degree_of_positive_comaximal_sums(seed):
    S = random_sum(random.Random(seed), positive=True)
    reduction = reduce_to_single(S, rng=random.Random(seed))
    assert reduction.verify()
    assert [step.kind for step in reduction.steps] == ['merge'] * (len(S.terms) - 1)
    assert weak_class(S).degree == vector_space_dimension(reduction.symbol.ideal) == len(S.terms)
