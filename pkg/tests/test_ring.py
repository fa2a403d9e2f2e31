"""
Tests des corps de coefficients, anneaux présentés et formes normales
"""

import unittest
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eulerclass.exceptions import (
    CharacteristicTwo,
    DuplicateVariable,
    NonPrimeCharacteristic,
    RingMismatch,
    UnknownField,
    UnknownOrder,
    UnknownVariable,
)
from eulerclass.expr import BinOp, Neg, Num, Pow, Var, evaluate
from eulerclass.ring import CoefficientField, make_ring, normal_form, substitute

leaves = st.one_of(st.builds(Num, st.integers(0, 9)), st.builds(Var, st.sampled_from(['x', 'y', 'z'])))
expressions = st.recursive(
    leaves,
    lambda children: st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(['+', '-', '*']), children, children),
        st.builds(Pow, children, st.integers(1, 2)),
    ),
    max_leaves=6,
)

SPHERE = make_ring('QQ', ['x', 'y', 'z'], ['x^2 + y^2 + z^2 - 1'])


class TestCoefficientField(unittest.TestCase):

    def test_names(self):
        """QQ et F<p> dans les deux sens"""
        for name in ('QQ', 'F3', 'F5', 'F101'):
            with self.subTest(name=name):
                self.assertEqual(str(CoefficientField.from_name(name)), name)

    def test_characteristic_two_rejected(self):
        with self.assertRaises(CharacteristicTwo):
            CoefficientField.from_name('F2')
        with self.assertRaises(CharacteristicTwo):
            make_ring('F2', ['x'])

    def test_non_prime_rejected(self):
        for p in (4, 9, 15):
            with self.subTest(p=p):
                with self.assertRaises(NonPrimeCharacteristic) as caught:
                    CoefficientField(p)
                self.assertIn("[NON_PRIME_CHARACTERISTIC]", str(caught.exception))
                self.assertEqual(caught.exception.characteristic, p)

    def test_unknown_name(self):
        for name in ('RR', 'F', 'Fx'):
            with self.subTest(name=name):
                with self.assertRaises(UnknownField) as caught:
                    CoefficientField.from_name(name)
                self.assertEqual(caught.exception.exit_status, 2)

    def test_unknown_order(self):
        with self.assertRaises(UnknownOrder):
            make_ring('QQ', ['x'], order='revlex')
        with self.assertRaises(UnknownOrder):
            make_ring('QQ', ['x']).reordered('revlex')

    def test_exact_fractions(self):
        field = CoefficientField.rationals()
        value = field.convert(Fraction(2, 6))
        self.assertEqual(field.to_fraction(value), Fraction(1, 3))

    def test_prime_representatives(self):
        field = CoefficientField.prime(5)
        self.assertEqual(field.to_fraction(field.convert(-1)), Fraction(4))
        self.assertEqual(field.to_fraction(field.convert(7)), Fraction(2))


class TestPresentedRing(unittest.TestCase):

    def setUp(self):
        self.free = make_ring('QQ', ['x', 'y'])
        self.sphere = make_ring('QQ', ['x', 'y', 'z'], ['x^2 + y^2 + z^2 - 1'])

    def test_free_ring(self):
        R = make_ring('QQ', ['x'])
        self.assertEqual(R.variables, ('x',))
        self.assertEqual(R.relation_basis, ())
        self.assertEqual(R.dimension(), 1)

    def test_sphere_normal_form(self):
        R = self.sphere
        self.assertEqual(R('x^2'), R('1 - y^2 - z^2'))
        self.assertEqual(R('x^2 + y^2 + z^2'), R.one)
        self.assertEqual(R.dimension(), 2)

    def test_normal_form_helper(self):
        R = self.sphere
        self.assertEqual(normal_form('x^2*y', R), R('y - y^3 - y*z^2'))

    def test_duplicate_variable(self):
        with self.assertRaises(DuplicateVariable):
            make_ring('QQ', ['x', 'y', 'x'])

    def test_unknown_variable(self):
        with self.assertRaises(UnknownVariable):
            self.free.var('q')
        with self.assertRaises(UnknownVariable):
            self.free('x + q')

    def test_ring_mismatch(self):
        other = make_ring('QQ', ['u'])
        with self.assertRaises(RingMismatch):
            self.free('x') + other('u')

    def test_equal_presentations_compare_equal(self):
        again = make_ring('QQ', ['x', 'y'])
        self.assertEqual(again, self.free)
        self.assertEqual(again('x + y'), self.free('y + x'))

    def test_zero_ring(self):
        R = make_ring('QQ', ['x'], ['x', 'x - 1'])
        self.assertTrue(R.is_zero_ring)
        self.assertEqual(R.dimension(), -1)
        self.assertTrue(R('x + 5').is_zero)


class TestElements(unittest.TestCase):

    def test_formatting_follows_order(self):
        grevlex = make_ring('QQ', ['x', 'y'])
        lex = make_ring('QQ', ['x', 'y'], order='lex')
        self.assertEqual(str(grevlex('x + y^2')), 'y^2 + x')
        self.assertEqual(str(lex('x + y^2')), 'x + y^2')

    def test_fraction_coefficients(self):
        R = make_ring('QQ', ['x'])
        half = R('x/2')
        self.assertEqual(str(half), '1/2*x')
        self.assertEqual(half * 2, R('x'))
        self.assertEqual(str(R('-x^2/3 + 1')), '-1/3*x^2 + 1')

    def test_prime_field_arithmetic(self):
        R = make_ring('F5', ['x'])
        self.assertEqual(R('3*x') * 2, R('x'))
        self.assertTrue(R('5*x').is_zero)
        self.assertEqual(str(R(-1)), '4')

    def test_degree_and_constants(self):
        R = make_ring('QQ', ['x', 'y'])
        self.assertEqual(R('x^2*y + 1').degree(), 3)
        self.assertEqual(R.zero.degree(), -1)
        self.assertEqual(R('7/2').constant_value(), Fraction(7, 2))
        self.assertIsNone(R('x').constant_value())

    def test_power(self):
        R = make_ring('QQ', ['x'])
        self.assertEqual(R('1 + x') ** 3, R('1 + 3*x + 3*x^2 + x^3'))
        self.assertEqual(R('x') ** 0, R.one)
        with self.assertRaises(ValueError):
            R('x') ** -1


class TestSubstitution(unittest.TestCase):

    def setUp(self):
        self.R = make_ring('QQ', ['x'])
        self.RT = self.R.extend()

    def test_extension_is_cached(self):
        self.assertIs(self.R.extend(), self.RT)
        self.assertEqual(self.RT.variables, ('x', 'T'))
        self.assertIs(self.RT.base, self.R)

    def test_homotopy_endpoints(self):
        p = self.RT('x + T*(1 - x)^2')
        self.assertEqual(substitute(p, {'T': 1}), self.R('x^2 - x + 1'))
        self.assertEqual(substitute(p, {'T': 0}), self.R('x'))

    def test_substitute_in_place(self):
        R = make_ring('QQ', ['x', 'y'])
        self.assertEqual(substitute(R('x*y + y'), {'x': 2}), R('3*y'))

    def test_symbolic_substitution(self):
        R = make_ring('QQ', ['x', 'y'])
        result = substitute(R('x^2 + y'), {'x': R('y + 1')})
        self.assertEqual(result, R('y^2 + 3*y + 1'))

    def test_substitute_respects_relations(self):
        S = make_ring('QQ', ['x', 'y', 'z'], ['x^2 + y^2 + z^2 - 1'])
        self.assertEqual(substitute(S('y^2'), {'y': 0}), S.zero)
        self.assertEqual(substitute(S('x^2'), {'z': 0}), S('1 - y^2'))

    def test_unknown_variable(self):
        with self.assertRaises(UnknownVariable):
            substitute(self.R('x'), {'w': 1})


# ==================== PROPERTIES ====================

@settings(max_examples=40, deadline=None)
@given(expressions, expressions, expressions)
def test_sphere_arithmetic_is_canonical(p, q, r):
    P, Q, R = (evaluate(e, SPHERE) for e in (p, q, r))
    assert P * (Q + R) == P * Q + P * R
    assert P * Q == Q * P
    assert SPHERE.element(P.poly) == P


@settings(max_examples=40, deadline=None)
@given(expressions)
def test_stored_form_is_reduced(p):
    P = evaluate(p, SPHERE)
    assert not any(m[0] >= 2 for m in P.poly.keys())


def test_random_element_degree(qxy, rng):
    for _ in range(20):
        element = qxy.random_element(rng, 2, 3)
        assert element.degree() <= 2


def test_random_element_skips_homotopy_variable(qx, rng):
    extended = qx.extend()
    for _ in range(10):
        element = extended.random_element(rng, 2, 2)
        assert all(m[1] == 0 for m in element.poly.keys())


@pytest.mark.parametrize("order", ['degrevlex', 'lex'])
def test_reordered_keeps_presentation(order):
    S = make_ring('QQ', ['x', 'y', 'z'], ['x^2 + y^2 + z^2 - 1'])
    other = S.reordered(order)
    assert other.variables == S.variables
    assert other.order_name == order
    assert other.dimension() == 2
