"""
Tests des points de Q_2n, des homotopies, du dispositif de Jouanolou et du pli
"""

import unittest
from fractions import Fraction

import pytest

from eulerclass.exceptions import ArityMismatch, EquationViolated, UnsupportedN
from eulerclass.groebner import IdealHandle, contains, ideal_power, ideal_sum
from eulerclass.quadric import (
    QuadricPoint,
    base_point,
    fold_map,
    homotopy,
    is_valid,
    jouanolou_device,
    quadric_ring,
    trivial_homotopies,
    validate,
    vanishing_ideal,
    zero_point,
)
from eulerclass.ring import make_ring


class TestValidation(unittest.TestCase):

    def setUp(self):
        self.Rx = make_ring('QQ', ['x'])
        self.Rxy = make_ring('QQ', ['x', 'y'])

    def test_valid_points(self):
        points = [
            QuadricPoint.of(self.Rxy, ['x', 'y'], [0, 0], 0),
            QuadricPoint.of(self.Rx, ['x'], ['1 - x'], 'x'),
            QuadricPoint.of(self.Rx, ['x + x^2'], [-1], '-x'),
            base_point(self.Rxy, 2),
            zero_point(self.Rx, 1),
        ]
        for v in points:
            with self.subTest(point=str(v)):
                self.assertTrue(validate(v))
                self.assertTrue(is_valid(v))

    def test_violation_reports_residual(self):
        v = QuadricPoint.of(self.Rx, ['x'], ['1'], 'x')
        with self.assertRaises(EquationViolated) as info:
            validate(v)
        self.assertEqual(info.exception.residual, 'x^2')
        self.assertFalse(is_valid(v))

    def test_arity(self):
        with self.assertRaises(ArityMismatch):
            QuadricPoint.of(self.Rx, ['x'], ['1', '0'], 0)
        v = QuadricPoint.of(self.Rxy, ['x', 'y'], [0, 0], 0)
        with self.assertRaises(ArityMismatch):
            validate(v, n=1)

    def test_homotopy_between_trivial_points(self):
        H = homotopy(self.Rx, ['T*(1 - T)'], ['1'], 'T')
        self.assertTrue(validate(H))
        start, end = H.endpoints()
        self.assertEqual(start, QuadricPoint.of(self.Rx, [0], [1], 0))
        self.assertEqual(end, QuadricPoint.of(self.Rx, [0], [1], 1))
        middle = H.at(Fraction(1, 2))
        self.assertEqual(middle.s, self.Rx(Fraction(1, 2)))
        self.assertTrue(validate(middle))

    def test_invalid_homotopy(self):
        H = homotopy(self.Rx, ['T'], ['1'], 'T')
        with self.assertRaises(EquationViolated):
            validate(H)

    def test_trivial_chain(self):
        for n in (1, 2):
            with self.subTest(n=n):
                chain = trivial_homotopies(self.Rxy, n)
                for H in chain:
                    self.assertTrue(validate(H))
                self.assertEqual(chain[0].at(0), zero_point(self.Rxy, n))
                self.assertEqual(chain[-1].at(1), base_point(self.Rxy, n))
                for left, right in zip(chain, chain[1:]):
                    self.assertEqual(left.at(1), right.at(0))


class TestVanishingIdeal(unittest.TestCase):

    def setUp(self):
        self.Rx = make_ring('QQ', ['x'])
        self.Rxy = make_ring('QQ', ['x', 'y'])

    def test_examples(self):
        cases = [
            (QuadricPoint.of(self.Rx, ['x'], ['1 - x'], 'x'), IdealHandle(self.Rx, ['x'])),
            (base_point(self.Rx, 3), IdealHandle(self.Rx, [1])),
            (QuadricPoint.of(self.Rxy, ['x', 'y'], [0, 0], 0), IdealHandle(self.Rxy, ['x', 'y'])),
        ]
        for v, expected in cases:
            with self.subTest(point=str(v)):
                self.assertEqual(vanishing_ideal(v), expected)

    def test_orientation_generates(self):
        """s ∈ ⟨a⟩ + I(v)² pour tout point valide"""
        points = [
            QuadricPoint.of(self.Rx, ['x'], ['1 - x'], 'x'),
            QuadricPoint.of(self.Rx, ['x + x^2'], [-1], '-x'),
            QuadricPoint.of(self.Rx, ['x - x^2'], [1], 'x'),
            QuadricPoint.of(self.Rxy, ['x^2 - x', 'y'], [0, 0], 0),
        ]
        for v in points:
            with self.subTest(point=str(v)):
                validate(v)
                I = vanishing_ideal(v)
                generated = ideal_sum(IdealHandle(v.ring, v.a), ideal_power(I, 2))
                self.assertTrue(contains(generated, v.s))


class TestJouanolouDevice(unittest.TestCase):

    def test_sizes(self):
        for n, count in ((1, 10), (2, 16)):
            with self.subTest(n=n):
                device = jouanolou_device(n)
                self.assertEqual(len(device.ring.variables), count)
                self.assertEqual(len(device.ring.relations), 3)
                self.assertEqual(device.ring.label, f"J{2 * n}")

    def test_relations(self):
        device = jouanolou_device(1)
        R = device.ring
        self.assertEqual(R('x1*y1'), R('z - z^2'))
        self.assertEqual(R('xp1*yp1'), R('zp - zp^2'))
        self.assertEqual(R('u1*x1 + u2*z + v1*xp1 + v2*zp'), R.one)

    def test_blocks(self):
        device = jouanolou_device(2)
        self.assertEqual([str(x) for x in device.block('x')], ['x1', 'x2'])
        self.assertEqual(str(device.one('u_last')), 'u3')

    def test_prime_field(self):
        device = jouanolou_device(1, make_ring('F5', ['x']).field)
        self.assertEqual(device.ring.field.characteristic, 5)
        self.assertEqual(len(device.ring.relations), 3)

    def test_rejects_n_zero(self):
        with self.assertRaises(UnsupportedN):
            jouanolou_device(0)


class TestFoldMap(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.fold = fold_map(1)

    def test_certified(self):
        self.assertTrue(self.fold.certified, self.fold.checks)

    def test_equation_on_device(self):
        self.assertTrue(validate(self.fold.point))

    def test_displayed_formula(self):
        R = self.fold.device.ring
        self.assertEqual(self.fold.displayed_c[0], R('xp1*(u1*x1 + u2*z) + x1*(v1*xp1 + v2*zp)'))

    def test_orientation_uses_squared_idempotents(self):
        R = self.fold.device.ring
        e, e_prime = R('u1*x1 + u2*z'), R('v1*xp1 + v2*zp')
        self.assertEqual(self.fold.c[0], e_prime * e_prime * R('x1') + e * e * R('xp1'))
        self.assertEqual(self.fold.c[0] - self.fold.displayed_c[0], -(e * e_prime) * R('x1 + xp1'))
        self.assertTrue(self.fold.checks['displayed_c_difference'])

    def test_restrictions_are_identity(self):
        left = quadric_ring(1)
        right = quadric_ring(1, prime=True)
        self.assertEqual(self.fold.left_restriction, QuadricPoint.of(left, ['x1'], ['y1'], 'z'))
        self.assertEqual(self.fold.right_restriction, QuadricPoint.of(right, ['xp1'], ['yp1'], 'zp'))

    def test_unsupported_n(self):
        for n in (0, 3):
            with self.subTest(n=n):
                with self.assertRaises(UnsupportedN):
                    fold_map(n)


@pytest.mark.slow
def test_fold_map_n2():
    fold = fold_map(2)
    assert fold.certified, fold.checks
    assert validate(fold.point)


@pytest.mark.slow
def test_fold_map_over_prime_field():
    fold = fold_map(1, make_ring('F5', ['x']).field)
    assert fold.certified, fold.checks
