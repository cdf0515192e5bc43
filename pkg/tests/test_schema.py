"""Tests for experiment document validation."""

import math
import os
import sys
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from experiments.schema import errors_of, validate


def sieve_doc(**params):
    base = {'p': 0.5, 'N': 3}
    base.update(params)
    return {'kind': 'sieve', 'parameters': base, 'seed': 1}


def keys(diagnostics, level='error'):
    return [d.key for d in diagnostics if d.level == level]


class TestValidDocuments(unittest.TestCase):
    """Documents that validate cleanly."""

    def test_minimal_sieve(self):
        self.assertEqual(validate(sieve_doc()), [])

    def test_hitting_control_not_strict(self):
        doc = {
            'kind': 'hitting',
            'parameters': {'kappa': 2.0, 'center_angle': 0.0, 'radii': [2.0], 'n_traces': 10, 'strict': False},
        }
        self.assertEqual(errors_of(validate(doc)), [])

    def test_snowflake_map(self):
        doc = sieve_doc(map={'kind': 'snowflake', 'depth': 2, 'flatness': 0.3})
        self.assertEqual(validate(doc), [])


class TestDocumentErrors(unittest.TestCase):
    """Each problem is reported with the offending key."""

    def test_p_out_of_range(self):
        diagnostics = validate(sieve_doc(p=1.2))
        self.assertEqual(keys(diagnostics), ['parameters.p'])
        self.assertIn('p ∈ (0, 1)', diagnostics[0].message)

    def test_hitting_kappa_outside_precondition(self):
        doc = {'kind': 'hitting', 'parameters': {'kappa': 9.0, 'radii': [0.1], 'n_traces': 10}}
        diagnostics = validate(doc)
        self.assertIn('parameters.kappa', keys(diagnostics))
        message = [d.message for d in diagnostics if d.key == 'parameters.kappa'][0]
        self.assertIn('κ ∈ (4, 8)', message)

    def test_hitting_radius_and_angle(self):
        doc = {
            'kind': 'hitting',
            'parameters': {'kappa': 6.0, 'center_angle': 0.1, 'radii': [0.1, 0.4], 'n_traces': 10},
        }
        self.assertEqual(sorted(keys(validate(doc))), ['parameters.center_angle', 'parameters.radii'])

    def test_ratio_radii_must_be_listed(self):
        doc = {
            'kind': 'hitting',
            'parameters': {'kappa': 6.0, 'radii': [0.1, 0.2], 'ratio': [0.2, 0.05], 'n_traces': 10},
        }
        self.assertEqual(keys(validate(doc)), ['parameters.ratio'])

    def test_unknown_keys(self):
        doc = sieve_doc(colour='blue')
        doc['extra'] = 1
        self.assertEqual(sorted(keys(validate(doc))), ['extra', 'parameters.colour'])

    def test_required_parameter(self):
        doc = {'kind': 'sieve', 'parameters': {'p': 0.5}}
        diagnostics = validate(doc)
        self.assertEqual(keys(diagnostics), ['parameters.N'])
        self.assertEqual(diagnostics[0].message, 'required')

    def test_unknown_kind(self):
        self.assertEqual(keys(validate({'kind': 'riemann'})), ['kind'])

    def test_not_a_mapping(self):
        self.assertEqual(keys(validate([1, 2])), ['<root>'])

    def test_seed(self):
        doc = sieve_doc()
        doc['seed'] = -3
        self.assertEqual(keys(validate(doc)), ['seed'])

    def test_boolean_is_not_integer(self):
        self.assertEqual(keys(validate(sieve_doc(N=True))), ['parameters.N'])

    def test_budget(self):
        doc = sieve_doc()
        doc['budget'] = {'max_seconds': -1, 'max_memory': 10}
        self.assertEqual(sorted(keys(validate(doc))), ['budget.max_memory', 'budget.max_seconds'])

    def test_n_max_below_N(self):
        self.assertEqual(keys(validate(sieve_doc(N=6, n_max=4))), ['parameters.n_max'])

    def test_spectrum_radii_span(self):
        doc = {'kind': 'spectrum', 'parameters': {'j_min': 6, 'j_max': 7}}
        self.assertEqual(keys(validate(doc)), ['parameters.j_max'])

    def test_bad_map_descriptors(self):
        self.assertEqual(keys(validate(sieve_doc(map={'kind': 'riemann'}))), ['parameters.map'])
        self.assertEqual(keys(validate(sieve_doc(map={'kind': 'snowflake', 'depth': 9}))), ['parameters.map'])
        self.assertEqual(keys(validate(sieve_doc(map={'kind': 'polygon', 'vertices': [[0, 0]]}))), ['parameters.map'])

    def test_two_sided_window(self):
        doc = {'kind': 'two-sided', 'parameters': {'kappa': 6.0, 'n_traces': 4, 'window': [1.0, 0.5]}}
        self.assertEqual(keys(validate(doc)), ['parameters.window'])

    def test_non_finite_number(self):
        self.assertEqual(keys(validate(sieve_doc(p=math.nan))), ['parameters.p'])

    def test_covering_exponent_below_flat_spectrum(self):
        doc = {'kind': 'john-dimension', 'parameters': {'kappa': 6.0, 'covering_t': 0.5}}
        self.assertEqual(keys(validate(doc)), ['parameters.covering_t'])
        doc['parameters']['covering_t'] = 0.8
        self.assertEqual(keys(validate(doc)), [])


class TestWarnings(unittest.TestCase):
    """Warnings flag estimates that will not apply."""

    def test_refined_exponent_non_positive(self):
        diagnostics = validate(sieve_doc(mode='refined', p=0.5))
        self.assertEqual(errors_of(diagnostics), [])
        self.assertEqual(keys(diagnostics, 'warning'), ['parameters.p'])

    def test_refined_close_to_one_is_clean(self):
        self.assertEqual(validate(sieve_doc(mode='refined', p=0.99)), [])


if __name__ == '__main__':
    unittest.main()
