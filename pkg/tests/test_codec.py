"""
Tests for the JSON and text formats.
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.elements.builders import cylinder_swap, odometer_at
from neretin_toolkit.exceptions import CodecError
from neretin_toolkit.groups.permutation import Permutation
from neretin_toolkit.tree.addresses import Address, Signature
from neretin_toolkit.utils import codec

SIG = Signature(2, 2)


class TestJson:

    def test_dumps_is_compact_and_sorted(self):
        assert codec.dumps({'b': 1, 'a': [1, 2]}) == '{"a":[1,2],"b":1}'

    def test_loads_rejects_garbage(self):
        with pytest.raises(CodecError):
            codec.loads('{"a": ')


class TestElementCodec:
    """The {sig, dom, ran, map, machine} schema."""

    def test_element_to_dict(self):
        assert codec.element_to_dict(cylinder_swap(SIG, "0", "1")) == {
            'sig': [2, 2],
            'dom': ['0', '1'],
            'ran': ['0', '1'],
            'map': [['0', '1', 0], ['1', '0', 0]],
            'machine': {'states': [0], 'delta': [[0, 0]], 'lambda': [[0, 1]], 'id': 0},
        }

    def test_json_round_trip(self):
        g = odometer_at(SIG, "10")
        text = codec.element_to_json(g)
        assert codec.element_from_json(text) == g
        assert codec.element_to_json(codec.element_from_json(text)) == text

    def test_missing_key(self):
        data = codec.element_to_dict(cylinder_swap(SIG, "0", "1"))
        del data['machine']
        with pytest.raises(CodecError):
            codec.element_from_dict(data)

    def test_dom_must_match_map(self):
        data = codec.element_to_dict(cylinder_swap(SIG, "0", "1"))
        data['dom'] = ['00', '01', '1']
        with pytest.raises(CodecError):
            codec.element_from_dict(data)

    def test_invalid_diagram(self):
        data = codec.element_to_dict(cylinder_swap(SIG, "0", "1"))
        data['map'] = [['0', '1', 0], ['1', '1', 0]]
        data['ran'] = ['1', '1']
        with pytest.raises(CodecError):
            codec.element_from_dict(data)

    def test_malformed_machine(self):
        data = codec.element_to_dict(cylinder_swap(SIG, "0", "1"))
        data['machine'] = {'delta': [[0, 0]], 'lambda': [[0, 0]]}
        with pytest.raises(CodecError):
            codec.element_from_dict(data)

    def test_wide_signature_addresses(self):
        sig = Signature(2, 12)
        g = cylinder_swap(sig, Address.of(0), Address.of(11))
        data = codec.element_to_dict(g)
        assert ['11,', '0,', 0] in data['map']
        assert codec.element_from_dict(data) == g


class TestScalars:

    def test_signature(self):
        assert codec.signature_from("3,2") == Signature(3, 2)
        assert codec.signature_from([2, 1]).non_standard
        with pytest.raises(CodecError):
            codec.signature_from(7)
        with pytest.raises(CodecError):
            codec.signature_from([2.0, 2])

    def test_fractions(self):
        assert codec.parse_fraction("3/4") == Fraction(3, 4)
        assert codec.fraction_text(Fraction(1)) == "1/1"
        with pytest.raises(CodecError):
            codec.parse_fraction("1/0")

    def test_measure(self):
        mu = codec.measure_from_dict(SIG, {'support': ['0', '10', '11'], 'masses': ['1/2', '1/4', '1/4']})
        assert mu.mass_of(Address.parse("10")) == Fraction(1, 4)
        with pytest.raises(CodecError):
            codec.measure_from_dict(SIG, {'support': ['0', '1']})

    def test_leafset_and_clopen(self):
        assert codec.leafset_from(SIG, ['1', '0']).to_list() == ['0', '1']
        assert codec.clopen_from(SIG, "{10,11}").to_list() == ['1']
        with pytest.raises(CodecError):
            codec.leafset_from(SIG, "{0}")


class TestPermutations:

    def test_cycle_string(self):
        perms = codec.permutations_from("(0 1),(0 1 2 3)")
        assert [p.degree for p in perms] == [4, 4]
        assert codec.permutation_list(perms) == [p.to_cycle_string() for p in perms]

    def test_cycle_strings_take_the_array_degree(self):
        perms = codec.permutations_from([[1, 0, 2], "(0 1)"])
        assert perms == [Permutation((1, 0, 2)), Permutation((1, 0, 2))]

    def test_cycle_strings_alone_are_padded(self):
        perms = codec.permutations_from(["(0 1)", "(0 1 2 3)"])
        assert [p.degree for p in perms] == [4, 4]

    def test_image_arrays_of_different_degrees(self):
        with pytest.raises(CodecError, match="DegreeMismatch"):
            codec.permutations_from([[1, 0, 2, 3], [1, 0, 2]])
        with pytest.raises(CodecError, match="DegreeMismatch"):
            codec.permutations_from([[1, 0, 2]], 4)
        with pytest.raises(CodecError):
            codec.permutations_from(["(0 4)"], 4)

    def test_image_arrays_need_integers(self):
        with pytest.raises(CodecError):
            codec.permutations_from([[1.0, 0.0]])
        with pytest.raises(CodecError):
            codec.permutations_from([[True, False]])
        with pytest.raises(CodecError):
            codec.permutations_from([[]])
        with pytest.raises(CodecError):
            codec.permutations_from(5)

    def test_bad_image_array(self):
        with pytest.raises(CodecError):
            codec.permutations_from([[0, 0]])

    def test_certificate_input(self):
        sig, levels, n0 = codec.certificate_input({
            'signature': [2, 2],
            'n0': 1,
            'levels': [
                {'n': 1, 'generators': ['(0 1)']},
                {'n': 2, 'generators': [[1, 0, 2, 3], '(0 1 2 3)']},
            ],
        })
        assert sig == SIG
        assert n0 == 1
        assert [n for n, _ in levels] == [1, 2]
        assert [p.degree for p in levels[1][1]] == [4, 4]

    def test_certificate_without_levels(self):
        with pytest.raises(CodecError):
            codec.certificate_input({'signature': [2, 2]})

    def test_certificate_generators_must_have_level_degree(self):
        with pytest.raises(CodecError, match="DegreeMismatch"):
            codec.certificate_input({
                'signature': [2, 2],
                'levels': [{'n': 2, 'generators': [[1, 0, 2, 3], [1, 0, 2]]}],
            })
        with pytest.raises(CodecError):
            codec.certificate_input({'signature': [2, 2], 'levels': [{'n': 0, 'generators': []}]})
