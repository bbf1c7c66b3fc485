import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from walkprep.core import (
    BasisState,
    SparseState,
    diff_bits,
    hamming_distance,
    state_from_json,
    state_to_json,
)
from walkprep.errors import DimensionError, StateValidationError


def bits(s):
    return BasisState.from_bits(s)


class TestBasisState:
    def test_roundtrip_and_convention(self):
        b = bits("0110")
        assert b.n == 4 and b.value == 6
        assert b.bits == "0110"
        # qubit 0 is the leftmost character
        assert [b.bit(q) for q in range(4)] == [0, 1, 1, 0]
        assert b.flip(0).bits == "1110"

    def test_rejects_bad_input(self):
        with pytest.raises(StateValidationError):
            BasisState.from_bits("01x")
        with pytest.raises(StateValidationError):
            BasisState(2, 4)
        with pytest.raises(DimensionError):
            BasisState(0, 0)
        with pytest.raises(DimensionError):
            bits("01").bit(2)


class TestHamming:
    def test_two_bit_example(self):
        assert hamming_distance(bits("001"), bits("111")) == 2

    def test_identity(self):
        assert hamming_distance(bits("010"), bits("010")) == 0

    def test_complement(self):
        assert hamming_distance(bits("000"), bits("111")) == 3

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            hamming_distance(bits("00"), bits("000"))

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_metric(self, x, y, z):
        a, b, c = (BasisState(8, v) for v in (x, y, z))
        assert hamming_distance(a, b) == hamming_distance(b, a)
        assert (hamming_distance(a, b) == 0) == (a == b)
        assert hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c)


class TestDiffBits:
    def test_exclude(self):
        assert diff_bits(bits("001"), bits("111"), exclude=2) == {0, 1}

    def test_no_exclude(self):
        assert diff_bits(bits("001"), bits("111")) == {0, 1}

    def test_equal_states(self):
        assert diff_bits(bits("0101"), bits("0101"), exclude=1) == set()

    @given(st.integers(0, 1023), st.integers(0, 1023))
    def test_cardinality_matches_hamming(self, x, y):
        a, b = BasisState(10, x), BasisState(10, y)
        assert len(diff_bits(a, b)) == hamming_distance(a, b)


class TestSparseState:
    def test_valid_state(self):
        s = SparseState.from_dict({"00": 0.6, "11": 0.8})
        assert s.m == 2 and s.n == 2
        # amplitudes come back in ascending basis order
        assert [b.bits for b in s.basis_states()] == ["00", "11"]

    def test_rejects_tiny_amplitude(self):
        with pytest.raises(StateValidationError):
            SparseState.from_dict({"00": 1.0, "11": 1e-13})

    def test_rejects_unnormalized(self):
        with pytest.raises(StateValidationError):
            SparseState.from_dict({"00": 0.5, "11": 0.5})

    def test_rejects_wrong_length_key(self):
        with pytest.raises(DimensionError):
            SparseState(2, {BasisState.from_bits("000"): 1.0})

    def test_rejects_empty(self):
        with pytest.raises(StateValidationError):
            SparseState(2, {})


class TestSerialization:
    def test_round_trip(self):
        s = SparseState.from_dict({"010": 0.6j, "111": -0.8})
        again = state_from_json(state_to_json(s))
        assert again.n == s.n
        assert again.amplitudes == s.amplitudes

    def test_document_shape(self):
        doc = json.loads(state_to_json(SparseState.from_dict({"01": 1.0})))
        assert doc["n"] == 2
        assert doc["amplitudes"] == {"01": [1.0, 0.0]}

    def test_rejects_wrong_key_length(self):
        text = json.dumps({"n": 3, "amplitudes": {"01": [1.0, 0.0]}})
        with pytest.raises(StateValidationError):
            state_from_json(text)

    @pytest.mark.parametrize(
        "doc",
        [
            "{",
            json.dumps([1, 2]),
            json.dumps({"n": 2}),
            json.dumps({"n": "2", "amplitudes": {}}),
            json.dumps({"n": 2, "amplitudes": {"00": [1.0]}}),
        ],
    )
    def test_rejects_malformed(self, doc):
        with pytest.raises(StateValidationError):
            state_from_json(doc)
