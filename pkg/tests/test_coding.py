import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstable import (
    BinCounts,
    CodeStream,
    RngStream,
    ThresholdScheme,
    ZeroPlus,
    decode_counts,
    encode,
    power_encode,
    sample_stable,
)


@pytest.fixture()
def scheme():
    return ThresholdScheme(alpha=1.0, thresholds=np.array([0.5, 2.0, 8.0]))


def test_scheme_validation():
    with pytest.raises(ValueError):
        ThresholdScheme(alpha=1.0, thresholds=np.array([2.0, 1.0]))  # not increasing
    with pytest.raises(ValueError):
        ThresholdScheme(alpha=1.0, thresholds=np.array([0.0, 1.0]))  # not positive
    with pytest.raises(ValueError):
        ThresholdScheme(alpha=1.0, thresholds=np.array([]))
    with pytest.raises(ValueError):
        ThresholdScheme(alpha=2.5, thresholds=np.array([1.0]))


def test_scheme_thresholds_are_frozen(scheme):
    with pytest.raises(ValueError):
        scheme.thresholds[0] = 9.0


def test_etas_for_decrease(scheme):
    etas = scheme.etas_for(4.0)
    assert etas == pytest.approx([8.0, 2.0, 0.5])
    assert np.all(np.diff(etas) < 0)
    with pytest.raises(ValueError):
        scheme.etas_for(0.0)


def test_bin_counts_validation():
    counts = BinCounts(counts=np.array([3, 0, 1, 2]))
    assert counts.m == 3
    assert counts.n == 6
    with pytest.raises(ValueError):
        BinCounts(counts=np.array([1, -1]))
    with pytest.raises(ValueError):
        BinCounts(counts=np.array([1.5, 2.0]))
    with pytest.raises(ValueError):
        BinCounts(counts=np.array([4]))


def test_boundary_sample_goes_to_lower_bin(scheme):
    # a powered value equal to a threshold belongs to the bin below it
    counts, _ = power_encode(np.array([0.5, 2.0, 8.0]), scheme)
    assert counts.counts.tolist() == [1, 1, 1, 0]


def test_encode_agrees_with_power_encode(scheme):
    gen = RngStream(seed=21, stream_id=0).generator()
    y = sample_stable(1.0, gen, 500)
    c1, s1 = encode(y, scheme)
    c2, s2 = power_encode(np.abs(y) ** 1.0, scheme)
    assert np.array_equal(c1.counts, c2.counts)
    assert s1.payload == s2.payload


def test_encode_rejects_zero_plus_scheme():
    zp = ThresholdScheme(alpha=ZeroPlus, thresholds=np.array([1.0]))
    with pytest.raises(ValueError):
        encode(np.array([0.4, 2.0]), zp)
    counts, _ = power_encode(np.array([0.4, 2.0]), zp)
    assert counts.counts.tolist() == [1, 1]


def test_decode_counts_round_trip(scheme):
    gen = RngStream(seed=9, stream_id=0).generator()
    y = sample_stable(1.0, gen, 257)  # odd count exercises pad bits
    counts, code = encode(y, scheme)
    assert np.array_equal(decode_counts(code, scheme.m).counts, counts.counts)
    with pytest.raises(ValueError):
        decode_counts(code, 1)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(min_value=1, max_value=300), seed=st.integers(min_value=0, max_value=2**32))
def test_code_stream_bytes_round_trip(n, seed):
    scheme = ThresholdScheme(alpha=1.0, thresholds=np.array([0.5, 2.0, 8.0]))
    gen = RngStream(seed=seed, stream_id=0).generator()
    _, code = encode(sample_stable(1.0, gen, n), scheme)
    blob = code.to_bytes()
    back = CodeStream.from_bytes(blob)
    assert back == code
    assert back.to_bytes() == blob


def test_code_stream_rejects_corruption():
    scheme = ThresholdScheme(alpha=1.0, thresholds=np.array([1.0]))
    _, code = power_encode(np.array([0.5, 3.0]), scheme)
    blob = code.to_bytes()
    with pytest.raises(ValueError):
        CodeStream.from_bytes(b"XXXX" + blob[4:])
    with pytest.raises(ValueError):
        CodeStream.from_bytes(blob[:-1])
    with pytest.raises(ValueError):
        CodeStream.from_bytes(blob + b"\x00")


def test_bits_per_sample():
    assert CodeStream(m=1, sample_count=0, payload=b"").bits_per_sample == 1
    assert CodeStream(m=3, sample_count=0, payload=b"").bits_per_sample == 2
    assert CodeStream(m=7, sample_count=0, payload=b"").bits_per_sample == 3
