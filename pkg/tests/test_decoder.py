import itertools

import numpy as np
import pytest

from aqc.codes import eg_ldpc_type1
from aqc.decoder import BatchBitFlip, BitFlipConfig, bit_flip_decode, bounded_distance_block_error, per_weight_failure
from aqc.errors import ValidationError

from oracles import binomial_tail

# exhaustive flip-all-maximal runs on the [15,7] code, frozen as regression values
PER_WEIGHT_FAILURE_15_7 = {0: 0.0, 1: 0.0, 2: 0.0, 3: 390 / 455, 4: 1.0}


@pytest.fixture(scope="module")
def H15():
    return eg_ldpc_type1(2, 1, 2, 2, cyclic=True).sparse_parity_check


def test_codeword_is_unchanged(H15):
    code = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    for cw in code.generator:
        out = bit_flip_decode(H15, cw)
        assert out.converged and out.iterations_used == 0
        assert np.array_equal(out.decoded, cw) and not out.estimate.any()


def test_all_single_errors_corrected(H15):
    for i in range(15):
        e = np.zeros(15, dtype=np.int64)
        e[i] = 1
        out = bit_flip_decode(H15, e)
        assert out.converged and not out.decoded.any()
        assert np.array_equal(out.estimate, e)


@pytest.mark.parametrize("w", sorted(PER_WEIGHT_FAILURE_15_7))
def test_per_weight_failure_regression(H15, w):
    assert per_weight_failure(H15, w) == pytest.approx(PER_WEIGHT_FAILURE_15_7[w], abs=1e-12)


def test_batch_decoder_matches_single_decoder(H15):
    batch = BatchBitFlip(H15)
    for w in (2, 3):
        pats = list(itertools.combinations(range(15), w))
        E = np.zeros((len(pats), 15), dtype=np.uint8)
        for r, idx in enumerate(pats):
            E[r, list(idx)] = 1
        residual, conv = batch.decode(E)
        for r in range(0, len(pats), 7):
            one = bit_flip_decode(H15, E[r])
            assert one.converged == conv[r]
            assert np.array_equal(one.decoded, residual[r])


def test_converged_means_zero_syndrome(H15):
    rng = np.random.default_rng(3)
    Hd = H15.toarray()
    for _ in range(200):
        y = (rng.random(15) < 0.2).astype(np.int64)
        out = bit_flip_decode(H15, y, BitFlipConfig(max_iterations=10))
        if out.converged:
            assert not ((Hd @ out.decoded) % 2).any()


def test_single_random_rule_is_seeded(H15):
    cfg = BitFlipConfig(flip_rule="flip-single-random")
    y = np.zeros(15, dtype=np.int64)
    y[[0, 5, 9]] = 1
    a = bit_flip_decode(H15, y, cfg, seed=11)
    b = bit_flip_decode(H15, y, cfg, seed=11)
    assert np.array_equal(a.decoded, b.decoded) and a.iterations_used == b.iterations_used


def test_config_and_shape_validation(H15):
    with pytest.raises(ValidationError):
        BitFlipConfig(max_iterations=0)
    with pytest.raises(ValidationError):
        BitFlipConfig(flip_rule="majority")
    with pytest.raises(ValidationError):
        bit_flip_decode(H15, np.zeros(14))


def test_bounded_distance_closed_form():
    assert bounded_distance_block_error(15, 1, 0.0) == 0
    assert bounded_distance_block_error(15, 15, 0.3) == 0
    assert bounded_distance_block_error(15, 1, 0.01) == pytest.approx(binomial_tail(15, 1, 0.01), rel=1e-12)
    assert binomial_tail(15, 1, 0.01) == pytest.approx(0.009629773443364797, rel=1e-14)
    assert round(bounded_distance_block_error(15, 1, 0.01), 5) == 0.00963
    # large n stays finite and in range
    v = bounded_distance_block_error(4095, 40, 0.005)
    assert 0 <= v <= 1
    with pytest.raises(ValidationError):
        bounded_distance_block_error(15, 16, 0.1)
    with pytest.raises(ValidationError):
        bounded_distance_block_error(15, 1, 1.5)


def test_bounded_distance_monotone():
    eps = np.linspace(0, 0.5, 40)
    for t in range(0, 5):
        vals = [bounded_distance_block_error(63, t, e) for e in eps]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
    for e in (0.01, 0.1):
        vals = [bounded_distance_block_error(63, t, e) for t in range(64)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))
