import numpy as np
import numpy.testing as npt
import pytest

from slagcond.rng import STREAM_BATCHES, STREAM_INIT, STREAM_SPLIT, seeded_rng


def test_same_seed_and_stream_reproduce():
    a = seeded_rng(42, STREAM_SPLIT).uniform(size=10)
    b = seeded_rng(42, STREAM_SPLIT).uniform(size=10)
    npt.assert_array_equal(a, b)


def test_streams_are_independent():
    draws = {
        stream: seeded_rng(7, stream).uniform(size=10)
        for stream in (STREAM_SPLIT, STREAM_INIT, STREAM_BATCHES)
    }
    assert not np.array_equal(draws[STREAM_SPLIT], draws[STREAM_INIT])
    assert not np.array_equal(draws[STREAM_INIT], draws[STREAM_BATCHES])


def test_different_seeds_differ():
    assert not np.array_equal(
        seeded_rng(0, STREAM_SPLIT).uniform(size=10),
        seeded_rng(1, STREAM_SPLIT).uniform(size=10),
    )


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        seeded_rng(-1, STREAM_SPLIT)


def test_draws_are_platform_pinned():
    # PCG64 is algorithmically specified; freeze draws so any change to the
    # stream construction is caught
    assert int(seeded_rng(0, STREAM_SPLIT).integers(0, 1 << 32)) == 3445585646
    npt.assert_allclose(
        seeded_rng(123, STREAM_INIT).uniform(size=3),
        [0.5529906835266356, 0.2283073510144762, 0.3846197262386587],
        rtol=0,
        atol=0,
    )
