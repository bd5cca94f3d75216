import numpy as np
import pytest

from graphlets.rand import AliasTable, Uniforms, draw_index, stream


def test_streams_are_reproducible_and_distinct():
    a = stream(5, 0, 1).random(4)
    assert np.array_equal(a, stream(5, 0, 1).random(4))
    assert not np.array_equal(a, stream(5, 0, 2).random(4))
    assert not np.array_equal(a, stream(6, 0, 1).random(4))


def test_uniforms_consume_generator_sequence():
    u = Uniforms(np.random.Generator(np.random.PCG64(3)), chunk=7)
    got = [u() for _ in range(20)]
    ref = np.random.Generator(np.random.PCG64(3)).random(20).tolist()
    assert got == ref


def test_draw_index_range():
    assert draw_index(0.0, 5) == 0
    assert draw_index(np.nextafter(1.0, 0), 5) == 4


def test_alias_table_law():
    t = AliasTable(np.array([2, 5, 9]), np.array([1.0, 2.0, 5.0]))
    assert np.allclose(t.probabilities(), [1 / 8, 2 / 8, 5 / 8])
    u = Uniforms(np.random.default_rng(0))
    draws = np.array([t.draw(u) for _ in range(40000)])
    freq = np.array([(draws == s).mean() for s in (2, 5, 9)])
    assert np.abs(freq - [1 / 8, 2 / 8, 5 / 8]).max() < 0.01


def test_alias_rejects_bad_weights():
    with pytest.raises(ValueError):
        AliasTable(np.array([0, 1]), np.array([0.0, 0.0]))
