import random

from hypothesis import given, settings
from hypothesis import strategies as st

from rescuepd.cover import (boolean_cover_combine, cover_product_direct,
                            cover_product_ranked)


def test_indicator_of_empty_is_identity():
    size = 16
    e = [1] + [0] * (size - 1)
    assert cover_product_direct(e, e) == e
    assert cover_product_ranked(e, e) == e
    g = [random.Random(1).randint(0, 1) for _ in range(size)]
    assert cover_product_direct(e, g) == g


def test_all_ones_side():
    size = 32
    ones = [1] * size
    g = [0] * size
    g[0b00110] = 1
    h = cover_product_direct(ones, g)
    expected = [1 if (mask | 0b00110) == mask else 0 for mask in range(size)]
    assert h == expected
    assert cover_product_ranked(ones, g) == h


def test_two_implementations_agree_width_10():
    rng = random.Random(42)
    size = 1 << 10
    f = [rng.randint(0, 1) for _ in range(size)]
    g = [rng.randint(0, 1) for _ in range(size)]
    assert cover_product_ranked(f, g) == cover_product_direct(f, g)


@given(st.integers(1, 6), st.integers(0, 2**10))
@settings(max_examples=60, deadline=None)
def test_agreement_property(width, seed):
    rng = random.Random(seed)
    size = 1 << width
    f = [rng.randint(0, 1) for _ in range(size)]
    g = [rng.randint(0, 1) for _ in range(size)]
    assert cover_product_ranked(f, g) == cover_product_direct(f, g)


def test_dispatch():
    f = [1, 0, 0, 1]
    g = [0, 1, 1, 0]
    assert boolean_cover_combine(f, g, "direct") == \
        boolean_cover_combine(f, g, "ranked")
