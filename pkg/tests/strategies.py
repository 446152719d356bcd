"""Hypothesis strategies: seeds drawn by hypothesis, matrices built from them."""

import numpy as np
from hypothesis import strategies as st

from tracemetric.sampling import random_gl, random_glsym, random_spd, random_tangent

orders = st.integers(min_value=2, max_value=5)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def spd(draw, n=None):
    n = draw(orders) if n is None else n
    return random_spd(n, np.random.default_rng(draw(seeds)))


@st.composite
def glsym(draw):
    n = draw(orders)
    p = draw(st.integers(min_value=0, max_value=n))
    return random_glsym(n, p, np.random.default_rng(draw(seeds)))


@st.composite
def spd_with_tangents(draw, k=2):
    n = draw(orders)
    rng = np.random.default_rng(draw(seeds))
    return (random_spd(n, rng),) + tuple(random_tangent(n, rng) for _ in range(k))


@st.composite
def glsym_with_tangents(draw, k=2):
    n = draw(orders)
    p = draw(st.integers(min_value=0, max_value=n))
    rng = np.random.default_rng(draw(seeds))
    return (random_glsym(n, p, rng),) + tuple(random_tangent(n, rng) for _ in range(k))


@st.composite
def invertible(draw, n):
    return random_gl(n, np.random.default_rng(draw(seeds)))
