import math

import numpy as np
import pytest

from xnbf import (
    Direction,
    Lattice,
    Quadrant,
    direction_count,
    enumerate_directions,
    neighborhood_mask,
    quadrant_count,
)
from xnbf.neighborhood import DIAGONAL_QUADRANTS
from xnbf.shiftops import neighbor_offset

# published masks, printed top row = l = n down to l = 1
PRINTED_MASKS = {
    1: [[1]],
    2: [[1, 0],
        [1, 1]],
    3: [[1, 1, 0],
        [1, 0, 1],
        [1, 1, 1]],
    4: [[1, 0, 1, 0],
        [1, 1, 0, 1],
        [1, 0, 1, 0],
        [1, 1, 1, 1]],
    5: [[1, 1, 1, 1, 0],
        [1, 0, 1, 0, 1],
        [1, 1, 0, 1, 1],
        [1, 0, 1, 0, 1],
        [1, 1, 1, 1, 1]],
}


@pytest.mark.parametrize("n", sorted(PRINTED_MASKS))
def test_mask_matches_printed_tables(n):
    mask = neighborhood_mask(n)
    assert mask[::-1].tolist() == PRINTED_MASKS[n]


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 3), (3, 7), (4, 11), (5, 19)])
def test_quadrant_counts(n, expected):
    assert quadrant_count(neighborhood_mask(n)) == expected


@pytest.mark.parametrize("w,expected", [(3, 8), (5, 16), (7, 32), (9, 48), (11, 80)])
def test_direction_counts(w, expected):
    assert len(enumerate_directions(w)) == expected
    assert direction_count(w) == expected


def test_mask_structure():
    for n in range(1, 9):
        mask = neighborhood_mask(n)
        # definition, symmetry, all-ones first row/col
        for l in range(1, n + 1):
            for m in range(1, n + 1):
                assert mask[l - 1, m - 1] == (1 if math.gcd(l, m) == 1 else 0)
        assert np.array_equal(mask, mask.T)
        assert mask[0].all() and mask[:, 0].all()


def test_count_relation():
    for w in range(3, 18, 2):
        n_q = quadrant_count(neighborhood_mask((w - 1) // 2))
        assert len(enumerate_directions(w)) == 4 * (n_q + 1)


def test_no_duplicates_and_gcd():
    for w in (3, 5, 7, 9, 11, 13, 15):
        dirs = enumerate_directions(w)
        assert len({(d.quadrant, d.l, d.m) for d in dirs}) == len(dirs)
        for d in dirs:
            if d.quadrant in DIAGONAL_QUADRANTS:
                assert math.gcd(d.l, d.m) == 1


def test_rotation_closure():
    # quadrant cycling with (l, m) fixed is a bijection on the non-axis subset
    cycle = {Quadrant.I: Quadrant.II, Quadrant.II: Quadrant.III,
             Quadrant.III: Quadrant.IV, Quadrant.IV: Quadrant.I}
    for w in (5, 9, 13):
        non_axis = {(d.quadrant, d.l, d.m) for d in enumerate_directions(w)
                    if d.quadrant in DIAGONAL_QUADRANTS}
        rotated = {(cycle[q], l, m) for q, l, m in non_axis}
        assert rotated == non_axis


def first_hit_offsets(w):
    """Brute-force oracle: first lattice pixel hit along every radial ray."""
    n = (w - 1) // 2
    hits = set()
    for dy in range(-n, n + 1):
        for dx in range(-n, n + 1):
            if dy == 0 and dx == 0:
                continue
            g = math.gcd(abs(dy), abs(dx))
            hits.add((dy // g, dx // g))
    return hits


@pytest.mark.parametrize("w", [3, 5, 7, 9, 11, 13, 15])
def test_directions_equal_first_hit_enumeration(w):
    offsets = {neighbor_offset(d) for d in enumerate_directions(w)}
    assert offsets == first_hit_offsets(w)
    assert len(offsets) == len(enumerate_directions(w))


def test_validation():
    with pytest.raises(ValueError):
        neighborhood_mask(0)
    with pytest.raises(ValueError):
        Lattice(4)
    with pytest.raises(ValueError):
        Lattice(1)
    with pytest.raises(ValueError):
        Direction(Quadrant.I, 2, 4)  # not coprime
    with pytest.raises(ValueError):
        Direction(Quadrant.AXIS_RIGHT, 1, 1)
