from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ucdnf import hex as hx
from ucdnf import measures
from ucdnf.boolfun import NOTONE, NOTZERO, Out, Restriction, is_certificate
from ucdnf.errors import GateFailed, GeometryInvalid


def test_evaluate_examples():
    assert hx.hex_evaluate(3, np.ones((3, 3))) == Out.ONE
    assert hx.hex_evaluate(3, np.zeros((3, 3))) == Out.ZERO
    y, _ = hx.single_spiral(6)
    assert hx.hex_evaluate(6, y) == Out.STAR


def test_path_length_counts_entries():
    # an L-shaped 1-path of 2n+1 entries is too long, 2n is fine
    M = np.zeros((3, 3), dtype=int)
    M[0, 0] = M[1, 0] = M[1, 1] = M[1, 2] = M[2, 2] = 1
    assert hx.shortest_path(M, 1, True) == 5
    assert hx.hex_evaluate(3, M) == Out.ONE


def test_hex3_table():
    f = hx.hex_function(3)
    assert f.table.size == 512
    assert int((f.table == Out.STAR).sum()) == 118
    assert all(hx.hex_evaluate(3, hx.HexInput.from_int(3, x)) == f.value(x) for x in range(512))


def test_hex4_vectorized_matches_bfs_sample():
    f = hx.hex_function(4)
    for x in np.random.default_rng(0).integers(0, 1 << 16, 2000).tolist():
        assert hx.hex_evaluate(4, hx.HexInput.from_int(4, x)) == f.value(x)


def test_implicit_matches_table():
    f = hx.hex_function(3)
    g = hx.hex_function(3, materialize=False)
    assert not g.is_explicit
    assert all(g.evaluate(x) == f.value(x) for x in range(512))


def test_one_and_zero_exclusive_n3():
    # a crossing 1-path of any length blocks every 0-crossing, so check raw paths
    for x in range(512):
        M = hx.HexInput.from_int(3, x).matrix
        assert not (hx.shortest_path(M, 1, True) and hx.shortest_path(M, 0, False))


@settings(max_examples=200)
@given(st.integers(0, (1 << 16) - 1), st.integers(0, 15))
def test_flip_up_never_one_to_zero(x, j):
    f = hx.hex_function(4)
    if f.value(x) == Out.ONE:
        assert f.value(x | 1 << j) == Out.ONE


@pytest.mark.parametrize("n", range(6, 33))
def test_single_spiral_gates(n):
    y, lay = hx.single_spiral(n)
    assert hx.hex_evaluate(n, y) == Out.STAR
    assert len(lay.spirals[0]) >= n * n / 4
    for c in lay.noncorners[0]:
        assert hx.hex_evaluate(n, y.flipped([c])) == Out.ZERO


def test_single_spiral_minimum():
    with pytest.raises(GeometryInvalid):
        hx.single_spiral(5)


def test_single_spiral_sensitivity_bound():
    y, lay = hx.single_spiral(8)
    assert hx.sensitivity_lower_bound(y, lay) == len(lay.noncorners[0])


def test_multi_spiral_n4_layout():
    z, lay, blocks, gates = hx.multi_spiral(4)
    assert z.dumps() == "1001\n1001\n1001\n0110\n"
    assert lay.spiral_count == 2 and all(len(b) == 2 for b in blocks.blocks)
    assert gates["star"] and gates["block_flips_zero"] and gates["size_ok"]
    assert hx.hex_evaluate(4, z.flipped(blocks.blocks[0])) == Out.ZERO


@pytest.mark.parametrize("n,ell", [(4, 3), (9, 8), (16, 22), (25, 46), (36, 86), (49, 140)])
def test_multi_spiral_block_counts(n, ell):
    z, lay, blocks, gates = hx.multi_spiral(n)
    assert blocks.count == ell
    assert hx.block_lower_bound(z, blocks) == ell
    assert ell >= hx.C_MIN * n**1.5


@pytest.mark.parametrize("m", range(2, 6))
def test_every_width_gives_star_and_zero_flips(m):
    # only the size gate may reject a width, never the STAR or flip gates
    for w in range(1, m + 1):
        z, lay = hx._layout(m * m, m, w, m)
        g = hx.spiral_gates(z, lay, hx.blocks_of(lay))
        assert g["star"] and g["block_flips_zero"] and g["disjoint"]


def test_multi_spiral_rejects_non_square():
    with pytest.raises(GeometryInvalid):
        hx.multi_spiral(8)


def test_spirals_disjoint_and_connected():
    z, lay, blocks, _ = hx.multi_spiral(16)
    seen = set()
    for p in lay.spirals:
        assert not seen & set(p)
        seen |= set(p)
        for a, b in zip(p, p[1:]):
            assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
        assert all(z.matrix[c] == 1 for c in p)


def test_block_lower_bound_rejects_bad_blocks():
    z, lay, blocks, _ = hx.multi_spiral(4)
    bad = hx.BlockFamily([blocks.blocks[0], blocks.blocks[0]])
    with pytest.raises(GateFailed):
        hx.block_lower_bound(z, bad)


def test_n4_exact_cross_checks():
    z, lay, blocks, _ = hx.multi_spiral(4)
    f = hx.hex_function(4)
    x = z.to_int()
    ell = hx.block_lower_bound(z, blocks)
    c_nz = measures.cert_complexity_at(f, x, NOTZERO).value
    c_no = measures.cert_complexity_at(f, x, NOTONE).value
    assert (ell, c_nz, c_no) == (3, 4, 4)
    assert ell <= c_nz and max(c_nz, c_no) <= 8


def test_adversary_empty_restriction():
    z, lay, _, _ = hx.multi_spiral(4)
    p = hx.greedy_one_path_adversary(z, lay, Restriction.empty(16))
    assert p == [(0, 0), (1, 0), (2, 0), (3, 0)]


def test_adversary_small_restrictions_n4():
    z, lay, _, _ = hx.multi_spiral(4)
    x = z.to_int()
    for k in range(3):
        for S in combinations(range(16), k):
            rho = Restriction.of_input(16, x, S)
            p = hx.greedy_one_path_adversary(z, lay, rho)
            assert p is not None and len(p) <= 8
            w = hx.completion_with_path(z, rho, p)
            assert rho.is_consistent(w.to_int()) and hx.hex_evaluate(4, w) == Out.ONE


def test_adversary_blocked_row():
    z, lay, _, _ = hx.multi_spiral(4)
    zz = z.flipped([(2, c) for c in range(4) if z.matrix[2, c]])
    rho = Restriction.of_input(16, zz.to_int(), sum(1 << (8 + c) for c in range(4)))
    assert hx.greedy_one_path_adversary(zz, lay, rho) is None


@pytest.mark.parametrize("n", [6, 7])
def test_top_rows_certificate(n):
    y, _ = hx.single_spiral(n)
    f = hx.hex_function(n)
    rho = hx.top_rows_certificate(y)
    assert rho.size == 5 * n
    assert is_certificate(f, rho, NOTONE)
    assert not is_certificate(f, hx.top_rows_certificate(y, 4), NOTONE, budget=1 << 22)


def test_top_rows_all_rows():
    y, _ = hx.single_spiral(6)
    assert is_certificate(hx.hex_function(6), hx.top_rows_certificate(y, 6), NOTONE)


def test_scaling_fit():
    s = hx.spiral_scaling()
    assert s["ell"] == [3, 8, 22, 46]
    assert 1.4 <= s["beta"] <= 1.6


def test_matrix_io(tmp_path):
    z, *_ = hx.multi_spiral(9)
    z.write(tmp_path / "z.mat")
    assert hx.HexInput.read(tmp_path / "z.mat") == z
