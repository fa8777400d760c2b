import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from aqc.codes import (CyclicCode, FieldCode, LinearCode, bch_narrow_sense, code_from_defining_set,
                       cyclic_eg_dual_root_set, cyclic_eg_root_set, eg_ldpc_type1, grm_cyclic, grm_dual_order,
                       min_distance_exact, min_weight_outside, subfield_subcode, trace_code,
                       verify_cyclic_eg_identity)
from aqc.errors import BudgetExceeded, NestingError, ValidationError
from aqc.fields import get_tower

from oracles import binary_codewords, cyclotomic_cosets, digit_sum

# oracle: direct digit-sum evaluation over all exponents, frozen
Z_15 = [1, 2, 3, 4, 6, 8, 9, 12]
Z_PERP_15 = [0, 1, 2, 4, 5, 8, 10]


def test_bch_defining_sets():
    assert bch_narrow_sense(2, 4, 3).defining_set == (1, 2, 4, 8)
    assert bch_narrow_sense(2, 4, 2).defining_set == (1, 2, 4, 8)
    assert bch_narrow_sense(2, 4, 3).dimension == 11
    assert bch_narrow_sense(2, 8, 5).dimension == 239
    with pytest.raises(ValidationError):
        bch_narrow_sense(2, 4, 1)
    with pytest.raises(ValidationError):
        bch_narrow_sense(2, 4, 16)


def test_bch_defining_set_is_union_of_oracle_cosets():
    cosets = cyclotomic_cosets(2, 15)
    assert cosets == [[0], [1, 2, 4, 8], [3, 6, 9, 12], [5, 10], [7, 11, 13, 14]]
    D = set(bch_narrow_sense(2, 4, 7).defining_set)
    assert D == {1, 2, 3, 4, 5, 6, 8, 9, 10, 12}
    assert all(set(c) <= D or not set(c) & D for c in cosets)


def test_root_set_of_the_15_point_example():
    assert cyclic_eg_root_set(2, 1, 2, 2) == Z_15
    # same set from the oracle's digit sum: 0 < max_l W_4(2^l h mod 15) <= 3
    assert [h for h in range(1, 15) if 0 < max(digit_sum(h * 2 ** l % 15, 4) for l in range(2)) <= 3] == Z_15
    r = cyclic_eg_dual_root_set(2, 1, 2, 2)
    assert r.z_perp == Z_PERP_15 and r.delta0 == 3
    assert 15 - len(Z_15) == 7


def test_root_set_length_3_and_bruteforce_null_space():
    assert cyclic_eg_root_set(2, 1, 1, 2) == [1, 2]
    cyc = code_from_defining_set(CyclicCode(2, 3, [1, 2]))
    assert cyc.k == 1
    # EG(2,2) without origin: the three points, the two lines avoiding the origin
    inc = eg_ldpc_type1(2, 1, 1, 2, cyclic=True)
    words = binary_codewords(inc.parity_check.tolist())
    assert words == [(0, 0, 0), (1, 1, 1)]
    assert all(cyc.contains(w) for w in words)


@pytest.mark.parametrize("m,mu,s,p,delta0", [(2, 1, 4, 2, 15), (3, 2, 1, 2, 3), (2, 1, 2, 2, 3),
                                             (3, 1, 1, 3, 2), (2, 1, 1, 5, 4)])
def test_delta0_closed_form(m, mu, s, p, delta0):
    r = cyclic_eg_dual_root_set(m, mu, s, p)
    assert r.delta0 == delta0 == p ** (mu * s) - 1
    assert set(range(1, delta0)) <= set(r.z_perp)
    assert r.z_perp == sorted(set(r.z_p) | {0})


DUAL_CASES = [(m, mu, s, p) for p in (2, 3, 5, 7) for s in (1, 2, 3) for m in (2, 3, 4, 5, 6)
              for mu in range(1, m) if p ** (m * s) <= 1 << 12]


@pytest.mark.parametrize("m,mu,s,p", DUAL_CASES)
def test_dual_root_set_is_negated_complement(m, mu, s, p):
    n = p ** (m * s) - 1
    Z = set(cyclic_eg_root_set(m, mu, s, p))
    r = cyclic_eg_dual_root_set(m, mu, s, p)
    assert set(r.z_perp) == {(-h) % n for h in range(n) if h not in Z}
    assert r.run >= r.delta0 - 1


@pytest.mark.slow
@pytest.mark.parametrize("m,mu,s,p", [(m, mu, s, p) for p in (2, 3, 5, 7, 11, 13) for s in range(1, 9)
                                      for m in range(2, 17) for mu in range(1, m)
                                      if 1 << 12 < p ** (m * s) <= 1 << 16])
def test_consecutive_run_up_to_2_16(m, mu, s, p):
    r = cyclic_eg_dual_root_set(m, mu, s, p)
    assert r.run >= p ** (mu * s) - 2


def test_code_from_defining_set_generator_and_extremes():
    c = CyclicCode(2, 15, [1, 2, 4, 8])
    assert c.generator_poly == (1, 1, 0, 0, 1)          # x^4 + x + 1
    L = code_from_defining_set(c)
    assert (L.n, L.k) == (15, 11)
    assert not ((L.generator @ L.parity_check.T) % 2).any()
    full = CyclicCode(2, 15, [])
    assert full.generator_poly == (1,) and code_from_defining_set(full).k == 15
    zero = code_from_defining_set(CyclicCode(2, 15, range(15)))
    assert zero.k == 0
    with pytest.raises(ValidationError):
        CyclicCode(2, 15, [1, 2])
    with pytest.raises(ValidationError):
        CyclicCode(3, 15, [1])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 15), (2, 31), (3, 8), (3, 26), (5, 24)]), st.data())
def test_dual_defining_set_matches_matrix_dual(pn, data):
    p, n = pn
    cosets = cyclotomic_cosets(p, n)
    chosen = data.draw(st.lists(st.booleans(), min_size=len(cosets), max_size=len(cosets)))
    D = sorted(h for c, keep in zip(cosets, chosen) if keep for h in c)
    C = code_from_defining_set(CyclicCode(p, n, D))
    Dd = sorted({(-h) % n for h in range(n) if h not in D})
    Cd = code_from_defining_set(CyclicCode(p, n, Dd))
    assert Cd.same_code(C.dual())
    g = CyclicCode(p, n, D).generator_poly
    assert len(g) - 1 == len(D)


def test_eg_15_7_5_by_oracle_enumeration():
    code = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    assert (code.n, code.k) == (15, 7)
    words = binary_codewords(code.parity_check.tolist())
    assert len(words) == 128
    assert min(sum(w) for w in words if any(w)) == 5
    assert min_distance_exact(code) == 5
    assert code.same_code(code_from_defining_set(CyclicCode(2, 15, Z_15)))
    assert code.distance.lower_bound == 5


def test_eg_255_175():
    code = eg_ldpc_type1(2, 1, 4, 2, cyclic=True)
    assert (code.n, code.k) == (255, 175)
    assert code.distance.lower_bound == 17 and code.distance.exact is None


def test_eg_2_2_repetition_code():
    code = eg_ldpc_type1(2, 1, 1, 2, cyclic=False)
    assert (code.n, code.k) == (4, 1)
    assert min_distance_exact(code) == 4
    with pytest.raises(ValidationError):
        eg_ldpc_type1(2, 2, 1, 2)


def test_grm_dual_order():
    assert grm_dual_order(0, 3, 4) == 8
    assert grm_dual_order(2, 2, 4) == 3
    for nu in range(8):
        assert grm_dual_order(grm_dual_order(nu, 2, 5), 2, 5) == nu
    with pytest.raises(ValidationError):
        grm_dual_order(6, 2, 4)


GF16 = get_tower(2, 2, 2)


def test_subfield_subcode_extremes():
    full = FieldCode(np.eye(5, dtype=np.int64), get_tower(2, 1, 2), 4)
    assert subfield_subcode(full, 2).dimension == 5
    zero = FieldCode(np.zeros((0, 5), dtype=np.int64), get_tower(2, 1, 2), 4)
    assert subfield_subcode(zero, 2).dimension == 0
    assert trace_code(zero, 2).dimension == 0


def test_subfield_subcode_of_grm_4_3_2():
    grm = grm_cyclic(4, 2, 3, GF16).to_field_code()
    sub = subfield_subcode(grm, 2)
    eg = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    eg_dual = FieldCode(eg.parity_check, GF16, 2)
    # the cyclic (punctured) form also keeps the all-ones word: dim 9 = 8 + 1
    assert (grm.dimension, sub.dimension, eg_dual.dimension) == (10, 9, 8)
    assert sub.contains_code(eg_dual)
    even = LinearCode(np.vstack([sub.to_linear_code().parity_check, np.ones(15, dtype=np.int64)]), 2)
    assert even.same_code(LinearCode.from_generator(eg.parity_check, 2))
    for row in sub.generator:
        assert all(GF16.in_subfield(int(x), 2) for x in row)


def test_trace_of_grm_gives_eg_code():
    tr = trace_code(grm_cyclic(4, 2, 2, GF16).to_field_code(), 2)
    eg = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    assert tr.dimension == 7
    assert tr.to_linear_code().same_code(eg)


@pytest.mark.parametrize("nu", range(6))
def test_delsarte_on_grm_4_2(nu):
    C = grm_cyclic(4, 2, nu, GF16).to_field_code()
    assert trace_code(C.dual(), 2).same_code(subfield_subcode(C, 2).dual())


def _random_field_code(data, tower, Q, n):
    k = data.draw(st.integers(0, n))
    sub = [int(x) for x in tower.subfield(Q)]
    G = [[data.draw(st.sampled_from(sub)) for _ in range(n)] for _ in range(k)]
    return FieldCode(np.array(G, dtype=np.int64).reshape(k, n), tower, Q)


@pytest.mark.parametrize("p,Q,q", [(2, 4, 2), (3, 9, 3)])
@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(data=st.data())
def test_subfield_subcode_inside_trace_code(p, Q, q, data):
    tower = get_tower(p, 1, 2)
    n = data.draw(st.integers(1, 6))
    C = _random_field_code(data, tower, Q, n)
    assert trace_code(C, q).contains_code(subfield_subcode(C, q))
    assert trace_code(C.dual(), q).same_code(subfield_subcode(C, q).dual())


def test_min_weight_outside_examples():
    bch = code_from_defining_set(bch_narrow_sense(2, 4, 3))
    eg = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    assert min_distance_exact(bch) == 3
    res = min_weight_outside(bch, eg.dual())
    assert res.weight == 3 and res.pure
    assert min_weight_outside(eg, None).weight == min_distance_exact(eg) == 5
    same = min_weight_outside(eg, eg)
    assert same.weight == math.inf
    with pytest.raises(NestingError):
        min_weight_outside(eg.dual(), bch)


def test_weight_search_agrees_with_enumeration():
    bch = code_from_defining_set(bch_narrow_sense(2, 4, 3))
    eg = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    # 2^11 messages exceed the budget, the weight-3 search (575 vectors) does not
    assert min_weight_outside(bch, None, budget=1000).code_distance == 3
    assert min_weight_outside(bch, eg.dual(), budget=1000) == min_weight_outside(bch, eg.dual())
    hamming = code_from_defining_set(bch_narrow_sense(2, 5, 3))     # [31,26]: 2^26 > default budget
    assert min_distance_exact(hamming) == 3
    with pytest.raises(BudgetExceeded):
        min_distance_exact(code_from_defining_set(bch_narrow_sense(2, 8, 3)), budget=1 << 8)


def _brute_min_weight(G, p):
    k, n = G.shape
    best = math.inf
    for msg in itertools.product(range(p), repeat=k):
        if any(msg):
            best = min(best, int(np.count_nonzero((np.array(msg) @ G) % p)))
    return best


@pytest.mark.parametrize("p,m_s,delta", [(2, 4, 5), (2, 4, 7), (2, 5, 5), (2, 5, 7), (2, 5, 11),
                                         (2, 6, 21), (3, 2, 3), (3, 2, 5), (3, 3, 9), (5, 2, 13),
                                         (7, 2, 35)])
def test_bch_bound_on_enumerable_codes(p, m_s, delta):
    code = code_from_defining_set(bch_narrow_sense(p, m_s, delta))
    d = min_distance_exact(code)
    assert d >= delta
    if p ** code.k <= 1 << 12:
        assert d == _brute_min_weight(code.generator, p)


@pytest.mark.parametrize("m,mu,s,p", [(2, 1, 2, 2), (3, 1, 1, 2), (3, 2, 1, 2), (2, 1, 1, 3), (3, 1, 1, 3),
                                      (4, 2, 1, 2), (2, 1, 2, 3), (3, 2, 1, 5)])
def test_cyclic_identity_small(m, mu, s, p):
    rep = verify_cyclic_eg_identity(m, mu, s, p)
    assert rep.equal and rep.row_rank == rep.root_count
    streamed = verify_cyclic_eg_identity(m, mu, s, p, direct_limit=0)
    assert streamed.method == "streaming" and streamed.equal


@pytest.mark.parametrize("m,mu", [(4, 1), (5, 2), (6, 3)])
def test_cyclic_identity_by_monomials_matches_direct(m, mu):
    direct = verify_cyclic_eg_identity(m, mu, 1, 2)
    mono = verify_cyclic_eg_identity(m, mu, 1, 2, budget=1)
    assert mono.method == "monomial"
    assert direct.equal and mono.equal and mono.row_rank == direct.row_rank


def test_cyclic_identity_independent_of_primitive_polynomial():
    rep = verify_cyclic_eg_identity(4, 1, 1, 2, primitive_poly=(1, 0, 0, 1, 1))     # x^4 + x^3 + 1
    assert rep.equal
    a = eg_ldpc_type1(2, 1, 2, 2, cyclic=True)
    b = eg_ldpc_type1(2, 1, 2, 2, cyclic=True, primitive_poly=(1, 0, 0, 1, 1))
    assert a.k == b.k == 7
