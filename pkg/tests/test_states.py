import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracle import partial_trace_loops, partial_transpose_loops, random_state
from sudsqueeze.exceptions import (
    DimensionMismatch,
    EmptyKeepSet,
    IndexOutOfRange,
    InvalidSubset,
    InvariantViolation,
    ParseError,
    SiteOutOfRange,
    TooFewSites,
)
from sudsqueeze.states import (
    NQuditState,
    adjacent_swap,
    avg_two_body,
    bipartitions,
    collective,
    collective_operator,
    embed_at_site,
    is_bosonic,
    is_permutation_invariant,
    pair_marginal,
    partial_trace,
    partial_transpose,
    product_state,
    state_from_json,
    state_to_json,
    symmetric_projector,
)


def test_state_invariants():
    with pytest.raises(DimensionMismatch):
        NQuditState(3, 2, np.eye(8) / 8)
    with pytest.raises(InvariantViolation) as info:
        NQuditState(2, 1, np.eye(2))
    assert info.value.quantity == "trace"
    with pytest.raises(InvariantViolation) as info:
        NQuditState(2, 1, np.array([[0.5, 1.0], [0.0, 0.5]]))
    assert info.value.quantity == "hermiticity"


def test_positivity_only_when_physical():
    pseudo = np.diag([1.5, -0.5])
    NQuditState(2, 1, pseudo)
    with pytest.raises(InvariantViolation) as info:
        NQuditState(2, 1, pseudo, physical=True)
    assert info.value.quantity == "positivity"


def test_json_roundtrip(rng):
    s = NQuditState(3, 2, random_state(9, rng))
    back = state_from_json(state_to_json(s))
    assert np.allclose(back.rho, s.rho)
    for bad in ("[]", '{"d": 3, "n": 2, "rho": [[1]]}', "{"):
        with pytest.raises(ParseError):
            state_from_json(bad)


def test_embed_and_collective(gm3):
    g = gm3[0]
    assert np.allclose(embed_at_site(g, 1, 2), np.kron(np.eye(3), g))
    with pytest.raises(SiteOutOfRange):
        embed_at_site(g, 2, 2)
    for k in (0, 7):  # off-diagonal and diagonal fast path
        ref = sum(embed_at_site(gm3[k], s, 3) for s in range(3))
        assert np.allclose(collective(gm3[k], 3), ref)
    with pytest.raises(IndexOutOfRange):
        collective_operator(gm3, 8, 2)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(2, 3), (3, 2), (3, 3), (2, 4)]))
def test_partial_trace_matches_loop_oracle(seed, dn):
    d, n = dn
    rng = np.random.default_rng(seed)
    s = NQuditState(d, n, random_state(d**n, rng))
    keep = sorted(rng.choice(n, size=rng.integers(1, n), replace=False).tolist())
    assert np.allclose(partial_trace(s, keep).rho, partial_trace_loops(s.rho, d, n, keep), atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(2, 3), (3, 2), (3, 3)]))
def test_partial_transpose_matches_loop_oracle(seed, dn):
    d, n = dn
    rng = np.random.default_rng(seed)
    s = NQuditState(d, n, random_state(d**n, rng))
    sub = [int(rng.integers(n))]
    assert np.allclose(partial_transpose(s, sub), partial_transpose_loops(s.rho, d, n, sub))


def test_reduction_errors(rng):
    s = NQuditState(2, 3, random_state(8, rng))
    with pytest.raises(EmptyKeepSet):
        partial_trace(s, [])
    with pytest.raises(SiteOutOfRange):
        partial_trace(s, [3])
    with pytest.raises(InvalidSubset):
        partial_transpose(s, [0, 1, 2])
    with pytest.raises(InvalidSubset):
        partial_transpose(s, [])
    with pytest.raises(TooFewSites):
        avg_two_body(NQuditState(2, 1, np.eye(2) / 2))


def test_bipartitions_count():
    for n in range(2, 7):
        cuts = list(bipartitions(n))
        assert len(cuts) == 2 ** (n - 1) - 1
        assert all(c[0] == 0 and len(c) < n for c in cuts)


def test_avg_two_body_against_direct_average(rng):
    d, n = 3, 3
    s = NQuditState(d, n, random_state(d**n, rng))
    direct = np.zeros((9, 9), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i != j:
                direct += pair_marginal(s, i, j)
    direct /= n * (n - 1)
    assert np.allclose(avg_two_body(s).rho, direct)
    with pytest.raises(InvalidSubset):
        pair_marginal(s, 1, 1)


def test_pair_marginal_order():
    a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    s = product_state([a, b, a])
    assert np.allclose(pair_marginal(s, 1, 0), np.kron(b, a))


def test_symmetry_predicates(rng):
    d, n = 3, 3
    p = symmetric_projector(d, n)
    assert np.allclose(p @ p, p)
    assert np.trace(p).real == pytest.approx(10)  # C(5, 3) symmetric states
    rho = p @ random_state(27, rng) @ p
    s = NQuditState(d, n, rho / np.trace(rho))
    assert is_bosonic(s) and is_permutation_invariant(s)
    mixed = NQuditState(d, n, np.eye(27) / 27)
    assert is_permutation_invariant(mixed) and not is_bosonic(mixed)
    generic = NQuditState(d, n, random_state(27, rng))
    assert not is_permutation_invariant(generic)


def test_adjacent_swap_is_permutation():
    v = adjacent_swap(2, 3, 1)
    assert np.allclose(v @ v, np.eye(8))
    assert np.allclose(v @ np.kron(np.kron([1, 0], [1, 0]), [0, 1]), np.kron(np.kron([1, 0], [0, 1]), [1, 0]))
