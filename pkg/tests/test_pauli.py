import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cdadapt.pauli import (
    DenseLimitError,
    PauliSum,
    PauliTerm,
    QubitCountError,
    _commutator_numpy,
    _commutator_python,
    commutator,
    hs_inner,
    mul,
    mul_terms,
    phase_exponent,
    to_dense,
)


def label_strategy(n: int):
    return st.lists(st.sampled_from("IXYZ"), min_size=n, max_size=n).map("".join)


def sum_strategy(n: int, max_terms: int = 5):
    weight = st.complex_numbers(
        min_magnitude=0.0, max_magnitude=3.0, allow_nan=False, allow_infinity=False
    )
    return st.lists(
        st.tuples(label_strategy(n), weight), min_size=1, max_size=max_terms
    ).map(PauliSum.from_labels)


# -- single-term basics -----------------------------------------------------


def test_label_round_trip_and_qubit_order():
    t = PauliTerm.from_label("XIZY")
    assert t.n_qubits == 4
    # rightmost char is qubit 0
    assert t.x == 0b1001 and t.z == 0b0011
    assert t.label() == "XIZY"
    assert PauliTerm.single(4, "X", 3).label() == "XIII"
    assert PauliTerm.single(4, "Z", 0).label() == "IIIZ"


def test_term_weight():
    assert PauliTerm.from_label("IXYZ").weight == 3
    assert PauliTerm.identity(5).weight == 0
    assert PauliTerm.identity(5).is_identity


def test_bad_labels_rejected():
    with pytest.raises(ValueError):
        PauliTerm.from_label("XA")
    with pytest.raises(ValueError):
        PauliTerm(2, 0b100, 0)


def test_single_qubit_products():
    X, Y, Z = (PauliTerm.from_label(c) for c in "XYZ")
    assert mul_terms(X, Y) == (1j, Z)
    assert mul_terms(Y, X) == (-1j, Z)
    assert mul_terms(Z, X) == (1j, Y)
    assert mul_terms(X, Z) == (-1j, Y)
    assert mul_terms(Y, Z) == (1j, X)
    assert mul_terms(Z, Y) == (-1j, X)
    for P in (X, Y, Z):
        phase, res = mul_terms(P, P)
        assert phase == 1.0 and res.is_identity


def test_phase_exponent_is_mod4():
    # X*Z: x3=1,z3=1 -> Y; e = 0+0-1+0 = -1 = 3 mod 4 -> i^3 = -i
    assert phase_exponent(1, 0, 0, 1) == 3


def test_qubit_count_mismatch_raises():
    with pytest.raises(QubitCountError):
        mul_terms(PauliTerm.from_label("X"), PauliTerm.from_label("XX"))
    with pytest.raises(QubitCountError):
        commutator(PauliSum.from_labels([("X", 1.0)]), PauliSum.from_labels([("XX", 1.0)]))


@given(a=label_strategy(4), b=label_strategy(4))
@settings(max_examples=150, deadline=None)
def test_term_product_matches_dense(a, b):
    phase, c = mul_terms(PauliTerm.from_label(a), PauliTerm.from_label(b))
    lhs = oracles.dense_from_label(a) @ oracles.dense_from_label(b)
    rhs = phase * oracles.dense_from_label(c.label())
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)


@given(a=label_strategy(5), b=label_strategy(5), c=label_strategy(5))
@settings(max_examples=80, deadline=None)
def test_term_product_associative(a, b, c):
    ta, tb, tc = (PauliTerm.from_label(s) for s in (a, b, c))
    p1, ab = mul_terms(ta, tb)
    p2, ab_c = mul_terms(ab, tc)
    q1, bc = mul_terms(tb, tc)
    q2, a_bc = mul_terms(ta, bc)
    assert ab_c == a_bc
    assert p1 * p2 == pytest.approx(q1 * q2)


@given(a=label_strategy(6), b=label_strategy(6))
@settings(max_examples=100, deadline=None)
def test_commutes_with_matches_dense(a, b):
    ta, tb = PauliTerm.from_label(a), PauliTerm.from_label(b)
    ma, mb = oracles.dense_from_label(a), oracles.dense_from_label(b)
    comm_zero = np.allclose(ma @ mb - mb @ ma, 0.0)
    assert ta.commutes_with(tb) == comm_zero


# -- sums -------------------------------------------------------------------


def test_sum_merges_duplicate_terms():
    s = PauliSum.from_labels([("XX", 1.0), ("XX", 0.5), ("ZI", 2.0)])
    assert len(s) == 2
    assert s.weight_of("XX") == 1.5


def test_add_sub_scalar():
    a = PauliSum.from_labels([("X", 1.0)])
    b = PauliSum.from_labels([("X", 2.0), ("Z", -1.0)])
    c = a + b
    assert c.weight_of("X") == 3.0
    d = 2.0 * c - b
    assert d.weight_of("X") == 4.0 and d.weight_of("Z") == -1.0


def test_simplify_threshold_semantics():
    s = PauliSum.from_labels([("X", 1e-8), ("Z", 1.0), ("Y", 0.0)])
    assert len(s.simplify()) == 2  # exact zero dropped
    assert len(s.simplify(1e-8)) == 1  # <= threshold dropped
    assert len(s.simplify(1e-9)) == 2


def test_hermiticity_flags():
    h = PauliSum.from_labels([("XX", 0.3), ("ZI", -1.2)])
    a = 1j * h
    assert h.is_hermitian() and not h.is_anti_hermitian()
    assert a.is_anti_hermitian() and not a.is_hermitian()


@given(s=sum_strategy(3), t=sum_strategy(3))
@settings(max_examples=60, deadline=None)
def test_mul_matches_dense(s, t):
    lhs = oracles.dense_from_sum(mul(s, t))
    rhs = oracles.dense_from_sum(s) @ oracles.dense_from_sum(t)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@given(s=sum_strategy(3), t=sum_strategy(3))
@settings(max_examples=60, deadline=None)
def test_commutator_matches_dense(s, t):
    lhs = oracles.dense_from_sum(commutator(s, t))
    ms, mt = oracles.dense_from_sum(s), oracles.dense_from_sum(t)
    np.testing.assert_allclose(lhs, ms @ mt - mt @ ms, atol=1e-12)


@given(s=sum_strategy(4), t=sum_strategy(4))
@settings(max_examples=60, deadline=None)
def test_commutator_antisymmetric(s, t):
    lhs = commutator(s, t)
    rhs = (-1.0) * commutator(t, s)
    diff = (lhs - rhs).simplify(1e-12)
    assert len(diff) == 0


def test_commutator_hermitian_inputs_give_antihermitian():
    rng = np.random.default_rng(7)
    a = PauliSum.from_labels([(l, complex(w)) for l, w in
                              [("XIY", 0.5), ("ZZI", -1.0), ("IYY", 0.25)]])
    b = PauliSum.from_labels([(l, complex(w)) for l, w in
                              [("YIX", 1.5), ("IZZ", 0.75)]])
    c = commutator(a, b)
    assert c.is_anti_hermitian(1e-13)
    del rng


def test_numpy_and_python_commutator_paths_agree():
    rng = np.random.default_rng(11)
    a = PauliSum.from_labels(oracles.random_pairs(rng, 5, 20))
    b = PauliSum.from_labels(oracles.random_pairs(rng, 5, 17))
    fast = _commutator_numpy(a, b, 0.0)
    slow = _commutator_python(a, b, 0.0)
    diff = (fast - slow).simplify(1e-13)
    assert len(diff) == 0


def test_commutator_threshold_drops_small_terms():
    a = PauliSum.from_labels([("X", 1.0), ("Y", 1e-13)])
    b = PauliSum.from_labels([("Z", 1.0)])
    c = commutator(a, b, threshold=1e-10)
    # [Y, Z] contribution has weight ~2e-13 and must be gone
    assert all(abs(w) > 1e-10 for _, w in c.items())


# -- inner product ----------------------------------------------------------


def test_hs_inner_orthonormal():
    p = PauliSum.from_labels([("XY", 1.0)])
    q = PauliSum.from_labels([("XZ", 1.0)])
    assert hs_inner(p, p) == 1.0
    assert hs_inner(p, q) == 0.0


@given(s=sum_strategy(3), t=sum_strategy(3))
@settings(max_examples=60, deadline=None)
def test_hs_inner_matches_dense_trace(s, t):
    lhs = hs_inner(s, t)
    ms, mt = oracles.dense_from_sum(s), oracles.dense_from_sum(t)
    rhs = np.trace(ms.conj().T @ mt) / 2**s.n_qubits
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_hs_inner_conjugates_first_argument():
    p = PauliSum.from_labels([("Z", 2.0 + 1.0j)])
    q = PauliSum.from_labels([("Z", 1.0 - 1.0j)])
    assert hs_inner(p, q) == (2.0 - 1.0j) * (1.0 - 1.0j)


# -- dense ------------------------------------------------------------------


@given(lbl=label_strategy(4))
@settings(max_examples=100, deadline=None)
def test_to_dense_matches_kron(lbl):
    s = PauliSum.from_labels([(lbl, 1.0)])
    np.testing.assert_allclose(s.to_dense(), oracles.dense_from_label(lbl), atol=0)


def test_dense_limit_enforced(monkeypatch):
    monkeypatch.delenv("CDADAPT_DENSE_LIMIT", raising=False)
    big = PauliSum.from_labels([("I" * 15 + "X", 1.0)])
    with pytest.raises(DenseLimitError):
        big.to_dense()
    # explicit override and env override both work
    small = PauliSum.from_labels([("IX", 1.0)])
    with pytest.raises(DenseLimitError):
        small.to_dense(limit=1)
    monkeypatch.setenv("CDADAPT_DENSE_LIMIT", "1")
    with pytest.raises(DenseLimitError):
        small.to_dense()
    monkeypatch.setenv("CDADAPT_DENSE_LIMIT", "2")
    assert small.to_dense().shape == (4, 4)


# -- serialization ----------------------------------------------------------


@given(s=sum_strategy(4, max_terms=6))
@settings(max_examples=60, deadline=None)
def test_text_round_trip_exact(s):
    back = PauliSum.from_text(s.to_text(), n_qubits=4)
    assert sorted(back.sorted_labels()) == sorted(s.sorted_labels())


@given(s=sum_strategy(3, max_terms=6))
@settings(max_examples=60, deadline=None)
def test_json_round_trip_exact(s):
    back = PauliSum.from_json_terms(3, s.to_json_terms())
    assert dict(back.raw_items()) == dict(s.raw_items())


def test_text_form_is_sorted_and_parseable():
    s = PauliSum.from_labels([("ZZ", 1.0), ("XX", -0.25 + 0.5j)])
    lines = s.to_text().splitlines()
    assert lines == sorted(lines)
    assert lines[0].endswith(" XX")
    coeff = complex(lines[0].rsplit(None, 1)[0])
    assert coeff == -0.25 + 0.5j


def test_file_round_trip(tmp_path):
    from cdadapt.pauli import dump_json, dump_text, load_json, load_text

    s = PauliSum.from_labels([("XYZI", 0.125), ("IIZZ", -3.0 + 1e-17j)])
    p1 = tmp_path / "op.txt"
    p2 = tmp_path / "op.json"
    dump_text(s, str(p1))
    dump_json(s, str(p2))
    assert dict(load_text(str(p1)).raw_items()) == dict(s.raw_items())
    assert dict(load_json(str(p2)).raw_items()) == dict(s.raw_items())


# -- zero / empty edge cases ------------------------------------------------


def test_zero_sum_behaviour():
    z = PauliSum.zero(3)
    x = PauliSum.from_labels([("XII", 1.0)])
    assert len(commutator(z, x)) == 0
    assert len(mul(z, x)) == 0
    assert hs_inner(z, x) == 0.0
    assert z.max_weight() == 0
    np.testing.assert_allclose(z.to_dense(), np.zeros((8, 8)))


def test_commuting_sums_give_empty_commutator():
    a = PauliSum.from_labels([("ZZ", 1.0), ("IZ", 0.5)])
    b = PauliSum.from_labels([("ZI", -2.0), ("ZZ", 3.0)])
    assert len(commutator(a, b)) == 0
