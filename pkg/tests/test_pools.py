import numpy as np
import pytest

import oracles
from cdadapt import pools
from cdadapt.molham import Schedule, build_initial_hamiltonian
from cdadapt.pauli import PauliSum, PauliTerm, hs_inner
from cdadapt.pools import (
    AlphaSolution,
    EmptyPoolError,
    GroupedGenerator,
    build_fermionic_pool,
    build_nested_basis,
    dump_pool,
    extract_pool_static,
    extract_pool_time,
    gauge_potential,
    load_pool,
    solve_alpha,
)

Z1 = PauliSum.from_labels([("Z", 1.0)])
X1 = PauliSum.from_labels([("X", 1.0)])


def random_hamiltonians(rng, n, terms_i=3, terms_f=6):
    hi = PauliSum.from_labels(
        [(l, complex(w.real)) for l, w in oracles.random_pairs(rng, n, terms_i)]
    )
    hf = PauliSum.from_labels(
        [(l, complex(w.real)) for l, w in oracles.random_pairs(rng, n, terms_f)]
    )
    return hi, hf


# -- recursion --------------------------------------------------------------


def test_two_level_buckets_closed_form():
    basis = build_nested_basis(Z1, X1, order=2)
    o1 = basis.buckets(1)
    assert set(o1) == {(0, 0)}
    assert o1[(0, 0)].weight_of("Y") == pytest.approx(2j)
    o2 = basis.buckets(2)
    assert o2[(1, 0)].weight_of("X") == pytest.approx(4.0)
    assert o2[(0, 1)].weight_of("Z") == pytest.approx(-4.0)
    o3 = basis.buckets(3)
    assert set(o3) == {(2, 0), (0, 2)}  # the (1,1) contributions vanish
    assert o3[(2, 0)].weight_of("Y") == pytest.approx(8j)
    assert o3[(0, 2)].weight_of("Y") == pytest.approx(8j)


def test_two_level_evaluate():
    basis = build_nested_basis(Z1, X1, order=2)
    lam = 0.3
    o3 = basis.evaluate(3, lam)
    expected = 8.0 * ((1 - lam) ** 2 + lam**2)
    assert o3.weight_of("Y") == pytest.approx(expected * 1j)


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.5, 0.85, 1.0])
def test_bucket_recursion_matches_dense(lam):
    rng = np.random.default_rng(2)
    hi, hf = random_hamiltonians(rng, 3)
    basis = build_nested_basis(hi, hf, order=2)
    hi_d, hf_d = oracles.dense_from_sum(hi), oracles.dense_from_sum(hf)

    def comm(a, b):
        return a @ b - b @ a

    ok_d = comm(hi_d, hf_d)
    for k in range(1, 5):
        np.testing.assert_allclose(
            basis.evaluate(k, lam).to_dense(), ok_d, atol=1e-9
        )
        ok_d = (1 - lam) * comm(hi_d, ok_d) + lam * comm(hf_d, ok_d)


def test_odd_anti_hermitian_even_hermitian():
    rng = np.random.default_rng(3)
    hi, hf = random_hamiltonians(rng, 3)
    basis = build_nested_basis(hi, hf, order=2)
    for k in range(1, 5):
        for op in basis.buckets(k).values():
            if k % 2:
                assert op.is_anti_hermitian(1e-9)
            else:
                assert op.is_hermitian(1e-9)


def test_bucket_degrees():
    rng = np.random.default_rng(4)
    hi, hf = random_hamiltonians(rng, 2)
    basis = build_nested_basis(hi, hf, order=2)
    for k in range(1, 5):
        for p, q in basis.buckets(k):
            assert p + q == k - 1
            assert p >= 0 and q >= 0


def test_build_validation():
    with pytest.raises(ValueError):
        build_nested_basis(Z1, X1, order=0)
    with pytest.raises(ValueError):
        build_nested_basis(Z1, PauliSum.from_labels([("XX", 1.0)]), order=1)
    basis = build_nested_basis(Z1, X1, order=1)
    with pytest.raises(KeyError):
        basis.buckets(3)


# -- alpha solve ------------------------------------------------------------


@pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 0.9, 1.0])
def test_two_level_alpha_closed_form(lam):
    basis = build_nested_basis(Z1, X1, order=1)
    sol = solve_alpha(basis, lam)
    expected = -1.0 / (4.0 * ((1 - lam) ** 2 + lam**2))
    assert sol.status == "ok"
    assert sol.alpha[0] == pytest.approx(expected, rel=1e-12)
    assert sol.residual < 1e-12


@pytest.mark.parametrize("lam", [0.1, 0.5, 0.8])
def test_two_level_first_order_is_exact_gauge_potential(lam):
    basis = build_nested_basis(Z1, X1, order=1)
    a_op, sol = gauge_potential(basis, lam)
    expected = 1.0 / (2.0 * ((1 - lam) ** 2 + lam**2))
    assert a_op.weight_of("Y") == pytest.approx(expected)
    h_d = (1 - lam) * oracles.SZ + lam * oracles.SX
    dh_d = oracles.SX - oracles.SZ
    np.testing.assert_allclose(
        a_op.to_dense(), oracles.exact_agp_dense(h_d, dh_d), atol=1e-12
    )
    assert sol.status == "ok"


def test_two_level_order_two_is_degenerate_but_consistent():
    # O_3 is parallel to O_1, so the Gram matrix is singular; the minimum-norm
    # solution must still reproduce the unique optimal gauge potential.
    basis = build_nested_basis(Z1, X1, order=2)
    lam = 0.4
    a2, sol2 = gauge_potential(basis, lam, order=2)
    a1, sol1 = gauge_potential(basis, lam, order=1)
    assert sol2.status == "ok"
    assert sol2.g_norm2 == pytest.approx(sol1.g_norm2, rel=1e-9)
    diff = (a2 - a1).simplify(1e-9)
    assert len(diff) == 0


def test_alpha_degenerate_when_endpoints_match():
    basis = build_nested_basis(Z1, Z1, order=1)
    sol = solve_alpha(basis, 0.5)
    assert sol.status == "degenerate"
    np.testing.assert_array_equal(sol.alpha, [0.0])


def test_residual_orthogonality_property():
    # At the optimum the remaining defect is orthogonal to every even operator.
    rng = np.random.default_rng(7)
    hi, hf = random_hamiltonians(rng, 3)
    basis = build_nested_basis(hi, hf, order=2)
    for lam in (0.2, 0.6):
        sol = solve_alpha(basis, lam)
        assert sol.status == "ok"
        dh = hf - hi
        g = dh
        evens = [basis.evaluate(2 * k, lam) for k in (1, 2)]
        for k, ev in enumerate(evens):
            g = g + float(sol.alpha[k]) * ev
        for ev in evens:
            norm = np.sqrt(hs_inner(ev, ev).real) or 1.0
            assert abs(hs_inner(ev, g)) / norm < 1e-9


def test_action_nonincreasing_in_order():
    rng = np.random.default_rng(8)
    hi, hf = random_hamiltonians(rng, 3)
    basis = build_nested_basis(hi, hf, order=3)
    lam = 0.37
    values = [solve_alpha(basis, lam, order=l).g_norm2 for l in (1, 2, 3)]
    assert values[0] >= values[1] - 1e-12
    assert values[1] >= values[2] - 1e-12


def test_alpha_matches_dense_least_squares():
    rng = np.random.default_rng(9)
    hi, hf = random_hamiltonians(rng, 3)
    basis = build_nested_basis(hi, hf, order=2)
    lam = 0.45
    sol = solve_alpha(basis, lam)
    # dense: minimize || vec(dH) + sum alpha_k vec(O_2k) ||
    dh_d = (oracles.dense_from_sum(hf) - oracles.dense_from_sum(hi)).ravel()
    cols = [
        oracles.dense_from_sum(basis.evaluate(2 * k, lam)).ravel() for k in (1, 2)
    ]
    a = np.stack([np.concatenate([c.real, c.imag]) for c in cols], axis=1)
    b = -np.concatenate([dh_d.real, dh_d.imag])
    alpha_dense, *_ = np.linalg.lstsq(a, b, rcond=None)
    np.testing.assert_allclose(sol.alpha, alpha_dense, atol=1e-8)


# -- pool extraction --------------------------------------------------------


def h2_like_problem():
    rng = np.random.default_rng(12)
    hi = build_initial_hamiltonian("0101")
    pairs = []
    for lbl in ("IIZZ", "ZZII", "IZIZ", "ZIZI", "IIIZ", "IIZI", "IZII", "ZIII"):
        pairs.append((lbl, complex(rng.normal())))
    for lbl in ("XXYY", "YYXX", "XYYX", "YXXY", "XXXX", "YYYY", "XYXY", "YXYX"):
        pairs.append((lbl, complex(0.2 * rng.normal())))
    return hi, PauliSum.from_labels(pairs)


def test_static_pool_strings_grow_with_order():
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=3)
    sizes = []
    prev: set = set()
    for l in (1, 2, 3):
        pool = extract_pool_static(basis, order=l)
        cur = pool.string_set()
        assert prev <= cur
        sizes.append(len(pool))
        prev = cur
    assert sizes[0] >= 1


def test_time_pool_subset_of_static():
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=2)
    static = extract_pool_static(basis, order=2).string_set()
    for tp in (0.0, 0.1, 0.35, 0.5, 0.75, 1.0):
        sub = extract_pool_time(basis, t_prime=tp, order=2).string_set()
        assert sub <= static


def test_pool_provenance_tags():
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=2)
    pool = extract_pool_static(basis, order=2)
    assert pool.provenance is not None
    assert len(pool.provenance) == len(pool.generators)
    for tags in pool.provenance:
        assert tags
        for k, p, q in tags:
            assert k % 2 == 1 and p + q == k - 1


def test_pool_generators_sorted_and_deterministic():
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=1)
    a = extract_pool_static(basis).labels()
    b = extract_pool_static(basis).labels()
    assert a == b == sorted(a)


def test_time_pool_validation():
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=1)
    with pytest.raises(ValueError):
        extract_pool_time(basis, t_prime=1.5)
    with pytest.raises(ValueError):
        extract_pool_static(basis, order=2)


def test_empty_pool_error():
    basis = build_nested_basis(Z1, Z1, order=1)
    pool = extract_pool_static(basis)
    assert len(pool) == 0
    with pytest.raises(EmptyPoolError):
        pool.require_nonempty()


def test_pool_threshold_prunes():
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=1)
    loose = extract_pool_static(basis, pool_threshold=1e-9)
    tight = extract_pool_static(basis, pool_threshold=1e3)
    assert len(tight) == 0
    assert len(loose) >= 1


# -- fermionic pool ---------------------------------------------------------


def test_fermionic_pool_minimal_molecule():
    pool = build_fermionic_pool(4, 2)
    labels = pool.labels()
    assert len(pool) == 3
    assert "s_0^1" in labels and "s_2^3" in labels and "d_02^13" in labels
    ungrouped = build_fermionic_pool(4, 2, grouped=False)
    assert len(ungrouped) == 12
    assert pool.string_set() == ungrouped.string_set()


def test_fermionic_pool_counts_formula():
    # occ/vir per spin: na=nb=2 occupied, 3 virtual each for (10, 4)
    pool = build_fermionic_pool(10, 4)
    singles = 2 * 2 * 3
    same_spin_doubles = 2 * 1 * 3  # C(2,2) * C(3,2) per spin
    mixed_doubles = 2 * 2 * 3 * 3
    assert len(pool) == singles + same_spin_doubles + mixed_doubles


def test_fermionic_generators_commute_and_are_real():
    pool = build_fermionic_pool(4, 2)
    for gen in pool.generators:
        gen.validate()  # raises if not commuting / not real


def test_fermionic_generators_conserve_charge_and_spin():
    from cdadapt.pauli import commutator

    n = 4
    number = PauliSum.from_terms(
        n, [(PauliTerm.single(n, "Z", k), -0.5 + 0.0j) for k in range(n)]
    )
    sz = PauliSum.from_terms(
        n,
        [(PauliTerm.single(n, "Z", k), (-0.25 if k < 2 else 0.25) + 0.0j) for k in range(n)],
    )
    for gen in build_fermionic_pool(n, 2).generators:
        assert len(commutator(number, gen.terms, threshold=1e-12)) == 0
        assert len(commutator(sz, gen.terms, threshold=1e-12)) == 0


def test_fermionic_interleaved_matches_block_counts():
    a = build_fermionic_pool(8, 4, ordering="alpha_beta")
    b = build_fermionic_pool(8, 4, ordering="interleaved")
    assert len(a) == len(b)


def test_fermionic_double_excitation_moves_reference():
    from cdadapt import statevector as sv

    pool = build_fermionic_pool(4, 2)
    double = next(g for g in pool.generators if g.label == "d_02^13")
    psi = sv.prepare_basis("0101")
    rotated = sv.apply_pauli_exp(psi, double.terms, np.pi / 4)
    # pi/4 rotation maps |0101> fully onto |1010> for this generator scaling
    amp = rotated[int("1010", 2)]
    assert abs(amp) > 0.1


# -- pool files -------------------------------------------------------------


def test_pool_round_trip_cd(tmp_path):
    hi, hf = h2_like_problem()
    basis = build_nested_basis(hi, hf, order=2)
    pool = extract_pool_static(basis, order=2)
    f = tmp_path / "pool.json"
    dump_pool(pool, str(f))
    back = load_pool(str(f))
    assert back.kind == pool.kind
    assert back.labels() == pool.labels()
    assert back.provenance == pool.provenance
    assert back.meta["order"] == 2


def test_pool_round_trip_fermionic(tmp_path):
    pool = build_fermionic_pool(4, 2)
    f = tmp_path / "pool.json"
    dump_pool(pool, str(f))
    back = load_pool(str(f))
    assert back.labels() == pool.labels()
    for g0, g1 in zip(pool.generators, back.generators):
        assert isinstance(g1, GroupedGenerator)
        assert dict(g1.terms.raw_items()) == pytest.approx(dict(g0.terms.raw_items()))


def test_load_pool_rejects_wrong_schema(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"schema": "nope"}')
    with pytest.raises(ValueError):
        load_pool(str(f))
