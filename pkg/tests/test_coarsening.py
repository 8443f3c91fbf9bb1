import numpy as np
import pytest

from satgeo.coarsening import (coarsen_fixed_point, core_of_cluster, is_cover,
                               is_free, replay_coarsening, strip_clauses)
from satgeo.errors import InvalidInput, InvalidParameters
from satgeo.formula import Formula, gen_single_sat_literal, gen_uniform
from satgeo.geometry import decompose_clusters, enumerate_solutions, projection_of
from satgeo.words import STAR, TriAssignment

from conftest import all_order_fixed_points, random_formula


def test_is_free_single_clause(single_clause):
    tri = TriAssignment.from_string("100")
    assert is_free(single_clause, tri, 0) is False
    assert is_free(single_clause, tri, 1) is True
    assert is_free(single_clause, tri, 2) is True


def test_is_free_unused_variable_and_all_star(single_clause):
    f = Formula.from_clauses(4, 3, [[1, 2, 3]])
    assert is_free(f, TriAssignment.from_string("1000"), 3) is True
    all_star = TriAssignment.all_star(3)
    assert all(is_free(single_clause, all_star, i) for i in range(3))


def test_is_free_counts_other_variables_not_other_positions():
    # (~x0 | x0 | x0): no other variable, so x0 is pinned under value 0
    f = Formula.from_clauses(1, 3, [[-1, 1, 1]], with_replacement=True)
    assert is_free(f, TriAssignment.from_string("0"), 0) is False


def test_coarsen_single_clause_reaches_all_star(single_clause):
    trace = coarsen_fixed_point(single_clause, [1, 0, 0])
    assert str(trace.fixed_point) == "***"
    assert trace.star_count == 3


def test_coarsen_no_clauses():
    f = gen_uniform(4, 3, 0, seed=0)
    assert str(coarsen_fixed_point(f, [1, 0, 1, 0]).fixed_point) == "****"


def test_coarsen_x0_forcing_all_orders(x0_forcing):
    # brute force over every coarsening order: the fixed point is unique and
    # (for this fixture) fully starred -- x0 frees once x1, x2 are stars
    assert all_order_fixed_points(x0_forcing, TriAssignment.from_string("100")) == {"***"}
    got = coarsen_fixed_point(x0_forcing, [1, 0, 0]).fixed_point
    assert str(got) == "***"


def test_coarsen_cyclic_fixture_keeps_core(cyclic_core):
    trace = coarsen_fixed_point(cyclic_core, [0, 0, 0])
    assert str(trace.fixed_point) == "000"
    assert trace.coarsened_order == ()
    assert all_order_fixed_points(cyclic_core, TriAssignment.from_string("000")) == {"000"}


def test_coarsen_policies_agree(cyclic_core, x0_forcing):
    rng = np.random.default_rng(0)
    for f in (cyclic_core, x0_forcing):
        for w in enumerate_solutions(f).words:
            base = coarsen_fixed_point(f, int(w)).fixed_point
            assert coarsen_fixed_point(f, int(w), "random", seed=3).fixed_point == base
            pick_last = lambda cands: cands[-1]
            assert coarsen_fixed_point(f, int(w), pick_last).fixed_point == base
    with pytest.raises(InvalidParameters):
        coarsen_fixed_point(cyclic_core, [0, 0, 0], "random")  # seed required
    with pytest.raises(InvalidParameters):
        coarsen_fixed_point(cyclic_core, [0, 0, 0], "sideways")


def test_trace_replays(x0_forcing):
    trace = coarsen_fixed_point(x0_forcing, [1, 1, 1])
    assert replay_coarsening(x0_forcing, trace.initial, trace.coarsened_order) \
        == trace.fixed_point
    data = trace.to_json()
    assert '"fixed_point"' in data and '"coarsened_order"' in data


def test_core_of_cluster_values(x0_forcing, cyclic_core):
    sols = enumerate_solutions(cyclic_core)
    dec = decompose_clusters(sols)
    core0 = core_of_cluster(cyclic_core, dec.cluster(0))
    assert str(core0) == "000"
    core1 = core_of_cluster(cyclic_core, dec.cluster(1))
    assert str(core1) == "***"
    with pytest.raises(InvalidInput):
        core_of_cluster(cyclic_core, np.array([], dtype=np.uint64))


def test_core_singleton_no_free_vars(cyclic_core):
    dec = decompose_clusters(enumerate_solutions(cyclic_core))
    singleton = dec.cluster(0)
    assert len(singleton) == 1
    assert str(core_of_cluster(cyclic_core, singleton)) == "000"


def test_core_of_empty_formula_cluster():
    f = gen_uniform(3, 3, 0, seed=0)
    dec = decompose_clusters(enumerate_solutions(f))
    assert str(core_of_cluster(f, dec.cluster(0))) == "***"


def test_is_cover_examples(single_clause, cyclic_core):
    assert is_cover(single_clause, TriAssignment.all_star(3)) is True
    unsat = Formula.from_clauses(2, 2, [[1, 2], [1, -2], [-1, 2], [-1, -2]])
    assert is_cover(unsat, TriAssignment.all_star(2)) is True
    assert is_cover(single_clause, TriAssignment.from_string("100")) is False
    assert is_cover(cyclic_core, TriAssignment.from_string("000")) is True


def test_cover_of_nontrivial_core_k2():
    # (x0|x1)(~x0|~x1): both solutions are isolated with fully frozen cores
    f = Formula.from_clauses(2, 2, [[1, 2], [-1, -2]])
    dec = decompose_clusters(enumerate_solutions(f))
    assert dec.num_clusters == 2
    for c in range(2):
        core = core_of_cluster(f, dec.cluster(c))
        assert core.star_count == 0
        assert is_cover(f, core)


def test_strip_clauses_examples(x0_forcing):
    # U(sigma) = {first clause} only; stripping empties it
    assert str(strip_clauses(x0_forcing, [1, 0, 0])) == "***"
    f = gen_uniform(4, 3, 0, seed=0)
    assert str(strip_clauses(f, [1, 1, 0, 0])) == "****"
    with pytest.raises(InvalidInput):
        strip_clauses(x0_forcing, [0, 0, 0])  # not satisfying


def test_strip_clauses_planted_model_whole_list():
    f = gen_single_sat_literal(6, 3, 12, seed=3)
    bits = np.zeros(6, dtype=np.int8)
    sat_occ = (bits[f.clause_vars] == 1) == f.clause_signs
    assert (sat_occ.sum(axis=1) == 1).all()  # U(0) is the entire clause list
    assert strip_clauses(f, bits) == coarsen_fixed_point(f, 0).fixed_point


@pytest.mark.parametrize("seed", range(60))
def test_property_sweep_small_formulas(seed):
    """Order independence, cluster constancy, core-is-cover, frozen soundness,
    strip equivalence: one seed per formula (the acceptance corpus runs the
    large version)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 11))
    k = int(rng.integers(3, min(5, n) + 1))
    m = int(rng.integers(1, int(2.5 * n)))
    f = random_formula(rng, n, k, m)
    sols = enumerate_solutions(f)
    if not len(sols):
        return
    dec = decompose_clusters(sols)
    w0 = int(sols.words[rng.integers(len(sols))])
    base = coarsen_fixed_point(f, w0).fixed_point
    for t in range(10):
        assert coarsen_fixed_point(f, w0, "random", seed=t).fixed_point == base
    for c in range(dec.num_clusters):
        cluster = dec.cluster(c)
        core = core_of_cluster(f, cluster, verify=True)
        proj = projection_of(cluster, n)
        assert core.dominates(proj)
        for i in range(n):
            if core[i] != STAR:
                assert proj[i] == core[i]  # frozen, same value
        assert is_cover(f, core)
        for w in cluster:
            assert strip_clauses(f, int(w)) == coarsen_fixed_point(f, int(w)).fixed_point


def test_cluster_constancy_needs_single_occurrence_clauses():
    """Witness that the shared-fixed-point guarantee is scoped to clauses
    without opposite-polarity repeats: in (x0|~x0|x1)(~x1|~x1|~x1) the two
    adjacent solutions coarsen to different fixed points, because flipping
    x0 never frees it (the tautological clause satisfies itself)."""
    f = Formula.from_clauses(2, 3, [[1, -1, 2], [-2, -2, -2]],
                             with_replacement=True)
    sols = enumerate_solutions(f)
    assert [int(w) for w in sols.words] == [0, 1]
    assert decompose_clusters(sols).num_clusters == 1
    w0 = coarsen_fixed_point(f, 0).fixed_point
    w1 = coarsen_fixed_point(f, 1).fixed_point
    assert str(w0) == "00" and str(w1) == "10"
    from satgeo.errors import ConsistencyError
    with pytest.raises(ConsistencyError):
        core_of_cluster(f, sols.words)


def test_cover_condition_matches_free_variable_definition():
    # the essential-clause form of condition (ii) agrees with the direct
    # "every free variable is starred" reading whenever (i) holds
    rng = np.random.default_rng(99)
    for _ in range(200):
        n = int(rng.integers(3, 8))
        f = random_formula(rng, n, 3, int(rng.integers(1, 3 * n)),
                           distinct=bool(rng.integers(0, 2)))
        syms = rng.integers(-1, 2, size=n)
        tri = TriAssignment(syms.astype(np.int8))
        cv, cs = f.clause_vars, f.clause_signs
        vals = tri.symbols
        lit_val = vals[cv]
        n_true = ((lit_val >= 0) & ((lit_val == 1) == cs)).sum(axis=1)
        n_star = (lit_val < 0).sum(axis=1)
        cond_i = bool(((n_true >= 1) | (n_star >= 2)).all())
        direct = cond_i and all(tri.is_star(v) or not is_free(f, tri, v)
                                for v in range(n))
        assert is_cover(f, tri) == direct
