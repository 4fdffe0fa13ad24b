import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uvqc.arealaw import (
    balanced_cuts,
    contiguous_cuts,
    crossing_bound,
    interaction_graph,
    max_ebits,
    measure_ebits,
    saturating_depth,
    sweep,
    two_qubit_depth,
)
from uvqc.circuit import Circuit, Gate
from uvqc.pauli import PauliSum
from uvqc.variational import AnsatzSpec


def test_interaction_graph():
    h = PauliSum.from_terms(4, [(1.0, "XZII"), (1.0, "IIYY"), (0.5, "ZIIZ"), (1.0, "IXII")])
    assert interaction_graph(h).edges == [(0, 1), (0, 3), (2, 3)]


def test_two_qubit_depth_asap():
    c = Circuit(4, [Gate("CNOT", (0, 1)), Gate("H", (2,)), Gate("CNOT", (2, 3)),
                    Gate("CZ", (1, 2)), Gate("CNOT", (0, 1))])
    assert two_qubit_depth(c) == 3
    assert two_qubit_depth(Circuit(2, [Gate("H", (0,))])) == 0


def test_brick_layer_depth_equals_layer_count():
    for geometry, n in (("line", 6), ("ring", 6), ("ring", 5), ("grid", 9)):
        for c in range(5):
            assert two_qubit_depth(AnsatzSpec("brick_layer", n, c, geometry).template()) == c


def test_max_ebits_and_saturating_depth():
    assert max_ebits(7, 2) == 2
    assert max_ebits(7, 9) == 3
    assert saturating_depth("line", 8) == 4
    assert saturating_depth("ring", 8) == 2
    assert saturating_depth("grid", 16) == 2
    with pytest.raises(ValueError):
        max_ebits(1, 1)


def test_cut_lists():
    assert contiguous_cuts(4) == [[0], [0, 1], [0, 1, 2]]
    assert len(balanced_cuts(4)) == 3
    assert len(balanced_cuts(5)) == 10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([("line", 5), ("ring", 6), ("grid", 4)]),
       st.integers(0, 3), st.sampled_from(["hardware_efficient", "brick_layer"]))
def test_rank_never_exceeds_crossing_count(seed, geo, depth, family):
    geometry, n = geo
    spec = AnsatzSpec(family, n, depth, geometry)
    params = np.random.default_rng(seed).uniform(0, 4 * np.pi, spec.num_parameters)
    cuts = balanced_cuts(n) + contiguous_cuts(n)
    m = measure_ebits(spec, params, cuts)
    for cut, r in zip(cuts, m.rank_ebits):
        assert r <= crossing_bound(spec, cut) + 1e-9
    assert np.all(m.entropy_ebits <= m.rank_ebits + 1e-9)


def test_non_contiguous_cut_exceeds_layer_bound():
    # a single brick layer on a line entangles both pairs across the cut {0, 2}
    spec = AnsatzSpec("brick_layer", 4, 1, "line")
    params = np.full(spec.num_parameters, 0.0)
    params[:4] = np.pi / 2       # RY layer to |+>
    params[4:6] = np.pi          # two CRY(pi) gates
    m = measure_ebits(spec, params, [[0, 2]])
    assert m.max_rank == pytest.approx(2.0)
    assert m.max_rank > max_ebits(4, 1)


def test_sweep_is_seeded_and_bounded():
    a = sweep("ring", 6, 2, 30, seed=5)
    b = sweep("ring", 6, 2, 30, seed=5)
    assert a.as_dict() == b.as_dict()
    assert a.violations == 0
    assert a.bound == max_ebits(6, 2)
    d = a.as_dict()
    assert sum(d["entropy_histogram"]["counts"]) == 30
    assert d["saturating_depth"] == 1.5


def test_sweep_reaches_ceiling_on_line():
    res = sweep("line", 4, 4, 20, seed=0)
    assert res.max_rank_per_cut.max() == pytest.approx(2.0)
