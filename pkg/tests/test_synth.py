import numpy as np
import pytest

from equimaps.bounds import Verdict, decide_map_existence
from equimaps.instances import sweep
from equimaps.reps import GroupDescriptor, InputError, Representation, real_dim
from equimaps.synth import (
    Assignment,
    MapRefused,
    SynthesizedMap,
    ZeroBlock,
    act,
    apply,
    evaluate,
    exponent_coherent,
    power_exponent,
    projection_map,
    synthesize_equivariant,
    synthesize_partial,
    with_exponent,
)
from equimaps.verify import random_sphere_points

from test_reps import rep, torus_rep


def test_power_exponent_examples():
    assert power_exponent(2, 3, 5) == 4
    assert power_exponent(4, 4, 7) == 1
    assert power_exponent(1, 1, 2) == 1
    with pytest.raises(ValueError):
        power_exponent(0, 1, 3)
    with pytest.raises(ValueError):
        power_exponent(1, 3, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_power_exponent_exhaustive(p):
    for j1 in range(1, p):
        for j2 in range(1, p):
            e = power_exponent(j1, j2, p)
            assert 1 <= e < p and (e * j1 - j2) % p == 0


# --- synthesis ----------------------------------------------------------------------


def test_synthesize_single_block():
    f = synthesize_equivariant(rep(3, 1, [((1,), 1)]), rep(3, 1, [((2,), 1)]))
    assert f.blocks == (Assignment(0, 0, 2),)
    assert f.analytic_zero_set == ()


def test_synthesize_identity_when_v_equals_w():
    V = rep(5, 2, [((1, 0), 2), ((2, 3), 1), ((0, 1), 1)])
    f = synthesize_equivariant(V, V)
    for a in f.assignments:
        assert V.slots[a.src] == V.slots[a.dst] and a.exponent == 1


def test_synthesize_p2_first_slots():
    f = synthesize_equivariant(rep(2, 1, [((1,), 3)]), rep(2, 1, [((1,), 5)]))
    assert f.blocks == (Assignment(0, 0, 1), Assignment(1, 1, 1), Assignment(2, 2, 1))


def test_synthesize_refuses_with_violating_line():
    with pytest.raises(MapRefused) as exc:
        synthesize_equivariant(rep(3, 2, [((1, 0), 1)]), rep(3, 2, [((0, 1), 5)]))
    assert exc.value.violating_line == (1, 0)
    assert "[1, 0]" in str(exc.value)


def test_synthesize_sorted_injection_within_line():
    # line (1): V slots weights 2,1 ; W slots weights 1,2,2
    V = rep(5, 1, [((2,), 1), ((1,), 1)])
    W = rep(5, 1, [((1,), 1), ((2,), 2)])
    f = synthesize_equivariant(V, W)
    # sorted V: slot1 (w=1), slot0 (w=2); sorted W: slot0 (1), slot1 (2), slot2 (2)
    assert set(f.blocks) == {Assignment(1, 0, 1), Assignment(0, 1, 1)}


def test_torus_synthesis_equal_weights_only():
    V = torus_rep(2, [((1, 2), 1)])
    W = torus_rep(2, [((3, 1), 1), ((1, 2), 1)])
    f = synthesize_equivariant(V, W)
    assert f.blocks == (Assignment(0, 1, 1),)
    with pytest.raises(MapRefused):
        synthesize_equivariant(torus_rep(1, [((1,), 1)]), torus_rep(1, [((2,), 1)]))


def test_partial_worked_example():
    V = rep(3, 2, [((1, 0), 2), ((0, 1), 1)])
    W = rep(3, 2, [((0, 1), 1)])
    f = synthesize_partial(V, W)
    assert f.zero_blocks == (ZeroBlock(0), ZeroBlock(1))
    assert f.analytic_zero_set == (0, 1)
    assert f.analytic_zero_dim() == 3


def test_partial_degenerate_cases():
    V = rep(3, 1, [((1,), 2)])
    f = synthesize_partial(V, rep(3, 1, [((2,), 3)]))
    assert not f.zero_blocks and f.analytic_zero_set == ()
    assert f == synthesize_equivariant(V, rep(3, 1, [((2,), 3)]))
    z = synthesize_partial(V, rep(3, 1, []))
    assert not z.assignments and z.analytic_zero_set == (0, 1)


def test_partial_fills_violating_lines_first():
    V = rep(3, 1, [((1,), 3)])
    f = synthesize_partial(V, rep(3, 1, [((2,), 1)]))
    assert len(f.assignments) == 1 and f.analytic_zero_set == (1, 2)


def test_projection_examples():
    V2 = rep(2, 1, [((1,), 5)])
    f = projection_map(V2, [0, 1])
    assert f.analytic_zero_set == (2, 3, 4) and f.analytic_zero_dim() == 2
    assert real_dim(f.target) == 2
    assert projection_map(V2, range(5)).analytic_zero_set == ()
    V3 = rep(3, 1, [((1,), 3)])
    assert projection_map(V3, [0]).analytic_zero_dim() == 3
    with pytest.warns(UserWarning):
        z = projection_map(V3, [])
    assert z.analytic_zero_dim() == 5
    with pytest.raises(InputError):
        projection_map(V3, [0, 0])


def test_projection_mixed_weights_maps_to_matching_slots():
    V = rep(5, 2, [((1, 0), 2), ((0, 1), 1), ((1, 1), 1)])
    f = projection_map(V, [3, 0, 2])
    assert exponent_coherent(f)
    for a in f.assignments:
        assert V.slots[a.src] == f.target.slots[a.dst]


def test_map_validation():
    V, W = rep(3, 1, [((1,), 2)]), rep(3, 1, [((1,), 2)])
    with pytest.raises(InputError):
        SynthesizedMap(V, W, (Assignment(0, 0),))
    with pytest.raises(InputError):
        SynthesizedMap(V, W, (Assignment(0, 0), Assignment(1, 0)))
    with pytest.raises(InputError):
        SynthesizedMap(V, W, (Assignment(0, 0), Assignment(1, 5)))


# --- evaluation and action -------------------------------------------------------------


def test_evaluate_power_square():
    G = GroupDescriptor("p-torus", 1, 3)
    V = Representation(G, (((1,), 1),))
    W = Representation(G, (((2,), 1),))
    f = SynthesizedMap(V, W, (Assignment(0, 0, 2),), ())
    y = evaluate(f, np.array([1j]))
    assert np.allclose(y, [-1.0], atol=1e-15)


def test_evaluate_identity_and_zero_block():
    V = rep(3, 1, [((1,), 2)])
    f = synthesize_equivariant(V, V)
    x = np.array([0.6, 0.8j])
    assert np.allclose(evaluate(f, x), x)
    g = synthesize_partial(V, rep(3, 1, []))
    assert np.all(evaluate(g, x) == 0)
    with pytest.raises(InputError):
        evaluate(f, np.array([1.0, 1.0]))


def test_act_examples():
    V2 = rep(2, 1, [((1,), 4)])
    x = np.array([0.5, -0.5, 0.5, 0.5])
    assert np.array_equal(act([1], V2, x), -x)
    V3 = rep(3, 2, [((1, 0), 1), ((1, 2), 1)])
    z = np.array([0.6, 0.8j])
    assert np.array_equal(act([0, 0], V3, z), z)
    g = act([1, 1], V3, z)
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(g, [w * 0.6, w**3 * 0.8j])
    assert np.isclose(np.linalg.norm(g), 1.0)
    with pytest.raises(InputError):
        act([1], V3, z)
    with pytest.raises(InputError):
        GroupDescriptor("p-torus", 1, 4)


def test_act_torus_phases():
    T = torus_rep(2, [((1, 2), 1)])
    y = act(np.array([0.25, 0.0]), T, np.array([1.0 + 0j]))
    assert np.allclose(y, [1j])


def _exists_maps(n=120, seed=21):
    for p, k, V, W in sweep(seed, n):
        if decide_map_existence(V, W).verdict is Verdict.EXISTS:
            yield V, W, synthesize_equivariant(V, W)


def test_equivariance_norm_and_coherence():
    rng = np.random.default_rng(0)
    seen = 0
    for V, W, f in _exists_maps():
        seen += 1
        assert exponent_coherent(f)
        X = random_sphere_points(rng, V.group, V.n_slots, 200)
        assert np.max(np.abs(np.linalg.norm(apply(f, X), axis=-1) - 1)) < 1e-12
        p = V.group.p
        # every group element, for small groups
        for g in np.array(np.meshgrid(*[range(p)] * V.group.rank)).reshape(V.group.rank, -1).T:
            lhs = apply(f, act(g, V, X))
            rhs = act(g, W, apply(f, X))
            assert np.max(np.linalg.norm(lhs - rhs, axis=-1)) < 1e-9
    assert seen >= 20


def test_zero_set_certificates():
    rng = np.random.default_rng(1)
    for p, k, V, W in sweep(5, 60):
        f = synthesize_partial(V, W)
        U = list(f.analytic_zero_set)
        A = [a.src for a in f.assignments]
        if U:
            X = np.zeros((50, V.n_slots), dtype=complex if p > 2 else float)
            X[:, U] = random_sphere_points(rng, V.group, len(U), 50)
            assert np.abs(apply(f, X)).max(initial=0.0) <= 1e-15
        if A:
            X = np.zeros((50, V.n_slots), dtype=complex if p > 2 else float)
            X[:, A] = random_sphere_points(rng, V.group, len(A), 50)
            assert np.min(np.linalg.norm(apply(f, X), axis=-1)) > 0.1


def test_continuity_at_seams():
    V = rep(5, 1, [((1,), 2)])
    W = rep(5, 1, [((3,), 1), ((4,), 1)])
    f = synthesize_equivariant(V, W)
    assert {a.exponent for a in f.assignments} == {3, 4}
    base = np.array([0.0, 1.0 + 0j])
    limit = apply(f, base)
    for phase in np.linspace(0, 2 * np.pi, 7):
        x = np.array([1e-8 * np.exp(1j * phase), np.sqrt(1 - 1e-16) + 0j])
        assert np.linalg.norm(apply(f, x) - limit) < 1e-7


# --- serialization ---------------------------------------------------------------------


def test_round_trip_byte_identical():
    for p, k, V, W in sweep(8, 30):
        f = synthesize_partial(V, W)
        text = f.dumps()
        g = SynthesizedMap.loads(text)
        assert g == f and g.dumps() == text


def test_corrupted_map_loads_but_is_incoherent():
    V = rep(5, 1, [((1,), 1)])
    f = synthesize_equivariant(V, rep(5, 1, [((2,), 1)]))
    bad = with_exponent(f, 0, (f.blocks[0].exponent + 1) % 5)
    assert not exponent_coherent(bad)
    assert SynthesizedMap.loads(bad.dumps()) == bad
    with pytest.raises(InputError):
        SynthesizedMap.from_dict({"group": {"kind": "p-torus", "p": 5, "rank": 1}})
