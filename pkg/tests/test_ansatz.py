"""Circuit construction, counting, and scheme-equivalence checks."""
import numpy as np
import pytest

from secalab import (
    AnsatzSpec,
    Circuit,
    ConnectionScheme,
    build,
    circuit_from_json,
    circuit_to_json,
    cz_count,
    fidelity,
    init_zero,
    middle_layer,
    ncz_sweep_scheme,
    param_count,
    prepare,
    run,
    run_batch,
)
from secalab.ansatz import CZ, Rotation


def boundary_cz_layers(spec: AnsatzSpec) -> list[int]:
    """Counting oracle: map each boundary CZ in the gate list to its layer."""
    half = spec.n_qubits // 2
    layers = []
    rotations_seen = 0
    for gate in build(spec).gates:
        if isinstance(gate, Rotation):
            rotations_seen += 1
        elif {gate.q1, gate.q2} == {half - 1, half} and spec.n_qubits > 2:
            layers.append((rotations_seen - 1) // (3 * spec.n_qubits) + 1)
        elif spec.n_qubits == 2:
            layers.append((rotations_seen - 1) // (3 * spec.n_qubits) + 1)
    return layers


class TestParamCount:
    @pytest.mark.parametrize("n,layers,expected", [(4, 1, 12), (8, 20, 480), (12, 3, 108)])
    def test_values(self, n, layers, expected):
        spec = AnsatzSpec(n, layers, ConnectionScheme.feca())
        assert param_count(spec) == expected
        assert build(spec).n_params == expected


class TestBuild:
    def test_n4_l1_nocz_gate_list(self):
        circuit = build(AnsatzSpec(4, 1, ConnectionScheme.nocz()))
        rotations = [g for g in circuit.gates if isinstance(g, Rotation)]
        czs = [g for g in circuit.gates if isinstance(g, CZ)]
        assert len(rotations) == 12
        assert czs == [CZ(0, 1), CZ(2, 3)]

    def test_seca_n8_l3_boundary_only_middle(self):
        spec = AnsatzSpec(8, 3, ConnectionScheme.seca())
        assert boundary_cz_layers(spec) == [2]

    def test_feca_n8_l3_boundary_every_layer(self):
        spec = AnsatzSpec(8, 3, ConnectionScheme.feca())
        assert boundary_cz_layers(spec) == [1, 2, 3]

    def test_rotation_axis_order_within_layer(self):
        circuit = build(AnsatzSpec(2, 1, ConnectionScheme.nocz()))
        axes = [g.axis for g in circuit.gates if isinstance(g, Rotation)]
        assert axes == ["x", "x", "y", "y", "z", "z"]

    def test_parameter_coverage(self):
        circuit = build(AnsatzSpec(6, 4, ConnectionScheme.seca()))
        params = sorted(g.param for g in circuit.gates if isinstance(g, Rotation))
        assert params == list(range(param_count(AnsatzSpec(6, 4, ConnectionScheme.seca()))))

    def test_duplicate_param_rejected_by_circuit(self):
        with pytest.raises(ValueError):
            Circuit(2, 2, (Rotation("x", 0, 0), Rotation("y", 0, 0)))

    def test_determinism(self):
        a = build(AnsatzSpec(8, 5, ConnectionScheme.seca()))
        b = build(AnsatzSpec(8, 5, ConnectionScheme.seca()))
        assert a == b

    def test_odd_qubits_rejected(self):
        with pytest.raises(ValueError):
            AnsatzSpec(5, 1, ConnectionScheme.feca())

    def test_custom_layer_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            AnsatzSpec(4, 2, ConnectionScheme.custom({3}))


class TestSchemeEquivalences:
    def test_feca_equals_full_custom(self):
        for layers in (1, 3, 6):
            feca = build(AnsatzSpec(6, layers, ConnectionScheme.feca()))
            custom = build(AnsatzSpec(6, layers, ConnectionScheme.custom(range(1, layers + 1))))
            assert feca == custom

    def test_seca_equals_middle_custom(self):
        for layers in (1, 2, 3, 4, 7):
            seca = build(AnsatzSpec(6, layers, ConnectionScheme.seca()))
            custom = build(AnsatzSpec(6, layers, ConnectionScheme.custom({middle_layer(layers)})))
            assert seca == custom

    def test_nocz_equals_empty_custom(self):
        nocz = build(AnsatzSpec(6, 3, ConnectionScheme.nocz()))
        custom = build(AnsatzSpec(6, 3, ConnectionScheme.custom(())))
        assert nocz == custom

    @pytest.mark.parametrize("layers,expected", [(1, 1), (2, 1), (3, 2), (4, 2), (20, 10)])
    def test_middle_layer_rule(self, layers, expected):
        assert middle_layer(layers) == expected


class TestCzCount:
    def test_feca_n8_l20(self):
        assert cz_count(AnsatzSpec(8, 20, ConnectionScheme.feca())) == 140

    def test_seca_n8_l20(self):
        assert cz_count(AnsatzSpec(8, 20, ConnectionScheme.seca())) == 121

    def test_nocz_n4_l1(self):
        assert cz_count(AnsatzSpec(4, 1, ConnectionScheme.nocz())) == 2

    def test_matches_counting_oracle_over_gate_list(self):
        for scheme in (ConnectionScheme.feca(), ConnectionScheme.seca(), ConnectionScheme.nocz()):
            for n, layers in ((4, 3), (8, 5), (6, 1)):
                spec = AnsatzSpec(n, layers, scheme)
                counted = sum(1 for g in build(spec).gates if isinstance(g, CZ))
                assert cz_count(spec) == counted

    def test_monotone_in_connection_count(self):
        counts = [
            cz_count(AnsatzSpec(8, 10, ncz_sweep_scheme(10, k))) for k in range(0, 11)
        ]
        assert counts == sorted(counts)
        assert len(set(counts)) == len(counts)


class TestNczSweepScheme:
    def test_full_set(self):
        assert ncz_sweep_scheme(20, 20).connected_layers(20) == frozenset(range(1, 21))

    def test_single_is_middle(self):
        assert ncz_sweep_scheme(20, 1).connected_layers(20) == frozenset({10})

    def test_l3_two_connections_deterministic(self):
        first = ncz_sweep_scheme(3, 2).connected_layers(3)
        second = ncz_sweep_scheme(3, 2).connected_layers(3)
        assert first == second
        assert len(first) == 2
        assert first <= {1, 2, 3}

    @pytest.mark.parametrize("layers", [1, 2, 5, 7, 20, 33])
    def test_sizes_always_exact(self, layers):
        for k in range(0, layers + 1):
            assert len(ncz_sweep_scheme(layers, k).connected_layers(layers)) == k

    def test_too_many_rejected(self):
        with pytest.raises(ValueError):
            ncz_sweep_scheme(5, 6)


class TestPrepare:
    def test_zero_angles_give_zero_state(self):
        for scheme in (ConnectionScheme.nocz(), ConnectionScheme.feca()):
            spec = AnsatzSpec(6, 2, scheme)
            state = prepare(spec, np.zeros(param_count(spec)))
            assert fidelity(state, init_zero(6)) == pytest.approx(1.0)

    def test_two_qubit_degenerate_case(self):
        spec = AnsatzSpec(2, 3, ConnectionScheme.feca())
        circuit = build(spec)
        czs = [g for g in circuit.gates if isinstance(g, CZ)]
        assert czs == [CZ(0, 1)] * 3
        state = prepare(spec, np.random.default_rng(0).uniform(0, 2 * np.pi, 18))
        assert abs(state.norm_sq() - 1.0) < 1e-9

    def test_random_theta_norm(self):
        spec = AnsatzSpec(4, 1, ConnectionScheme.feca())
        theta = np.random.default_rng(1).uniform(0, 2 * np.pi, 12)
        assert abs(prepare(spec, theta).norm_sq() - 1.0) < 1e-9

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            prepare(AnsatzSpec(4, 1, ConnectionScheme.feca()), np.zeros(5))

    def test_batch_matches_single(self):
        spec = AnsatzSpec(6, 3, ConnectionScheme.seca())
        circuit = build(spec)
        thetas = np.random.default_rng(2).uniform(0, 2 * np.pi, (7, circuit.n_params))
        batch = run_batch(circuit, thetas)
        for row, theta in zip(batch, thetas):
            np.testing.assert_allclose(row, run(circuit, theta).amplitudes, atol=1e-12)


class TestSerialization:
    def test_round_trip_exact(self):
        circuit = build(AnsatzSpec(6, 2, ConnectionScheme.seca()))
        assert circuit_from_json(circuit_to_json(circuit)) == circuit

    def test_json_shape(self):
        import json

        data = json.loads(circuit_to_json(build(AnsatzSpec(2, 1, ConnectionScheme.nocz()))))
        assert data["n"] == 2
        assert data["gates"][0] == {"kind": "rot", "axis": "x", "q": 0, "p": 0}

    def test_unknown_kind_rejected(self):
        from secalab.ansatz import circuit_from_dict

        with pytest.raises(ValueError):
            circuit_from_dict({"n": 1, "gates": [{"kind": "h", "q": 0}]})

    def test_intra_entangler_none_hook(self):
        spec = AnsatzSpec(4, 1, ConnectionScheme.nocz(), intra_entangler="none")
        assert all(isinstance(g, Rotation) for g in build(spec).gates)
        assert cz_count(spec) == 0
