"""Statevector workbench for bipartite hardware-efficient ansatze.

Builds multi-layer two-block circuits whose inter-block CZ connections are
configurable (every layer, a single middle layer, none, or a custom layer
set), characterizes them (expressibility, entangling capability, gradient
variance), benchmarks them with VQE on Heisenberg chains and QUBO
instances, and executes the single-connection variant as two independent
half circuits through quasi-probability gate cutting.
"""

from .ansatz import (
    AnsatzSpec,
    Circuit,
    ConnectionScheme,
    build,
    circuit_from_json,
    circuit_to_json,
    cz_count,
    middle_layer,
    ncz_sweep_scheme,
    param_count,
    prepare,
    run,
    run_batch,
)
from .gatecut import (
    CutEnsemble,
    CutTerm,
    CzRatio,
    HalfCircuit,
    LocalCutOp,
    cz_cut_ensemble,
    execute_cut,
    overhead,
    r_cz,
    run_half,
    split,
)
from .metrics import (
    EntReport,
    ExpressibilityReport,
    GradVarReport,
    boundary_zz,
    estimate_entangling_capability,
    estimate_expressibility,
    estimate_gradient_variance,
    fidelity_kl_divergence,
    growth_rate,
    haar_bin_probability,
    haar_fidelity_pdf,
    meyer_wallach,
    trainability_probe,
)
from .problems import (
    HeisenbergSpec,
    IsingForm,
    QuboInstance,
    VScoreInputs,
    brute_force_min,
    exact_ground,
    heisenberg,
    ising_basis_energies,
    qubo_cost,
    random_qubo,
    to_ising,
    v_score,
)
from .statevec import (
    CapacityError,
    PauliObservable,
    PauliString,
    StateVector,
    apply_cz,
    apply_rotation,
    expectation,
    fidelity,
    init_zero,
    observable_variance,
    pauli,
    reduced_purity,
    sample_haar_state,
    to_matrix,
)
from .vqe import (
    NumericalError,
    RepeatStats,
    TrainConfig,
    TrainTrace,
    parameter_shift_grad,
    repeat_experiment,
    train,
)

__version__ = "0.1.0"
