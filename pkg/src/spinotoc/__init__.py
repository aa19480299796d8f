"""Exact-diagonalization toolkit for interferometric and bipartite OTOCs
of closed and open spin systems (Ising chains, LMG baths, tilted-field
Ising chains with anisotropic ring baths).

Dense matrices throughout; intended scale is a total Hilbert dimension of a
few thousand, with a collective-sector fast path for large LMG baths.
"""

from .linalg import (
    PAULI,
    TensorLayout,
    collective_j,
    eig_hermitian,
    haar_unitary,
    kron_all,
    partial_trace,
    pauli_at,
    propagator,
    thermal_state,
    vectorize,
    devectorize,
)
from .models import (
    IsingLMGParams,
    LMGClosedParams,
    TFIMParams,
    build_aniso_bath,
    build_edge_coupling,
    build_ising_chain,
    build_lmg_bath,
    build_lmg_closed,
    build_lmg_coupling,
    build_tfim,
    collective_blocks,
)
from .dynamics import (
    JointPropagators,
    QuantumChannelRep,
    ReducedDynamics,
    apply_adjoint_channel,
    apply_channel,
    channel_superoperator,
    joint_propagators,
    tensor_square_apply,
)
from .fastpath import BlockedDynamics
from .otoc import (
    OtocRequest,
    SeriesResult,
    commutator_square,
    fotoc_closed,
    fotoc_corrected,
    fotoc_open,
    fotoc_protocol_closed,
    fotoc_protocol_open,
    onset_time,
    recurrence_report,
    shortest_period,
)
from .bipartite import (
    Bipartition,
    SwapOps,
    bipartite_otoc_closed,
    bipartite_otoc_haar_mc,
    bipartite_otoc_open,
    build_swaps,
    haar_identity_check,
)

__version__ = "0.1.0"
