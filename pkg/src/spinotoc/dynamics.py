"""Exact reduced dynamics from a unitary system-bath dilation.

The forward map evolves with H_f = H_S + H_E + H_SE, the backward map with
H_b = -H_S + H_E + H_SE (bath and interaction kept intact).  Channels are
the exact partial-trace dynamics of the finite dilation: no master-equation
approximation is made anywhere, so arbitrary coupling strengths and
non-Markovian behavior come for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    TensorLayout,
    eig_hermitian,
    devectorize,
    propagator_from_spectrum,
    vectorize,
)

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class JointPropagators:
    """Forward/backward joint unitaries at one time on a system+bath layout."""

    u_forward: np.ndarray
    u_backward: np.ndarray
    layout: TensorLayout
    time: float


@dataclass(frozen=True)
class QuantumChannelRep:
    """A channel as a d^2 x d^2 superoperator matrix on row-major-vectorized
    operators.  direction is 'schrodinger' (acts on states) or 'adjoint'
    (acts on observables); sense records which joint Hamiltonian produced it.
    """

    matrix: np.ndarray
    direction: str
    sense: str
    dim: int

    def apply(self, x: np.ndarray) -> np.ndarray:
        return devectorize(self.matrix @ vectorize(x), self.dim, self.dim)

    def choi(self) -> np.ndarray:
        """Choi matrix sum_ij |i><j| (x) map(|i><j|), by reshuffling."""
        d = self.dim
        m4 = self.matrix.reshape(d, d, d, d)
        return m4.transpose(2, 0, 3, 1).reshape(d * d, d * d)


def joint_propagators(
    h_system: np.ndarray,
    h_bath: np.ndarray,
    h_coupling: np.ndarray,
    layout: TensorLayout,
    t: float,
) -> JointPropagators:
    """Joint forward and backward unitaries at time t."""
    if not (h_system.shape == h_bath.shape == h_coupling.shape == (layout.dim, layout.dim)):
        raise ValueError("Hamiltonian dimensions do not match layout")
    h_env = h_bath + h_coupling
    wf, vf = eig_hermitian(h_system + h_env)
    wb, vb = eig_hermitian(-h_system + h_env)
    return JointPropagators(
        u_forward=propagator_from_spectrum(wf, vf, t),
        u_backward=propagator_from_spectrum(wb, vb, t),
        layout=layout,
        time=t,
    )


def _embed_system(x: np.ndarray, other: np.ndarray) -> np.ndarray:
    return np.kron(x, other)


def _trace_out_bath(joint: np.ndarray, d_s: int, d_e: int) -> np.ndarray:
    t4 = joint.reshape(d_s, d_e, d_s, d_e)
    return np.trace(t4, axis1=1, axis2=3)


def apply_channel(
    jp: JointPropagators,
    x_system: np.ndarray,
    rho_bath: np.ndarray,
    sense: str = FORWARD,
) -> np.ndarray:
    """Tr_E[ U (X (x) rho_E) U^dag ].

    X may be any system matrix, not only a state: the open-OTOC expression
    feeds the non-Hermitian product B rho through the forward map.
    """
    u = jp.u_forward if sense == FORWARD else jp.u_backward
    d_s = x_system.shape[0]
    d_e = rho_bath.shape[0]
    if d_s * d_e != jp.layout.dim:
        raise ValueError("system/bath dimensions do not match layout")
    joint = u @ _embed_system(x_system, rho_bath) @ u.conj().T
    return _trace_out_bath(joint, d_s, d_e)


def apply_adjoint_channel(
    jp: JointPropagators,
    op_system: np.ndarray,
    rho_bath: np.ndarray,
    sense: str = FORWARD,
) -> np.ndarray:
    """Heisenberg dual: Tr_E[ U^dag (A (x) I) U (I (x) rho_E) ].

    Satisfies Tr[A xi(rho)] = Tr[xi^dag(A) rho] for every A, rho.
    """
    u = jp.u_forward if sense == FORWARD else jp.u_backward
    d_s = op_system.shape[0]
    d_e = rho_bath.shape[0]
    if d_s * d_e != jp.layout.dim:
        raise ValueError("system/bath dimensions do not match layout")
    eye_e = np.eye(d_e, dtype=np.complex128)
    eye_s = np.eye(d_s, dtype=np.complex128)
    heis = u.conj().T @ _embed_system(op_system, eye_e) @ u
    joint = heis @ _embed_system(eye_s, rho_bath)
    return _trace_out_bath(joint, d_s, d_e)


class ReducedDynamics:
    """Forward/backward reduced dynamics with the dilation spectra computed
    once and shared across a whole time grid.

    The per-matrix appliers cache V^dag (X (x) rho_E) V so that each grid
    point costs two dense multiplications instead of a fresh
    eigendecomposition.
    """

    def __init__(
        self,
        h_system: np.ndarray,
        h_bath: np.ndarray,
        h_coupling: np.ndarray,
        layout: TensorLayout,
        rho_bath: np.ndarray,
    ):
        h_env = h_bath + h_coupling
        self.layout = layout
        self.rho_bath = rho_bath
        self.d_e = rho_bath.shape[0]
        self.d_s = layout.dim // self.d_e
        self._spectra = {
            FORWARD: eig_hermitian(h_system + h_env),
            BACKWARD: eig_hermitian(-h_system + h_env),
        }

    def propagators(self, t: float) -> JointPropagators:
        wf, vf = self._spectra[FORWARD]
        wb, vb = self._spectra[BACKWARD]
        return JointPropagators(
            u_forward=propagator_from_spectrum(wf, vf, t),
            u_backward=propagator_from_spectrum(wb, vb, t),
            layout=self.layout,
            time=t,
        )

    def schrodinger_applier(self, x_system: np.ndarray, sense: str = FORWARD):
        """Returns t -> Tr_E[ U_t (X (x) rho_E) U_t^dag ]."""
        w, v = self._spectra[sense]
        m0 = v.conj().T @ _embed_system(x_system, self.rho_bath) @ v
        d_s, d_e = self.d_s, self.d_e

        def at(t: float) -> np.ndarray:
            phase = np.exp(-1j * w * t)
            joint = (v * phase) @ m0 @ (v * phase).conj().T
            return _trace_out_bath(joint, d_s, d_e)

        return at

    def adjoint_applier(self, op_system: np.ndarray, sense: str = FORWARD):
        """Returns t -> Tr_E[ U_t^dag (A (x) I) U_t (I (x) rho_E) ]."""
        w, v = self._spectra[sense]
        eye_e = np.eye(self.d_e, dtype=np.complex128)
        m0 = v.conj().T @ _embed_system(op_system, eye_e) @ v
        d_s, d_e = self.d_s, self.d_e
        rho_e = self.rho_bath

        def at(t: float) -> np.ndarray:
            phase = np.exp(1j * w * t)
            heis = (v * phase) @ m0 @ (v * phase).conj().T
            t4 = heis.reshape(d_s, d_e, d_s, d_e)
            # Tr_E[ heis (I (x) rho_E) ]
            return np.einsum("aebf,fe->ab", t4, rho_e)

        return at

    def superoperator(self, t: float, direction: str, sense: str = FORWARD) -> QuantumChannelRep:
        """Superoperator matrix of the Schroedinger or adjoint map at time t."""
        jp = self.propagators(t)
        if direction == "schrodinger":
            applier = lambda x: apply_channel(jp, x, self.rho_bath, sense)
        elif direction == "adjoint":
            applier = lambda x: apply_adjoint_channel(jp, x, self.rho_bath, sense)
        else:
            raise ValueError(f"unknown direction {direction!r}")
        rep = channel_superoperator(applier, self.d_s)
        return QuantumChannelRep(matrix=rep.matrix, direction=direction, sense=sense, dim=self.d_s)


def channel_superoperator(applier, d: int) -> QuantumChannelRep:
    """Superoperator matrix of a linear map on d x d matrices: column
    k = i*d + j is the vectorized image of the matrix unit |i><j|."""
    cols = np.empty((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=np.complex128)
            unit[i, j] = 1.0
            image = applier(unit)
            if image.shape != (d, d):
                raise ValueError("applier output dimension mismatch")
            cols[:, i * d + j] = vectorize(image)
    return QuantumChannelRep(matrix=cols, direction="schrodinger", sense=FORWARD, dim=d)


def tensor_square_apply(rep: QuantumChannelRep, big_op: np.ndarray) -> np.ndarray:
    """Apply map (x) map to an operator on H (x) H'.

    big_op is indexed by ((row_H, row_H'), (col_H, col_H')); the
    superoperator acts once on the (row_H, col_H) pair and once on the
    (row_H', col_H') pair.
    """
    d = rep.dim
    if big_op.shape != (d * d, d * d):
        raise ValueError("operator dimension does not match channel")
    t4 = big_op.reshape(d, d, d, d)  # [rH, rH', cH, cH']
    y = t4.transpose(0, 2, 1, 3).reshape(d * d, d * d)  # rows (rH,cH), cols (rH',cH')
    z = rep.matrix @ y @ rep.matrix.T
    return z.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
