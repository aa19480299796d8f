"""Collective-sector fast path for the LMG bath.

The LMG bath Hamiltonian, the system-bath coupling and the bath thermal
state all depend on the bath spins only through the collective angular
momentum, so the joint dynamics block-diagonalizes over total-spin sectors.
Each sector contributes system (x) (2j+1)-dimensional dynamics weighted by
its degeneracy, shrinking the bath from 2^N to O(N) per block.

BlockedDynamics exposes the same applier interface as
dynamics.ReducedDynamics and is interchangeable with it in the OTOC layer.
"""

from __future__ import annotations

import numpy as np

from .dynamics import (
    BACKWARD,
    FORWARD,
    QuantumChannelRep,
    channel_superoperator,
)
from .linalg import TensorLayout, eig_hermitian, pauli_at
from .models import IsingLMGParams, build_ising_chain, collective_blocks


class BlockedDynamics:
    """Reduced forward/backward dynamics of an Ising chain in an LMG bath,
    evaluated sector by sector.

    Block bath states come pre-multiplied by (multiplicity / Z) so channel
    outputs are plain sums over blocks.
    """

    def __init__(self, params: IsingLMGParams, bath_state: str = "thermal"):
        self.params = params
        sys_layout = TensorLayout.spins(params.n_system)
        self.d_s = sys_layout.dim
        h_s = build_ising_chain(params, sys_layout)
        blocks = collective_blocks(params.n_bath, params)

        # Bath state per block, globally normalized across sectors.
        if bath_state == "thermal":
            spectra_e = [eig_hermitian(b.h_block) for b in blocks]
            e_min = min(w.min() for w, _ in spectra_e)
            gibbs = []
            z = 0.0
            for b, (w, v) in zip(blocks, spectra_e):
                weights = np.exp(-(w - e_min) / params.temperature)
                gibbs.append((v * weights) @ v.conj().T)
                z += b.multiplicity * weights.sum()
            rho_blocks = [b.multiplicity / z * g for b, g in zip(blocks, gibbs)]
        elif bath_state == "maximally-mixed":
            total = 2**params.n_bath
            rho_blocks = [
                (b.multiplicity / total) * np.eye(b.dim, dtype=np.complex128)
                for b in blocks
            ]
        else:
            raise ValueError(f"unknown bath state {bath_state!r}")

        pref = params.coupling / np.sqrt(params.n_bath)
        self._blocks = []
        for b, rho_e in zip(blocks, rho_blocks):
            eye_b = np.eye(b.dim, dtype=np.complex128)
            h_se = np.zeros((self.d_s * b.dim,) * 2, dtype=np.complex128)
            for s in range(params.n_system):
                h_se += pref * (
                    np.kron(pauli_at(sys_layout, s, "x"), b.jx)
                    + np.kron(pauli_at(sys_layout, s, "y"), b.jy)
                )
            h_env = np.kron(np.eye(self.d_s, dtype=np.complex128), b.h_block) + h_se
            h_sys_big = np.kron(h_s, eye_b)
            self._blocks.append(
                {
                    "dim": b.dim,
                    "rho_e": rho_e,
                    FORWARD: eig_hermitian(h_sys_big + h_env),
                    BACKWARD: eig_hermitian(-h_sys_big + h_env),
                }
            )

    def _trace_out(self, joint: np.ndarray, d_e: int) -> np.ndarray:
        t4 = joint.reshape(self.d_s, d_e, self.d_s, d_e)
        return np.trace(t4, axis1=1, axis2=3)

    def schrodinger_applier(self, x_system: np.ndarray, sense: str = FORWARD):
        cached = []
        for blk in self._blocks:
            w, v = blk[sense]
            m0 = v.conj().T @ np.kron(x_system, blk["rho_e"]) @ v
            cached.append((w, v, m0, blk["dim"]))

        def at(t: float) -> np.ndarray:
            out = np.zeros((self.d_s, self.d_s), dtype=np.complex128)
            for w, v, m0, d_e in cached:
                phase = np.exp(-1j * w * t)
                joint = (v * phase) @ m0 @ (v * phase).conj().T
                out += self._trace_out(joint, d_e)
            return out

        return at

    def adjoint_applier(self, op_system: np.ndarray, sense: str = FORWARD):
        cached = []
        for blk in self._blocks:
            w, v = blk[sense]
            eye_e = np.eye(blk["dim"], dtype=np.complex128)
            m0 = v.conj().T @ np.kron(op_system, eye_e) @ v
            cached.append((w, v, m0, blk["dim"], blk["rho_e"]))

        def at(t: float) -> np.ndarray:
            out = np.zeros((self.d_s, self.d_s), dtype=np.complex128)
            for w, v, m0, d_e, rho_e in cached:
                phase = np.exp(1j * w * t)
                heis = (v * phase) @ m0 @ (v * phase).conj().T
                t4 = heis.reshape(self.d_s, d_e, self.d_s, d_e)
                out += np.einsum("aebf,fe->ab", t4, rho_e)
            return out

        return at

    def superoperator(self, t: float, direction: str, sense: str = FORWARD) -> QuantumChannelRep:
        if direction == "schrodinger":
            make = self.schrodinger_applier
        elif direction == "adjoint":
            make = self.adjoint_applier
        else:
            raise ValueError(f"unknown direction {direction!r}")

        def applier(x: np.ndarray) -> np.ndarray:
            return make(x, sense)(t)

        rep = channel_superoperator(applier, self.d_s)
        return QuantumChannelRep(matrix=rep.matrix, direction=direction, sense=sense, dim=self.d_s)
