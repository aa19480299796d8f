"""Hamiltonian builders: Ising chain in an LMG bath, tilted-field Ising
chain with an anisotropic ring bath, the closed LMG model, and the
collective-sector (total-spin block) representation of the LMG bath.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .linalg import TensorLayout, collective_j, pauli_at


@dataclass(frozen=True)
class IsingLMGParams:
    """Ising chain of n_system spins, each coupled to an isotropic LMG bath
    of n_bath spins. lambda_tilde defaults to lambda_ (the convention used
    for every reported curve)."""

    n_system: int
    n_bath: int
    omega: float = 2.0
    j_coupling: float = 0.5
    lambda_: float = 0.5
    lambda_tilde: float | None = None
    omega_c: float = 4.0
    temperature: float = 10.0

    def __post_init__(self):
        if self.n_system < 1 or self.n_bath < 1:
            raise ValueError("need at least one system and one bath spin")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    @property
    def coupling(self) -> float:
        return self.lambda_ if self.lambda_tilde is None else self.lambda_tilde

    def layout(self) -> TensorLayout:
        return TensorLayout.spins(self.n_system, self.n_bath)


@dataclass(frozen=True)
class TFIMParams:
    """Tilted-field Ising chain (open) coupled at its last spin to an
    anisotropic XY ring bath."""

    n_system: int
    n_bath: int
    b_field: float = 0.5
    j_coupling: float = 0.5
    theta: float = np.pi / 2
    g: float = 0.5
    gamma: float = 1.0
    lambda_z: float = 1.0
    temperature: float = 10.0

    def __post_init__(self):
        if self.n_system < 1:
            raise ValueError("need at least one system spin")
        if self.n_bath < 2:
            raise ValueError("ring bath needs at least two spins")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    def layout(self) -> TensorLayout:
        return TensorLayout.spins(self.n_system, self.n_bath)


@dataclass(frozen=True)
class LMGClosedParams:
    """Closed LMG model: all-to-all XY couplings with anisotropy gamma."""

    n_spins: int
    lambda_: float = 1.0
    gamma: float = 1.0
    omega_c: float = 0.5

    def __post_init__(self):
        if self.n_spins < 2:
            raise ValueError("need at least two spins")

    def layout(self) -> TensorLayout:
        return TensorLayout.spins(self.n_spins)


def build_ising_chain(p: IsingLMGParams, layout: TensorLayout) -> np.ndarray:
    """omega * sum_j sz_j + J * sum_j sz_j sz_{j+1} on the system sites."""
    if layout.n_system != p.n_system:
        raise ValueError("layout system size does not match params")
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for j in range(p.n_system):
        h += p.omega * pauli_at(layout, j, "z")
    for j in range(p.n_system - 1):
        h += p.j_coupling * (pauli_at(layout, j, "z") @ pauli_at(layout, j + 1, "z"))
    return h


def build_lmg_bath(p: IsingLMGParams, layout: TensorLayout) -> np.ndarray:
    """Isotropic LMG bath from the pairwise sum:
    (lambda/N) sum_{i<j} (sx_i sx_j + sy_i sy_j) + omega_c sum_i sz_i."""
    if layout.n_bath != p.n_bath:
        raise ValueError("layout bath size does not match params")
    bath = layout.bath_sites
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for a in range(len(bath)):
        for b in range(a + 1, len(bath)):
            for axis in ("x", "y"):
                h += (p.lambda_ / p.n_bath) * (
                    pauli_at(layout, bath[a], axis) @ pauli_at(layout, bath[b], axis)
                )
    for s in bath:
        h += p.omega_c * pauli_at(layout, s, "z")
    return h


def build_lmg_coupling(p: IsingLMGParams, layout: TensorLayout) -> np.ndarray:
    """(coupling/sqrt(N)) sum_{j in system} (sx_j Jx + sy_j Jy) with J the
    collective bath angular momentum."""
    if layout.n_system != p.n_system or layout.n_bath != p.n_bath:
        raise ValueError("layout does not match params")
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    pref = p.coupling / np.sqrt(p.n_bath)
    for axis in ("x", "y"):
        j_op = collective_j(layout, layout.bath_sites, axis)
        for s in layout.system_sites:
            h += pref * (pauli_at(layout, s, axis) @ j_op)
    return h


def build_tfim(p: TFIMParams, layout: TensorLayout) -> np.ndarray:
    """B * sum_i (sin(theta) sx_i + cos(theta) sz_i) + J * sum sz_i sz_{i+1},
    open chain on the system sites."""
    if layout.n_system != p.n_system:
        raise ValueError("layout system size does not match params")
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for i in range(p.n_system):
        h += p.b_field * (
            np.sin(p.theta) * pauli_at(layout, i, "x")
            + np.cos(p.theta) * pauli_at(layout, i, "z")
        )
    for i in range(p.n_system - 1):
        h += p.j_coupling * (pauli_at(layout, i, "z") @ pauli_at(layout, i + 1, "z"))
    return h


def build_aniso_bath(p: TFIMParams, layout: TensorLayout) -> np.ndarray:
    """Anisotropic XY ring: sum_l [(1+gamma)/2 sx_l sx_{l+1}
    + (1-gamma)/2 sy_l sy_{l+1} + lambda_z sz_l], site M+1 = site 1.

    For M = 2 both ring bonds coincide and are both summed, doubling the
    bond strength; tests at M = 2 account for this.
    """
    if layout.n_bath != p.n_bath:
        raise ValueError("layout bath size does not match params")
    bath = layout.bath_sites
    m = len(bath)
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for l in range(m):
        nxt = bath[(l + 1) % m]
        h += 0.5 * (1 + p.gamma) * (pauli_at(layout, bath[l], "x") @ pauli_at(layout, nxt, "x"))
        h += 0.5 * (1 - p.gamma) * (pauli_at(layout, bath[l], "y") @ pauli_at(layout, nxt, "y"))
        h += p.lambda_z * pauli_at(layout, bath[l], "z")
    return h


def build_edge_coupling(p: TFIMParams, layout: TensorLayout) -> np.ndarray:
    """g * (sx_last sum_l sx_l + sy_last sum_l sy_l): only the last system
    spin touches the bath."""
    if layout.n_system != p.n_system or layout.n_bath != p.n_bath:
        raise ValueError("layout does not match params")
    last = p.n_system - 1
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for axis in ("x", "y"):
        bath_sum = sum(pauli_at(layout, s, axis) for s in layout.bath_sites)
        h += p.g * (pauli_at(layout, last, axis) @ bath_sum)
    return h


def build_lmg_closed(p: LMGClosedParams) -> np.ndarray:
    """(lambda/N) sum_{i<j} (sx_i sx_j + gamma sy_i sy_j) + omega_c sum sz_i."""
    layout = p.layout()
    n = p.n_spins
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for a in range(n):
        for b in range(a + 1, n):
            h += (p.lambda_ / n) * (pauli_at(layout, a, "x") @ pauli_at(layout, b, "x"))
            h += (p.lambda_ / n) * p.gamma * (
                pauli_at(layout, a, "y") @ pauli_at(layout, b, "y")
            )
    for a in range(n):
        h += p.omega_c * pauli_at(layout, a, "z")
    return h


@dataclass(frozen=True)
class CollectiveBlock:
    """One total-spin sector of the LMG bath: ladder-basis operators on the
    (2j+1)-dimensional space, with its degeneracy in the full 2^N space."""

    j2: int  # twice the total spin, so half-integers stay exact
    multiplicity: int
    h_block: np.ndarray  # bath Hamiltonian restricted to this sector
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def j(self) -> float:
        return self.j2 / 2

    @property
    def dim(self) -> int:
        return self.j2 + 1


def block_multiplicity(n: int, j2: int) -> int:
    """Degeneracy of the total-spin-j sector of n spin-1/2s (j2 = 2j)."""
    k = (n - j2) // 2
    second = comb(n, k - 1) if k >= 1 else 0
    return comb(n, k) - second


def ladder_operators(j2: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jx, Jy, Jz on the |j, m> ladder basis, m descending from j to -j."""
    j = j2 / 2
    m = j - np.arange(j2 + 1)
    jz = np.diag(m).astype(np.complex128)
    # J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
    raise_elems = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jp = np.zeros((j2 + 1, j2 + 1), dtype=np.complex128)
    jp[np.arange(j2), np.arange(1, j2 + 1)] = raise_elems
    jm = jp.conj().T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    return jx, jy, jz


def collective_blocks(n_bath: int, p: IsingLMGParams) -> list[CollectiveBlock]:
    """Total-spin decomposition of the LMG bath.

    The bath Hamiltonian is a polynomial in the collective operators,
    (2 lambda / N)(J^2 - Jz^2) - lambda + 2 omega_c Jz, so it is block
    diagonal over the sectors; each block carries the standard
    angular-momentum degeneracy.
    """
    if n_bath < 1:
        raise ValueError("need at least one bath spin")
    blocks = []
    for j2 in range(n_bath % 2, n_bath + 1, 2):
        jx, jy, jz = ladder_operators(j2)
        j = j2 / 2
        eye = np.eye(j2 + 1, dtype=np.complex128)
        h = (
            (2 * p.lambda_ / n_bath) * (j * (j + 1) * eye - jz @ jz)
            - p.lambda_ * eye
            + 2 * p.omega_c * jz
        )
        blocks.append(
            CollectiveBlock(
                j2=j2,
                multiplicity=block_multiplicity(n_bath, j2),
                h_block=h,
                jx=jx,
                jy=jy,
                jz=jz,
            )
        )
    return blocks
