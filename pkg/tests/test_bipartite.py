import numpy as np
import pytest

from spinotoc.bipartite import (
    Bipartition,
    bipartite_otoc_closed,
    bipartite_otoc_haar_mc,
    bipartite_otoc_open,
    build_swaps,
    haar_identity_check,
)
from spinotoc.dynamics import FORWARD, channel_superoperator
from spinotoc.linalg import PAULI, haar_unitary, propagator

from conftest import random_hermitian

SWAP_GATE = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def unitary_rep(u):
    return channel_superoperator(lambda x: u.conj().T @ x @ u, u.shape[0])


class TestSwapOps:
    @pytest.mark.parametrize("da,db", [(2, 2), (2, 4), (4, 2)])
    def test_involutions(self, da, db):
        p = Bipartition(da, db)
        sw = build_swaps(p)
        eye = np.eye(p.d**2)
        for s in (sw.s_full, sw.s_aa, sw.s_bb):
            assert np.array_equal(s @ s, eye)
            assert np.array_equal(s, s.conj().T)

    @pytest.mark.parametrize("da,db", [(2, 2), (2, 4), (4, 2)])
    def test_traces(self, da, db):
        p = Bipartition(da, db)
        sw = build_swaps(p)
        assert np.trace(sw.s_full).real == p.d
        assert np.trace(sw.s_aa).real == da * db**2
        assert np.trace(sw.s_bb).real == da**2 * db

    def test_factorization(self):
        p = Bipartition(2, 4)
        sw = build_swaps(p)
        assert np.array_equal(sw.s_aa @ sw.s_bb, sw.s_full)

    def test_swaps_vectors(self, rng):
        p = Bipartition(2, 3)
        sw = build_swaps(p)
        x = rng.standard_normal(p.d) + 1j * rng.standard_normal(p.d)
        y = rng.standard_normal(p.d) + 1j * rng.standard_normal(p.d)
        assert np.max(np.abs(sw.s_full @ np.kron(x, y) - np.kron(y, x))) < 1e-12

    def test_aa_swap_action(self, rng):
        # S_AA' exchanges only the A factors: |a b a' b'> -> |a' b a b'>
        p = Bipartition(2, 2)
        sw = build_swaps(p)
        vecs = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(4)]
        a, b, ap, bp = vecs
        inp = np.kron(np.kron(np.kron(a, b), ap), bp)
        out = np.kron(np.kron(np.kron(ap, b), a), bp)
        assert np.max(np.abs(sw.s_aa @ inp - out)) < 1e-12

    def test_rejects_trivial_partition(self):
        with pytest.raises(ValueError):
            Bipartition(1, 4)


class TestClosedBipartite:
    def test_identity_unitary(self):
        p = Bipartition(2, 2)
        assert bipartite_otoc_closed(np.eye(4, dtype=complex), p) == 0.0

    def test_local_unitaries_do_not_scramble(self, rng):
        p = Bipartition(2, 2)
        u = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
        assert bipartite_otoc_closed(u, p) < 1e-12

    def test_swap_gate(self):
        # full exchange of two qubits scrambles maximally for d_A = d_B = 2
        p = Bipartition(2, 2)
        assert abs(bipartite_otoc_closed(SWAP_GATE, p) - 0.75) < 1e-12

    def test_local_conjugation_invariance(self, rng):
        p = Bipartition(2, 2)
        u = propagator(random_hermitian(4, rng), 0.7)
        va = np.kron(haar_unitary(2, rng), np.eye(2))
        vb = np.kron(np.eye(2), haar_unitary(2, rng))
        base = bipartite_otoc_closed(u, p)
        dressed = bipartite_otoc_closed(vb @ u @ va, p)
        assert abs(base - dressed) < 1e-10

    def test_range(self, rng):
        p = Bipartition(2, 4)
        for _ in range(5):
            g = bipartite_otoc_closed(haar_unitary(8, rng), p)
            assert 0.0 <= g <= 1.0

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            bipartite_otoc_closed(np.ones((4, 4), dtype=complex), Bipartition(2, 2))

    def test_rejects_wrong_dimension(self):
        with pytest.raises(ValueError):
            bipartite_otoc_closed(np.eye(4, dtype=complex), Bipartition(2, 4))


class TestOpenBipartite:
    @pytest.mark.parametrize("da,db", [(2, 2), (2, 4)])
    def test_matches_closed_for_unitary_channel(self, rng, da, db):
        p = Bipartition(da, db)
        for _ in range(3):
            u = haar_unitary(p.d, rng)
            closed = bipartite_otoc_closed(u, p)
            open_ = bipartite_otoc_open(unitary_rep(u), p)
            assert abs(closed - open_) < 1e-9

    def test_identity_channel(self):
        p = Bipartition(2, 2)
        rep = channel_superoperator(lambda x: x, 4)
        assert abs(bipartite_otoc_open(rep, p)) < 1e-12

    def test_depolarizing_channel(self):
        # the fully depolarizing adjoint map sends A (x) I to Tr(A)/d I,
        # which commutes with everything
        p = Bipartition(2, 2)
        rep = channel_superoperator(lambda x: np.trace(x) * np.eye(4) / 4, 4)
        assert abs(bipartite_otoc_open(rep, p)) < 1e-12

    def test_rejects_wrong_dimension(self):
        rep = channel_superoperator(lambda x: x, 4)
        with pytest.raises(ValueError):
            bipartite_otoc_open(rep, Bipartition(2, 4))


class TestHaarMonteCarlo:
    def test_matches_closed_form_unitary(self, rng):
        p = Bipartition(2, 2)
        u = haar_unitary(4, rng)
        exact = bipartite_otoc_closed(u, p)
        applier = lambda x: u.conj().T @ x @ u
        mean, stderr = bipartite_otoc_haar_mc(applier, p, samples=800, rng=7)
        assert abs(mean - exact) < 4 * max(stderr, 1e-4)

    def test_identity_gives_zero(self):
        p = Bipartition(2, 2)
        mean, stderr = bipartite_otoc_haar_mc(lambda x: x, p, samples=200, rng=1)
        assert abs(mean) < 1e-12
        assert stderr < 1e-12

    def test_deterministic_across_thread_counts(self):
        p = Bipartition(2, 2)
        u = haar_unitary(4, np.random.default_rng(2))
        applier = lambda x: u.conj().T @ x @ u
        r1 = bipartite_otoc_haar_mc(applier, p, samples=300, rng=42, threads=1)
        r4 = bipartite_otoc_haar_mc(applier, p, samples=300, rng=42, threads=4)
        assert r1 == r4

    def test_seed_sequence_accepted(self):
        p = Bipartition(2, 2)
        ss = np.random.SeedSequence(42)
        r_int = bipartite_otoc_haar_mc(lambda x: x, p, samples=200, rng=42)
        r_seq = bipartite_otoc_haar_mc(lambda x: x, p, samples=200, rng=ss)
        assert r_int == r_seq

    def test_rejects_few_samples(self):
        with pytest.raises(ValueError):
            bipartite_otoc_haar_mc(lambda x: x, Bipartition(2, 2), samples=10, rng=0)


class TestHaarIdentityCheck:
    @pytest.mark.parametrize("dim", [2, 4])
    def test_error_within_statistical_bound(self, dim):
        err = haar_identity_check(dim, 2000, np.random.default_rng(17))
        assert err < 5 / np.sqrt(2000)

    def test_deterministic(self):
        e1 = haar_identity_check(2, 200, np.random.default_rng(3))
        e2 = haar_identity_check(2, 200, np.random.default_rng(3))
        assert e1 == e2

    def test_rejects_few_samples(self):
        with pytest.raises(ValueError):
            haar_identity_check(2, 5, np.random.default_rng(0))
