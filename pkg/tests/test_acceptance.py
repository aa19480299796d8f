"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single PASS/FAIL line
so the whole gate can be read off a verbose run.  Tolerances are stated
inline next to each assertion.
"""

import time
from math import pi
from pathlib import Path

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
from spinotoc.cli import EXIT_OK, main
from spinotoc.config import parse_config
from spinotoc.dynamics import FORWARD, ReducedDynamics
from spinotoc.fastpath import BlockedDynamics
from spinotoc.linalg import (
    PAULI,
    TensorLayout,
    haar_unitary,
    pauli_at,
    thermal_state,
)
from spinotoc.models import (
    IsingLMGParams,
    LMGClosedParams,
    build_ising_chain,
    build_lmg_bath,
    build_lmg_closed,
    build_lmg_coupling,
)
from spinotoc.otoc import (
    commutator_square_closed,
    fotoc_closed,
    fotoc_open,
    fotoc_open_multi,
    fotoc_protocol_closed,
    fotoc_protocol_open,
    onset_time,
    recurrence_report,
)
from spinotoc.scenarios import run_scenario, tilted_product_state

from conftest import random_density, random_hermitian


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance {num:02d}] {name}: {status}{suffix}")
    assert ok, f"criterion {num} failed: {name}{suffix}"


def open_dynamics(p: IsingLMGParams) -> ReducedDynamics:
    lay = p.layout()
    bath_only = TensorLayout(dims=(2,) * p.n_bath, n_system=0)
    rho_bath = thermal_state(build_lmg_bath(p, bath_only), p.temperature)
    return ReducedDynamics(
        build_ising_chain(p, lay),
        build_lmg_bath(p, lay),
        build_lmg_coupling(p, lay),
        lay,
        rho_bath,
    )


def test_01_analytic_closed_otoc():
    start = time.perf_counter()
    omega = 1.0
    times = np.linspace(0, 2 * pi, 200)
    s = fotoc_closed(omega * PAULI["z"], PAULI["x"], PAULI["x"], np.eye(2) / 2, times)
    err = float(np.max(np.abs(s.values - np.cos(4 * omega * times))))
    elapsed = time.perf_counter() - start
    report(1, "analytic closed OTOC cos(4wt)", err < 1e-10 and elapsed < 1.0,
           f"err={err:.2e}, {elapsed:.2f}s")


def test_02_protocol_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(20):
        n_sys = int(rng.integers(1, 3))
        n_bath = int(rng.integers(1, 3))
        d = 2**n_sys
        a = haar_unitary(d, rng)
        b = haar_unitary(d, rng)
        rho = random_density(d, rng)
        times = rng.uniform(0.1, 3.0, size=4)

        h = random_hermitian(d, rng)
        closed_direct = fotoc_closed(h, a, b, rho, times)
        closed_proto = fotoc_protocol_closed(h, a, b, rho, times)
        worst = max(worst, float(np.max(np.abs(closed_direct.values - closed_proto.values))))

        p = IsingLMGParams(
            n_system=n_sys,
            n_bath=n_bath,
            omega=float(rng.uniform(0.5, 3)),
            lambda_=float(rng.uniform(0.2, 1.5)),
            omega_c=float(rng.uniform(0.5, 5)),
            temperature=float(rng.uniform(1, 20)),
        )
        dyn = open_dynamics(p)
        open_direct = fotoc_open(dyn, a, b, rho, times)
        open_proto = fotoc_protocol_open(dyn, a, b, rho, times)
        worst = max(worst, float(np.max(np.abs(open_direct.values - open_proto.values))))
    elapsed = time.perf_counter() - start
    report(2, "interferometric protocols match trace formulas", worst < 1e-10 and elapsed < 30,
           f"err={worst:.2e}, {elapsed:.1f}s")


def test_03_commutator_fotoc_identity():
    rng = np.random.default_rng(303)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 3))
        d = 2**n
        h = random_hermitian(d, rng)
        a = haar_unitary(d, rng)
        b = haar_unitary(d, rng)
        rho = random_density(d, rng)
        times = rng.uniform(0.0, 3.0, size=5)
        c = commutator_square_closed(h, a, b, rho, times)
        f = fotoc_closed(h, a, b, rho, times)
        worst = max(worst, float(np.max(np.abs(c.values - (1 - f.values)))))
    report(3, "C(t) = 1 - Re F(t) for unitary probes", worst < 1e-10, f"err={worst:.2e}")


def test_04_swap_algebra():
    worst = 0.0
    for da, db in ((2, 2), (2, 4), (4, 2)):
        p = Bipartition(da, db)
        sw = build_swaps(p)
        eye = np.eye(p.d**2)
        for s in (sw.s_full, sw.s_aa, sw.s_bb):
            worst = max(worst, float(np.max(np.abs(s @ s - eye))))
        worst = max(worst, float(np.max(np.abs(sw.s_aa @ sw.s_bb - sw.s_full))))
    report(4, "swap operator algebra", worst <= 1e-12, f"err={worst:.2e}")


def test_05_closed_bipartite_closed_forms():
    rng = np.random.default_rng(505)
    p = Bipartition(2, 2)
    swap_gate = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )
    errs = [
        abs(bipartite_otoc_closed(np.eye(4, dtype=complex), p) - 0.0),
        abs(bipartite_otoc_closed(swap_gate, p) - 0.75),
        abs(bipartite_otoc_closed(np.kron(haar_unitary(2, rng), haar_unitary(2, rng)), p)),
    ]
    worst = max(errs)
    report(5, "closed bipartite OTOC closed forms", worst < 1e-10, f"err={worst:.2e}")


def test_06_open_closed_consistency():
    from spinotoc.dynamics import channel_superoperator

    rng = np.random.default_rng(606)
    p = Bipartition(2, 2)
    worst = 0.0
    for _ in range(5):
        u = haar_unitary(4, rng)
        rep = channel_superoperator(lambda x: u.conj().T @ x @ u, 4)
        worst = max(worst, abs(bipartite_otoc_open(rep, p) - bipartite_otoc_closed(u, p)))
    report(6, "open formula reduces to closed on unitary channels", worst < 1e-9,
           f"err={worst:.2e}")


def test_07_haar_monte_carlo_oracle():
    start = time.perf_counter()
    p = IsingLMGParams(n_system=2, n_bath=2, lambda_=1.0)
    dyn = open_dynamics(p)
    part = Bipartition(2, 2)
    worst_z = 0.0
    for k, t in enumerate((0.5, 1.0, 2.0)):
        exact = bipartite_otoc_open(dyn.superoperator(t, "adjoint", FORWARD), part)
        applier = lambda op: dyn.adjoint_applier(op, FORWARD)(t)
        mean, stderr = bipartite_otoc_haar_mc(applier, part, samples=2000, rng=700 + k)
        worst_z = max(worst_z, abs(mean - exact) / max(stderr, 1e-12))
    elapsed = time.perf_counter() - start
    report(7, "Monte Carlo Haar average within 3 stderr", worst_z < 3 and elapsed < 120,
           f"z={worst_z:.2f}, {elapsed:.1f}s")


def test_08_haar_identity():
    worst_ratio = 0.0
    for dim in (2, 4):
        err = haar_identity_check(dim, 2000, np.random.default_rng(808 + dim))
        worst_ratio = max(worst_ratio, err / (5 / np.sqrt(2000)))
    report(8, "sampled mean of U x Udag approximates S/d", worst_ratio < 1,
           f"ratio={worst_ratio:.2f}")


def test_09_coupling_accelerates_scrambling():
    start = time.perf_counter()
    times = np.linspace(0, 5, 100)
    averages = {}
    for lam in (0.5, 1.0):
        p = IsingLMGParams(
            n_system=4, n_bath=5, j_coupling=0.5, omega=2.0,
            lambda_=lam, omega_c=4.0, temperature=10.0,
        )
        dyn = open_dynamics(p)
        lay_s = TensorLayout.spins(4)
        ops = {f"site{j+1}": pauli_at(lay_s, j, "z") for j in range(4)}
        b = pauli_at(lay_s, 0, "z")
        series = fotoc_open_multi(dyn, ops, b, tilted_product_state(4), times)
        averages[lam] = {s.label: float(np.mean(s.values)) for s in series}
    ok = all(averages[1.0][k] < averages[0.5][k] for k in averages[0.5])
    elapsed = time.perf_counter() - start
    report(9, "stronger bath coupling lowers time-averaged F at every site",
           ok and elapsed < 600, f"{elapsed:.0f}s")


def test_10_sluggish_bath_suppresses_scrambling():
    times = np.linspace(0, 5, 100)
    minima = {}
    for omega_c in (2.0, 20.0):
        p = IsingLMGParams(
            n_system=2, n_bath=10, lambda_=1.0, omega_c=omega_c, temperature=10.0
        )
        dyn = BlockedDynamics(p)
        lay_s = TensorLayout.spins(2)
        s = fotoc_open(
            dyn, pauli_at(lay_s, 1, "z"), pauli_at(lay_s, 0, "z"),
            tilted_product_state(2), times,
        )
        minima[omega_c] = float(np.min(s.values))
    report(10, "fast bath keeps F high (sluggish-bath suppression)",
           minima[20.0] > minima[2.0], f"min@20={minima[20.0]:.3f}, min@2={minima[2.0]:.3f}")


@pytest.mark.parametrize("theta", [pi / 2, pi / 8], ids=["integrable", "tilted"])
def test_11_tfim_light_cone(theta):
    start = time.perf_counter()
    cfg = parse_config(
        f"""
scenario: tfim-lightcone
model: {{theta: {theta}}}
time: {{t_max: 4.0, steps: 64}}
"""
    )
    result = run_scenario(cfg)
    onsets = [
        onset_time(s, cfg.threshold) if not np.isnan(onset_time(s, cfg.threshold)) else np.inf
        for s in result.series
    ]
    ok = all(b >= a for a, b in zip(onsets, onsets[1:]))
    elapsed = time.perf_counter() - start
    report(11, f"light-cone onsets nondecreasing (theta={theta:.3f})",
           ok and elapsed < 600, f"onsets={['%.2f' % o for o in onsets]}, {elapsed:.0f}s")


def test_12_lmg_phase_diagnostics():
    lay = TensorLayout.spins(6)
    b = pauli_at(lay, 0, "z")
    a = pauli_at(lay, 1, "z")
    rho = tilted_product_state(6)

    details = []
    ok = True
    for omega_c in (0.5, 1.5):
        h = build_lmg_closed(LMGClosedParams(n_spins=6, lambda_=1.0, gamma=1.0, omega_c=omega_c))
        rep = recurrence_report(h, a, b, rho)
        ok &= rep["recurrence_max"] >= 1 - 1e-3
        details.append(f"g1/wc{omega_c}: rec={rep['recurrence_max']:.6f}")

    h0 = build_lmg_closed(LMGClosedParams(n_spins=6, lambda_=1.0, gamma=0.0, omega_c=0.5))
    rep0 = recurrence_report(h0, a, b, rho)
    ok &= rep0["recurrence_max"] < 0.99 and rep0["min_f"] < 0.9
    details.append(f"g0: rec={rep0['recurrence_max']:.3f}, min={rep0['min_f']:.3f}")
    report(12, "isotropic phase recurs, anisotropic decays irregularly", ok, "; ".join(details))


def test_13_closed_lmg_site_independence():
    lay = TensorLayout.spins(6)
    h = build_lmg_closed(LMGClosedParams(n_spins=6))
    b = pauli_at(lay, 0, "z")
    rho = tilted_product_state(6)
    times = np.linspace(0, 10, 150)
    series = [
        fotoc_closed(h, pauli_at(lay, j, "z"), b, rho, times) for j in range(1, 6)
    ]
    worst = max(
        float(np.max(np.abs(s.values - series[0].values))) for s in series[1:]
    )
    report(13, "closed LMG F independent of operator separation", worst < 1e-9,
           f"err={worst:.2e}")


def test_14_fast_path_equivalence():
    p = IsingLMGParams(n_system=2, n_bath=6, lambda_=0.9, omega_c=2.5, temperature=4.0)
    dense = open_dynamics(p)
    fast = BlockedDynamics(p)
    lay_s = TensorLayout.spins(2)
    a = pauli_at(lay_s, 1, "z")
    b = pauli_at(lay_s, 0, "z")
    rho = tilted_product_state(2)
    times = np.linspace(0, 4, 9)
    f_err = float(
        np.max(np.abs(fotoc_open(dense, a, b, rho, times).values
                      - fotoc_open(fast, a, b, rho, times).values))
    )
    part = Bipartition(2, 2)
    g_err = max(
        abs(bipartite_otoc_open(dense.superoperator(t, "adjoint", FORWARD), part)
            - bipartite_otoc_open(fast.superoperator(t, "adjoint", FORWARD), part))
        for t in (0.5, 1.5, 3.0)
    )
    worst = max(f_err, g_err)
    report(14, "collective-block fast path matches dense pipeline", worst < 1e-8,
           f"err={worst:.2e}")


def test_15_determinism(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(
        "scenario: compare-two-spin\n"
        "model: {n_system: 2, n_bath: 2}\n"
        "time: {t_max: 2.0, steps: 5}\n"
        "samples: 200\n"
    )
    blobs = []
    for threads, name in ((1, "a"), (4, "b"), (1, "c")):
        out = tmp_path / name
        code = main(
            ["--config", str(cfg), "--output", str(out), "--threads", str(threads), "--no-plots"]
        )
        assert code == EXIT_OK
        blobs.append((out / "series.csv").read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2]
    report(15, "byte-identical CSV across repeats and thread counts", ok)
