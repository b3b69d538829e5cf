"""Smoke tests of the python module: a few known values per subsystem."""

import numpy as np
import pytest

try:
    import stq
except ImportError:
    import _stq as stq


def swap4():
    s = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            s[2 * i + j, 2 * j + i] = 1.0
    return s


def test_cj_identity_is_swap():
    cj = stq.cj_matrix(stq.identity_channel(2))
    assert np.allclose(cj.matrix, swap4(), atol=1e-15)


def test_closed_form_pdm_and_negativity():
    chain = [stq.cj_matrix(stq.identity_channel(2))]
    r = stq.build_closed_form(0.5 * np.eye(2, dtype=complex), chain)
    assert np.allclose(r.matrix, 0.5 * swap4(), atol=1e-14)
    assert r.negativity() == pytest.approx(1.0, abs=1e-12)
    assert r.slots == [("t1", 2), ("t2", 2)]
    assert np.allclose(r.marginal(["t1"]).matrix, 0.5 * np.eye(2), atol=1e-13)


def test_tomographic_oracle_agrees():
    rho = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]], dtype=complex)
    ch = stq.random_cptp(2, 2, 2, 123)
    closed = stq.build_closed_form(rho, [stq.cj_matrix(ch)])
    tomo = stq.build_tomographic(rho, [ch])
    assert np.max(np.abs(closed.matrix - tomo.matrix)) < 1e-10


def test_abl_rule():
    p0 = np.array([[1, 0], [0, 0]], dtype=complex)
    p1 = np.array([[0, 0], [0, 1]], dtype=complex)
    inst = stq.Instrument([stq.Channel(2, 2, [p0]), stq.Channel(2, 2, [p1])])
    ket0 = np.array([1, 0], dtype=complex)
    assert stq.abl_prob(ket0, ket0, inst, 0) == pytest.approx(1.0)
    assert stq.simple_conditional(0, 0, inst) == pytest.approx([1.0, 0.0])


def test_process_bridge_uniform_example():
    w = stq.ProcessMatrix(0.25 * np.eye(16, dtype=complex))
    proj = stq.Instrument(
        [stq.basis_projector_channel(0, 2), stq.basis_projector_channel(1, 2)]
    )
    born = stq.born_table(w, proj, proj)
    table = stq.process_to_pdm_table(w, proj, proj)
    assert np.allclose(born, 0.25, atol=1e-12)
    assert np.allclose(table, 0.25, atol=1e-10)

    ens = stq.process_to_twotime(w)
    assert len(ens.members) == 16
    assert np.allclose(stq.gram_matrix(ens), w.matrix, atol=1e-12)


def test_bridge_statistics_on_random_causal_process():
    w = stq.random_causal_process(7)
    assert stq.validate_process(w, n_samples=16, seed=3)["valid"]
    ia = stq.random_instrument(2, 2, 11, 2)
    ib = stq.random_instrument(2, 2, 13)
    born = stq.born_table(w, ia, ib)
    table = stq.process_to_pdm_table(w, ia, ib)
    assert np.max(np.abs(born - table)) < 1e-8


def test_switch_scan_pattern():
    rows = stq.negativity_scan(steps=3)
    assert rows.shape == (9, 6)
    by_point = {(round(r[0], 6), round(r[1], 6)): r for r in rows}
    # definite control: all negativities vanish
    assert by_point[(0.5, 0.0)][2] <= 1e-9
    assert by_point[(0.5, 1.0)][2] <= 1e-9
    # superposed control activates the three-slot negativity only
    mid = by_point[(0.5, 0.5)]
    assert mid[2] > 1e-6
    assert max(mid[3], mid[4], mid[5]) <= 1e-9


def test_verify_suites():
    for suite in stq.verify("all", trials=10, seed=5):
        assert suite["max_deviation"] <= 1e-10, suite
