"""Smoke test of the husimi extension module; run after `maturin develop`."""

import math

import husimi


def close(a, b, tol=1e-10):
    assert abs(a - b) <= tol, (a, b)


def main():
    close(husimi.second_moment(husimi.ghz(8))["value"], 0.5 + 2.0**-8)
    close(husimi.second_moment(husimi.w_state(5), method="projector")["value"], 0.6)
    close(husimi.second_moment(husimi.bell_pairs(2), method="quadrature")["value"], 0.75**2)

    mc = husimi.second_moment(husimi.bell(), method="montecarlo", samples=200_000, seed=3)
    assert abs(mc["value"] - 0.75) < 4 * mc["stderr"], mc

    g3 = husimi.ghz(3)
    close(husimi.multipartite_concurrence(g3), math.sqrt(1.5))
    close(husimi.three_tangle(g3), 1.0)
    close(husimi.concurrence_pair(husimi.w_state(3), 0, 2), 2.0 / 3.0)
    close(husimi.concurrence_two_spin(husimi.bell()), 1.0)
    close(husimi.subsystem_purity(g3, [0]), 0.5)

    up = husimi.coherent_state([(0.0, 0.0), (0.0, 0.0)])
    close(husimi.husimi(up, [(math.pi / 2, 0.0), (0.0, 0.0)]), 0.5)

    state = husimi.PureState(1, [1 + 0j, 1j], normalize=True)
    assert state.n_spins == 1 and len(state) == 2
    try:
        husimi.PureState(1, [1 + 0j, 1 + 0j])
    except ValueError:
        pass
    else:
        raise AssertionError("unnormalized state accepted")

    energy, gs, gap, degenerate = husimi.ising_ground_state(8, 0.5, 0.0)
    close(abs(gs.amplitudes[0]), 1.0)
    assert not degenerate and gap > 0

    rows = husimi.ising_sweep(6, [0.5, 1.0, 2.0], [0.0, math.pi / 2])
    assert len(rows) == 6 and rows[0]["theta"] == 0.0 and rows[-1]["g"] == 2.0
    assert all(abs(r["P"] - 1.0) < 1e-10 for r in rows[:3])
    print("python smoke test passed")


if __name__ == "__main__":
    main()
