"""Smoke test for the `symtest` Python extension.

Build and install with `pip install --no-build-isolation -e crates/symtest-py`,
then run `python python/smoke_test.py`.
"""

import math

import symtest


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    z2 = symtest.GroupRep("z2")
    assert z2.order == 2 and z2.system_qubits == 1
    proj = z2.projector()
    assert close(proj[0][0].real, 1.0, 1e-12) and close(abs(proj[1][1]), 0.0, 1e-12)

    plus = symtest.DensityMatrix.pure([1, 1])
    assert close(symtest.bose_acceptance(z2, plus), 0.5, 1e-12)
    assert close(plus.purity(), 1.0, 1e-12)
    mixed = symtest.DensityMatrix.maximally_mixed(2)
    assert close(plus.fidelity(mixed), 0.5, 1e-12)

    d3 = symtest.GroupRep("d3")
    phi = symtest.DensityMatrix.preset("phi_plus")
    assert close(symtest.bose_acceptance(d3, phi), 2 / 3, 1e-9)

    spec = symtest.TestSpec("sym", d3, phi)
    exact = symtest.optimal_acceptance(spec)
    trace = symtest.train(spec, layers=2, seed=3, max_iterations=150, restarts=2)
    assert trace.final_objective <= exact + 1e-6
    assert trace.to_csv().startswith("iteration,objective,best\n")
    again = symtest.train(spec, layers=2, seed=3, max_iterations=150, restarts=2)
    assert again.objectives == trace.objectives

    product = [math.sqrt(0.5), math.sqrt(0.5), 0, 0]
    assert close(symtest.pure_separability_acceptance(product, 1, 2), 1.0, 1e-12)

    names = {s["name"] for s in symtest.suites()}
    assert "dihedral_gbs" in names
    assert "phi_plus" in symtest.state_presets()

    try:
        symtest.GroupRep("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown group accepted")

    print(f"ok: sym(d3, phi_plus) exact={exact:.6f} trained={trace.final_objective:.6f}")


if __name__ == "__main__":
    main()
