"""Smoke test of the pyorbent extension. Run after `pip install --no-build-isolation crates/py`."""

import math

import numpy as np

import pyorbent


def density(vector):
    re, im = vector
    psi = np.array(re) + 1j * np.array(im)
    return np.outer(psi, psi.conj())


def main():
    singlet = density(pyorbent.basis_vector(7))
    result = pyorbent.formula(singlet.real.tolist(), singlet.imag.tolist())
    assert abs(result["value"] - math.log(2)) < 1e-12, result
    assert result["variant"] == "NSSR-singlet"

    p = [1 / 16] * 16
    assert pyorbent.oracle(p) == 0.0
    assert pyorbent.formula_from_weights(p, "PSSR-general") == 0.0

    rho = np.eye(16) / 16
    rho[4, 8] = rho[8, 4] = 0.03
    try:
        pyorbent.formula(rho.tolist())
    except pyorbent.InsufficientSymmetry:
        pass
    else:
        raise AssertionError("spin-asymmetric state accepted")

    assert abs(pyorbent.two_site_entanglement(0.5, 1) - 0.045549554082) < 1e-11
    assert pyorbent.two_site_entanglement(0.5, 2) == 0.0
    assert pyorbent.disentangling_distance(0.5)["l_min"] == 2

    d = pyorbent.dimer(0.0)
    assert abs(d["e_nssr"] - 0.5 * math.log(2)) < 1e-10

    rows = pyorbent.bond_scan(6, 6.0, [2.5, 3.0], pivot=3)
    assert [r["v"] for r in rows] == [2.5, 3.0]

    print(f"pyorbent {pyorbent.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
