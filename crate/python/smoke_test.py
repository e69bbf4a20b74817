"""Smoke test for the pyunispec extension module.

Build and run from the repository root:

    cargo build -p unispec-py --release --features extension-module
    cp target/release/libpyunispec.so python/pyunispec.so
    python3 python/smoke_test.py
"""

import cmath
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyunispec as us


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    u = us.Unitary([[1j, 0], [0, 1]])
    assert close(u.theta_plus(), math.pi / 2)
    assert close(u.theta_minus(), 0.0)
    assert close(us.dist(u), math.pi / 2)

    h = us.haar_unitary(4, 42)
    rows = h.to_list()
    assert len(rows) == 4 and len(rows[0]) == 4
    assert h.to_list() == us.haar_unitary(4, 42).to_list()
    gram = [[sum(rows[k][i].conjugate() * rows[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    assert all(close(gram[i][j], 1.0 if i == j else 0.0, 1e-10) for i in range(4) for j in range(4))

    x = h.log()
    back = us.expm(x).to_list()
    assert all(close(back[i][j], rows[i][j], 1e-8) for i in range(4) for j in range(4))
    assert close(x.norm(), us.dist(h), 1e-10)

    g = us.Generator.from_imag_diag([0.5, -0.25])
    assert close(g.phi_plus(), 0.5) and close(g.phi_minus(), -0.25)
    e = g.expm().to_list()
    assert close(e[0][0], cmath.exp(0.5j))

    a, b = us.make_equality_pair(4, 1, 0.6, 0.9, 7)
    report = us.check_product_bound(a, b)
    assert report["applicable"] and report["equality_plus"], report
    assert report["eigenspace_plus"]["lhs_dim"] == 1
    assert close((a @ b).theta_plus(), 1.5, 1e-9)

    big = us.Unitary.from_phases([2.0, 0.0])
    assert us.check_product_bound(big, big)["reason"]["kind"] == "hypothesis_failed"
    nfold = us.check_nfold_bound([us.random_bounded_unitary(3, 0.5, s) for s in range(4)])
    assert nfold["violations"] == []

    try:
        us.Unitary([[1.0, 1e-6], [0.0, 1.0]])
    except us.UnispecError as err:
        assert "tol_unitary" in str(err)
    else:
        raise AssertionError("drifted matrix accepted")
    try:
        us.make_equality_pair(4, 1, 2.0, 1.5, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("angles summing past pi accepted")

    suite = us.run_suite(seed=7, trials=5, dims=[2, 3], checks=["product", "curve", "gauss"])
    assert suite["total_failed"] == 0, suite["failures"]
    assert [c["check"] for c in suite["checks"]] == ["product", "curve", "gauss"]
    assert suite == us.run_suite(seed=7, trials=5, dims=[2, 3], checks=["product", "curve", "gauss"])

    print("pyunispec smoke test passed")


if __name__ == "__main__":
    main()
