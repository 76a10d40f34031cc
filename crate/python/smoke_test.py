"""Smoke test for the pyhypersmt extension module.

Build and install first, e.g. `pip install maturin && maturin develop -m crates/python/Cargo.toml`,
or copy target/release/libpyhypersmt.so to pyhypersmt.so somewhere on PYTHONPATH.
"""

import cmath
import math
import os
from fractions import Fraction

import pyhypersmt as h

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def main():
    conic = h.Variety(2, ["x0*x2 - x1^2"])
    assert [conic.hilbert_function(m) for m in range(5)] == [1, 3, 5, 7, 9]
    assert conic.dimension() == 1 and conic.degree() == 2
    assert conic.hilbert_weight(2, [1, 0, 0]) == 4

    p2 = h.Variety(2)
    verdict, witness = p2.check_position(["x0", "x1", "x0 + x1"], 2)
    assert verdict == "Fails" and witness == [1, 2, 3]
    _, chain = p2.construct_replacement(["x0", "x1", "x2", "x0 + x1 + x2"], seed=0)
    assert chain == ["1", "0", "EMPTY"]

    assert h.Variety(2, ["x0^2", "x1^2", "x2^2"]).certify_empty() == 4
    assert h.chow_weight("[1,2][0,1] - [0,2]^2", 2, [1, 0, 0]) == 2
    margin = conic.hilbert_chow_margin("[1,2][0,1] - [0,2]^2", 3, [1, 0, 0])
    assert isinstance(margin, Fraction) and margin >= 0

    f = h.Curve(["1", "z", "z^2"])
    assert f.lies_in(conic)
    for r in (2.0, 10.0):
        want = 0.5 * math.log((1 + r**2 + r**4) / 3)
        assert abs(f.characteristic(r) - want) < 1e-9
    rows = f.fmt_residual("x0 + x1 + x2", [2.0, 4.0, 8.0])
    residuals = [row[4] for row in rows]
    assert max(residuals) - min(residuals) < 1e-6

    zeros = h.zeros_in_disk("exp(z) - 1", 7.0)
    assert len(zeros) == 3
    for target in (0, 2j * math.pi, -2j * math.pi):
        assert min(abs(z - target) for z, _ in zeros) < 1e-8

    table = h.filtration_dims(2, 4, ["x0", "x1"])
    assert sum(table["quotients"]) == 15 and not table["violations"]

    assert h.truncation_projective(1, 1, 1, "1") == 42
    u, ratio = h.choose_u_projective(2, 1, 1, "1")
    assert u == 30 and ratio <= Fraction(1, 9)

    m0, rows = h.smt_margins(os.path.join(ROOT, "scenarios", "conic.cfg"), theorem="1.3")
    assert m0 > 0 and len(rows) == 10 and all(row[3] >= 0 for row in rows)

    assert h.run_criterion(11)[0]
    print("pyhypersmt", h.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
