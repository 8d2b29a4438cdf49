#!/usr/bin/env python3
"""Smoke test for the polycoh_py extension module.

Locates the built cdylib under target/{debug,release}, imports it, and
checks a handful of known values across the exposed API.
"""

import importlib.util
import json
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    names = ["libpolycoh_py.so", "polycoh_py.so", "libpolycoh_py.dylib", "polycoh_py.pyd"]
    for profile in ("debug", "release"):
        for name in names:
            cand = ROOT / "target" / profile / name
            if cand.exists():
                spec = importlib.util.spec_from_file_location("polycoh_py", cand)
                mod = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(mod)
                return mod
    sys.exit("polycoh_py cdylib not found; run `cargo build -p polycoh-python` first")


def main():
    m = load_module()

    # Polynomial parsing, evaluation, arithmetic.
    q = m.Polynomial("p=3 n=2 d=2\nx0*x1 + x0^2")
    assert q.p == 3 and q.nvars == 2 and q.degree == 2
    assert q.is_homogeneous()
    assert q.eval([1, 2]) == (1 * 2 + 1) % 3
    assert q.eval([2, 2]) == (2 * 2 + 4) % 3
    lin = m.Polynomial("p=3 n=2 d=1\nx0 + 2*x1")
    assert q.add(lin).eval([1, 1]) == (2 + 1 + 2) % 3
    assert q.sub(q).eval([2, 1]) == 0
    assert str(m.Polynomial(str(q))) == str(q)

    # Shift/delta: delta of a quadratic is affine of degree <= 1.
    d = q.delta([1, 0])
    assert d.degree <= 1

    # Rank bracket: x0*x1 has Schmidt rank exactly 1.
    xy = m.Polynomial("p=3 n=2 d=2\nx0*x1")
    lo, hi = m.rank_bracket(xy)
    assert lo == 1 and hi == 1, (lo, hi)
    lo, hi = m.rank_bracket(q)
    assert lo == 1 and hi == 1, (lo, hi)

    # Gowers norms: a linear phase has U^2 norm exactly 1; the bilinear
    # phase x0*x1 over F_2 has U^2 norm (16/64)^(1/4) = 2^(-1/2).
    g = m.gowers(lin, 2)
    assert abs(g["value"] - 1.0) < 1e-12, g
    bil = m.Polynomial("p=2 n=2 d=2\nx0*x1")
    g2 = m.gowers(bil, 2, algorithm="naive")
    g3 = m.gowers(bil, 2, algorithm="derivative")
    assert g2["counts"] == g3["counts"] == [40, 24], (g2, g3)
    assert abs(g2["value"] - 2 ** -0.5) < 1e-12

    # Nonclassical degree: identity table F_2 -> Z/4 has degree 2.
    assert m.delta_degree(2, 1, 2, [0, 1]) == 2
    # A genuinely linear table F_2 -> Z/2 has degree 1.
    assert m.delta_degree(2, 1, 1, [0, 1]) == 1

    # Cochains: a 1-cochain with 2P summing to zero mod 2 is a cocycle.
    cochain_json = json.dumps(
        {
            "p": 2,
            "s": 1,
            "degree": 1,
            "action": "trivial",
            "nvars": 1,
            "values": {"0": "p=2 n=1 d=0\n0", "1": "p=2 n=1 d=2\nx0^2"},
        }
    )
    c = m.CochainMap(cochain_json)
    assert c.degree == 1
    assert len(c.values()) == 2
    dc = c.coboundary()
    assert all(v.sub(v).eval([0]) == 0 for v in dc.values())
    lo, hi = c.defect()
    assert (lo, hi) == (0, 0), (lo, hi)
    assert m.CochainMap(c.to_json()).to_json() == c.to_json()

    # Correction of an exact cocycle reaches distance 0.
    images, dist = c.correct(degree=2)
    assert dist == 0, dist
    _, gdist = c.correct_greedy(seed=7, degree=2)
    assert gdist == 0, gdist

    # Koenig selection through a 3-level inverse system.
    sets = [["a"], ["a0", "a1"], ["b0", "b1", "b2"]]
    maps = [[0, 0], [1, 0, 1]]
    seq = m.koenig(sets, maps)
    assert len(seq) == 3
    for n, f in enumerate(maps):
        assert f[seq[n + 1]] == seq[n]

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
