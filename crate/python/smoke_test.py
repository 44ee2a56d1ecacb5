#!/usr/bin/env python3
"""Smoke test for the Python bindings.

Builds nothing itself: run `cargo build -p blockgain-py` first (or
`--release`). The script locates the compiled extension, imports it, and
reproduces the first reference synthesis end to end.
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libblockgain_py.so", "blockgain_py.dll", "libblockgain_py.dylib")
    ]
    artifact = next((c for c in candidates if c.exists()), None)
    if artifact is None:
        sys.exit("extension not built; run: cargo build -p blockgain-py")
    staging = Path(tempfile.mkdtemp(prefix="blockgain_py_"))
    suffix = ".pyd" if artifact.suffix == ".dll" else ".so"
    shutil.copy2(artifact, staging / f"blockgain_py{suffix}")
    sys.path.insert(0, str(staging))
    import blockgain_py

    return blockgain_py


def close(a, b, tol=1e-9):
    return all(abs(x - y) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    bg = load_module()

    f = [
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
        [2, 0, -1, 0, 0, 0],
        [0, 0, 0, -1, 0, -1],
    ]
    g = [
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [0, 1, 1, 0],
        [0, -1, 0, 1],
        [-1, 3, 1, -1],
        [2, 1, 0, -1],
    ]
    h = [
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, -1, 1, 0, 0, 0],
    ]
    system = bg.BlockSystem(f, g, h, s=2, p=2, form="frobenius")
    assert system.validate() == [], system.validate()

    solvable, rank, required, precheck = bg.check(system)
    assert solvable and rank == 12 and required == 12 and precheck

    identity = [[1, 0], [0, 1]]
    scaled = lambda c: [[c, 0], [0, c]]
    targets = bg.TargetCoefficients([scaled(6), scaled(11), scaled(6)])
    result = bg.assign(system, targets)
    expected_q = [
        [0, -5, 0, 3],
        [-2, -16, -2, 9],
        [-3, 16, -3, -15],
        [-5, -21, -5, 9],
    ]
    assert close(result.q, expected_q), result.q
    assert result.residual_solve <= 1e-9
    assert result.residual_similarity <= 1e-9
    assert result.rank == 12

    closed = system.closed_loop(result.q)
    coeffs = bg.char_poly(closed)
    assert all(
        abs(x - y) <= 1e-6 for x, y in zip(coeffs, [12, 58, 144, 193, 132, 36])
    ), coeffs

    # The same gain comes back from placing the solvents -I, -2I, -3I.
    solvents = [scaled(-1), scaled(-2), scaled(-3)]
    sres, gammas, residuals = bg.assign_solvents(system, solvents)
    assert close(sres.q, expected_q), sres.q
    assert close(gammas.gammas[0], scaled(6))
    assert all(r <= 1e-9 for r in residuals)

    # Companion input reduces by the identity transform.
    s_mat, phi, residual = bg.reduce(closed, 2)
    assert residual <= 1e-9

    print("smoke test passed")


if __name__ == "__main__":
    main()
