"""Smoke test for the `wkg` extension module.

Build it first:

    cargo build --release -p wkg-py --features extension-module

then run `python3 python/smoke_test.py`. If `wkg` is not importable the
script loads target/release/libwkg.so directly.
"""

import cmath
import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import wkg

        return wkg
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libwkg.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("wkg", str(lib))
            spec = importlib.util.spec_from_file_location("wkg", str(lib), loader=loader)
            mod = importlib.util.module_from_spec(spec)
            loader.exec_module(mod)
            return mod
    sys.exit("wkg extension not found; build it with --features extension-module")


def main():
    wkg = load()

    grid = wkg.Grid(8, 12.0)
    assert len(grid) == 512 and grid.n == 8 and grid.dim == 3
    samples = [math.sin(0.1 * i) for i in range(len(grid))]
    back = grid.inverse_real(grid.forward_real(samples))
    assert max(abs(a - b) for a, b in zip(samples, back)) < 1e-12

    assert wkg.lambda_kg([0.0, 0.0, 0.0]) == 1.0
    assert abs(wkg.lambda_wave([3.0, 4.0, 0.0]) - 5.0) < 1e-15

    grid = wkg.Grid(16, 48.0)
    state = wkg.initial_state(grid, 1e-2)
    assert state.t == 0.0 and len(state.v_kg) == len(grid)

    linear = wkg.Solver(grid, "zero")
    later = linear.advance(state, 0.25, 4)
    assert abs(later.t - 1.0) < 1e-12 and later.v_kg == state.v_kg

    solver = wkg.Solver(grid)
    later = solver.step(state, 0.1)
    norms = wkg.norms(grid, later)
    assert set(norms) == {"z_wa", "z_kg", "e_wa", "e_kg"}
    assert all(v > 0.0 for v in norms.values())

    u, u_t, v, v_t = later.physical(grid)
    assert len(u) == len(grid)

    low = wkg.u_low(grid, later, 0.1, [[0.0, 0.0, 0.0], [1.0, 2.0, -1.0]])
    assert len(low) == 2 and all(math.isfinite(x) for x in low)

    theta = [0.01 * i for i in range(len(grid))]
    ren = wkg.renormalize(later.v_kg, theta)
    assert all(abs(abs(a) - abs(b)) <= 1e-14 * max(abs(a), 1.0) for a, b in zip(later.v_kg, ren))
    assert abs(ren[5] - later.v_kg[5] * cmath.exp(-0.05j)) < 1e-14 * max(abs(ren[5]), 1.0)

    assert wkg.resonance_violations(2.0, 2000) == 0

    cfg = wkg.default_config()
    assert "[grid]" in cfg
    small = """
[grid]
n = 16
box_length = 48.0

[run]
eps0 = 1e-2
dt = 0.5
t_max = 4.0

[diagnostics]
every = 2
"""
    out = wkg.simulate(small)
    assert out["times"][0] == 0.0 and out["times"][-1] == 4.0
    assert "z_kg" in out["columns"]
    assert out["max_modulus_defect"] <= 1e-14

    try:
        wkg.Grid(12, 10.0)
    except ValueError:
        pass
    else:
        raise AssertionError("non power of two grid accepted")

    print("wkg smoke test passed")


if __name__ == "__main__":
    main()
