"""Time the compiled and numpy steppers on the pumping-experiment integration.

    python3 benchmarks/bench_kernels.py [--repeat N] [--points N]
"""

import argparse
import time

import numpy as np

from qhe_spectro import bath, kernels
from qhe_spectro.lindblad import _initial_step, build_generator
from qhe_spectro.params import DensityState, fig2_params


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--points", type=int, default=400)
    parser.add_argument("--span", type=float, default=8.0,
                        help="integration length in units of the slow decay time")
    args = parser.parse_args(argv)

    p = fig2_params()
    gen = build_generator(p)
    y0 = gen.restrict(DensityState.pure("g"))
    t = np.linspace(0.0, args.span / bath.gamma_tilde(p), args.points)
    rtol, atol = 1e-9, 1e-12
    h0 = _initial_step(gen.matrix, y0, rtol, atol)

    backends = [("python", kernels.py_dopri5_linear)]
    if kernels.c_dopri5_linear is not None:
        backends.insert(0, ("cython", kernels.c_dopri5_linear))
    else:
        print("compiled extension not built; timing the numpy stepper only")

    timings = {}
    for name, fn in backends:
        secs, (Y, n_acc, n_rej, status, _) = best_of(
            lambda fn=fn: fn(gen.matrix, y0, t, rtol, atol, h0, 50_000_000), args.repeat)
        timings[name] = secs
        print(f"{name:>7}: {secs * 1e3:9.2f} ms  steps={n_acc} rejected={n_rej} status={status}")
    if len(timings) == 2:
        print(f"speedup: {timings['python'] / timings['cython']:.1f}x")


if __name__ == "__main__":
    main()
