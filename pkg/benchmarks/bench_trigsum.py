"""Compare the compiled and NumPy trigonometric-sum kernels.

    python benchmarks/bench_trigsum.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from convapprox import _pykernels

try:
    from convapprox import _ckernels
except ImportError:
    _ckernels = None

CASES = [
    # (label, number of points, number of harmonics)
    ("sup-norm grid", 16384, 64),
    ("witness series", 4096, 2049),
    ("remez reference", 16, 2049),
]


def bench(label, npts, nharm, repeat):
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 2 * np.pi, npts)
    a = rng.normal(size=nharm) / np.arange(1, nharm + 1) ** 2
    b = rng.normal(size=nharm) / np.arange(1, nharm + 1) ** 2
    rows = []
    backends = [("numpy", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    ref = _pykernels.harmonic_sum(x, a, b, 1.0)
    for name, mod in backends:
        t = min(timeit.repeat(lambda: mod.harmonic_sum(x, a, b, 1.0), number=1, repeat=repeat))
        err = float(np.abs(mod.harmonic_sum(x, a, b, 1.0) - ref).max())
        rows.append((name, t, err))
    w = rng.normal(size=npts)
    for name, mod in backends:
        t = min(timeit.repeat(lambda: mod.harmonic_projection(x, w, nharm), number=1, repeat=repeat))
        rows.append((name + " proj", t, float("nan")))
    print(f"{label}: {npts} points x {nharm} harmonics")
    base = {r[0]: r[1] for r in rows}
    for name, t, err in rows:
        ref_name = "numpy proj" if name.endswith("proj") else "numpy"
        speed = base[ref_name] / t
        extra = "" if np.isnan(err) else f"  max diff {err:.1e}"
        print(f"  {name:<12} {t * 1e3:9.2f} ms  x{speed:5.1f}{extra}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels not available; timing the NumPy backend only")
    for case in CASES:
        bench(*case, args.repeat)


if __name__ == "__main__":
    main()
