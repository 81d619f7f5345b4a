"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 20] [--step]

``--step`` also times one full training step of the small preset under each
backend (each in its own process, since the backend is fixed at import).
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from tracelab import kernels
from tracelab._accel import HAVE_NUMBA


def best_time(fn, args, repeat):
    fn(*[a.copy() if isinstance(a, np.ndarray) else a for a in args])   # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        fresh = [a.copy() if isinstance(a, np.ndarray) else a for a in args]
        t = time.perf_counter()
        fn(*fresh)
        best = min(best, time.perf_counter() - t)
    return best


def cases(rng):
    n, d, v = 2048, 128, 1200
    x = rng.normal(size=(n, d))
    g, b = rng.normal(size=d), rng.normal(size=d)
    _, xhat, rstd = kernels.NUMPY["layernorm_forward"](x, g, b, 1e-5)
    logits = rng.normal(size=(n, v)).astype(np.float32)
    tgt = rng.integers(0, v, size=n)
    clusters = rng.integers(0, 16, size=v)
    return {
        "layernorm_forward": (x, g, b, 1e-5),
        "layernorm_backward": (rng.normal(size=(n, d)), xhat, rstd, g),
        "softmax_xent": (logits, tgt),
        "nll_argmax": (logits, tgt),
        "scatter_add_rows": (np.zeros((v, d)), rng.integers(0, v, size=n), rng.normal(size=(n, d))),
        "two_nearest": (rng.normal(size=(1000, 64)),),
        "association": (7, int(clusters[7]), rng.integers(1, v, size=3000), clusters,
                        rng.uniform(size=(16, 16)), rng.uniform(size=(16, 16)), 11),
    }


STEP_CODE = """
import time
import numpy as np
from tracelab._accel import backend_name
from tracelab.nn.model import Transformer, preset
m = Transformer(preset("small", 1200))
theta = m.init_params(0, dtype=np.float32)
rng = np.random.default_rng(0)
x = np.zeros((128, 16), dtype=np.int64); x[:, 0] = 1; x[:, 1:12] = rng.integers(2, 1200, size=(128, 11))
y = np.zeros_like(x); y[:, :11] = x[:, 1:12]
m.loss_and_grad(theta, x, y)
best = float("inf")
for _ in range(10):
    t = time.perf_counter()
    m.loss_and_grad(theta, x, y)
    best = min(best, time.perf_counter() - t)
print(backend_name(), best)
"""


def time_steps():
    for flag in ("", "1"):
        env = dict(os.environ, TRACE_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", STEP_CODE], env=env, capture_output=True, text=True,
                             check=True).stdout.split()
        print(f"train step ({out[0]:>5}): {float(out[1]) * 1e3:8.1f} ms")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--step", action="store_true", help="also time a full training step per backend")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, inputs in cases(rng).items():
        t_np = best_time(kernels.NUMPY[name], inputs, args.repeat)
        t_nb = best_time(kernels.NUMBA[name], inputs, args.repeat)
        print(f"{name:<20}{t_np * 1e3:10.3f}{t_nb * 1e3:10.3f}{t_np / t_nb:9.2f}")
    if args.step:
        time_steps()
    return 0


if __name__ == "__main__":
    sys.exit(main())
