"""Compare the jitted kernels against the pure-numpy fallback.

Run:  python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from objcut.graphcut import FlowNetwork
from objcut.kernels import numba_impl, numpy_impl


def timed(fn, repeats):
    best = np.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_bicubic(rng):
    src = rng.random((56, 56)) * 255.0
    numba_impl.bicubic_upscale(src, 64, 64)  # compile
    t_nb, a = timed(lambda: numba_impl.bicubic_upscale(src, 896, 896), 3)
    t_np, b = timed(lambda: numpy_impl.bicubic_upscale(src, 896, 896), 3)
    assert np.array_equal(a, b)
    return "bicubic 56->896", t_nb, t_np


def bench_labeling(rng):
    mask = (rng.random((512, 512)) < 0.55).astype(np.uint8)
    numba_impl.label_components(mask[:4, :4], 8)  # compile
    t_nb, (la, ca) = timed(lambda: numba_impl.label_components(mask, 8), 3)
    t_np, (lb, cb) = timed(lambda: numpy_impl.label_components(mask, 8), 1)
    assert ca == cb and np.array_equal(la, lb)
    return "labeling 512x512", t_nb, t_np


def grid_network(rng, h, w):
    """Terminal arcs everywhere plus 4-neighbor smoothness, like a cut instance."""
    n = h * w + 2
    source, sink = h * w, h * w + 1
    net = FlowNetwork(n, source=source, sink=sink)
    ids = np.arange(h * w, dtype=np.int64).reshape(h, w)
    net.add_arcs(np.full(h * w, source), ids.ravel(), rng.random(h * w) * 20.0)
    net.add_arcs(ids.ravel(), np.full(h * w, sink), rng.random(h * w) * 20.0)
    for a, b in (((slice(None), slice(1, None)), (slice(None), slice(None, -1))),
                 ((slice(1, None), slice(None)), (slice(None, -1), slice(None)))):
        p, q = ids[a].ravel(), ids[b].ravel()
        caps = rng.random(p.size) * 10.0
        net.add_arcs(p, q, caps)
        net.add_arcs(q, p, caps)
    return n, source, sink, net._edge_arrays()


def bench_maxflow(rng):
    h = w = 96
    n, source, sink, (head, nxt, to, cap) = grid_network(rng, h, w)
    numba_impl.dinic_maxflow(n, source, sink, head, nxt, to, cap.copy())  # compile
    t_nb, flow_nb = timed(
        lambda: numba_impl.dinic_maxflow(n, source, sink, head, nxt, to, cap.copy()), 3)
    t_np, flow_np = timed(
        lambda: numpy_impl.dinic_maxflow(n, source, sink, head, nxt, to, cap.copy()), 1)
    assert flow_nb == flow_np
    return f"maxflow {h}x{w} grid", t_nb, t_np


def main():
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for bench in (bench_bicubic, bench_labeling, bench_maxflow):
        name, t_nb, t_np = bench(rng)
        print(f"{name:<20} {t_nb * 1e3:>8.1f}ms {t_np * 1e3:>8.1f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
