"""Jitted implementations of the hot kernels.

Must stay arithmetically identical to numpy_impl (same op order, no fastmath)
so switching backends never changes output bytes.
"""
import numpy as np
from numba import njit

CUBIC_A = -0.5


@njit(cache=True, nogil=True)
def _w_near(x):
    return (CUBIC_A + 2.0) * x * x * x - (CUBIC_A + 3.0) * x * x + 1.0


@njit(cache=True, nogil=True)
def _w_far(x):
    return CUBIC_A * (x * x * x - 5.0 * x * x + 8.0 * x - 4.0)


@njit(cache=True, nogil=True)
def _resample_cols(arr, n_out):
    n_rows, n_in = arr.shape
    out = np.empty((n_rows, n_out), dtype=np.float64)
    scale = n_in / n_out
    for ox in range(n_out):
        s = (ox + 0.5) * scale - 0.5
        i0f = np.floor(s)
        t = s - i0f
        i0 = np.int64(i0f)
        w0 = _w_far(t + 1.0)
        w2 = _w_near(1.0 - t)
        w3 = _w_far(2.0 - t)
        c0 = min(max(i0 - 1, 0), n_in - 1)
        c1 = min(max(i0, 0), n_in - 1)
        c2 = min(max(i0 + 1, 0), n_in - 1)
        c3 = min(max(i0 + 2, 0), n_in - 1)
        for y in range(n_rows):
            v0 = arr[y, c0]
            v1 = arr[y, c1]
            v2 = arr[y, c2]
            v3 = arr[y, c3]
            out[y, ox] = v1 + (w0 * (v0 - v1) + w2 * (v2 - v1) + w3 * (v3 - v1))
    return out


@njit(cache=True, nogil=True)
def bicubic_upscale(src, out_h, out_w):
    tmp = _resample_cols(src, out_w)
    out = _resample_cols(tmp.T.copy(), out_h).T.copy()
    for y in range(out_h):
        for x in range(out_w):
            v = out[y, x]
            if v < 0.0:
                out[y, x] = 0.0
            elif v > 255.0:
                out[y, x] = 255.0
    return out


@njit(cache=True, nogil=True)
def label_components(bits, connectivity):
    h, w = bits.shape
    labels = np.zeros((h, w), dtype=np.int32)
    if connectivity == 8:
        offs = np.array([[-1, -1], [-1, 0], [-1, 1], [0, -1], [0, 1], [1, -1], [1, 0], [1, 1]], dtype=np.int64)
    else:
        offs = np.array([[-1, 0], [0, -1], [0, 1], [1, 0]], dtype=np.int64)
    count = 0
    stack = np.empty(h * w, dtype=np.int64)
    for sy in range(h):
        for sx in range(w):
            if bits[sy, sx] == 0 or labels[sy, sx] != 0:
                continue
            count += 1
            labels[sy, sx] = count
            stack[0] = sy * w + sx
            top = 1
            while top > 0:
                top -= 1
                p = stack[top]
                y = p // w
                x = p - y * w
                for k in range(offs.shape[0]):
                    ny = y + offs[k, 0]
                    nx = x + offs[k, 1]
                    if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] != 0 and labels[ny, nx] == 0:
                        labels[ny, nx] = count
                        stack[top] = ny * w + nx
                        top += 1
    return labels, count


@njit(cache=True, nogil=True)
def dinic_maxflow(n_nodes, source, sink, head, nxt, to, cap):
    level = np.empty(n_nodes, dtype=np.int32)
    it = np.empty(n_nodes, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    path = np.empty(n_nodes + 1, dtype=np.int64)
    flow = 0.0
    while True:
        level[:] = -1
        level[source] = 0
        queue[0] = source
        qh, qt = 0, 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0.0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
                e = nxt[e]
        if level[sink] < 0:
            return flow
        it[:] = head
        u = source
        plen = 0
        while True:
            if u == sink:
                bottleneck = np.inf
                for k in range(plen):
                    if cap[path[k]] < bottleneck:
                        bottleneck = cap[path[k]]
                for k in range(plen):
                    cap[path[k]] -= bottleneck
                    cap[path[k] ^ 1] += bottleneck
                flow += bottleneck
                u = source
                plen = 0
                continue
            e = it[u]
            while e != -1 and not (cap[e] > 0.0 and level[to[e]] == level[u] + 1):
                e = nxt[e]
                it[u] = e
            if e != -1:
                path[plen] = e
                plen += 1
                u = to[e]
            else:
                if u == source:
                    break
                level[u] = -1
                plen -= 1
                pe = path[plen]
                u = to[pe ^ 1]
                it[u] = nxt[pe]


@njit(cache=True, nogil=True)
def residual_reachable(n_nodes, source, head, nxt, to, cap):
    seen = np.zeros(n_nodes, dtype=np.bool_)
    queue = np.empty(n_nodes, dtype=np.int64)
    seen[source] = True
    queue[0] = source
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > 0.0 and not seen[v]:
                seen[v] = True
                queue[qt] = v
                qt += 1
            e = nxt[e]
    return seen
