"""Brute-force loop oracles for the tensor ops.

Every function here evaluates its defining sum directly with Python
loops, no vectorization and no shared code with the engine, so the fast
paths can be checked against them on random instances.
"""

import numpy as np


def conv1d_ref(x, h):
    """y[n] = sum_k x[k] * h[n-k], full finite support."""
    x = list(map(float, x))
    h = list(map(float, h))
    out = []
    for n in range(len(x) + len(h) - 1):
        acc = 0.0
        for k in range(len(x)):
            if 0 <= n - k < len(h):
                acc += x[k] * h[n - k]
        out.append(acc)
    return out


def convolve2d_full_ref(image, kernel):
    """S(i,j) = sum_m sum_n I(m,n) * K(i-m, j-n), full support."""
    image = np.asarray(image, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    ih, iw = image.shape
    kh, kw = kernel.shape
    out = np.zeros((ih + kh - 1, iw + kw - 1))
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            acc = 0.0
            for m in range(ih):
                for n in range(iw):
                    ki, kj = i - m, j - n
                    if 0 <= ki < kh and 0 <= kj < kw:
                        acc += image[m, n] * kernel[ki, kj]
            out[i, j] = acc
    return out


def conv2d_ref(x, kernels, bias=None, stride=1, pad=0):
    """Direct quadruple-loop strided window sum (no kernel flip)."""
    x = np.asarray(x, dtype=np.float64)
    kernels = np.asarray(kernels, dtype=np.float64)
    f = kernels.shape[0]
    c_in, c_out = kernels.shape[2], kernels.shape[3]
    padded = np.zeros((x.shape[0] + 2 * pad, x.shape[1] + 2 * pad, c_in))
    padded[pad : pad + x.shape[0], pad : pad + x.shape[1], :] = x
    out_h = (x.shape[0] + 2 * pad - f) // stride + 1
    out_w = (x.shape[1] + 2 * pad - f) // stride + 1
    out = np.zeros((out_h, out_w, c_out))
    for i in range(out_h):
        for j in range(out_w):
            for oc in range(c_out):
                acc = 0.0
                for m in range(f):
                    for n in range(f):
                        for c in range(c_in):
                            acc += padded[i * stride + m, j * stride + n, c] * kernels[m, n, c, oc]
                if bias is not None:
                    acc += float(bias[oc])
                out[i, j, oc] = acc
    return out


def maxpool2d_ref(x, f, s):
    x = np.asarray(x, dtype=np.float64)
    out_h = (x.shape[0] - f) // s + 1
    out_w = (x.shape[1] - f) // s + 1
    out = np.zeros((out_h, out_w, x.shape[2]))
    for i in range(out_h):
        for j in range(out_w):
            for c in range(x.shape[2]):
                best = -np.inf
                for m in range(f):
                    for n in range(f):
                        best = max(best, x[i * s + m, j * s + n, c])
                out[i, j, c] = best
    return out


def dense_ref(v, weights, bias=None):
    v = np.asarray(v, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    out = []
    for j in range(weights.shape[1]):
        acc = 0.0
        for i in range(v.size):
            acc += v[i] * weights[i, j]
        if bias is not None:
            acc += float(bias[j])
        out.append(acc)
    return np.array(out)
