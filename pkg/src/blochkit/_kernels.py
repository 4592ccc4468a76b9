"""Hot numeric kernels.

Every kernel has a numba ``@njit`` implementation and a pure-numpy one with
identical semantics.  The numba path is used when numba imports cleanly and
``BLOCHKIT_DISABLE_JIT`` is unset (or ``0``); both paths are always importable
as ``<name>_jit`` / ``<name>_numpy`` so tests and the benchmark can compare them.
"""

import os

import numpy as np

_FLAG = os.environ.get("BLOCHKIT_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _FLAG in ("", "0", "false", "no")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


USE_JIT = HAS_NUMBA and JIT_REQUESTED


# ---------------------------------------------------------------------------
# z -> (v**n, n v**(n-1) dv) on dual numbers, by binary exponentiation


def dual_pow_numpy(val, der, n):
    val = np.asarray(val, dtype=np.complex128)
    der = np.asarray(der, dtype=np.complex128)
    rv = np.ones_like(val)
    rd = np.zeros_like(der)
    bv, bd = val.copy(), der.copy()
    while n > 0:
        if n & 1:
            rv, rd = rv * bv, rv * bd + rd * bv
        n >>= 1
        if n:
            bv, bd = bv * bv, 2.0 * bv * bd
    return rv, rd


@njit(cache=True)
def _dual_pow_jit(val, der, n):
    m = val.shape[0]
    out_v = np.empty(m, dtype=np.complex128)
    out_d = np.empty(m, dtype=np.complex128)
    for k in range(m):
        rv = 1.0 + 0.0j
        rd = 0.0 + 0.0j
        bv = val[k]
        bd = der[k]
        e = n
        while e > 0:
            if e & 1:
                rd = rv * bd + rd * bv
                rv = rv * bv
            e >>= 1
            if e:
                bd = 2.0 * bv * bd
                bv = bv * bv
        out_v[k] = rv
        out_d[k] = rd
    return out_v, out_d


def dual_pow_scalar(bv, bd, n):
    """Same square-and-multiply as the array kernels, for one point in plain Python."""
    rv, rd = 1.0 + 0.0j, 0.0j
    while n > 0:
        if n & 1:
            rd = rv * bd + rd * bv
            rv = rv * bv
        n >>= 1
        if n:
            bd = 2.0 * bv * bd
            bv = bv * bv
    return rv, rd


def dual_pow_jit(val, der, n):
    val = np.asarray(val, dtype=np.complex128)
    der = np.asarray(der, dtype=np.complex128)
    shape = np.broadcast_shapes(val.shape, der.shape)
    v = np.ascontiguousarray(np.broadcast_to(val, shape)).ravel()
    d = np.ascontiguousarray(np.broadcast_to(der, shape)).ravel()
    ov, od = _dual_pow_jit(v, d, int(n))
    return ov.reshape(shape), od.reshape(shape)


# ---------------------------------------------------------------------------
# truncated Cauchy product: c_k = sum_{i<=k} a_i b_{k-i}, k = 0..n_out-1


def truncated_convolve_numpy(a, b, n_out):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    out = np.zeros(n_out, dtype=np.complex128)
    if a.size == 0 or b.size == 0:
        return out
    c = np.convolve(a[:n_out], b[:n_out])[:n_out]
    out[: c.size] = c
    return out


@njit(cache=True)
def _truncated_convolve_jit(a, b, n_out):
    out = np.zeros(n_out, dtype=np.complex128)
    na = min(a.shape[0], n_out)
    nb = min(b.shape[0], n_out)
    for i in range(na):
        ai = a[i]
        if ai == 0:
            continue
        top = min(nb, n_out - i)
        for j in range(top):
            out[i + j] += ai * b[j]
    return out


def truncated_convolve_jit(a, b, n_out):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    return _truncated_convolve_jit(a, b, int(n_out))


# ---------------------------------------------------------------------------
# polynomial value and derivative at many points (Horner on duals)


def horner_dual_numpy(coeffs, z):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    v = np.zeros_like(z)
    d = np.zeros_like(z)
    for c in coeffs[::-1]:
        d = d * z + v
        v = v * z + c
    return v, d


@njit(cache=True)
def _horner_dual_jit(coeffs, z):
    m = z.shape[0]
    out_v = np.empty(m, dtype=np.complex128)
    out_d = np.empty(m, dtype=np.complex128)
    nc = coeffs.shape[0]
    for k in range(m):
        x = z[k]
        v = 0.0 + 0.0j
        d = 0.0 + 0.0j
        for i in range(nc - 1, -1, -1):
            d = d * x + v
            v = v * x + coeffs[i]
        out_v[k] = v
        out_d[k] = d
    return out_v, out_d


def horner_dual_jit(coeffs, z):
    z = np.asarray(z, dtype=np.complex128)
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    ov, od = _horner_dual_jit(c, np.ascontiguousarray(z).ravel())
    return ov.reshape(z.shape), od.reshape(z.shape)


# ---------------------------------------------------------------------------
# smallest bitmask J (nonempty, proper) with |sum_{i in J} lam_i| <= tol; -1 if none


def first_zero_subset_numpy(lam, tol, chunk=1 << 16):
    lam = np.asarray(lam, dtype=np.complex128)
    k = lam.size
    full = (1 << k) - 1
    bits = np.arange(k, dtype=np.int64)
    for start in range(1, full, chunk):
        masks = np.arange(start, min(start + chunk, full), dtype=np.int64)
        sel = ((masks[:, None] >> bits) & 1).astype(np.float64)
        sums = sel @ lam
        hit = np.nonzero(np.abs(sums) <= tol)[0]
        if hit.size:
            return int(masks[hit[0]])
    return -1


@njit(cache=True)
def _first_zero_subset_jit(lam, tol):
    k = lam.shape[0]
    full = (1 << k) - 1
    for mask in range(1, full):
        s = 0.0 + 0.0j
        for i in range(k):
            if (mask >> i) & 1:
                s += lam[i]
        if abs(s) <= tol:
            return mask
    return -1


def first_zero_subset_jit(lam, tol):
    return int(_first_zero_subset_jit(np.ascontiguousarray(lam, dtype=np.complex128), float(tol)))


if USE_JIT:
    dual_pow = dual_pow_jit
    truncated_convolve = truncated_convolve_jit
    horner_dual = horner_dual_jit
    first_zero_subset = first_zero_subset_jit
else:
    dual_pow = dual_pow_numpy
    truncated_convolve = truncated_convolve_numpy
    horner_dual = horner_dual_numpy
    first_zero_subset = first_zero_subset_numpy
