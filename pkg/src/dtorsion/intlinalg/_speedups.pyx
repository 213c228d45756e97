# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled echelon kernel: scalar C loops over int64 buffers.

Mirrors _pure.echelon_inplace exactly (same pivot choices, same row
order) so the two backends are interchangeable and cross-checkable.
The modular path needs no overflow guard (entries stay below mod, and
mod < 2^16 in all uses); the integral path checks magnitudes before
each row operation and raises OverflowError for the dispatch layer to
retry with bignum arithmetic.
"""

cdef long long GUARD = (<long long>1) << 62


cdef inline long long _ndiv(long long w, long long piv):
    # Round-to-nearest division, exact in integers; piv > 0.
    cdef long long num = 2 * w + piv
    cdef long long den = 2 * piv
    cdef long long q = num / den
    if num % den != 0 and num < 0:
        q -= 1
    return q


def echelon_inplace(long long[:, ::1] W, long long mod):
    """Reduce W to row echelon in place; returns the number of rows kept."""
    cdef Py_ssize_t m = W.shape[0]
    cdef Py_ssize_t n = W.shape[1]
    cdef Py_ssize_t r = 0, alive = m, last_compact = 0
    cdef Py_ssize_t c, i, j, best, dst
    cdef long long w, b, a, bestval, piv, q, t, kmax, imax, qa
    cdef bint others

    if m == 0 or n == 0:
        return 0
    for c in range(n):
        if r == alive:
            break
        while True:
            best = -1
            bestval = 0
            for i in range(r, alive):
                w = W[i, c]
                if w != 0:
                    b = w - mod if (mod != 0 and w > (mod >> 1)) else w
                    a = -b if b < 0 else b
                    if best < 0 or a < bestval:
                        best = i
                        bestval = a
            if best < 0:
                break
            if best != r:
                for j in range(c, n):
                    t = W[r, j]
                    W[r, j] = W[best, j]
                    W[best, j] = t
            if mod != 0:
                if W[r, c] > (mod >> 1):
                    for j in range(c, n):
                        W[r, j] = (mod - W[r, j]) % mod
            elif W[r, c] < 0:
                for j in range(c, n):
                    W[r, j] = -W[r, j]
            piv = W[r, c]
            others = False
            for i in range(r + 1, alive):
                if W[i, c] != 0:
                    others = True
                    break
            if not others:
                r += 1
                break
            kmax = 0
            if mod == 0:
                for j in range(c, n):
                    a = W[r, j] if W[r, j] >= 0 else -W[r, j]
                    if a > kmax:
                        kmax = a
            for i in range(r + 1, alive):
                w = W[i, c]
                if w == 0:
                    continue
                if mod != 0 and w > (mod >> 1):
                    w -= mod
                q = _ndiv(w, piv)
                if q == 0:
                    continue
                if mod != 0:
                    for j in range(c, n):
                        t = (W[i, j] - q * W[r, j]) % mod
                        if t < 0:
                            t += mod
                        W[i, j] = t
                else:
                    qa = -q if q < 0 else q
                    imax = 0
                    for j in range(c, n):
                        a = W[i, j] if W[i, j] >= 0 else -W[i, j]
                        if a > imax:
                            imax = a
                    if imax > GUARD or kmax > (GUARD - imax) / qa:
                        raise OverflowError("integer kernel guard tripped")
                    for j in range(c, n):
                        W[i, j] = W[i, j] - q * W[r, j]
        if c - last_compact >= 32 and r < alive:
            dst = r
            for i in range(r, alive):
                others = False
                for j in range(c, n):
                    if W[i, j] != 0:
                        others = True
                        break
                if others:
                    if dst != i:
                        for j in range(c, n):
                            W[dst, j] = W[i, j]
                    dst += 1
            alive = dst
            last_compact = c
    return r
