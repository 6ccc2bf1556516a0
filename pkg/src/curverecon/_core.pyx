# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: exact 2-D predicates, Bowyer-Watson insertion and the
per-vertex neighbour scans of the reconstruction algorithms.

Every routine here has a pure-Python twin (``predicates``, ``delaunay``,
``recon``) producing identical results; the pure versions are selected when
this extension is not built.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fma, fabs, sqrt, atan2, acos, INFINITY

cnp.import_array()

cdef double EPS = 1.1102230246251565e-16
cdef double CCW_BOUND = (3.0 + 16.0 * EPS) * EPS
cdef double ICC_BOUND = (10.0 + 96.0 * EPS) * EPS


# ---------------------------------------------------------------- expansions

cdef inline void two_sum(double a, double b, double* x, double* y) noexcept nogil:
    cdef double s = a + b
    cdef double bv = s - a
    cdef double av = s - bv
    x[0] = s
    y[0] = (a - av) + (b - bv)


cdef inline void fast_two_sum(double a, double b, double* x, double* y) noexcept nogil:
    cdef double s = a + b
    x[0] = s
    y[0] = b - (s - a)


cdef inline void two_diff(double a, double b, double* e) noexcept nogil:
    # e[0] low, e[1] high
    cdef double x = a - b
    cdef double bv = a - x
    cdef double av = x + bv
    e[1] = x
    e[0] = (a - av) + (bv - b)


cdef int fast_expansion_sum(int elen, double* e, int flen, double* f, double* h) noexcept nogil:
    cdef double Q, Qnew, hh, enow, fnow
    cdef int eindex = 0, findex = 0, hindex = 0
    enow = e[0]
    fnow = f[0]
    if (fnow > enow) == (fnow > -enow):
        Q = enow
        eindex += 1
        if eindex < elen:
            enow = e[eindex]
    else:
        Q = fnow
        findex += 1
        if findex < flen:
            fnow = f[findex]
    if eindex < elen and findex < flen:
        if (fnow > enow) == (fnow > -enow):
            fast_two_sum(enow, Q, &Qnew, &hh)
            eindex += 1
            if eindex < elen:
                enow = e[eindex]
        else:
            fast_two_sum(fnow, Q, &Qnew, &hh)
            findex += 1
            if findex < flen:
                fnow = f[findex]
        Q = Qnew
        if hh != 0.0:
            h[hindex] = hh
            hindex += 1
        while eindex < elen and findex < flen:
            if (fnow > enow) == (fnow > -enow):
                two_sum(Q, enow, &Qnew, &hh)
                eindex += 1
                if eindex < elen:
                    enow = e[eindex]
            else:
                two_sum(Q, fnow, &Qnew, &hh)
                findex += 1
                if findex < flen:
                    fnow = f[findex]
            Q = Qnew
            if hh != 0.0:
                h[hindex] = hh
                hindex += 1
    while eindex < elen:
        two_sum(Q, enow, &Qnew, &hh)
        eindex += 1
        if eindex < elen:
            enow = e[eindex]
        Q = Qnew
        if hh != 0.0:
            h[hindex] = hh
            hindex += 1
    while findex < flen:
        two_sum(Q, fnow, &Qnew, &hh)
        findex += 1
        if findex < flen:
            fnow = f[findex]
        Q = Qnew
        if hh != 0.0:
            h[hindex] = hh
            hindex += 1
    if Q != 0.0 or hindex == 0:
        h[hindex] = Q
        hindex += 1
    return hindex


cdef int scale_expansion(int elen, double* e, double b, double* h) noexcept nogil:
    cdef double Q, hh, p1, p0, s
    cdef int hindex = 0, i
    Q = e[0] * b
    hh = fma(e[0], b, -Q)
    if hh != 0.0:
        h[hindex] = hh
        hindex += 1
    for i in range(1, elen):
        p1 = e[i] * b
        p0 = fma(e[i], b, -p1)
        two_sum(Q, p0, &s, &hh)
        if hh != 0.0:
            h[hindex] = hh
            hindex += 1
        fast_two_sum(p1, s, &Q, &hh)
        if hh != 0.0:
            h[hindex] = hh
            hindex += 1
    if Q != 0.0 or hindex == 0:
        h[hindex] = Q
        hindex += 1
    return hindex


cdef int mul_expansion(int elen, double* e, int flen, double* f, double* h, double* tmp, double* acc) noexcept nogil:
    # h <- e * f ; tmp and acc are scratch buffers of size >= 2*elen*flen
    cdef int i, tlen, hlen, n
    hlen = scale_expansion(elen, e, f[0], h)
    for i in range(1, flen):
        tlen = scale_expansion(elen, e, f[i], tmp)
        n = fast_expansion_sum(hlen, h, tlen, tmp, acc)
        for hlen in range(n):
            h[hlen] = acc[hlen]
        hlen = n
    return hlen


cdef inline int sign_of(int n, double* e) noexcept nogil:
    cdef double v = e[n - 1]
    if v > 0.0:
        return 1
    if v < 0.0:
        return -1
    return 0


cdef inline void negate(int n, double* e) noexcept nogil:
    cdef int i
    for i in range(n):
        e[i] = -e[i]


cdef int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) noexcept nogil:
    cdef double acx[2]
    cdef double bcy[2]
    cdef double acy[2]
    cdef double bcx[2]
    cdef double t1[8]
    cdef double t2[8]
    cdef double tmp[8]
    cdef double acc[8]
    cdef double res[16]
    cdef int n1, n2, n
    two_diff(ax, cx, acx)
    two_diff(by, cy, bcy)
    two_diff(ay, cy, acy)
    two_diff(bx, cx, bcx)
    n1 = mul_expansion(2, acx, 2, bcy, t1, tmp, acc)
    n2 = mul_expansion(2, acy, 2, bcx, t2, tmp, acc)
    negate(n2, t2)
    n = fast_expansion_sum(n1, t1, n2, t2, res)
    return sign_of(n, res)


cdef int _cross_term(double* p, double* q, double* r, double* s, double* out) noexcept nogil:
    # out <- p*q - r*s for 2-component inputs
    cdef double t1[8]
    cdef double t2[8]
    cdef double tmp[8]
    cdef double acc[8]
    cdef int n1, n2
    n1 = mul_expansion(2, p, 2, q, t1, tmp, acc)
    n2 = mul_expansion(2, r, 2, s, t2, tmp, acc)
    negate(n2, t2)
    return fast_expansion_sum(n1, t1, n2, t2, out)


cdef int _lift(double* x, double* y, double* out) noexcept nogil:
    cdef double t1[8]
    cdef double t2[8]
    cdef double tmp[8]
    cdef double acc[8]
    cdef int n1, n2
    n1 = mul_expansion(2, x, 2, x, t1, tmp, acc)
    n2 = mul_expansion(2, y, 2, y, t2, tmp, acc)
    return fast_expansion_sum(n1, t1, n2, t2, out)


cdef int incircle_exact(double ax, double ay, double bx, double by,
                        double cx, double cy, double dx, double dy) noexcept nogil:
    cdef double adx[2]
    cdef double ady[2]
    cdef double bdx[2]
    cdef double bdy[2]
    cdef double cdx[2]
    cdef double cdy[2]
    cdef double bc[16]
    cdef double ca[16]
    cdef double ab[16]
    cdef double al[16]
    cdef double bl[16]
    cdef double cl[16]
    cdef double ta[512]
    cdef double tb[512]
    cdef double tc[512]
    cdef double tmp[512]
    cdef double acc[512]
    cdef double s1[1024]
    cdef double s2[1536]
    cdef int nbc, nca, nab, nal, nbl, ncl, na, nb, nc, n1, n2
    two_diff(ax, dx, adx)
    two_diff(ay, dy, ady)
    two_diff(bx, dx, bdx)
    two_diff(by, dy, bdy)
    two_diff(cx, dx, cdx)
    two_diff(cy, dy, cdy)
    nbc = _cross_term(bdx, cdy, cdx, bdy, bc)
    nca = _cross_term(cdx, ady, adx, cdy, ca)
    nab = _cross_term(adx, bdy, bdx, ady, ab)
    nal = _lift(adx, ady, al)
    nbl = _lift(bdx, bdy, bl)
    ncl = _lift(cdx, cdy, cl)
    na = mul_expansion(nal, al, nbc, bc, ta, tmp, acc)
    nb = mul_expansion(nbl, bl, nca, ca, tb, tmp, acc)
    nc = mul_expansion(ncl, cl, nab, ab, tc, tmp, acc)
    n1 = fast_expansion_sum(na, ta, nb, tb, s1)
    n2 = fast_expansion_sum(n1, s1, nc, tc, s2)
    return sign_of(n2, s2)


# ---------------------------------------------------------------- predicates

cdef int orient2d_c(double ax, double ay, double bx, double by, double cx, double cy) noexcept nogil:
    cdef double detleft = (ax - cx) * (by - cy)
    cdef double detright = (ay - cy) * (bx - cx)
    cdef double det = detleft - detright
    cdef double bound = CCW_BOUND * (fabs(detleft) + fabs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


cdef int incircle_c(double ax, double ay, double bx, double by,
                    double cx, double cy, double dx, double dy) noexcept nogil:
    cdef double adx = ax - dx, bdx = bx - dx, cdx = cx - dx
    cdef double ady = ay - dy, bdy = by - dy, cdy = cy - dy
    cdef double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy
    cdef double cdxady = cdx * ady, adxcdy = adx * cdy
    cdef double adxbdy = adx * bdy, bdxady = bdx * ady
    cdef double alift = adx * adx + ady * ady
    cdef double blift = bdx * bdx + bdy * bdy
    cdef double clift = cdx * cdx + cdy * cdy
    cdef double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    cdef double perm = ((fabs(bdxcdy) + fabs(cdxbdy)) * alift
                        + (fabs(cdxady) + fabs(adxcdy)) * blift
                        + (fabs(adxbdy) + fabs(bdxady)) * clift)
    cdef double bound = ICC_BOUND * perm
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def orient2d(a, b, c):
    return orient2d_c(a[0], a[1], b[0], b[1], c[0], c[1])


def incircle(a, b, c, d):
    return incircle_c(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])


def orient2d_exact_py(a, b, c):
    return orient2d_exact(a[0], a[1], b[0], b[1], c[0], c[1])


def incircle_exact_py(a, b, c, d):
    return incircle_exact(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])


# ---------------------------------------------------------------- Delaunay

cdef class _BW:
    cdef const double[:, ::1] P
    cdef int n, INF, ntri, nfree
    cdef int[::1] tv
    cdef int[::1] tn
    cdef int[::1] alive
    cdef int[::1] freelist
    cdef int[::1] stamp
    cdef int[::1] verdict
    cdef int[::1] cavity
    cdef int[::1] bs
    cdef int[::1] be
    cdef int[::1] bo
    cdef int[::1] bj
    cdef int[::1] start_of
    cdef int[::1] end_of
    cdef unsigned int rng

    def __init__(self, const double[:, ::1] P):
        self.P = P
        self.n = P.shape[0]
        self.INF = -1
        cap = 2 * self.n + 8
        self.tv = np.full(3 * cap, -2, dtype=np.int32)
        self.tn = np.full(3 * cap, -1, dtype=np.int32)
        self.alive = np.zeros(cap, dtype=np.int32)
        self.freelist = np.zeros(cap, dtype=np.int32)
        self.stamp = np.zeros(cap, dtype=np.int32)
        self.verdict = np.zeros(cap, dtype=np.int32)
        self.cavity = np.zeros(cap, dtype=np.int32)
        self.bs = np.zeros(cap, dtype=np.int32)
        self.be = np.zeros(cap, dtype=np.int32)
        self.bo = np.zeros(cap, dtype=np.int32)
        self.bj = np.zeros(cap, dtype=np.int32)
        self.start_of = np.full(self.n + 1, -1, dtype=np.int32)
        self.end_of = np.full(self.n + 1, -1, dtype=np.int32)
        self.ntri = 0
        self.nfree = 0
        self.rng = 12345

    cdef inline int orient(self, int i, int j, int k) noexcept nogil:
        return orient2d_c(self.P[i, 0], self.P[i, 1], self.P[j, 0], self.P[j, 1],
                          self.P[k, 0], self.P[k, 1])

    cdef int incircle_sos(self, int a, int b, int c, int p) noexcept nogil:
        cdef int s = incircle_c(self.P[a, 0], self.P[a, 1], self.P[b, 0], self.P[b, 1],
                                self.P[c, 0], self.P[c, 1], self.P[p, 0], self.P[p, 1])
        cdef int m
        if s != 0:
            return s
        m = a
        if b < m:
            m = b
        if c < m:
            m = c
        if p < m:
            m = p
        if m == p:
            return -1
        if m == a:
            return self.orient(p, b, c)
        if m == b:
            return -self.orient(p, a, c)
        return self.orient(p, a, b)

    cdef int new_tri(self, int a, int b, int c) noexcept nogil:
        cdef int t
        if self.nfree > 0:
            self.nfree -= 1
            t = self.freelist[self.nfree]
        else:
            t = self.ntri
            self.ntri += 1
        self.tv[3 * t] = a
        self.tv[3 * t + 1] = b
        self.tv[3 * t + 2] = c
        self.alive[t] = 1
        return t

    cdef inline int is_ghost(self, int t) noexcept nogil:
        return self.tv[3 * t] < 0 or self.tv[3 * t + 1] < 0 or self.tv[3 * t + 2] < 0

    cdef int conflict(self, int t, int p) noexcept nogil:
        cdef int a = self.tv[3 * t], b = self.tv[3 * t + 1], c = self.tv[3 * t + 2]
        cdef int u, v, o
        cdef double dx1, dy1, dx2, dy2
        if a < 0 or b < 0 or c < 0:
            if a < 0:
                u = b
                v = c
            elif b < 0:
                u = c
                v = a
            else:
                u = a
                v = b
            o = self.orient(u, v, p)
            if o > 0:
                return 1
            if o < 0:
                return 0
            dx1 = self.P[p, 0] - self.P[u, 0]
            dy1 = self.P[p, 1] - self.P[u, 1]
            dx2 = self.P[v, 0] - self.P[u, 0]
            dy2 = self.P[v, 1] - self.P[u, 1]
            if dx1 * dx2 + dy1 * dy2 <= 0.0:
                return 0
            dx1 = self.P[p, 0] - self.P[v, 0]
            dy1 = self.P[p, 1] - self.P[v, 1]
            return 1 if (dx1 * (-dx2) + dy1 * (-dy2)) > 0.0 else 0
        return 1 if self.incircle_sos(a, b, c, p) > 0 else 0

    cdef void link(self, int t, int i, int s) noexcept nogil:
        self.tn[3 * t + i] = s

    cdef int locate(self, int t, int p) noexcept nogil:
        cdef int i, j, off, a, b, steps = 0
        cdef int moved
        if self.is_ghost(t):
            for i in range(3):
                if self.tv[3 * t + i] < 0:
                    t = self.tn[3 * t + i]
                    break
        while True:
            if self.is_ghost(t):
                return t
            self.rng = self.rng * 1103515245 + 12345
            off = (self.rng >> 16) % 3
            moved = 0
            for j in range(3):
                i = (j + off) % 3
                a = self.tv[3 * t + (i + 1) % 3]
                b = self.tv[3 * t + (i + 2) % 3]
                if self.orient(a, b, p) < 0:
                    t = self.tn[3 * t + i]
                    moved = 1
                    break
            if not moved:
                return t
            steps += 1

    cdef void insert(self, int p, int seed, int stamp_id):
        cdef int ncav = 0, nb = 0, head = 0
        cdef int t, i, o, s, e, j, nt, k
        self.cavity[0] = seed
        ncav = 1
        self.stamp[seed] = stamp_id
        self.verdict[seed] = 1
        while head < ncav:
            t = self.cavity[head]
            head += 1
            for i in range(3):
                o = self.tn[3 * t + i]
                if self.stamp[o] != stamp_id:
                    self.stamp[o] = stamp_id
                    self.verdict[o] = self.conflict(o, p)
                    if self.verdict[o]:
                        self.cavity[ncav] = o
                        ncav += 1
                if not self.verdict[o]:
                    s = self.tv[3 * t + (i + 1) % 3]
                    e = self.tv[3 * t + (i + 2) % 3]
                    self.bs[nb] = s
                    self.be[nb] = e
                    self.bo[nb] = o
                    for j in range(3):
                        if self.tn[3 * o + j] == t:
                            self.bj[nb] = j
                            break
                    nb += 1
        for k in range(ncav):
            t = self.cavity[k]
            self.alive[t] = 0
            self.freelist[self.nfree] = t
            self.nfree += 1
        for k in range(nb):
            s = self.bs[k]
            e = self.be[k]
            nt = self.new_tri(s, e, p)
            self.tn[3 * nt + 2] = self.bo[k]
            self.tn[3 * self.bo[k] + self.bj[k]] = nt
            self.start_of[s if s >= 0 else self.n] = nt
            self.end_of[e if e >= 0 else self.n] = nt
            self.cavity[k] = nt
        for k in range(nb):
            nt = self.cavity[k]
            s = self.tv[3 * nt]
            e = self.tv[3 * nt + 1]
            self.tn[3 * nt] = self.start_of[e if e >= 0 else self.n]
            self.tn[3 * nt + 1] = self.end_of[s if s >= 0 else self.n]

    def run(self, const int[::1] order):
        cdef int m = order.shape[0]
        cdef int i0 = order[0], i1 = order[1], i2 = -1, idx = -1, k, o, tmp
        cdef int t0, g0, g1, g2, last, seed, p
        for k in range(2, m):
            o = self.orient(i0, i1, order[k])
            if o != 0:
                i2 = order[k]
                idx = k
                break
        if i2 < 0:
            raise ValueError("degenerate point set: all points are collinear")
        if o < 0:
            tmp = i0
            i0 = i1
            i1 = tmp
        t0 = self.new_tri(i0, i1, i2)
        g0 = self.new_tri(i2, i1, -1)
        g1 = self.new_tri(i0, i2, -1)
        g2 = self.new_tri(i1, i0, -1)
        # t0 slot i is opposite vertex i
        self.tn[3 * t0 + 0] = g0
        self.tn[3 * t0 + 1] = g1
        self.tn[3 * t0 + 2] = g2
        # ghost (u, v, INF): slot 2 faces the real edge, slot 0 edge (v,INF), slot 1 edge (INF,u)
        self.tn[3 * g0 + 2] = t0
        self.tn[3 * g0 + 0] = g2
        self.tn[3 * g0 + 1] = g1
        self.tn[3 * g1 + 2] = t0
        self.tn[3 * g1 + 0] = g0
        self.tn[3 * g1 + 1] = g2
        self.tn[3 * g2 + 2] = t0
        self.tn[3 * g2 + 0] = g1
        self.tn[3 * g2 + 1] = g0
        last = t0
        stamp_id = 1
        for k in range(2, m):
            if k == idx:
                continue
            p = order[k]
            seed = self.locate(last, p)
            stamp_id += 1
            self.insert(p, seed, stamp_id)
            last = self.cavity[0]
        out = []
        for k in range(self.ntri):
            if self.alive[k] and not self.is_ghost(k):
                out.append((self.tv[3 * k], self.tv[3 * k + 1], self.tv[3 * k + 2]))
        return out


def triangulate_core(const double[:, ::1] P, const int[::1] order):
    return _BW(P).run(order)


# ---------------------------------------------------------------- recon scans

cdef inline double vec_angle(double* u, double* v, int d, double nu, double nv) noexcept nogil:
    cdef double s = 0.0, c = 0.0, a, b
    cdef int i
    for i in range(d):
        a = u[i] * nv - v[i] * nu
        b = u[i] * nv + v[i] * nu
        s += a * a
        c += b * b
    return 2.0 * atan2(sqrt(s), sqrt(c))


cdef inline double threshold(double dab, double dcb, double k, double base) noexcept nogil:
    cdef double r1 = k * dcb / dab
    cdef double r2 = k * dab / dcb
    cdef double t1, t2
    if r1 > 1.0:
        r1 = 1.0
    if r2 > 1.0:
        r2 = 1.0
    t1 = acos(r1)
    t2 = acos(r2)
    return base + (t1 if t1 > t2 else t2)


cdef inline int compat_c(double* u, double nu, double* v, double nv, int d,
                         double k, double base) noexcept nogil:
    # u = a - b, v = c - b; cheap reject below the smallest possible threshold
    cdef double dot = 0.0
    cdef int i
    for i in range(d):
        dot += u[i] * v[i]
    if dot > (k + 1e-9) * nu * nv:
        return 0
    return vec_angle(u, v, d, nu, nv) > threshold(nu, nv, k, base)


def nn_compat_scan(const double[:, ::1] P, const int[::1] closest, double k, double base,
                   const int[:, ::1] seeds=None):
    """For every x, the nearest y with (closest[x], x, y) compatible, or -1.

    ``seeds`` (optional, -1 padded) lists a few likely candidates per vertex;
    they are tested first so that the full scan starts with a tight bound.
    The answer does not depend on them.
    """
    cdef int n = P.shape[0], d = P.shape[1]
    cdef int x, y, a, i, besti, j, m = 0
    cdef double best, d2, t, nu, nv, px, py, dx, dy
    cdef double u[64]
    cdef double v[64]
    cdef const double* Q
    out = np.full(n, -1, dtype=np.int32)
    cdef int[::1] res = out
    if d > 64:
        raise ValueError("dimension above 64 not supported by the compiled kernel")
    if n == 0:
        return out
    Q = &P[0, 0]
    if seeds is not None:
        m = seeds.shape[1]
    with nogil:
        for x in range(n):
            a = closest[x]
            nu = 0.0
            for i in range(d):
                u[i] = Q[a * d + i] - Q[x * d + i]
                nu += u[i] * u[i]
            nu = sqrt(nu)
            best = INFINITY
            besti = -1
            for j in range(m):
                y = seeds[x, j]
                if y < 0 or y == x or y == a:
                    continue
                d2 = 0.0
                for i in range(d):
                    v[i] = Q[y * d + i] - Q[x * d + i]
                    d2 += v[i] * v[i]
                if d2 > best or (d2 == best and y > besti):
                    continue
                if compat_c(u, nu, v, sqrt(d2), d, k, base):
                    best = d2
                    besti = y
            if d == 2:
                # planar fast path: the distance filter dominates the scan
                px = Q[2 * x]
                py = Q[2 * x + 1]
                for y in range(n):
                    dx = Q[2 * y] - px
                    dy = Q[2 * y + 1] - py
                    d2 = dx * dx + dy * dy
                    if d2 > best or y == x or y == a:
                        continue
                    if d2 == best and y >= besti:
                        continue
                    v[0] = dx
                    v[1] = dy
                    if compat_c(u, nu, v, sqrt(d2), 2, k, base):
                        best = d2
                        besti = y
            else:
                for y in range(n):
                    if y == x or y == a:
                        continue
                    d2 = 0.0
                    for i in range(d):
                        t = Q[y * d + i] - Q[x * d + i]
                        d2 += t * t
                    if d2 > best or (d2 == best and y >= besti):
                        continue
                    for i in range(d):
                        v[i] = Q[y * d + i] - Q[x * d + i]
                    nv = sqrt(d2)
                    if compat_c(u, nu, v, nv, d, k, base):
                        best = d2
                        besti = y
            res[x] = besti
    return out


def crust_scan(const double[:, ::1] P, const int[::1] indptr, const int[::1] indices, double k, double base):
    """Closest and closest-compatible neighbour of each vertex among its
    Delaunay neighbours.  Ties go to the lowest index."""
    cdef int n = P.shape[0], d = P.shape[1]
    cdef int x, j, y, a, i, besti
    cdef double best, d2, t, nu, nv
    cdef double u[64]
    cdef double v[64]
    cl = np.full(n, -1, dtype=np.int32)
    cc = np.full(n, -1, dtype=np.int32)
    cdef int[::1] rcl = cl
    cdef int[::1] rcc = cc
    with nogil:
        for x in range(n):
            best = INFINITY
            besti = -1
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                d2 = 0.0
                for i in range(d):
                    t = P[y, i] - P[x, i]
                    d2 += t * t
                if d2 < best or (d2 == best and y < besti):
                    best = d2
                    besti = y
            rcl[x] = besti
            a = besti
            if a < 0:
                continue
            nu = 0.0
            for i in range(d):
                u[i] = P[a, i] - P[x, i]
                nu += u[i] * u[i]
            nu = sqrt(nu)
            best = INFINITY
            besti = -1
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                if y == a:
                    continue
                d2 = 0.0
                for i in range(d):
                    v[i] = P[y, i] - P[x, i]
                    d2 += v[i] * v[i]
                if d2 > best or (d2 == best and y > besti):
                    continue
                nv = sqrt(d2)
                if compat_c(u, nu, v, nv, d, k, base):
                    best = d2
                    besti = y
            rcc[x] = besti
    return cl, cc
