"""Euclidean lattices with exact rational Gram matrices.

The central computation is the degree profile d(i) = max over rank-i
primitive sublattices of -log covol, its concave hull (the Newton polygon)
and the slope vector.  Everything is exact: covolumes squared are rational,
so degrees are `LogRat` values and hull ordinates are `LogLin` combinations.

Searches are certified.  Shortest vectors come from a full scan of an
integer coordinate box that provably contains every vector below the bound
(the box radii use the adjugate of the Gram matrix, after LLL reduction to
keep them small).  Intermediate-rank minimal covolumes enumerate all vectors
below a Minkowski-type bound and take the best saturated span; ranks r-1 and
r reduce to the dual and the determinant.  The rank cap is 6.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import LogLin, LogRat

RANK_CAP = 6


class UnsupportedRank(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    pass


@dataclass(frozen=True)
class EucLattice:
    """Free Z-lattice described by a symmetric positive-definite Gram matrix."""

    gram: tuple

    def __post_init__(self):
        g = tuple(tuple(Fraction(x) for x in row) for row in self.gram)
        r = len(g)
        if r == 0 or any(len(row) != r for row in g):
            raise ValueError("gram must be square")
        if r > RANK_CAP:
            raise UnsupportedRank(f"rank {r} exceeds the cap {RANK_CAP}")
        for i in range(r):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram must be symmetric")
        object.__setattr__(self, "gram", g)
        # leading principal minors must be positive
        m = [list(row) for row in g]
        if _det_frac(m) <= 0 or any(_det_frac([row[:k] for row in m[:k]]) <= 0 for k in range(1, r)):
            raise NotPositiveDefinite("gram is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)


def lattice_from_basis(rows: Sequence[Sequence]) -> EucLattice:
    """Lattice spanned by the given row vectors with the standard inner product."""
    rows = [list(map(Fraction, r)) for r in rows]
    gram = [[sum(a * b for a, b in zip(u, v)) for v in rows] for u in rows]
    return EucLattice(tuple(tuple(row) for row in gram))


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _det_frac(m) -> Fraction:
    m = [list(map(Fraction, row)) for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((k for k in range(col, n) if m[k][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for k in range(col + 1, n):
            f = m[k][col] * inv
            if f:
                m[k] = [a - f * b for a, b in zip(m[k], m[col])]
    return det


def _det_int(m) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _adjugate_int(g):
    n = len(g)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[g[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * (_det_int(minor) if minor else 1)
    return adj


def _matmul_int(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _int_gram(lat: EucLattice):
    """(G, den) with G integral and gram = G / den."""
    den = 1
    for row in lat.gram:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    g = [[int(x * den) for x in row] for row in lat.gram]
    return g, den


# ---------------------------------------------------------------------------
# reduction and certified vector enumeration (integer Gram matrices)


def _gram_of_transform(u, g):
    return _matmul_int(_matmul_int(u, g), [list(r) for r in zip(*u)])


def _lll_transform(g, delta=Fraction(99, 100)):
    """Exact LLL on an integer Gram matrix; returns the unimodular rows U."""
    r = len(g)
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

    def gso(cur):
        mu = [[Fraction(0)] * r for _ in range(r)]
        bstar = [Fraction(0)] * r
        for i in range(r):
            bstar[i] = Fraction(cur[i][i])
            for j in range(i):
                mu[i][j] = (Fraction(cur[i][j]) - sum(mu[i][k] * mu[j][k] * bstar[k] for k in range(j))) / bstar[j]
                bstar[i] -= mu[i][j] ** 2 * bstar[j]
        return mu, bstar

    cur = [list(row) for row in g]
    k = 1
    guard = 0
    while k < r:
        guard += 1
        if guard > 10000:
            break  # defensive; reduction quality only affects speed
        mu, bstar = gso(cur)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                u[k] = [a - q * b for a, b in zip(u[k], u[j])]
                cur = _gram_of_transform(u, g)
                mu, bstar = gso(cur)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            u[k], u[k - 1] = u[k - 1], u[k]
            cur = _gram_of_transform(u, g)
            k = max(k - 1, 1)
    return u


def _vectors_within(g, bound, reduce_first=True):
    """All nonzero x in Z^r with x g x^T <= bound, up to sign.

    Scans the integer box |x_i| <= sqrt(bound * adj_ii / det); any vector
    below the bound satisfies these inequalities, so the scan is complete.
    Sign normalisation keeps the first nonzero coordinate positive.
    """
    r = len(g)
    u = _lll_transform(g) if (reduce_first and r > 1) else [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    gg = _gram_of_transform(u, g)
    det = _det_int(gg)
    if det <= 0:
        raise NotPositiveDefinite("degenerate gram in enumeration")
    adj = _adjugate_int(gg)
    radii = []
    for i in range(r):
        num = bound * adj[i][i]
        radii.append(math.isqrt(num // det) + 1 if num >= 0 else 0)
    out = []
    rng = [range(-rad, rad + 1) for rad in radii]
    # first nonzero coordinate positive: iterate first axis over >= 0 only
    rng[0] = range(0, radii[0] + 1)
    for x in itertools.product(*rng):
        if x[0] == 0:
            lead = next((v for v in x if v != 0), 0)
            if lead <= 0:
                continue
        elif all(v == 0 for v in x):
            continue
        q = 0
        for i in range(r):
            xi = x[i]
            if xi:
                q += gg[i][i] * xi * xi
                for j in range(i):
                    q += 2 * gg[i][j] * xi * x[j]
        if 0 < q <= bound:
            orig = tuple(sum(x[i] * u[i][j] for i in range(r)) for j in range(r))
            for v in orig:
                if v != 0:
                    if v < 0:
                        orig = tuple(-w for w in orig)
                    break
            out.append((q, orig))
    out.sort()
    return out


def _svp_int(g):
    """(min norm^2, witness) of an integer Gram matrix, certified."""
    r = len(g)
    if r == 1:
        return g[0][0], (1,)
    u = _lll_transform(g)
    gg = _gram_of_transform(u, g)
    bound = min(gg[i][i] for i in range(r))
    vecs = _vectors_within(g, bound, reduce_first=False) if r == 1 else _vectors_within(g, bound)
    # bound is attained by a basis vector, so the list is nonempty
    q, x = vecs[0]
    return q, x


def _content_of_minors(x_rows):
    """gcd of all maximal minors of an i x r integer matrix."""
    i = len(x_rows)
    r = len(x_rows[0])
    gcd = 0
    for cols in itertools.combinations(range(r), i):
        minor = _det_int([[row[c] for c in cols] for row in x_rows])
        gcd = math.gcd(gcd, abs(minor))
        if gcd == 1:
            return 1
    return gcd


def _subset_covol2(g, rows):
    """covol^2 of the saturation of the span of the given coefficient rows."""
    gram = [[sum(rows[a][i] * g[i][j] * rows[b][j] for i in range(len(g)) for j in range(len(g)))
             for b in range(len(rows))] for a in range(len(rows))]
    d = _det_int(gram)
    if d == 0:
        return None
    c = _content_of_minors(rows)
    num, den = d, c * c
    return Fraction(num, den)


def _min_covol2_int(g, i):
    """Minimal covol^2 over rank-i primitive sublattices of an int Gram."""
    r = len(g)
    if i == r:
        return Fraction(_det_int(g))
    if i == 1:
        q, _ = _svp_int(g)
        return Fraction(q)
    if i == r - 1:
        # minimal covol = covol(L) * lambda_1(dual); dual gram is adj/det, so
        # covol^2 = det * (lambda_1^2(adj)/det) = lambda_1^2(adj)
        q, _ = _svp_int(_adjugate_int(g))
        return Fraction(q)
    # 1 < i < r-1 (so r >= 4, i <= 4): search spans of certified short vectors
    m1, _ = _svp_int(g)
    u = _lll_transform(g)
    rows = sorted(((sum(u[a][s] * g[s][t] * u[a][t] for s in range(r) for t in range(r)), u[a]) for a in range(r)))
    seed = _subset_covol2(g, [rows[k][1] for k in range(i)])
    assert seed is not None
    best = seed
    # Minkowski: prod lambda_j(S)^2 <= gamma_i^i covol(S)^2 and lambda_j(S) >= lambda_1,
    # with gamma_i^i <= (4/3)^(i(i-1)/2); a rank <= 4 lattice has a basis realising
    # its minima, so the optimum is spanned by vectors below this bound.
    c2 = Fraction(4, 3) ** (i * (i - 1) // 2) * best / Fraction(m1) ** (i - 1)
    vecs = _vectors_within(g, math.floor(c2))
    coords = [v for _, v in vecs]
    for combo in itertools.combinations(range(len(coords)), i):
        cv = _subset_covol2(g, [coords[k] for k in combo])
        if cv is not None and cv < best:
            best = cv
            c2 = Fraction(4, 3) ** (i * (i - 1) // 2) * best / Fraction(m1) ** (i - 1)
    return best


# ---------------------------------------------------------------------------
# public lattice invariants


def degree(lat: EucLattice) -> LogRat:
    """Arakelov-style degree -(1/2) log det(gram)."""
    g, den = _int_gram(lat)
    d = Fraction(_det_int(g), den ** lat.rank)
    return LogRat(1 / d)


def max_deg_rank(lat: EucLattice, i: int) -> LogRat:
    """Largest degree of a rank-i primitive sublattice (min covolume)."""
    if not 1 <= i <= lat.rank:
        raise ValueError("need 1 <= i <= rank")
    g, den = _int_gram(lat)
    covol2 = _min_covol2_int(g, i) / den ** i
    return LogRat(1 / covol2)


@dataclass(frozen=True)
class NewtonPolygon:
    """Degree profile d, concave hull ordinates m, and slope vector."""

    d: tuple       # LogLin, indices 1..r (d[0] corresponds to rank 1)
    m: tuple       # LogLin, indices 0..r, m[0] = 0
    slopes: tuple  # LogLin, length r, non-increasing

    @property
    def rank(self) -> int:
        return len(self.slopes)


def newton_polygon(lat: EucLattice) -> NewtonPolygon:
    r = lat.rank
    d = [max_deg_rank(lat, i).as_lin() for i in range(1, r + 1)]
    pts = [(0, LogLin.zero())] + [(i + 1, d[i]) for i in range(r)]
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            (xa, ya), (xb, yb) = hull[-2], hull[-1]
            xc, yc = p
            # pop b when slope(a,b) <= slope(b,c): b is under the chord a-c
            left = (yb - ya) * (xc - xb)
            right = (yc - yb) * (xb - xa)
            if left.compare(right) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    m = [LogLin.zero()] * (r + 1)
    seg = 0
    for i in range(r + 1):
        while hull[seg + 1][0] < i:
            seg += 1
        (xa, ya), (xb, yb) = hull[seg], hull[seg + 1]
        if i == xa:
            m[i] = ya
        elif i == xb:
            m[i] = yb
        else:
            t = Fraction(i - xa, xb - xa)
            m[i] = ya.scale(1 - t) + yb.scale(t)
    slopes = tuple(m[i] - m[i - 1] for i in range(1, r + 1))
    return NewtonPolygon(tuple(d), tuple(m), slopes)


def slopes(lat: EucLattice) -> tuple:
    return newton_polygon(lat).slopes


def min_slope(lat: EucLattice) -> LogLin:
    return newton_polygon(lat).slopes[-1]


def is_semistable(lat: EucLattice) -> bool:
    """All slopes equal, i.e. the polygon is a straight segment."""
    np_ = newton_polygon(lat)
    return np_.slopes[0].compare(np_.slopes[-1]) == 0


def successive_minima(lat: EucLattice) -> tuple:
    """log lambda_i as LogRat values, via certified enumeration."""
    g, den = _int_gram(lat)
    r = lat.rank
    u = _lll_transform(g) if r > 1 else [[1]]
    gg = _gram_of_transform(u, g)
    bound = max(gg[i][i] for i in range(r))
    vecs = _vectors_within(g, bound)
    norms = []
    chosen: list = []
    for q, x in vecs:
        if _rank_int(chosen + [list(x)]) > len(chosen):
            chosen.append(list(x))
            norms.append(q)
            if len(chosen) == r:
                break
    assert len(norms) == r
    return tuple(LogRat(Fraction(q, den)) for q in norms)


def _rank_int(rows) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    piv_col = 0
    for col in range(ncols):
        piv = next((k for k in range(rank, len(m)) if m[k][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        for k in range(len(m)):
            if k != rank and m[k][col] != 0:
                f = m[k][col] * inv
                m[k] = [a - f * b for a, b in zip(m[k], m[rank])]
        rank += 1
    return rank


def dual_lattice(lat: EucLattice) -> EucLattice:
    """Dual metric structure: the inverse Gram matrix."""
    g = [list(row) for row in lat.gram]
    r = lat.rank
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    for col in range(r):
        piv = next(k for k in range(col, r) if g[k][col] != 0)
        g[col], g[piv] = g[piv], g[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        f = 1 / g[col][col]
        g[col] = [x * f for x in g[col]]
        inv[col] = [x * f for x in inv[col]]
        for k in range(r):
            if k != col and g[k][col] != 0:
                f = g[k][col]
                g[k] = [a - f * b for a, b in zip(g[k], g[col])]
                inv[k] = [a - f * b for a, b in zip(inv[k], inv[col])]
    return EucLattice(tuple(tuple(row) for row in inv))


# ---------------------------------------------------------------------------
# rank-2 reduction and the shape invariant


@dataclass(frozen=True)
class TauInvariant:
    """Shape of a rank-2 lattice in the fundamental domain.

    tau = x + i*y with x = |g12|/g11 in [0, 1/2] and y^2 = det/g11^2 rational,
    computed from a Lagrange-Gauss reduced basis.  Semistable iff y <= 1.
    """

    x: Fraction
    y2: Fraction

    @property
    def y(self) -> float:
        return math.sqrt(float(self.y2))

    @property
    def im_le_one(self) -> bool:
        return self.y2 <= 1


def lagrange_gauss(gram) -> tuple:
    """Reduced Gram (a, b, c) with 2|b| <= a <= c, plus the transform rows."""
    a, b, c = Fraction(gram[0][0]), Fraction(gram[0][1]), Fraction(gram[1][1])
    u = [[1, 0], [0, 1]]
    if a > c:
        a, c = c, a
        u = [u[1], u[0]]
    while True:
        # nearest integer to b/a, ties toward zero for determinism
        q = (2 * b + a) // (2 * a) if b >= 0 else -((2 * (-b) + a) // (2 * a))
        if q:
            c = c - 2 * q * b + q * q * a
            b = b - q * a
            u[1] = [x - q * y for x, y in zip(u[1], u[0])]
        if c < a:
            a, c = c, a
            b = b
            u = [u[1], u[0]]
        else:
            break
    return (a, b, c), u


def tau_invariant(lat: EucLattice) -> TauInvariant:
    if lat.rank != 2:
        raise UnsupportedRank("tau invariant needs rank 2")
    (a, b, c), _ = lagrange_gauss(lat.gram)
    det = a * c - b * b
    return TauInvariant(x=abs(b) / a, y2=det / (a * a))


# ---------------------------------------------------------------------------
# minima vs slopes comparison


def minima_slope_bound(r: int) -> LogLin:
    """Rank bound C_r with |log lambda_i + mu_i| <= C_r.

    From Minkowski's second theorem and lambda_j(S) >= lambda_j(L) for
    sublattices: every d(i) sits between -sum_{j<=i} log lambda_j and that
    value plus (i/2) log gamma_i.  The first function is already concave in
    i, so the hull stays within the same band and each slope differs from
    -log lambda_i by at most C_r = (r/2) log gamma_r <= r(r-1)/4 * log(4/3).
    """
    return LogLin.from_log(Fraction(4, 3), Fraction(r * (r - 1), 4))


def check_minima_slope_gaps(lat: EucLattice):
    """Per-index gaps log lambda_i + mu_i with exact bound verdicts.

    Returns a list of (i, gap, within_two_sided, nonnegative); the two-sided
    bound |gap| <= C_r is the provable one, nonnegativity is only flagged.
    """
    mins = successive_minima(lat)
    mus = slopes(lat)
    c_r = minima_slope_bound(lat.rank)
    out = []
    for i, (lam, mu) in enumerate(zip(mins, mus), start=1):
        gap = lam.as_lin() + mu
        within = gap.compare(c_r) <= 0 and gap.compare(-c_r) >= 0
        out.append((i, gap, within, gap.sign() >= 0))
    return out
