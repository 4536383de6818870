"""Exact rational convex geometry in three dimensions.

Points, halfspaces and convex polytopes are stored with exact rational
coordinates (``fractions.Fraction``), so every predicate in this module is
decided exactly: a point is on a plane, strictly inside, or strictly outside,
never "within epsilon".  Floating point is deliberately absent here; callers
that want floats convert at the boundary.

Internally most tests run on integers.  A point caches a homogeneous integer
quadruple ``(x, y, z, w)`` with ``w > 0``, and a halfspace stores integer
coefficients ``a*x + b*y + c*z <= d`` reduced to gcd 1, so the hot predicates
(sidedness, containment, orientation) are plain integer arithmetic.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Union

Rational = Union[int, float, str, Fraction]


class GeometryError(Exception):
    """Base class for geometric failures."""


class DegenerateInput(GeometryError):
    """Raised when an operation needs a full-dimensional input but the
    supplied data is collinear, coplanar, or otherwise flat."""


class ZeroDirection(GeometryError):
    """Raised when a direction vector is the zero vector."""


def to_fraction(value: Rational) -> Fraction:
    """Coerce a number to an exact Fraction.

    Floats are read through their shortest ``repr`` (decimal semantics), so a
    JSON value such as ``241.5`` becomes 483/2 rather than a 53-bit binary
    expansion.  Strings may be decimal ("1.5"), rational ("3/4"), or use an
    exponent ("2.5e2").
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(decimal.Decimal(repr(value)))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            return Fraction(decimal.Decimal(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _gcd4(a: int, b: int, c: int, d: int) -> int:
    return gcd(gcd(abs(a), abs(b)), gcd(abs(c), abs(d)))


class Point3:
    """A point (or displacement) with exact rational coordinates."""

    __slots__ = ("x", "y", "z", "_h")

    def __init__(self, x: Rational, y: Rational, z: Rational):
        self.x = to_fraction(x)
        self.y = to_fraction(y)
        self.z = to_fraction(z)
        w = _lcm(_lcm(self.x.denominator, self.y.denominator), self.z.denominator)
        self._h = (
            self.x.numerator * (w // self.x.denominator),
            self.y.numerator * (w // self.y.denominator),
            self.z.numerator * (w // self.z.denominator),
            w,
        )

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Point3":
        return Point3(-self.x, -self.y, -self.z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Point3):
            return NotImplemented
        return self.x == other.x and self.y == other.y and self.z == other.z

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.z))

    def astuple(self) -> tuple:
        return (self.x, self.y, self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __repr__(self) -> str:
        return f"Point3({self.x}, {self.y}, {self.z})"


def dot3(u: Point3, v: Point3) -> Fraction:
    return u.x * v.x + u.y * v.y + u.z * v.z


def cross3(u: Point3, v: Point3) -> Point3:
    return Point3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


@dataclass(frozen=True)
class Triangle3:
    """A triangle given by its three corners."""

    a: Point3
    b: Point3
    c: Point3

    def is_degenerate(self) -> bool:
        n = cross3(self.b - self.a, self.c - self.a)
        return n.x == 0 and n.y == 0 and n.z == 0

    def vertices(self) -> tuple:
        return (self.a, self.b, self.c)


class Halfspace:
    """The closed halfspace {x : normal . x <= offset}.

    Coefficients are stored as integers with gcd 1, preserving the direction
    of the inequality, so proportional (same-sign) normal/offset pairs compare
    equal and hash identically.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, normal: Sequence[Rational], offset: Rational):
        na, nb, nc = (to_fraction(v) for v in normal)
        nd = to_fraction(offset)
        if na == 0 and nb == 0 and nc == 0:
            raise GeometryError("halfspace normal must be nonzero")
        w = _lcm(
            _lcm(na.denominator, nb.denominator),
            _lcm(nc.denominator, nd.denominator),
        )
        ia = na.numerator * (w // na.denominator)
        ib = nb.numerator * (w // nb.denominator)
        ic = nc.numerator * (w // nc.denominator)
        idd = nd.numerator * (w // nd.denominator)
        g = _gcd4(ia, ib, ic, idd)
        self.a = ia // g
        self.b = ib // g
        self.c = ic // g
        self.d = idd // g

    @classmethod
    def _from_ints(cls, a: int, b: int, c: int, d: int) -> "Halfspace":
        obj = object.__new__(cls)
        g = _gcd4(a, b, c, d)
        if g == 0:
            raise GeometryError("halfspace normal must be nonzero")
        obj.a = a // g
        obj.b = b // g
        obj.c = c // g
        obj.d = d // g
        if obj.a == 0 and obj.b == 0 and obj.c == 0:
            raise GeometryError("halfspace normal must be nonzero")
        return obj

    @property
    def normal(self) -> tuple:
        return (self.a, self.b, self.c)

    @property
    def offset(self) -> int:
        return self.d

    def key(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def contains(self, p: Point3) -> bool:
        hx, hy, hz, w = p._h
        return self.a * hx + self.b * hy + self.c * hz <= self.d * w

    def strictly_inside(self, p: Point3) -> bool:
        hx, hy, hz, w = p._h
        return self.a * hx + self.b * hy + self.c * hz < self.d * w

    def value(self, p: Point3) -> Fraction:
        """normal . p - offset (negative strictly inside)."""
        hx, hy, hz, w = p._h
        return Fraction(self.a * hx + self.b * hy + self.c * hz - self.d * w, w)

    def shifted(self, delta: Rational) -> "Halfspace":
        """Translate the boundary plane: {x : normal . x <= offset + delta},
        where normal/offset are the stored canonical integers."""
        return Halfspace((self.a, self.b, self.c), Fraction(self.d) + to_fraction(delta))

    def primitive(self) -> tuple:
        """(unit-content normal, offset as a Fraction) for parallel grouping."""
        g = gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))
        return ((self.a // g, self.b // g, self.c // g), Fraction(self.d, g))

    def as_dict(self) -> dict:
        return {"n": [self.a, self.b, self.c], "d": self.d}

    @classmethod
    def from_dict(cls, obj: dict) -> "Halfspace":
        return cls(obj["n"], obj["d"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Halfspace):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Halfspace(({self.a}, {self.b}, {self.c}), {self.d})"


class ConvexPolytope:
    """A bounded convex polytope with both descriptions kept in sync.

    ``halfspaces`` is an irredundant list of supporting halfspaces and
    ``vertices`` the exact extreme points.  Instances are produced by
    :func:`convex_hull`, :func:`intersect_halfspaces`,
    :func:`minkowski_sum_convex` and :func:`axis_aligned_box`; they should be
    treated as immutable.

    A *degenerate* polytope (flat: a polygon, segment or point) keeps only its
    extreme points; it has volume zero and no halfspace description.  Such
    objects appear when a halfspace intersection is nonempty but not
    full-dimensional, and they support only vertex-based queries.
    """

    __slots__ = ("halfspaces", "vertices", "id", "degenerate", "_triangles",
                 "_volume", "_bbox")

    def __init__(self, halfspaces, vertices, triangles=None, degenerate=False,
                 id: Optional[str] = None):
        self.halfspaces = list(halfspaces)
        self.vertices = list(vertices)
        self._triangles = triangles
        self.degenerate = degenerate
        self.id = id
        self._volume = None
        self._bbox = None

    def volume(self) -> Fraction:
        """Exact volume, from the divergence theorem over the boundary
        triangulation.  Zero for degenerate polytopes."""
        if self._volume is None:
            if self.degenerate:
                self._volume = Fraction(0)
            else:
                total = 0
                for (pa, pb, pc) in self._triangles:
                    ax, ay, az, aw = pa._h
                    bx, by, bz, bw = pb._h
                    cx, cy, cz, cw = pc._h
                    det = (
                        ax * (by * cz - bz * cy)
                        - ay * (bx * cz - bz * cx)
                        + az * (bx * cy - by * cx)
                    )
                    total += Fraction(det, aw * bw * cw)
                self._volume = total / 6
        return self._volume

    def support(self, direction: Sequence[Rational]) -> Fraction:
        """max of direction . v over the polytope (exact)."""
        dx, dy, dz = (to_fraction(v) for v in direction)
        if dx == 0 and dy == 0 and dz == 0:
            raise ZeroDirection("support direction must be nonzero")
        return max(dx * v.x + dy * v.y + dz * v.z for v in self.vertices)

    def contains(self, p: Point3) -> bool:
        if self.degenerate:
            raise GeometryError("containment is not defined on a degenerate polytope")
        return all(h.contains(p) for h in self.halfspaces)

    def strictly_contains(self, p: Point3) -> bool:
        if self.degenerate:
            return False
        return all(h.strictly_inside(p) for h in self.halfspaces)

    def bbox(self) -> tuple:
        """((minx, miny, minz), (maxx, maxy, maxz)) as Fractions."""
        if self._bbox is None:
            xs = [v.x for v in self.vertices]
            ys = [v.y for v in self.vertices]
            zs = [v.z for v in self.vertices]
            self._bbox = ((min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs)))
        return self._bbox

    def extent(self, axis: int) -> Fraction:
        lo, hi = self.bbox()
        return hi[axis] - lo[axis]

    def facet_triangles(self):
        """Triangles of the boundary, grouped by canonical facet plane."""
        groups = {}
        for tri in self._triangles:
            pl = _plane_ints(tri[0]._h, tri[1]._h, tri[2]._h)
            groups.setdefault(pl, []).append(tri)
        return groups

    def __repr__(self) -> str:
        tag = " degenerate" if self.degenerate else ""
        return (f"ConvexPolytope(|H|={len(self.halfspaces)}, "
                f"|V|={len(self.vertices)}{tag})")


# ---------------------------------------------------------------------------
# plane and rank primitives on homogeneous integer coordinates


def _plane_ints(P, Q, R):
    """Supporting plane through three homogeneous points, as reduced integers
    (a, b, c, d) meaning a*x + b*y + c*z <= d with the normal along
    (Q-P) x (R-P).  None if the points are collinear."""
    px, py, pz, pw = P
    qx, qy, qz, qw = Q
    rx, ry, rz, rw = R
    ux = qx * pw - px * qw
    uy = qy * pw - py * qw
    uz = qz * pw - pz * qw
    vx = rx * pw - px * rw
    vy = ry * pw - py * rw
    vz = rz * pw - pz * rw
    ax = uy * vz - uz * vy
    ay = uz * vx - ux * vz
    az = ux * vy - uy * vx
    if ax == 0 and ay == 0 and az == 0:
        return None
    a = ax * pw
    b = ay * pw
    c = az * pw
    d = ax * px + ay * py + az * pz
    g = _gcd4(a, b, c, d)
    return (a // g, b // g, c // g, d // g)


def _plane_eval(plane, H):
    a, b, c, d = plane
    hx, hy, hz, w = H
    return a * hx + b * hy + c * hz - d * w


def _rank3_normals(planes) -> bool:
    """True when the plane normals span all of 3-space."""
    norms = [(p[0], p[1], p[2]) for p in planes]
    n1 = norms[0]
    n2 = None
    for cand in norms[1:]:
        cx = n1[1] * cand[2] - n1[2] * cand[1]
        cy = n1[2] * cand[0] - n1[0] * cand[2]
        cz = n1[0] * cand[1] - n1[1] * cand[0]
        if cx or cy or cz:
            n2 = cand
            cross = (cx, cy, cz)
            break
    if n2 is None:
        return False
    for cand in norms:
        if cross[0] * cand[0] + cross[1] * cand[1] + cross[2] * cand[2]:
            return True
    return False


def _affine_rank(points: Sequence[Point3]) -> int:
    """Dimension of the affine hull of the points (0 for a single point)."""
    if not points:
        raise GeometryError("rank of empty point set")
    p0 = points[0]._h
    u1 = None
    for p in points[1:]:
        ph = p._h
        v = (ph[0] * p0[3] - p0[0] * ph[3],
             ph[1] * p0[3] - p0[1] * ph[3],
             ph[2] * p0[3] - p0[2] * ph[3])
        if v != (0, 0, 0):
            u1 = v
            break
    if u1 is None:
        return 0
    u2 = None
    for p in points[1:]:
        ph = p._h
        v = (ph[0] * p0[3] - p0[0] * ph[3],
             ph[1] * p0[3] - p0[1] * ph[3],
             ph[2] * p0[3] - p0[2] * ph[3])
        cx = u1[1] * v[2] - u1[2] * v[1]
        cy = u1[2] * v[0] - u1[0] * v[2]
        cz = u1[0] * v[1] - u1[1] * v[0]
        if cx or cy or cz:
            u2 = v
            n = (cx, cy, cz)
            break
    if u2 is None:
        return 1
    for p in points[1:]:
        ph = p._h
        v = (ph[0] * p0[3] - p0[0] * ph[3],
             ph[1] * p0[3] - p0[1] * ph[3],
             ph[2] * p0[3] - p0[2] * ph[3])
        if n[0] * v[0] + n[1] * v[1] + n[2] * v[2]:
            return 3
    return 2


# ---------------------------------------------------------------------------
# convex hull


def _as_point(p) -> Point3:
    if isinstance(p, Point3):
        return p
    return Point3(*p)


def convex_hull(points: Iterable, id: Optional[str] = None) -> ConvexPolytope:
    """Exact convex hull of a full-dimensional point set.

    Incremental insertion with exact orientation tests.  Only strictly
    visible facets are replaced, so interior and boundary-interior points are
    discarded; coplanar facet triangles are merged by their canonical plane
    when the halfspace list is assembled.  Raises DegenerateInput when all
    points are coplanar.
    """
    pts = []
    seen = set()
    for raw in points:
        p = _as_point(raw)
        k = (p.x, p.y, p.z)
        if k not in seen:
            seen.add(k)
            pts.append(p)
    if len(pts) < 4:
        raise DegenerateInput("need at least 4 distinct points for a 3D hull")

    H = [p._h for p in pts]
    n = len(pts)

    i0, i1 = 0, 1
    i2 = None
    for k in range(2, n):
        if _plane_ints(H[i0], H[i1], H[k]) is not None:
            i2 = k
            break
    if i2 is None:
        raise DegenerateInput("all points are collinear")
    base = _plane_ints(H[i0], H[i1], H[i2])
    i3 = None
    for k in range(2, n):
        if k == i2:
            continue
        if _plane_eval(base, H[k]) != 0:
            i3 = k
            break
    if i3 is None:
        raise DegenerateInput("all points are coplanar")

    # strictly interior reference point: average of the initial simplex
    ref = Point3(
        (pts[i0].x + pts[i1].x + pts[i2].x + pts[i3].x) / 4,
        (pts[i0].y + pts[i1].y + pts[i2].y + pts[i3].y) / 4,
        (pts[i0].z + pts[i1].z + pts[i2].z + pts[i3].z) / 4,
    )._h

    def oriented(a, b, c):
        pl = _plane_ints(H[a], H[b], H[c])
        if pl is None:
            raise GeometryError("degenerate facet in hull construction")
        s = _plane_eval(pl, ref)
        if s == 0:
            raise GeometryError("hull reference point on facet plane")
        if s > 0:
            return (a, c, b, (-pl[0], -pl[1], -pl[2], -pl[3]))
        return (a, b, c, pl)

    facets = [
        oriented(i0, i1, i2),
        oriented(i0, i1, i3),
        oriented(i0, i2, i3),
        oriented(i1, i2, i3),
    ]

    simplex = {i0, i1, i2, i3}
    for k in range(n):
        if k in simplex:
            continue
        hx, hy, hz, hw = H[k]
        visible = []
        rest = []
        for f in facets:
            a, b, c, d = f[3]
            if a * hx + b * hy + c * hz > d * hw:
                visible.append(f)
            else:
                rest.append(f)
        if not visible:
            continue
        vis_edges = set()
        for (a, b, c, _pl) in visible:
            vis_edges.add((a, b))
            vis_edges.add((b, c))
            vis_edges.add((c, a))
        horizon = sorted((u, v) for (u, v) in vis_edges if (v, u) not in vis_edges)
        for (u, v) in horizon:
            rest.append(oriented(u, v, k))
        facets = rest

    plane_groups = {}
    point_planes = {}
    for (a, b, c, pl) in facets:
        plane_groups.setdefault(pl, []).append((a, b, c))
        for idx in (a, b, c):
            point_planes.setdefault(idx, set()).add(pl)

    halfspaces = [Halfspace._from_ints(*pl) for pl in sorted(plane_groups)]
    extremes = [idx for idx, pls in point_planes.items()
                if len(pls) >= 3 and _rank3_normals(list(pls))]
    vertices = sorted((pts[i] for i in extremes),
                      key=lambda p: (p.x, p.y, p.z))
    triangles = [(pts[a], pts[b], pts[c]) for (a, b, c, _pl) in facets]

    for hs in halfspaces:
        ha, hb, hc, hd = hs.a, hs.b, hs.c, hs.d
        for ph in H:
            if ha * ph[0] + hb * ph[1] + hc * ph[2] > hd * ph[3]:
                raise GeometryError("hull self-check failed: input point outside hull")

    return ConvexPolytope(halfspaces, vertices, triangles=triangles, id=id)


def axis_aligned_box(min_corner, max_corner, id: Optional[str] = None) -> ConvexPolytope:
    """Axis-aligned box from opposite corners (exclusive of flat boxes)."""
    lo = _as_point(min_corner)
    hi = _as_point(max_corner)
    if not (lo.x < hi.x and lo.y < hi.y and lo.z < hi.z):
        raise DegenerateInput("axis_aligned_box needs strictly positive extents")
    corners = [
        Point3(x, y, z)
        for x in (lo.x, hi.x)
        for y in (lo.y, hi.y)
        for z in (lo.z, hi.z)
    ]
    return convex_hull(corners, id=id)


def minkowski_sum_convex(p: ConvexPolytope, q: ConvexPolytope,
                         id: Optional[str] = None) -> ConvexPolytope:
    """Minkowski sum of two convex polytopes.

    The sum of convex sets is the hull of pairwise vertex sums.  Degenerate
    operands (flat polytopes with a vertex list) are allowed; DegenerateInput
    propagates only when the sum itself is not full-dimensional.
    """
    verts = [a + b for a in p.vertices for b in q.vertices]
    return convex_hull(verts, id=id)


def support(p: ConvexPolytope, direction: Sequence[Rational]) -> Fraction:
    """Support function of the polytope: max of direction . x."""
    return p.support(direction)


def volume(p: ConvexPolytope) -> Fraction:
    """Exact volume of the polytope in the cube of its coordinate unit."""
    return p.volume()


# ---------------------------------------------------------------------------
# halfspace intersection (vertex enumeration)


def _dedupe_dominated(halfspaces):
    """Drop exact duplicates and, among parallel same-direction halfspaces,
    keep only the tightest one."""
    best = {}
    for h in halfspaces:
        norm, off = h.primitive()
        cur = best.get(norm)
        if cur is None or off < cur[0]:
            best[norm] = (off, h)
    return [h for (_off, h) in sorted(best.values(), key=lambda t: t[1].key())]


def _vertex_candidates(rows):
    """All feasible intersection points of plane triples, as reduced
    homogeneous integer quadruples with positive w."""
    cands = {}
    m = len(rows)
    for i in range(m):
        ai, bi, ci, di = rows[i]
        for j in range(i + 1, m):
            aj, bj, cj, dj = rows[j]
            # cofactors reused across k
            for k in range(j + 1, m):
                ak, bk, ck, dk = rows[k]
                mbc = bj * ck - cj * bk
                mac = aj * ck - cj * ak
                mab = aj * bk - bj * ak
                det = ai * mbc - bi * mac + ci * mab
                if det == 0:
                    continue
                mdc = dj * ck - cj * dk
                mdb = dj * bk - bj * dk
                mad = aj * dk - dj * ak
                mbd = bj * dk - dj * bk
                X = di * mbc - bi * mdc + ci * mdb
                Y = ai * mdc - di * mac + ci * mad
                Z = ai * mbd - bi * mad + di * mab
                if det < 0:
                    X, Y, Z, det2 = -X, -Y, -Z, -det
                else:
                    det2 = det
                ok = True
                for (a, b, c, d) in rows:
                    if a * X + b * Y + c * Z > d * det2:
                        ok = False
                        break
                if ok:
                    g = _gcd4(X, Y, Z, det2)
                    cands[(X // g, Y // g, Z // g, det2 // g)] = True
    return cands


def _hull2d_extremes(pairs):
    """Indices of the extreme points of a 2D point set, via a strict
    monotone chain (collinear boundary points are dropped)."""
    order = sorted(range(len(pairs)), key=lambda i: pairs[i])

    def turn(o, a, b):
        return ((pairs[a][0] - pairs[o][0]) * (pairs[b][1] - pairs[o][1])
                - (pairs[a][1] - pairs[o][1]) * (pairs[b][0] - pairs[o][0]))

    lower = []
    for i in order:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper = []
    for i in reversed(order):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return list(dict.fromkeys(lower[:-1] + upper[:-1]))


def _degenerate_from_points(points, rank, id=None) -> ConvexPolytope:
    """Flat polytope (point, segment, or polygon) holding its extreme points."""
    if rank == 0:
        verts = [points[0]]
    elif rank == 1:
        p0 = points[0]
        direction = None
        for p in points[1:]:
            v = p - p0
            if v != Point3(0, 0, 0):
                direction = v
                break
        params = [(dot3(direction, p - p0), p) for p in points]
        params.sort(key=lambda t: t[0])
        verts = [params[0][1]]
        if params[-1][1] != params[0][1]:
            verts.append(params[-1][1])
    else:
        p0 = points[0]
        u1 = None
        normal = None
        for p in points[1:]:
            v = p - p0
            if v != Point3(0, 0, 0):
                if u1 is None:
                    u1 = v
                else:
                    c = cross3(u1, v)
                    if c != Point3(0, 0, 0):
                        normal = c
                        break
        drop = max(range(3), key=lambda i: abs(normal.astuple()[i]))
        keep = [i for i in range(3) if i != drop]
        pairs = [(p.astuple()[keep[0]], p.astuple()[keep[1]]) for p in points]
        idx = _hull2d_extremes(pairs)
        verts = [points[i] for i in idx]
    verts = sorted(set(verts), key=lambda p: (p.x, p.y, p.z))
    return ConvexPolytope([], verts, triangles=[], degenerate=True, id=id)


def _polytope_from_rows(halfspaces, id=None):
    """Intersection of a *bounded* halfspace list: ConvexPolytope, a
    degenerate polytope, or None when empty.  The caller guarantees
    boundedness."""
    hs = _dedupe_dominated(halfspaces)
    rows = [h.key() for h in hs]
    cands = _vertex_candidates(rows)
    if not cands:
        return None
    points = [Point3(Fraction(X, W), Fraction(Y, W), Fraction(Z, W))
              for (X, Y, Z, W) in cands]
    rank = _affine_rank(points)
    if rank == 3:
        return convex_hull(points, id=id)
    return _degenerate_from_points(points, rank, id=id)


def intersect_halfspaces(halfspaces: Iterable[Halfspace],
                         bounding: ConvexPolytope,
                         id: Optional[str] = None):
    """Polytope of all points of ``bounding`` satisfying every halfspace.

    Returns a ConvexPolytope, a degenerate (flat) polytope when the
    intersection is nonempty but not full-dimensional, or None when empty.
    """
    if bounding.degenerate:
        raise GeometryError("bounding polytope must be full-dimensional")
    combined = list(halfspaces) + list(bounding.halfspaces)
    return _polytope_from_rows(combined, id=id)


# ---------------------------------------------------------------------------
# exact feasibility of linear inequality systems (Fourier-Motzkin)


def _reduce_row(coeffs, rhs):
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    g = gcd(g, abs(rhs))
    if g == 0:
        return None
    return tuple(c // g for c in coeffs), rhs // g


def fm_feasible(rows, nvars: int) -> bool:
    """Exact feasibility of {x : coeffs . x <= rhs for every row}.

    ``rows`` is an iterable of (coeffs, rhs) with integer or Fraction
    entries.  Eliminates variables one at a time (Fourier-Motzkin), choosing
    at each step the variable with the fewest pairings.  Intended for small
    systems (a handful of variables).
    """
    work = set()
    for coeffs, rhs in rows:
        cs = [to_fraction(c) for c in coeffs]
        r = to_fraction(rhs)
        den = 1
        for c in cs:
            den = _lcm(den, c.denominator)
        den = _lcm(den, r.denominator)
        ics = tuple(int(c * den) for c in cs)
        ir = int(r * den)
        if all(c == 0 for c in ics):
            if ir < 0:
                return False
            continue
        red = _reduce_row(ics, ir)
        work.add(red)

    live = list(range(nvars))
    while live:
        best_var = None
        best_cost = None
        for vi, _v in enumerate(live):
            pos = sum(1 for (cs, _r) in work if cs[vi] > 0)
            neg = sum(1 for (cs, _r) in work if cs[vi] < 0)
            cost = pos * neg + pos + neg
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_var = vi
        vi = best_var
        pos, neg, zero = [], [], set()
        for (cs, r) in work:
            if cs[vi] > 0:
                pos.append((cs, r))
            elif cs[vi] < 0:
                neg.append((cs, r))
            else:
                zero.add((cs[:vi] + cs[vi + 1:], r))
        new = zero
        for (ucs, ur) in pos:
            uk = ucs[vi]
            for (lcs, lr) in neg:
                lk = -lcs[vi]
                coeffs = tuple(lk * ucs[t] + uk * lcs[t]
                               for t in range(len(ucs)) if t != vi)
                rhs = lk * ur + uk * lr
                if all(c == 0 for c in coeffs):
                    if rhs < 0:
                        return False
                    continue
                new.add(_reduce_row(coeffs, rhs))
        # among parallel rows keep the tightest to curb growth
        tight = {}
        for (cs, r) in new:
            cur = tight.get(cs)
            if cur is None or r < cur:
                tight[cs] = r
        work = {(cs, r) for cs, r in tight.items()}
        live.pop(vi)
    return True


def polytopes_touch(p: ConvexPolytope, q: ConvexPolytope) -> bool:
    """True when the closed polytopes share at least one point."""
    if p.degenerate or q.degenerate:
        raise GeometryError("touch test needs full-dimensional polytopes")
    (plo, phi) = p.bbox()
    (qlo, qhi) = q.bbox()
    for axis in range(3):
        if phi[axis] < qlo[axis] or qhi[axis] < plo[axis]:
            return False
    for v in p.vertices:
        if all(h.contains(v) for h in q.halfspaces):
            return True
    for v in q.vertices:
        if all(h.contains(v) for h in p.halfspaces):
            return True
    # a facet plane of one body strictly separating the other proves disjoint
    for h in p.halfspaces:
        if all(not h.contains(v) for v in q.vertices):
            return False
    for h in q.halfspaces:
        if all(not h.contains(v) for v in p.vertices):
            return False
    rows = [((h.a, h.b, h.c), h.d) for h in p.halfspaces]
    rows += [((h.a, h.b, h.c), h.d) for h in q.halfspaces]
    return fm_feasible(rows, 3)
