"""Polynomial differential forms on a 2-simplex.

Everything here is local to one triangle: barycentric coordinates, the
lowest-order edge-based 1-form bases (one- and two-coefficients-per-edge
families), the wedge product and Hodge star for the Euclidean plane,
a Koszul contraction on explicit polynomial forms, exterior derivatives
of the discrete 1-form expansions, and Dunavant-type triangle quadrature.

Evaluated 1-forms are returned as length-2 arrays holding the
coefficients on the global Cartesian co-basis (dx1, dx2).
"""

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

# Local edges of a triangle, by local vertex index.  The two-per-edge
# basis uses the flattened pair ordering; index 2k is lam[i]*dlam[j] and
# index 2k+1 is lam[j]*dlam[i] for local edge k = (i, j).
EDGE_VERTICES = ((0, 1), (1, 2), (2, 0))
P1L1_PAIRS = ((0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2))

P1L1_FIRST = np.array([p[0] for p in P1L1_PAIRS])
P1L1_SECOND = np.array([p[1] for p in P1L1_PAIRS])
WHITNEY_FIRST = np.array([e[0] for e in EDGE_VERTICES])
WHITNEY_SECOND = np.array([e[1] for e in EDGE_VERTICES])


def barycentric(geometry, point):
    """Barycentric coordinates of a Cartesian point w.r.t. a triangle.

    Affine in ``point``; the three values sum to one.
    """
    point = np.asarray(point, dtype=float)
    rel = point - geometry.vertex_coords[0]
    l12 = geometry.grad_lambda[1:] @ rel
    return np.array([1.0 - l12[0] - l12[1], l12[0], l12[1]])


def whitney_basis(geometry, edge_local, point_bary):
    """Value of the one-coefficient edge basis lam[i]*dlam[j] - lam[j]*dlam[i]
    for local edge ``edge_local``, on the Cartesian co-basis."""
    i, j = EDGE_VERTICES[edge_local]
    lam = np.asarray(point_bary, dtype=float)
    gl = geometry.grad_lambda
    return lam[i] * gl[j] - lam[j] * gl[i]


def p1lambda1_basis(geometry, index, point_bary):
    """Value of the two-per-edge basis function lam[i]*dlam[j] (pair
    ordering ``P1L1_PAIRS``), on the Cartesian co-basis."""
    i, j = P1L1_PAIRS[index]
    lam = np.asarray(point_bary, dtype=float)
    return lam[i] * geometry.grad_lambda[j]


def whitney_basis_all(geometry, point_bary):
    """All three edge-based basis values at one point, shape (3, 2)."""
    lam = np.asarray(point_bary, dtype=float)
    gl = geometry.grad_lambda
    return (lam[WHITNEY_FIRST, None] * gl[WHITNEY_SECOND]
            - lam[WHITNEY_SECOND, None] * gl[WHITNEY_FIRST])


def p1lambda1_basis_all(geometry, point_bary):
    """All six two-per-edge basis values at one point, shape (6, 2)."""
    lam = np.asarray(point_bary, dtype=float)
    return lam[P1L1_FIRST, None] * geometry.grad_lambda[P1L1_SECOND]


def wedge11(a, b):
    """Wedge of two 1-forms: the coefficient on dx1^dx2.

    Accepts arrays with the component axis last (vectorized).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def hodge_star_2form(coefficient, geometry=None):
    """Hodge star of a 2-form c*dx1^dx2 under the Euclidean metric and
    standard orientation: the scalar c itself."""
    return coefficient


class Polynomial2:
    """Polynomial in two variables on the monomial basis.

    Coefficients live in a dict keyed by exponent pairs (i, j); terms
    with coefficient exactly zero are dropped.
    """

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for key, c in coeffs.items():
                if c != 0.0:
                    self.coeffs[tuple(key)] = float(c)

    @classmethod
    def monomial(cls, i, j, c=1.0):
        return cls({(i, j): c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return Polynomial2(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) - c
        return Polynomial2(out)

    def __mul__(self, other):
        out = {}
        if isinstance(other, Polynomial2):
            for (i1, j1), c1 in self.coeffs.items():
                for (i2, j2), c2 in other.coeffs.items():
                    key = (i1 + i2, j1 + j2)
                    out[key] = out.get(key, 0.0) + c1 * c2
        else:
            for key, c in self.coeffs.items():
                out[key] = c * other
        return Polynomial2(out)

    __rmul__ = __mul__

    def evaluate(self, point):
        x, y = point
        return sum(c * x ** i * y ** j for (i, j), c in self.coeffs.items())

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for c in self.coeffs.values())

    def degree(self):
        return max((i + j for (i, j) in self.coeffs), default=0)


@dataclass
class PolyOneForm:
    """Polynomial 1-form f*dx1 + g*dx2."""
    f: Polynomial2
    g: Polynomial2

    def evaluate(self, point):
        return np.array([self.f.evaluate(point), self.g.evaluate(point)])


@dataclass
class PolyTwoForm:
    """Polynomial 2-form f*dx1^dx2."""
    f: Polynomial2


def koszul(form, base_point=(0.0, 0.0)):
    """Contraction with the position field X based at ``base_point``.

    Lowers the form degree by one and raises the polynomial degree by
    one: a 1-form f*dx^i maps to the 0-form f*(x^i - base^i), a 2-form
    f*dx1^dx2 maps to f*(x1-b1)*dx2 - f*(x2-b2)*dx1.
    """
    bx, by = float(base_point[0]), float(base_point[1])
    x1 = Polynomial2({(1, 0): 1.0, (0, 0): -bx})
    x2 = Polynomial2({(0, 1): 1.0, (0, 0): -by})
    if isinstance(form, PolyOneForm):
        return form.f * x1 + form.g * x2
    if isinstance(form, PolyTwoForm):
        return PolyOneForm(f=form.f * x2 * (-1.0), g=form.f * x1)
    raise TypeError("koszul expects a PolyOneForm or PolyTwoForm")


def exterior_derivative_whitney(coeffs, geometry):
    """d of a one-coefficient-per-edge 1-form expansion: the constant
    coefficient of the resulting 2-form on dx1^dx2.

    d(lam[i]*dlam[j] - lam[j]*dlam[i]) = 2 dlam[i]^dlam[j].
    """
    coeffs = np.asarray(coeffs, dtype=float)
    gl = geometry.grad_lambda
    w = wedge11(gl[WHITNEY_FIRST], gl[WHITNEY_SECOND])
    return 2.0 * float(coeffs @ w)


def exterior_derivative_p1(coeffs, geometry):
    """d of a two-coefficients-per-edge 1-form expansion (constant 2-form
    coefficient per element): d(lam[i]*dlam[j]) = dlam[i]^dlam[j]."""
    coeffs = np.asarray(coeffs, dtype=float)
    gl = geometry.grad_lambda
    w = wedge11(gl[P1L1_FIRST], gl[P1L1_SECOND])
    return float(coeffs @ w)


@dataclass
class QuadratureRule:
    """Symmetric triangle rule in barycentric coordinates.

    Weights sum to one; multiply by the element area at the use site.
    """
    points: np.ndarray
    weights: np.ndarray
    degree: int


def _sym3(a):
    b = 0.5 * (1.0 - a)
    return [(a, b, b), (b, a, b), (b, b, a)]


def _sym6(a, b):
    c = 1.0 - a - b
    return [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]


_RULES = {
    1: ([(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)], [1.0]),
    2: (_sym3(2.0 / 3.0), [1.0 / 3.0] * 3),
    # classical 4-point degree-3 rule; the centroid weight is negative
    3: ([(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)] + _sym3(0.6),
        [-27.0 / 48.0] + [25.0 / 48.0] * 3),
    4: (_sym3(0.108103018168070) + _sym3(0.816847572980459),
        [0.223381589678011] * 3 + [0.109951743655322] * 3),
    5: ([(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)]
        + _sym3(0.059715871789770) + _sym3(0.797426985353087),
        [0.225]
        + [0.132394152788506] * 3 + [0.125939180544827] * 3),
    6: (_sym3(0.501426509658179) + _sym3(0.873821971016996)
        + _sym6(0.053145049844816, 0.310352451033785),
        [0.116786275726379] * 3 + [0.050844906370207] * 3
        + [0.082851075618374] * 6),
}


def quadrature(degree):
    """Triangle rule exact for polynomials up to ``degree`` (1..6)."""
    if degree not in _RULES:
        raise ValueError("unsupported quadrature degree: %r" % (degree,))
    pts, wts = _RULES[degree]
    points = np.array(pts, dtype=float)
    weights = np.array(wts, dtype=float)
    weights = weights / weights.sum()
    return QuadratureRule(points=points, weights=weights, degree=degree)


def space_dimensions(r, k, m):
    """Dimensions (full, trimmed) of the degree-r polynomial k-form
    spaces in m variables."""
    if not (0 <= k <= m) or r < 1:
        raise ValueError("invalid (r, k, m) = (%r, %r, %r)" % (r, k, m))
    full = comb(r + m, m) * comb(m, k)
    trimmed = comb(r + k - 1, k) * comb(m + r, m - k)
    return full, trimmed


def barycentric_monomial_integral(a, b, c, area):
    """Exact integral of lam0^a lam1^b lam2^c over a triangle."""
    return (factorial(a) * factorial(b) * factorial(c) * 2.0
            / factorial(a + b + c + 2)) * area
