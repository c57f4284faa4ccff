"""Exact density formulas: point densities, coset densities, the
reciprocal-sum identity for the special point, and the closed-form
subregular family in type C.

All values are exact rational functions of q (QRational); the prime
convention drops factors that vanish identically on the coset at hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .residual import (
    ResidualCoset,
    TorusPoint,
    canonical_point,
    dominant_split_representative,
    orbit_of_point,
    point_index,
    residual_points,
    steinberg_point,
)
from .rootdata import (
    AffineElement,
    LabelFunction,
    RootDatum,
    affine_generator_exponents,
)
from .symbolicq import (
    ONE,
    QLaurent,
    QRational,
    c_alpha,
    character_value,
)

F = Fraction


# -- density factor model -------------------------------------------------------


def _density_factor_lists(datum, labels, r1_root, point):
    """(numerator values, denominator values) of the density factors for
    one root of R1 at an exact point, in the combined no-square-root form."""
    vec = r1_root.vec
    num = [character_value(vec, point) - ONE]
    half = tuple(v // 2 for v in vec) if all(v % 2 == 0 for v in vec) else None
    if half is not None and half in datum.root_by_vec and datum.doubled[half]:
        a = labels.pole_exponent(half)
        b = labels.minus_pole_exponent(half)
        bval = character_value(half, point)
        den = [QLaurent.monomial(b) * bval + ONE,
               QLaurent.monomial(a) * bval - ONE]
    else:
        f0 = labels.f0(vec)
        den = [QLaurent.monomial(f0) * character_value(vec, point) - ONE]
    return num, den


def m_point(datum: RootDatum, labels: LabelFunction, point: TorusPoint,
            check_residual=True) -> QRational:
    """Density mass factor at a residual point: q(w0) times the product of
    (alpha(t) - 1) over the denominator thresholds, omitting factors that
    vanish at the point."""
    if check_residual and point_index(datum, labels, point) != datum.rank:
        raise ValueError("density is defined at residual points only")
    num = ONE
    den = ONE
    for r in datum.r1:
        nvals, dvals = _density_factor_lists(datum, labels, r, point)
        for v in nvals:
            if not v.is_zero():
                num = num * v
        for v in dvals:
            if not v.is_zero():
                den = den * v
    w0 = QLaurent.monomial(labels.q_w0_exponent())
    return QRational(w0 * num, den)


def _span_membership(datum, support_roots):
    """R1 roots lying in the rational span of the support."""
    from .lattice import rref
    if not support_roots:
        return set()
    span = [[F(c) for c in r.vec] for r in support_roots]
    _, piv = rref(span)
    rank = len(piv)
    out = set()
    for r in datum.r1:
        _, piv2 = rref(span + [[F(c) for c in r.vec]])
        if len(piv2) == rank:
            out.add(r.vec)
    return out


def m_on_coset(datum, labels, coset: ResidualCoset, t: TorusPoint) -> QRational:
    """Density of the coset at a point of its tempered form.  Factors that
    are identically zero on the coset (constant roots hitting the zero of
    their factor) are omitted; other factors may still vanish at special
    points of the tempered form, where the value is zero when the
    numerator order wins and no continuous value exists otherwise."""
    constant = _span_membership(datum, coset.support_roots)
    num = ONE
    den = ONE
    num_zero = den_zero = 0
    for r in datum.r1:
        nvals, dvals = _density_factor_lists(datum, labels, r, t)
        if r.vec in constant:
            nbase, dbase = _density_factor_lists(datum, labels, r,
                                                 coset.point)
            nvals = [v for v0, v in zip(nbase, nvals) if not v0.is_zero()]
            dvals = [v for v0, v in zip(dbase, dvals) if not v0.is_zero()]
        for v in nvals:
            if v.is_zero():
                num_zero += 1
            else:
                num = num * v
        for v in dvals:
            if v.is_zero():
                den_zero += 1
            else:
                den = den * v
    if den_zero > num_zero:
        raise ValueError("pole of the density at this point of the coset")
    if den_zero == num_zero and den_zero > 0:
        raise ValueError("point lies on a balanced crossing of the "
                         "singular set")
    if num_zero > den_zero:
        return QRational(QLaurent(), ONE)
    w0 = QLaurent.monomial(labels.q_w0_exponent())
    return QRational(w0 * num, den)


def _sub_w0_exponent(datum, labels, support_roots):
    total = F(0)
    for r in support_roots:
        if r.height > 0:
            f0, f1 = labels.pairs[r.vec]
            total += f1 if datum.doubled[r.vec] else f0
    return total


def m_point_on_support(datum, labels, coset: ResidualCoset) -> QRational:
    """Point density of the base point within its own support datum
    (the factor m_L(t) / m^L(t), constant along the tempered form)."""
    constant = _span_membership(datum, coset.support_roots)
    num = ONE
    den = ONE
    for r in datum.r1:
        if r.vec not in constant:
            continue
        nvals, dvals = _density_factor_lists(datum, labels, r, coset.point)
        for v in nvals:
            if not v.is_zero():
                num = num * v
        for v in dvals:
            if not v.is_zero():
                den = den * v
    w0 = QLaurent.monomial(_sub_w0_exponent(datum, labels,
                                            coset.support_roots))
    return QRational(w0 * num, den)


def m_upper(datum, labels, coset: ResidualCoset, t: TorusPoint):
    """Normalized complement density: q(w^L)^{-1} times the inverse of the
    c-factors over the roots of R1 not constant on the coset.

    Returns (value, singular): value None when some complement c-factor
    has a pole or zero at t."""
    constant = _span_membership(datum, coset.support_roots)
    exp = labels.q_w0_exponent() - _sub_w0_exponent(datum, labels,
                                                    coset.support_roots)
    value = QRational(QLaurent.monomial(-exp), ONE)
    for r in datum.r1:
        if r.vec in constant:
            continue
        cval, order = c_alpha(datum, labels, r, t)
        if cval is None or order != 0 or cval.is_zero():
            return None, True
        value = value * cval.inverse()
    return value, False


# -- reciprocal length sum -------------------------------------------------------


@dataclass
class PoincareResult:
    valid: bool
    product: QRational | None
    detail: str = ""


def poincare_product(datum: RootDatum, labels: LabelFunction) -> PoincareResult:
    """The reciprocal-sum identity: sum over W of q(w)^{-1} equals
    (-1)^n [X:Q] / m(r_st), valid when the special point lies in the open
    negative chamber (all combined simple exponents positive)."""
    for i in range(datum.n_simple):
        if labels.pole_exponent(datum.simple_roots[i]) <= 0:
            return PoincareResult(False, None,
                                  detail="special point not in the open "
                                         "negative chamber")
    st = steinberg_point(datum, labels)
    m = m_point(datum, labels, st)
    sign = 1 if datum.rank % 2 == 0 else -1
    index = datum.weight_index()
    return PoincareResult(True, QRational.constant(sign * index) * m.inverse())


def poincare_truncated(datum: RootDatum, labels: LabelFunction, qval,
                       lmax: int, with_layers=False):
    """Direct sum of q(w)^{-1} over affine elements of length <= lmax, by
    breadth-first enumeration of the affine Coxeter group, times the
    number of length-zero elements."""
    qval = F(qval)
    gens = _affine_generators(datum)
    gen_exp = affine_generator_exponents(datum, labels)
    ident = AffineElement.from_weyl(datum.weyl_elements()[0])
    seen = {ident: F(0)}
    frontier = [ident]
    total = _q_power(qval, F(0))
    layer_counts = [1]
    for _ in range(lmax):
        nxt = []
        for e in frontier:
            base = seen[e]
            for g, ge in zip(gens, gen_exp):
                f = g * e
                if f not in seen:
                    seen[f] = base + ge
                    nxt.append(f)
                    total += _q_power(qval, -(base + ge))
        frontier = nxt
        layer_counts.append(len(nxt))
    total = datum.weight_index() * total
    if with_layers:
        return total, layer_counts
    return total


def _affine_generators(datum):
    gens = []
    comp = datum.components()
    if len(comp) != 1:
        raise ValueError("irreducible datum required")
    theta_vee = datum.highest_coroot(comp[0])
    theta = next(r for r in datum.positive_roots if r.coroot == theta_vee)
    n = datum.rank
    mat = tuple(tuple(int(i == j) - theta.vec[i] * theta_vee[j]
                      for j in range(n)) for i in range(n))
    gens.append(AffineElement(mat, theta.vec))
    for i in range(datum.n_simple):
        gens.append(AffineElement(datum.simple_reflection_matrix(i),
                                  tuple(0 for _ in range(n))))
    return gens


def _q_power(qval: Fraction, e: Fraction):
    from .symbolicq import _exact_power
    p = _exact_power(qval, e)
    if p is not None:
        return p
    return float(qval) ** float(e)


def poincare_tail_bound(datum, labels, qval, lmax: int,
                        layer_counts=None) -> float:
    """Bound on the dropped tail of the reciprocal-length sum: the layer
    sizes of the affine group grow like a polynomial of degree rank-1, so
    c_l <= c_L (l/L)^{rank+1} for l >= L majorizes them; the tail is then
    a convergent series in q^{-m} with m the smallest generator exponent."""
    gen_exp = affine_generator_exponents(datum, labels)
    m = min(gen_exp)
    if m <= 0:
        return float("inf")
    if layer_counts is None:
        _, layer_counts = poincare_truncated(datum, labels, qval, lmax,
                                             with_layers=True)
    c_last = max(layer_counts[-1], 1)
    n = datum.rank
    ratio = float(qval) ** (-float(m))
    total = 0.0
    term = 1.0
    j = 1
    while True:
        term = ((lmax + j) / lmax) ** (n + 1) * ratio ** (lmax + j)
        total += c_last * term
        if c_last * term < 1e-18 or j > 4000:
            break
        j += 1
    return total * datum.weight_index()


# -- special point masses ---------------------------------------------------------


def plancherel_point_mass(datum: RootDatum, labels: LabelFunction,
                          point: TorusPoint) -> QRational:
    """Total mass of the orbit of the special (regular, real, maximally
    negative) point: (-1)^n m(r_st) / [X:Q].  Rejects any other input,
    since the rational cycle constants are known only there."""
    st = steinberg_point(datum, labels)
    if canonical_point(datum, point) != canonical_point(datum, st):
        raise ValueError("mass formula implemented for the special point "
                         "orbit only")
    if len(orbit_of_point(datum, st)) != len(datum.weyl_elements()):
        raise ValueError("special point is not regular")
    m = m_point(datum, labels, st)
    sign = 1 if datum.rank % 2 == 0 else -1
    return QRational.constant(F(sign, datum.weight_index())) * m


# -- the subregular family in type C ----------------------------------------------


@dataclass
class FormalDimensionReport:
    n: int
    point_values: tuple
    density: QRational
    assembled: QRational
    reference: QRational
    sign: int
    matches: bool
    numeric_q: Fraction | None = None
    numeric_assembled: Fraction | None = None
    numeric_reference: Fraction | None = None


def subregular_c_reference(n: int) -> QRational:
    """Closed form for the subregular mass in type C_n:
    (1/4) q (q-1)^{n+2} (q^{n-2}-1) prod_{i=1}^{n-2}(q^{2i+1}-1)
    / ((q^2-1)(q^n-1) prod_{i=1}^{n-1}(q^{2i}-1))."""
    def binom(e):
        return QLaurent.monomial(e) - ONE
    num = QLaurent.monomial(1)
    for _ in range(n + 2):
        num = num * binom(1)
    num = num * binom(n - 2)
    for i in range(1, n - 1):
        num = num * binom(2 * i + 1)
    den = binom(2) * binom(n)
    for i in range(1, n):
        den = den * binom(2 * i)
    return QRational(num, den) * QRational.constant(F(1, 4))


def fdim_subregular_c(n: int, qval=None) -> FormalDimensionReport:
    """Locate the subregular residual point of the type-C_n datum with the
    full weight lattice, assemble its mass with the known rational
    constants, and compare exactly with the closed form (sign recorded)."""
    if n < 3:
        raise ValueError("the subregular family needs n >= 3")
    datum = RootDatum.from_type(f"C{n}", "P")
    labels = LabelFunction.equal(datum)
    target = tuple([F(1)] * (n - 2) + [F(0), F(1)])
    found = None
    for p in residual_points(datum, labels):
        if any(x != 0 for x in p.u):
            continue
        dom = dominant_split_representative(datum, p)
        vals = tuple(sum(F(v) * dom.r[i] for i, v in enumerate(
            datum.simple_roots[j])) for j in range(n))
        if vals == target:
            found = dom
            break
    if found is None:
        raise RuntimeError("subregular residual point not found")
    density = m_point(datum, labels, found)
    sign_n = 1 if n % 2 == 0 else -1
    # |W0 r| kappa-bar = (-1)^n (n+2)/4 and the residual degree is 1/(n+2)
    assembled = QRational.constant(F(sign_n, 4)) * density
    reference = subregular_c_reference(n)
    if assembled == reference:
        sign, matches = 1, True
    elif assembled == -reference:
        sign, matches = -1, True
    else:
        sign, matches = 0, False
    report = FormalDimensionReport(
        n=n, point_values=target, density=density, assembled=assembled,
        reference=reference, sign=sign, matches=matches)
    if qval is not None:
        report.numeric_q = F(qval)
        report.numeric_assembled = assembled.evaluate(F(qval))
        report.numeric_reference = reference.evaluate(F(qval))
    return report


# -- table emitters ----------------------------------------------------------------


def generic_tempered_point(datum, coset: ResidualCoset,
                           primes=(7, 11, 13, 17, 19)) -> TorusPoint:
    """A generic point of the tempered form: the base twisted by a unitary
    element of the free subtorus with prime-denominator coordinates."""
    from .lattice import integer_kernel
    if not coset.support_roots:
        low = []
    else:
        low = [[int(c) for c in r.vec] for r in coset.support_roots]
    basis = integer_kernel(low) if low else \
        [[int(i == j) for j in range(datum.rank)] for i in range(datum.rank)]
    u = list(coset.point.u)
    for k, vec in enumerate(basis):
        p = primes[k % len(primes)]
        for i in range(datum.rank):
            u[i] = (u[i] + F(vec[i], p)) % 1
    return TorusPoint(tuple(u), coset.point.r)


def density_table(datum, labels, qval=None):
    """Rows (orbit id, parabolic, point, index, symbolic mass, numeric
    mass) for every residual coset orbit; positive-dimensional orbits are
    evaluated at a generic point of their tempered form."""
    from .residual import residual_cosets
    rows = []
    for k, coset in enumerate(residual_cosets(datum, labels)):
        if coset.dim == 0:
            sym = m_point(datum, labels, coset.point)
        else:
            try:
                sym = m_on_coset(datum, labels, coset,
                                 generic_tempered_point(datum, coset))
            except ValueError:
                sym = None
        row = {
            "orbit": k,
            "parabolic": list(coset.support),
            "point_u": [str(x) for x in coset.point.u],
            "point_r": [str(x) for x in coset.point.r],
            "index": coset.index,
            "kL": coset.k_l,
            "mass_symbolic": str(sym.canonical()) if sym is not None
            else "singular-base",
        }
        if qval is not None and sym is not None:
            val = sym.evaluate(F(qval))
            row["mass_at_q"] = str(val) if isinstance(val, Fraction) \
                else repr(val)
        rows.append(row)
    return rows
