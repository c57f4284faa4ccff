"""Root data, Weyl groups, and label functions.

A root datum is stored relative to a fixed basis of the character lattice
``X``; root vectors are integer coordinate tuples with respect to that
basis and coroot vectors are integer tuples with respect to the dual
basis of ``Y``, so the canonical pairing is the dot product.  Everything
is generated from a Cartan matrix plus a lattice choice, which keeps all
coordinates integral for any lattice between the root lattice Q and the
weight lattice P.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import (
    identity_matrix,
    integer_kernel,
    mat_inverse,
    mat_mul,
    mat_vec,
    rational_det,
    saturate,
    solve_unique,
    transpose,
)

Vec = tuple[int, ...]


def cartan_matrix(family: str, n: int) -> list[list[int]]:
    """Cartan data with entries M[i][j] = <alpha_j, alpha_i^vee>."""
    def chain(size):
        m = [[0] * size for _ in range(size)]
        for i in range(size):
            m[i][i] = 2
            if i + 1 < size:
                m[i][i + 1] = m[i + 1][i] = -1
        return m

    if family == "A":
        return chain(n)
    if family == "B":
        if n < 2:
            raise ValueError("B_n needs n >= 2")
        m = chain(n)
        m[n - 1][n - 2] = -2
        return m
    if family == "C":
        if n < 2:
            raise ValueError("C_n needs n >= 2")
        m = chain(n)
        m[n - 2][n - 1] = -2
        return m
    if family == "D":
        if n < 3:
            raise ValueError("D_n needs n >= 3")
        m = chain(n - 1)
        for row in m:
            row.append(0)
        m.append([0] * n)
        m[n - 1][n - 1] = 2
        m[n - 3][n - 1] = m[n - 1][n - 3] = -1
        return m
    if family == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    if family == "F" and n == 4:
        return [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    raise ValueError(f"unsupported type {family}{n}")


def parse_type(tag: str) -> tuple[str, int]:
    family = tag[0].upper()
    n = int(tag[1:])
    if n > 5:
        raise ValueError("rank cap is 5")
    return family, n


@dataclass(frozen=True)
class Root:
    vec: Vec           # coordinates in the X basis
    coroot: Vec        # coordinates in the dual (Y) basis
    alpha: Vec         # coordinates in the simple-root basis

    @property
    def height(self):
        return sum(self.alpha)


class RootDatum:
    """Reduced root datum (X, Y, R0, R0^vee, F0) with derived data."""

    def __init__(self, simple_roots, simple_coroots, typename="custom",
                 lattice="custom", basis_in_alpha=None):
        self.rank = len(simple_roots[0]) if simple_roots else 0
        self.n_simple = len(simple_roots)
        self.simple_roots = [tuple(v) for v in simple_roots]
        self.simple_coroots = [tuple(v) for v in simple_coroots]
        self.typename = typename
        self.lattice = lattice
        # rows: basis of X written in simple-root coordinates (when known)
        self.basis_in_alpha = basis_in_alpha
        for a, av in zip(self.simple_roots, self.simple_coroots):
            if sum(x * y for x, y in zip(a, av)) != 2:
                raise ValueError("pairing <alpha, alpha^vee> must be 2")
        self._generate_roots()
        self._weyl_cache = None
        self._wmat_cache = None

    # -- construction ---------------------------------------------------

    @classmethod
    def from_type(cls, tag: str, lattice="Q", basis=None) -> "RootDatum":
        """Build a datum of the given Cartan type with X = Q, X = P, or an
        explicit intermediate lattice (basis rows in simple-root coords)."""
        family, n = parse_type(tag)
        m = cartan_matrix(family, n)
        if lattice == "Q":
            basis_rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        elif lattice == "P":
            minv = mat_inverse([[Fraction(x) for x in row] for row in m])
            # fundamental weight i in alpha coords solves <w_i, a_j^vee> = d_ij
            basis_rows = transpose(minv)
        else:
            basis_rows = [[Fraction(x) for x in row] for row in lattice]
        return cls._from_cartan(m, basis_rows, f"{family}{n}",
                                "Q" if lattice == "Q" else
                                "P" if lattice == "P" else "custom")

    @classmethod
    def _from_cartan(cls, m, basis_rows, typename, lattice_tag):
        n = len(m)
        binv = mat_inverse([[Fraction(x) for x in row] for row in basis_rows])
        simple_roots = []
        for j in range(n):
            unit = [Fraction(int(k == j)) for k in range(n)]
            coords = mat_vec(transpose(binv), unit)
            if any(c.denominator != 1 for c in coords):
                raise ValueError("lattice does not contain the root lattice Q")
            simple_roots.append(tuple(int(c) for c in coords))
        simple_coroots = []
        for i in range(n):
            coords = [sum(Fraction(basis_rows[k][j]) * m[i][j] for j in range(n))
                      for k in range(n)]
            if any(c.denominator != 1 for c in coords):
                raise ValueError("lattice is not contained in the weight lattice P")
            simple_coroots.append(tuple(int(c) for c in coords))
        return cls(simple_roots, simple_coroots, typename=typename,
                   lattice=lattice_tag, basis_in_alpha=basis_rows)

    def _generate_roots(self):
        n = self.n_simple
        start = []
        for i in range(n):
            alpha = tuple(int(k == i) for k in range(n))
            start.append(Root(self.simple_roots[i], self.simple_coroots[i], alpha))
        seen = {r.vec: r for r in start}
        frontier = list(start)
        while frontier:
            nxt = []
            for r in frontier:
                for i in range(n):
                    p = sum(x * y for x, y in zip(r.vec, self.simple_coroots[i]))
                    vec = tuple(x - p * a for x, a in zip(r.vec, self.simple_roots[i]))
                    if vec in seen:
                        continue
                    pc = sum(x * y for x, y in zip(self.simple_roots[i], r.coroot))
                    cor = tuple(y - pc * c for y, c in
                                zip(r.coroot, self.simple_coroots[i]))
                    alpha = tuple(x - p * int(k == i) for k, x in enumerate(r.alpha))
                    nr = Root(vec, cor, alpha)
                    seen[vec] = nr
                    nxt.append(nr)
            frontier = nxt
        roots = sorted(seen.values(), key=lambda r: (r.height, r.alpha))
        self.roots = roots
        self.positive_roots = [r for r in roots if r.height > 0]
        self.root_by_vec = {r.vec: r for r in roots}
        self.coroot_by_vec = {r.vec: r.coroot for r in roots}
        # non-reduced system: alpha is doubled iff alpha^vee lies in 2Y
        self.doubled = {r.vec: all(c % 2 == 0 for c in r.coroot) for r in roots}
        self.r1 = [r for r in roots if not self.doubled[r.vec]] + \
                  [Root(tuple(2 * x for x in r.vec),
                        tuple(c // 2 for c in r.coroot),
                        tuple(2 * a for a in r.alpha))
                   for r in roots if self.doubled[r.vec]]
        self.r1.sort(key=lambda r: (r.height, r.alpha))
        self.r1_positive = [r for r in self.r1 if r.height > 0]

    # -- basic structure -------------------------------------------------

    def simple_reflection_matrix(self, i: int):
        """Matrix of s_i acting on X (rows act on column coordinate vectors)."""
        n = self.rank
        a, av = self.simple_roots[i], self.simple_coroots[i]
        return tuple(tuple(int(r == c) - a[r] * av[c] for c in range(n))
                     for r in range(n))

    def components(self) -> list[list[int]]:
        """Connected components of the Dynkin diagram (simple indices)."""
        n = self.n_simple
        adj = {i: set() for i in range(n)}
        for i in range(n):
            for j in range(n):
                if i != j and sum(x * y for x, y in zip(
                        self.simple_roots[j], self.simple_coroots[i])) != 0:
                    adj[i].add(j)
        out, left = [], set(range(n))
        while left:
            comp, stack = set(), [min(left)]
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(adj[v] - comp)
            out.append(sorted(comp))
            left -= comp
        return out

    def highest_coroot(self, comp: list[int]) -> Vec:
        """Highest coroot of an irreducible component (dominance order)."""
        best = None
        for r in self.positive_roots:
            if any(r.alpha[i] for i in comp) and \
               all(r.alpha[i] == 0 for i in range(self.n_simple) if i not in comp):
                if best is None or self._coroot_height(r) > self._coroot_height(best):
                    best = r
        return best.coroot

    def _coroot_height(self, r: Root) -> Fraction:
        sol = solve_unique(
            [[Fraction(self.simple_coroots[j][k]) for j in range(self.n_simple)]
             for k in range(self.rank)],
            [Fraction(c) for c in r.coroot])
        return sum(sol)

    def weight_index(self) -> int:
        """The index [X : Q], i.e. |Omega| for semisimple data."""
        if self.basis_in_alpha is None:
            raise ValueError("unknown lattice basis")
        return abs(int(1 / rational_det(self.basis_in_alpha))) if \
            rational_det(self.basis_in_alpha) != 0 else 0

    def fundamental_coweight_rays(self):
        """Generating rays of the dominant cone X+ (rational vectors)."""
        a = [[Fraction(c) for c in av] for av in self.simple_coroots]
        rays = []
        for i in range(self.n_simple):
            rhs = [Fraction(int(k == i)) for k in range(self.n_simple)]
            sol = solve_unique(a, rhs)
            if sol is None:
                # non-semisimple direction: pick any solution
                from .lattice import solve_affine
                s = solve_affine(a, rhs)
                if s.kind == "empty":
                    raise ValueError("inconsistent coroot data")
                sol = s.point
            rays.append(tuple(sol))
        return rays

    def central_lattice(self):
        """Basis of Z_X = {x in X : <x, alpha^vee> = 0 for all roots}."""
        rows = [list(av) for av in self.simple_coroots]
        return integer_kernel(rows)

    # -- Weyl group -------------------------------------------------------

    def weyl_elements(self):
        """All elements of W0 as WeylElement, sorted by (length, word)."""
        if self._weyl_cache is not None:
            return self._weyl_cache
        if self.rank > 5:
            raise ValueError("rank cap exceeded for full Weyl enumeration")
        gens = [self.simple_reflection_matrix(i) for i in range(self.n_simple)]
        ident = tuple(tuple(int(i == j) for j in range(self.rank))
                      for i in range(self.rank))
        seen = {ident: ()}
        frontier = [(ident, ())]
        while frontier:
            nxt = []
            for mat, word in sorted(frontier, key=lambda t: t[1]):
                for i, g in enumerate(gens):
                    prod = tuple(tuple(sum(g[r][k] * mat[k][c]
                                           for k in range(self.rank))
                                       for c in range(self.rank))
                                 for r in range(self.rank))
                    if prod not in seen:
                        seen[prod] = (i,) + word
                        nxt.append((prod, (i,) + word))
            frontier = nxt
        elems = [WeylElement(m, w, self) for m, w in seen.items()]
        elems.sort(key=lambda e: (e.length, e.word))
        self._weyl_cache = elems
        return elems

    def weyl_matrices(self):
        if self._wmat_cache is None:
            self._wmat_cache = [e.matrix for e in self.weyl_elements()]
        return self._wmat_cache

    def longest_element(self):
        return self.weyl_elements()[-1]

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "type": self.typename,
            "lattice": self.lattice,
            "basis_in_alpha": [[str(x) for x in row]
                               for row in (self.basis_in_alpha or [])],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootDatum":
        if data["lattice"] in ("Q", "P"):
            return cls.from_type(data["type"], data["lattice"])
        basis = [[Fraction(x) for x in row] for row in data["basis_in_alpha"]]
        return cls.from_type(data["type"], basis)


@dataclass
class WeylElement:
    matrix: tuple
    word: tuple
    datum: RootDatum = field(repr=False)

    @property
    def length(self):
        return len(self.word)

    def act_vec(self, v):
        return tuple(sum(self.matrix[r][c] * v[c] for c in range(len(v)))
                     for r in range(len(self.matrix)))

    def root_permutation(self):
        """Permutation induced on the sorted list of roots of R0."""
        roots = self.datum.roots
        index = {r.vec: k for k, r in enumerate(roots)}
        return tuple(index[self.act_vec(r.vec)] for r in roots)

    def inversions(self):
        """Roots of R_nr,+ sent to negatives (positive representatives)."""
        out = []
        for r in self.datum.positive_roots:
            img = self.act_vec(r.vec)
            if self.datum.root_by_vec[img].height < 0:
                out.append(r)
                if self.datum.doubled[r.vec]:
                    out.append(self.datum.root_by_vec[r.vec])  # marker for 2a
        return out


@dataclass(frozen=True)
class AffineElement:
    """Element (w, x) of W = W0 x| X acting by v -> w(v) + x."""
    matrix: tuple
    translation: Vec

    def __mul__(self, other):
        mat = tuple(tuple(sum(self.matrix[r][k] * other.matrix[k][c]
                              for k in range(len(self.matrix)))
                          for c in range(len(self.matrix)))
                    for r in range(len(self.matrix)))
        tr = tuple(sum(self.matrix[r][k] * other.translation[k]
                       for k in range(len(self.matrix))) + self.translation[r]
                   for r in range(len(self.matrix)))
        return AffineElement(mat, tr)

    @classmethod
    def translation_by(cls, datum, x):
        ident = tuple(tuple(int(i == j) for j in range(datum.rank))
                      for i in range(datum.rank))
        return cls(ident, tuple(x))

    @classmethod
    def from_weyl(cls, w: WeylElement):
        return cls(w.matrix, tuple(0 for _ in range(len(w.matrix))))


def affine_length(datum: RootDatum, elem: AffineElement) -> int:
    """Length of (w, x) in W = W0 x| X (Iwahori-Matsumoto formula)."""
    total = 0
    x = elem.translation
    n = datum.rank
    minv = mat_inverse([[Fraction(c) for c in row] for row in elem.matrix]) \
        if n else []
    for r in datum.positive_roots:
        pairing = sum(a * b for a, b in zip(x, r.coroot))
        img = tuple(int(sum(minv[i][j] * r.vec[j] for j in range(n)))
                    for i in range(n))
        if datum.root_by_vec[img].height > 0:
            total += abs(pairing)
        else:
            total += abs(pairing - 1)
    return total


def norm_n(datum: RootDatum, elem: AffineElement):
    """The norm l(w) + ||w(0)^0||; exact (a Fraction) whenever the central
    part of the translation vanishes, which holds for all semisimple data."""
    length = affine_length(datum, elem)
    x = elem.translation
    if not datum.positive_roots:
        central = [Fraction(c) for c in x]
    else:
        from .lattice import rref
        mat = [[Fraction(av[j]) for j in range(datum.rank)]
               for av in datum.simple_coroots]
        _, pivots = rref(mat)
        if len(pivots) == datum.rank:
            return Fraction(length)
        central = _central_projection(datum, x)
    sq = sum(Fraction(c) * Fraction(c) for c in central)
    if sq == 0:
        return Fraction(length)
    import math
    return length + math.sqrt(float(sq))


def _central_projection(datum, x):
    from .lattice import solve_affine
    a = transpose([[Fraction(c) for c in r] for r in datum.simple_roots])
    s = solve_affine(a, [Fraction(c) for c in x])
    if s.kind == "empty":
        return list(x)
    if s.kind == "unique":
        return [Fraction(0)] * datum.rank
    recon = mat_vec(a, s.point)
    return [Fraction(xc) - rc for xc, rc in zip(x, recon)]


class LabelFunction:
    """Root labels q(s) = q^{f_s}, stored per positive root as the pair
    (f0, f1) of exponents of q_{alpha^vee} and q_{alpha^vee + 1}.  The two
    differ only on roots whose coroot lies in 2Y."""

    def __init__(self, datum: RootDatum, pairs: dict, node_values=None):
        self.datum = datum
        self.pairs = dict(pairs)  # root vec -> (Fraction f0, Fraction f1)
        for r in datum.roots:
            if r.vec not in self.pairs:
                raise ValueError("label missing for a root")
            f0, f1 = self.pairs[r.vec]
            if not datum.doubled[r.vec] and f0 != f1:
                raise ValueError("f1 must equal f0 on non-doubled roots")
        self.node_values = node_values

    # -- constructors ------------------------------------------------------

    @classmethod
    def equal(cls, datum, f=Fraction(1)) -> "LabelFunction":
        f = Fraction(f)
        return cls(datum, {r.vec: (f, f) for r in datum.roots},
                   node_values=None)

    @classmethod
    def from_affine_nodes(cls, datum, values) -> "LabelFunction":
        """Labels from one exponent per affine Dynkin node, the affine node
        first and then F0 in order.  Conjugation-invariance is enforced.

        The value at node a is q(s_a) = q_{a+1}, so a finite node with
        doubled coroot sets the odd-translation class of its direction and
        the affine node sets the even one.
        """
        comps = datum.components()
        if len(comps) != 1:
            raise ValueError("affine-node labels need an irreducible datum")
        values = [Fraction(v) for v in values]
        if len(values) != datum.n_simple + 1:
            raise ValueError("expected one value per affine node")
        f_aff, f_simple = values[0], values[1:]
        orbits = cls._coroot_orbits(datum)
        class_value = {}

        def put(key, value):
            if key in class_value and class_value[key] != value:
                raise ValueError("labels must agree on conjugate reflections")
            class_value[key] = value

        for i in range(datum.n_simple):
            cor = datum.simple_coroots[i]
            parity = 1 if all(c % 2 == 0 for c in cor) else 0
            put((orbits[cor], parity), f_simple[i])
        # affine node (m^vee, 1): q(s_0) = q_{(m^vee, 2)}, i.e. parity 0
        theta_vee = datum.highest_coroot(comps[0])
        put((orbits[theta_vee], 0), f_aff)
        pairs = {}
        for r in datum.roots:
            orb = orbits[r.coroot]
            f0 = class_value[(orb, 0)]
            if datum.doubled[r.vec]:
                f1 = class_value[(orb, 1)]
            else:
                f1 = f0
            pairs[r.vec] = (f0, f1)
        return cls(datum, pairs, node_values=[str(v) for v in values])

    @staticmethod
    def _coroot_orbits(datum):
        """Map coroot vector -> orbit id under W0 (acting on Y)."""
        orbit_of = {}
        next_id = 0
        mats = [transpose(m) for m in datum.weyl_matrices()]
        for r in datum.roots:
            if r.coroot in orbit_of:
                continue
            for m in mats:
                img = tuple(sum(m[i][j] * r.coroot[j] for j in range(datum.rank))
                            for i in range(datum.rank))
                orbit_of[img] = next_id
            next_id += 1
        return orbit_of

    # -- derived exponents --------------------------------------------------

    def f0(self, vec) -> Fraction:
        return self.pairs[vec][0]

    def f1(self, vec) -> Fraction:
        return self.pairs[vec][1]

    def pole_exponent(self, vec) -> Fraction:
        """a with alpha(L) = q^a the positive pole value, i.e. the exponent
        of q_{alpha^vee/2}^{1/2} q_{alpha^vee}."""
        f0, f1 = self.pairs[vec]
        return (f0 + f1) / 2

    def minus_pole_exponent(self, vec) -> Fraction:
        """b with alpha(L) = -q^b the negative pole value, i.e. the exponent
        of q_{alpha^vee/2}^{1/2}."""
        f0, f1 = self.pairs[vec]
        return (f1 - f0) / 2

    def is_trivial(self) -> bool:
        return all(f0 == 0 and f1 == 0 for f0, f1 in self.pairs.values())

    def q_w0_exponent(self) -> Fraction:
        """Exponent of q(w0) = prod over R_nr,+ of q_{alpha^vee}."""
        total = Fraction(0)
        for r in self.datum.positive_roots:
            f0, f1 = self.pairs[r.vec]
            total += f0
            if self.datum.doubled[r.vec]:
                total += f1 - f0
        return total

    def q_exponent_of(self, w: WeylElement) -> Fraction:
        """Exponent of q(w) = prod over inversions in R_nr,+ of q_{alpha^vee}."""
        total = Fraction(0)
        for r in self.datum.positive_roots:
            img = w.act_vec(r.vec)
            if self.datum.root_by_vec[img].height < 0:
                f0, f1 = self.pairs[r.vec]
                total += f0
                if self.datum.doubled[r.vec]:
                    total += f1 - f0
        return total

    def scaled(self, eps: Fraction) -> "LabelFunction":
        eps = Fraction(eps)
        return LabelFunction(
            self.datum,
            {v: (f0 * eps, f1 * eps) for v, (f0, f1) in self.pairs.items()})

    def restrict(self, sub_datum, vec_map) -> "LabelFunction":
        """Restriction to a parabolic datum; vec_map sends sub-root vectors
        to parent root vectors."""
        pairs = {}
        for r in sub_datum.roots:
            pairs[r.vec] = self.pairs[vec_map[r.vec]]
        return LabelFunction(sub_datum, pairs)

    def to_json(self) -> dict:
        if self.node_values is not None:
            return {"node_labels": self.node_values}
        return {"root_labels": {",".join(map(str, v)): [str(f0), str(f1)]
                                for v, (f0, f1) in sorted(self.pairs.items())}}


def q_of_w(labels: LabelFunction, w: WeylElement) -> Fraction:
    """Exponent of the monomial q(w)."""
    return labels.q_exponent_of(w)


def affine_node_class_keys(datum: RootDatum):
    """Conjugacy-class key of each affine Dynkin node (affine node first,
    then F0): nodes with equal keys must carry equal labels."""
    comps = datum.components()
    if len(comps) != 1:
        raise ValueError("irreducible datum required")
    orbits = LabelFunction._coroot_orbits(datum)
    theta_vee = datum.highest_coroot(comps[0])
    keys = [(orbits[theta_vee], 0)]
    for i in range(datum.n_simple):
        cor = datum.simple_coroots[i]
        parity = 1 if all(c % 2 == 0 for c in cor) else 0
        keys.append((orbits[cor], parity))
    return keys


def random_label_vector(datum: RootDatum, rng, choices=None):
    """A valid random label vector (one value per affine node, constant on
    conjugacy classes)."""
    from fractions import Fraction as _F
    if choices is None:
        choices = [_F(1), _F(2), _F(3), _F(1, 2), _F(3, 2), _F(5, 2)]
    keys = affine_node_class_keys(datum)
    assignment = {}
    for k in keys:
        if k not in assignment:
            assignment[k] = rng.choice(choices)
    return [assignment[k] for k in keys]


def affine_generator_exponents(datum: RootDatum, labels: LabelFunction):
    """Exponents of q(s_a) for the affine Coxeter generators, affine node
    first then F0, matching the node order of from_affine_nodes."""
    comps = datum.components()
    if len(comps) != 1:
        raise ValueError("irreducible datum required")
    theta_vee = datum.highest_coroot(comps[0])
    theta_root = next(r for r in datum.positive_roots
                      if r.coroot == theta_vee)
    out = [labels.f0(theta_root.vec)]
    for i in range(datum.n_simple):
        out.append(labels.f1(datum.simple_roots[i]))
    return out


# -- parabolic subsystems ----------------------------------------------------


@dataclass
class ParabolicClass:
    indices: tuple            # subset of simple-root indices (standard rep)
    roots: list               # parent Root objects of R_P
    sub_datum: RootDatum      # the quotient datum R_P = (X_P, Y_P, ...)
    y_basis: list             # rows: basis of Y_P in Y coordinates
    vec_map: dict             # sub root vec -> parent root vec
    orbit_size: int           # number of standard subsets conjugate to this one

    def embed_point_vectors(self, u_sub, r_sub):
        """Pull back a T_P point (u, r) to T along X -> X_P."""
        n = len(self.y_basis[0]) if self.y_basis else 0
        u = tuple(sum(Fraction(self.y_basis[j][i]) * u_sub[j]
                      for j in range(len(self.y_basis))) % 1 for i in range(n))
        r = tuple(sum(Fraction(self.y_basis[j][i]) * r_sub[j]
                      for j in range(len(self.y_basis))) for i in range(n))
        return u, r


def _int_rank_rows(rows) -> int:
    """Rank over Q of integer rows, by fraction-free elimination."""
    m = [[int(x) for x in row] for row in rows]
    if not m:
        return 0
    cols = len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c]
                m[i] = [lead * x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def parabolic_subsystem_roots(datum: RootDatum, indices) -> list:
    """R_P = QP intersected with R0 for a subset P of simple roots
    (cached on the datum)."""
    indices = tuple(sorted(indices))
    cache = getattr(datum, "_parroot_cache", None)
    if cache is None:
        cache = datum._parroot_cache = {}
    if indices in cache:
        return cache[indices]
    if not indices:
        cache[indices] = []
        return []
    span_rows = [list(datum.simple_roots[i]) for i in indices]
    rank = _int_rank_rows(span_rows)
    out = []
    for r in datum.roots:
        if _int_rank_rows(span_rows + [list(r.vec)]) == rank:
            out.append(r)
    cache[indices] = out
    return out


def parabolic_quotient(datum: RootDatum, indices) -> ParabolicClass:
    """The root datum R_P = (X_P, Y_P, R_P, R_P^vee, P) for a standard P."""
    indices = tuple(sorted(indices))
    roots = parabolic_subsystem_roots(datum, indices)
    if not indices:
        sub = RootDatum([], [], typename="empty", lattice="sub")
        sub.rank = 0
        return ParabolicClass(indices, [], sub, [], {}, 1)
    y_rows = saturate([list(datum.simple_coroots[i]) for i in indices],
                      datum.rank)
    k = len(y_rows)
    sub_simples = []
    sub_coroots = []
    for i in indices:
        sub_simples.append(tuple(
            sum(datum.simple_roots[i][t] * y_rows[j][t]
                for t in range(datum.rank)) for j in range(k)))
        sol = solve_unique(
            transpose([[Fraction(c) for c in row] for row in y_rows]),
            [Fraction(c) for c in datum.simple_coroots[i]])
        if sol is None or any(c.denominator != 1 for c in sol):
            raise RuntimeError("coroot not integral in the saturated basis")
        sub_coroots.append(tuple(int(c) for c in sol))
    sub = RootDatum(sub_simples, sub_coroots,
                    typename=f"{datum.typename}|{list(indices)}", lattice="sub")
    vec_map = {}
    for r in roots:
        sub_vec = tuple(sum(r.vec[t] * y_rows[j][t] for t in range(datum.rank))
                        for j in range(k))
        if sub_vec in sub.root_by_vec:
            vec_map[sub_vec] = r.vec
    if len(vec_map) != len(sub.roots):
        raise RuntimeError("parabolic quotient roots do not match")
    return ParabolicClass(indices, roots, sub, y_rows, vec_map, 1)


def root_permutations(datum: RootDatum):
    """For each Weyl element the permutation it induces on the sorted
    root list, as a numpy array (cached on the datum)."""
    import numpy as np
    cached = getattr(datum, "_rootperm_cache", None)
    if cached is not None:
        return cached
    index = {r.vec: k for k, r in enumerate(datum.roots)}
    perms = []
    for a in datum.weyl_matrices():
        perm = []
        for r in datum.roots:
            img = tuple(sum(a[i][j] * r.vec[j] for j in range(datum.rank))
                        for i in range(datum.rank))
            perm.append(index[img])
        perms.append(perm)
    cached = np.array(perms, dtype=np.int32)
    datum._rootperm_cache = cached
    return cached


def parabolic_classes(datum: RootDatum) -> list[ParabolicClass]:
    """Standard parabolic subsets up to W0-conjugacy (one representative
    per class, including the empty set and all of F0); cached."""
    cached = getattr(datum, "_parclass_cache", None)
    if cached is not None:
        return cached
    import numpy as np
    from itertools import combinations
    n = datum.n_simple
    perms = root_permutations(datum)
    index = {r.vec: k for k, r in enumerate(datum.roots)}
    subset_idx = {}
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            subset_idx[combo] = tuple(sorted(
                index[r.vec] for r in parabolic_subsystem_roots(datum, combo)))
    lookup = {}
    for combo, key in subset_idx.items():
        lookup.setdefault(key, set()).add(combo)
    classes = []
    assigned = {}
    for combo in sorted(subset_idx, key=lambda c: (len(c), c)):
        if combo in assigned:
            continue
        orbit = set()
        base = np.array(subset_idx[combo], dtype=np.int32)
        if len(base):
            images = np.sort(perms[:, base], axis=1)
            for g in range(len(perms)):
                orbit |= lookup.get(tuple(images[g]), set())
        else:
            orbit = {()}
        for member in orbit:
            assigned[member] = combo
        pc = parabolic_quotient(datum, combo)
        pc.orbit_size = len(orbit)
        classes.append(pc)
    datum._parclass_cache = classes
    return classes


def restrict_labels(labels: LabelFunction, pc: ParabolicClass) -> LabelFunction:
    if not pc.indices:
        return LabelFunction(pc.sub_datum, {})
    return labels.restrict(pc.sub_datum, pc.vec_map)


# -- serialization helpers -----------------------------------------------


def datum_labels_to_json(datum: RootDatum, labels: LabelFunction) -> str:
    return json.dumps({"datum": datum.to_json(), "labels": labels.to_json()},
                      indent=1, sort_keys=True)


def datum_labels_from_json(text: str):
    data = json.loads(text)
    datum = RootDatum.from_json(data["datum"])
    lab = data["labels"]
    if "node_labels" in lab:
        labels = LabelFunction.from_affine_nodes(
            datum, [Fraction(v) for v in lab["node_labels"]])
    else:
        pairs = {}
        for key, (f0, f1) in lab["root_labels"].items():
            vec = tuple(int(x) for x in key.split(","))
            pairs[vec] = (Fraction(f0), Fraction(f1))
        labels = LabelFunction(datum, pairs)
    return datum, labels
