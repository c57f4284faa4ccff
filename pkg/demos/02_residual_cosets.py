"""
Enumerating residual cosets
===========================

A coset of a subtorus is residual when the pole-minus-zero count of the
inverse-square kernel equals its codimension.  The enumeration lifts
residual points of each parabolic quotient datum and dedupes orbits; the
rank-2 example below shows how the answer depends on the lattice.
"""

from heckeplan.residual import residual_cosets, residual_points
from heckeplan.rootdata import LabelFunction, RootDatum


def describe(tag, lattice):
    datum = RootDatum.from_type(tag, lattice)
    labels = LabelFunction.equal(datum)
    print(f"--- {tag}, X = {lattice} ---")
    for coset in residual_cosets(datum, labels):
        values = [coset.point.value_of(datum.simple_roots[i])
                  for i in range(datum.n_simple)]
        pretty = ", ".join(
            ("" if u == 0 else f"e^(2pi i {u}) ") + f"q^{r}"
            for u, r in values)
        print(f"dim {coset.dim}  support {list(coset.support)}  "
              f"index {coset.index}  |K_L| = {coset.k_l}  "
              f"simple values: {pretty}")


# with X = Q: two point orbits, two one-dimensional orbits, and the
# full torus
describe("B2", "Q")

# with X = P the torus is a double cover and a third point orbit appears,
# distinguished only by its unitary part
describe("B2", "P")

# the unitary parts of residual points are torsion; the split parts are
# half-integer powers of q
datum = RootDatum.from_type("G2", "Q")
labels = LabelFunction.equal(datum)
print("--- G2 residual points (canonical representatives) ---")
for p in residual_points(datum, labels):
    print("u =", p.u, " r =", p.r)
