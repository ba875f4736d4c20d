"""
Exact counts and degree bookkeeping
===================================

Component counts, Betti numbers of the configuration space of 2g+2 points,
and the support of a nerve spectral sequence with its Gysin consequences.
"""

from thetalocus import census

for g in range(2, 7):
    print(f"g={g}: components {census.component_count(g)}, b_1 = {census.moduli_betti(g)}, "
          f"closed form {census.moduli_betti_closed_form(g)}")

print("Poincare polynomial g=3:", census.poincare_polynomial(3))

data = census.boundary_configuration()
table = census.nerve_e1(data)
deg = census.supported_degrees(table)
print("E1 support:", sorted(table.support()))
print("total degrees:", sorted(deg.degrees), "-", deg.degeneration)

gysin = census.gysin_support(data.ambient_dim, deg.degrees)
for k, verdict in gysin.items():
    print(f"  H_{k}: {verdict}")

# A configuration where a d_1 can be nonzero
other = census.supported_degrees(census.nerve_e1(census.NerveInput(((2,), (2,)))))
print("second configuration:", other.degeneration, other.differential_pairs)
