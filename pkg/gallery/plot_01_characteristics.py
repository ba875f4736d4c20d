"""
Theta characteristics
=====================

A characteristic of genus g is a pair of bit vectors.  Its parity is the
F2 dot product of the two halves, and direct sums add parities.
"""

from thetalocus.charalg import Characteristic, direct_sum, enumerate_characteristics, split

# Counting by parity in small genus
for g in (1, 2, 3):
    even = enumerate_characteristics(g, "even")
    odd = enumerate_characteristics(g, "odd")
    print(f"genus {g}: {len(even)} even, {len(odd)} odd")

# Parsing and printing use the compact [top|bottom] form
delta = Characteristic.parse("[110|100]")
print(delta, delta.parity)

# Splitting along a [2,1] block shape and gluing back
a, b = split(delta, [2, 1])
print(a.compact(), a.parity, "+", b.compact(), b.parity)
assert direct_sum([a, b]) == delta

# Even genus-3 characteristics whose [2,1] factors are both odd
odd_odd = [d for d in enumerate_characteristics(3, "even")
           if all(p.parity == "odd" for p in split(d, [2, 1]))]
print(len(odd_odd), "even characteristics split as odd + odd:", [d.compact() for d in odd_odd])
