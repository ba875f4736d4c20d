"""
Period matrices and the symplectic action
=========================================

Points of the Siegel upper half space are symmetric complex matrices with
positive-definite imaginary part.  Integer symplectic matrices act on them
by fractional linear transformations.
"""

import numpy as np

from thetalocus.siegel import PeriodMatrix, SiegelError, act, block_sum, is_block_diagonal, random_word, sample_generic

omega = sample_generic(3, 2024)
print(omega)
print("smallest eigenvalue of Im:", omega.min_imag_eigenvalue())

# Rejected inputs name the invariant they violate
try:
    PeriodMatrix([[1j, 0], [0, -1j]])
except SiegelError as exc:
    print("rejected:", exc)

# A random word in the generators, and its inverse undoing it
m = random_word(3, 6, 7)
image = act(m, omega)
back = act(m.inverse(), image)
print("word:", m.tolist())
print("round trip error:", np.max(np.abs(back.matrix - omega.matrix)))

# Block-diagonal points stay block-diagonal under block-diagonal words only
red = block_sum([sample_generic(2, 1), sample_generic(1, 2)])
print("red point is [2,1]:", is_block_diagonal(red, [2, 1]))
print("after a generic word:", is_block_diagonal(act(m, red), [2, 1], tol=1e-9))
