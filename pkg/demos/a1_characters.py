# coding: utf-8

# # Characters of SU(2) as radial eigenfunctions
#
# On the maximal torus of SU(2) the radial part of the Laplacian acts on
# Weyl-invariant trigonometric polynomials. With root multiplicity 2 the
# irreducible characters chi_n are eigenfunctions. Here we build the operator,
# solve it on a truncated basis and compare with the characters computed
# independently from Freudenthal's formula.

# In[1]:

import math

import numpy as np

from radialweyl import build_root_system
from radialweyl.charoracle import HighestWeight, check_eigen, weyl_character
from radialweyl.radialop import RadialOperator, assemble_matrix, eigenfunctions, group_case_focal

rs = build_root_system("A1")
op = RadialOperator(rs, group_case_focal(rs, 2))


# The matrix lives on dominant weights up to a chosen top weight.
# Weights are written in doubled coordinates, so (20,) means 10 times the
# fundamental weight.

# In[2]:

m = assemble_matrix(op, (20,))
print(m.size, "basis weights:", m.basis)


# Each character should come out as an eigenvector. The eigenvalue grows
# like n(n+2), the Casimir of the spin n/2 representation.

# In[3]:

for n in range(6):
    ok, lam, res = check_eigen(m, weyl_character(rs, HighestWeight((n,))))
    print(f"n={n}  eigenvalue={lam.real:12.6f}  ratio to n(n+2)={lam.real / max(n * (n + 2), 1):.9f}  residual={res:.1e}")

print("2 pi^2 =", 2 * math.pi**2)


# With multiplicity 1 the same polynomials are no longer eigenfunctions,
# but the triangular solve still produces a full eigenbasis.

# In[4]:

op1 = RadialOperator(rs, group_case_focal(rs, 1))
m1 = assemble_matrix(op1, (8,))
ok, lam, res = check_eigen(m1, weyl_character(rs, HighestWeight((2,))), 1e-8)
print("chi_2 at multiplicity 1 is an eigenfunction:", ok)
for lam, f in eigenfunctions(m1):
    print(f"{lam:10.4f}", {w: round(abs(a), 4) for w, a in f.coeffs.items() if w[0] >= 0})
