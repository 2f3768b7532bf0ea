# coding: utf-8

# # Real generators for SU(3) and their level sets
#
# For SU(3) the invariant polynomials are generated by the two fundamental
# characters, which are complex conjugates of each other. Taking real and
# imaginary parts gives two real generators psi1, psi2. We compute them from
# the operator and plot the image of the torus under (psi1, psi2), the
# familiar curved triangle (deltoid) region.

# In[1]:

import numpy as np

from radialweyl import build_root_system
from radialweyl.fourier import evaluate
from radialweyl.radialop import RadialOperator, generators, group_case_focal

rs = build_root_system("A2")
op = RadialOperator(rs, group_case_focal(rs, 2))
psi1, psi2 = generators(op, 2)
print("psi1 terms:", len(psi1), " psi2 terms:", len(psi2))


# Evaluate on a grid of the coroot parallelepiped.

# In[2]:

s = np.linspace(0, 1, 121)
x = np.array([(a, b) for a in s for b in s])
u, v = evaluate(psi1, x).real, evaluate(psi2, x).real
print("psi1 range", u.min().round(4), u.max().round(4))
print("psi2 range", v.min().round(4), v.max().round(4))


# At the identity both generators take the value of the dimension and zero.

# In[3]:

print(evaluate(psi1, np.zeros(2)), evaluate(psi2, np.zeros(2)))


# Optional picture; skipped if matplotlib is not installed.

# In[4]:

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(u, v, s=0.5)
    ax.set_xlabel("psi1")
    ax.set_ylabel("psi2")
    fig.savefig("a2_generators.png", dpi=120)
    print("wrote a2_generators.png")
except ImportError:
    pass
