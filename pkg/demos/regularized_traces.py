# coding: utf-8

# # Regularized traces of focal spectra
#
# The eigenvalues 1/(n l - t) of a family of parallel hyperplanes are not
# summable, but pairing the k-th positive value with the k-th negative value
# gives a convergent sum. For one family this sum is a cotangent, and the
# symmetric truncation error decays like 1/N.

# In[1]:

import math

import numpy as np

from radialweyl.radialop import FocalData, FocalEntry
from radialweyl.regtrace import EigenSequence, focal_trace_gap, parallel_trace_function, reg_trace


# The harmonic sequence +-1/k has trace exactly zero at every truncation.

# In[2]:

harmonic = EigenSequence.from_terms(lambda k: 1 / k, lambda k: -1 / k)
print(reg_trace(harmonic, 1000))


# Moving to a parallel manifold at distance z turns the eigenvalues into
# 1/(k - z). The regularized trace is a partial-fraction series with a known sum.

# In[3]:

for z in (0.1, 0.3, 0.5):
    r = parallel_trace_function(harmonic, z, 10**5)
    print(f"z={z}  trace={r.value:.8f}  closed form={1 / z - math.pi / math.tan(math.pi * z):.8f}  bound={r.tail_bound:.1e}")


# Two transverse families in the plane. Compare the summed traces with
# the closed-form pairing and watch the gap shrink with N.

# In[4]:

fd = FocalData(
    2,
    (
        FocalEntry((1.0, 0.0), 0.7, 2, 1, (1, 0)),
        FocalEntry((0.6, 0.8), 1.3, 1, 3, (0, 1)),
    ),
)
q, xi = np.array([0.21, -0.4]), np.array([0.5, 1.0])
for n in (10**3, 10**4, 10**5):
    out = focal_trace_gap(fd, q, xi, n)
    print(f"N={n:>6}  closed={out['closed_form']:.8f}  sum={out['truncated_sum']:.8f}  gap={out['abs_gap']:.2e}")
