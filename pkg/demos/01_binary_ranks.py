# %% [markdown]
# Real versus complex rank of binary forms.
#
# A binary form of degree d has a complex Waring rank given by Sylvester's
# apolar kernel. Its real rank can be bigger, and equals d exactly when all
# roots are real and distinct.

# %%
from fractions import Fraction

from wrl import BinaryForm, complex_rank_binary, real_rank_binary

# 2z^3 - 6z has three real roots (0 and +-sqrt 3), so its real rank is 3.
f = BinaryForm.from_coeffs([0, -6, 0, 2], weighted=False)
cert = real_rank_binary(f)
print("2z^3 - 6z   complex rank", complex_rank_binary(f)[0], " real rank", cert.rank, cert.status)

# %%
# x^3 + y^3 and z^4 + 1 are sums of two real powers, so both ranks agree.
for name, plain in [("x^3 + y^3", [1, 0, 0, 1]), ("z^4 + 1", [1, 0, 0, 0, 1])]:
    g = BinaryForm.from_coeffs([Fraction(c) for c in plain], weighted=False)
    c = real_rank_binary(g)
    print(f"{name:10s} complex {complex_rank_binary(g)[0]}  real [{c.lower}, {c.upper}]")

# %%
# The certificate carries a decomposition that reconstructs the form exactly.
dec = cert.witness_decomposition
print("witness", cert.witness_apolar, "at level", cert.witness_level)
print("reconstructs:", dec.expand() == f)
