# %% [markdown]
# Building binary forms of maximal real rank d.
#
# Start from c(z - i)^d + conj, a real form with a conjugate pair as its
# decomposition, then add small real powers until every root is real.
# Sturm sequences certify the root count exactly.

# %%
from wrl import GaussianRational, real_rank_binary, witness_rank_d

for d in (3, 4, 6, 9):
    w = witness_rank_d(d, GaussianRational(2, -1))
    cert = real_rank_binary(w.form)
    print(f"d={d}: {w.real_roots} real roots after {w.halvings} halvings, eps={w.eps}, real rank {cert.rank}")

# %%
# Extra perturbation slots (coefficient, point) shift the form before the check.
w = witness_rank_d(5, GaussianRational(1), [(GaussianRational(1), GaussianRational(3))])
print(w.form.plain_coeffs, "->", w.real_roots, "real roots")
