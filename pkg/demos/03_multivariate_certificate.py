# %% [markdown]
# Certified ranks of forms in the real span of a point configuration.
#
# Pick e real points and a conjugate pairs in P^m, take a generic real form
# in the span of their d-th powers, and certify its real rank a*d + e. Each
# pair line carries a binary piece of rank d; real points cost one each.

# %%
from wrl import certified_rank_multi, sample_configuration, sample_in_span
from wrl.veronese import border_rank_lower

m, d = 2, 7
A = sample_configuration(m, e=2, a=1, rng_seed=11)
print("real points:", [p.to_json() for p in A.reals])
print("pairs:      ", [p.to_json() for p in A.pairs])

# %%
s = sample_in_span(A, d, rng_seed=12)
cert = certified_rank_multi(s.form, A)
print("catalecticant lower bound", border_rank_lower(s.form)[0])
print("certified rank", cert.rank, "via", cert.theorem, cert.status)
print("checks", cert.checks)
