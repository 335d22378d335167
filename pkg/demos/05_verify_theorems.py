# %% [markdown]
# Reproducing predicted typical-rank sets.
#
# verify_theorem runs every stratum and compares the certified ranks with the
# predicted set. It also runs the second-secant classification for b = 2.

# %%
from wrl import verify_theorem

for th, m, d in [("w2", 2, 6), ("w3", 2, 6), ("w4", 3, 8)]:
    r = verify_theorem(th, m, d, samples=4, seed=1)
    print(f"{th} m={m} d={d}: expected {r.expected} observed {r.observed} passed={r.passed}")

# %%
r = verify_theorem("u2", 1, 7, 3, samples=5, seed=2)
print("u2 d=7 b=3:", r.passed, r.details["summary"]["types"])
