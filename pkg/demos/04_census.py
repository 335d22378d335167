# %% [markdown]
# A small typical-rank census.
#
# Every type (e, a) with e + 2a = b is sampled; ranks that appear in at least
# 5% of resolved samples are reported as typical. Runs are seeded and replayable.

# %%
import tempfile

from wrl.census import CensusSpec, run_census, summary_rows, write_results, CSV_HEADER

spec = CensusSpec(m=2, d=6, b=3, samples_per_type=5, seed=7)
records, summary = run_census(spec)
print(",".join(CSV_HEADER))
for row in summary_rows(summary):
    print(",".join(map(str, row)))
print("typical ranks:", summary["typical"])

# %%
with tempfile.TemporaryDirectory() as tmp:
    paths = write_results(records, summary, tmp, spec.tag)
    print("wrote", [p.name for p in paths])
