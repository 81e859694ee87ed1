"""Build the height-10 database, analyze every pair and print the summary tables.

Run with ``python3 demos/02_pair_statistics.py [N]`` (N defaults to 10).
"""
import sys
import time

from sha5 import pipeline as pl

N = int(sys.argv[1]) if len(sys.argv) > 1 else 10

# %% Step 1: one descent record per curve
t0 = time.time()
records = pl.build_database(pl.curve_parameters(N))
print(f"{len(records)} curves in {time.time() - t0:.1f}s")

# %% Step 2: every unordered pair of distinct curves
t0 = time.time()
results = list(pl.analyze_pairs(records))
print(f"{len(results)} pairs in {time.time() - t0:.1f}s")

# %% a few individual verdicts
for r in results[:5]:
    verdict = "5 x square" if r.sha_nonsquare else "square"
    print(f"  ({r.u1},{r.v1}) x ({r.u2},{r.v2}):  L={r.L:+d}  G={r.G:+d}  -> #Sha is {verdict}")

# %% the tables
report = pl.stats(records, results)
for which in ("2", "4", "6", "crosstabs"):
    print(f"\n== table {which} ==")
    print(report.table(which), end="")
