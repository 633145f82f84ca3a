"""
Throughput, scalability and memory
==================================

Small versions of the benchmark sweeps.  ``oncecount bench`` runs the full
ones and writes CSV.
"""

from oncecount import bench

report = bench.BenchReport("demo: uniform stream, sigma=20")
report.rows += bench.tau_sweep([10, 100, 1000], k=5, n=50_000, episodes=3, repeats=3)
report.rows += bench.k_sweep([3, 5, 7, 9, 11], tau=100, n=50_000, episodes=5)
report.rows += bench.n_sweep([50_000, 100_000, 150_000, 200_000], episodes=1, repeats=3)
print(report.to_table())

n_rows = [r for r in report.rows if r.sweep == "n"]
slope, _, r2 = bench.linear_fit([r.n for r in n_rows], [r.wall_time for r in n_rows])
print(f"{slope * 1e6:.2f} us per event, R^2 = {r2:.4f}")
