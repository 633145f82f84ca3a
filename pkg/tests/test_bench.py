import io

from oncecount import bench
from oncecount.model import FrequencyKind


def test_linear_fit_exact():
    slope, icpt, r2 = bench.linear_fit([1, 2, 3], [3, 5, 7])
    assert abs(slope - 2) < 1e-9 and abs(icpt - 1) < 1e-9 and abs(r2 - 1) < 1e-12


def test_sweeps_shape():
    rows = bench.tau_sweep([10, 100], k=3, n=2000, episodes=2, repeats=1)
    assert [r.tau for r in rows] == [10, 100]
    for r in rows:
        assert r.events == 2000 and abs(r.throughput - r.events / r.wall_time) < 1e-6
    rows = bench.k_sweep([2, 4], n=2000, episodes=2, repeats=1)
    assert [r.k for r in rows] == [2, 4]
    rows = bench.n_sweep([500, 1000], episodes=1, repeats=1)
    assert [r.n for r in rows] == [500, 1000]
    rows = bench.selectivity_sweep(n=2000, repeats=1, mode=FrequencyKind.DISTINCT)
    sel = {r.note: r.selectivity for r in rows}
    assert sel["absent"] == 0 and sel["repeated"] > 1


def test_preparse_off_counts_the_same():
    a = bench.tau_sweep([20], k=3, n=1000, episodes=2, repeats=1, preparse=True)
    b = bench.tau_sweep([20], k=3, n=1000, episodes=2, repeats=1, preparse=False)
    assert a[0].mean_frequency == b[0].mean_frequency and a[0].peak_entries == b[0].peak_entries


def test_report_outputs():
    rep = bench.BenchReport("w", bench.tau_sweep([10], k=2, n=500, episodes=1, repeats=1))
    text = rep.to_csv()
    assert text.splitlines()[0].startswith("sweep,mode,n,k,tau")
    assert len(text.splitlines()) == 2
    buf = io.StringIO()
    rep.to_csv(buf)
    assert buf.getvalue() == text
    assert "events/s" in rep.to_table()


def test_prefix_episodes_nest():
    short = bench.prefix_episodes(10, 3, 4, 50, 7, seed=2)
    long = bench.prefix_episodes(10, 5, 4, 50, 7, seed=2)
    assert all(l.symbols[:3] == s.symbols for s, l in zip(short, long))
