from fractions import Fraction

import pytest

from oncecount.engine import Engine
from oncecount.model import Event, FrequencyKind, intern_symbol
from oncecount.rules import (Alert, IncidentRule, RuleError, RuleMonitor, bind_rule,
                             compose_symbol, load_rules, parse_populations)

CELL = "cell_out: low_voltage,bs_disconnect,carrier_wave @tau=3m threshold=10% of cells by district"
NE = "ne_sync: sync_path_fault,sync_fault @tau=5m threshold=5 by NE"


def ev(base, group, t):
    return Event(intern_symbol(f"{base}@{group}"), t)


def test_load_table_rows():
    cell, ne = load_rules("population cells district1=80\n" + CELL + "\n" + NE,
                          ticks_per_minute=60)
    assert cell.alarm_symbols == ("low_voltage", "bs_disconnect", "carrier_wave")
    assert cell.tau == 180 and cell.percent and cell.threshold == 10
    assert cell.group_key == "district" and cell.population == {"district1": 80}
    assert ne.tau == 300 and ne.threshold == 5 and not ne.percent and ne.group_key == "NE"
    assert ne.mode is FrequencyKind.NON_OVERLAPPED
    (d,) = load_rules("r: a,b @tau=2 threshold=1 by g mode=distinct")
    assert d.mode is FrequencyKind.DISTINCT and d.tau == 2


def test_load_errors():
    for text, line in [("r: a,b @tau=3 threshold=10% by g", 1),
                       ("# c\nnonsense", 2),
                       ("r: a,b @tau=0 threshold=1 by g", 1),
                       ("r: a,b @tau=1 threshold=0 by g", 1),
                       ("r: a,b @tau=1 threshold=1.5 by g", 1),
                       ("r: a@x,b @tau=1 threshold=1 by g", 1),
                       ("r: a,b @tau=1 threshold=1 by g mode=window", 1)]:
        with pytest.raises(RuleError) as e:
            load_rules(text)
        assert e.value.line == line
    with pytest.raises(RuleError):
        parse_populations("population cells d1=x")


def test_compose_symbol():
    s = compose_symbol("low voltage", "district7")
    assert s.name == "low voltage@district7"
    assert compose_symbol("low voltage", "district7") is s
    assert compose_symbol("low voltage", "district8") != s
    for base, g in (("a@b", "g"), ("a", "g,1"), ("", "g"), ("a", "")):
        with pytest.raises(ValueError):
            compose_symbol(base, g)


def test_bind_rule():
    (r,) = load_rules(NE)
    eng = Engine()
    hs = bind_rule(eng, r, ["d1", "d2", "d3"])
    assert len(hs) == 3 and len(set(hs.values())) == 3
    assert bind_rule(eng, r, []) == {}
    (r2,) = load_rules(NE.replace("ne_sync", "other"))
    assert bind_rule(eng, r2, ["d1"])["d1"] != hs["d1"]


def _rule(threshold, percent=False, pop=None):
    return IncidentRule("r", ("a", "b"), 5, threshold, percent, "g", "p" if pop else None,
                        pop or {})


def test_on_count_boundaries():
    m = RuleMonitor([_rule(5)], groups=["x"])
    h = m.handle("r", "x")
    assert all(m.on_count(h, n, n) is None for n in range(1, 5))
    assert m.on_count(h, 5, 9) == Alert("r", "x", 5, 9)
    assert m.on_count(h, 6, 10) is None
    m.reset("r", "x")
    assert m.on_count(h, 5, 11) is not None


def test_percentage_ceiling():
    r = _rule(Fraction(10), True, {"x": 80, "y": 41})
    assert r.required_count("x") == 8 and r.required_count("y") == 5
    assert r.required_count("z") is None
    assert _rule(Fraction(1), True, {"x": 3}).required_count("x") == 1


def test_monitor_lazy_groups_and_isolation():
    (r,) = load_rules("r: a,b @tau=5 threshold=2 by g")
    m = RuleMonitor([r])
    stream = [ev("a", "d1", 1), ev("b", "d1", 2), ev("a", "d2", 3), ev("a", "d1", 4),
              ev("b", "d1", 5), ev("b", "d2", 6), Event(intern_symbol("noise"), 7)]
    alerts = m.run(stream)
    assert [str(a) for a in alerts] == ["ALERT r d1 count=2 t=5"]
    assert m.counts() == {("r", "d1"): 2, ("r", "d2"): 1}


def test_monitor_no_matches():
    (r,) = load_rules(NE)
    m = RuleMonitor([r], groups=["n1"])
    assert m.run([Event(intern_symbol("x"), 1)]) == []
    assert m.counts() == {("ne_sync", "n1"): 0}


def test_unknown_population_group_warns_once(caplog):
    (r,) = load_rules("population cells d1=10\n" + CELL)
    m = RuleMonitor([r])
    m.run([ev("low_voltage", "d9", 1), ev("low_voltage", "d9", 2)])
    assert sum("d9" in rec.getMessage() for rec in caplog.records) == 1
    assert ("cell_out", "d9") not in m.counts()
