import io
from fractions import Fraction

import numpy as np
import pytest

from oncecount.engine import Engine, EngineMetrics
from oncecount.model import Event, EventBatch, intern_symbol, make_episode
from oncecount.streamio import (GeneratorSpec, ParseError, StreamError, StreamSource, dumps,
                                format_event, generate_uniform, measure_selectivity,
                                parse_event_line, read_stream, write_stream)

from conftest import DATA

A, B = intern_symbol("A"), intern_symbol("B")


def test_parse_event_line():
    assert parse_event_line("3,B") == Event(B, 3)
    assert parse_event_line("2,A|B") == EventBatch(2, frozenset({A, B}))
    for bad in ("x,B", "3", "3,", "-1,A", "3,A||B"):
        with pytest.raises(ParseError):
            parse_event_line(bad)


def test_format_round_trip():
    items = [Event(A, 1), EventBatch(2, frozenset({B, A}))]
    assert dumps(items) == "1,A\n2,A|B\n"
    assert list(read_stream(io.StringIO(dumps(items)))) == items
    assert format_event(Event(B, 7)) == "7,B"


def test_read_example2_file():
    got = list(read_stream(StreamSource(DATA / "example2.events")))
    assert len(got) == 15 and got[0] == Event(A, 1) and got[-1] == Event(B, 15)
    assert list(read_stream(str(DATA / "example2.events"))) == got


def test_read_errors():
    assert list(read_stream(io.StringIO(""))) == []
    with pytest.raises(StreamError) as e:
        list(read_stream(io.StringIO("5,A\n4,B\n")))
    assert e.value.record == 2
    with pytest.raises(ParseError) as e:
        list(read_stream(io.StringIO("# hdr\n1,A\n\nbad\n")))
    assert e.value.line == 4
    # lazy: the good prefix comes out before the error
    it = read_stream(io.StringIO("1,A\n0,A\n"))
    assert next(it) == Event(A, 1)


def test_read_in_memory_list():
    items = [Event(A, 1), Event(B, 1), Event(A, 2)]
    assert list(read_stream(items)) == items
    with pytest.raises(StreamError):
        list(read_stream([Event(A, 2), Event(A, 1)]))


def test_write_header(tmp_path):
    p = tmp_path / "x.events"
    write_stream([], p, header="n=0")
    assert p.read_text() == "# n=0\n"


def test_generate_uniform():
    assert generate_uniform(GeneratorSpec(4, 0)) == []
    a = generate_uniform(GeneratorSpec(4, 500, seed=3, tick_interval=2))
    assert a == generate_uniform(GeneratorSpec(4, 500, seed=3, tick_interval=2))
    assert a != generate_uniform(GeneratorSpec(4, 500, seed=4, tick_interval=2))
    assert [e.timestamp for e in a[:3]] == [0, 2, 4]
    big = generate_uniform(GeneratorSpec(622, 91021))
    assert len(big) == 91021 and len({e.symbol for e in big}) == 622
    for bad in ((0, 1), (1, -1), (1, 1, 0, 0)):
        with pytest.raises(ValueError):
            GeneratorSpec(*bad)


def test_generate_uniform_frequencies():
    n, sigma = 20_000, 5
    ev = generate_uniform(GeneratorSpec(sigma, n, seed=11))
    counts = np.bincount([int(e.symbol.name[1:]) for e in ev], minlength=sigma)
    sd = np.sqrt(n * (1 / sigma) * (1 - 1 / sigma))
    assert np.all(np.abs(counts - n / sigma) <= 3 * sd)


def test_selectivity():
    assert measure_selectivity(EngineMetrics(events_processed=5, matches=0)) == 0
    eng = Engine()
    eng.register(make_episode(["never_seen"], 3))
    eng.run([Event(A, 1), Event(A, 2)])
    assert measure_selectivity(eng.metrics()) == 0
    with pytest.raises(ValueError):
        measure_selectivity(EngineMetrics())
    # every A lands in two active layers of <A,A,absent>
    eng = Engine()
    eng.register(make_episode(["A", "A", "absent"], 1000))
    eng.run([Event(A, t) for t in range(1, 101)])
    assert measure_selectivity(eng.metrics()) == Fraction(199, 100)
