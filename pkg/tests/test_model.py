import threading

import pytest
from hypothesis import given, strategies as st

from oncecount.model import (Event, EventBatch, FrequencyKind, SymbolTable, are_distinct,
                             are_nonoverlapped, intern_symbol, is_valid_occurrence, make_batch,
                             make_episode, parse_episode)

A, B, C = (intern_symbol(x) for x in "ABC")


def test_interning_is_stable_and_injective():
    t = SymbolTable()
    assert t.intern("x") is t.intern("x")
    assert t.intern("x") != t.intern("y")
    assert t.lookup(t.intern("y").id).name == "y"
    with pytest.raises(ValueError):
        t.intern("")


def test_interning_under_threads():
    t = SymbolTable()
    names = [f"n{i % 50}" for i in range(2000)]
    out = []

    def work(chunk):
        out.extend(t.intern(n) for n in chunk)

    threads = [threading.Thread(target=work, args=(names[i::4],)) for i in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(t) == 50
    assert len({s.id for s in out}) == 50


def test_make_episode_forms():
    e = make_episode("AAB", 3)
    assert e.symbols == (A, A, B) and e.k == 3 and str(e) == "A,A,B@tau=3"
    assert make_episode(["A"], 1).k == 1
    for bad in (0, -1, 1.5, True):
        with pytest.raises(ValueError):
            make_episode("AB", bad)
    with pytest.raises(ValueError):
        make_episode([], 3)


def test_parse_episode():
    assert parse_episode("A,A,B@tau=3") == make_episode("AAB", 3)
    assert parse_episode(" low voltage , x @ tau = 4").symbols[0].name == "low voltage"
    assert parse_episode("A,B@tau=3m", ticks_per_minute=60).tau == 180
    assert parse_episode("A@tau=1h", ticks_per_minute=2).tau == 120
    for bad in ("A,B", "A,,B@tau=3", "@tau=3", "A@tau=0", "A@tau=x"):
        with pytest.raises(ValueError):
            parse_episode(bad)
    with pytest.raises(ValueError):
        parse_episode("A@tau=3m")


def test_frequency_kind_parse():
    assert FrequencyKind.parse("non-overlapped") is FrequencyKind.NON_OVERLAPPED
    assert FrequencyKind.parse("Distinct") is FrequencyKind.DISTINCT
    with pytest.raises(ValueError):
        FrequencyKind.parse("window")


def test_batch():
    b = make_batch(4, [B, A])
    assert b.events() == [Event(A, 4), Event(B, 4)]
    with pytest.raises(ValueError):
        make_batch(1, [])


def test_valid_occurrence():
    s = [Event(A, 1), Event(A, 2), Event(B, 3)]
    e = make_episode("AAB", 3)
    assert is_valid_occurrence(e, s, (1, 2, 3))
    assert not is_valid_occurrence(e, s, (2, 2, 3))
    assert not is_valid_occurrence(make_episode("AAB", 1), s, (1, 2, 3))
    assert not is_valid_occurrence(e, s, (1, 3, 3))
    assert is_valid_occurrence(make_episode("AB", 1), [make_batch(1, [A, C]), Event(B, 2)], (1, 2))
    with pytest.raises(ValueError):
        is_valid_occurrence(e, s, (1, 3))


def test_relations_examples():
    e = make_episode("AAB", 9)
    # distinct pair from the definitional example
    assert are_distinct(make_episode("AAB", 4), (1, 2, 5), (3, 4, 6))
    assert not are_nonoverlapped((1, 2, 5), (3, 4, 6))
    assert are_nonoverlapped((1, 2, 3), (6, 7, 8))
    assert not are_nonoverlapped((1, 2, 3), (3, 4, 5))
    assert are_distinct(e, (1, 3, 9), (5, 7, 10))
    # (A,3) used at position 2 then position 1 is still a shared event instance
    assert not are_distinct(e, (1, 3, 9), (3, 5, 10))


occ = st.lists(st.integers(0, 30), min_size=3, max_size=3, unique=True).map(sorted).map(tuple)


@given(occ, occ)
def test_relations_symmetric(o1, o2):
    e = make_episode("ABA", 30)
    assert are_nonoverlapped(o1, o2) == are_nonoverlapped(o2, o1)
    assert are_distinct(e, o1, o2) == are_distinct(e, o2, o1)
    assert not are_nonoverlapped(o1, o1)
    assert not are_distinct(e, o1, o1)
    if are_nonoverlapped(o1, o2):
        assert are_distinct(e, o1, o2)
