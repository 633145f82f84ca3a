"""Per-episode OccMap: k hierarchical timestamp lists and an active layer.

Layer ``i`` (1-based in snapshots, 0-based in code) records timestamps of the
episode's i-th symbol, but only while every layer above it is non-empty.  A
timestamp reaching the bottom layer triggers validation, which either accepts
an occurrence or prunes entries that can no longer take part in one.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import NamedTuple, Sequence

from .model import Event, FrequencyKind, TimeConstrainedEpisode


class ValidationResult(NamedTuple):
    accepted: bool
    occurrence: tuple | None = None


REJECTED = ValidationResult(False, None)


class OccMap:
    __slots__ = ("episode", "mode", "tau", "k", "layers", "ell", "inserted", "peak",
                 "_size", "_positions", "_same_symbol", "_last_t", "_floor", "_distinct")

    def __init__(self, episode: TimeConstrainedEpisode,
                 mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED) -> None:
        self.episode = episode
        self.mode = mode
        self.tau = episode.tau
        self.k = episode.k
        self.layers: list[list[int]] = [[] for _ in range(self.k)]
        self.ell = 1
        self.inserted = 0
        self.peak = 0
        self._size = 0
        self._distinct = mode is FrequencyKind.DISTINCT
        positions: dict[int, list[int]] = {}
        for i, sym in enumerate(episode.symbols):
            positions.setdefault(sym.id, []).append(i)
        self._positions = {sid: tuple(p) for sid, p in positions.items()}
        # layer index -> every position sharing that layer's symbol
        self._same_symbol = [self._positions[sym.id] for sym in episode.symbols]
        self._last_t: int | None = None
        self._floor: int | None = None

    @classmethod
    def from_layers(cls, episode: TimeConstrainedEpisode, mode: FrequencyKind,
                    layers: Sequence[Sequence[int]]) -> "OccMap":
        """Build a map in a given state; used to replay traced states."""
        om = cls(episode, mode)
        if len(layers) != om.k:
            raise ValueError(f"expected {om.k} layers, got {len(layers)}")
        om.layers = [list(L) for L in layers]
        om._size = sum(len(L) for L in om.layers)
        om.peak = om._size
        stamps = [t for L in om.layers for t in L]
        om._last_t = max(stamps) if stamps else None
        om._update_ell()
        return om

    # -- state -----------------------------------------------------------

    @property
    def symbol_ids(self) -> frozenset:
        return frozenset(self._positions)

    def total_entries(self) -> int:
        return self._size

    def reset(self) -> None:
        for L in self.layers:
            L.clear()
        self.ell = 1
        self._size = 0
        self._last_t = None
        self._floor = None

    def snapshot(self) -> str:
        lines = []
        for i, (sym, L) in enumerate(zip(self.episode.symbols, self.layers), 1):
            body = " ".join(str(t) for t in L)
            lines.append(f"L{i}({sym.name}):" + (f" {body}" if body else ""))
        lines.append(f"ell={self.ell}")
        return "\n".join(lines)

    def _update_ell(self) -> None:
        for i, L in enumerate(self.layers):
            if not L:
                self.ell = i + 1
                return
        self.ell = self.k + 1

    # -- list update -----------------------------------------------------

    def list_update(self, event: Event) -> bool:
        """Append ``event`` to every active layer labelled with its symbol.

        Returns True when the bottom layer is non-empty afterwards, i.e. when
        a validator has to run.
        """
        pos = self._positions.get(event.symbol.id)
        t = event.timestamp
        last = self._last_t
        if last is not None and t < last:
            raise ValueError(f"timestamp {t} arrives after {last}")
        self._last_t = t
        if pos is None:
            return False
        if self._floor is not None and t <= self._floor:
            # same-timestamp event after an accepted occurrence ending at t
            return False
        layers = self.layers
        tau = self.tau
        ell = self.ell
        appended = trimmed = False
        for j in pos:
            if j >= ell:
                break
            L = layers[j]
            if L and L[-1] == t:
                continue
            L.append(t)
            self._size += 1
            self.inserted += 1
            appended = True
            if t - L[0] > tau:
                cut = bisect_left(L, t - tau)
                del L[:cut]
                self._size -= cut
                trimmed = True
        if not appended:
            return False
        if self._size > self.peak:
            self.peak = self._size
        if self._distinct:
            if trimmed:
                self._cascade_empty()
        elif trimmed or t == last:
            self.repair_monotonicity()
        if self.ell <= self.k and layers[self.ell - 1]:
            self._update_ell()
        return bool(layers[-1])

    def repair_monotonicity(self) -> None:
        """Drop layer heads that have no strictly earlier entry in the layer above.

        Such entries can never be chained into an occurrence: every candidate
        predecessor was already pruned or arrives later.
        """
        layers = self.layers
        for i in range(1, self.k):
            L = layers[i]
            if not L:
                continue
            above = layers[i - 1]
            if not above:
                self._size -= len(L)
                L.clear()
                continue
            if L[0] <= above[0]:
                cut = bisect_right(L, above[0])
                del L[:cut]
                self._size -= cut
        self._update_ell()

    def _cascade_empty(self) -> None:
        layers = self.layers
        for i in range(1, self.k):
            if not layers[i - 1] and layers[i]:
                self._size -= len(layers[i])
                layers[i].clear()
        self._update_ell()

    def _clear(self) -> None:
        for L in self.layers:
            L.clear()
        self._size = 0
        self.ell = 1

    def _drop_upto(self, i: int, t: int) -> None:
        L = self.layers[i]
        cut = bisect_right(L, t)
        if cut:
            del L[:cut]
            self._size -= cut

    # -- validation ------------------------------------------------------

    def validate(self) -> ValidationResult:
        if self._distinct:
            return self.validate_eliminate_plus()
        return self.validate_eliminate()

    def validate_eliminate(self) -> ValidationResult:
        """Non-overlapped validation: latest-start occurrence ending at the bottom entry."""
        layers = self.layers
        if not layers[-1]:
            raise RuntimeError("validation needs a non-empty bottom layer")
        k = self.k
        ts = [0] * k
        nxt = ts[-1] = layers[-1][0]
        for i in range(k - 2, -1, -1):
            L = layers[i]
            j = bisect_left(L, nxt) - 1
            if j < 0:
                raise RuntimeError(f"layer {i + 1} has no entry before {nxt}: "
                                   "minimum monotonicity violated")
            nxt = ts[i] = L[j]
        if ts[-1] - ts[0] <= self.tau:
            self._clear()
            self._floor = ts[-1]
            return ValidationResult(True, tuple(ts))
        for i in range(k):
            self._drop_upto(i, ts[i])
        self.repair_monotonicity()
        return REJECTED

    def validate_eliminate_plus(self) -> ValidationResult:
        """Distinct validation: earliest chain within tau of the bottom entry.

        On success the used event instances are removed from every layer with
        the same symbol.  On failure only entries that cannot belong to any
        later occurrence are dropped.
        """
        layers = self.layers
        if not layers[-1]:
            raise RuntimeError("validation needs a non-empty bottom layer")
        k = self.k
        end = layers[-1][0]
        first = layers[0]
        j = bisect_left(first, end - self.tau)
        ts = None
        if j < len(first):
            ts = [first[j]]
            for i in range(1, k):
                L = layers[i]
                j = bisect_right(L, ts[-1])
                if j == len(L):
                    ts = None
                    break
                ts.append(L[j])
            if k == 1:
                ts = [end]
        if ts is None:
            self._drop_upto(k - 1, end)
            horizon = end - self.tau - 1
            for i in range(k - 1):
                self._drop_upto(i, horizon)
            self._cascade_empty()
            return REJECTED
        for i in range(k):
            self._drop_upto(i, ts[i])
            L = layers[i]
            for y in self._same_symbol[i]:
                if y > i:
                    p = bisect_left(L, ts[y])
                    if p < len(L) and L[p] == ts[y]:
                        del L[p]
                        self._size -= 1
        self._cascade_empty()
        return ValidationResult(True, tuple(ts))

    def feed(self, event: Event) -> ValidationResult | None:
        """List update followed by validation when the bottom layer fills."""
        if self.list_update(event):
            return self.validate()
        return None
